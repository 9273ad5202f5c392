#include <atlas/search.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>

namespace atlas {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

FacetIndex::FacetIndex(const Catalog& catalog) : taxonomy_(&catalog.taxonomy) {
    entries_.reserve(catalog.datasets.size());
    for (const auto& [id, record] : catalog.datasets) {
        std::set<NodeId> direct(record.classifications.begin(), record.classifications.end());
        entries_.push_back({id, taxonomy_->closure(direct), lower(record.title), lower(record.description)});
    }
}

void FacetIndex::check(const FacetSelection& selection) const {
    for (const auto& [dimension, terms] : selection.terms) {
        for (const NodeId& t : terms) {
            const Term* term = taxonomy_ ? taxonomy_->find(t) : nullptr;
            if (term == nullptr) throw Error(ErrorCode::UnknownTerm, "unknown term '" + t.str() + "'");
            if (term->dimension != dimension) {
                throw Error(ErrorCode::WrongDimension, "term '" + t.str() + "' belongs to " +
                                                           std::string(to_string(term->dimension)) + ", not " +
                                                           std::string(to_string(dimension)));
            }
        }
    }
}

bool FacetIndex::matches_text(const Entry& entry, const std::optional<std::string>& text) const {
    if (!text || text->empty()) return true;
    const std::string needle = lower(*text);
    return entry.title.find(needle) != std::string::npos ||
           entry.description.find(needle) != std::string::npos;
}

bool FacetIndex::matches_dimension(const Entry& entry, const std::set<NodeId>& selected) const {
    if (selected.empty()) return true;
    return std::any_of(selected.begin(), selected.end(),
                       [&](const NodeId& t) { return entry.closure.count(t) != 0; });
}

ResultSet FacetIndex::apply(const FacetSelection& selection) const {
    check(selection);
    ResultSet out;
    for (const Entry& e : entries_) {
        if (!matches_text(e, selection.text)) continue;
        bool ok = std::all_of(selection.terms.begin(), selection.terms.end(),
                              [&](const auto& kv) { return matches_dimension(e, kv.second); });
        if (ok) out.ids.push_back(e.id);
    }
    out.total = out.ids.size();
    return out;
}

FacetCounts FacetIndex::counts(const FacetSelection& selection) const {
    check(selection);
    FacetCounts out;
    if (taxonomy_ == nullptr) return out;
    for (const Term& t : taxonomy_->terms()) out[t.id] = 0;

    for (const Entry& e : entries_) {
        if (!matches_text(e, selection.text)) continue;
        // Dimensions whose own selection this entry fails. With two or more
        // failures it cannot count anywhere; with exactly one it counts only
        // toward that dimension's terms.
        std::vector<Dimension> failed;
        for (const auto& [dimension, terms] : selection.terms) {
            if (!matches_dimension(e, terms)) failed.push_back(dimension);
        }
        if (failed.size() > 1) continue;
        for (const NodeId& t : e.closure) {
            const Dimension d = taxonomy_->term(t).dimension;
            if (failed.empty() || failed.front() == d) ++out[t];
        }
    }
    return out;
}

ResultSet apply_facets(const Catalog& catalog, const FacetSelection& selection) {
    return FacetIndex(catalog).apply(selection);
}

FacetCounts facet_counts(const Catalog& catalog, const FacetSelection& selection) {
    return FacetIndex(catalog).counts(selection);
}

nlohmann::json facet_counts_to_json(const FacetCounts& counts) {
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [id, n] : counts) c[id.str()] = n;
    return {{"counts", std::move(c)}};
}

nlohmann::json to_json(const ResultSet& results) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& id : results.ids) ids.push_back(id.str());
    return {{"total", results.total}, {"ids", std::move(ids)}};
}

FacetSelection parse_facet_param(std::string_view param) {
    FacetSelection selection;
    while (!param.empty()) {
        const auto comma = param.find(',');
        std::string_view item = param.substr(0, comma);
        param = comma == std::string_view::npos ? std::string_view{} : param.substr(comma + 1);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw Error(ErrorCode::BadRequest, "facet '" + std::string(item) + "' is not <dimension>:<term>");
        }
        auto dimension = dimension_from_string(item.substr(0, colon));
        if (!dimension) {
            throw Error(ErrorCode::BadRequest, "unknown dimension '" + std::string(item.substr(0, colon)) + "'");
        }
        std::string term(item.substr(colon + 1));
        if (!NodeId::is_valid(term)) {
            throw Error(ErrorCode::UnknownTerm, "unknown term '" + term + "'");
        }
        selection.terms[*dimension].insert(NodeId(term));
    }
    return selection;
}

}  // namespace atlas
