#include <atlas/taxonomy.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace atlas {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(Dimension dimension) noexcept {
    switch (dimension) {
        case Dimension::Domain: return "domain";
        case Dimension::Lifecycle: return "lifecycle";
        case Dimension::DataType: return "datatype";
        case Dimension::Format: return "format";
    }
    return "unknown";
}

std::optional<Dimension> dimension_from_string(std::string_view name) noexcept {
    for (auto d : kAllDimensions) {
        if (to_string(d) == name) return d;
    }
    return std::nullopt;
}

Taxonomy::Taxonomy(std::vector<Term> terms) {
    // Stable partition by dimension so iteration follows enum order, then
    // declaration order.
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.dimension < b.dimension; });
    terms_ = std::move(terms);

    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const Term& t = terms_[i];
        if (!NodeId::is_valid(t.id.str())) {
            throw Error(ErrorCode::InvalidSlug, "invalid term id '" + t.id.str() + "'");
        }
        if (!index_.emplace(t.id, i).second) {
            throw Error(ErrorCode::DuplicateTermId, "duplicate term id '" + t.id.str() + "'");
        }
    }
    for (const Term& t : terms_) {
        if (!t.parent) continue;
        const Term* parent = find(*t.parent);
        if (parent == nullptr) {
            throw Error(ErrorCode::UnknownParent,
                        "term '" + t.id.str() + "' names unknown parent '" + t.parent->str() + "'");
        }
        if (parent->dimension != t.dimension) {
            throw Error(ErrorCode::CrossDimensionParent,
                        "term '" + t.id.str() + "' (" + std::string(to_string(t.dimension)) +
                            ") has parent '" + parent->id.str() + "' in " +
                            std::string(to_string(parent->dimension)));
        }
    }
    // Walk each parent chain; revisiting a node on the current walk is a cycle.
    for (const Term& t : terms_) {
        std::vector<NodeId> path{t.id};
        const Term* cur = &t;
        while (cur->parent) {
            const NodeId& next = *cur->parent;
            auto seen = std::find(path.begin(), path.end(), next);
            if (seen != path.end()) {
                std::string cycle;
                for (auto it = seen; it != path.end(); ++it) cycle += it->str() + " -> ";
                cycle += next.str();
                throw Error(ErrorCode::CycleDetected, "parent cycle: " + cycle);
            }
            path.push_back(next);
            cur = find(next);
        }
    }
}

Taxonomy Taxonomy::from_json(const nlohmann::json& document) {
    if (!document.is_object() || !document.contains("dimensions") ||
        !document.at("dimensions").is_object()) {
        throw Error(ErrorCode::ParseError, "taxonomy: expected an object with a \"dimensions\" object");
    }
    const auto& dims = document.at("dimensions");
    for (const auto& [key, _] : dims.items()) {
        if (!dimension_from_string(key)) {
            throw Error(ErrorCode::ParseError, "taxonomy: unknown dimension key '" + key + "'");
        }
    }
    std::vector<Term> terms;
    for (auto dimension : kAllDimensions) {
        std::string key(to_string(dimension));
        if (!dims.contains(key)) {
            throw Error(ErrorCode::ParseError, "taxonomy: missing dimension '" + key + "'");
        }
        const auto& list = dims.at(key);
        if (!list.is_array()) {
            throw Error(ErrorCode::ParseError, "taxonomy: dimension '" + key + "' must be an array");
        }
        for (const auto& entry : list) {
            if (!entry.is_object() || !entry.contains("id") || !entry.at("id").is_string() ||
                !entry.contains("label") || !entry.at("label").is_string()) {
                throw Error(ErrorCode::ParseError,
                            "taxonomy: each term in '" + key + "' needs string id and label");
            }
            Term term;
            term.id = NodeId(entry.at("id").get<std::string>());
            term.dimension = dimension;
            term.label = entry.at("label").get<std::string>();
            if (term.label.empty()) {
                throw Error(ErrorCode::ParseError, "taxonomy: term '" + term.id.str() + "' has an empty label");
            }
            if (entry.contains("parent") && !entry.at("parent").is_null()) {
                if (!entry.at("parent").is_string()) {
                    throw Error(ErrorCode::ParseError,
                                "taxonomy: parent of '" + term.id.str() + "' must be a string");
                }
                term.parent = NodeId(entry.at("parent").get<std::string>());
            }
            terms.push_back(std::move(term));
        }
    }
    return Taxonomy(std::move(terms));
}

Taxonomy Taxonomy::parse(std::string_view text) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("taxonomy: ") + e.what());
    }
    return from_json(document);
}

Taxonomy Taxonomy::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

nlohmann::json Taxonomy::to_json() const {
    nlohmann::json dims = nlohmann::json::object();
    for (auto dimension : kAllDimensions) dims[std::string(to_string(dimension))] = nlohmann::json::array();
    for (const Term& t : terms_) {
        nlohmann::json entry = {{"id", t.id.str()}, {"label", t.label}};
        if (t.parent) entry["parent"] = t.parent->str();
        dims[std::string(to_string(t.dimension))].push_back(std::move(entry));
    }
    return {{"dimensions", std::move(dims)}};
}

const Term* Taxonomy::find(const NodeId& id) const noexcept {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &terms_[it->second];
}

const Term& Taxonomy::term(const NodeId& id) const {
    const Term* t = find(id);
    if (t == nullptr) throw Error(ErrorCode::UnknownTerm, "unknown term '" + id.str() + "'");
    return *t;
}

std::vector<NodeId> Taxonomy::terms_in(Dimension dimension) const {
    std::vector<NodeId> out;
    for (const Term& t : terms_) {
        if (t.dimension == dimension) out.push_back(t.id);
    }
    return out;
}

std::vector<NodeId> Taxonomy::roots(Dimension dimension) const {
    std::vector<NodeId> out;
    for (const Term& t : terms_) {
        if (t.dimension == dimension && !t.parent) out.push_back(t.id);
    }
    return out;
}

std::vector<NodeId> Taxonomy::children(const NodeId& id) const {
    term(id);
    std::vector<NodeId> out;
    for (const Term& t : terms_) {
        if (t.parent && *t.parent == id) out.push_back(t.id);
    }
    return out;
}

std::vector<NodeId> Taxonomy::terms_at_depth(Dimension dimension, int depth) const {
    std::vector<NodeId> out;
    for (const Term& t : terms_) {
        if (t.dimension == dimension && this->depth(t.id) == depth) out.push_back(t.id);
    }
    return out;
}

std::vector<NodeId> Taxonomy::ancestors(const NodeId& id) const {
    std::vector<NodeId> out;
    for (const Term* cur = &term(id); cur->parent; cur = &term(*cur->parent)) {
        out.push_back(*cur->parent);
    }
    return out;
}

int Taxonomy::depth(const NodeId& id) const {
    return static_cast<int>(ancestors(id).size()) + 1;
}

const NodeId& Taxonomy::root_of(const NodeId& id) const {
    const Term* cur = &term(id);
    while (cur->parent) cur = &term(*cur->parent);
    return cur->id;
}

bool Taxonomy::is_at_or_below(const NodeId& id, const NodeId& ancestor) const {
    term(ancestor);
    for (const Term* cur = &term(id);; cur = &term(*cur->parent)) {
        if (cur->id == ancestor) return true;
        if (!cur->parent) return false;
    }
}

std::set<NodeId> Taxonomy::closure(const std::set<NodeId>& ids) const {
    std::set<NodeId> out;
    for (const NodeId& id : ids) {
        const Term* cur = &term(id);
        while (out.insert(cur->id).second && cur->parent) cur = &term(*cur->parent);
    }
    return out;
}

std::map<NodeId, std::size_t> Taxonomy::rollup_counts(const Classifications& classifications) const {
    std::map<NodeId, std::size_t> counts;
    for (const Term& t : terms_) counts[t.id] = 0;
    for (const auto& [_, labels] : classifications) {
        for (const NodeId& t : closure(labels)) ++counts[t];
    }
    return counts;
}

const Term& Taxonomy::resolve(Dimension dimension, std::string_view id_or_label) const {
    if (NodeId::is_valid(id_or_label)) {
        if (const Term* t = find(NodeId(std::string(id_or_label)))) {
            if (t->dimension != dimension) {
                throw Error(ErrorCode::WrongDimension,
                            "term '" + t->id.str() + "' belongs to " + std::string(to_string(t->dimension)) +
                                ", not " + std::string(to_string(dimension)));
            }
            return *t;
        }
    }
    const std::string wanted = lower(id_or_label);
    const Term* match = nullptr;
    for (const Term& t : terms_) {
        if (t.dimension != dimension || lower(t.label) != wanted) continue;
        if (match != nullptr) {
            throw Error(ErrorCode::AmbiguousLabel, "label '" + std::string(id_or_label) + "' is ambiguous in " +
                                                       std::string(to_string(dimension)));
        }
        match = &t;
    }
    if (match == nullptr) {
        throw Error(ErrorCode::UnknownTerm, "no " + std::string(to_string(dimension)) + " term '" +
                                                std::string(id_or_label) + "'");
    }
    return *match;
}

}  // namespace atlas
