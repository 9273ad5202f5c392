#include <atlas/service.hpp>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace atlas {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Snapshot

std::string catalog_content_hash(const fs::path& root) {
    std::vector<fs::path> files;
    for (const char* name : {"taxonomy.json", "publications.json", "tools.json", "organizations.json"}) {
        if (fs::is_regular_file(root / name)) files.emplace_back(name);
    }
    if (fs::is_directory(root / "datasets")) {
        std::vector<fs::path> datasets;
        for (const auto& entry : fs::directory_iterator(root / "datasets")) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                datasets.push_back(fs::path("datasets") / entry.path().filename());
            }
        }
        std::sort(datasets.begin(), datasets.end());
        files.insert(files.end(), datasets.begin(), datasets.end());
    }

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::Io, "sha256 unavailable");
    }
    for (const auto& rel : files) {
        std::ifstream in(root / rel, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        const std::string header = rel.generic_string() + '\0' + std::to_string(buffer.str().size()) + '\0';
        EVP_DigestUpdate(ctx.get(), header.data(), header.size());
        EVP_DigestUpdate(ctx.get(), buffer.str().data(), buffer.str().size());
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &length);

    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xf];
    }
    return hex;
}

CatalogSnapshot::CatalogSnapshot(Catalog catalog, std::string content_hash)
    : catalog_(std::move(catalog)),
      facets_(catalog_),
      content_hash_(std::move(content_hash)),
      loaded_at_(std::chrono::system_clock::now()) {}

std::shared_ptr<const CatalogSnapshot> CatalogSnapshot::load(const fs::path& root) {
    // Hash first: an edit racing the load changes the hash on the next reload.
    std::string hash = catalog_content_hash(root);
    return std::make_shared<const CatalogSnapshot>(load_catalog(root), std::move(hash));
}

// ---------------------------------------------------------------------------
// Scholar links and DCAT

std::string percent_encode(std::string_view text) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += kHex[c >> 4];
            out += kHex[c & 0xf];
        }
    }
    return out;
}

std::string scholar_url(const DatasetRecord& record) {
    if (record.title.empty()) throw Error(ErrorCode::EmptyTitle, "dataset '" + record.id.str() + "' has no title");
    return "https://scholar.google.com/scholar?q=" + percent_encode(record.title);
}

json export_dcat(const Catalog& catalog) {
    const Taxonomy& tax = catalog.taxonomy;
    json entries = json::array();
    for (const auto& [id, r] : catalog.datasets) {
        // Keywords: labels of assigned terms and their ancestors, broad first,
        // grouped by dimension.
        json keywords = json::array();
        std::set<NodeId> seen;
        for (auto dimension : kAllDimensions) {
            for (const NodeId& t : r.classifications) {
                const Term* term = tax.find(t);
                if (term == nullptr || term->dimension != dimension) continue;
                auto chain = tax.ancestors(t);
                std::reverse(chain.begin(), chain.end());
                chain.push_back(t);
                for (const NodeId& c : chain) {
                    if (seen.insert(c).second) keywords.push_back(tax.term(c).label);
                }
            }
        }
        json entry = {{"@id", id.str()},
                      {"@type", "dcat:Dataset"},
                      {"dct:identifier", r.doi ? "https://doi.org/" + *r.doi : id.str()},
                      {"dct:title", r.title},
                      {"dct:description", r.description},
                      {"dcat:landingPage", r.source_url},
                      {"dct:license", r.license},
                      {"dcat:keyword", std::move(keywords)}};
        if (r.temporal_coverage && (r.temporal_coverage->start_year || r.temporal_coverage->end_year)) {
            json temporal = {{"@type", "dct:PeriodOfTime"}};
            if (r.temporal_coverage->start_year) temporal["dcat:startDate"] = std::to_string(*r.temporal_coverage->start_year);
            if (r.temporal_coverage->end_year) temporal["dcat:endDate"] = std::to_string(*r.temporal_coverage->end_year);
            entry["dct:temporal"] = std::move(temporal);
        }
        if (r.maintained_by) {
            entry["dct:publisher"] = {{"@id", r.maintained_by->str()},
                                      {"foaf:name", catalog.organizations.at(*r.maintained_by).name}};
        }
        if (r.size_bytes) entry["dcat:byteSize"] = *r.size_bytes;
        if (!r.used_in.empty()) {
            json refs = json::array();
            for (const auto& p : r.used_in) refs.push_back(p.str());
            entry["dct:isReferencedBy"] = std::move(refs);
        }
        entries.push_back(std::move(entry));
    }
    return {{"@context",
             {{"dcat", "http://www.w3.org/ns/dcat#"},
              {"dct", "http://purl.org/dc/terms/"},
              {"foaf", "http://xmlns.com/foaf/0.1/"}}},
            {"@type", "dcat:Catalog"},
            {"dct:title", "Engineering design and systems engineering dataset catalog"},
            {"dcat:dataset", std::move(entries)}};
}

json catalog_stats(const CatalogSnapshot& snapshot) {
    const Catalog& c = snapshot.catalog();
    json year_range = nullptr;
    if (!c.publications.empty()) {
        int lo = c.publications.begin()->second.year;
        int hi = lo;
        for (const auto& [_, p] : c.publications) {
            lo = std::min(lo, p.year);
            hi = std::max(hi, p.year);
        }
        year_range = {{"min", lo}, {"max", hi}};
    }
    const auto counts = c.taxonomy.rollup_counts(c.dataset_classifications());
    json distribution = json::object();
    for (auto dimension : kAllDimensions) {
        json roots = json::array();
        for (const NodeId& root : c.taxonomy.roots(dimension)) {
            roots.push_back({{"id", root.str()}, {"label", c.taxonomy.term(root).label}, {"count", counts.at(root)}});
        }
        distribution[std::string(to_string(dimension))] = std::move(roots);
    }
    return {{"datasets", c.datasets.size()},
            {"publications", c.publications.size()},
            {"tools", c.tools.size()},
            {"organizations", c.organizations.size()},
            {"year_range", std::move(year_range)},
            {"content_hash", snapshot.content_hash()},
            {"distribution", std::move(distribution)}};
}

// ---------------------------------------------------------------------------
// Request plumbing

namespace {

std::string percent_decode(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '+') {
            out += ' ';
        } else if (c == '%' && i + 2 < text.size() && std::isxdigit(static_cast<unsigned char>(text[i + 1])) &&
                   std::isxdigit(static_cast<unsigned char>(text[i + 2]))) {
            out += static_cast<char>(std::stoi(std::string(text.substr(i + 1, 2)), nullptr, 16));
            i += 2;
        } else {
            out += c;
        }
    }
    return out;
}

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotFound:
        case ErrorCode::UnknownNode: return 404;
        case ErrorCode::MethodNotAllowed: return 405;
        case ErrorCode::Io: return 500;
        default: return 400;
    }
}

HttpResponse ok(const json& body) { return {200, body.dump()}; }

HttpResponse fail(ErrorCode code, std::string_view message, const std::optional<SourcePosition>& position = {}) {
    return {status_for(code), error_body(code, message, position)};
}

std::optional<std::string> param(const HttpRequest& request, const std::string& name) {
    auto it = request.params.find(name);
    if (it == request.params.end()) return std::nullopt;
    return it->second;
}

Dimension dimension_param(const HttpRequest& request, const std::string& name) {
    auto value = param(request, name);
    if (!value) throw Error(ErrorCode::BadRequest, "missing query parameter '" + name + "'");
    auto dimension = dimension_from_string(*value);
    if (!dimension) throw Error(ErrorCode::BadRequest, "unknown dimension '" + *value + "'");
    return *dimension;
}

long long integer_param(const HttpRequest& request, const std::string& name, long long fallback) {
    auto value = param(request, name);
    if (!value) return fallback;
    try {
        std::size_t used = 0;
        long long v = std::stoll(*value, &used);
        if (used != value->size()) throw std::invalid_argument(name);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::BadRequest, "query parameter '" + name + "' must be an integer");
    }
}

FacetSelection selection_from(const HttpRequest& request) {
    FacetSelection selection = parse_facet_param(param(request, "facets").value_or(""));
    if (auto q = param(request, "q"); q && !q->empty()) selection.text = *q;
    return selection;
}

json classification_groups(const Catalog& c, const DatasetRecord& r) {
    json groups = json::object();
    for (auto dimension : kAllDimensions) groups[std::string(to_string(dimension))] = json::array();
    for (const NodeId& t : r.classifications) {
        const Term& term = c.taxonomy.term(t);
        groups[std::string(to_string(term.dimension))].push_back({{"id", t.str()}, {"label", term.label}});
    }
    return groups;
}

json dataset_detail(const Catalog& c, const DatasetRecord& r) {
    json j = to_json(r);
    j["quality"] = to_json(r.quality);
    j["scholar_url"] = scholar_url(r);
    j["classification_terms"] = classification_groups(c, r);
    json outgoing = json::object();
    json incoming = json::object();
    for (const auto& [kind, dst] : c.graph.out_edges(r.id)) outgoing[std::string(to_string(kind))].push_back(dst.str());
    for (const auto& [kind, src] : c.graph.in_edges(r.id)) incoming[std::string(to_string(kind))].push_back(src.str());
    j["neighbors"] = {{"outgoing", std::move(outgoing)}, {"incoming", std::move(incoming)}};
    j["degree"] = c.graph.degree(r.id);
    return j;
}

}  // namespace

HttpRequest parse_request_target(std::string method, std::string_view target, std::string body) {
    HttpRequest request;
    request.method = std::move(method);
    request.body = std::move(body);
    const auto question = target.find('?');
    request.path = percent_decode(target.substr(0, question));
    if (question == std::string_view::npos) return request;
    std::string_view query = target.substr(question + 1);
    while (!query.empty()) {
        const auto amp = query.find('&');
        std::string_view pair = query.substr(0, amp);
        query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
        if (pair.empty()) continue;
        const auto eq = pair.find('=');
        std::string key = percent_decode(pair.substr(0, eq));
        std::string value = eq == std::string_view::npos ? "" : percent_decode(pair.substr(eq + 1));
        request.params.emplace(std::move(key), std::move(value));
    }
    return request;
}

std::string error_body(ErrorCode code, std::string_view message, const std::optional<SourcePosition>& position) {
    json e = {{"code", to_string(code)}, {"message", message}};
    if (position) e["position"] = {{"line", position->line}, {"column", position->column}};
    return json{{"error", std::move(e)}}.dump();
}

// ---------------------------------------------------------------------------
// Service

CatalogService::CatalogService(fs::path root) : root_(std::move(root)), current_(CatalogSnapshot::load(root_)) {}

std::shared_ptr<const CatalogSnapshot> CatalogService::snapshot() const {
    std::lock_guard lock(publish_mutex_);
    return current_;
}

CatalogService::ReloadResult CatalogService::reload() {
    std::lock_guard serialize(reload_mutex_);
    auto fresh = CatalogSnapshot::load(root_);
    ReloadResult result;
    {
        std::lock_guard lock(publish_mutex_);
        result.previous_hash = current_->content_hash();
        current_ = fresh;
    }
    result.content_hash = fresh->content_hash();
    result.changed = result.previous_hash != result.content_hash;
    return result;
}

HttpResponse CatalogService::handle(const HttpRequest& request) {
    try {
        if (request.path == "/api/reload") {
            if (request.method != "POST") return fail(ErrorCode::MethodNotAllowed, "use POST /api/reload");
            try {
                auto r = reload();
                return ok({{"reloaded", true},
                           {"changed", r.changed},
                           {"previous_hash", r.previous_hash},
                           {"content_hash", r.content_hash}});
            } catch (const CatalogLoadError& e) {
                json findings = json::array();
                for (const auto& f : e.findings()) findings.push_back(to_json(f));
                json body = json::parse(error_body(e.code(), e.what()));
                body["error"]["findings"] = std::move(findings);
                return {422, body.dump()};
            }
        }
        auto snap = snapshot();
        return route(request, *snap);
    } catch (const Error& e) {
        return fail(e.code(), e.what(), e.position());
    } catch (const json::exception& e) {
        return fail(ErrorCode::BadRequest, e.what());
    }
}

HttpResponse CatalogService::route(const HttpRequest& request, const CatalogSnapshot& snap) {
    const Catalog& c = snap.catalog();
    const std::string& path = request.path;

    if (path == "/api/query") {
        if (request.method != "POST") return fail(ErrorCode::MethodNotAllowed, "use POST /api/query");
        json body;
        try {
            body = json::parse(request.body);
        } catch (const json::parse_error& e) {
            return fail(ErrorCode::BadRequest, std::string("request body is not JSON: ") + e.what());
        }
        if (!body.is_object() || !body.contains("q") || !body.at("q").is_string()) {
            return fail(ErrorCode::BadRequest, "request body must be {\"q\": \"<query>\"}");
        }
        const Query query = parse_query(body.at("q").get<std::string>());
        const ResultSet results = evaluate_query(c, query);
        json j = to_json(results);
        j["target"] = to_string(query.target);
        j["query"] = to_string(query);
        return ok(j);
    }

    if (request.method != "GET") return fail(ErrorCode::MethodNotAllowed, request.method + " " + path + " is not supported");

    if (path == "/api/stats") return ok(catalog_stats(snap));
    if (path == "/api/taxonomy") return ok(c.taxonomy.to_json());

    if (path == "/api/datasets") {
        const ResultSet results = snap.facets().apply(selection_from(request));
        json list = json::array();
        for (const NodeId& id : results.ids) {
            const DatasetRecord& r = c.datasets.at(id);
            list.push_back({{"id", id.str()},
                            {"title", r.title},
                            {"source_url", r.source_url},
                            {"license", r.license},
                            {"license_open", r.license_open},
                            {"classifications", classification_groups(c, r)}});
        }
        return ok({{"total", results.total}, {"datasets", std::move(list)}});
    }

    static const std::string kDatasetPrefix = "/api/datasets/";
    if (path.rfind(kDatasetPrefix, 0) == 0) {
        const std::string id = path.substr(kDatasetPrefix.size());
        auto it = NodeId::is_valid(id) ? c.datasets.find(NodeId(id)) : c.datasets.end();
        if (it == c.datasets.end()) return fail(ErrorCode::NotFound, "no dataset '" + id + "'");
        return ok(dataset_detail(c, it->second));
    }

    if (path == "/api/facets") return ok(facet_counts_to_json(snap.facets().counts(selection_from(request))));

    if (path == "/api/heatmap") {
        const Dimension rows = dimension_param(request, "rows");
        const Dimension cols = dimension_param(request, "cols");
        const long long depth = integer_param(request, "depth", 1);
        const long long desert_max = integer_param(request, "desert_max", 0);
        if (desert_max < 0) throw Error(ErrorCode::BadThresholds, "desert_max must be non-negative");
        std::optional<std::size_t> oasis_min;
        if (param(request, "oasis_min")) {
            const long long v = integer_param(request, "oasis_min", 0);
            if (v < 0) throw Error(ErrorCode::BadThresholds, "oasis_min must be non-negative");
            oasis_min = static_cast<std::size_t>(v);
        }
        auto matrix = heatmap(c, rows, cols, depth > 1'000'000 ? -1 : static_cast<int>(depth));
        return ok(to_json(classify_cells(std::move(matrix), static_cast<std::size_t>(desert_max), oasis_min), c.taxonomy));
    }

    if (path == "/api/graph") {
        std::set<Layer> layers;
        if (auto csv = param(request, "layers")) {
            std::stringstream in(*csv);
            std::string name;
            while (std::getline(in, name, ',')) {
                if (name.empty()) continue;
                auto layer = layer_from_string(name);
                if (!layer) throw Error(ErrorCode::BadRequest, "unknown layer '" + name + "'");
                layers.insert(*layer);
            }
        } else {
            layers = all_layers();
        }
        return ok(to_json(graph_export(c, layers)));
    }

    if (path == "/api/sunburst") return ok(to_json(sunburst(c, dimension_param(request, "dimension"))));

    if (path == "/api/influence") {
        const long long top_k = integer_param(request, "top_k", 10);
        if (top_k < 1) throw Error(ErrorCode::BadRequest, "top_k must be at least 1");
        json list = json::array();
        for (const auto& [id, degree] : dataset_influence(c, static_cast<std::size_t>(top_k))) {
            list.push_back({{"id", id.str()}, {"degree", degree}});
        }
        return ok({{"datasets", std::move(list)}});
    }

    return fail(ErrorCode::NotFound, "no route for " + path);
}

}  // namespace atlas
