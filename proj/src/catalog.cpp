#include <atlas/catalog.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace atlas {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// JSON field helpers. All throw Error{ParseError} naming the offending field.

[[noreturn]] void bad_field(std::string_view record, std::string_view field, std::string_view expected) {
    throw Error(ErrorCode::ParseError,
                std::string(record) + ": field '" + std::string(field) + "' must be " + std::string(expected));
}

void require_object(const json& j, std::string_view what) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, std::string(what) + ": expected a JSON object");
}

NodeId required_id(const json& j, std::string_view what) {
    if (!j.contains("id") || !j.at("id").is_string()) bad_field(what, "id", "a string");
    return NodeId(j.at("id").get<std::string>());
}

std::string string_or_empty(const json& j, const char* field, std::string_view record) {
    if (!j.contains(field) || j.at(field).is_null()) return {};
    if (!j.at(field).is_string()) bad_field(record, field, "a string");
    return j.at(field).get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* field, std::string_view record) {
    if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
    if (!j.at(field).is_string()) bad_field(record, field, "a string");
    return j.at(field).get<std::string>();
}

std::optional<int> optional_int(const json& j, const char* field, std::string_view record) {
    if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
    if (!j.at(field).is_number_integer()) bad_field(record, field, "an integer");
    return j.at(field).get<int>();
}

std::vector<NodeId> id_list(const json& j, const char* field, std::string_view record) {
    std::vector<NodeId> out;
    if (!j.contains(field) || j.at(field).is_null()) return out;
    if (!j.at(field).is_array()) bad_field(record, field, "an array of ids");
    for (const auto& v : j.at(field)) {
        if (!v.is_string()) bad_field(record, field, "an array of ids");
        out.emplace_back(v.get<std::string>());
    }
    return out;
}

json id_array(const std::vector<NodeId>& ids) {
    json out = json::array();
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

std::string_view to_string(ProvenanceKind kind) {
    return kind == ProvenanceKind::Real ? "real" : "synthetic";
}

std::string_view to_string(ValidationStatus status) {
    switch (status) {
        case ValidationStatus::Unvalidated: return "unvalidated";
        case ValidationStatus::PartiallyValidated: return "partially-validated";
        case ValidationStatus::Validated: return "validated";
    }
    return "unvalidated";
}

ProvenanceInfo provenance_from_json(const json& j, std::string_view record) {
    if (!j.is_object()) bad_field(record, "provenance", "an object");
    ProvenanceInfo p;
    std::string kind = string_or_empty(j, "kind", record);
    if (kind == "real" || kind.empty()) {
        p.kind = ProvenanceKind::Real;
    } else if (kind == "synthetic") {
        p.kind = ProvenanceKind::Synthetic;
    } else {
        bad_field(record, "provenance.kind", "\"real\" or \"synthetic\"");
    }
    p.generation_method = optional_string(j, "generation_method", record);
    if (j.contains("simulation_tools") && !j.at("simulation_tools").is_null()) {
        const auto& tools = j.at("simulation_tools");
        if (!tools.is_array()) bad_field(record, "provenance.simulation_tools", "an array of strings");
        std::vector<std::string> list;
        for (const auto& t : tools) {
            if (!t.is_string()) bad_field(record, "provenance.simulation_tools", "an array of strings");
            list.push_back(t.get<std::string>());
        }
        p.simulation_tools = std::move(list);
    }
    if (auto status = optional_string(j, "validation_status", record)) {
        if (*status == "unvalidated") {
            p.validation_status = ValidationStatus::Unvalidated;
        } else if (*status == "partially-validated") {
            p.validation_status = ValidationStatus::PartiallyValidated;
        } else if (*status == "validated") {
            p.validation_status = ValidationStatus::Validated;
        } else {
            bad_field(record, "provenance.validation_status",
                      "one of unvalidated, partially-validated, validated");
        }
    }
    return p;
}

json to_json(const ProvenanceInfo& p) {
    json j = {{"kind", to_string(p.kind)}};
    if (p.generation_method) j["generation_method"] = *p.generation_method;
    if (p.simulation_tools) j["simulation_tools"] = *p.simulation_tools;
    if (p.validation_status) j["validation_status"] = to_string(*p.validation_status);
    return j;
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
    if (text.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[i])) != prefix[i]) return false;
    }
    return true;
}

bool provenance_fully_populated(const std::optional<ProvenanceInfo>& p) {
    if (!p || !p->validation_status) return false;
    if (p->kind == ProvenanceKind::Real) return true;
    return p->generation_method && !p->generation_method->empty() && p->simulation_tools &&
           !p->simulation_tools->empty();
}

const std::set<std::string_view> kDatasetFields = {
    "id",           "title",        "description",       "source_url",     "license",
    "license_open", "doi",          "size_description",  "size_bytes",     "temporal_coverage",
    "classifications", "used_in",   "derived_from",      "maintained_by",  "provenance",
};
const std::set<std::string_view> kPublicationFields = {"id", "title", "year", "venue", "doi"};
const std::set<std::string_view> kToolFields = {"id", "name", "url", "compatible_formats", "processes",
                                                "validated_on"};
const std::set<std::string_view> kOrganizationFields = {"id", "name", "url"};

void warn_unknown_fields(const json& j, const std::set<std::string_view>& known, const std::string& where,
                         std::vector<Finding>& findings) {
    if (!j.is_object()) return;
    for (const auto& [key, _] : j.items()) {
        if (known.count(key) == 0) {
            findings.push_back({FindingLevel::Warning, "unknown-field:" + key,
                                where + ": field '" + key + "' is not part of the schema and was ignored"});
        }
    }
}

ErrorCode error_code_for(const std::vector<Finding>& findings) {
    for (const auto& f : findings) {
        if (f.level != FindingLevel::Error) continue;
        if (f.code == "parse-error") return ErrorCode::ParseError;
        if (f.code == "unknown-reference") return ErrorCode::UnknownReference;
        if (f.code == "graph-constraint") return ErrorCode::GraphConstraintViolation;
        return ErrorCode::ValidationFailed;
    }
    return ErrorCode::ValidationFailed;
}

std::string describe(const std::vector<Finding>& findings) {
    std::size_t errors = std::count_if(findings.begin(), findings.end(),
                                       [](const Finding& f) { return f.level == FindingLevel::Error; });
    std::string message = "catalog has " + std::to_string(errors) + " error-level finding(s)";
    for (const auto& f : findings) {
        if (f.level == FindingLevel::Error) {
            message += "\n  " + f.code + ": " + f.message;
        }
    }
    return message;
}

std::optional<json> read_json_file(const fs::path& file, std::vector<Finding>& findings) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        findings.push_back({FindingLevel::Error, "parse-error", file.filename().string() + ": cannot read file"});
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        findings.push_back({FindingLevel::Error, "parse-error", file.filename().string() + ": " + e.what()});
        return std::nullopt;
    }
}

void write_json_file(const fs::path& file, const json& j) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
    out << j.dump(2) << '\n';
}

template <typename Record, typename Parse>
std::vector<Record> read_record_array(const fs::path& file, Parse parse, const std::set<std::string_view>& known,
                                      std::vector<Finding>& findings) {
    std::vector<Record> records;
    if (!fs::exists(file)) return records;
    auto document = read_json_file(file, findings);
    if (!document) return records;
    const std::string name = file.filename().string();
    if (!document->is_array()) {
        findings.push_back({FindingLevel::Error, "parse-error", name + ": expected a JSON array of records"});
        return records;
    }
    for (std::size_t i = 0; i < document->size(); ++i) {
        const json& entry = (*document)[i];
        const std::string where = name + "[" + std::to_string(i) + "]";
        try {
            records.push_back(parse(entry));
            warn_unknown_fields(entry, known, where, findings);
        } catch (const Error& e) {
            findings.push_back({FindingLevel::Error, "parse-error", where + ": " + e.what()});
        }
    }
    return records;
}

}  // namespace

std::string_view to_string(FindingLevel level) noexcept {
    return level == FindingLevel::Error ? "error" : "warning";
}

json to_json(const Finding& finding) {
    return {{"level", to_string(finding.level)}, {"code", finding.code}, {"message", finding.message}};
}

json to_json(const QualityScores& s) {
    return {{"scoring_version", kScoringVersion},
            {"completeness", s.completeness},
            {"fair_f", s.fair_f},
            {"fair_a", s.fair_a},
            {"fair_i", s.fair_i},
            {"fair_r", s.fair_r}};
}

bool has_errors(const std::vector<Finding>& findings) noexcept {
    return std::any_of(findings.begin(), findings.end(),
                       [](const Finding& f) { return f.level == FindingLevel::Error; });
}

bool is_valid_doi(std::string_view doi) noexcept {
    static const std::regex pattern(R"(^10\.[0-9]+/\S+$)");
    return std::regex_match(doi.begin(), doi.end(), pattern);
}

bool is_valid_url(std::string_view url) noexcept {
    static const std::regex pattern(R"(^[A-Za-z][A-Za-z0-9+.\-]*://[^\s/?#]+[^\s]*$)");
    return std::regex_match(url.begin(), url.end(), pattern);
}

// ---------------------------------------------------------------------------
// Records

DatasetRecord dataset_from_json(const json& j) {
    require_object(j, "dataset");
    DatasetRecord r;
    r.id = required_id(j, "dataset");
    const std::string where = "dataset '" + r.id.str() + "'";
    r.title = string_or_empty(j, "title", where);
    r.description = string_or_empty(j, "description", where);
    r.source_url = string_or_empty(j, "source_url", where);
    r.license = string_or_empty(j, "license", where);
    if (j.contains("license_open") && !j.at("license_open").is_null()) {
        if (!j.at("license_open").is_boolean()) bad_field(where, "license_open", "a boolean");
        r.license_open = j.at("license_open").get<bool>();
    }
    r.doi = optional_string(j, "doi", where);
    r.size_description = string_or_empty(j, "size_description", where);
    if (j.contains("size_bytes") && !j.at("size_bytes").is_null()) {
        if (!j.at("size_bytes").is_number_unsigned()) bad_field(where, "size_bytes", "a non-negative integer");
        r.size_bytes = j.at("size_bytes").get<std::uint64_t>();
    }
    if (j.contains("temporal_coverage") && !j.at("temporal_coverage").is_null()) {
        const auto& tc = j.at("temporal_coverage");
        if (!tc.is_object()) bad_field(where, "temporal_coverage", "an object with start_year/end_year");
        r.temporal_coverage = TemporalCoverage{optional_int(tc, "start_year", where),
                                               optional_int(tc, "end_year", where)};
    }
    r.classifications = id_list(j, "classifications", where);
    r.used_in = id_list(j, "used_in", where);
    r.derived_from = id_list(j, "derived_from", where);
    if (auto org = optional_string(j, "maintained_by", where)) r.maintained_by = NodeId(*org);
    if (j.contains("provenance") && !j.at("provenance").is_null()) {
        r.provenance = provenance_from_json(j.at("provenance"), where);
    }
    return r;
}

json to_json(const DatasetRecord& r) {
    json j = {{"id", r.id.str()},
              {"title", r.title},
              {"description", r.description},
              {"source_url", r.source_url},
              {"license", r.license},
              {"license_open", r.license_open}};
    if (r.doi) j["doi"] = *r.doi;
    j["size_description"] = r.size_description;
    if (r.size_bytes) j["size_bytes"] = *r.size_bytes;
    if (r.temporal_coverage) {
        json tc = json::object();
        if (r.temporal_coverage->start_year) tc["start_year"] = *r.temporal_coverage->start_year;
        if (r.temporal_coverage->end_year) tc["end_year"] = *r.temporal_coverage->end_year;
        j["temporal_coverage"] = std::move(tc);
    }
    j["classifications"] = id_array(r.classifications);
    j["used_in"] = id_array(r.used_in);
    j["derived_from"] = id_array(r.derived_from);
    if (r.maintained_by) j["maintained_by"] = r.maintained_by->str();
    if (r.provenance) j["provenance"] = to_json(*r.provenance);
    return j;
}

PublicationRecord publication_from_json(const json& j) {
    require_object(j, "publication");
    PublicationRecord r;
    r.id = required_id(j, "publication");
    const std::string where = "publication '" + r.id.str() + "'";
    r.title = string_or_empty(j, "title", where);
    auto year = optional_int(j, "year", where);
    if (!year) bad_field(where, "year", "an integer");
    r.year = *year;
    r.venue = optional_string(j, "venue", where);
    r.doi = optional_string(j, "doi", where);
    return r;
}

json to_json(const PublicationRecord& r) {
    json j = {{"id", r.id.str()}, {"title", r.title}, {"year", r.year}};
    if (r.venue) j["venue"] = *r.venue;
    if (r.doi) j["doi"] = *r.doi;
    return j;
}

ToolRecord tool_from_json(const json& j) {
    require_object(j, "tool");
    ToolRecord r;
    r.id = required_id(j, "tool");
    const std::string where = "tool '" + r.id.str() + "'";
    r.name = string_or_empty(j, "name", where);
    r.url = optional_string(j, "url", where);
    r.compatible_formats = id_list(j, "compatible_formats", where);
    r.processes = id_list(j, "processes", where);
    r.validated_on = id_list(j, "validated_on", where);
    return r;
}

json to_json(const ToolRecord& r) {
    json j = {{"id", r.id.str()}, {"name", r.name}};
    if (r.url) j["url"] = *r.url;
    j["compatible_formats"] = id_array(r.compatible_formats);
    j["processes"] = id_array(r.processes);
    j["validated_on"] = id_array(r.validated_on);
    return j;
}

OrganizationRecord organization_from_json(const json& j) {
    require_object(j, "organization");
    OrganizationRecord r;
    r.id = required_id(j, "organization");
    r.name = string_or_empty(j, "name", "organization '" + r.id.str() + "'");
    r.url = optional_string(j, "url", "organization '" + r.id.str() + "'");
    return r;
}

json to_json(const OrganizationRecord& r) {
    json j = {{"id", r.id.str()}, {"name", r.name}};
    if (r.url) j["url"] = *r.url;
    return j;
}

// ---------------------------------------------------------------------------
// Validation and scoring

std::vector<Finding> validate_record(const DatasetRecord& r, const Taxonomy& taxonomy) {
    std::vector<Finding> out;
    const std::string who = "dataset '" + r.id.str() + "'";
    auto error = [&](std::string code, std::string message) {
        out.push_back({FindingLevel::Error, std::move(code), who + ": " + std::move(message)});
    };

    if (!NodeId::is_valid(r.id.str())) error("bad-slug", "id is not a valid slug");
    if (r.title.empty()) error("empty-title", "title is empty");
    if (r.source_url.empty()) {
        error("empty-source-url", "source_url is empty");
    } else if (!is_valid_url(r.source_url)) {
        error("bad-url", "source_url '" + r.source_url + "' is not a URL");
    }
    if (r.doi && !is_valid_doi(*r.doi)) error("bad-doi", "doi '" + *r.doi + "' does not match 10.<digits>/<suffix>");
    if (r.temporal_coverage && r.temporal_coverage->start_year && r.temporal_coverage->end_year &&
        *r.temporal_coverage->start_year > *r.temporal_coverage->end_year) {
        error("bad-temporal-coverage", "temporal_coverage start_year is after end_year");
    }
    if (r.provenance && r.provenance->kind == ProvenanceKind::Synthetic &&
        (!r.provenance->generation_method || r.provenance->generation_method->empty())) {
        error("missing-generation-method", "synthetic provenance requires generation_method");
    }

    std::set<Dimension> covered;
    for (const NodeId& t : r.classifications) {
        if (const Term* term = taxonomy.find(t)) {
            covered.insert(term->dimension);
        } else {
            error("unknown-term", "classification '" + t.str() + "' is not a taxonomy term");
        }
    }
    for (auto d : kAllDimensions) {
        if (covered.count(d) == 0) {
            out.push_back({FindingLevel::Warning, "missing-dimension:" + std::string(to_string(d)),
                           who + ": no " + std::string(to_string(d)) + " classification"});
        }
    }
    return out;
}

QualityScores compute_quality(const DatasetRecord& r, const Taxonomy& taxonomy) {
    std::set<Dimension> covered;
    bool structured = false;
    bool domain_specific = false;
    for (const NodeId& t : r.classifications) {
        const Term* term = taxonomy.find(t);
        if (term == nullptr) continue;
        covered.insert(term->dimension);
        if (term->dimension != Dimension::Format) continue;
        const std::string& root = taxonomy.root_of(t).str();
        structured = structured || root == "structured" || root == "semi-structured";
        domain_specific = domain_specific || root == "domain-specific";
    }

    const bool temporal = r.temporal_coverage &&
                          (r.temporal_coverage->start_year || r.temporal_coverage->end_year);
    const bool has_doi = r.doi && !r.doi->empty();
    const int populated = !r.title.empty() + !r.description.empty() + !r.source_url.empty() +
                          !r.license.empty() + has_doi + !r.size_description.empty() + temporal +
                          r.provenance.has_value() + (covered.size() == std::size(kAllDimensions));

    QualityScores q;
    q.completeness = populated / 9.0;
    q.fair_f = ((has_doi ? 1.0 : 0.0) + q.completeness) / 2.0;
    const bool http = starts_with_ci(r.source_url, "http://") || starts_with_ci(r.source_url, "https://");
    q.fair_a = ((http ? 1.0 : 0.0) + (r.license.empty() ? 0.0 : 1.0)) / 2.0;
    q.fair_i = structured ? 1.0 : domain_specific ? 0.5 : 0.0;
    q.fair_r = ((r.license_open ? 1.0 : 0.0) + (provenance_fully_populated(r.provenance) ? 1.0 : 0.0)) / 2.0;
    return q;
}

// ---------------------------------------------------------------------------
// Loading

Classifications Catalog::dataset_classifications() const {
    Classifications out;
    for (const auto& [id, record] : datasets) {
        out[id] = {record.classifications.begin(), record.classifications.end()};
    }
    return out;
}

CatalogLoadError::CatalogLoadError(ErrorCode code, std::vector<Finding> findings)
    : Error(code, describe(findings)), findings_(std::move(findings)) {}

namespace {

Catalog assemble(Taxonomy taxonomy, std::vector<DatasetRecord> datasets,
                 std::vector<PublicationRecord> publications, std::vector<ToolRecord> tools,
                 std::vector<OrganizationRecord> organizations, std::vector<Finding> findings) {
    Catalog catalog;
    catalog.taxonomy = std::move(taxonomy);
    const Taxonomy& tax = catalog.taxonomy;

    auto error = [&](std::string code, std::string message) {
        findings.push_back({FindingLevel::Error, std::move(code), std::move(message)});
    };

    // Ids are unique across the taxonomy and every record store.
    std::map<NodeId, std::string> owners;
    for (const Term& t : tax.terms()) owners.emplace(t.id, "taxonomy term");
    auto claim = [&](const NodeId& id, const std::string& kind) {
        auto [it, fresh] = owners.emplace(id, kind);
        if (!fresh) error("duplicate-id", kind + " '" + id.str() + "' reuses an id already taken by a " + it->second);
        return fresh;
    };

    for (auto& r : datasets) {
        if (claim(r.id, "dataset")) catalog.datasets.emplace(r.id, std::move(r));
    }
    for (auto& r : publications) {
        if (claim(r.id, "publication")) catalog.publications.emplace(r.id, std::move(r));
    }
    for (auto& r : tools) {
        if (claim(r.id, "tool")) catalog.tools.emplace(r.id, std::move(r));
    }
    for (auto& r : organizations) {
        if (claim(r.id, "organization")) catalog.organizations.emplace(r.id, std::move(r));
    }

    auto check_ref = [&](const std::string& who, const char* field, const NodeId& target, bool exists) {
        if (!exists) {
            error("unknown-reference", who + ": " + field + " references unknown id '" + target.str() + "'");
        }
    };

    for (const auto& [id, r] : catalog.datasets) {
        auto record_findings = validate_record(r, tax);
        findings.insert(findings.end(), record_findings.begin(), record_findings.end());
        const std::string who = "dataset '" + id.str() + "'";
        for (const auto& p : r.used_in) check_ref(who, "used_in", p, catalog.publications.count(p) != 0);
        for (const auto& d : r.derived_from) check_ref(who, "derived_from", d, catalog.datasets.count(d) != 0);
        if (r.maintained_by) {
            check_ref(who, "maintained_by", *r.maintained_by, catalog.organizations.count(*r.maintained_by) != 0);
        }
    }
    for (const auto& [id, r] : catalog.publications) {
        const std::string who = "publication '" + id.str() + "'";
        if (r.title.empty()) error("empty-title", who + ": title is empty");
        if (r.year < 1000 || r.year > 9999) error("bad-year", who + ": year must be a 4-digit integer");
        if (r.doi && !is_valid_doi(*r.doi)) error("bad-doi", who + ": doi '" + *r.doi + "' is malformed");
    }
    for (const auto& [id, r] : catalog.tools) {
        const std::string who = "tool '" + id.str() + "'";
        if (r.name.empty()) error("empty-name", who + ": name is empty");
        if (r.url && !is_valid_url(*r.url)) error("bad-url", who + ": url '" + *r.url + "' is not a URL");
        for (const auto& f : r.compatible_formats) {
            const Term* term = tax.find(f);
            check_ref(who, "compatible_formats", f, term != nullptr);
            if (term != nullptr && term->dimension != Dimension::Format) {
                error("non-format-compatibility", who + ": compatible_formats entry '" + f.str() +
                                                      "' is not a format term");
            }
        }
        for (const auto& d : r.processes) check_ref(who, "processes", d, catalog.datasets.count(d) != 0);
        for (const auto& d : r.validated_on) check_ref(who, "validated_on", d, catalog.datasets.count(d) != 0);
    }
    for (const auto& [id, r] : catalog.organizations) {
        const std::string who = "organization '" + id.str() + "'";
        if (r.name.empty()) error("empty-name", who + ": name is empty");
        if (r.url && !is_valid_url(*r.url)) error("bad-url", who + ": url '" + *r.url + "' is not a URL");
    }

    if (has_errors(findings)) {
        const ErrorCode code = error_code_for(findings);  // before the move
        throw CatalogLoadError(code, std::move(findings));
    }

    // Graph assembly. Remaining failures (duplicate list entries, self
    // derivations) surface as graph-constraint findings.
    Graph& g = catalog.graph;
    auto try_edge = [&](const Edge& e) {
        try {
            g.add_edge(e);
        } catch (const Error& ex) {
            error("graph-constraint", std::string(to_string(ex.code())) + ": " + ex.what());
        }
    };
    for (const Term& t : tax.terms()) {
        g.add_node({t.id, NodeKind::TaxonomyTerm, t.label,
                    {{std::string(kDimensionAttribute), std::string(to_string(t.dimension))}}});
    }
    for (const Term& t : tax.terms()) {
        if (t.parent) try_edge({*t.parent, EdgeKind::ParentOf, t.id});
    }
    for (const auto& [id, r] : catalog.datasets) {
        Node n{id, NodeKind::Dataset, r.title.empty() ? id.str() : r.title, {}};
        n.attributes["source_url"] = r.source_url;
        n.attributes["license"] = r.license;
        n.attributes["license_open"] = r.license_open;
        g.add_node(std::move(n));
    }
    for (const auto& [id, r] : catalog.publications) {
        Node n{id, NodeKind::Publication, r.title, {}};
        n.attributes["year"] = static_cast<std::int64_t>(r.year);
        g.add_node(std::move(n));
    }
    for (const auto& [id, r] : catalog.tools) g.add_node({id, NodeKind::Tool, r.name, {}});
    for (const auto& [id, r] : catalog.organizations) g.add_node({id, NodeKind::Organization, r.name, {}});

    for (const auto& [id, r] : catalog.datasets) {
        for (const auto& t : r.classifications) try_edge({id, EdgeKind::ClassifiedAs, t});
        for (const auto& p : r.used_in) try_edge({id, EdgeKind::UsedIn, p});
        for (const auto& d : r.derived_from) try_edge({id, EdgeKind::DerivedFrom, d});
        if (r.maintained_by) try_edge({id, EdgeKind::MaintainedBy, *r.maintained_by});
    }
    for (const auto& [id, r] : catalog.tools) {
        for (const auto& f : r.compatible_formats) try_edge({id, EdgeKind::CompatibleWith, f});
        for (const auto& d : r.processes) try_edge({id, EdgeKind::Processes, d});
        for (const auto& d : r.validated_on) try_edge({id, EdgeKind::ValidatedOn, d});
    }
    if (has_errors(findings)) {
        const ErrorCode code = error_code_for(findings);  // before the move
        throw CatalogLoadError(code, std::move(findings));
    }

    for (auto& [_, r] : catalog.datasets) r.quality = compute_quality(r, tax);
    catalog.diagnostics = std::move(findings);
    return catalog;
}

}  // namespace

Catalog build_catalog(Taxonomy taxonomy, std::vector<DatasetRecord> datasets,
                      std::vector<PublicationRecord> publications, std::vector<ToolRecord> tools,
                      std::vector<OrganizationRecord> organizations) {
    return assemble(std::move(taxonomy), std::move(datasets), std::move(publications), std::move(tools),
                    std::move(organizations), {});
}

Catalog load_catalog(const fs::path& root) {
    if (!fs::is_directory(root)) {
        throw CatalogLoadError(ErrorCode::Io, {{FindingLevel::Error, "io", root.string() + ": not a directory"}});
    }
    Taxonomy taxonomy;
    try {
        taxonomy = Taxonomy::load(root / "taxonomy.json");
    } catch (const Error& e) {
        throw CatalogLoadError(e.code(), {{FindingLevel::Error, "taxonomy:" + std::string(to_string(e.code())),
                                           "taxonomy.json: " + std::string(e.what())}});
    }
    return load_catalog(root, std::move(taxonomy));
}

Catalog load_catalog(const fs::path& root, Taxonomy taxonomy) {
    std::vector<Finding> findings;
    std::vector<DatasetRecord> datasets;

    std::vector<fs::path> files;
    if (fs::is_directory(root / "datasets")) {
        for (const auto& entry : fs::directory_iterator(root / "datasets")) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        auto document = read_json_file(file, findings);
        if (!document) continue;
        const std::string name = "datasets/" + file.filename().string();
        try {
            DatasetRecord r = dataset_from_json(*document);
            warn_unknown_fields(*document, kDatasetFields, name, findings);
            if (file.stem().string() != r.id.str()) {
                findings.push_back({FindingLevel::Warning, "id-filename-mismatch",
                                    name + ": file name does not match id '" + r.id.str() + "'"});
            }
            datasets.push_back(std::move(r));
        } catch (const Error& e) {
            findings.push_back({FindingLevel::Error, "parse-error", name + ": " + e.what()});
        }
    }

    auto publications =
        read_record_array<PublicationRecord>(root / "publications.json", publication_from_json, kPublicationFields, findings);
    auto tools = read_record_array<ToolRecord>(root / "tools.json", tool_from_json, kToolFields, findings);
    auto organizations = read_record_array<OrganizationRecord>(root / "organizations.json", organization_from_json,
                                                               kOrganizationFields, findings);

    return assemble(std::move(taxonomy), std::move(datasets), std::move(publications), std::move(tools),
                    std::move(organizations), std::move(findings));
}

void export_catalog(const Catalog& catalog, const fs::path& root) {
    fs::create_directories(root / "datasets");
    write_json_file(root / "taxonomy.json", catalog.taxonomy.to_json());
    for (const auto& [id, r] : catalog.datasets) write_json_file(root / "datasets" / (id.str() + ".json"), to_json(r));
    json pubs = json::array();
    for (const auto& [_, r] : catalog.publications) pubs.push_back(to_json(r));
    write_json_file(root / "publications.json", pubs);
    json tools = json::array();
    for (const auto& [_, r] : catalog.tools) tools.push_back(to_json(r));
    write_json_file(root / "tools.json", tools);
    json orgs = json::array();
    for (const auto& [_, r] : catalog.organizations) orgs.push_back(to_json(r));
    write_json_file(root / "organizations.json", orgs);
}

}  // namespace atlas
