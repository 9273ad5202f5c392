#pragma once

#include <atlas/graph.hpp>
#include <atlas/taxonomy.hpp>

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace atlas {

enum class ProvenanceKind { Real, Synthetic };
enum class ValidationStatus { Unvalidated, PartiallyValidated, Validated };

struct ProvenanceInfo {
    ProvenanceKind kind = ProvenanceKind::Real;
    std::optional<std::string> generation_method;
    std::optional<std::vector<std::string>> simulation_tools;
    std::optional<ValidationStatus> validation_status;

    bool operator==(const ProvenanceInfo&) const = default;
};

struct TemporalCoverage {
    std::optional<int> start_year;
    std::optional<int> end_year;

    bool operator==(const TemporalCoverage&) const = default;
};

/// Version tag emitted next to every QualityScores serialization.
inline constexpr int kScoringVersion = 1;

struct QualityScores {
    double completeness = 0.0;
    double fair_f = 0.0;
    double fair_a = 0.0;
    double fair_i = 0.0;
    double fair_r = 0.0;

    bool operator==(const QualityScores&) const = default;
};

struct DatasetRecord {
    NodeId id;
    std::string title;
    std::string description;
    std::string source_url;
    std::string license;
    bool license_open = false;
    std::optional<std::string> doi;
    std::string size_description;
    std::optional<std::uint64_t> size_bytes;
    std::optional<TemporalCoverage> temporal_coverage;
    std::vector<NodeId> classifications;
    std::vector<NodeId> used_in;
    std::vector<NodeId> derived_from;
    std::optional<NodeId> maintained_by;
    std::optional<ProvenanceInfo> provenance;
    QualityScores quality;

    bool operator==(const DatasetRecord&) const = default;
};

struct PublicationRecord {
    NodeId id;
    std::string title;
    int year = 0;
    std::optional<std::string> venue;
    std::optional<std::string> doi;

    bool operator==(const PublicationRecord&) const = default;
};

struct ToolRecord {
    NodeId id;
    std::string name;
    std::optional<std::string> url;
    std::vector<NodeId> compatible_formats;
    std::vector<NodeId> processes;
    std::vector<NodeId> validated_on;

    bool operator==(const ToolRecord&) const = default;
};

struct OrganizationRecord {
    NodeId id;
    std::string name;
    std::optional<std::string> url;

    bool operator==(const OrganizationRecord&) const = default;
};

enum class FindingLevel { Error, Warning };

struct Finding {
    FindingLevel level = FindingLevel::Error;
    std::string code;     // e.g. "bad-doi", "missing-dimension:format"
    std::string message;  // prefixed with the file or record it concerns

    bool operator==(const Finding&) const = default;
};

std::string_view to_string(FindingLevel level) noexcept;
nlohmann::json to_json(const Finding& finding);
nlohmann::json to_json(const QualityScores& scores);  // includes scoring_version
bool has_errors(const std::vector<Finding>& findings) noexcept;

// Record (de)serialization. Parsing checks JSON shape and id syntax only;
// content rules live in validate_record so partial records can be scored.
// Throws Error{ParseError} or Error{InvalidSlug}.
DatasetRecord dataset_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DatasetRecord& record);  // excludes computed quality
PublicationRecord publication_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PublicationRecord& record);
ToolRecord tool_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ToolRecord& record);
OrganizationRecord organization_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OrganizationRecord& record);

/// Content checks on one dataset. Malformed identifiers are errors; a
/// dimension without any classification is a warning.
std::vector<Finding> validate_record(const DatasetRecord& record, const Taxonomy& taxonomy);

/// Documentation completeness and FAIR sub-scores (scoring version 1).
///   completeness = populated recommended fields / 9
///   F = mean(doi present, completeness)
///   A = mean(source_url is http(s), license present)
///   I = 1 structured/semi-structured, 0.5 domain-specific, 0 otherwise
///   R = mean(license_open, provenance fully populated)
QualityScores compute_quality(const DatasetRecord& record, const Taxonomy& taxonomy);

bool is_valid_doi(std::string_view doi) noexcept;
bool is_valid_url(std::string_view url) noexcept;

/// A loaded, validated catalog. Immutable once returned by load_catalog.
struct Catalog {
    Taxonomy taxonomy;
    Graph graph;
    std::map<NodeId, DatasetRecord> datasets;
    std::map<NodeId, PublicationRecord> publications;
    std::map<NodeId, ToolRecord> tools;
    std::map<NodeId, OrganizationRecord> organizations;
    std::vector<Finding> diagnostics;  // warning-level findings

    /// Dataset id -> direct classifications.
    Classifications dataset_classifications() const;
};

/// Thrown by load_catalog when any error-level finding exists; carries every
/// finding (errors and warnings) collected before aborting.
class CatalogLoadError : public Error {
public:
    CatalogLoadError(ErrorCode code, std::vector<Finding> findings);
    const std::vector<Finding>& findings() const noexcept { return findings_; }

private:
    std::vector<Finding> findings_;
};

/// Reads `<root>/taxonomy.json` and the record files beside it.
Catalog load_catalog(const std::filesystem::path& root);
/// Uses an already loaded taxonomy instead of `<root>/taxonomy.json`.
Catalog load_catalog(const std::filesystem::path& root, Taxonomy taxonomy);

/// Assembles a catalog from in-memory records, running the same validation
/// and graph construction as load_catalog.
Catalog build_catalog(Taxonomy taxonomy, std::vector<DatasetRecord> datasets,
                      std::vector<PublicationRecord> publications, std::vector<ToolRecord> tools,
                      std::vector<OrganizationRecord> organizations);

/// Writes the catalog back out in the directory layout load_catalog reads.
void export_catalog(const Catalog& catalog, const std::filesystem::path& root);

}  // namespace atlas
