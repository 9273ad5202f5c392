#pragma once

// Faceted filtering over dataset classifications.
//
// Within one dimension the selected terms are OR-ed, across dimensions they
// are AND-ed, and a dataset matches a selected term when any of its
// classifications sits at or below it. Facet counts for a dimension are taken
// against the result of every *other* dimension's selection, so alternatives
// within the active dimension stay visible.

#include <atlas/catalog.hpp>

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace atlas {

struct FacetSelection {
    std::map<Dimension, std::set<NodeId>> terms;
    std::optional<std::string> text;

    bool operator==(const FacetSelection&) const = default;
};

struct ResultSet {
    std::vector<NodeId> ids;  // sorted, unique
    std::size_t total = 0;

    bool operator==(const ResultSet&) const = default;
};

using FacetCounts = std::map<NodeId, std::size_t>;

/// Per-dataset ancestor closures, built once per catalog snapshot.
class FacetIndex {
public:
    FacetIndex() = default;
    explicit FacetIndex(const Catalog& catalog);

    ResultSet apply(const FacetSelection& selection) const;
    FacetCounts counts(const FacetSelection& selection) const;

    /// Throws UnknownTerm or WrongDimension.
    void check(const FacetSelection& selection) const;

private:
    struct Entry {
        NodeId id;
        std::set<NodeId> closure;
        std::string title;        // lowercased
        std::string description;  // lowercased
    };

    bool matches_text(const Entry& entry, const std::optional<std::string>& text) const;
    bool matches_dimension(const Entry& entry, const std::set<NodeId>& selected) const;

    const Taxonomy* taxonomy_ = nullptr;
    std::vector<Entry> entries_;  // sorted by id
};

ResultSet apply_facets(const Catalog& catalog, const FacetSelection& selection);
FacetCounts facet_counts(const Catalog& catalog, const FacetSelection& selection);

/// `{"counts": {"<term>": n, ...}}`; the service emits exactly this document.
nlohmann::json facet_counts_to_json(const FacetCounts& counts);
nlohmann::json to_json(const ResultSet& results);

/// Parses `dim:term,dim:term` (terms by id) as sent in `?facets=`.
/// Throws Error{BadRequest} on malformed pairs or unknown dimensions.
FacetSelection parse_facet_param(std::string_view param);

}  // namespace atlas
