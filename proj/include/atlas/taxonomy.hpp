#pragma once

#include <atlas/graph.hpp>

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace atlas {

enum class Dimension { Domain, Lifecycle, DataType, Format };

inline constexpr Dimension kAllDimensions[] = {Dimension::Domain, Dimension::Lifecycle,
                                               Dimension::DataType, Dimension::Format};

/// "domain", "lifecycle", "datatype", "format".
std::string_view to_string(Dimension dimension) noexcept;
std::optional<Dimension> dimension_from_string(std::string_view name) noexcept;

struct Term {
    NodeId id;
    Dimension dimension = Dimension::Domain;
    std::string label;
    std::optional<NodeId> parent;

    bool operator==(const Term&) const = default;
};

/// Dataset (or any node) id -> set of directly assigned term ids.
using Classifications = std::map<NodeId, std::set<NodeId>>;

/// Four single-parent forests, one per dimension. Immutable after construction.
class Taxonomy {
public:
    Taxonomy() = default;

    /// Validates the term list: ids are unique slugs, parents exist and share
    /// the child's dimension, and no parent chain is cyclic. Terms keep their
    /// declaration order within each dimension.
    explicit Taxonomy(std::vector<Term> terms);

    /// Parses `{ "dimensions": { "<dimension>": [ {id, label, parent?} ] } }`.
    static Taxonomy from_json(const nlohmann::json& document);
    static Taxonomy parse(std::string_view text);
    static Taxonomy load(const std::filesystem::path& file);
    nlohmann::json to_json() const;

    bool contains(const NodeId& id) const noexcept { return index_.count(id) != 0; }
    /// Throws Error{UnknownTerm}.
    const Term& term(const NodeId& id) const;
    const Term* find(const NodeId& id) const noexcept;

    /// All terms in declaration order, dimensions in enum order.
    const std::vector<Term>& terms() const noexcept { return terms_; }
    std::vector<NodeId> terms_in(Dimension dimension) const;
    std::vector<NodeId> roots(Dimension dimension) const;
    std::vector<NodeId> children(const NodeId& id) const;
    /// Terms whose depth equals `depth` (roots have depth 1).
    std::vector<NodeId> terms_at_depth(Dimension dimension, int depth) const;

    /// Nearest first, root last; empty for roots.
    std::vector<NodeId> ancestors(const NodeId& id) const;
    /// Roots have depth 1.
    int depth(const NodeId& id) const;
    const NodeId& root_of(const NodeId& id) const;
    bool is_at_or_below(const NodeId& id, const NodeId& ancestor) const;

    /// count(t) = number of distinct keys with at least one term at or below t.
    /// Every term appears in the result, zero counts included.
    std::map<NodeId, std::size_t> rollup_counts(const Classifications& classifications) const;

    /// `{id} ∪ ancestors(id)` over every id in `ids`.
    std::set<NodeId> closure(const std::set<NodeId>& ids) const;

    /// Resolves a term by id, or by case-insensitive label within `dimension`.
    /// Throws UnknownTerm, WrongDimension, or AmbiguousLabel.
    const Term& resolve(Dimension dimension, std::string_view id_or_label) const;

private:
    std::vector<Term> terms_;
    std::map<NodeId, std::size_t> index_;
};

}  // namespace atlas
