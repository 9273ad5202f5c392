#pragma once

// Typed in-memory property graph. Node and edge kinds are closed enums and
// every edge is checked against the endpoint table before insertion, so any
// reachable graph state satisfies the schema.

#include <atlas/error.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace atlas {

/// Slug identifier: `[a-z0-9][a-z0-9-]*`.
class NodeId {
public:
    NodeId() = default;

    /// Throws Error{InvalidSlug} when `value` is not a slug.
    explicit NodeId(std::string value);

    static bool is_valid(std::string_view value) noexcept;

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    auto operator<=>(const NodeId&) const = default;
    bool operator==(const NodeId&) const = default;

private:
    std::string value_;
};

enum class NodeKind { Dataset, TaxonomyTerm, Publication, Tool, Organization };

enum class EdgeKind {
    ClassifiedAs,
    ParentOf,
    UsedIn,
    CompatibleWith,
    DerivedFrom,
    ValidatedOn,
    Processes,
    MaintainedBy,
};

inline constexpr NodeKind kAllNodeKinds[] = {NodeKind::Dataset, NodeKind::TaxonomyTerm,
                                             NodeKind::Publication, NodeKind::Tool,
                                             NodeKind::Organization};

inline constexpr EdgeKind kAllEdgeKinds[] = {
    EdgeKind::ClassifiedAs, EdgeKind::ParentOf,    EdgeKind::UsedIn,    EdgeKind::CompatibleWith,
    EdgeKind::DerivedFrom,  EdgeKind::ValidatedOn, EdgeKind::Processes, EdgeKind::MaintainedBy,
};

std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(EdgeKind kind) noexcept;  // snake_case, e.g. "used_in"
std::optional<NodeKind> node_kind_from_string(std::string_view name) noexcept;
std::optional<EdgeKind> edge_kind_from_string(std::string_view name) noexcept;

/// True when the endpoint table admits `src -kind-> dst` on node kinds alone.
/// Term-level constraints (same-dimension parents, format-only compatibility)
/// are checked by Graph::add_edge.
bool edge_kind_permits(EdgeKind kind, NodeKind src, NodeKind dst) noexcept;

using AttributeValue =
    std::variant<bool, std::int64_t, double, std::string, std::vector<std::string>>;

/// Attribute key under which TaxonomyTerm nodes carry their dimension name.
inline constexpr std::string_view kDimensionAttribute = "dimension";

struct Node {
    NodeId id;
    NodeKind kind = NodeKind::Dataset;
    std::string label;
    std::map<std::string, AttributeValue, std::less<>> attributes;

    const std::string* string_attribute(std::string_view key) const;
    bool operator==(const Node&) const = default;
};

struct Edge {
    NodeId src;
    EdgeKind kind = EdgeKind::ClassifiedAs;
    NodeId dst;

    auto operator<=>(const Edge&) const = default;
    bool operator==(const Edge&) const = default;
};

enum class Direction { Outgoing, Incoming, Both };

class Graph {
public:
    void add_node(Node node);
    /// Removes the node and every incident edge.
    void remove_node(const NodeId& id);

    void add_edge(const Edge& edge);
    void remove_edge(const Edge& edge);

    bool contains(const NodeId& id) const noexcept { return nodes_.count(id) != 0; }
    bool contains(const Edge& edge) const noexcept { return edges_.count(edge) != 0; }
    /// Throws Error{UnknownNode}.
    const Node& node(const NodeId& id) const;
    const Node* find(const NodeId& id) const noexcept;

    /// Sorted by id, duplicates removed.
    std::vector<NodeId> neighbors(const NodeId& id, std::optional<EdgeKind> kind,
                                  Direction direction) const;
    std::size_t degree(const NodeId& id) const;

    /// Outgoing (kind, dst) pairs, sorted.
    const std::set<std::pair<EdgeKind, NodeId>>& out_edges(const NodeId& id) const;
    const std::set<std::pair<EdgeKind, NodeId>>& in_edges(const NodeId& id) const;

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::map<NodeId, Node>& nodes() const noexcept { return nodes_; }
    const std::set<Edge>& edges() const noexcept { return edges_; }

    /// Ids of all nodes of `kind`, sorted.
    std::vector<NodeId> nodes_of_kind(NodeKind kind) const;

    bool operator==(const Graph&) const = default;

private:
    using Adjacency = std::set<std::pair<EdgeKind, NodeId>>;

    void check_edge(const Edge& edge) const;

    std::map<NodeId, Node> nodes_;
    std::set<Edge> edges_;
    std::map<NodeId, Adjacency> out_;
    std::map<NodeId, Adjacency> in_;
};

}  // namespace atlas
