#include <atlas/graph.hpp>

#include <algorithm>

namespace atlas {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::InvalidSlug: return "InvalidSlug";
        case ErrorCode::MissingEndpoint: return "MissingEndpoint";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::CrossDimensionParent: return "CrossDimensionParent";
        case ErrorCode::NonFormatCompatibility: return "NonFormatCompatibility";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::DuplicateTermId: return "DuplicateTermId";
        case ErrorCode::UnknownParent: return "UnknownParent";
        case ErrorCode::UnknownTerm: return "UnknownTerm";
        case ErrorCode::UnknownReference: return "UnknownReference";
        case ErrorCode::GraphConstraintViolation: return "GraphConstraintViolation";
        case ErrorCode::ValidationFailed: return "ValidationFailed";
        case ErrorCode::WrongDimension: return "WrongDimension";
        case ErrorCode::AmbiguousLabel: return "AmbiguousLabel";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnknownField: return "UnknownField";
        case ErrorCode::UnknownEdgeKind: return "UnknownEdgeKind";
        case ErrorCode::SameDimension: return "SameDimension";
        case ErrorCode::BadDepth: return "BadDepth";
        case ErrorCode::BadThresholds: return "BadThresholds";
        case ErrorCode::EmptyTitle: return "EmptyTitle";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::BadRequest: return "BadRequest";
        case ErrorCode::MethodNotAllowed: return "MethodNotAllowed";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

NodeId::NodeId(std::string value) : value_(std::move(value)) {
    if (!is_valid(value_)) {
        throw Error(ErrorCode::InvalidSlug, "invalid id '" + value_ + "': expected [a-z0-9][a-z0-9-]*");
    }
}

bool NodeId::is_valid(std::string_view value) noexcept {
    if (value.empty()) return false;
    auto alnum = [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); };
    if (!alnum(value.front())) return false;
    return std::all_of(value.begin(), value.end(), [&](char c) { return alnum(c) || c == '-'; });
}

std::string_view to_string(NodeKind kind) noexcept {
    switch (kind) {
        case NodeKind::Dataset: return "dataset";
        case NodeKind::TaxonomyTerm: return "taxonomy_term";
        case NodeKind::Publication: return "publication";
        case NodeKind::Tool: return "tool";
        case NodeKind::Organization: return "organization";
    }
    return "unknown";
}

std::string_view to_string(EdgeKind kind) noexcept {
    switch (kind) {
        case EdgeKind::ClassifiedAs: return "classified_as";
        case EdgeKind::ParentOf: return "parent_of";
        case EdgeKind::UsedIn: return "used_in";
        case EdgeKind::CompatibleWith: return "compatible_with";
        case EdgeKind::DerivedFrom: return "derived_from";
        case EdgeKind::ValidatedOn: return "validated_on";
        case EdgeKind::Processes: return "processes";
        case EdgeKind::MaintainedBy: return "maintained_by";
    }
    return "unknown";
}

std::optional<NodeKind> node_kind_from_string(std::string_view name) noexcept {
    for (auto kind : kAllNodeKinds) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view name) noexcept {
    for (auto kind : kAllEdgeKinds) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

bool edge_kind_permits(EdgeKind kind, NodeKind src, NodeKind dst) noexcept {
    using K = NodeKind;
    switch (kind) {
        case EdgeKind::ClassifiedAs: return src == K::Dataset && dst == K::TaxonomyTerm;
        case EdgeKind::ParentOf: return src == K::TaxonomyTerm && dst == K::TaxonomyTerm;
        case EdgeKind::UsedIn: return src == K::Dataset && dst == K::Publication;
        case EdgeKind::CompatibleWith: return src == K::Tool && dst == K::TaxonomyTerm;
        case EdgeKind::DerivedFrom: return src == K::Dataset && dst == K::Dataset;
        case EdgeKind::ValidatedOn:
            return (src == K::Publication || src == K::Tool) && dst == K::Dataset;
        case EdgeKind::Processes: return src == K::Tool && dst == K::Dataset;
        case EdgeKind::MaintainedBy: return src == K::Dataset && dst == K::Organization;
    }
    return false;
}

const std::string* Node::string_attribute(std::string_view key) const {
    auto it = attributes.find(key);
    if (it == attributes.end()) return nullptr;
    return std::get_if<std::string>(&it->second);
}

void Graph::add_node(Node node) {
    if (!NodeId::is_valid(node.id.str())) {
        throw Error(ErrorCode::InvalidSlug, "invalid node id '" + node.id.str() + "'");
    }
    if (node.label.empty()) {
        throw Error(ErrorCode::ValidationFailed, "node '" + node.id.str() + "' has an empty label");
    }
    if (contains(node.id)) {
        throw Error(ErrorCode::DuplicateId, "node '" + node.id.str() + "' already exists");
    }
    NodeId id = node.id;
    nodes_.emplace(id, std::move(node));
    out_[id];
    in_[id];
}

void Graph::remove_node(const NodeId& id) {
    if (!contains(id)) {
        throw Error(ErrorCode::UnknownNode, "unknown node '" + id.str() + "'");
    }
    std::vector<Edge> incident;
    for (const auto& [kind, dst] : out_.at(id)) incident.push_back({id, kind, dst});
    for (const auto& [kind, src] : in_.at(id)) incident.push_back({src, kind, id});
    for (const auto& edge : incident) {
        if (contains(edge)) remove_edge(edge);
    }
    out_.erase(id);
    in_.erase(id);
    nodes_.erase(id);
}

void Graph::check_edge(const Edge& edge) const {
    const Node* src = find(edge.src);
    const Node* dst = find(edge.dst);
    if (src == nullptr || dst == nullptr) {
        throw Error(ErrorCode::MissingEndpoint,
                    "edge endpoint '" + (src == nullptr ? edge.src : edge.dst).str() + "' does not exist");
    }
    if (edge.src == edge.dst) {
        throw Error(ErrorCode::SelfLoop, "self-loop on '" + edge.src.str() + "'");
    }
    if (!edge_kind_permits(edge.kind, src->kind, dst->kind)) {
        throw Error(ErrorCode::KindMismatch,
                    std::string(to_string(edge.kind)) + " does not accept " +
                        std::string(to_string(src->kind)) + " -> " + std::string(to_string(dst->kind)));
    }
    if (edge.kind == EdgeKind::ParentOf) {
        const std::string* a = src->string_attribute(kDimensionAttribute);
        const std::string* b = dst->string_attribute(kDimensionAttribute);
        if ((a == nullptr) != (b == nullptr) || (a != nullptr && *a != *b)) {
            throw Error(ErrorCode::CrossDimensionParent,
                        "parent_of between '" + edge.src.str() + "' and '" + edge.dst.str() +
                            "' crosses dimensions");
        }
    }
    if (edge.kind == EdgeKind::CompatibleWith) {
        const std::string* dim = dst->string_attribute(kDimensionAttribute);
        if (dim == nullptr || *dim != "format") {
            throw Error(ErrorCode::NonFormatCompatibility,
                        "compatible_with target '" + edge.dst.str() + "' is not a format term");
        }
    }
    if (contains(edge)) {
        throw Error(ErrorCode::DuplicateEdge, "duplicate edge " + edge.src.str() + " " +
                                                  std::string(to_string(edge.kind)) + " " + edge.dst.str());
    }
}

void Graph::add_edge(const Edge& edge) {
    check_edge(edge);
    edges_.insert(edge);
    out_[edge.src].emplace(edge.kind, edge.dst);
    in_[edge.dst].emplace(edge.kind, edge.src);
}

void Graph::remove_edge(const Edge& edge) {
    if (edges_.erase(edge) == 0) {
        throw Error(ErrorCode::NotFound, "no such edge " + edge.src.str() + " " +
                                             std::string(to_string(edge.kind)) + " " + edge.dst.str());
    }
    out_[edge.src].erase({edge.kind, edge.dst});
    in_[edge.dst].erase({edge.kind, edge.src});
}

const Node& Graph::node(const NodeId& id) const {
    const Node* n = find(id);
    if (n == nullptr) throw Error(ErrorCode::UnknownNode, "unknown node '" + id.str() + "'");
    return *n;
}

const Node* Graph::find(const NodeId& id) const noexcept {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

const std::set<std::pair<EdgeKind, NodeId>>& Graph::out_edges(const NodeId& id) const {
    auto it = out_.find(id);
    if (it == out_.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + id.str() + "'");
    return it->second;
}

const std::set<std::pair<EdgeKind, NodeId>>& Graph::in_edges(const NodeId& id) const {
    auto it = in_.find(id);
    if (it == in_.end()) throw Error(ErrorCode::UnknownNode, "unknown node '" + id.str() + "'");
    return it->second;
}

std::vector<NodeId> Graph::neighbors(const NodeId& id, std::optional<EdgeKind> kind,
                                     Direction direction) const {
    std::set<NodeId> found;
    auto collect = [&](const Adjacency& adjacency) {
        for (const auto& [k, other] : adjacency) {
            if (!kind || *kind == k) found.insert(other);
        }
    };
    if (direction != Direction::Incoming) collect(out_edges(id));
    if (direction != Direction::Outgoing) collect(in_edges(id));
    return {found.begin(), found.end()};
}

std::size_t Graph::degree(const NodeId& id) const {
    return out_edges(id).size() + in_edges(id).size();
}

std::vector<NodeId> Graph::nodes_of_kind(NodeKind kind) const {
    std::vector<NodeId> ids;
    for (const auto& [id, n] : nodes_) {
        if (n.kind == kind) ids.push_back(id);
    }
    return ids;
}

}  // namespace atlas
