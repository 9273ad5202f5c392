#pragma once

#include <atlas/catalog.hpp>

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace atlas {

enum class CellLabel { Desert, Sparse, Normal, Oasis };
std::string_view to_string(CellLabel label) noexcept;

struct HeatmapMatrix {
    Dimension row_dimension = Dimension::Domain;
    Dimension col_dimension = Dimension::Lifecycle;
    std::vector<NodeId> rows;
    std::vector<NodeId> cols;
    std::vector<std::vector<std::size_t>> cells;    // rows x cols
    std::vector<std::vector<CellLabel>> labels;     // empty until classified
    std::size_t desert_max = 0;
    std::size_t oasis_min = 0;

    std::size_t at(const NodeId& row, const NodeId& col) const;
    CellLabel label_at(const NodeId& row, const NodeId& col) const;
};

/// cell(r, c) = datasets with a classification at or below r and one at or
/// below c. Rows and columns are the terms at `depth` (1 = roots) in
/// taxonomy order. Throws SameDimension or BadDepth.
HeatmapMatrix heatmap(const Catalog& catalog, Dimension row_dimension, Dimension col_dimension, int depth = 1);

/// Labels every cell. A cell <= desert_max is a desert, >= oasis_min an
/// oasis; otherwise sparse when below the median of the nonzero cells and
/// normal at or above it. oasis_min defaults to max(3, p90 of nonzero cells)
/// using the nearest-rank percentile. Throws BadThresholds when an explicit
/// oasis_min is not greater than desert_max.
HeatmapMatrix classify_cells(HeatmapMatrix matrix, std::size_t desert_max = 0,
                             std::optional<std::size_t> oasis_min = std::nullopt);

struct SunburstNode {
    NodeId term;
    std::string label;
    std::size_t count = 0;
    std::vector<SunburstNode> children;
};

std::vector<SunburstNode> sunburst(const Catalog& catalog, Dimension dimension);

/// Layers that can be toggled in a graph export. Datasets are always present.
enum class Layer { Domain, Lifecycle, DataType, Format, Tools, Publications, Organizations };
std::string_view to_string(Layer layer) noexcept;
std::optional<Layer> layer_from_string(std::string_view name) noexcept;
std::set<Layer> all_layers();

struct GraphExportNode {
    NodeId id;
    NodeKind kind = NodeKind::Dataset;
    std::string label;
    std::optional<Dimension> dimension;
    std::size_t degree = 0;  // on the full graph
};

struct GraphExportLink {
    NodeId source;
    NodeId target;
    EdgeKind kind = EdgeKind::ClassifiedAs;
};

struct GraphExport {
    std::vector<GraphExportNode> nodes;
    std::vector<GraphExportLink> links;
    std::set<Layer> layers;
};

GraphExport graph_export(const Catalog& catalog, const std::set<Layer>& layers);

/// Datasets by descending degree, ties by id; at most top_k entries.
/// Throws BadRequest when top_k is zero.
std::vector<std::pair<NodeId, std::size_t>> dataset_influence(const Catalog& catalog, std::size_t top_k);

nlohmann::json to_json(const HeatmapMatrix& matrix, const Taxonomy& taxonomy);
nlohmann::json to_json(const std::vector<SunburstNode>& roots);
nlohmann::json to_json(const GraphExport& graph);

}  // namespace atlas
