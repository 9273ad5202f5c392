#include <atlas/analytics.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace atlas {

std::string_view to_string(CellLabel label) noexcept {
    switch (label) {
        case CellLabel::Desert: return "desert";
        case CellLabel::Sparse: return "sparse";
        case CellLabel::Normal: return "normal";
        case CellLabel::Oasis: return "oasis";
    }
    return "desert";
}

namespace {

std::size_t index_of(const std::vector<NodeId>& ids, const NodeId& id) {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw Error(ErrorCode::UnknownTerm, "term '" + id.str() + "' is not a heatmap axis");
    return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace

std::size_t HeatmapMatrix::at(const NodeId& row, const NodeId& col) const {
    return cells[index_of(rows, row)][index_of(cols, col)];
}

CellLabel HeatmapMatrix::label_at(const NodeId& row, const NodeId& col) const {
    if (labels.empty()) throw Error(ErrorCode::BadRequest, "heatmap cells have not been classified");
    return labels[index_of(rows, row)][index_of(cols, col)];
}

HeatmapMatrix heatmap(const Catalog& catalog, Dimension row_dimension, Dimension col_dimension, int depth) {
    if (row_dimension == col_dimension) {
        throw Error(ErrorCode::SameDimension, "heatmap rows and columns must use different dimensions");
    }
    if (depth < 1) throw Error(ErrorCode::BadDepth, "heatmap depth must be a positive integer");

    const Taxonomy& tax = catalog.taxonomy;
    HeatmapMatrix m;
    m.row_dimension = row_dimension;
    m.col_dimension = col_dimension;
    m.rows = tax.terms_at_depth(row_dimension, depth);
    m.cols = tax.terms_at_depth(col_dimension, depth);
    m.cells.assign(m.rows.size(), std::vector<std::size_t>(m.cols.size(), 0));

    for (const auto& [_, record] : catalog.datasets) {
        const auto closure = tax.closure({record.classifications.begin(), record.classifications.end()});
        for (std::size_t r = 0; r < m.rows.size(); ++r) {
            if (closure.count(m.rows[r]) == 0) continue;
            for (std::size_t c = 0; c < m.cols.size(); ++c) {
                if (closure.count(m.cols[c]) != 0) ++m.cells[r][c];
            }
        }
    }
    return m;
}

HeatmapMatrix classify_cells(HeatmapMatrix m, std::size_t desert_max, std::optional<std::size_t> oasis_min) {
    if (oasis_min && *oasis_min <= desert_max) {
        throw Error(ErrorCode::BadThresholds, "oasis_min (" + std::to_string(*oasis_min) +
                                                  ") must be greater than desert_max (" +
                                                  std::to_string(desert_max) + ")");
    }
    std::vector<std::size_t> nonzero;
    for (const auto& row : m.cells) {
        for (auto v : row) {
            if (v > 0) nonzero.push_back(v);
        }
    }
    std::sort(nonzero.begin(), nonzero.end());

    double median = 0.0;
    if (!nonzero.empty()) {
        const std::size_t n = nonzero.size();
        median = n % 2 == 1 ? static_cast<double>(nonzero[n / 2])
                            : (static_cast<double>(nonzero[n / 2 - 1]) + static_cast<double>(nonzero[n / 2])) / 2.0;
    }
    std::size_t oasis = 3;
    if (oasis_min) {
        oasis = *oasis_min;
    } else {
        if (!nonzero.empty()) {
            const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(nonzero.size())));
            oasis = std::max<std::size_t>(3, nonzero[std::max<std::size_t>(rank, 1) - 1]);
        }
        oasis = std::max(oasis, desert_max + 1);
    }

    m.desert_max = desert_max;
    m.oasis_min = oasis;
    m.labels.assign(m.cells.size(), {});
    for (std::size_t r = 0; r < m.cells.size(); ++r) {
        for (auto v : m.cells[r]) {
            CellLabel label;
            if (v <= desert_max) {
                label = CellLabel::Desert;
            } else if (v >= oasis) {
                label = CellLabel::Oasis;
            } else if (static_cast<double>(v) < median) {
                label = CellLabel::Sparse;
            } else {
                label = CellLabel::Normal;
            }
            m.labels[r].push_back(label);
        }
    }
    return m;
}

std::vector<SunburstNode> sunburst(const Catalog& catalog, Dimension dimension) {
    const Taxonomy& tax = catalog.taxonomy;
    const auto counts = tax.rollup_counts(catalog.dataset_classifications());
    auto build = [&](auto&& self, const NodeId& id) -> SunburstNode {
        SunburstNode node{id, tax.term(id).label, counts.at(id), {}};
        for (const NodeId& child : tax.children(id)) node.children.push_back(self(self, child));
        return node;
    };
    std::vector<SunburstNode> roots;
    for (const NodeId& root : tax.roots(dimension)) roots.push_back(build(build, root));
    return roots;
}

std::string_view to_string(Layer layer) noexcept {
    switch (layer) {
        case Layer::Domain: return "domain";
        case Layer::Lifecycle: return "lifecycle";
        case Layer::DataType: return "datatype";
        case Layer::Format: return "format";
        case Layer::Tools: return "tools";
        case Layer::Publications: return "publications";
        case Layer::Organizations: return "organizations";
    }
    return "domain";
}

std::optional<Layer> layer_from_string(std::string_view name) noexcept {
    for (auto layer : all_layers()) {
        if (to_string(layer) == name) return layer;
    }
    return std::nullopt;
}

std::set<Layer> all_layers() {
    return {Layer::Domain, Layer::Lifecycle, Layer::DataType, Layer::Format,
            Layer::Tools,  Layer::Publications, Layer::Organizations};
}

GraphExport graph_export(const Catalog& catalog, const std::set<Layer>& layers) {
    const Graph& g = catalog.graph;
    auto dimension_layer = [](Dimension d) {
        switch (d) {
            case Dimension::Domain: return Layer::Domain;
            case Dimension::Lifecycle: return Layer::Lifecycle;
            case Dimension::DataType: return Layer::DataType;
            case Dimension::Format: return Layer::Format;
        }
        return Layer::Domain;
    };

    GraphExport out;
    out.layers = layers;
    std::set<NodeId> included;
    for (const auto& [id, node] : g.nodes()) {
        std::optional<Dimension> dimension;
        bool keep = false;
        switch (node.kind) {
            case NodeKind::Dataset: keep = true; break;
            case NodeKind::TaxonomyTerm:
                dimension = catalog.taxonomy.term(id).dimension;
                keep = layers.count(dimension_layer(*dimension)) != 0;
                break;
            case NodeKind::Tool: keep = layers.count(Layer::Tools) != 0; break;
            case NodeKind::Publication: keep = layers.count(Layer::Publications) != 0; break;
            case NodeKind::Organization: keep = layers.count(Layer::Organizations) != 0; break;
        }
        if (!keep) continue;
        included.insert(id);
        out.nodes.push_back({id, node.kind, node.label, dimension, g.degree(id)});
    }
    for (const Edge& e : g.edges()) {
        if (included.count(e.src) && included.count(e.dst)) out.links.push_back({e.src, e.dst, e.kind});
    }
    return out;
}

std::vector<std::pair<NodeId, std::size_t>> dataset_influence(const Catalog& catalog, std::size_t top_k) {
    if (top_k == 0) throw Error(ErrorCode::BadRequest, "top_k must be at least 1");
    std::vector<std::pair<NodeId, std::size_t>> ranked;
    for (const auto& [id, _] : catalog.datasets) ranked.emplace_back(id, catalog.graph.degree(id));
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > top_k) ranked.resize(top_k);
    return ranked;
}

nlohmann::json to_json(const HeatmapMatrix& m, const Taxonomy& taxonomy) {
    auto axis = [&](const std::vector<NodeId>& ids) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& id : ids) out.push_back({{"id", id.str()}, {"label", taxonomy.term(id).label}});
        return out;
    };
    nlohmann::json j = {{"row_dimension", to_string(m.row_dimension)},
                        {"col_dimension", to_string(m.col_dimension)},
                        {"rows", axis(m.rows)},
                        {"cols", axis(m.cols)},
                        {"cells", m.cells}};
    if (!m.labels.empty()) {
        nlohmann::json labels = nlohmann::json::array();
        for (const auto& row : m.labels) {
            nlohmann::json r = nlohmann::json::array();
            for (auto l : row) r.push_back(to_string(l));
            labels.push_back(std::move(r));
        }
        j["labels"] = std::move(labels);
        j["thresholds"] = {{"desert_max", m.desert_max}, {"oasis_min", m.oasis_min}};
    }
    return j;
}

nlohmann::json to_json(const std::vector<SunburstNode>& roots) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& n : roots) {
        out.push_back({{"term", n.term.str()}, {"label", n.label}, {"count", n.count}, {"children", to_json(n.children)}});
    }
    return out;
}

nlohmann::json to_json(const GraphExport& graph) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : graph.nodes) {
        nlohmann::json node = {{"id", n.id.str()}, {"kind", to_string(n.kind)}, {"label", n.label}};
        if (n.dimension) node["dimension"] = to_string(*n.dimension);
        node["degree"] = n.degree;
        nodes.push_back(std::move(node));
    }
    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : graph.links) {
        links.push_back({{"source", l.source.str()}, {"target", l.target.str()}, {"kind", to_string(l.kind)}});
    }
    return {{"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

}  // namespace atlas
