// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <atlas/analytics.hpp>
#include <atlas/graph.hpp>
#include <atlas/query.hpp>
#include <atlas/search.hpp>
#include <atlas/service.hpp>

#include "support.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace atlas;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kSeedLoadSeconds = 1.0;
constexpr double kEquivalenceSeconds = 10.0;
constexpr int kEquivalencePairs = 1000;
constexpr int kMaxDatasets = 20;
constexpr int kMaxTerms = 30;
constexpr int kFuzzAttempts = 10000;
constexpr int kRollupInstances = 500;
constexpr int kRoundTripQueries = 200;
constexpr std::size_t kMalformedQueries = 50;
constexpr int kApiSelections = 50;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

/// Runs a criterion; an unexpected exception is a failure, not a crash.
void criterion(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        auto [ok, detail] = body();
        report(name, ok, detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
    std::ostringstream out;
    out.precision(3);
    out << std::fixed << s << "s";
    return out.str();
}

// --- seed ------------------------------------------------------------------

std::pair<bool, std::string> seed_catalog() {
    const auto t0 = std::chrono::steady_clock::now();
    const Catalog c = load_catalog(atlas_test::seed_dir());
    const double elapsed = seconds_since(t0);
    const std::vector<std::string> named = {"c-mapss", "abc-cad",   "pure",     "cwru",
                                            "pronostia", "xjtu-sy", "kitti",    "waymo-open",
                                            "nuscenes",  "materials-project", "national-bridge-inventory"};
    std::size_t present = 0;
    for (const auto& id : named) present += c.datasets.count(NodeId(id));
    std::size_t errors = 0;
    for (const auto& f : c.diagnostics) errors += f.level == FindingLevel::Error;
    const bool ok = present == named.size() && present >= 10 && errors == 0 && elapsed < kSeedLoadSeconds;
    return {ok, std::to_string(present) + "/" + std::to_string(named.size()) + " named datasets, " +
                    std::to_string(errors) + " errors, load " + fmt_seconds(elapsed) + " (limit 1s)"};
}

// --- core datasets ---------------------------------------------------------

std::pair<bool, std::string> core_uniqueness() {
    // Reference classification of the three core datasets, as term ids.
    struct Row {
        std::string dataset;
        std::map<Dimension, std::string> terms;
    };
    const std::vector<Row> rows = {
        {"c-mapss",
         {{Dimension::Domain, "aerospace"},
          {Dimension::Lifecycle, "operations-maintenance"},
          {Dimension::DataType, "behavioral-simulation"},
          {Dimension::Format, "structured"}}},
        {"abc-cad",
         {{Dimension::Domain, "cross-domain"},
          {Dimension::Lifecycle, "detailed-design"},
          {Dimension::DataType, "geometric-structural"},
          {Dimension::Format, "domain-specific"}}},
        {"pure",
         {{Dimension::Domain, "cross-domain"},
          {Dimension::Lifecycle, "requirements-definition"},
          {Dimension::DataType, "textual-semantic"},
          {Dimension::Format, "semi-structured"}}},
    };
    const Catalog c = load_catalog(atlas_test::core_dir());
    int checked = 0, wrong = 0;
    std::string first_bad;
    for (const auto& row : rows) {
        for (const auto& [dim, term] : row.terms) {
            std::size_t holders = 0;
            for (const auto& other : rows) holders += other.terms.at(dim) == term;
            if (holders != 1) continue;  // not unique in the table
            FacetSelection s;
            s.terms[dim].insert(NodeId(term));
            ++checked;
            if (atlas_test::ids_of(apply_facets(c, s)) != std::vector<std::string>{row.dataset}) {
                ++wrong;
                if (first_bad.empty()) first_bad = std::string(to_string(dim)) + "=" + term;
            }
        }
    }
    const bool ok = wrong == 0 && checked == 10 && c.datasets.size() == 3;
    return {ok, std::to_string(checked) + " unique single-facet queries, " + std::to_string(wrong) + " wrong" +
                    (first_bad.empty() ? "" : " (first: " + first_bad + ")")};
}

// --- heatmap -----------------------------------------------------------------

std::pair<bool, std::string> desert_oasis() {
    const Catalog c = load_catalog(atlas_test::seed_dir());
    const HeatmapMatrix m = classify_cells(heatmap(c, Dimension::Domain, Dimension::Lifecycle));
    const NodeId disposal("disposal-end-of-life");
    const NodeId om("operations-maintenance");
    std::size_t deserts = 0, oases = 0;
    for (const auto& r : m.rows) {
        deserts += m.label_at(r, disposal) == CellLabel::Desert;
        oases += m.label_at(r, om) == CellLabel::Oasis;
    }
    // the O&M oasis must be carried by the PHM datasets
    FacetSelection phm;
    phm.terms[Dimension::Lifecycle].insert(om);
    const auto om_ids = atlas_test::ids_of(apply_facets(c, phm));
    bool phm_present = true;
    for (const char* id : {"c-mapss", "cwru", "pronostia", "xjtu-sy"}) {
        phm_present = phm_present && std::find(om_ids.begin(), om_ids.end(), id) != om_ids.end();
    }
    const bool ok = deserts == m.rows.size() && oases >= 1 && phm_present;
    return {ok, "disposal deserts " + std::to_string(deserts) + "/" + std::to_string(m.rows.size()) +
                    ", O&M oases " + std::to_string(oases) + ", oasis_min " + std::to_string(m.oasis_min)};
}

// --- facet / DSL equivalence ---------------------------------------------------

std::pair<bool, std::string> facet_dsl_equivalence() {
    std::mt19937 rng(20240601);
    int mismatches = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < kEquivalencePairs; ++i) {
        const auto raw = atlas_test::random_raw_catalog(rng, kMaxDatasets, kMaxTerms);
        if (raw.datasets.size() > static_cast<std::size_t>(kMaxDatasets) ||
            raw.terms.size() > static_cast<std::size_t>(kMaxTerms)) {
            ++mismatches;
            continue;
        }
        const Catalog c = atlas_test::build(raw);
        const FacetSelection s = atlas_test::random_selection(rng, raw);
        const auto want = atlas_test::oracle_matches(raw, s);
        const auto facet_ids = atlas_test::ids_of(apply_facets(c, s));
        // go through the printed DSL text, not just the AST
        const Query q = parse_query(to_string(selection_to_query(s)));
        const auto dsl_ids = atlas_test::ids_of(evaluate_query(c, q));
        bool same = facet_ids == want && dsl_ids == want;
        const auto counts = facet_counts(c, s);
        for (const auto& [id, n] : atlas_test::oracle_facet_counts(raw, s)) same = same && counts.at(NodeId(id)) == n;
        mismatches += !same;
    }
    const double elapsed = seconds_since(t0);
    return {mismatches == 0 && elapsed < kEquivalenceSeconds,
            std::to_string(kEquivalencePairs) + " pairs, " + std::to_string(mismatches) + " mismatches, " +
                fmt_seconds(elapsed) + " (limit 10s)"};
}

// --- graph fuzz --------------------------------------------------------------

// Expected outcome of add_edge, written from the constraint table alone.
std::optional<ErrorCode> expected_outcome(const std::map<std::string, std::pair<NodeKind, std::string>>& nodes,
                                          const std::set<std::tuple<std::string, int, std::string>>& edges,
                                          const std::string& src, EdgeKind kind, const std::string& dst) {
    using K = NodeKind;
    auto s = nodes.find(src);
    auto d = nodes.find(dst);
    if (s == nodes.end() || d == nodes.end()) return ErrorCode::MissingEndpoint;
    if (src == dst) return ErrorCode::SelfLoop;
    const K sk = s->second.first, dk = d->second.first;
    bool permitted = false;
    switch (kind) {
        case EdgeKind::ClassifiedAs: permitted = sk == K::Dataset && dk == K::TaxonomyTerm; break;
        case EdgeKind::ParentOf: permitted = sk == K::TaxonomyTerm && dk == K::TaxonomyTerm; break;
        case EdgeKind::UsedIn: permitted = sk == K::Dataset && dk == K::Publication; break;
        case EdgeKind::CompatibleWith: permitted = sk == K::Tool && dk == K::TaxonomyTerm; break;
        case EdgeKind::DerivedFrom: permitted = sk == K::Dataset && dk == K::Dataset; break;
        case EdgeKind::ValidatedOn: permitted = (sk == K::Publication || sk == K::Tool) && dk == K::Dataset; break;
        case EdgeKind::Processes: permitted = sk == K::Tool && dk == K::Dataset; break;
        case EdgeKind::MaintainedBy: permitted = sk == K::Dataset && dk == K::Organization; break;
    }
    if (!permitted) return ErrorCode::KindMismatch;
    if (kind == EdgeKind::ParentOf && s->second.second != d->second.second) return ErrorCode::CrossDimensionParent;
    if (kind == EdgeKind::CompatibleWith && d->second.second != "format") return ErrorCode::NonFormatCompatibility;
    if (edges.count({src, static_cast<int>(kind), dst})) return ErrorCode::DuplicateEdge;
    return std::nullopt;
}

std::pair<bool, std::string> graph_fuzz() {
    std::mt19937 rng(424242);
    const char* dims[] = {"domain", "lifecycle", "datatype", "format"};
    Graph g;
    std::map<std::string, std::pair<NodeKind, std::string>> nodes;
    std::set<std::tuple<std::string, int, std::string>> edges;
    std::vector<std::string> ids;
    for (int i = 0; i < 40; ++i) {
        const NodeKind kind = kAllNodeKinds[rng() % std::size(kAllNodeKinds)];
        const std::string dim = kind == NodeKind::TaxonomyTerm ? dims[rng() % 4] : "";
        const std::string id = "n" + std::to_string(i);
        Node n{NodeId(id), kind, id, {}};
        if (!dim.empty()) n.attributes.emplace(std::string(kDimensionAttribute), dim);
        g.add_node(std::move(n));
        nodes[id] = {kind, dim};
        ids.push_back(id);
    }
    ids.push_back("ghost");  // never added: exercises MissingEndpoint

    int violations = 0, accepted = 0;
    for (int i = 0; i < kFuzzAttempts; ++i) {
        const std::string src = ids[rng() % ids.size()];
        const std::string dst = ids[rng() % ids.size()];
        const EdgeKind kind = kAllEdgeKinds[rng() % std::size(kAllEdgeKinds)];
        const auto want = expected_outcome(nodes, edges, src, kind, dst);
        const std::size_t before = g.edge_count();
        std::optional<ErrorCode> got;
        try {
            g.add_edge({NodeId(src), kind, NodeId(dst)});
        } catch (const Error& e) {
            got = e.code();
        }
        if (got != want) ++violations;
        if (!got) {
            ++accepted;
            edges.insert({src, static_cast<int>(kind), dst});
        }
        if (g.edge_count() != edges.size() || g.edge_count() != before + (got ? 0 : 1)) ++violations;
    }
    // graph-wide invariants after the run
    std::size_t degree_sum = 0;
    for (const auto& [id, node] : g.nodes()) degree_sum += g.degree(id);
    if (degree_sum != 2 * g.edge_count()) ++violations;
    for (const auto& e : g.edges()) {
        if (!edge_kind_permits(e.kind, g.node(e.src).kind, g.node(e.dst).kind)) ++violations;
    }
    return {violations == 0, std::to_string(kFuzzAttempts) + " attempts, " + std::to_string(accepted) +
                                 " accepted, " + std::to_string(violations) + " violations"};
}

// --- roll-up -----------------------------------------------------------------

std::pair<bool, std::string> rollup() {
    std::mt19937 rng(5150);
    int mismatches = 0;
    for (int i = 0; i < kRollupInstances; ++i) {
        const auto raw = atlas_test::random_raw_catalog(rng, 12, 20);
        Classifications cls;
        for (const auto& d : raw.datasets) {
            auto& set = cls[NodeId(d.id)];
            for (const auto& t : d.classifications) set.insert(NodeId(t));
        }
        const auto got = Taxonomy(raw.terms).rollup_counts(cls);
        const auto want = atlas_test::oracle_rollup(raw);
        bool same = got.size() == want.size();
        for (const auto& [id, n] : want) same = same && got.count(NodeId(id)) && got.at(NodeId(id)) == n;
        mismatches += !same;
    }
    return {mismatches == 0,
            std::to_string(kRollupInstances) + " instances, " + std::to_string(mismatches) + " mismatches"};
}

// --- parser ------------------------------------------------------------------

std::pair<bool, std::string> parser() {
    std::mt19937 rng(777);
    int round_trip_failures = 0;
    for (int i = 0; i < kRoundTripQueries; ++i) {
        const Query q = atlas_test::random_query(rng);
        try {
            if (!(parse_query(to_string(q)) == q)) ++round_trip_failures;
        } catch (const Error&) {
            ++round_trip_failures;
        }
    }
    const auto& corpus = atlas_test::malformed_queries();
    int malformed_failures = 0;
    for (const auto& text : corpus) {
        try {
            parse_query(text);
            ++malformed_failures;
        } catch (const QuerySyntaxError& e) {
            if (!e.position() || e.position()->line < 1 || e.position()->column < 1) ++malformed_failures;
        } catch (const Error&) {
            ++malformed_failures;
        }
    }
    const bool ok = round_trip_failures == 0 && malformed_failures == 0 && corpus.size() == kMalformedQueries;
    return {ok, std::to_string(kRoundTripQueries) + " round trips (" + std::to_string(round_trip_failures) +
                    " failed), " + std::to_string(corpus.size()) + " malformed (" +
                    std::to_string(malformed_failures) + " without positioned SyntaxError)"};
}

// --- catalog round trip --------------------------------------------------------

std::pair<bool, std::string> catalog_round_trip() {
    const Catalog original = load_catalog(atlas_test::seed_dir());
    atlas_test::TempDir dir("atlas-acceptance");
    export_catalog(original, dir.path());
    const Catalog again = load_catalog(dir.path());
    const bool graph_same = original.graph == again.graph;
    std::size_t quality_diffs = 0;
    for (const auto& [id, r] : original.datasets) {
        auto it = again.datasets.find(id);
        if (it == again.datasets.end() || !(it->second.quality == r.quality)) ++quality_diffs;
    }
    const bool ok = graph_same && quality_diffs == 0 && again.datasets.size() == original.datasets.size();
    return {ok, std::string("graph ") + (graph_same ? "identical" : "differs") + " (" +
                    std::to_string(again.graph.node_count()) + " nodes, " + std::to_string(again.graph.edge_count()) +
                    " edges), " + std::to_string(quality_diffs) + " quality differences"};
}

// --- API contract ------------------------------------------------------------

std::pair<bool, std::string> api_contract() {
    CatalogService service(atlas_test::seed_dir());
    const Catalog& c = service.snapshot()->catalog();
    std::mt19937 rng(31337);
    int differences = 0;
    for (int i = 0; i < kApiSelections; ++i) {
        FacetSelection s;
        std::string param;
        for (auto d : kAllDimensions) {
            const auto pool = c.taxonomy.terms_in(d);
            const int picks = static_cast<int>(rng() % 3);
            for (int k = 0; k < picks; ++k) s.terms[d].insert(pool[rng() % pool.size()]);
        }
        for (const auto& [d, terms] : s.terms) {
            for (const auto& t : terms) param += (param.empty() ? "" : ",") + std::string(to_string(d)) + ":" + t.str();
        }
        std::string target = "/api/facets?facets=" + percent_encode(param);
        if (rng() % 4 == 0) {
            s.text = atlas_test::vocabulary()[rng() % atlas_test::vocabulary().size()];
            target += "&q=" + percent_encode(*s.text);
        }
        const HttpResponse r = service.handle(parse_request_target("GET", target));
        const std::string expected = facet_counts_to_json(facet_counts(c, s)).dump();
        differences += r.status != 200 || r.body != expected;
    }
    // The secondary web front end is not part of this build.
    const bool no_secondary = !fs::exists(atlas_test::source_dir() / "web-ui");
    return {differences == 0 && no_secondary,
            std::to_string(kApiSelections) + " selections, " + std::to_string(differences) +
                " byte differences, web-ui " + (no_secondary ? "absent" : "present")};
}

}  // namespace

int main() {
    criterion("seed-catalog", seed_catalog);
    criterion("core-unique-facets", core_uniqueness);
    criterion("gap-analysis-desert-oasis", desert_oasis);
    criterion("facet-dsl-equivalence", facet_dsl_equivalence);
    criterion("graph-schema-fuzz", graph_fuzz);
    criterion("rollup-correctness", rollup);
    criterion("parser-round-trip", parser);
    criterion("catalog-round-trip", catalog_round_trip);
    criterion("api-facets-contract", api_contract);
    std::printf("%s: %d failure(s)\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
