// Shared fixtures for the unit and acceptance tests: seed paths, random
// catalog/query generators, and brute-force oracles that only use raw
// parent pointers (never Taxonomy's own navigation).
#pragma once

#include <atlas/catalog.hpp>
#include <atlas/query.hpp>
#include <atlas/search.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace atlas_test {

namespace fs = std::filesystem;
using atlas::Dimension;
using atlas::NodeId;

inline fs::path source_dir() { return fs::path(ATLAS_SOURCE_DIR); }
inline fs::path seed_dir() { return source_dir() / "seed" / "catalog"; }
inline fs::path core_dir() { return source_dir() / "seed" / "core"; }

/// Temporary directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "atlas") {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = fs::temp_directory_path() / (tag + "-" + std::to_string(rng()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

inline void copy_tree(const fs::path& from, const fs::path& to) {
    fs::create_directories(to);
    fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

// ---------------------------------------------------------------------------
// Random catalogs

struct RawDataset {
    std::string id;
    std::string title;
    std::string description;
    std::set<std::string> classifications;
};

/// The generated instance kept in plain form alongside the built Catalog.
struct RawCatalog {
    std::vector<atlas::Term> terms;
    std::map<std::string, std::string> parent;  // child -> parent
    std::map<std::string, Dimension> dimension;
    std::vector<RawDataset> datasets;
};

inline const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> words = {"engine", "Bearing", "vision", "CAD",    "requirements",
                                                   "sensor", "turbofan", "LIDAR", "bridge", "materials",
                                                   "wear",   "thermal", "fatigue"};
    return words;
}

template <typename Rng>
std::string random_words(Rng& rng, int min_words, int max_words) {
    std::uniform_int_distribution<int> count(min_words, max_words);
    std::uniform_int_distribution<std::size_t> pick(0, vocabulary().size() - 1);
    std::string out;
    for (int i = count(rng); i > 0; --i) {
        if (!out.empty()) out += ' ';
        out += vocabulary()[pick(rng)];
    }
    return out;
}

/// Up to `max_terms` terms over all four dimensions, each dimension non-empty.
/// Parents always point at an earlier term of the same dimension, so the
/// forest is acyclic by construction.
template <typename Rng>
std::vector<atlas::Term> random_terms(Rng& rng, int max_terms) {
    std::uniform_int_distribution<int> size(4, std::max(4, max_terms));
    const int n = size(rng);
    std::vector<atlas::Term> terms;
    std::map<Dimension, std::vector<std::size_t>> by_dimension;
    std::uniform_int_distribution<int> dim_pick(0, 3);
    std::bernoulli_distribution has_parent(0.6);
    for (int i = 0; i < n; ++i) {
        const Dimension d = i < 4 ? atlas::kAllDimensions[i] : atlas::kAllDimensions[dim_pick(rng)];
        atlas::Term t;
        t.id = NodeId("t" + std::to_string(i));
        t.dimension = d;
        t.label = "Term " + std::to_string(i);
        auto& same = by_dimension[d];
        if (!same.empty() && has_parent(rng)) {
            std::uniform_int_distribution<std::size_t> p(0, same.size() - 1);
            t.parent = terms[same[p(rng)]].id;
        }
        same.push_back(terms.size());
        terms.push_back(std::move(t));
    }
    return terms;
}

template <typename Rng>
RawCatalog random_raw_catalog(Rng& rng, int max_datasets, int max_terms) {
    RawCatalog raw;
    raw.terms = random_terms(rng, max_terms);
    std::map<Dimension, std::vector<std::string>> by_dimension;
    for (const auto& t : raw.terms) {
        raw.dimension[t.id.str()] = t.dimension;
        if (t.parent) raw.parent[t.id.str()] = t.parent->str();
        by_dimension[t.dimension].push_back(t.id.str());
    }
    std::uniform_int_distribution<int> count(0, max_datasets);
    std::uniform_int_distribution<int> labels_per_dim(0, 2);
    const int m = count(rng);
    for (int j = 0; j < m; ++j) {
        RawDataset d;
        d.id = "d" + std::to_string(j);
        d.title = random_words(rng, 1, 3);
        d.description = random_words(rng, 0, 5);
        for (auto dim : atlas::kAllDimensions) {
            const auto& pool = by_dimension[dim];
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            for (int k = labels_per_dim(rng); k > 0; --k) d.classifications.insert(pool[pick(rng)]);
        }
        raw.datasets.push_back(std::move(d));
    }
    return raw;
}

inline atlas::Catalog build(const RawCatalog& raw) {
    std::vector<atlas::DatasetRecord> records;
    for (const auto& d : raw.datasets) {
        atlas::DatasetRecord r;
        r.id = NodeId(d.id);
        r.title = d.title;
        r.description = d.description;
        r.source_url = "https://example.org/" + d.id;
        for (const auto& c : d.classifications) r.classifications.emplace_back(c);
        records.push_back(std::move(r));
    }
    return atlas::build_catalog(atlas::Taxonomy(raw.terms), std::move(records), {}, {}, {});
}

// ---------------------------------------------------------------------------
// Brute-force oracles

inline std::set<std::string> self_and_ancestors(const RawCatalog& raw, std::string id) {
    std::set<std::string> out{id};
    for (auto it = raw.parent.find(id); it != raw.parent.end(); it = raw.parent.find(it->second)) {
        out.insert(it->second);
    }
    return out;
}

/// True when some label of `d` is at or below `term`.
inline bool labeled_under(const RawCatalog& raw, const RawDataset& d, const std::string& term) {
    for (const auto& c : d.classifications) {
        if (self_and_ancestors(raw, c).count(term) != 0) return true;
    }
    return false;
}

inline std::string ascii_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline bool text_matches(const RawDataset& d, const std::optional<std::string>& text) {
    if (!text || text->empty()) return true;
    const std::string needle = ascii_lower(*text);
    return ascii_lower(d.title).find(needle) != std::string::npos ||
           ascii_lower(d.description).find(needle) != std::string::npos;
}

/// Dataset ids matching `selection`, ignoring dimension `skip` when given.
inline std::vector<std::string> oracle_matches(const RawCatalog& raw, const atlas::FacetSelection& selection,
                                               std::optional<Dimension> skip = std::nullopt) {
    std::vector<std::string> out;
    for (const auto& d : raw.datasets) {
        bool ok = text_matches(d, selection.text);
        for (const auto& [dim, chosen] : selection.terms) {
            if (!ok) break;
            if (chosen.empty() || (skip && *skip == dim)) continue;
            ok = std::any_of(chosen.begin(), chosen.end(),
                             [&](const NodeId& t) { return labeled_under(raw, d, t.str()); });
        }
        if (ok) out.push_back(d.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::map<std::string, std::size_t> oracle_facet_counts(const RawCatalog& raw,
                                                              const atlas::FacetSelection& selection) {
    std::map<std::string, std::size_t> out;
    std::map<Dimension, std::vector<std::string>> base;
    for (auto dim : atlas::kAllDimensions) base[dim] = oracle_matches(raw, selection, dim);
    for (const auto& t : raw.terms) {
        std::size_t n = 0;
        for (const auto& id : base[t.dimension]) {
            const auto& d = *std::find_if(raw.datasets.begin(), raw.datasets.end(),
                                          [&](const RawDataset& x) { return x.id == id; });
            if (labeled_under(raw, d, t.id.str())) ++n;
        }
        out[t.id.str()] = n;
    }
    return out;
}

inline std::map<std::string, std::size_t> oracle_rollup(const RawCatalog& raw) {
    std::map<std::string, std::size_t> out;
    for (const auto& t : raw.terms) {
        std::size_t n = 0;
        for (const auto& d : raw.datasets) n += labeled_under(raw, d, t.id.str()) ? 1 : 0;
        out[t.id.str()] = n;
    }
    return out;
}

template <typename Rng>
atlas::FacetSelection random_selection(Rng& rng, const RawCatalog& raw) {
    atlas::FacetSelection s;
    std::bernoulli_distribution use_dim(0.5);
    std::uniform_int_distribution<int> how_many(1, 3);
    std::map<Dimension, std::vector<std::string>> pool;
    for (const auto& t : raw.terms) pool[t.dimension].push_back(t.id.str());
    for (auto dim : atlas::kAllDimensions) {
        if (!use_dim(rng)) continue;
        std::uniform_int_distribution<std::size_t> pick(0, pool[dim].size() - 1);
        for (int k = how_many(rng); k > 0; --k) s.terms[dim].insert(NodeId(pool[dim][pick(rng)]));
    }
    std::uniform_int_distribution<int> text_mode(0, 9);
    switch (text_mode(rng)) {
        case 0: s.text = ascii_lower(vocabulary()[rng() % vocabulary().size()]); break;
        case 1: {
            std::string w = vocabulary()[rng() % vocabulary().size()];
            for (char& c : w) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            s.text = w.substr(0, 1 + rng() % w.size());
            break;
        }
        case 2: s.text = "ne"; break;
        default: break;
    }
    return s;
}

inline std::vector<std::string> ids_of(const atlas::ResultSet& r) {
    std::vector<std::string> out;
    for (const auto& id : r.ids) out.push_back(id.str());
    return out;
}

// ---------------------------------------------------------------------------
// Random queries

template <typename Rng>
std::string random_literal(Rng& rng) {
    static const std::string alphabet = "abcXYZ019 -_.\"\\\t\n&<=()~";
    std::uniform_int_distribution<int> len(0, 8);
    std::string out;
    for (int i = len(rng); i > 0; --i) out += alphabet[rng() % alphabet.size()];
    return out;
}

template <typename Rng>
atlas::Expr random_expr(Rng& rng, atlas::NodeKind target, int depth) {
    using atlas::Expr;
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 2);
    switch (pick(rng)) {
        case 0: {
            const auto& fields = atlas::queryable_fields(target);
            const auto ops = {atlas::CompareOp::Eq, atlas::CompareOp::Ne, atlas::CompareOp::Contains};
            return Expr::field_pred(fields[rng() % fields.size()], *(ops.begin() + rng() % 3), random_literal(rng));
        }
        case 1: return Expr::facet_pred(atlas::kAllDimensions[rng() % 4], random_literal(rng));
        case 2: {
            const auto edge = atlas::kAllEdgeKinds[rng() % std::size(atlas::kAllEdgeKinds)];
            if (rng() % 2) return Expr::edge_pred(edge, std::nullopt);
            return Expr::edge_pred(edge, "n" + std::to_string(rng() % 100));
        }
        case 3: return Expr::negate(random_expr(rng, target, depth - 1));
        default: {
            std::uniform_int_distribution<int> arity(2, 3);
            std::vector<Expr> children;
            for (int i = arity(rng); i > 0; --i) children.push_back(random_expr(rng, target, depth - 1));
            return rng() % 2 ? Expr::all_of(std::move(children)) : Expr::any_of(std::move(children));
        }
    }
}

template <typename Rng>
atlas::Query random_query(Rng& rng) {
    atlas::Query q;
    const atlas::NodeKind kinds[] = {atlas::NodeKind::Dataset, atlas::NodeKind::Publication, atlas::NodeKind::Tool,
                                     atlas::NodeKind::Organization};
    q.target = kinds[rng() % 4];
    if (rng() % 8 != 0) q.where = random_expr(rng, q.target, 4);
    return q;
}

/// Fifty queries that each must fail with a positioned SyntaxError.
inline const std::vector<std::string>& malformed_queries() {
    static const std::vector<std::string> corpus = {
        "",
        "FIND",
        "FIND datasets",
        "FIND dataset WHERE",
        "FIND dataset WHERE AND",
        "FIND dataset WHERE OR",
        "FIND dataset WHERE NOT",
        "FIND dataset WHERE (",
        "FIND dataset WHERE ()",
        "FIND dataset WHERE (domain <= \"x\"",
        "FIND dataset WHERE domain <= \"x\")",
        "FIND dataset WHERE domain",
        "FIND dataset WHERE domain <=",
        "FIND dataset WHERE domain = \"x\"",
        "FIND dataset WHERE domain <= aerospace",
        "FIND dataset WHERE title",
        "FIND dataset WHERE title =",
        "FIND dataset WHERE title = x",
        "FIND dataset WHERE title == \"x\"",
        "FIND dataset WHERE title = \"unterminated",
        "FIND dataset WHERE title = \"bad \\q escape\"",
        "FIND dataset WHERE used_in",
        "FIND dataset WHERE used_in ANY ANY",
        "FIND dataset WHERE domain <= \"x\" AND",
        "FIND dataset WHERE domain <= \"x\" OR",
        "FIND dataset WHERE domain <= \"x\" domain <= \"y\"",
        "FIND dataset WHERE NOT NOT",
        "FIND dataset WHERE title = \"a\" AND OR title = \"b\"",
        "WHERE dataset",
        "dataset WHERE title = \"a\"",
        "FIND dataset title = \"a\"",
        "FIND dataset WHERE title ~",
        "FIND dataset WHERE title != ",
        "FIND dataset WHERE title ! \"a\"",
        "FIND dataset WHERE title @ \"a\"",
        "FIND dataset WHERE (title = \"a\" OR (title = \"b\")",
        "FIND dataset WHERE title = \"a\" )",
        "FIND dataset WHERE ANY",
        "FIND dataset WHERE WHERE",
        "FIND FIND",
        "FIND dataset WHERE <= \"x\"",
        "FIND dataset WHERE \"x\"",
        "FIND dataset WHERE format <= \"x\" AND (lifecycle <= \"y\"",
        "FIND dataset WHERE 123 = \"x\"",
        "FIND tool WHERE compatible_with",
        "FIND dataset WHERE datatype <= \"x\" NOT datatype <= \"y\"",
        "FIND dataset WHERE title = \"a\"\nAND",
        "FIND dataset\nWHERE\n(",
        "FIND publication WHERE year = 2008",
        "FIND dataset WHERE NOT (title = \"a\" AND)",
    };
    return corpus;
}

}  // namespace atlas_test
