// Exercises the shared library through atlas.h only.
#include <atlas/atlas.h>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

using nlohmann::json;

namespace {

const std::string kSeed = std::string(ATLAS_SOURCE_DIR) + "/seed/catalog";
const std::string kCore = std::string(ATLAS_SOURCE_DIR) + "/seed/core";

/// Takes ownership of a returned string.
json take(char* s) {
    REQUIRE(s != nullptr);
    json j = json::parse(s);
    atlas_string_free(s);
    return j;
}

struct CatalogHandle {
    atlas_catalog* ptr = nullptr;
    explicit CatalogHandle(const std::string& dir) { REQUIRE(atlas_catalog_open(dir.c_str(), &ptr) == ATLAS_OK); }
    ~CatalogHandle() { atlas_catalog_close(ptr); }
};

}  // namespace

TEST_CASE("version and empty error state") {
    CHECK(std::string(atlas_version()) == "1.0.0");
    atlas_catalog* c = nullptr;
    REQUIRE(atlas_catalog_open(kCore.c_str(), &c) == ATLAS_OK);
    CHECK(std::string(atlas_last_error()).empty());
    atlas_catalog_close(c);
    atlas_string_free(nullptr);
    atlas_catalog_close(nullptr);
}

TEST_CASE("validate") {
    char* out = nullptr;
    CHECK(atlas_validate(kSeed.c_str(), &out) == ATLAS_OK);
    json j = take(out);
    CHECK(j.at("ok") == true);
    CHECK(j.at("findings").empty());

    CHECK(atlas_validate("/nonexistent/catalog", &out) == ATLAS_ERR_IO);
    CHECK(std::string(atlas_last_error()).size() > 0);
    CHECK(atlas_validate(nullptr, &out) == ATLAS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("queries and errors") {
    CatalogHandle c(kCore);
    char* out = nullptr;
    REQUIRE(atlas_catalog_query(c.ptr, "FIND dataset WHERE domain <= \"Aerospace\"", &out) == ATLAS_OK);
    CHECK(take(out).at("ids") == json::array({"c-mapss"}));

    CHECK(atlas_catalog_query(c.ptr, "FIND dataset WHERE AND", &out) == ATLAS_ERR_QUERY_SYNTAX);
    json err = json::parse(atlas_last_error_json());
    CHECK(err.at("error").at("code") == "SyntaxError");
    CHECK(err.at("error").at("position").at("column") == 20);

    CHECK(atlas_catalog_query(c.ptr, "FIND dataset WHERE colour = \"x\"", &out) == ATLAS_ERR_QUERY);
    CHECK(atlas_catalog_query(c.ptr, "FIND dataset WHERE used_in \"ghost\"", &out) == ATLAS_ERR_NOT_FOUND);
    CHECK(atlas_catalog_query(nullptr, "FIND dataset", &out) == ATLAS_ERR_INVALID_ARGUMENT);
    CHECK(atlas_catalog_query(c.ptr, nullptr, &out) == ATLAS_ERR_INVALID_ARGUMENT);

    // a success clears the last error
    REQUIRE(atlas_catalog_query(c.ptr, "FIND dataset", &out) == ATLAS_OK);
    atlas_string_free(out);
    CHECK(std::string(atlas_last_error()).empty());
}

TEST_CASE("last error is per thread") {
    CatalogHandle c(kCore);
    char* out = nullptr;
    CHECK(atlas_catalog_query(c.ptr, "FIND", &out) == ATLAS_ERR_QUERY_SYNTAX);
    std::string other;
    std::thread([&] { other = atlas_last_error(); }).join();
    CHECK(other.empty());
    CHECK_FALSE(std::string(atlas_last_error()).empty());
}

TEST_CASE("search, counts, stats, heatmap, exports") {
    CatalogHandle c(kCore);
    char* out = nullptr;
    REQUIRE(atlas_catalog_search(c.ptr, "lifecycle:requirements-definition", nullptr, &out) == ATLAS_OK);
    CHECK(take(out).at("ids") == json::array({"pure"}));
    REQUIRE(atlas_catalog_search(c.ptr, nullptr, "CAD", &out) == ATLAS_OK);
    CHECK(take(out).at("ids") == json::array({"abc-cad"}));
    CHECK(atlas_catalog_search(c.ptr, "domain:structured", nullptr, &out) == ATLAS_ERR_QUERY);

    REQUIRE(atlas_catalog_facet_counts(c.ptr, "datatype:geometric-structural", nullptr, &out) == ATLAS_OK);
    json counts = take(out).at("counts");
    CHECK(counts.at("cross-domain") == 1);
    CHECK(counts.at("aerospace") == 0);

    REQUIRE(atlas_catalog_stats(c.ptr, &out) == ATLAS_OK);
    CHECK(take(out).at("datasets") == 3);
    REQUIRE(atlas_catalog_diagnostics(c.ptr, &out) == ATLAS_OK);
    CHECK(take(out).empty());

    REQUIRE(atlas_catalog_heatmap(c.ptr, "domain", "lifecycle", 1, 0, -1, &out) == ATLAS_OK);
    json h = take(out);
    CHECK(h.at("thresholds").at("oasis_min") == 3);
    CHECK(atlas_catalog_heatmap(c.ptr, "domain", "domain", 1, 0, -1, &out) == ATLAS_ERR_INVALID_ARGUMENT);
    CHECK(atlas_catalog_heatmap(c.ptr, "colour", "domain", 1, 0, -1, &out) == ATLAS_ERR_INVALID_ARGUMENT);

    REQUIRE(atlas_catalog_export_dcat(c.ptr, &out) == ATLAS_OK);
    CHECK(take(out).at("dcat:dataset").size() == 3);
    REQUIRE(atlas_catalog_export_graph(c.ptr, "", &out) == ATLAS_OK);
    json g = take(out);
    CHECK(g.at("nodes").size() == 3);
    CHECK(g.at("links").empty());
    REQUIRE(atlas_catalog_export_graph(c.ptr, nullptr, &out) == ATLAS_OK);
    CHECK(take(out).at("nodes").size() > 3);
    CHECK(atlas_catalog_export_graph(c.ptr, "colour", &out) == ATLAS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("open failure reports findings") {
    const auto dir = std::filesystem::temp_directory_path() / "atlas-c-api-broken";
    std::filesystem::remove_all(dir);
    std::filesystem::copy(kCore, dir, std::filesystem::copy_options::recursive);
    {
        json r = json::parse(std::ifstream(dir / "datasets" / "pure.json"));
        r["doi"] = "banana";
        std::ofstream(dir / "datasets" / "pure.json") << r.dump();
    }
    atlas_catalog* c = nullptr;
    CHECK(atlas_catalog_open(dir.c_str(), &c) == ATLAS_ERR_VALIDATION);
    CHECK(c == nullptr);
    json err = json::parse(atlas_last_error_json());
    CHECK(err.at("error").at("findings").dump().find("bad-doi") != std::string::npos);

    char* out = nullptr;
    CHECK(atlas_validate(dir.c_str(), &out) == ATLAS_ERR_VALIDATION);
    CHECK(take(out).at("ok") == false);
    std::filesystem::remove_all(dir);
}

TEST_CASE("service dispatch") {
    atlas_service* s = nullptr;
    REQUIRE(atlas_service_create(kCore.c_str(), &s) == ATLAS_OK);
    int status = 0;
    char* body = nullptr;
    REQUIRE(atlas_service_handle(s, "GET", "/api/datasets/c-mapss", nullptr, &status, &body) == ATLAS_OK);
    CHECK(status == 200);
    CHECK(take(body).at("id") == "c-mapss");
    REQUIRE(atlas_service_handle(s, "GET", "/api/datasets/ghost", nullptr, &status, &body) == ATLAS_OK);
    CHECK(status == 404);
    atlas_string_free(body);
    REQUIRE(atlas_service_handle(s, "POST", "/api/query", "{\"q\":\"FIND dataset\"}", &status, &body) == ATLAS_OK);
    CHECK(status == 200);
    CHECK(take(body).at("total") == 3);

    char* out = nullptr;
    REQUIRE(atlas_service_reload(s, &out) == ATLAS_OK);
    CHECK(take(out).at("changed") == false);
    atlas_service_destroy(s);
    CHECK(atlas_service_create("/nonexistent", &s) == ATLAS_ERR_IO);
}
