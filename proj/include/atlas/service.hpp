#pragma once

#include <atlas/analytics.hpp>
#include <atlas/catalog.hpp>
#include <atlas/query.hpp>
#include <atlas/search.hpp>

#include <nlohmann/json_fwd.hpp>

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace atlas {

/// Hex SHA-256 over every catalog input file (relative path and bytes), in a
/// fixed order. Identical directories give identical hashes.
std::string catalog_content_hash(const std::filesystem::path& root);

/// An immutable, fully loaded catalog plus its derived indexes. Published
/// through shared_ptr<const>; never mutated after construction.
class CatalogSnapshot {
public:
    CatalogSnapshot(Catalog catalog, std::string content_hash);
    CatalogSnapshot(const CatalogSnapshot&) = delete;
    CatalogSnapshot& operator=(const CatalogSnapshot&) = delete;

    static std::shared_ptr<const CatalogSnapshot> load(const std::filesystem::path& root);

    const Catalog& catalog() const noexcept { return catalog_; }
    const FacetIndex& facets() const noexcept { return facets_; }
    const std::string& content_hash() const noexcept { return content_hash_; }
    std::chrono::system_clock::time_point loaded_at() const noexcept { return loaded_at_; }

private:
    Catalog catalog_;
    FacetIndex facets_;  // points into catalog_
    std::string content_hash_;
    std::chrono::system_clock::time_point loaded_at_;
};

/// `https://scholar.google.com/scholar?q=` + percent-encoded title.
/// Throws Error{EmptyTitle}.
std::string scholar_url(const DatasetRecord& record);
/// RFC 3986 percent-encoding; only unreserved characters pass through.
std::string percent_encode(std::string_view text);

/// DCAT-keyed JSON catalog with one entry per dataset, ordered by id.
nlohmann::json export_dcat(const Catalog& catalog);

/// Totals shown on the dashboard plus per-dimension root counts.
/// The year range covers publication years.
nlohmann::json catalog_stats(const CatalogSnapshot& snapshot);

struct HttpRequest {
    std::string method;  // "GET", "POST"
    std::string path;    // "/api/datasets"
    std::map<std::string, std::string> params;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;  // JSON
};

/// Splits "/path?a=b&c=d" and percent-decodes the query parameters.
HttpRequest parse_request_target(std::string method, std::string_view target, std::string body = {});

/// JSON body for an error: {"error": {"code", "message", "position"?}}.
std::string error_body(ErrorCode code, std::string_view message, const std::optional<SourcePosition>& position = {});

/// Routes API requests against the current snapshot. Reads never block on a
/// reload in progress; reload() builds the replacement off to the side and
/// swaps it in atomically.
class CatalogService {
public:
    /// Throws CatalogLoadError when the catalog has error-level findings.
    explicit CatalogService(std::filesystem::path root);

    std::shared_ptr<const CatalogSnapshot> snapshot() const;

    struct ReloadResult {
        std::string previous_hash;
        std::string content_hash;
        bool changed = false;
    };
    /// On failure the current snapshot stays published and the error propagates.
    ReloadResult reload();

    HttpResponse handle(const HttpRequest& request);

    const std::filesystem::path& root() const noexcept { return root_; }

private:
    HttpResponse route(const HttpRequest& request, const CatalogSnapshot& snapshot);

    std::filesystem::path root_;
    mutable std::mutex publish_mutex_;  // guards current_
    std::mutex reload_mutex_;           // serializes reloads
    std::shared_ptr<const CatalogSnapshot> current_;
};

/// cpp-httplib front end for a CatalogService.
class HttpServer {
public:
    explicit HttpServer(CatalogService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Blocks until stop(). Returns false when the socket cannot be bound.
    bool listen(const std::string& host, int port);
    /// Binds an ephemeral port and returns it (or -1); call listen_after_bind() next.
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace atlas
