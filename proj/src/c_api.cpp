#include <atlas/atlas.h>
#include <atlas/service.hpp>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <cstring>
#include <sstream>

using nlohmann::json;

struct atlas_catalog {
    std::shared_ptr<const atlas::CatalogSnapshot> snapshot;
};

struct atlas_service {
    std::unique_ptr<atlas::CatalogService> service;
    std::unique_ptr<atlas::HttpServer> server;
};

namespace {

thread_local std::string t_last_error;
thread_local std::string t_last_error_json;

void clear_error() {
    t_last_error.clear();
    t_last_error_json.clear();
}

atlas_status set_error(atlas_status status, atlas::ErrorCode code, const std::string& message,
                       const std::optional<atlas::SourcePosition>& position = std::nullopt) {
    t_last_error = message;
    t_last_error_json = atlas::error_body(code, message, position);
    return status;
}

atlas_status status_for(atlas::ErrorCode code) {
    using atlas::ErrorCode;
    switch (code) {
        case ErrorCode::NotFound:
        case ErrorCode::UnknownNode: return ATLAS_ERR_NOT_FOUND;
        case ErrorCode::SyntaxError: return ATLAS_ERR_QUERY_SYNTAX;
        case ErrorCode::UnknownField:
        case ErrorCode::UnknownEdgeKind:
        case ErrorCode::UnknownTerm:
        case ErrorCode::WrongDimension:
        case ErrorCode::AmbiguousLabel: return ATLAS_ERR_QUERY;
        case ErrorCode::Io: return ATLAS_ERR_IO;
        case ErrorCode::BadRequest:
        case ErrorCode::SameDimension:
        case ErrorCode::BadDepth:
        case ErrorCode::BadThresholds:
        case ErrorCode::InvalidSlug:
        case ErrorCode::EmptyTitle: return ATLAS_ERR_INVALID_ARGUMENT;
        default: return ATLAS_ERR_INTERNAL;
    }
}

json findings_json(const std::vector<atlas::Finding>& findings) {
    json out = json::array();
    for (const auto& f : findings) out.push_back(atlas::to_json(f));
    return out;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

/// Runs `body`, translating exceptions into status codes and last-error state.
template <typename F>
atlas_status guarded(F&& body) {
    clear_error();
    try {
        return body();
    } catch (const atlas::CatalogLoadError& e) {
        json j = json::parse(atlas::error_body(e.code(), e.what()));
        j["error"]["findings"] = findings_json(e.findings());
        t_last_error = e.what();
        t_last_error_json = j.dump();
        return e.code() == atlas::ErrorCode::Io ? ATLAS_ERR_IO : ATLAS_ERR_VALIDATION;
    } catch (const atlas::Error& e) {
        return set_error(status_for(e.code()), e.code(), e.what(), e.position());
    } catch (const std::exception& e) {
        return set_error(ATLAS_ERR_INTERNAL, atlas::ErrorCode::Io, e.what());
    } catch (...) {
        return set_error(ATLAS_ERR_INTERNAL, atlas::ErrorCode::Io, "unknown failure");
    }
}

atlas_status invalid(const char* what) {
    return set_error(ATLAS_ERR_INVALID_ARGUMENT, atlas::ErrorCode::BadRequest, what);
}

atlas_status emit(const json& j, char** out) {
    *out = dup_string(j.dump());
    return *out ? ATLAS_OK : set_error(ATLAS_ERR_INTERNAL, atlas::ErrorCode::Io, "out of memory");
}

atlas::Dimension dimension_arg(const char* name) {
    auto d = name ? atlas::dimension_from_string(name) : std::nullopt;
    if (!d) throw atlas::Error(atlas::ErrorCode::BadRequest, std::string("unknown dimension '") + (name ? name : "") + "'");
    return *d;
}

atlas::FacetSelection selection_arg(const char* facets, const char* text) {
    atlas::FacetSelection selection = atlas::parse_facet_param(facets ? facets : "");
    if (text && *text) selection.text = text;
    return selection;
}

}  // namespace

extern "C" {

const char* atlas_version(void) { return "1.0.0"; }

const char* atlas_last_error(void) { return t_last_error.c_str(); }

const char* atlas_last_error_json(void) { return t_last_error_json.c_str(); }

void atlas_string_free(char* str) { std::free(str); }

atlas_status atlas_validate(const char* dir, char** report_json) {
    if (dir == nullptr || report_json == nullptr) return invalid("dir and report_json are required");
    *report_json = nullptr;
    clear_error();
    try {
        auto catalog = atlas::load_catalog(dir);
        return emit({{"ok", true}, {"findings", findings_json(catalog.diagnostics)}}, report_json);
    } catch (const atlas::CatalogLoadError& e) {
        emit({{"ok", false}, {"findings", findings_json(e.findings())}}, report_json);
        return guarded([&]() -> atlas_status { throw; });
    } catch (...) {
        return guarded([&]() -> atlas_status { throw; });
    }
}

atlas_status atlas_catalog_open(const char* dir, atlas_catalog** out) {
    if (dir == nullptr || out == nullptr) return invalid("dir and out are required");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<atlas_catalog>();
        handle->snapshot = atlas::CatalogSnapshot::load(dir);
        *out = handle.release();
        return ATLAS_OK;
    });
}

void atlas_catalog_close(atlas_catalog* catalog) { delete catalog; }

atlas_status atlas_catalog_diagnostics(const atlas_catalog* catalog, char** json_out) {
    if (catalog == nullptr || json_out == nullptr) return invalid("catalog and json_out are required");
    return guarded([&] { return emit(findings_json(catalog->snapshot->catalog().diagnostics), json_out); });
}

atlas_status atlas_catalog_stats(const atlas_catalog* catalog, char** json_out) {
    if (catalog == nullptr || json_out == nullptr) return invalid("catalog and json_out are required");
    return guarded([&] { return emit(atlas::catalog_stats(*catalog->snapshot), json_out); });
}

atlas_status atlas_catalog_heatmap(const atlas_catalog* catalog, const char* row_dimension, const char* col_dimension,
                                   int depth, int desert_max, int oasis_min, char** json_out) {
    if (catalog == nullptr || json_out == nullptr) return invalid("catalog and json_out are required");
    return guarded([&] {
        if (desert_max < 0) throw atlas::Error(atlas::ErrorCode::BadThresholds, "desert_max must be non-negative");
        const auto& c = catalog->snapshot->catalog();
        auto matrix = atlas::heatmap(c, dimension_arg(row_dimension), dimension_arg(col_dimension), depth);
        std::optional<std::size_t> oasis;
        if (oasis_min >= 0) oasis = static_cast<std::size_t>(oasis_min);
        matrix = atlas::classify_cells(std::move(matrix), static_cast<std::size_t>(desert_max), oasis);
        return emit(atlas::to_json(matrix, c.taxonomy), json_out);
    });
}

atlas_status atlas_catalog_query(const atlas_catalog* catalog, const char* query, char** json_out) {
    if (catalog == nullptr || query == nullptr || json_out == nullptr) return invalid("catalog, query and json_out are required");
    return guarded([&] {
        const auto& c = catalog->snapshot->catalog();
        const atlas::Query q = atlas::parse_query(query);
        const atlas::ResultSet results = atlas::evaluate_query(c, q);
        json j = atlas::to_json(results);
        j["target"] = atlas::to_string(q.target);
        j["query"] = atlas::to_string(q);
        json labels = json::array();
        for (const auto& id : results.ids) labels.push_back(c.graph.node(id).label);
        j["labels"] = std::move(labels);
        return emit(j, json_out);
    });
}

atlas_status atlas_catalog_search(const atlas_catalog* catalog, const char* facets, const char* text, char** json_out) {
    if (catalog == nullptr || json_out == nullptr) return invalid("catalog and json_out are required");
    return guarded([&] {
        return emit(atlas::to_json(catalog->snapshot->facets().apply(selection_arg(facets, text))), json_out);
    });
}

atlas_status atlas_catalog_facet_counts(const atlas_catalog* catalog, const char* facets, const char* text,
                                        char** json_out) {
    if (catalog == nullptr || json_out == nullptr) return invalid("catalog and json_out are required");
    return guarded([&] {
        return emit(atlas::facet_counts_to_json(catalog->snapshot->facets().counts(selection_arg(facets, text))),
                    json_out);
    });
}

atlas_status atlas_catalog_export_dcat(const atlas_catalog* catalog, char** json_out) {
    if (catalog == nullptr || json_out == nullptr) return invalid("catalog and json_out are required");
    return guarded([&] { return emit(atlas::export_dcat(catalog->snapshot->catalog()), json_out); });
}

atlas_status atlas_catalog_export_graph(const atlas_catalog* catalog, const char* layers_csv, char** json_out) {
    if (catalog == nullptr || json_out == nullptr) return invalid("catalog and json_out are required");
    return guarded([&] {
        std::set<atlas::Layer> layers;
        if (layers_csv == nullptr) {
            layers = atlas::all_layers();
        } else {
            std::stringstream in(layers_csv);
            std::string name;
            while (std::getline(in, name, ',')) {
                if (name.empty()) continue;
                auto layer = atlas::layer_from_string(name);
                if (!layer) throw atlas::Error(atlas::ErrorCode::BadRequest, "unknown layer '" + name + "'");
                layers.insert(*layer);
            }
        }
        return emit(atlas::to_json(atlas::graph_export(catalog->snapshot->catalog(), layers)), json_out);
    });
}

atlas_status atlas_service_create(const char* dir, atlas_service** out) {
    if (dir == nullptr || out == nullptr) return invalid("dir and out are required");
    *out = nullptr;
    return guarded([&] {
        auto handle = std::make_unique<atlas_service>();
        handle->service = std::make_unique<atlas::CatalogService>(dir);
        handle->server = std::make_unique<atlas::HttpServer>(*handle->service);
        *out = handle.release();
        return ATLAS_OK;
    });
}

void atlas_service_destroy(atlas_service* service) {
    if (service == nullptr) return;
    if (service->server) service->server->stop();
    delete service;
}

atlas_status atlas_service_handle(atlas_service* service, const char* method, const char* target, const char* body,
                                  int* http_status, char** body_out) {
    if (service == nullptr || method == nullptr || target == nullptr || http_status == nullptr || body_out == nullptr) {
        return invalid("service, method, target, http_status and body_out are required");
    }
    return guarded([&] {
        auto request = atlas::parse_request_target(method, target, body ? body : "");
        auto response = service->service->handle(request);
        *http_status = response.status;
        *body_out = dup_string(response.body);
        return ATLAS_OK;
    });
}

atlas_status atlas_service_reload(atlas_service* service, char** json_out) {
    if (service == nullptr || json_out == nullptr) return invalid("service and json_out are required");
    return guarded([&] {
        auto r = service->service->reload();
        return emit({{"reloaded", true},
                     {"changed", r.changed},
                     {"previous_hash", r.previous_hash},
                     {"content_hash", r.content_hash}},
                    json_out);
    });
}

atlas_status atlas_service_listen(atlas_service* service, const char* host, int port) {
    if (service == nullptr || host == nullptr) return invalid("service and host are required");
    return guarded([&] {
        if (!service->server->listen(host, port)) {
            throw atlas::Error(atlas::ErrorCode::Io, "cannot listen on " + std::string(host) + ":" + std::to_string(port));
        }
        return ATLAS_OK;
    });
}

void atlas_service_stop(atlas_service* service) {
    if (service != nullptr && service->server) service->server->stop();
}

}  // extern "C"
