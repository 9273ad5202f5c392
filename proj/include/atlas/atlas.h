/*
 * C interface to the dataset catalog engine.
 *
 * Handles are opaque. Every call returns an atlas_status; on failure the
 * calling thread's last error (atlas_last_error / atlas_last_error_json) holds
 * the details. Strings returned through `char**` out-parameters are JSON
 * documents owned by the caller and released with atlas_string_free.
 */
#ifndef ATLAS_ATLAS_H
#define ATLAS_ATLAS_H

#if defined _WIN32 || defined __CYGWIN__
#ifdef ATLAS_BUILDING_LIBRARY
#define ATLAS_API __declspec(dllexport)
#else
#define ATLAS_API __declspec(dllimport)
#endif
#else
#define ATLAS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum atlas_status {
    ATLAS_OK = 0,
    ATLAS_ERR_INVALID_ARGUMENT = 1, /* null handle or pointer, bad enum name */
    ATLAS_ERR_VALIDATION = 2,       /* catalog has error-level findings */
    ATLAS_ERR_NOT_FOUND = 3,
    ATLAS_ERR_QUERY_SYNTAX = 4,     /* last error JSON carries a position */
    ATLAS_ERR_QUERY = 5,            /* unknown field, term, edge kind or node */
    ATLAS_ERR_IO = 6,
    ATLAS_ERR_INTERNAL = 7
} atlas_status;

typedef struct atlas_catalog atlas_catalog;
typedef struct atlas_service atlas_service;

ATLAS_API const char* atlas_version(void);

/* Message of the last failed call on this thread, "" when none. */
ATLAS_API const char* atlas_last_error(void);
/* {"error": {"code", "message", "position"?, "findings"?}} or "" when none. */
ATLAS_API const char* atlas_last_error_json(void);

ATLAS_API void atlas_string_free(char* str);

/* Validates a catalog directory. Writes {"ok", "findings": [...]} to
 * *report_json on both success and ATLAS_ERR_VALIDATION. */
ATLAS_API atlas_status atlas_validate(const char* dir, char** report_json);

ATLAS_API atlas_status atlas_catalog_open(const char* dir, atlas_catalog** out);
ATLAS_API void atlas_catalog_close(atlas_catalog* catalog);

/* Warning-level findings recorded while loading. */
ATLAS_API atlas_status atlas_catalog_diagnostics(const atlas_catalog* catalog, char** json_out);
ATLAS_API atlas_status atlas_catalog_stats(const atlas_catalog* catalog, char** json_out);

/* Heatmap with desert/oasis labels. oasis_min < 0 selects the default. */
ATLAS_API atlas_status atlas_catalog_heatmap(const atlas_catalog* catalog, const char* row_dimension,
                                             const char* col_dimension, int depth, int desert_max,
                                             int oasis_min, char** json_out);

ATLAS_API atlas_status atlas_catalog_query(const atlas_catalog* catalog, const char* query, char** json_out);

/* facets: "dim:term,dim:term" (may be NULL); text: free-text filter (may be NULL). */
ATLAS_API atlas_status atlas_catalog_search(const atlas_catalog* catalog, const char* facets, const char* text,
                                            char** json_out);
ATLAS_API atlas_status atlas_catalog_facet_counts(const atlas_catalog* catalog, const char* facets,
                                                  const char* text, char** json_out);

ATLAS_API atlas_status atlas_catalog_export_dcat(const atlas_catalog* catalog, char** json_out);
/* layers_csv NULL means every layer; "" means datasets only. */
ATLAS_API atlas_status atlas_catalog_export_graph(const atlas_catalog* catalog, const char* layers_csv,
                                                  char** json_out);

ATLAS_API atlas_status atlas_service_create(const char* dir, atlas_service** out);
ATLAS_API void atlas_service_destroy(atlas_service* service);

/* Dispatches one API request without a socket. target is "/api/...?..." */
ATLAS_API atlas_status atlas_service_handle(atlas_service* service, const char* method, const char* target,
                                            const char* body, int* http_status, char** body_out);
ATLAS_API atlas_status atlas_service_reload(atlas_service* service, char** json_out);

/* Serves HTTP until atlas_service_stop is called from another thread. */
ATLAS_API atlas_status atlas_service_listen(atlas_service* service, const char* host, int port);
ATLAS_API void atlas_service_stop(atlas_service* service);

#ifdef __cplusplus
}
#endif

#endif /* ATLAS_ATLAS_H */
