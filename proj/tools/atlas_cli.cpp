// atlas: command-line front end over the C API.
//
// Exit codes: 0 success, 1 error-level findings or a failed operation,
// 2 usage error.

#include <atlas/atlas.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CatalogCloser {
    void operator()(atlas_catalog* c) const { atlas_catalog_close(c); }
};
using CatalogHandle = std::unique_ptr<atlas_catalog, CatalogCloser>;

/// Takes ownership of a string returned by the C API.
std::string take(char* s) {
    std::string out = s ? s : "";
    atlas_string_free(s);
    return out;
}

int report_failure(atlas_status status) {
    std::cerr << "atlas: " << atlas_last_error() << '\n';
    return status == ATLAS_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure;
}

void print_findings(const nlohmann::json& findings, std::ostream& out) {
    for (const auto& f : findings) {
        out << std::left << std::setw(8) << f.at("level").get<std::string>() << ' '
            << f.at("code").get<std::string>() << ": " << f.at("message").get<std::string>() << '\n';
    }
}

CatalogHandle open_catalog(const std::string& dir, atlas_status& status) {
    atlas_catalog* raw = nullptr;
    status = atlas_catalog_open(dir.c_str(), &raw);
    if (status == ATLAS_ERR_VALIDATION) {
        auto error = nlohmann::json::parse(atlas_last_error_json());
        print_findings(error["error"].value("findings", nlohmann::json::array()), std::cerr);
    }
    return CatalogHandle(raw);
}

int cmd_validate(const std::string& dir) {
    char* raw = nullptr;
    const atlas_status status = atlas_validate(dir.c_str(), &raw);
    const std::string report = take(raw);
    if (report.empty()) return report_failure(status);
    auto j = nlohmann::json::parse(report);
    print_findings(j.at("findings"), std::cout);
    std::size_t errors = 0;
    std::size_t warnings = 0;
    for (const auto& f : j.at("findings")) (f.at("level") == "error" ? errors : warnings)++;
    std::cout << dir << ": " << errors << " error(s), " << warnings << " warning(s)\n";
    return status == ATLAS_OK ? kExitOk : kExitFailure;
}

void print_heatmap(const nlohmann::json& m) {
    std::size_t width = 0;
    for (const auto& r : m.at("rows")) width = std::max(width, r.at("label").get<std::string>().size());
    std::cout << std::setw(static_cast<int>(width)) << "" << " |";
    for (std::size_t c = 0; c < m.at("cols").size(); ++c) std::cout << " c" << c + 1 << std::setw(8) << "";
    std::cout << '\n';
    for (std::size_t r = 0; r < m.at("rows").size(); ++r) {
        std::cout << std::left << std::setw(static_cast<int>(width)) << m["rows"][r].at("label").get<std::string>()
                  << std::right << " |";
        for (std::size_t c = 0; c < m.at("cols").size(); ++c) {
            std::cout << ' ' << std::setw(3) << m["cells"][r][c].get<std::size_t>() << ' ' << std::left
                      << std::setw(6) << m["labels"][r][c].get<std::string>() << std::right;
        }
        std::cout << '\n';
    }
    std::cout << "columns:\n";
    for (std::size_t c = 0; c < m.at("cols").size(); ++c) {
        std::cout << "  c" << c + 1 << " = " << m["cols"][c].at("label").get<std::string>() << '\n';
    }
    std::cout << "thresholds: desert <= " << m["thresholds"]["desert_max"] << ", oasis >= "
              << m["thresholds"]["oasis_min"] << '\n';
}

int cmd_stats(const std::string& dir, const std::string& heatmap_axes) {
    atlas_status status;
    CatalogHandle catalog = open_catalog(dir, status);
    if (!catalog) return report_failure(status);

    if (heatmap_axes.empty()) {
        char* raw = nullptr;
        status = atlas_catalog_stats(catalog.get(), &raw);
        if (status != ATLAS_OK) return report_failure(status);
        std::cout << nlohmann::json::parse(take(raw)).dump(2) << '\n';
        return kExitOk;
    }
    const auto x = heatmap_axes.find('x');
    if (x == std::string::npos) {
        std::cerr << "atlas: --heatmap expects <dim>x<dim>, e.g. domainxlifecycle\n";
        return kExitUsage;
    }
    // "datatype" contains no 'x', so the first 'x' is always the separator.
    const std::string rows = heatmap_axes.substr(0, x);
    const std::string cols = heatmap_axes.substr(x + 1);
    char* raw = nullptr;
    status = atlas_catalog_heatmap(catalog.get(), rows.c_str(), cols.c_str(), 1, 0, -1, &raw);
    if (status != ATLAS_OK) return report_failure(status);
    print_heatmap(nlohmann::json::parse(take(raw)));
    return kExitOk;
}

int cmd_query(const std::string& dir, const std::string& query) {
    atlas_status status;
    CatalogHandle catalog = open_catalog(dir, status);
    if (!catalog) return report_failure(status);
    char* raw = nullptr;
    status = atlas_catalog_query(catalog.get(), query.c_str(), &raw);
    if (status != ATLAS_OK) {
        std::cerr << "atlas: " << atlas_last_error() << '\n';
        return kExitFailure;
    }
    auto j = nlohmann::json::parse(take(raw));
    for (std::size_t i = 0; i < j.at("ids").size(); ++i) {
        std::cout << j["ids"][i].get<std::string>() << '\t' << j["labels"][i].get<std::string>() << '\n';
    }
    std::cout << j.at("total") << " result(s)\n";
    return kExitOk;
}

int cmd_export(const std::string& dir, const std::string& format, const std::string& output,
               const std::optional<std::string>& layers) {
    atlas_status status;
    CatalogHandle catalog = open_catalog(dir, status);
    if (!catalog) return report_failure(status);
    char* raw = nullptr;
    if (format == "dcat") {
        status = atlas_catalog_export_dcat(catalog.get(), &raw);
    } else {
        status = atlas_catalog_export_graph(catalog.get(), layers ? layers->c_str() : nullptr, &raw);
    }
    if (status != ATLAS_OK) return report_failure(status);
    const std::string document = nlohmann::json::parse(take(raw)).dump(2);
    if (output == "-") {
        std::cout << document << '\n';
        return kExitOk;
    }
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::cerr << "atlas: cannot write " << output << '\n';
        return kExitFailure;
    }
    out << document << '\n';
    return kExitOk;
}

atlas_service* g_service = nullptr;

extern "C" void on_signal(int) {
    if (g_service) atlas_service_stop(g_service);
}

int cmd_serve(const std::string& dir, const std::string& host, int port) {
    atlas_service* service = nullptr;
    atlas_status status = atlas_service_create(dir.c_str(), &service);
    if (status != ATLAS_OK) {
        if (status == ATLAS_ERR_VALIDATION) {
            auto error = nlohmann::json::parse(atlas_last_error_json());
            print_findings(error["error"].value("findings", nlohmann::json::array()), std::cerr);
        }
        return report_failure(status);
    }
    g_service = service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "atlas: serving " << dir << " on http://" << host << ':' << port << '\n';
    status = atlas_service_listen(service, host.c_str(), port);
    g_service = nullptr;
    atlas_service_destroy(service);
    if (status != ATLAS_OK) return report_failure(status);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Engineering dataset catalog tool", "atlas"};
    app.require_subcommand(1);
    app.set_version_flag("--version", atlas_version());

    std::string dir;
    auto add_dir = [&](CLI::App* sub) {
        sub->add_option("dir", dir, "Catalog directory")->required()->check(CLI::ExistingDirectory);
    };

    auto* validate = app.add_subcommand("validate", "Validate a catalog and list findings");
    add_dir(validate);

    std::string heatmap_axes;
    auto* stats = app.add_subcommand("stats", "Print catalog totals or a gap-analysis heatmap");
    add_dir(stats);
    stats->add_option("--heatmap", heatmap_axes, "Cross-tabulate two dimensions, e.g. domainxlifecycle");

    std::string query;
    auto* query_cmd = app.add_subcommand("query", "Run a structured query");
    add_dir(query_cmd);
    query_cmd->add_option("-q,--query", query, "Query text, e.g. FIND dataset WHERE domain <= \"Aerospace\"")
        ->required();

    std::string format;
    std::string output;
    std::optional<std::string> layers;
    auto* export_cmd = app.add_subcommand("export", "Export the catalog as DCAT or node-link graph JSON");
    add_dir(export_cmd);
    export_cmd->add_option("--format", format, "dcat or graph")
        ->required()
        ->check(CLI::IsMember({"dcat", "graph"}));
    export_cmd->add_option("-o,--output", output, "Output file, '-' for stdout")->required();
    export_cmd->add_option("--layers", layers, "Graph layers (csv): domain,lifecycle,datatype,format,tools,publications,organizations");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    add_dir(serve);
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
    serve->add_option("--host", host, "Bind address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*validate) return cmd_validate(dir);
    if (*stats) return cmd_stats(dir, heatmap_axes);
    if (*query_cmd) return cmd_query(dir, query);
    if (*export_cmd) return cmd_export(dir, format, output, layers);
    if (*serve) return cmd_serve(dir, host, port);
    return kExitUsage;
}
