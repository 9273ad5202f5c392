#include <atlas/service.hpp>

#include <httplib.h>

namespace atlas {

struct HttpServer::Impl {
    CatalogService& service;
    httplib::Server server;

    explicit Impl(CatalogService& s) : service(s) {
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            HttpRequest request;
            request.method = req.method;
            request.path = req.path;
            for (const auto& [key, value] : req.params) request.params.emplace(key, value);
            request.body = req.body;
            HttpResponse response = service.handle(request);
            res.status = response.status;
            res.set_content(response.body, "application/json");
        };
        server.Get(".*", forward);
        server.Post(".*", forward);
        server.Put(".*", forward);
        server.Delete(".*", forward);
    }
};

HttpServer::HttpServer(CatalogService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace atlas
