#include "optistop/http_server.hpp"

#include <httplib.h>

namespace optistop {

struct HttpServer::Impl {
    const ServiceApi& api;
    httplib::Server server;

    explicit Impl(const ServiceApi& a) : api(a) {
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            ApiRequest request;
            request.method = req.method;
            request.path = req.path;
            request.body = req.body;
            for (const auto& [key, value] : req.params) request.query.emplace(key, value);
            const ApiResponse response = api.handle(request);
            res.status = response.status;
            res.set_content(response.body.dump(), "application/json");
        };
        server.Get(R"(/v1/.*)", handler);
        server.Post(R"(/v1/.*)", handler);
        server.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Allow-Headers", "Content-Type"},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) res.set_content(R"({"error":"not_found"})", "application/json");
        });
    }
};

HttpServer::HttpServer(const ServiceApi& api) : impl_(std::make_unique<Impl>(api)) {}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace optistop
