// http_server.hpp
#pragma once
#include <memory>
#include <string>

#include "optistop/service_api.hpp"

namespace optistop {

// cpp-httplib front end for ServiceApi. Responses are application/json.
class HttpServer {
public:
    explicit HttpServer(const ServiceApi& api);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Returns the bound port, or -1. Port 0 picks a free port.
    int bind(const std::string& host, int port);
    // Blocks until stop() is called.
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace optistop
