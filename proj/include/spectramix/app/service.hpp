#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "spectramix/app/pipeline.hpp"

namespace httplib {
class Server;
}

namespace spectramix::app {

struct HttpReply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// HTTP handlers as plain functions of the request, so they can be exercised
/// without a socket. All state is the shared read-only Engine.
class Service {
public:
    explicit Service(const Engine& engine, std::optional<std::filesystem::path> ui_dir = std::nullopt);

    HttpReply health() const;
    HttpReply mix(const std::string& body) const;        // POST /api/mix
    HttpReply recover(const std::string& body) const;    // POST /api/recover
    HttpReply nearest(const std::optional<std::string>& hex,
                      const std::optional<std::string>& metric) const;  // GET /api/catalog/nearest
    HttpReply index() const;                             // GET / when no UI directory is mounted

    /// Registers every route on `server`, including static UI assets.
    void install(httplib::Server& server) const;

private:
    const Engine& engine_;
    std::optional<std::filesystem::path> ui_dir_;
};

/// Blocks serving on host:port until the server is stopped.
void serve(const Engine& engine, const std::string& host, int port,
           const std::optional<std::filesystem::path>& ui_dir);

}  // namespace spectramix::app
