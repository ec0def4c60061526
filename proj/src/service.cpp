#include "spectramix/app/service.hpp"

#include "httplib.h"

#include "spectramix/app/hex.hpp"
#include "spectramix/errors.hpp"

namespace spectramix::app {

using nlohmann::json;

namespace {

HttpReply reply(int status, const json& body) {
    return {status, body.dump(), "application/json"};
}

HttpReply error_reply(int status, const std::string& code, const std::string& message,
                      const std::vector<std::string>& diagnostics = {}) {
    return reply(status, error_json(code, message, diagnostics));
}

// Maps the pipeline's exceptions to status codes.
template <typename Handler>
HttpReply guarded(Handler&& handler) {
    try {
        return handler();
    } catch (const json::parse_error& e) {
        return error_reply(400, "malformed_json", e.what());
    } catch (const RequestError& e) {
        return error_reply(400, e.code(), e.what());
    } catch (const SolverError& e) {
        return error_reply(422, "solver_nonconvergence", e.what(), e.diagnostics());
    } catch (const DomainError& e) {
        return error_reply(400, "domain_error", e.what());
    } catch (const std::exception& e) {
        return error_reply(500, "internal_error", e.what());
    }
}

constexpr const char* kIndexPage = R"(<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>spectramix</title></head>
<body>
<h1>spectramix</h1>
<p>No UI assets are mounted. Start the server with <code>--ui-dir</code> pointing at a built studio bundle.</p>
<ul>
<li><code>POST /api/mix</code></li>
<li><code>POST /api/recover</code></li>
<li><code>GET /api/catalog/nearest?hex=RRGGBB&amp;metric=lab</code></li>
<li><code>GET /api/health</code></li>
</ul>
</body>
</html>
)";

void send(httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
}

}  // namespace

Service::Service(const Engine& engine, std::optional<std::filesystem::path> ui_dir)
    : engine_(engine), ui_dir_(std::move(ui_dir)) {}

HttpReply Service::health() const {
    return reply(200, {{"status", "ok"}});
}

HttpReply Service::mix(const std::string& body) const {
    return guarded([&] { return reply(200, to_json(run_mix(mix_request_from_json(json::parse(body)), engine_))); });
}

HttpReply Service::recover(const std::string& body) const {
    return guarded([&] {
        const json request = json::parse(body);
        if (!request.is_object()) throw RequestError("invalid_request", "request body must be a JSON object");
        const auto hex = request.find("hex");
        if (hex == request.end() || !hex->is_string()) throw RequestError("invalid_color", "'hex' string is required");
        const auto color = parse_hex(hex->get<std::string>());
        if (!color) throw RequestError("invalid_color", "not a 6-digit hex color: " + hex->get<std::string>());

        Algorithm algorithm = Algorithm::illss;
        if (const auto a = request.find("algorithm"); a != request.end() && !a->is_null()) {
            const auto parsed = a->is_string() ? parse_algorithm(a->get<std::string>()) : std::nullopt;
            if (!parsed) throw RequestError("unknown_algorithm", "algorithm must be ilss, llss or illss");
            algorithm = *parsed;
        }
        return reply(200, recover_to_json(*color, run_recover(*color, algorithm, engine_)));
    });
}

HttpReply Service::nearest(const std::optional<std::string>& hex, const std::optional<std::string>& metric) const {
    return guarded([&] {
        if (!hex) throw RequestError("invalid_color", "query parameter 'hex' is required");
        const auto color = parse_hex(*hex);
        if (!color) throw RequestError("invalid_color", "not a 6-digit hex color: " + *hex);
        Metric m = kDefaultMetric;
        if (metric) {
            const auto parsed = parse_metric(*metric);
            if (!parsed) throw RequestError("unknown_metric", "metric must be 'lab' or 'srgb'");
            m = *parsed;
        }
        const Catalog* catalog = engine_.catalog();
        if (catalog == nullptr || catalog->empty()) return error_reply(404, "catalog_unavailable", "no catalog loaded");
        const CatalogEntry& entry = nearest_entry(*color, *catalog, m, engine_.rgb_matrix());
        json out = entry_to_json(entry);
        out["metric"] = to_string(m);
        out["query_hex"] = to_hex(*color);
        return reply(200, out);
    });
}

HttpReply Service::index() const {
    return {200, kIndexPage, "text/html; charset=utf-8"};
}

void Service::install(httplib::Server& server) const {
    server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) { send(res, health()); });
    server.Post("/api/mix", [this](const httplib::Request& req, httplib::Response& res) { send(res, mix(req.body)); });
    server.Post("/api/recover",
                [this](const httplib::Request& req, httplib::Response& res) { send(res, recover(req.body)); });
    server.Get("/api/catalog/nearest", [this](const httplib::Request& req, httplib::Response& res) {
        auto param = [&](const char* key) -> std::optional<std::string> {
            if (!req.has_param(key)) return std::nullopt;
            return req.get_param_value(key);
        };
        send(res, nearest(param("hex"), param("metric")));
    });

    const bool mounted = ui_dir_ && std::filesystem::is_directory(*ui_dir_) && server.set_mount_point("/", ui_dir_->string());
    if (!mounted) {
        server.Get("/", [this](const httplib::Request&, httplib::Response& res) { send(res, index()); });
    }
}

void serve(const Engine& engine, const std::string& host, int port, const std::optional<std::filesystem::path>& ui_dir) {
    httplib::Server server;
    Service service(engine, ui_dir);
    service.install(server);
    if (!server.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace spectramix::app
