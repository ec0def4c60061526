#include "spectramix/app/pipeline.hpp"

#include <cmath>

#include "spectramix/app/hex.hpp"
#include "spectramix/errors.hpp"
#include "spectramix/mixing.hpp"
#include "spectramix/tables.hpp"

namespace spectramix::app {

using nlohmann::json;

namespace {

constexpr int kMaxPathSteps = 1000;

json curve_json(const Reflectance36& rho) {
    return json(rho.to_array());
}

std::optional<Algorithm> solver_for(MixAlgorithm algorithm) {
    switch (algorithm) {
        case MixAlgorithm::ilss: return Algorithm::ilss;
        case MixAlgorithm::llss: return Algorithm::llss;
        case MixAlgorithm::illss: return Algorithm::illss;
        case MixAlgorithm::catalog: return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(MixAlgorithm algorithm) noexcept {
    if (algorithm == MixAlgorithm::catalog) return "catalog";
    return spectramix::to_string(*solver_for(algorithm));
}

std::optional<MixAlgorithm> parse_mix_algorithm(std::string_view name) {
    if (name == "catalog") return MixAlgorithm::catalog;
    const auto solver = parse_algorithm(name);
    if (!solver) return std::nullopt;
    switch (*solver) {
        case Algorithm::ilss: return MixAlgorithm::ilss;
        case Algorithm::llss: return MixAlgorithm::llss;
        case Algorithm::illss: return MixAlgorithm::illss;
    }
    return std::nullopt;
}

Engine::Engine(std::optional<Catalog> catalog)
    : recoverer_(canonical_t_matrix()), m_(srgb_d65_matrix()), catalog_(std::move(catalog)) {}

void validate(const MixRequest& request) {
    if (request.colors.empty()) throw RequestError("invalid_request", "at least one color is required");
    double total = 0.0;
    for (const auto& c : request.colors) {
        if (!std::isfinite(c.parts) || c.parts < 0.0) {
            throw RequestError("invalid_parts", "parts must be finite and >= 0");
        }
        total += c.parts;
    }
    if (!(total > 0.0)) throw RequestError("invalid_parts", "parts must not all be zero");
    if (request.steps < 0 || request.steps > kMaxPathSteps) {
        throw RequestError("invalid_steps", "steps must be between 0 and " + std::to_string(kMaxPathSteps));
    }
}

MixResponse run_mix(const MixRequest& request, const Engine& engine) {
    validate(request);
    const auto solver = solver_for(request.algorithm);
    const Catalog* catalog = engine.catalog();
    if (!solver && catalog == nullptr) {
        throw RequestError("catalog_unavailable", "catalog mixing requested but no catalog is loaded");
    }
    if (!solver && catalog->empty()) throw RequestError("catalog_unavailable", "loaded catalog is empty");

    MixResponse out;
    out.algorithm = request.algorithm;
    std::vector<std::string> failures;
    std::vector<Reflectance36> curves;
    std::vector<double> parts;

    for (const auto& c : request.colors) {
        InputReport report;
        report.color = c.color;
        report.parts = c.parts;
        if (solver) {
            const RecoveryResult r = engine.recoverer().recover(c.color, *solver);
            report.rho = r.rho;
            report.iterations = r.iterations;
            report.outer_iterations = r.outer_iterations;
            report.converged = r.converged;
            if (!r.converged) failures.push_back(to_hex(c.color) + ": " + r.diagnostic);
        } else {
            const CatalogEntry& entry = nearest_entry(c.color, *catalog, request.metric, engine.rgb_matrix());
            report.rho = entry.rho;
            report.matched_name = entry.name;
        }
        curves.push_back(report.rho);
        parts.push_back(c.parts);
        out.inputs.push_back(std::move(report));
    }
    if (!failures.empty()) throw SolverError("reflectance recovery did not converge", failures);

    out.rho = wgm_mix(curves, weights_from_parts(parts));
    const ForwardResult forward = forward_convert(out.rho, engine.t_matrix());
    out.result = forward.srgb;
    out.clipped = forward.clipped;

    if (curves.size() == 2 && request.steps > 0) {
        for (const auto& rho : mixing_path(curves[0], curves[1], request.steps)) {
            const ForwardResult f = forward_convert(rho, engine.t_matrix());
            out.path.push_back({f.srgb, rho, f.clipped});
        }
    }
    return out;
}

RecoveryResult run_recover(Srgb8 color, Algorithm algorithm, const Engine& engine) {
    RecoveryResult r = engine.recoverer().recover(color, algorithm);
    if (!r.converged) throw SolverError("reflectance recovery did not converge", {to_hex(color) + ": " + r.diagnostic});
    return r;
}

MixRequest mix_request_from_json(const json& body) {
    if (!body.is_object()) throw RequestError("invalid_request", "request body must be a JSON object");
    MixRequest request;

    const auto colors = body.find("colors");
    if (colors == body.end() || !colors->is_array()) {
        throw RequestError("invalid_request", "'colors' must be an array");
    }
    for (const auto& item : *colors) {
        if (!item.is_object()) throw RequestError("invalid_request", "each color must be an object");
        const auto hex = item.find("hex");
        if (hex == item.end() || !hex->is_string()) throw RequestError("invalid_color", "each color needs a 'hex' string");
        const auto color = parse_hex(hex->get<std::string>());
        if (!color) throw RequestError("invalid_color", "not a 6-digit hex color: " + hex->get<std::string>());
        double parts = 1.0;
        if (const auto p = item.find("parts"); p != item.end()) {
            if (!p->is_number()) throw RequestError("invalid_parts", "'parts' must be a number");
            parts = p->get<double>();
        }
        request.colors.push_back({*color, parts});
    }

    if (const auto a = body.find("algorithm"); a != body.end() && !a->is_null()) {
        if (!a->is_string()) throw RequestError("unknown_algorithm", "'algorithm' must be a string");
        const auto algorithm = parse_mix_algorithm(a->get<std::string>());
        if (!algorithm) throw RequestError("unknown_algorithm", "unknown algorithm: " + a->get<std::string>());
        request.algorithm = *algorithm;
    }
    if (const auto s = body.find("steps"); s != body.end() && !s->is_null()) {
        if (!s->is_number_integer()) throw RequestError("invalid_steps", "'steps' must be an integer");
        const auto steps = s->get<long long>();
        if (steps < 0 || steps > kMaxPathSteps) {
            throw RequestError("invalid_steps", "steps must be between 0 and " + std::to_string(kMaxPathSteps));
        }
        request.steps = static_cast<int>(steps);
    }
    if (const auto m = body.find("metric"); m != body.end() && !m->is_null()) {
        const auto metric = m->is_string() ? parse_metric(m->get<std::string>()) : std::nullopt;
        if (!metric) throw RequestError("unknown_metric", "metric must be 'lab' or 'srgb'");
        request.metric = *metric;
    }
    validate(request);
    return request;
}

json to_json(const MixResponse& response) {
    json inputs = json::array();
    int total_iterations = 0;
    for (const auto& in : response.inputs) {
        json item = {{"hex", to_hex(in.color)},
                     {"parts", in.parts},
                     {"reflectance", curve_json(in.rho)},
                     {"converged", in.converged},
                     {"iterations", in.iterations},
                     {"outer_iterations", in.outer_iterations}};
        if (in.matched_name) item["matched_name"] = *in.matched_name;
        total_iterations += in.iterations;
        inputs.push_back(std::move(item));
    }
    json path = json::array();
    int clipped_swatches = 0;
    for (const auto& swatch : response.path) {
        path.push_back({{"hex", to_hex(swatch.color)}, {"reflectance", curve_json(swatch.rho)}, {"clipped", swatch.clipped}});
        clipped_swatches += swatch.clipped ? 1 : 0;
    }
    return {{"algorithm", to_string(response.algorithm)},
            {"result_hex", to_hex(response.result)},
            {"result_reflectance", curve_json(response.rho)},
            {"clipped", response.clipped},
            {"inputs", std::move(inputs)},
            {"path", std::move(path)},
            {"diagnostics", {{"total_iterations", total_iterations}, {"clipped_path_swatches", clipped_swatches}}}};
}

json recover_to_json(Srgb8 color, const RecoveryResult& result) {
    json out = {{"hex", to_hex(color)},
                {"algorithm", spectramix::to_string(result.algorithm)},
                {"reflectance", curve_json(result.rho)},
                {"converged", result.converged},
                {"iterations", result.iterations},
                {"outer_iterations", result.outer_iterations}};
    if (!result.diagnostic.empty()) out["diagnostic"] = result.diagnostic;
    return out;
}

json entry_to_json(const CatalogEntry& entry) {
    return {{"name", entry.name},
            {"hex", to_hex(entry.srgb)},
            {"reflectance", curve_json(entry.rho)},
            {"linear_rgb", {entry.linear.r, entry.linear.g, entry.linear.b}},
            {"lab", {entry.lab.l, entry.lab.a, entry.lab.b}},
            {"in_gamut", entry.in_gamut}};
}

json error_json(const std::string& code, const std::string& message, const std::vector<std::string>& diagnostics) {
    json error = {{"code", code}, {"message", message}};
    if (!diagnostics.empty()) error["diagnostics"] = diagnostics;
    return {{"error", std::move(error)}};
}

}  // namespace spectramix::app
