// spectramix command-line front end.
//
// Exit codes: 0 success, 2 argument/input errors, 3 solver non-convergence.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"

#include "spectramix/app/hex.hpp"
#include "spectramix/app/pipeline.hpp"
#include "spectramix/app/ppm.hpp"
#include "spectramix/app/service.hpp"
#include "spectramix/batch.hpp"
#include "spectramix/errors.hpp"
#include "spectramix/tables.hpp"

namespace {

using namespace spectramix;
using namespace spectramix::app;

constexpr int kExitArgs = 2;
constexpr int kExitSolver = 3;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Srgb8 hex_or_throw(const std::string& text) {
    const auto c = parse_hex(text);
    if (!c) throw RequestError("invalid_color", "not a 6-digit hex color: " + text);
    return *c;
}

std::optional<Catalog> load_optional_catalog(const std::string& flag) {
    std::string path = flag;
    if (path.empty()) {
        if (const char* env = std::getenv("SPECTRAMIX_CATALOG")) path = env;
    }
    if (path.empty()) return std::nullopt;
    Catalog catalog = load_catalog(std::filesystem::path(path), canonical_t_matrix(), srgb_d65_matrix());
    for (const auto& w : catalog.warnings()) fmt::print(stderr, "warning: {}\n", w);
    return catalog;
}

std::string curve_csv(const Reflectance36& rho) {
    std::string out;
    for (int band = 0; band < kBands; ++band) {
        if (band > 0) out += ',';
        out += fmt::format("{:.10g}", rho[band]);
    }
    return out;
}

std::string wavelength_header() {
    std::string out;
    for (int band = 0; band < kBands; ++band) out += fmt::format(",{}", wavelength_nm(band));
    return out;
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::fwrite(bytes.data(), 1, bytes.size(), stdout);
        std::fflush(stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RequestError("invalid_output", "cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

struct MixOptions {
    std::string colors;
    std::string parts;
    std::string algorithm = "illss";
    int steps = kDefaultPathSteps;
    std::string metric = "lab";
    std::string catalog;
    std::string format = "text";
    std::string output;
};

int run_mix_command(const MixOptions& opt) {
    MixRequest request;
    const auto hexes = split_list(opt.colors);
    const auto parts = split_list(opt.parts);
    if (!parts.empty() && parts.size() != hexes.size()) {
        throw RequestError("invalid_parts", fmt::format("{} colors but {} parts", hexes.size(), parts.size()));
    }
    for (std::size_t i = 0; i < hexes.size(); ++i) {
        double p = 1.0;
        if (!parts.empty()) {
            try {
                std::size_t used = 0;
                p = std::stod(parts[i], &used);
                if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
            } catch (const std::exception&) {
                throw RequestError("invalid_parts", "not a number: " + parts[i]);
            }
        }
        request.colors.push_back({hex_or_throw(hexes[i]), p});
    }
    const auto algorithm = parse_mix_algorithm(opt.algorithm);
    if (!algorithm) throw RequestError("unknown_algorithm", "unknown algorithm: " + opt.algorithm);
    request.algorithm = *algorithm;
    const auto metric = parse_metric(opt.metric);
    if (!metric) throw RequestError("unknown_metric", "metric must be 'lab' or 'srgb'");
    request.metric = *metric;
    request.steps = opt.steps;

    const Engine engine(request.algorithm == MixAlgorithm::catalog ? load_optional_catalog(opt.catalog) : std::nullopt);
    const MixResponse response = run_mix(request, engine);

    if (opt.format == "json") {
        write_output(opt.output, to_json(response).dump(2) + "\n");
    } else if (opt.format == "csv") {
        std::string out = "kind,index,hex" + wavelength_header() + "\n";
        for (std::size_t i = 0; i < response.inputs.size(); ++i) {
            out += fmt::format("input,{},{},{}\n", i, to_hex(response.inputs[i].color), curve_csv(response.inputs[i].rho));
        }
        out += fmt::format("result,0,{},{}\n", to_hex(response.result), curve_csv(response.rho));
        for (std::size_t i = 0; i < response.path.size(); ++i) {
            out += fmt::format("path,{},{},{}\n", i, to_hex(response.path[i].color), curve_csv(response.path[i].rho));
        }
        write_output(opt.output, out);
    } else if (opt.format == "ppm") {
        std::vector<Srgb8> swatches;
        for (const auto& s : response.path) swatches.push_back(s.color);
        if (swatches.empty()) swatches.push_back(response.result);
        write_output(opt.output, render_swatch_strip(swatches));
    } else {
        std::string out = fmt::format("result {}\nclipped {}\n", to_hex(response.result), response.clipped);
        for (const auto& in : response.inputs) {
            if (in.matched_name) out += fmt::format("matched {} {}\n", to_hex(in.color), *in.matched_name);
        }
        if (!response.path.empty()) {
            out += "path";
            for (const auto& s : response.path) out += " " + to_hex(s.color);
            out += "\n";
        }
        write_output(opt.output, out);
    }
    return 0;
}

int run_recover_command(const std::string& colors, const std::string& algorithm_name, const std::string& format) {
    const auto algorithm = parse_algorithm(algorithm_name);
    if (!algorithm) throw RequestError("unknown_algorithm", "algorithm must be ilss, llss or illss");
    std::vector<Srgb8> targets;
    for (const auto& hex : split_list(colors)) targets.push_back(hex_or_throw(hex));
    if (targets.empty()) throw RequestError("invalid_color", "--color is required");

    const Engine engine;
    const auto results = parallel::recover_batch(targets, *algorithm, engine.recoverer());

    std::vector<std::string> failures;
    nlohmann::json array = nlohmann::json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (!r.converged) failures.push_back(to_hex(targets[i]) + ": " + r.diagnostic);
        if (format == "json") {
            array.push_back(recover_to_json(targets[i], r));
        } else {
            fmt::print("{}\n", curve_csv(r.rho));
            fmt::print("# {} {} converged={} iterations={} outer_iterations={}\n", to_hex(targets[i]),
                       to_string(r.algorithm), r.converged, r.iterations, r.outer_iterations);
        }
    }
    if (format == "json") fmt::print("{}\n", (array.size() == 1 ? array[0] : array).dump(2));
    if (!failures.empty()) {
        for (const auto& f : failures) fmt::print(stderr, "error: {}\n", f);
        return kExitSolver;
    }
    return 0;
}

int run_nearest_command(const std::string& colors, const std::string& catalog_path, const std::string& metric_name) {
    const auto metric = parse_metric(metric_name);
    if (!metric) throw RequestError("unknown_metric", "metric must be 'lab' or 'srgb'");
    const auto catalog = load_optional_catalog(catalog_path);
    if (!catalog) throw RequestError("catalog_unavailable", "no catalog given (--catalog or SPECTRAMIX_CATALOG)");
    std::vector<Srgb8> targets;
    for (const auto& hex : split_list(colors)) targets.push_back(hex_or_throw(hex));
    const auto indices = parallel::nearest_batch(targets, *catalog, *metric, srgb_d65_matrix());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& e = catalog->entries()[indices[i]];
        fmt::print("{} {} {}{}\n", to_hex(targets[i]), e.name, to_hex(e.srgb), e.in_gamut ? "" : " out-of-gamut");
    }
    return 0;
}

int run_compose_command(const std::string& cmf_path, const std::string& m_path, const std::string& illuminant_path,
                        bool compare) {
    const CmfMatrix cmf = cmf_path.empty() ? cie1931_cmf() : cmf_from_table(read_numeric_table(cmf_path));
    const RgbConversionMatrix m = m_path.empty() ? srgb_d65_matrix() : rgb_matrix_from_table(read_numeric_table(m_path));
    const Spd36 w = illuminant_path.empty() ? d65_illuminant() : spd_from_table(read_numeric_table(illuminant_path));
    const TMatrix t = compose_t_matrix(cmf, m, w);
    std::ostringstream out;
    write_numeric_table(out, t.matrix());
    fmt::print("{}", out.str());
    if (compare) {
        const double deviation = (t.matrix() - canonical_t_matrix().matrix()).cwiseAbs().maxCoeff();
        fmt::print(stderr, "max |T - published T| = {:.3e}\n", deviation);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subtractive color mixing via recovered spectral reflectance"};
    app.require_subcommand(1);

    MixOptions mix;
    auto* mix_cmd = app.add_subcommand("mix", "Mix sRGB colors by weighted geometric mean of reflectances");
    mix_cmd->add_option("--colors", mix.colors, "Comma-separated hex colors, e.g. FFFF00,0000FF")->required();
    mix_cmd->add_option("--parts", mix.parts, "Comma-separated parts per color (default: equal)");
    mix_cmd->add_option("--algorithm", mix.algorithm, "ilss | llss | illss | catalog")->capture_default_str();
    mix_cmd->add_option("--steps", mix.steps, "Interior mixes on the path for two colors (0 = none)")
        ->capture_default_str();
    mix_cmd->add_option("--metric", mix.metric, "Catalog metric: lab | srgb")->capture_default_str();
    mix_cmd->add_option("--catalog", mix.catalog, "Catalog CSV (default: $SPECTRAMIX_CATALOG)");
    mix_cmd->add_option("--format", mix.format, "text | csv | ppm | json")
        ->check(CLI::IsMember({"text", "csv", "ppm", "json"}))
        ->capture_default_str();
    mix_cmd->add_option("--output,-o", mix.output, "Output file (default: stdout)");

    std::string recover_colors;
    std::string recover_algorithm = "illss";
    std::string recover_format = "csv";
    auto* recover_cmd = app.add_subcommand("recover", "Recover reflectance curves from sRGB colors");
    recover_cmd->add_option("--color", recover_colors, "Hex color (comma-separated for a batch)")->required();
    recover_cmd->add_option("--algorithm", recover_algorithm, "ilss | llss | illss")->capture_default_str();
    recover_cmd->add_option("--format", recover_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    std::string nearest_colors;
    std::string nearest_catalog;
    std::string nearest_metric = "lab";
    auto* nearest_cmd = app.add_subcommand("nearest", "Find the nearest catalog entries");
    nearest_cmd->add_option("--color", nearest_colors, "Hex color (comma-separated for a batch)")->required();
    nearest_cmd->add_option("--catalog", nearest_catalog, "Catalog CSV (default: $SPECTRAMIX_CATALOG)");
    nearest_cmd->add_option("--metric", nearest_metric, "lab | srgb")->capture_default_str();

    std::string cmf_path;
    std::string m_path;
    std::string illuminant_path;
    bool compare = false;
    auto* compose_cmd = app.add_subcommand("compose-t", "Compose a T matrix from CMFs, M and an illuminant");
    compose_cmd->add_option("--cmf", cmf_path, "3x36 color-matching functions (default: CIE 1931 2 deg)");
    compose_cmd->add_option("--rgb-matrix", m_path, "3x3 XYZ->rgb matrix (default: sRGB D65)");
    compose_cmd->add_option("--illuminant", illuminant_path, "36-value SPD (default: D65)");
    compose_cmd->add_flag("--compare", compare, "Report max deviation from the published T on stderr");

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string serve_catalog;
    std::string ui_dir;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
    serve_cmd->add_option("--host", host)->capture_default_str();
    serve_cmd->add_option("--port", port)->check(CLI::Range(1, 65535))->capture_default_str();
    serve_cmd->add_option("--catalog", serve_catalog, "Catalog CSV (default: $SPECTRAMIX_CATALOG)");
    serve_cmd->add_option("--ui-dir", ui_dir, "Static UI assets served at /");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitArgs;
    }

    try {
        if (*mix_cmd) return run_mix_command(mix);
        if (*recover_cmd) return run_recover_command(recover_colors, recover_algorithm, recover_format);
        if (*nearest_cmd) return run_nearest_command(nearest_colors, nearest_catalog, nearest_metric);
        if (*compose_cmd) return run_compose_command(cmf_path, m_path, illuminant_path, compare);
        if (*serve_cmd) {
            const Engine engine(load_optional_catalog(serve_catalog));
            fmt::print(stderr, "listening on http://{}:{}\n", host, port);
            serve(engine, host, port, ui_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(ui_dir));
            return 0;
        }
    } catch (const SolverError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        for (const auto& d : e.diagnostics()) fmt::print(stderr, "  {}\n", d);
        return kExitSolver;
    } catch (const RequestError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitArgs;
    } catch (const ParseError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitArgs;
    } catch (const DomainError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitArgs;
    } catch (const DegenerateError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitArgs;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return kExitArgs;
}
