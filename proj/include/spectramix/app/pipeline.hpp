#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "spectramix/catalog.hpp"
#include "spectramix/colorimetry.hpp"
#include "spectramix/recovery.hpp"

// Request/response layer shared by the CLI and the HTTP service, so both
// produce the same content for the same request.

namespace spectramix::app {

enum class MixAlgorithm { ilss, llss, illss, catalog };

std::string_view to_string(MixAlgorithm algorithm) noexcept;
std::optional<MixAlgorithm> parse_mix_algorithm(std::string_view name);

inline constexpr int kDefaultPathSteps = 9;
inline constexpr MixAlgorithm kDefaultAlgorithm = MixAlgorithm::illss;
inline constexpr Metric kDefaultMetric = Metric::lab;

/// Malformed or invalid request. Maps to exit code 2 / HTTP 400.
class RequestError : public std::runtime_error {
public:
    RequestError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// A recovery did not converge. Maps to exit code 3 / HTTP 422.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& message, std::vector<std::string> diagnostics)
        : std::runtime_error(message), diagnostics_(std::move(diagnostics)) {}
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

struct ColorPart {
    Srgb8 color;
    double parts = 1.0;
};

struct MixRequest {
    std::vector<ColorPart> colors;
    MixAlgorithm algorithm = kDefaultAlgorithm;
    int steps = kDefaultPathSteps;  // 0 disables the path
    Metric metric = kDefaultMetric;
};

struct InputReport {
    Srgb8 color;
    double parts = 0.0;
    Reflectance36 rho;
    std::optional<std::string> matched_name;  // catalog only
    int iterations = 0;
    int outer_iterations = 0;
    bool converged = true;
};

struct PathSwatch {
    Srgb8 color;
    Reflectance36 rho;
    bool clipped = false;
};

struct MixResponse {
    MixAlgorithm algorithm = kDefaultAlgorithm;
    Srgb8 result;
    Reflectance36 rho;
    bool clipped = false;
    std::vector<InputReport> inputs;
    std::vector<PathSwatch> path;  // two-color mixes with steps > 0
};

/// Tables, solver precomputation and the optional catalog. Built once at
/// startup and read-only afterwards.
class Engine {
public:
    explicit Engine(std::optional<Catalog> catalog = std::nullopt);

    const Recoverer& recoverer() const noexcept { return recoverer_; }
    const TMatrix& t_matrix() const noexcept { return recoverer_.t_matrix(); }
    const RgbConversionMatrix& rgb_matrix() const noexcept { return m_; }
    const Catalog* catalog() const noexcept { return catalog_ ? &*catalog_ : nullptr; }

private:
    Recoverer recoverer_;
    RgbConversionMatrix m_;
    std::optional<Catalog> catalog_;
};

/// Checks request invariants; throws RequestError.
void validate(const MixRequest& request);

MixResponse run_mix(const MixRequest& request, const Engine& engine);

/// Throws SolverError when the solver does not converge.
RecoveryResult run_recover(Srgb8 color, Algorithm algorithm, const Engine& engine);

// JSON (snake_case fields, reflectance as 36-element arrays, 380 -> 730 nm).
MixRequest mix_request_from_json(const nlohmann::json& body);
nlohmann::json to_json(const MixResponse& response);
nlohmann::json recover_to_json(Srgb8 color, const RecoveryResult& result);
nlohmann::json entry_to_json(const CatalogEntry& entry);
nlohmann::json error_json(const std::string& code, const std::string& message,
                          const std::vector<std::string>& diagnostics = {});

}  // namespace spectramix::app
