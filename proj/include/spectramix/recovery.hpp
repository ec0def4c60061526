#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "spectramix/colorimetry.hpp"

namespace spectramix {

enum class Algorithm { ilss, llss, illss };

std::string_view to_string(Algorithm algorithm) noexcept;
/// Parses "ilss" / "llss" / "illss" (case-insensitive).
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Lower bound used by ILSS and returned for black.
inline constexpr double kIlssMinReflectance = 1e-5;
/// Flat reflectance returned for black by the log-domain solvers.
inline constexpr double kLogBlackReflectance = 1e-4;

/// Symmetric 36x36 slope-penalty matrix: z'Dz = 2 * sum (z[i+1] - z[i])^2.
/// Main diagonal 4 (2 at both ends), off-diagonals -2.
using DifferenceMatrix = Eigen::Matrix<double, kBands, kBands>;

DifferenceMatrix build_difference_matrix();

/// Same penalty on an arbitrary number of samples (n >= 2).
Eigen::MatrixXd difference_matrix(Eigen::Index n);

/// Minimizes sum (x[i+1] - x[i])^2 subject to a * x = target by solving the
/// KKT system directly. Works for any column count; throws DegenerateError if
/// the system is singular.
Eigen::VectorXd least_slope_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& target);

/// Blocks of inv([D, T'; T, 0]): b11 is the upper-left 36x36, b12 the
/// upper-right 36x3. The unconstrained least-slope curve for rgb is b12 * rgb.
struct IlssPrecomputation {
    Eigen::Matrix<double, kBands, kBands> b11;
    Eigen::Matrix<double, kBands, 3> b12;
};

/// Throws DegenerateError when the KKT matrix is singular (T rank deficient).
IlssPrecomputation build_ilss_precomputation(const TMatrix& t);

struct NewtonSettings {
    int max_iterations = 100;
    double function_tolerance = 1e-8;
    double step_tolerance = 1e-8;
    int max_outer_iterations = 10;

    static NewtonSettings ilss_defaults() { return {0, 1e-8, 1e-8, 10}; }
    static NewtonSettings llss_defaults() { return {100, 1e-8, 1e-8, 10}; }
    static NewtonSettings illss_defaults() { return {50, 1e-8, 1e-8, 10}; }
    static NewtonSettings defaults_for(Algorithm algorithm);
};

/// Final operating point of the log-domain solvers: z = log(rho), lambda for
/// the three rgb constraints, mu for the pinned (rho = 1) entries.
struct RecoveryState {
    SpectrumVector z = SpectrumVector::Zero();
    Eigen::Vector3d lambda = Eigen::Vector3d::Zero();
    Eigen::VectorXd mu;
};

struct RecoveryResult {
    Reflectance36 rho;
    Algorithm algorithm = Algorithm::illss;
    // Newton steps (summed over outer passes for ILLSS; 0 for ILSS).
    int iterations = 0;
    // Bound-activation passes (ILSS) or clipping passes (ILLSS); 0 for LLSS.
    int outer_iterations = 0;
    bool converged = false;
    std::string diagnostic;
    RecoveryState state;
};

/// Iterative least slope squared: linear least-slope curve, then repeatedly
/// pins entries at 1 or kIlssMinReflectance until all are in range.
RecoveryResult ilss(Srgb8 srgb, const IlssPrecomputation& pre,
                    const NewtonSettings& settings = NewtonSettings::ilss_defaults());

/// Least log slope squared: Newton-Lagrange on z = log(rho). Values may
/// exceed 1.
RecoveryResult llss(Srgb8 srgb, const TMatrix& t, const NewtonSettings& settings = NewtonSettings::llss_defaults());

/// LLSS with an outer loop that pins entries >= 1 (z = 0) and re-solves until
/// no entry exceeds 1.
RecoveryResult illss(Srgb8 srgb, const TMatrix& t,
                     const NewtonSettings& settings = NewtonSettings::illss_defaults());

/// Owns a T matrix and its ILSS precomputation; dispatches by algorithm.
/// Immutable after construction and safe to share across threads.
class Recoverer {
public:
    explicit Recoverer(const TMatrix& t);

    RecoveryResult recover(Srgb8 srgb, Algorithm algorithm) const;
    RecoveryResult recover(Srgb8 srgb, Algorithm algorithm, const NewtonSettings& settings) const;

    const TMatrix& t_matrix() const noexcept { return t_; }
    const IlssPrecomputation& ilss_precomputation() const noexcept { return pre_; }

private:
    TMatrix t_;
    IlssPrecomputation pre_;
};

}  // namespace spectramix
