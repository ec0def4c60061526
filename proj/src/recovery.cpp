#include "spectramix/recovery.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "spectramix/errors.hpp"

namespace spectramix {

namespace {

constexpr int kKkt = kBands + 3;

// Systems with reciprocal condition below this are treated as singular.
constexpr double kMinRcond = 1e-15;

using KktMatrix = Eigen::Matrix<double, kKkt, kKkt>;
using KktVector = Eigen::Matrix<double, kKkt, 1>;

const DifferenceMatrix& difference_matrix() {
    static const DifferenceMatrix d = build_difference_matrix();
    return d;
}

RecoveryResult flat_result(Algorithm algorithm, double level) {
    RecoveryResult out;
    out.rho = Reflectance36::constant(level);
    out.algorithm = algorithm;
    out.converged = true;
    out.state.z = SpectrumVector::Constant(std::log(level));
    return out;
}

bool all_white(Srgb8 c) { return c.r == 255 && c.g == 255 && c.b == 255; }
bool all_black(Srgb8 c) { return c.r == 0 && c.g == 0 && c.b == 0; }

// Last usable iterate for a non-converged solve.
Reflectance36 fallback_curve(const SpectrumVector& z) {
    const SpectrumVector r = z.array().exp().matrix();
    if (r.allFinite() && (r.array() > 0.0).all()) return Reflectance36(r);
    return Reflectance36::constant(kLogBlackReflectance);
}

std::vector<int> indices_where(const SpectrumVector& v, auto predicate) {
    std::vector<int> idx;
    for (int i = 0; i < kBands; ++i) {
        if (predicate(v(i))) idx.push_back(i);
    }
    return idx;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
    switch (algorithm) {
        case Algorithm::ilss: return "ilss";
        case Algorithm::llss: return "llss";
        case Algorithm::illss: return "illss";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "ilss") return Algorithm::ilss;
    if (lower == "llss") return Algorithm::llss;
    if (lower == "illss") return Algorithm::illss;
    return std::nullopt;
}

NewtonSettings NewtonSettings::defaults_for(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::ilss: return ilss_defaults();
        case Algorithm::llss: return llss_defaults();
        case Algorithm::illss: return illss_defaults();
    }
    return illss_defaults();
}

DifferenceMatrix build_difference_matrix() {
    return difference_matrix(kBands);
}

Eigen::MatrixXd difference_matrix(Eigen::Index n) {
    if (n < 2) throw DomainError("difference_matrix: need at least 2 samples");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d(i, i) = 4.0;
        if (i > 0) d(i, i - 1) = -2.0;
        if (i + 1 < n) d(i, i + 1) = -2.0;
    }
    d(0, 0) = 2.0;
    d(n - 1, n - 1) = 2.0;
    return d;
}

Eigen::VectorXd least_slope_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& target) {
    const Eigen::Index n = a.cols();
    const Eigen::Index m = a.rows();
    if (target.size() != m) throw DomainError("least_slope_solution: target size does not match constraint rows");
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m, n + m);
    kkt.topLeftCorner(n, n) = difference_matrix(n);
    kkt.topRightCorner(n, m) = a.transpose();
    kkt.bottomLeftCorner(m, n) = a;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) throw DegenerateError("least_slope_solution: KKT matrix is singular");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
    rhs.tail(m) = target;
    return lu.solve(rhs).head(n);
}

IlssPrecomputation build_ilss_precomputation(const TMatrix& t) {
    KktMatrix kkt = KktMatrix::Zero();
    kkt.topLeftCorner<kBands, kBands>() = build_difference_matrix();
    kkt.topRightCorner<kBands, 3>() = t.matrix().transpose();
    kkt.bottomLeftCorner<3, kBands>() = t.matrix();

    Eigen::FullPivLU<KktMatrix> lu(kkt);
    if (!lu.isInvertible()) throw DegenerateError("ILSS precomputation: KKT matrix is singular (T not full row rank)");
    const KktMatrix inv = lu.inverse();

    IlssPrecomputation pre;
    pre.b11 = inv.topLeftCorner<kBands, kBands>();
    pre.b12 = inv.topRightCorner<kBands, 3>();
    return pre;
}

RecoveryResult ilss(Srgb8 srgb, const IlssPrecomputation& pre, const NewtonSettings& settings) {
    if (all_white(srgb)) return flat_result(Algorithm::ilss, 1.0);
    if (all_black(srgb)) return flat_result(Algorithm::ilss, kIlssMinReflectance);

    constexpr double rhomin = kIlssMinReflectance;
    const Eigen::Vector3d rgb = srgb8_to_linear(srgb).vector();
    const SpectrumVector unconstrained = pre.b12 * rgb;

    SpectrumVector rho = SpectrumVector::Constant(0.5);
    auto out_of_bounds = [&] { return (rho.array() > 1.0).any() || (rho.array() < rhomin).any(); };

    RecoveryResult out;
    out.algorithm = Algorithm::ilss;
    int count = 0;
    bool singular = false;
    while ((out_of_bounds() && count <= settings.max_outer_iterations) || count == 0) {
        const std::vector<int> upper = indices_where(rho, [](double v) { return v >= 1.0; });
        const std::vector<int> lower = indices_where(rho, [](double v) { return v <= rhomin; });

        std::vector<int> fixed = upper;
        fixed.insert(fixed.end(), lower.begin(), lower.end());
        const auto n = static_cast<Eigen::Index>(fixed.size());

        if (n == 0) {
            rho = unconstrained;
        } else {
            // With K a row selection, K*B11*K' and B11*K' are plain slices.
            Eigen::MatrixXd kbk(n, n);
            Eigen::MatrixXd bk(kBands, n);
            Eigen::VectorXd excess(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const int fi = fixed[static_cast<std::size_t>(i)];
                bk.col(i) = pre.b11.col(fi);
                for (Eigen::Index j = 0; j < n; ++j) kbk(i, j) = pre.b11(fi, fixed[static_cast<std::size_t>(j)]);
                const double target = i < static_cast<Eigen::Index>(upper.size()) ? 1.0 : rhomin;
                excess(i) = unconstrained(fi) - target;
            }
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(kbk);
            if (lu.rcond() < kMinRcond) {
                singular = true;
                break;
            }
            rho = unconstrained - bk * lu.solve(excess);
        }
        // eliminate FP noise on the pinned entries
        for (int i : upper) rho(i) = 1.0;
        for (int i : lower) rho(i) = rhomin;
        ++count;
    }

    out.outer_iterations = count;
    out.rho = Reflectance36(rho);
    out.converged = !singular && !out_of_bounds();
    if (singular) {
        out.diagnostic = "ILSS: bound system became singular after " + std::to_string(count) + " iterations";
    } else if (!out.converged) {
        out.diagnostic = "ILSS: no solution found after " + std::to_string(settings.max_outer_iterations) + " iterations";
    }
    return out;
}

RecoveryResult llss(Srgb8 srgb, const TMatrix& t, const NewtonSettings& settings) {
    if (all_black(srgb)) return flat_result(Algorithm::llss, kLogBlackReflectance);

    const DifferenceMatrix& d = difference_matrix();
    const SpectralMatrix& tm = t.matrix();
    const Eigen::Vector3d rgb = srgb8_to_linear(srgb).vector();

    RecoveryResult out;
    out.algorithm = Algorithm::llss;
    SpectrumVector z = SpectrumVector::Zero();
    Eigen::Vector3d lambda = Eigen::Vector3d::Zero();

    KktMatrix jac = KktMatrix::Zero();
    KktVector f;
    for (int count = 0; count <= settings.max_iterations; ++count) {
        const SpectrumVector r = z.array().exp().matrix();
        const SpectrumVector v = -(r.cwiseProduct(tm.transpose() * lambda));
        const SpectralMatrix m2 = -(tm * r.asDiagonal());

        f.head<kBands>() = d * z + v;
        f.tail<3>() = rgb - tm * r;

        jac.topLeftCorner<kBands, kBands>() = d;
        jac.topLeftCorner<kBands, kBands>().diagonal() += v;
        jac.topRightCorner<kBands, 3>() = m2.transpose();
        jac.bottomLeftCorner<3, kBands>() = m2;

        Eigen::PartialPivLU<KktMatrix> lu(jac);
        if (!(lu.rcond() >= kMinRcond)) {
            out.diagnostic = "LLSS: singular Newton system at iteration " + std::to_string(count);
            out.iterations = count;
            break;
        }
        const KktVector delta = lu.solve(-f);
        z += delta.head<kBands>();
        lambda += delta.tail<3>();
        out.iterations = count + 1;

        if (!z.allFinite() || !lambda.allFinite()) {
            out.diagnostic = "LLSS: iterate diverged at iteration " + std::to_string(count);
            break;
        }
        if ((f.array().abs() < settings.function_tolerance).all() &&
            (delta.array().abs() < settings.step_tolerance).all()) {
            out.converged = true;
            break;
        }
    }

    out.state.z = z;
    out.state.lambda = lambda;
    if (out.converged) {
        out.rho = Reflectance36(SpectrumVector(z.array().exp().matrix()));
    } else {
        out.rho = fallback_curve(z);
        if (out.diagnostic.empty()) {
            out.diagnostic = "LLSS: no solution found in " + std::to_string(settings.max_iterations) + " iterations";
        }
    }
    return out;
}

RecoveryResult illss(Srgb8 srgb, const TMatrix& t, const NewtonSettings& settings) {
    if (all_black(srgb)) return flat_result(Algorithm::illss, kLogBlackReflectance);
    if (all_white(srgb)) return flat_result(Algorithm::illss, 1.0);

    const DifferenceMatrix& d = difference_matrix();
    const SpectralMatrix& tm = t.matrix();
    const Eigen::Vector3d rgb = srgb8_to_linear(srgb).vector();

    RecoveryResult out;
    out.algorithm = Algorithm::illss;

    SpectrumVector rho = SpectrumVector::Zero();
    bool have_solution = false;
    bool inner_converged = false;
    bool first_pass = true;
    int outer_count = 0;
    SpectrumVector z = SpectrumVector::Zero();

    while (((rho.array() > 1.0).any() && outer_count <= settings.max_outer_iterations) || first_pass) {
        first_pass = false;
        const std::vector<int> fixed = indices_where(rho, [](double v) { return v >= 1.0; });
        const auto nf = static_cast<Eigen::Index>(fixed.size());
        const Eigen::Index n = kKkt + nf;

        z.setZero();
        Eigen::Vector3d lambda = Eigen::Vector3d::Zero();
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(nf);

        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < nf; ++i) {
            const int fi = fixed[static_cast<std::size_t>(i)];
            jac(fi, kKkt + i) = 1.0;
            jac(kKkt + i, fi) = 1.0;
        }
        Eigen::VectorXd f(n);

        inner_converged = false;
        std::string failure;
        for (int count = 0; count <= settings.max_iterations; ++count) {
            const SpectrumVector r = z.array().exp().matrix();
            const SpectrumVector v = -(r.cwiseProduct(tm.transpose() * lambda));
            const SpectralMatrix m2 = -(tm * r.asDiagonal());

            f.head<kBands>() = d * z + v;
            f.segment<3>(kBands) = rgb - tm * r;
            for (Eigen::Index i = 0; i < nf; ++i) {
                const int fi = fixed[static_cast<std::size_t>(i)];
                f(fi) += mu(i);
                f(kKkt + i) = z(fi);
            }

            jac.topLeftCorner<kBands, kBands>() = d;
            jac.topLeftCorner<kBands, kBands>().diagonal() += v;
            jac.block<kBands, 3>(0, kBands) = m2.transpose();
            jac.block<3, kBands>(kBands, 0) = m2;

            Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
            if (!(lu.rcond() >= kMinRcond)) {
                failure = "singular Newton system";
                break;
            }
            const Eigen::VectorXd delta = lu.solve(-f);
            z += delta.head<kBands>();
            lambda += delta.segment<3>(kBands);
            mu += delta.tail(nf);
            ++out.iterations;

            if (!z.allFinite() || !lambda.allFinite() || !mu.allFinite()) {
                failure = "iterate diverged";
                break;
            }
            if ((f.array().abs() < settings.function_tolerance).all() &&
                (delta.array().abs() < settings.step_tolerance).all()) {
                inner_converged = true;
                break;
            }
        }
        ++outer_count;

        if (!inner_converged) {
            // Re-running the same pinned set would repeat this failure exactly.
            out.diagnostic = "ILLSS: no inner loop solution found after " + std::to_string(settings.max_iterations) +
                             " iterations" + (failure.empty() ? "" : " (" + failure + ")") + " in outer pass " +
                             std::to_string(outer_count);
            break;
        }
        // K z = 0 holds to ftol; make the pins exact so they stay pinned.
        for (int fi : fixed) z(fi) = 0.0;
        rho = z.array().exp().matrix();
        have_solution = true;
        out.state.z = z;
        out.state.lambda = lambda;
        out.state.mu = mu;
    }

    out.outer_iterations = outer_count;
    out.converged = have_solution && inner_converged && !(rho.array() > 1.0).any();
    out.rho = have_solution ? Reflectance36(rho) : fallback_curve(z);
    if (!out.converged && out.diagnostic.empty()) {
        out.diagnostic =
            "ILLSS: no outer loop solution found after " + std::to_string(settings.max_outer_iterations) + " iterations";
    }
    return out;
}

Recoverer::Recoverer(const TMatrix& t) : t_(t), pre_(build_ilss_precomputation(t)) {}

RecoveryResult Recoverer::recover(Srgb8 srgb, Algorithm algorithm) const {
    return recover(srgb, algorithm, NewtonSettings::defaults_for(algorithm));
}

RecoveryResult Recoverer::recover(Srgb8 srgb, Algorithm algorithm, const NewtonSettings& settings) const {
    switch (algorithm) {
        case Algorithm::ilss: return ilss(srgb, pre_, settings);
        case Algorithm::llss: return llss(srgb, t_, settings);
        case Algorithm::illss: return illss(srgb, t_, settings);
    }
    throw DomainError("unknown algorithm");
}

}  // namespace spectramix
