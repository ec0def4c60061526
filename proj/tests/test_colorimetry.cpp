#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "spectramix/colorimetry.hpp"
#include "spectramix/errors.hpp"
#include "spectramix/tables.hpp"

using namespace spectramix;

namespace {

const std::filesystem::path kData = SPECTRAMIX_DATA_DIR;

const double kTitaniumWhite[36] = {0.1228, 0.2032, 0.3886, 0.6489, 0.8518, 0.9362, 0.9568, 0.9625, 0.9673,
                                   0.9678, 0.9677, 0.9694, 0.9691, 0.9691, 0.9701, 0.9692, 0.9692, 0.9693,
                                   0.9668, 0.9695, 0.9679, 0.9676, 0.9671, 0.9673, 0.96734, 0.9655, 0.9661,
                                   0.9676, 0.9700, 0.9694, 0.9680, 0.9678, 0.9692, 0.9704, 0.9705, 0.9730};

Reflectance36 random_curve(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    SpectrumVector v;
    for (int i = 0; i < kBands; ++i) v(i) = u(rng);
    return Reflectance36(v);
}

}  // namespace

TEST_CASE("wavelength grid") {
    CHECK(wavelength_nm(0) == 380);
    CHECK(wavelength_nm(35) == 730);
}

TEST_CASE("srgb_decode examples") {
    CHECK(srgb_decode(0.0) == 0.0);
    CHECK(srgb_decode(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double linear_branch = 0.04045 / 12.92;
    const double power_branch = std::pow((0.04045 + 0.055) / 1.055, 2.4);
    CHECK(std::abs(linear_branch - power_branch) < 1e-7);
    CHECK(srgb_decode(0.04045) == doctest::Approx(0.0031308).epsilon(1e-6));
    CHECK(srgb_decode(128.0 / 255.0) == doctest::Approx(0.21586050011389926).epsilon(1e-12));
}

TEST_CASE("srgb_encode examples") {
    CHECK(srgb_encode(0.0) == 0.0);
    CHECK(srgb_encode(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(srgb_encode(0.5) == doctest::Approx(0.7353569830524495).epsilon(1e-12));
}

TEST_CASE("transfer functions reject values outside [0,1]") {
    CHECK_THROWS_AS(srgb_decode(-0.01), DomainError);
    CHECK_THROWS_AS(srgb_decode(1.01), DomainError);
    CHECK_THROWS_AS(srgb_encode(std::nan("")), DomainError);
}

TEST_CASE("transfer function properties") {
    double prev_d = -1.0, prev_e = -1.0;
    for (int i = 0; i <= 10000; ++i) {
        const double v = i / 10000.0;
        CHECK(std::abs(srgb_encode(srgb_decode(v)) - v) <= 1e-12);
        CHECK(srgb_decode(v) == doctest::Approx(oracle::decode(v)).epsilon(1e-14));
        CHECK(srgb_encode(v) == doctest::Approx(oracle::encode(v)).epsilon(1e-14));
        CHECK(srgb_decode(v) > prev_d);
        CHECK(srgb_encode(v) > prev_e);
        prev_d = srgb_decode(v);
        prev_e = srgb_encode(v);
    }
    // continuity at the branch points
    CHECK(std::abs(srgb_decode(0.04045) - srgb_decode(std::nextafter(0.04045, 0.0))) < 1e-6);
    CHECK(std::abs(srgb_encode(0.0031308) - srgb_encode(std::nextafter(0.0031308, 1.0))) < 1e-6);
}

TEST_CASE("reflectance_to_linear_rgb examples") {
    const TMatrix& t = canonical_t_matrix();
    const LinearRgb zero = reflectance_to_linear_rgb(Reflectance36::constant(0.0), t);
    CHECK(zero == LinearRgb{0.0, 0.0, 0.0});

    const LinearRgb ones = reflectance_to_linear_rgb(Reflectance36::constant(1.0), t);
    CHECK(std::abs(ones.r - 1.0) <= 1e-3);
    CHECK(std::abs(ones.g - 1.0) <= 1e-3);
    CHECK(std::abs(ones.b - 1.0) <= 1e-3);

    const LinearRgb white = reflectance_to_linear_rgb(Reflectance36(std::span<const double>(kTitaniumWhite)), t);
    const oracle::Vec3 expected =
        oracle::apply(oracle::rows_of(t), oracle::curve_of(Reflectance36(std::span<const double>(kTitaniumWhite))));
    CHECK(white.r == doctest::Approx(expected[0]).epsilon(1e-12));
    CHECK(white.g == doctest::Approx(expected[1]).epsilon(1e-12));
    CHECK(white.b == doctest::Approx(expected[2]).epsilon(1e-12));
    for (double c : {white.r, white.g, white.b}) {
        CHECK(c >= 0.75);
        CHECK(c <= 1.0);
    }
    // frozen from an offline evaluation
    CHECK(white.r == doctest::Approx(0.96281849).epsilon(1e-7));
    CHECK(white.g == doctest::Approx(0.97238592).epsilon(1e-7));
    CHECK(white.b == doctest::Approx(0.94315441).epsilon(1e-7));
}

TEST_CASE("reflectance_to_linear_rgb is linear") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const TMatrix& t = canonical_t_matrix();
    for (int trial = 0; trial < 500; ++trial) {
        const Reflectance36 a = random_curve(rng);
        const Reflectance36 b = random_curve(rng);
        const double alpha = coef(rng), beta = coef(rng);
        const Reflectance36 combo(SpectrumVector(alpha * a.vector() + beta * b.vector()));
        const Eigen::Vector3d lhs = reflectance_to_linear_rgb(combo, t).vector();
        const Eigen::Vector3d rhs =
            alpha * reflectance_to_linear_rgb(a, t).vector() + beta * reflectance_to_linear_rgb(b, t).vector();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("linear_rgb_to_srgb8 examples") {
    CHECK(linear_rgb_to_srgb8({0.0, 0.0, 0.0}) == Srgb8{0, 0, 0});
    CHECK(linear_rgb_to_srgb8({1.0, 1.0, 1.0}) == Srgb8{255, 255, 255});
    CHECK(linear_rgb_to_srgb8({0.5, 0.5, 0.5}) == Srgb8{188, 188, 188});
    CHECK_THROWS_AS(linear_rgb_to_srgb8({1.2, 0.0, 0.0}), DomainError);
}

TEST_CASE("srgb8_to_linear examples") {
    CHECK(srgb8_to_linear({255, 255, 255}) == LinearRgb{1.0, 1.0, 1.0});
    CHECK(srgb8_to_linear({0, 0, 0}) == LinearRgb{0.0, 0.0, 0.0});
    const LinearRgb mid = srgb8_to_linear({128, 128, 128});
    CHECK(mid.r == doctest::Approx(0.2159).epsilon(1e-3));
    CHECK(mid.r == mid.g);
    CHECK(mid.g == mid.b);
}

TEST_CASE("8-bit round trip through linear") {
    for (int v = 0; v < 256; ++v) {
        const Srgb8 c{static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(255 - v), static_cast<std::uint8_t>(v / 2)};
        CHECK(linear_rgb_to_srgb8(srgb8_to_linear(c)) == c);
    }
}

TEST_CASE("Srgb8 range check") {
    CHECK(Srgb8::from_ints(1, 2, 3) == Srgb8{1, 2, 3});
    CHECK_THROWS_AS(Srgb8::from_ints(256, 0, 0), DomainError);
    CHECK_THROWS_AS(Srgb8::from_ints(0, -1, 0), DomainError);
    CHECK(Srgb8{9, 9, 9}.is_gray());
    CHECK_FALSE(Srgb8{9, 9, 8}.is_gray());
}

TEST_CASE("clip_gamut examples") {
    const ClipResult inside = clip_gamut({0.5, 0.5, 0.5});
    CHECK(inside.rgb == LinearRgb{0.5, 0.5, 0.5});
    CHECK_FALSE(inside.clipped);

    const ClipResult outside = clip_gamut({1.2, -0.1, 0.5});
    CHECK(outside.rgb == LinearRgb{1.0, 0.0, 0.5});
    CHECK(outside.clipped);

    const ClipResult edge = clip_gamut({1.0, 1.0, 1.0});
    CHECK(edge.rgb == LinearRgb{1.0, 1.0, 1.0});
    CHECK_FALSE(edge.clipped);
}

TEST_CASE("forward_convert agrees with the plain-loop pipeline") {
    std::mt19937_64 rng(11);
    const TMatrix& t = canonical_t_matrix();
    const auto rows = oracle::rows_of(t);
    int clipped = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const Reflectance36 rho = random_curve(rng, 0.0, trial % 2 ? 1.0 : 1.6);
        const ForwardResult f = forward_convert(rho, t);
        CHECK(oracle::ints(f.srgb) == oracle::forward(rows, oracle::curve_of(rho)));
        clipped += f.clipped ? 1 : 0;
    }
    CHECK(clipped > 0);
}

TEST_CASE("canonical T rows sum to 1") {
    const Eigen::Vector3d sums = canonical_t_matrix().row_sums();
    for (int r = 0; r < 3; ++r) CHECK(std::abs(sums(r) - 1.0) <= 1e-3);
    CHECK(canonical_t_matrix().provenance() == TProvenance::canonical);
}

TEST_CASE("construction preconditions") {
    SpectralMatrix bad = canonical_t_matrix().matrix();
    bad(0, 0) += 0.01;
    CHECK_THROWS_AS(TMatrix(bad, TProvenance::canonical), DomainError);
    CHECK_NOTHROW(TMatrix(bad, TProvenance::composed));

    CHECK_THROWS_AS(RgbConversionMatrix(Eigen::Matrix3d::Zero()), DegenerateError);
    Eigen::Matrix3d rank2 = Eigen::Matrix3d::Identity();
    rank2.row(2) = rank2.row(0);
    CHECK_THROWS_AS(RgbConversionMatrix{rank2}, DegenerateError);

    CHECK_THROWS_AS(Spd36(SpectrumVector::Zero()), DegenerateError);
    SpectrumVector neg = SpectrumVector::Ones();
    neg(3) = -1.0;
    CHECK_THROWS_AS(Spd36{neg}, DomainError);

    SpectralMatrix cmf = cie1931_cmf().matrix();
    cmf(1, 10) = 0.0;
    CHECK_THROWS_AS(CmfMatrix{cmf}, DomainError);

    SpectrumVector nan = SpectrumVector::Ones();
    nan(0) = std::nan("");
    CHECK_THROWS_AS(Reflectance36{nan}, DomainError);
    const double short_row[35] = {};
    CHECK_THROWS_AS(Reflectance36(std::span<const double>(short_row)), DomainError);
}

TEST_CASE("compose_t_matrix reproduces the canonical T") {
    const TMatrix composed = compose_t_matrix(cie1931_cmf(), srgb_d65_matrix(), d65_illuminant());
    CHECK(composed.provenance() == TProvenance::composed);
    const double dev = (composed.matrix() - canonical_t_matrix().matrix()).cwiseAbs().maxCoeff();
    CHECK(dev <= 1e-4);
}

TEST_CASE("compose_t_matrix is invariant under illuminant scaling") {
    const TMatrix base = compose_t_matrix(cie1931_cmf(), srgb_d65_matrix(), d65_illuminant());
    for (double k : {1e-3, 0.5, 3.0, 1e4}) {
        const TMatrix scaled =
            compose_t_matrix(cie1931_cmf(), srgb_d65_matrix(), Spd36(SpectrumVector(k * d65_illuminant().vector())));
        const double rel = (scaled.matrix() - base.matrix()).cwiseAbs().maxCoeff() / base.matrix().cwiseAbs().maxCoeff();
        CHECK(rel <= 1e-12);
    }
}

TEST_CASE("compose_t_matrix with identity M gives unit Y for the illuminant") {
    const TMatrix xyz = compose_t_matrix(cie1931_cmf(), RgbConversionMatrix(Eigen::Matrix3d::Identity()), d65_illuminant());
    CHECK(xyz.row_sums()(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("compose_t_matrix rejects an illuminant invisible to y-bar") {
    // y-bar is zero only at the ends of the grid
    SpectrumVector edge = SpectrumVector::Zero();
    edge(35) = 1.0;
    SpectralMatrix cmf = cie1931_cmf().matrix();
    cmf(1, 35) = 0.0;
    CHECK_THROWS_AS(compose_t_matrix(CmfMatrix(cmf), srgb_d65_matrix(), Spd36(edge)), DegenerateError);
}

TEST_CASE("white point and XYZ") {
    const Xyz white = xyz_from_linear_rgb({1.0, 1.0, 1.0}, srgb_d65_matrix());
    CHECK(std::abs(white.y - 1.0) <= 1e-3);
    CHECK(white.x == doctest::Approx(0.95011875).epsilon(1e-6));
    CHECK(white.z == doctest::Approx(1.08816067).epsilon(1e-6));
    const Xyz zero = xyz_from_linear_rgb({0.0, 0.0, 0.0}, srgb_d65_matrix());
    CHECK(zero.x == 0.0);
    CHECK(zero.y == 0.0);
    CHECK(zero.z == 0.0);
    const Xyz wp = white_point(srgb_d65_matrix());
    CHECK(wp.y == white.y);
}

TEST_CASE("xyz_to_lab examples") {
    const Xyz white = white_point(srgb_d65_matrix());
    const Lab w = xyz_to_lab(white, white);
    CHECK(w.l == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(std::abs(w.a) <= 1e-12);
    CHECK(std::abs(w.b) <= 1e-12);

    const Lab k = xyz_to_lab({0.0, 0.0, 0.0}, white);
    CHECK(std::abs(k.l) <= 1e-12);
    CHECK(std::abs(k.a) <= 1e-12);
    CHECK(std::abs(k.b) <= 1e-12);

    const Lab g = xyz_to_lab({0.18 * white.x, 0.18 * white.y, 0.18 * white.z}, white);
    CHECK(g.l == doctest::Approx(49.496107610119594).epsilon(1e-12));
    CHECK(g.l == doctest::Approx(49.50).epsilon(1e-3));
    CHECK(std::abs(g.a) <= 1e-9);
    CHECK(std::abs(g.b) <= 1e-9);

    CHECK_THROWS_AS(xyz_to_lab(white, {0.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("neutral inputs have zero chroma and match the oracle") {
    const auto m = oracle::mat_of(srgb_d65_matrix());
    for (int v = 0; v < 256; ++v) {
        const auto u = static_cast<std::uint8_t>(v);
        const Lab lab = srgb8_to_lab({u, u, u}, srgb_d65_matrix());
        CHECK(std::abs(lab.a) <= 1e-9);
        CHECK(std::abs(lab.b) <= 1e-9);
        CHECK(lab.l == doctest::Approx(oracle::lab_from_srgb(m, {v, v, v})[0]).epsilon(1e-10));
    }
    const Lab red = srgb8_to_lab({255, 0, 0}, srgb_d65_matrix());
    const auto expected = oracle::lab_from_srgb(m, {255, 0, 0});
    CHECK(red.l == doctest::Approx(expected[0]).epsilon(1e-10));
    CHECK(red.a == doctest::Approx(expected[1]).epsilon(1e-10));
    CHECK(red.b == doctest::Approx(expected[2]).epsilon(1e-10));
}

TEST_CASE("data files match the embedded tables") {
    CHECK(cmf_from_table(read_numeric_table(kData / "cmf_cie1931_2deg.csv")).matrix() == cie1931_cmf().matrix());
    CHECK(rgb_matrix_from_table(read_numeric_table(kData / "m_xyz_to_srgb_d65.csv")).matrix() ==
          srgb_d65_matrix().matrix());
    CHECK(t_matrix_from_table(read_numeric_table(kData / "t_srgb_d65.csv")).matrix() == canonical_t_matrix().matrix());
    CHECK(spd_from_table(read_numeric_table(kData / "d65_spd.csv")).vector() == d65_illuminant().vector());
}

TEST_CASE("numeric table IO") {
    std::istringstream in("# comment\n1, 2, 3\n\n4,5,6\n");
    const Eigen::MatrixXd m = read_numeric_table(in);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m(1, 2) == 6.0);

    std::ostringstream out;
    write_numeric_table(out, m);
    std::istringstream back(out.str());
    CHECK(read_numeric_table(back) == m);

    std::istringstream ragged("1,2,3\n4,5\n");
    try {
        read_numeric_table(ragged);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream junk("1,x,3\n");
    CHECK_THROWS_AS(read_numeric_table(junk), ParseError);

    CHECK_THROWS_AS(cmf_from_table(Eigen::MatrixXd::Ones(3, 35)), ParseError);
    CHECK_THROWS_AS(rgb_matrix_from_table(Eigen::MatrixXd::Ones(3, 2)), ParseError);
    CHECK_NOTHROW(spd_from_table(Eigen::MatrixXd::Ones(36, 1)));
    CHECK_NOTHROW(spd_from_table(Eigen::MatrixXd::Ones(1, 36)));
}
