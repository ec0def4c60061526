#include "spectramix/colorimetry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectramix/errors.hpp"

namespace spectramix {

namespace {

void require_finite(const SpectrumVector& v, const char* what) {
    if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite value");
}

SpectrumVector from_span(std::span<const double> values, const char* what) {
    if (values.size() != static_cast<std::size_t>(kBands)) {
        throw DomainError(std::string(what) + ": expected 36 values, got " + std::to_string(values.size()));
    }
    SpectrumVector v;
    std::copy(values.begin(), values.end(), v.data());
    return v;
}

void require_unit_interval(double v, const char* what) {
    // NaN fails both comparisons.
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + ": value outside [0,1]: " + std::to_string(v));
}

// CIE 1976 lightness companding function.
double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    if (t > delta3) return std::cbrt(t);
    return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

std::uint8_t quantize(double companded) {
    // round() is half-away-from-zero
    return static_cast<std::uint8_t>(std::lround(255.0 * companded));
}

}  // namespace

Reflectance36::Reflectance36(const SpectrumVector& values) : values_(values) {
    require_finite(values_, "reflectance");
}

Reflectance36::Reflectance36(std::span<const double> values) : values_(from_span(values, "reflectance")) {
    require_finite(values_, "reflectance");
}

Reflectance36 Reflectance36::constant(double value) {
    return Reflectance36(SpectrumVector::Constant(value));
}

std::array<double, kBands> Reflectance36::to_array() const {
    std::array<double, kBands> out{};
    std::copy(values_.data(), values_.data() + kBands, out.begin());
    return out;
}

Spd36::Spd36(const SpectrumVector& power) : power_(power) {
    require_finite(power_, "illuminant");
    if ((power_.array() < 0.0).any()) throw DomainError("illuminant: negative power");
    if ((power_.array() == 0.0).all()) throw DegenerateError("illuminant: all-zero power");
}

Spd36::Spd36(std::span<const double> power) : Spd36(from_span(power, "illuminant")) {}

CmfMatrix::CmfMatrix(const SpectralMatrix& rows) : rows_(rows) {
    if (!rows_.allFinite()) throw DomainError("color-matching functions: non-finite entry");
    if ((rows_.array() < 0.0).any()) throw DomainError("color-matching functions: negative entry");
    for (int i = 1; i + 1 < kBands; ++i) {
        if (rows_(1, i) <= 0.0) {
            throw DomainError("color-matching functions: y-bar not positive at " + std::to_string(wavelength_nm(i)) +
                              " nm");
        }
    }
}

RgbConversionMatrix::RgbConversionMatrix(const Eigen::Matrix3d& entries) : entries_(entries) {
    if (!entries_.allFinite()) throw DomainError("rgb conversion matrix: non-finite entry");
    Eigen::FullPivLU<Eigen::Matrix3d> lu(entries_);
    if (!lu.isInvertible() || lu.rcond() < 1e-12) throw DegenerateError("rgb conversion matrix is singular");
    inverse_ = lu.inverse();
}

TMatrix::TMatrix(const SpectralMatrix& entries, TProvenance provenance) : entries_(entries), provenance_(provenance) {
    if (!entries_.allFinite()) throw DomainError("T matrix: non-finite entry");
    // A canonical table must map the all-ones reflectance to white.
    if (provenance_ == TProvenance::canonical &&
        ((row_sums().array() - 1.0).abs() > 1e-3).any()) {
        throw DomainError("T matrix: canonical rows must sum to 1 within 1e-3");
    }
}

bool LinearRgb::in_gamut() const noexcept {
    auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    return ok(r) && ok(g) && ok(b);
}

Srgb8 Srgb8::from_ints(int r, int g, int b) {
    auto ok = [](int v) { return v >= 0 && v <= 255; };
    if (!ok(r) || !ok(g) || !ok(b)) {
        throw DomainError("sRGB channel outside 0-255: (" + std::to_string(r) + "," + std::to_string(g) + "," +
                          std::to_string(b) + ")");
    }
    return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
}

double srgb_decode(double companded) {
    require_unit_interval(companded, "srgb_decode");
    if (companded < 0.04045) return companded / 12.92;
    return std::pow((companded + 0.055) / 1.055, 2.4);
}

double srgb_encode(double linear) {
    require_unit_interval(linear, "srgb_encode");
    if (linear <= 0.0031308) return 12.92 * linear;
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

LinearRgb reflectance_to_linear_rgb(const Reflectance36& rho, const TMatrix& t) {
    return LinearRgb::from_vector(t.matrix() * rho.vector());
}

Srgb8 linear_rgb_to_srgb8(const LinearRgb& rgb) {
    if (!rgb.in_gamut()) throw DomainError("linear_rgb_to_srgb8: input not clipped to [0,1]");
    return {quantize(srgb_encode(rgb.r)), quantize(srgb_encode(rgb.g)), quantize(srgb_encode(rgb.b))};
}

LinearRgb srgb8_to_linear(Srgb8 c) {
    return {srgb_decode(c.r / 255.0), srgb_decode(c.g / 255.0), srgb_decode(c.b / 255.0)};
}

ClipResult clip_gamut(const LinearRgb& rgb) {
    ClipResult out{{std::clamp(rgb.r, 0.0, 1.0), std::clamp(rgb.g, 0.0, 1.0), std::clamp(rgb.b, 0.0, 1.0)}, false};
    out.clipped = !(out.rgb == rgb);
    return out;
}

TMatrix compose_t_matrix(const CmfMatrix& cmf, const RgbConversionMatrix& m, const Spd36& illuminant) {
    const double w = cmf.matrix().row(1).dot(illuminant.vector());
    if (!(w > 0.0)) throw DegenerateError("compose_t_matrix: illuminant has zero luminance normalization");
    SpectralMatrix t = m.matrix() * cmf.matrix() * illuminant.vector().asDiagonal();
    t /= w;
    return TMatrix(t, TProvenance::composed);
}

Xyz xyz_from_linear_rgb(const LinearRgb& rgb, const RgbConversionMatrix& m) {
    const Eigen::Vector3d xyz = m.inverse() * rgb.vector();
    return {xyz(0), xyz(1), xyz(2)};
}

Lab xyz_to_lab(const Xyz& xyz, const Xyz& white) {
    if (!(white.x > 0.0 && white.y > 0.0 && white.z > 0.0)) throw DomainError("xyz_to_lab: white point must be positive");
    const double fx = lab_f(xyz.x / white.x);
    const double fy = lab_f(xyz.y / white.y);
    const double fz = lab_f(xyz.z / white.z);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

ForwardResult forward_convert(const Reflectance36& rho, const TMatrix& t) {
    const LinearRgb linear = reflectance_to_linear_rgb(rho, t);
    const ClipResult clipped = clip_gamut(linear);
    return {linear, linear_rgb_to_srgb8(clipped.rgb), clipped.clipped};
}

Xyz white_point(const RgbConversionMatrix& m) {
    return xyz_from_linear_rgb({1.0, 1.0, 1.0}, m);
}

Lab srgb8_to_lab(Srgb8 c, const RgbConversionMatrix& m) {
    return xyz_to_lab(xyz_from_linear_rgb(srgb8_to_linear(c), m), white_point(m));
}

}  // namespace spectramix
