#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>

#include <Eigen/Core>
#include <Eigen/LU>

namespace spectramix {

// Spectral grid: 36 samples, 380..730 nm in 10 nm steps.
inline constexpr int kBands = 36;
inline constexpr int kFirstWavelengthNm = 380;
inline constexpr int kWavelengthStepNm = 10;

constexpr int wavelength_nm(int band) noexcept { return kFirstWavelengthNm + kWavelengthStepNm * band; }

using SpectrumVector = Eigen::Matrix<double, kBands, 1>;
using SpectralMatrix = Eigen::Matrix<double, 3, kBands>;

/// Reflectance fractions sampled on the 36-band grid. Values are finite;
/// producers in this library keep them strictly positive.
class Reflectance36 {
public:
    Reflectance36() : values_(SpectrumVector::Zero()) {}
    explicit Reflectance36(const SpectrumVector& values);
    explicit Reflectance36(std::span<const double> values);

    static Reflectance36 constant(double value);

    double operator[](int band) const { return values_(band); }
    const SpectrumVector& vector() const noexcept { return values_; }
    std::array<double, kBands> to_array() const;

    double min() const { return values_.minCoeff(); }
    double max() const { return values_.maxCoeff(); }

    friend bool operator==(const Reflectance36& a, const Reflectance36& b) { return a.values_ == b.values_; }

private:
    SpectrumVector values_;
};

/// Relative spectral power distribution on the 36-band grid (arbitrary scale).
class Spd36 {
public:
    explicit Spd36(const SpectrumVector& power);
    explicit Spd36(std::span<const double> power);

    const SpectrumVector& vector() const noexcept { return power_; }

private:
    SpectrumVector power_;
};

/// Color-matching functions, one row each for x-bar, y-bar, z-bar.
class CmfMatrix {
public:
    explicit CmfMatrix(const SpectralMatrix& rows);

    const SpectralMatrix& matrix() const noexcept { return rows_; }

private:
    SpectralMatrix rows_;
};

/// XYZ -> linear rgb. Rejects near-singular matrices at construction and keeps
/// the inverse for the reverse direction.
class RgbConversionMatrix {
public:
    explicit RgbConversionMatrix(const Eigen::Matrix3d& entries);

    const Eigen::Matrix3d& matrix() const noexcept { return entries_; }
    const Eigen::Matrix3d& inverse() const noexcept { return inverse_; }

private:
    Eigen::Matrix3d entries_;
    Eigen::Matrix3d inverse_;
};

enum class TProvenance { canonical, composed };

/// Reflectance -> linear rgb map (3 x 36).
class TMatrix {
public:
    TMatrix(const SpectralMatrix& entries, TProvenance provenance);

    const SpectralMatrix& matrix() const noexcept { return entries_; }
    TProvenance provenance() const noexcept { return provenance_; }
    Eigen::Vector3d row_sums() const { return entries_.rowwise().sum(); }

private:
    SpectralMatrix entries_;
    TProvenance provenance_;
};

struct LinearRgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    bool in_gamut() const noexcept;
    Eigen::Vector3d vector() const { return {r, g, b}; }
    static LinearRgb from_vector(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

    friend bool operator==(const LinearRgb&, const LinearRgb&) = default;
};

struct Srgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    /// Range-checked construction from plain integers.
    static Srgb8 from_ints(int r, int g, int b);

    bool is_gray() const noexcept { return r == g && g == b; }

    friend auto operator<=>(const Srgb8&, const Srgb8&) = default;
};

struct Xyz {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct Lab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct ClipResult {
    LinearRgb rgb;
    bool clipped = false;
};

/// Full forward pipeline output: unclipped linear rgb, quantized sRGB, and
/// whether clipping was needed to get there.
struct ForwardResult {
    LinearRgb linear;
    Srgb8 srgb;
    bool clipped = false;
};

// sRGB transfer functions on [0,1]. Both throw DomainError outside [0,1].
double srgb_decode(double companded);
double srgb_encode(double linear);

LinearRgb reflectance_to_linear_rgb(const Reflectance36& rho, const TMatrix& t);

/// Companding plus 8-bit quantization (round half away from zero). Input must
/// already be in gamut.
Srgb8 linear_rgb_to_srgb8(const LinearRgb& rgb);
LinearRgb srgb8_to_linear(Srgb8 c);

ClipResult clip_gamut(const LinearRgb& rgb);

/// T = M * A' * diag(W) / (A'_y . W).
TMatrix compose_t_matrix(const CmfMatrix& cmf, const RgbConversionMatrix& m, const Spd36& illuminant);

Xyz xyz_from_linear_rgb(const LinearRgb& rgb, const RgbConversionMatrix& m);
Lab xyz_to_lab(const Xyz& xyz, const Xyz& white);

/// reflectance -> T -> clip -> encode -> quantize.
ForwardResult forward_convert(const Reflectance36& rho, const TMatrix& t);

/// sRGB8 -> L*a*b* under the white of `m` (M^-1 * (1,1,1)).
Lab srgb8_to_lab(Srgb8 c, const RgbConversionMatrix& m);
Xyz white_point(const RgbConversionMatrix& m);

}  // namespace spectramix
