#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Core>

#include "spectramix/colorimetry.hpp"

namespace spectramix {

// Built-in tables. All are constructed once and are immutable.

/// CIE 1931 2-degree color-matching functions, 380..730 nm / 10 nm.
const CmfMatrix& cie1931_cmf();
/// XYZ -> linear sRGB, D65 white.
const RgbConversionMatrix& srgb_d65_matrix();
/// Published reflectance -> D65 linear sRGB map. Source of truth for all
/// conversions unless a caller composes its own.
const TMatrix& canonical_t_matrix();
/// CIE standard illuminant D65 relative SPD on the 36-band grid.
const Spd36& d65_illuminant();

/// Reads a comma-separated numeric matrix, one row per line. Blank lines and
/// lines starting with '#' are skipped. Throws ParseError on non-numeric cells
/// or ragged rows.
Eigen::MatrixXd read_numeric_table(std::istream& in);
Eigen::MatrixXd read_numeric_table(const std::filesystem::path& path);

void write_numeric_table(std::ostream& out, const Eigen::MatrixXd& table);

// Shape-checked conversions from a parsed table.
CmfMatrix cmf_from_table(const Eigen::MatrixXd& table);
RgbConversionMatrix rgb_matrix_from_table(const Eigen::MatrixXd& table);
Spd36 spd_from_table(const Eigen::MatrixXd& table);
TMatrix t_matrix_from_table(const Eigen::MatrixXd& table);

}  // namespace spectramix
