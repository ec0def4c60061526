#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spectramix/colorimetry.hpp"

namespace spectramix {

enum class Metric { srgb, lab };

std::string_view to_string(Metric metric) noexcept;
/// Accepts "srgb", "lab", "srgb-distance", "lab-distance".
std::optional<Metric> parse_metric(std::string_view name);

struct CatalogEntry {
    std::string name;
    Reflectance36 rho;
    LinearRgb linear;  // T * rho, unclipped
    Srgb8 srgb;        // clipped and quantized
    Lab lab;           // from the unclipped linear rgb
    bool in_gamut = false;
};

/// Immutable list of measured curves with their precomputed coordinates.
class Catalog {
public:
    Catalog(std::vector<CatalogEntry> entries, std::string source, std::vector<std::string> warnings = {});

    const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::string& source() const noexcept { return source_; }
    /// Ingestion notes, e.g. floored zero reflectances.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    const CatalogEntry* find(std::string_view name) const;

private:
    std::vector<CatalogEntry> entries_;
    std::string source_;
    std::vector<std::string> warnings_;
};

/// Computes every derived field of an entry from its curve.
CatalogEntry make_catalog_entry(std::string name, const Reflectance36& rho, const TMatrix& t,
                                const RgbConversionMatrix& m);

/// Parses the catalog CSV: a header `name,380,390,...,730`, then one row per
/// entry with a name and 36 reflectance values. Values <= 0 are floored to
/// 1e-5 and noted in Catalog::warnings(). Malformed rows and duplicate names
/// throw ParseError with the 1-based line number.
Catalog load_catalog(std::istream& in, const std::string& source, const TMatrix& t, const RgbConversionMatrix& m);
Catalog load_catalog(const std::filesystem::path& path, const TMatrix& t, const RgbConversionMatrix& m);

/// Writes entries back in the same CSV schema.
void write_catalog_csv(std::ostream& out, std::span<const CatalogEntry> entries);

/// Squared distance from a target to an entry in the chosen space.
double catalog_distance(Srgb8 target, const Lab& target_lab, const CatalogEntry& entry, Metric metric);

/// Exhaustive scan; ties go to the earlier entry. Throws DomainError on an
/// empty catalog.
const CatalogEntry& nearest_entry(Srgb8 target, const Catalog& catalog, Metric metric,
                                  const RgbConversionMatrix& m);

struct CatalogTarget {
    Srgb8 color;
    double parts = 1.0;
};

struct CatalogMixResult {
    Srgb8 srgb;
    Reflectance36 rho;
    std::vector<std::string> matched_names;
    bool clipped = false;
};

/// Nearest entry per target, WGM of the matched curves, forward conversion
/// with clipping.
CatalogMixResult catalog_mix(std::span<const CatalogTarget> targets, const Catalog& catalog, Metric metric,
                             const TMatrix& t, const RgbConversionMatrix& m);

}  // namespace spectramix
