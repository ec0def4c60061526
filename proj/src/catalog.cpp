#include "spectramix/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "spectramix/errors.hpp"
#include "spectramix/mixing.hpp"

namespace spectramix {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

void check_header(std::string_view line, std::size_t line_no) {
    const auto cells = split_commas(line);
    if (cells.size() != kBands + 1 || cells[0] != "name") {
        throw ParseError("header must be 'name' followed by the 36 wavelengths 380..730", line_no);
    }
    for (int band = 0; band < kBands; ++band) {
        if (cells[static_cast<std::size_t>(band) + 1] != std::to_string(wavelength_nm(band))) {
            throw ParseError("header column " + std::to_string(band + 2) + " should be " +
                                 std::to_string(wavelength_nm(band)),
                             line_no);
        }
    }
}

double sq(double v) { return v * v; }

}  // namespace

std::string_view to_string(Metric metric) noexcept {
    return metric == Metric::srgb ? "srgb" : "lab";
}

std::optional<Metric> parse_metric(std::string_view name) {
    if (name == "srgb" || name == "srgb-distance") return Metric::srgb;
    if (name == "lab" || name == "lab-distance") return Metric::lab;
    return std::nullopt;
}

Catalog::Catalog(std::vector<CatalogEntry> entries, std::string source, std::vector<std::string> warnings)
    : entries_(std::move(entries)), source_(std::move(source)), warnings_(std::move(warnings)) {
    std::unordered_set<std::string_view> seen;
    for (const auto& e : entries_) {
        if (!seen.insert(e.name).second) throw DomainError("catalog: duplicate entry name '" + e.name + "'");
    }
}

const CatalogEntry* Catalog::find(std::string_view name) const {
    const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.name == name; });
    return it == entries_.end() ? nullptr : &*it;
}

CatalogEntry make_catalog_entry(std::string name, const Reflectance36& rho, const TMatrix& t,
                                const RgbConversionMatrix& m) {
    CatalogEntry e;
    e.name = std::move(name);
    e.rho = rho;
    e.linear = reflectance_to_linear_rgb(rho, t);
    e.in_gamut = e.linear.in_gamut();
    e.srgb = linear_rgb_to_srgb8(clip_gamut(e.linear).rgb);
    e.lab = xyz_to_lab(xyz_from_linear_rgb(e.linear, m), white_point(m));
    return e;
}

Catalog load_catalog(std::istream& in, const std::string& source, const TMatrix& t, const RgbConversionMatrix& m) {
    std::vector<CatalogEntry> entries;
    std::vector<std::string> warnings;
    std::unordered_set<std::string> names;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (line_no == 1 && text.substr(0, 3) == "\xEF\xBB\xBF") text = trim(text.substr(3));  // UTF-8 BOM
        if (text.empty()) continue;
        if (!have_header) {
            check_header(text, line_no);
            have_header = true;
            continue;
        }

        const auto cells = split_commas(text);
        if (cells.size() != kBands + 1) {
            throw ParseError("expected a name and 36 reflectance values, got " + std::to_string(cells.size() - 1) +
                                 " values",
                             line_no);
        }
        const std::string name(cells[0]);
        if (name.empty()) throw ParseError("empty entry name", line_no);
        if (!names.insert(name).second) throw ParseError("duplicate entry name '" + name + "'", line_no);

        SpectrumVector values;
        bool floored = false;
        for (int band = 0; band < kBands; ++band) {
            const std::string_view cell = cells[static_cast<std::size_t>(band) + 1];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(v)) {
                throw ParseError("bad reflectance value '" + std::string(cell) + "' at " +
                                     std::to_string(wavelength_nm(band)) + " nm",
                                 line_no);
            }
            if (v <= 0.0) {
                v = kReflectanceFloor;
                floored = true;
            }
            values(band) = v;
        }
        if (floored) {
            warnings.push_back("line " + std::to_string(line_no) + ": '" + name +
                               "' had reflectance <= 0, floored to 1e-5");
        }
        entries.push_back(make_catalog_entry(name, Reflectance36(values), t, m));
    }
    if (!have_header) throw ParseError("missing header row", 0);
    return Catalog(std::move(entries), source, std::move(warnings));
}

Catalog load_catalog(const std::filesystem::path& path, const TMatrix& t, const RgbConversionMatrix& m) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open catalog " + path.string(), 0);
    return load_catalog(in, path.string(), t, m);
}

void write_catalog_csv(std::ostream& out, std::span<const CatalogEntry> entries) {
    out << "name";
    for (int band = 0; band < kBands; ++band) out << ',' << wavelength_nm(band);
    out << '\n';
    char buf[32];
    for (const auto& e : entries) {
        out << e.name;
        for (int band = 0; band < kBands; ++band) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.rho[band]);
            out << ',';
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

double catalog_distance(Srgb8 target, const Lab& target_lab, const CatalogEntry& entry, Metric metric) {
    if (metric == Metric::srgb) {
        return sq(double(target.r) - entry.srgb.r) + sq(double(target.g) - entry.srgb.g) +
               sq(double(target.b) - entry.srgb.b);
    }
    return sq(target_lab.l - entry.lab.l) + sq(target_lab.a - entry.lab.a) + sq(target_lab.b - entry.lab.b);
}

const CatalogEntry& nearest_entry(Srgb8 target, const Catalog& catalog, Metric metric, const RgbConversionMatrix& m) {
    if (catalog.empty()) throw DomainError("nearest_entry: catalog is empty");
    const Lab target_lab = srgb8_to_lab(target, m);
    const CatalogEntry* best = nullptr;
    double best_distance = 0.0;
    for (const auto& entry : catalog.entries()) {
        const double d = catalog_distance(target, target_lab, entry, metric);
        if (best == nullptr || d < best_distance) {
            best = &entry;
            best_distance = d;
        }
    }
    return *best;
}

CatalogMixResult catalog_mix(std::span<const CatalogTarget> targets, const Catalog& catalog, Metric metric,
                             const TMatrix& t, const RgbConversionMatrix& m) {
    if (targets.size() < 2) throw DomainError("catalog_mix: need at least two targets");
    std::vector<double> parts;
    std::vector<Reflectance36> curves;
    CatalogMixResult out;
    for (const auto& target : targets) {
        const CatalogEntry& entry = nearest_entry(target.color, catalog, metric, m);
        out.matched_names.push_back(entry.name);
        curves.push_back(entry.rho);
        parts.push_back(target.parts);
    }
    out.rho = wgm_mix(curves, weights_from_parts(parts));
    const ForwardResult forward = forward_convert(out.rho, t);
    out.srgb = forward.srgb;
    out.clipped = forward.clipped;
    return out;
}

}  // namespace spectramix
