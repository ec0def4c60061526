#include "spectramix/tables.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "spectramix/errors.hpp"

namespace spectramix {

namespace {

// Values exactly as tabulated in data/*.csv.

constexpr double kCmf[3 * kBands] = {
    0.001368, 0.004243, 0.01431, 0.04351, 0.13438, 0.2839, 0.34828, 0.3362, 0.2908, 0.19536, 0.09564, 0.03201, 0.0049, 0.0093, 0.06327, 0.1655, 0.2904, 0.43345, 0.5945, 0.7621, 0.9163, 1.0263, 1.0622, 1.0026, 0.85445, 0.6424, 0.4479, 0.2835, 0.1649, 0.0874, 0.04677, 0.0227, 0.011359, 0.00579, 0.002899, 0.00144,
    0.000039, 0.00012, 0.000396, 0.00121, 0.004, 0.0116, 0.023, 0.038, 0.06, 0.09098, 0.13902, 0.20802, 0.323, 0.503, 0.71, 0.862, 0.954, 0.99495, 0.995, 0.952, 0.87, 0.757, 0.631, 0.503, 0.381, 0.265, 0.175, 0.107, 0.061, 0.032, 0.017, 0.00821, 0.004102, 0.002091, 0.001047, 0.00052,
    0.00645, 0.02005, 0.06785, 0.2074, 0.6456, 1.3856, 1.74706, 1.77211, 1.6692, 1.28764, 0.81295, 0.46518, 0.272, 0.1582, 0.07825, 0.04216, 0.0203, 0.00875, 0.0039, 0.0021, 0.00165, 0.0011, 0.0008, 0.00034, 0.00019, 0.00005, 0.00002, 0, 0, 0, 0, 0, 0, 0, 0, 0};

constexpr double kSrgbMatrix[9] = {
    3.243063328, -1.538376194, -0.49893282,
    -0.968963091, 1.875424508, 0.041543029,
    0.055683923, -0.204174384, 1.057994536};

constexpr double kTMatrix[3 * kBands] = {
    5.47813E-05, 0.000184722, 0.000935514, 0.003096265, 0.009507714, 0.017351596, 0.022073595, 0.016353161, 0.002002407, -0.016177731, -0.033929391, -0.046158952, -0.06381706, -0.083911194, -0.091832385, -0.08258148, -0.052950086, -0.012727224, 0.037413037, 0.091701812, 0.147964686, 0.181542886, 0.210684154, 0.210058081, 0.181312094, 0.132064724, 0.093723787, 0.057159281, 0.033469657, 0.018235464, 0.009298756, 0.004023687, 0.002068643, 0.00109484, 0.000454231, 0.000255925,
    -4.65552E-05, -0.000157894, -0.000806935, -0.002707449, -0.008477628, -0.016058258, -0.02200529, -0.020027434, -0.011137726, 0.003784809, 0.022138944, 0.038965605, 0.063361718, 0.095981626, 0.126280277, 0.148575844, 0.149044804, 0.14239936, 0.122084916, 0.09544734, 0.067421931, 0.035691251, 0.01313278, -0.002384996, -0.009409573, -0.009888983, -0.008379513, -0.005606153, -0.003444663, -0.001921041, -0.000995333, -0.000435322, -0.000224537, -0.000118838, -4.93038E-05, -2.77789E-05,
    0.00032594, 0.001107914, 0.005677477, 0.01918448, 0.060978641, 0.121348231, 0.184875618, 0.208804428, 0.197318551, 0.147233899, 0.091819086, 0.046485543, 0.022982618, 0.00665036, -0.005816014, -0.012450334, -0.015524259, -0.016712927, -0.01570093, -0.013647887, -0.011317812, -0.008077223, -0.005863171, -0.003943485, -0.002490472, -0.001440876, -0.000852895, -0.000458929, -0.000248389, -0.000129773, -6.41985E-05, -2.71982E-05, -1.38913E-05, -7.35203E-06, -3.05024E-06, -1.71858E-06};

constexpr double kD65[kBands] = {
    49.9755, 54.6482, 82.7549, 91.486, 93.4318, 86.6823, 104.865, 117.008, 117.812, 114.861, 115.923, 108.811, 109.354, 107.802, 104.79, 107.689, 104.405, 104.046, 100, 96.3342, 95.788, 88.6856, 90.0062, 89.5991, 87.6987, 83.2886, 83.6992, 80.0268, 80.2146, 82.2778, 78.2842, 69.7213, 71.6091, 74.349, 61.604, 69.8856};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_cell(const std::string& cell, std::size_t line) {
    // from_chars rejects a leading '+', which some exporters emit
    std::string_view text = cell;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError("not a number: '" + cell + "'", line);
    }
    return value;
}

void require_shape(const Eigen::MatrixXd& table, Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (table.rows() != rows || table.cols() != cols) {
        throw ParseError(std::string(what) + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " table, got " + std::to_string(table.rows()) + "x" + std::to_string(table.cols()),
                         0);
    }
}

}  // namespace

const CmfMatrix& cie1931_cmf() {
    static const CmfMatrix cmf{SpectralMatrix(Eigen::Map<const Eigen::Matrix<double, 3, kBands, Eigen::RowMajor>>(kCmf))};
    return cmf;
}

const RgbConversionMatrix& srgb_d65_matrix() {
    static const RgbConversionMatrix m{Eigen::Matrix3d(Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(kSrgbMatrix))};
    return m;
}

const TMatrix& canonical_t_matrix() {
    static const TMatrix t(SpectralMatrix(Eigen::Map<const Eigen::Matrix<double, 3, kBands, Eigen::RowMajor>>(kTMatrix)),
                           TProvenance::canonical);
    return t;
}

const Spd36& d65_illuminant() {
    static const Spd36 d65{SpectrumVector(Eigen::Map<const SpectrumVector>(kD65))};
    return d65;
}

Eigen::MatrixXd read_numeric_table(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = trimmed.find(',', start);
            const std::string cell =
                trim(std::string_view(trimmed).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            row.push_back(parse_cell(cell, line_no));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("expected " + std::to_string(rows.front().size()) + " columns, got " +
                                 std::to_string(row.size()),
                             line_no);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty table", 0);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return out;
}

Eigen::MatrixXd read_numeric_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0);
    return read_numeric_table(in);
}

void write_numeric_table(std::ostream& out, const Eigen::MatrixXd& table) {
    char buf[32];
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.cols(); ++j) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, table(i, j));
            if (j > 0) out << ", ";
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

CmfMatrix cmf_from_table(const Eigen::MatrixXd& table) {
    require_shape(table, 3, kBands, "color-matching functions");
    return CmfMatrix(table);
}

RgbConversionMatrix rgb_matrix_from_table(const Eigen::MatrixXd& table) {
    require_shape(table, 3, 3, "rgb conversion matrix");
    return RgbConversionMatrix(table);
}

Spd36 spd_from_table(const Eigen::MatrixXd& table) {
    // accept either a single row or a single column
    if (table.rows() == kBands && table.cols() == 1) return Spd36(SpectrumVector(table));
    require_shape(table, 1, kBands, "illuminant");
    return Spd36(SpectrumVector(table.transpose()));
}

TMatrix t_matrix_from_table(const Eigen::MatrixXd& table) {
    require_shape(table, 3, kBands, "T matrix");
    return TMatrix(table, TProvenance::composed);
}

}  // namespace spectramix
