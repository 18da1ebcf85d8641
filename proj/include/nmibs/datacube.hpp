#ifndef NMIBS_DATACUBE_HPP
#define NMIBS_DATACUBE_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmibs {

enum class DataType { U16, F32 };

inline std::size_t dtype_width(DataType t) {
    return t == DataType::U16 ? 2 : 4;
}

// ENVI numeric data-type codes (4 = float32, 12 = uint16).
inline int dtype_code(DataType t) {
    return t == DataType::U16 ? 12 : 4;
}

struct CubeHeader {
    std::size_t samples = 0;  // width W
    std::size_t lines = 0;    // height H
    std::size_t bands = 0;    // N
    DataType dtype = DataType::U16;

    std::size_t pixels() const { return samples * lines; }
    std::size_t payload_bytes() const {
        return samples * lines * bands * dtype_width(dtype);
    }
};

// Dense band-sequential cube: values[band * W*H + row * W + col].
struct HyperCube {
    CubeHeader header;
    std::vector<double> values;

    std::span<const double> band(std::size_t b) const {
        return {values.data() + b * header.pixels(), header.pixels()};
    }
};

struct GroundTruth {
    std::size_t samples = 0;
    std::size_t lines = 0;
    std::vector<std::uint16_t> labels;  // row-major, 0 = unlabeled
    int class_count = 0;

    std::vector<std::size_t> labeled_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] != 0) out.push_back(i);
        return out;
    }
};

struct SplitAssignment {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    double fraction = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline std::vector<std::uint8_t> read_all_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint16_t decode_u16_le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline float decode_f32_le(const std::uint8_t* p) {
    std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                      (static_cast<std::uint32_t>(p[1]) << 8) |
                      (static_cast<std::uint32_t>(p[2]) << 16) |
                      (static_cast<std::uint32_t>(p[3]) << 24);
    float f;
    static_assert(sizeof(f) == sizeof(u));
    std::memcpy(&f, &u, sizeof(f));
    return f;
}

inline void encode_u16_le(std::uint16_t v, std::uint8_t* p) {
    p[0] = static_cast<std::uint8_t>(v & 0xff);
    p[1] = static_cast<std::uint8_t>(v >> 8);
}

inline void encode_f32_le(float f, std::uint8_t* p) {
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof(u));
    p[0] = static_cast<std::uint8_t>(u & 0xff);
    p[1] = static_cast<std::uint8_t>((u >> 8) & 0xff);
    p[2] = static_cast<std::uint8_t>((u >> 16) & 0xff);
    p[3] = static_cast<std::uint8_t>((u >> 24) & 0xff);
}

}  // namespace detail

/// Parse an ENVI-style plain-text header (samples/lines/bands/data type/
/// interleave/byte order). Only BSQ little-endian u16/f32 cubes are accepted.
inline CubeHeader parse_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open header: " + path);
    CubeHeader h;
    bool have_samples = false, have_lines = false, have_bands = false,
         have_dtype = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || detail::lower(t) == "envi") continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("header parse error at line " +
                                     std::to_string(lineno) + ": '" + t + "'");
        std::string key = detail::lower(detail::trim(t.substr(0, eq)));
        std::string val = detail::lower(detail::trim(t.substr(eq + 1)));
        auto parse_pos = [&](const char* what) -> std::size_t {
            long long v = 0;
            try {
                v = std::stoll(val);
            } catch (...) {
                throw std::runtime_error("header parse error at line " +
                                         std::to_string(lineno) + ": bad " +
                                         what + " value '" + val + "'");
            }
            if (v < 1)
                throw std::runtime_error("header parse error at line " +
                                         std::to_string(lineno) + ": " + what +
                                         " must be >= 1");
            return static_cast<std::size_t>(v);
        };
        if (key == "samples") {
            h.samples = parse_pos("samples");
            have_samples = true;
        } else if (key == "lines") {
            h.lines = parse_pos("lines");
            have_lines = true;
        } else if (key == "bands") {
            h.bands = parse_pos("bands");
            have_bands = true;
        } else if (key == "data type") {
            if (val == "12")
                h.dtype = DataType::U16;
            else if (val == "4")
                h.dtype = DataType::F32;
            else
                throw std::runtime_error(
                    "header parse error at line " + std::to_string(lineno) +
                    ": unsupported data type " + val + " (need 4 or 12)");
            have_dtype = true;
        } else if (key == "interleave") {
            if (val != "bsq")
                throw std::runtime_error("header parse error at line " +
                                         std::to_string(lineno) +
                                         ": unsupported interleave '" + val +
                                         "' (need bsq)");
        } else if (key == "byte order") {
            if (val != "0")
                throw std::runtime_error("header parse error at line " +
                                         std::to_string(lineno) +
                                         ": unsupported byte order '" + val +
                                         "' (need 0, little-endian)");
        }
        // unknown keys ignored
    }
    if (!have_samples || !have_lines || !have_bands || !have_dtype)
        throw std::runtime_error("header missing required key(s) in " + path);
    return h;
}

inline HyperCube load_cube(const std::string& header_path,
                           const std::string& raw_path) {
    CubeHeader h = parse_header(header_path);
    auto bytes = detail::read_all_bytes(raw_path);
    if (bytes.size() != h.payload_bytes())
        throw std::runtime_error(
            "raw payload size mismatch: expected " +
            std::to_string(h.payload_bytes()) + " bytes, got " +
            std::to_string(bytes.size()));
    HyperCube cube;
    cube.header = h;
    cube.values.resize(h.samples * h.lines * h.bands);
    const std::size_t px = h.pixels();
    if (h.dtype == DataType::U16) {
        for (std::size_t i = 0; i < cube.values.size(); ++i)
            cube.values[i] = detail::decode_u16_le(bytes.data() + 2 * i);
    } else {
        for (std::size_t i = 0; i < cube.values.size(); ++i) {
            double v = detail::decode_f32_le(bytes.data() + 4 * i);
            if (!std::isfinite(v)) {
                std::size_t b = i / px, r = (i % px) / h.samples,
                            c = (i % px) % h.samples;
                throw std::runtime_error(
                    "non-finite value at band " + std::to_string(b) + ", row " +
                    std::to_string(r) + ", col " + std::to_string(c));
            }
            cube.values[i] = v;
        }
    }
    return cube;
}

inline void write_cube(const HyperCube& cube, const std::string& header_path,
                       const std::string& raw_path) {
    const CubeHeader& h = cube.header;
    {
        std::ofstream out(header_path);
        if (!out) throw std::runtime_error("cannot write header: " + header_path);
        out << "ENVI\n"
            << "samples = " << h.samples << "\n"
            << "lines = " << h.lines << "\n"
            << "bands = " << h.bands << "\n"
            << "data type = " << dtype_code(h.dtype) << "\n"
            << "interleave = bsq\n"
            << "byte order = 0\n";
    }
    std::vector<std::uint8_t> bytes(h.payload_bytes());
    if (h.dtype == DataType::U16) {
        for (std::size_t i = 0; i < cube.values.size(); ++i)
            detail::encode_u16_le(static_cast<std::uint16_t>(cube.values[i]),
                                  bytes.data() + 2 * i);
    } else {
        for (std::size_t i = 0; i < cube.values.size(); ++i)
            detail::encode_f32_le(static_cast<float>(cube.values[i]),
                                  bytes.data() + 4 * i);
    }
    std::ofstream out(raw_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write raw: " + raw_path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

inline GroundTruth make_ground_truth(std::size_t samples, std::size_t lines,
                                     std::vector<std::uint16_t> labels) {
    if (labels.size() != samples * lines)
        throw std::runtime_error("ground truth size mismatch: expected " +
                                 std::to_string(samples * lines) +
                                 " labels, got " +
                                 std::to_string(labels.size()));
    std::set<std::uint16_t> distinct;
    for (auto l : labels)
        if (l != 0) distinct.insert(l);
    if (distinct.empty()) throw std::runtime_error("no labeled samples");
    // labels must be contiguous 1..C
    if (*distinct.rbegin() != distinct.size())
        throw std::runtime_error(
            "ground truth labels not contiguous: max label " +
            std::to_string(*distinct.rbegin()) + " but " +
            std::to_string(distinct.size()) + " distinct classes");
    GroundTruth gt;
    gt.samples = samples;
    gt.lines = lines;
    gt.labels = std::move(labels);
    gt.class_count = static_cast<int>(distinct.size());
    return gt;
}

inline GroundTruth load_ground_truth(const std::string& path,
                                     const CubeHeader& header) {
    auto bytes = detail::read_all_bytes(path);
    std::size_t expected = header.pixels() * 2;
    if (bytes.size() != expected)
        throw std::runtime_error("ground truth size mismatch: expected " +
                                 std::to_string(expected) + " bytes, got " +
                                 std::to_string(bytes.size()));
    std::vector<std::uint16_t> labels(header.pixels());
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = detail::decode_u16_le(bytes.data() + 2 * i);
    return make_ground_truth(header.samples, header.lines, std::move(labels));
}

inline void write_ground_truth(const GroundTruth& gt, const std::string& path) {
    std::vector<std::uint8_t> bytes(gt.labels.size() * 2);
    for (std::size_t i = 0; i < gt.labels.size(); ++i)
        detail::encode_u16_le(gt.labels[i], bytes.data() + 2 * i);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write ground truth: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

/// Tiny test-fixture format: one pixel per row, band columns then an integer
/// label column. Produces a 1xP cube.
inline std::pair<HyperCube, GroundTruth> load_csv_fixture(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    std::vector<std::vector<double>> rows;
    std::vector<std::uint16_t> labels;
    std::string line;
    int lineno = 0;
    std::size_t nbands = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::vector<double> cells;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                std::size_t pos = 0;
                std::string t = detail::trim(cell);
                double v = std::stod(t, &pos);
                if (pos != t.size()) throw std::invalid_argument("trailing");
                cells.push_back(v);
            } catch (...) {
                throw std::runtime_error("non-numeric cell at row " +
                                         std::to_string(lineno) + ", column " +
                                         std::to_string(col));
            }
        }
        if (cells.size() < 2)
            throw std::runtime_error("row " + std::to_string(lineno) +
                                     " needs at least one band and a label");
        if (nbands == 0)
            nbands = cells.size() - 1;
        else if (cells.size() - 1 != nbands)
            throw std::runtime_error("ragged row " + std::to_string(lineno) +
                                     ": expected " + std::to_string(nbands + 1) +
                                     " cells, got " +
                                     std::to_string(cells.size()));
        double lab = cells.back();
        if (lab < 0 || lab != std::floor(lab))
            throw std::runtime_error("row " + std::to_string(lineno) +
                                     ": label must be a non-negative integer");
        labels.push_back(static_cast<std::uint16_t>(lab));
        cells.pop_back();
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw std::runtime_error("empty csv fixture: " + path);
    HyperCube cube;
    cube.header.samples = rows.size();
    cube.header.lines = 1;
    cube.header.bands = nbands;
    cube.header.dtype = DataType::F32;
    cube.values.resize(rows.size() * nbands);
    for (std::size_t b = 0; b < nbands; ++b)
        for (std::size_t p = 0; p < rows.size(); ++p)
            cube.values[b * rows.size() + p] = rows[p][b];
    GroundTruth gt = make_ground_truth(rows.size(), 1, std::move(labels));
    return {std::move(cube), std::move(gt)};
}

/// Per-class proportional train/test split: round(fraction * class size)
/// training pixels per class, clamped to at least 1. Deterministic in seed.
inline SplitAssignment stratified_split(const GroundTruth& gt, double fraction,
                                        std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("fraction must lie in (0,1)");
    std::vector<std::vector<std::size_t>> per_class(gt.class_count);
    for (std::size_t i = 0; i < gt.labels.size(); ++i)
        if (gt.labels[i] != 0) per_class[gt.labels[i] - 1].push_back(i);
    SplitAssignment split;
    split.fraction = fraction;
    split.seed = seed;
    std::mt19937_64 rng(seed);
    for (int c = 0; c < gt.class_count; ++c) {
        auto& idx = per_class[c];
        if (idx.empty())
            throw std::runtime_error("class " + std::to_string(c + 1) +
                                     " has no labeled pixels");
        std::shuffle(idx.begin(), idx.end(), rng);
        std::size_t n_train = static_cast<std::size_t>(
            std::llround(fraction * static_cast<double>(idx.size())));
        n_train = std::max<std::size_t>(n_train, 1);
        split.train_indices.insert(split.train_indices.end(), idx.begin(),
                                   idx.begin() + n_train);
        split.test_indices.insert(split.test_indices.end(),
                                  idx.begin() + n_train, idx.end());
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    return split;
}

}  // namespace nmibs

#endif  // NMIBS_DATACUBE_HPP
