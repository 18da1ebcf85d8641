#ifndef NMIBS_SERIALIZE_HPP
#define NMIBS_SERIALIZE_HPP

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "nmibs/datacube.hpp"
#include "nmibs/eval.hpp"
#include "nmibs/selection.hpp"
#include "nmibs/svm.hpp"

namespace nmibs {

using json = nlohmann::ordered_json;

inline json to_json(const SelectionResult& r, const SelectionConfig& config) {
    json j;
    j["method"] = r.method;
    j["config"] = {{"k", config.k},
                   {"th", config.th},
                   {"bins", config.bins},
                   {"max_iterations", config.max_iterations}};
    j["selected"] = r.selected;
    j["iterations_used"] = r.iterations_used;
    json trace = json::array();
    for (const auto& row : r.trace) {
        json t;
        t["band"] = row.band;
        t["relevance"] = row.relevance ? json(*row.relevance) : json(nullptr);
        t["evaluation"] = row.evaluation ? json(*row.evaluation) : json(nullptr);
        t["accepted"] = row.accepted;
        trace.push_back(std::move(t));
    }
    j["trace"] = std::move(trace);
    return j;
}

inline json to_json(const EvalReport& r) {
    json j;
    j["oa"] = r.oa;
    j["aa"] = r.aa;
    j["per_class"] = r.per_class;
    j["elapsed_seconds"] = r.elapsed_seconds;
    j["selected_band_count"] = r.selected_band_count;
    j["train_fraction"] = r.train_fraction;
    return j;
}

inline json to_json(const MulticlassModel& m) {
    json j;
    j["class_labels"] = m.class_labels;
    j["params"] = {{"gamma", m.params.gamma},
                   {"c", m.params.c},
                   {"tolerance", m.params.tolerance},
                   {"max_passes", m.params.max_passes}};
    json scaling = json::array();
    for (auto [lo, hi] : m.feature_scaling) scaling.push_back({lo, hi});
    j["feature_scaling"] = std::move(scaling);
    json pairs = json::array();
    for (const auto& bm : m.pairwise) {
        json p;
        p["support_vectors"] = bm.support_vectors;
        p["alphas"] = bm.alphas;
        p["signs"] = bm.signs;
        p["bias"] = bm.bias;
        pairs.push_back(std::move(p));
    }
    j["pairwise"] = std::move(pairs);
    return j;
}

inline MulticlassModel model_from_json(const json& j) {
    MulticlassModel m;
    m.class_labels = j.at("class_labels").get<std::vector<int>>();
    m.params.gamma = j.at("params").at("gamma").get<double>();
    m.params.c = j.at("params").at("c").get<double>();
    m.params.tolerance = j.at("params").at("tolerance").get<double>();
    m.params.max_passes = j.at("params").at("max_passes").get<int>();
    for (const auto& s : j.at("feature_scaling"))
        m.feature_scaling.emplace_back(s.at(0).get<double>(),
                                       s.at(1).get<double>());
    for (const auto& p : j.at("pairwise")) {
        BinaryModel bm;
        bm.support_vectors =
            p.at("support_vectors").get<std::vector<std::vector<double>>>();
        bm.alphas = p.at("alphas").get<std::vector<double>>();
        bm.signs = p.at("signs").get<std::vector<int>>();
        bm.bias = p.at("bias").get<double>();
        m.pairwise.push_back(std::move(bm));
    }
    return m;
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

/// 8-bit P5 map: gray = floor(255 * label / class_count); label 0 stays 0.
inline void write_map_pgm(const std::string& path,
                          std::span<const int> labels, std::size_t width,
                          std::size_t height, int class_count) {
    if (labels.size() != width * height)
        throw std::invalid_argument("map size mismatch");
    std::ostringstream out;
    out << "P5\n" << width << " " << height << "\n255\n";
    for (int l : labels)
        out.put(static_cast<char>(255 * l / class_count));
    write_text(path, out.str());
}

/// Machine-readable map: one "row,col,label" line per pixel.
inline void write_map_csv(const std::string& path, std::span<const int> labels,
                          std::size_t width, std::size_t height) {
    if (labels.size() != width * height)
        throw std::invalid_argument("map size mismatch");
    std::ostringstream out;
    out << "row,col,label\n";
    for (std::size_t r = 0; r < height; ++r)
        for (std::size_t c = 0; c < width; ++c)
            out << r << "," << c << "," << labels[r * width + c] << "\n";
    write_text(path, out.str());
}

inline std::vector<int> read_map_csv(const std::string& path,
                                     std::size_t& width, std::size_t& height) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("row,col,label", 0) != 0)
        throw std::runtime_error("map csv missing header: " + path);
    std::vector<std::tuple<std::size_t, std::size_t, int>> cells;
    std::size_t maxr = 0, maxc = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t r, c;
        int l;
        char comma1, comma2;
        std::istringstream ss(line);
        if (!(ss >> r >> comma1 >> c >> comma2 >> l) || comma1 != ',' ||
            comma2 != ',')
            throw std::runtime_error("bad map csv line " +
                                     std::to_string(lineno));
        cells.emplace_back(r, c, l);
        maxr = std::max(maxr, r);
        maxc = std::max(maxc, c);
    }
    if (cells.empty()) throw std::runtime_error("empty map csv: " + path);
    width = maxc + 1;
    height = maxr + 1;
    if (cells.size() != width * height)
        throw std::runtime_error("map csv is not a full raster");
    std::vector<int> labels(width * height, 0);
    for (auto [r, c, l] : cells) labels[r * width + c] = l;
    return labels;
}

struct ReportRow {
    std::string method;
    int k = 0;
    double train_fraction = 0.0;
    double oa = 0.0;  // fraction
    double aa = 0.0;
    double time_s = 0.0;
};

inline std::string report_csv(std::span<const ReportRow> rows) {
    std::ostringstream out;
    out << "method,k,train_fraction,oa_pct,aa_pct,time_s\n";
    out << std::fixed;
    for (const auto& r : rows) {
        out << r.method << "," << r.k << "," << std::setprecision(2)
            << r.train_fraction << "," << std::setprecision(2) << 100.0 * r.oa
            << "," << std::setprecision(2) << 100.0 * r.aa << ","
            << std::setprecision(3) << r.time_s << "\n";
    }
    return out.str();
}

}  // namespace nmibs

#endif  // NMIBS_SERIALIZE_HPP
