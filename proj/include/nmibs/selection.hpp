#ifndef NMIBS_SELECTION_HPP
#define NMIBS_SELECTION_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nmibs/datacube.hpp"
#include "nmibs/infotheory.hpp"

namespace nmibs {

struct SelectionConfig {
    int k = 1;                // target number of bands
    double th = 0.0;          // redundancy threshold
    int bins = 256;
    int max_iterations = -1;  // -1: default N-1
};

struct TraceRow {
    int band = -1;
    std::optional<double> relevance;   // NMI(GT, band) or MI score
    std::optional<double> evaluation;  // NMI(GT, GT_est) when evaluated
    bool accepted = false;
};

struct SelectionResult {
    std::string method;
    std::vector<int> selected;
    std::vector<TraceRow> trace;
    int iterations_used = 0;
};

struct BandScore {
    int band = -1;
    std::optional<double> score;
};

namespace detail {

inline std::vector<double> labeled_band_values(
    const HyperCube& cube, std::span<const std::size_t> labeled,
    std::size_t band) {
    auto b = cube.band(band);
    std::vector<double> out;
    out.reserve(labeled.size());
    for (auto i : labeled) out.push_back(b[i]);
    return out;
}

inline std::vector<double> normalize01(std::span<const double> v) {
    double lo = v[0], hi = v[0];
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    std::vector<double> out(v.size(), 0.0);
    if (hi > lo) {
        const double inv = 1.0 / (hi - lo);
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - lo) * inv;
    }
    return out;
}

inline QuantizedBand labeled_gt_levels(const GroundTruth& gt,
                                       std::span<const std::size_t> labeled) {
    QuantizedBand q;
    q.levels.reserve(labeled.size());
    for (auto i : labeled) q.levels.push_back(gt.labels[i]);
    q.bins = gt.class_count + 1;
    return q;
}

// Sort defined scores descending, ties by lower band index; undefined last.
inline void sort_scores(std::vector<BandScore>& scores) {
    std::stable_sort(scores.begin(), scores.end(),
                     [](const BandScore& a, const BandScore& b) {
                         if (a.score.has_value() != b.score.has_value())
                             return a.score.has_value();
                         if (a.score && b.score && *a.score != *b.score)
                             return *a.score > *b.score;
                         return a.band < b.band;
                     });
}

}  // namespace detail

/// NMI(GT, band) for every band, sorted descending (ties by lower index,
/// undefined-NMI bands last).
inline std::vector<BandScore> rank_bands_by_nmi(const HyperCube& cube,
                                                const GroundTruth& gt,
                                                int bins) {
    if (cube.header.samples != gt.samples || cube.header.lines != gt.lines)
        throw std::invalid_argument("cube and ground truth dimensions differ");
    auto labeled = gt.labeled_indices();
    if (labeled.empty()) throw std::runtime_error("no labeled samples");
    QuantizedBand gtq = detail::labeled_gt_levels(gt, labeled);
    std::vector<BandScore> scores(cube.header.bands);
    for (std::size_t b = 0; b < cube.header.bands; ++b) {
        auto vals = detail::labeled_band_values(cube, labeled, b);
        scores[b] = {static_cast<int>(b), nmi(gtq, quantize(vals, bins))};
    }
    detail::sort_scores(scores);
    return scores;
}

/// Greedy NMI-driven band selection. Seeds with the argmax-NMI band, then
/// walks the remaining bands in descending NMI(GT, band) order; a candidate
/// is kept iff averaging it into the running estimate GT_est raises
/// NMI(GT, GT_est) by more than th. Rejected candidates are consumed.
inline SelectionResult nmibs_select(const HyperCube& cube,
                                    const GroundTruth& gt,
                                    const SelectionConfig& config) {
    const int n = static_cast<int>(cube.header.bands);
    if (config.k < 1 || config.k > n)
        throw std::invalid_argument("k must lie in [1, bands]");
    const int max_iter =
        config.max_iterations < 0 ? n - 1 : config.max_iterations;
    if (max_iter > n - 1)
        throw std::invalid_argument("max_iterations must be <= bands-1");

    auto ranking = rank_bands_by_nmi(cube, gt, config.bins);
    if (!ranking.front().score)
        throw std::runtime_error("no informative bands");

    auto labeled = gt.labeled_indices();
    QuantizedBand gtq = detail::labeled_gt_levels(gt, labeled);

    SelectionResult result;
    result.method = "nmibs";

    // Seed: argmax band; GT_est starts as its normalized values.
    const int first = ranking.front().band;
    std::vector<double> gt_est = detail::normalize01(
        detail::labeled_band_values(cube, labeled, first));
    std::optional<double> best =
        nmi(gtq, quantize(gt_est, config.bins));
    result.selected.push_back(first);
    result.trace.push_back({first, ranking.front().score, best, true});

    std::size_t next = 1;  // cursor into ranking
    int z = 0;
    while (static_cast<int>(result.selected.size()) < config.k &&
           z < max_iter && next < ranking.size()) {
        const BandScore& cand = ranking[next++];
        ++z;
        if (!cand.score) {
            result.trace.push_back({cand.band, std::nullopt, std::nullopt, false});
            continue;
        }
        std::vector<double> band_norm = detail::normalize01(
            detail::labeled_band_values(cube, labeled, cand.band));
        std::vector<double> est(gt_est.size());
        for (std::size_t i = 0; i < est.size(); ++i)
            est[i] = (gt_est[i] + band_norm[i]) / 2.0;
        std::optional<double> score = nmi(gtq, quantize(est, config.bins));
        bool accept = score && best && *score > *best + config.th;
        if (accept) {
            best = score;
            gt_est = std::move(est);
            result.selected.push_back(cand.band);
        }
        result.trace.push_back({cand.band, cand.score, score, accept});
    }
    result.iterations_used = z;
    return result;
}

/// Top-k bands by I(GT; band), no redundancy control.
inline SelectionResult mim_select(const HyperCube& cube, const GroundTruth& gt,
                                  int k, int bins) {
    const int n = static_cast<int>(cube.header.bands);
    if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, bands]");
    auto labeled = gt.labeled_indices();
    if (labeled.empty()) throw std::runtime_error("no labeled samples");
    QuantizedBand gtq = detail::labeled_gt_levels(gt, labeled);
    std::vector<BandScore> scores(n);
    for (int b = 0; b < n; ++b) {
        auto vals = detail::labeled_band_values(cube, labeled, b);
        scores[b] = {b, mutual_information(gtq, quantize(vals, bins))};
    }
    detail::sort_scores(scores);
    SelectionResult result;
    result.method = "mim";
    for (int i = 0; i < k; ++i) {
        result.selected.push_back(scores[i].band);
        result.trace.push_back({scores[i].band, scores[i].score, std::nullopt, true});
    }
    result.iterations_used = k;
    return result;
}

/// Greedy minimum-redundancy maximum-relevance: first band by max I(band;GT),
/// then argmax of I(band;GT) - mean over selected of I(band;selected).
inline SelectionResult mrmr_select(const HyperCube& cube, const GroundTruth& gt,
                                   int k, int bins) {
    const int n = static_cast<int>(cube.header.bands);
    if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, bands]");
    auto labeled = gt.labeled_indices();
    if (labeled.empty()) throw std::runtime_error("no labeled samples");
    QuantizedBand gtq = detail::labeled_gt_levels(gt, labeled);

    std::vector<QuantizedBand> bands(n);
    std::vector<double> relevance(n, 0.0);
    for (int b = 0; b < n; ++b) {
        bands[b] = quantize(detail::labeled_band_values(cube, labeled, b), bins);
        relevance[b] = mutual_information(gtq, bands[b]).value_or(0.0);
    }

    SelectionResult result;
    result.method = "mrmr";
    std::vector<bool> taken(n, false);
    std::vector<double> redundancy_sum(n, 0.0);
    for (int step = 0; step < k; ++step) {
        int pick = -1;
        double pick_score = 0.0;
        for (int b = 0; b < n; ++b) {
            if (taken[b]) continue;
            double score = relevance[b];
            if (step > 0) score -= redundancy_sum[b] / step;
            if (pick < 0 || score > pick_score) {
                pick = b;
                pick_score = score;
            }
        }
        taken[pick] = true;
        result.selected.push_back(pick);
        result.trace.push_back({pick, pick_score, std::nullopt, true});
        for (int b = 0; b < n; ++b)
            if (!taken[b])
                redundancy_sum[b] +=
                    mutual_information(bands[b], bands[pick]).value_or(0.0);
    }
    result.iterations_used = k;
    return result;
}

}  // namespace nmibs

#endif  // NMIBS_SELECTION_HPP
