#ifndef NMIBS_PIPELINE_HPP
#define NMIBS_PIPELINE_HPP

#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "nmibs/datacube.hpp"
#include "nmibs/eval.hpp"
#include "nmibs/selection.hpp"
#include "nmibs/svm.hpp"

namespace nmibs {

struct PipelineOptions {
    std::string method = "nmibs";  // nmibs | mim | mrmr | allbands
    int k = 10;
    double th = 0.0;
    int bins = 256;
    double train_fraction = 0.1;
    std::uint64_t seed = 0;
    double svm_c = 100.0;
    double svm_gamma = 0.0;  // <= 0: default 1/(#selected bands)
    double svm_tolerance = 1e-3;
    int svm_max_passes = 5;
};

struct PipelineOutcome {
    SelectionResult selection;
    EvalReport report;
    std::vector<int> map_labels;  // full-scene prediction, row-major
};

inline std::vector<std::vector<double>> extract_features(
    const HyperCube& cube, std::span<const std::size_t> pixel_indices,
    std::span<const int> bands) {
    std::vector<std::vector<double>> rows(pixel_indices.size());
    for (std::size_t p = 0; p < pixel_indices.size(); ++p) {
        rows[p].reserve(bands.size());
        for (int b : bands) rows[p].push_back(cube.band(b)[pixel_indices[p]]);
    }
    return rows;
}

inline SelectionResult run_selection(const HyperCube& cube,
                                     const GroundTruth& gt,
                                     const PipelineOptions& opt) {
    if (opt.method == "nmibs") {
        SelectionConfig cfg{opt.k, opt.th, opt.bins, -1};
        return nmibs_select(cube, gt, cfg);
    }
    if (opt.method == "mim") return mim_select(cube, gt, opt.k, opt.bins);
    if (opt.method == "mrmr") return mrmr_select(cube, gt, opt.k, opt.bins);
    if (opt.method == "allbands") {
        SelectionResult r;
        r.method = "allbands";
        r.selected.resize(cube.header.bands);
        std::iota(r.selected.begin(), r.selected.end(), 0);
        return r;
    }
    throw std::invalid_argument("unknown method: " + opt.method);
}

/// select -> split -> train -> predict the whole scene -> score on the test
/// pixels. The elapsed figure covers selection, training, and prediction.
inline PipelineOutcome run_pipeline(const HyperCube& cube,
                                    const GroundTruth& gt,
                                    const PipelineOptions& opt) {
    PipelineOutcome out;
    auto [result, elapsed] = run_timed([&] {
        SelectionResult sel = run_selection(cube, gt, opt);

        SplitAssignment split =
            stratified_split(gt, opt.train_fraction, opt.seed);

        KernelParams params;
        params.c = opt.svm_c;
        params.gamma = opt.svm_gamma > 0
                           ? opt.svm_gamma
                           : 1.0 / static_cast<double>(sel.selected.size());
        params.tolerance = opt.svm_tolerance;
        params.max_passes = opt.svm_max_passes;

        auto train_x = extract_features(cube, split.train_indices, sel.selected);
        std::vector<int> train_y;
        train_y.reserve(split.train_indices.size());
        for (auto i : split.train_indices) train_y.push_back(gt.labels[i]);

        MulticlassModel model =
            train_multiclass(train_x, train_y, params, opt.seed);

        std::vector<std::size_t> all_pixels(gt.labels.size());
        std::iota(all_pixels.begin(), all_pixels.end(), std::size_t{0});
        auto all_x = extract_features(cube, all_pixels, sel.selected);
        std::vector<int> map = predict(model, all_x);
        return std::tuple{std::move(sel), std::move(split), std::move(map)};
    });
    auto& [sel, split, map] = result;

    std::vector<int> truth, pred;
    truth.reserve(split.test_indices.size());
    for (auto i : split.test_indices) {
        truth.push_back(gt.labels[i]);
        pred.push_back(map[i]);
    }
    std::vector<int> class_labels(gt.class_count);
    std::iota(class_labels.begin(), class_labels.end(), 1);
    ConfusionMatrix cm = confusion(truth, pred, class_labels);

    out.report.oa = overall_accuracy(cm);
    out.report.per_class = per_class_accuracy(cm);
    out.report.aa = average_accuracy(cm);
    out.report.elapsed_seconds = elapsed;
    out.report.selected_band_count = static_cast<int>(sel.selected.size());
    out.report.train_fraction = opt.train_fraction;
    out.selection = std::move(sel);
    out.map_labels = std::move(map);
    return out;
}

}  // namespace nmibs

#endif  // NMIBS_PIPELINE_HPP
