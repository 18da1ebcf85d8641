#ifndef NMIBS_EVAL_HPP
#define NMIBS_EVAL_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nmibs {

struct ConfusionMatrix {
    std::vector<std::int64_t> counts;  // C x C, rows = true, cols = predicted
    std::vector<int> class_labels;

    std::size_t dim() const { return class_labels.size(); }
    std::int64_t at(std::size_t i, std::size_t j) const {
        return counts[i * dim() + j];
    }
    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

struct EvalReport {
    double oa = 0.0;
    double aa = 0.0;
    std::vector<double> per_class;
    double elapsed_seconds = 0.0;
    int selected_band_count = 0;
    double train_fraction = 0.0;
};

inline ConfusionMatrix confusion(std::span<const int> true_labels,
                                 std::span<const int> predicted_labels,
                                 std::span<const int> class_labels) {
    if (true_labels.size() != predicted_labels.size())
        throw std::invalid_argument("confusion: length mismatch");
    if (true_labels.empty())
        throw std::invalid_argument("confusion: empty input");
    if (class_labels.size() < 2)
        throw std::invalid_argument("confusion: need at least 2 classes");
    ConfusionMatrix cm;
    cm.class_labels.assign(class_labels.begin(), class_labels.end());
    const std::size_t c = cm.class_labels.size();
    cm.counts.assign(c * c, 0);
    auto index_of = [&](int label) {
        for (std::size_t i = 0; i < c; ++i)
            if (cm.class_labels[i] == label) return i;
        throw std::invalid_argument("unknown label " + std::to_string(label));
    };
    for (std::size_t p = 0; p < true_labels.size(); ++p)
        ++cm.counts[index_of(true_labels[p]) * c + index_of(predicted_labels[p])];
    return cm;
}

inline double overall_accuracy(const ConfusionMatrix& cm) {
    std::int64_t total = cm.total();
    if (total == 0) throw std::invalid_argument("empty confusion matrix");
    std::int64_t diag = 0;
    for (std::size_t i = 0; i < cm.dim(); ++i) diag += cm.at(i, i);
    return static_cast<double>(diag) / static_cast<double>(total);
}

inline std::vector<double> per_class_accuracy(const ConfusionMatrix& cm) {
    std::vector<double> out(cm.dim());
    for (std::size_t i = 0; i < cm.dim(); ++i) {
        std::int64_t row = 0;
        for (std::size_t j = 0; j < cm.dim(); ++j) row += cm.at(i, j);
        if (row == 0)
            throw std::invalid_argument(
                "class " + std::to_string(cm.class_labels[i]) +
                " never appears in test set");
        out[i] = static_cast<double>(cm.at(i, i)) / static_cast<double>(row);
    }
    return out;
}

inline double average_accuracy(const ConfusionMatrix& cm) {
    auto pc = per_class_accuracy(cm);
    double sum = 0.0;
    for (double a : pc) sum += a;
    return sum / static_cast<double>(pc.size());
}

/// Monotonic-clock wall time of a callable.
template <typename F>
auto run_timed(F&& task) {
    auto t0 = std::chrono::steady_clock::now();
    auto result = std::forward<F>(task)();
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    return std::pair{std::move(result), secs};
}

}  // namespace nmibs

#endif  // NMIBS_EVAL_HPP
