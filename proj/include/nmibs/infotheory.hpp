#ifndef NMIBS_INFOTHEORY_HPP
#define NMIBS_INFOTHEORY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmibs {

// A discrete variable over the labeled pixels: integer levels in [0, bins).
struct QuantizedBand {
    std::vector<int> levels;
    int bins = 0;
};

struct JointHistogram {
    std::vector<std::int64_t> counts;  // bins_a x bins_b, row-major
    int bins_a = 0;
    int bins_b = 0;
    std::int64_t total = 0;

    std::int64_t at(int i, int j) const { return counts[i * bins_b + j]; }

    std::vector<std::int64_t> marginal_a() const {
        std::vector<std::int64_t> m(bins_a, 0);
        for (int i = 0; i < bins_a; ++i)
            for (int j = 0; j < bins_b; ++j) m[i] += at(i, j);
        return m;
    }
    std::vector<std::int64_t> marginal_b() const {
        std::vector<std::int64_t> m(bins_b, 0);
        for (int i = 0; i < bins_a; ++i)
            for (int j = 0; j < bins_b; ++j) m[j] += at(i, j);
        return m;
    }
};

/// Linear min-max quantization onto {0 .. bins-1}. A constant input maps
/// entirely to level 0.
inline QuantizedBand quantize(std::span<const double> values, int bins) {
    if (bins < 2) throw std::invalid_argument("bins must be >= 2");
    QuantizedBand q;
    q.bins = bins;
    q.levels.resize(values.size());
    if (values.empty()) return q;
    double lo = values[0], hi = values[0];
    for (double v : values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("non-finite value in quantize");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) {
        std::fill(q.levels.begin(), q.levels.end(), 0);
        return q;
    }
    const double scale = static_cast<double>(bins) / (hi - lo);
    for (std::size_t i = 0; i < values.size(); ++i) {
        int lvl = static_cast<int>(std::floor((values[i] - lo) * scale));
        q.levels[i] = std::min(lvl, bins - 1);
    }
    return q;
}

/// Wrap integer class labels (already discrete) as a QuantizedBand.
inline QuantizedBand labels_as_levels(std::span<const std::uint16_t> labels) {
    QuantizedBand q;
    int maxlab = 0;
    q.levels.reserve(labels.size());
    for (auto l : labels) {
        q.levels.push_back(static_cast<int>(l));
        maxlab = std::max(maxlab, static_cast<int>(l));
    }
    q.bins = maxlab + 1;
    return q;
}

/// Shannon entropy in bits of a count vector. Zero counts contribute zero.
/// The summation runs over the sorted nonzero counts, so the result depends
/// only on the count multiset; H(a,b) is then bitwise equal to H(b,a).
inline double entropy(std::span<const std::int64_t> counts) {
    std::int64_t total = 0;
    std::vector<std::int64_t> nonzero;
    for (auto c : counts) {
        if (c < 0) throw std::invalid_argument("negative count");
        if (c > 0) nonzero.push_back(c);
        total += c;
    }
    if (total == 0) throw std::invalid_argument("entropy of empty histogram");
    std::sort(nonzero.begin(), nonzero.end());
    double h = 0.0;
    for (auto c : nonzero) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

inline JointHistogram joint_histogram(const QuantizedBand& a,
                                      const QuantizedBand& b) {
    if (a.levels.size() != b.levels.size())
        throw std::invalid_argument("joint_histogram: length mismatch (" +
                                    std::to_string(a.levels.size()) + " vs " +
                                    std::to_string(b.levels.size()) + ")");
    JointHistogram jh;
    jh.bins_a = a.bins;
    jh.bins_b = b.bins;
    jh.counts.assign(static_cast<std::size_t>(a.bins) * b.bins, 0);
    for (std::size_t i = 0; i < a.levels.size(); ++i)
        ++jh.counts[a.levels[i] * b.bins + b.levels[i]];
    jh.total = static_cast<std::int64_t>(a.levels.size());
    return jh;
}

inline double joint_entropy(const JointHistogram& jh) {
    return entropy(jh.counts);
}

/// NMI(a,b) = (H(a)+H(b)) / H(a,b), in [1,2]. Undefined (nullopt) when both
/// variables are constant, i.e. H(a,b) = 0.
inline std::optional<double> nmi(const QuantizedBand& a,
                                 const QuantizedBand& b) {
    JointHistogram jh = joint_histogram(a, b);
    double hab = joint_entropy(jh);
    if (hab == 0.0) return std::nullopt;
    auto ma = jh.marginal_a();
    auto mb = jh.marginal_b();
    return (entropy(ma) + entropy(mb)) / hab;
}

/// I(a;b) = H(a) + H(b) - H(a,b), in bits. Undefined when both constant.
inline std::optional<double> mutual_information(const QuantizedBand& a,
                                                const QuantizedBand& b) {
    JointHistogram jh = joint_histogram(a, b);
    double hab = joint_entropy(jh);
    if (hab == 0.0) return std::nullopt;
    auto ma = jh.marginal_a();
    auto mb = jh.marginal_b();
    return entropy(ma) + entropy(mb) - hab;
}

}  // namespace nmibs

#endif  // NMIBS_INFOTHEORY_HPP
