#ifndef NMIBS_SYNTHETIC_HPP
#define NMIBS_SYNTHETIC_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "nmibs/datacube.hpp"

namespace nmibs {

struct PlantedCube {
    HyperCube cube;
    GroundTruth gt;
    std::vector<int> signal_bands;     // label-correlated bands
    std::vector<int> duplicate_bands;  // exact copies of signal bands
};

/// Random cube with n_signal label-correlated bands, optional exact
/// duplicates of signal bands, and independent-noise filler. Each signal band
/// is a distinct binary threshold of the class label (low classes 0, high
/// classes 1), so every signal band refines the class partition carried by
/// the others; with n_signal <= n_classes - 1 the signal set is exactly the
/// minimal band subset that separates all classes. Duplicates are always
/// placed at a higher band index than their source so that the lower-index
/// tie rule keeps the source canonical.
inline PlantedCube make_planted_cube(std::size_t width, std::size_t height,
                                     int n_bands, int n_signal,
                                     int n_duplicates, int n_classes,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t px = width * height;

    PlantedCube out;
    out.cube.header.samples = width;
    out.cube.header.lines = height;
    out.cube.header.bands = static_cast<std::size_t>(n_bands);
    out.cube.header.dtype = DataType::F32;
    out.cube.values.assign(px * n_bands, 0.0);

    std::vector<std::uint16_t> labels(px);
    for (std::size_t i = 0; i < px; ++i)
        labels[i] = static_cast<std::uint16_t>(1 + i % n_classes);
    std::shuffle(labels.begin(), labels.end(), rng);
    out.gt = make_ground_truth(width, height, std::move(labels));

    // roles by band index: signal first-come in a shuffled ordering,
    // duplicates drawn afterwards so each lands above its source
    std::vector<int> order(n_bands);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    out.signal_bands.assign(order.begin(), order.begin() + n_signal);
    std::sort(out.signal_bands.begin(), out.signal_bands.end());

    std::vector<int> thresholds(std::max(n_classes - 1, 1));
    std::iota(thresholds.begin(), thresholds.end(), 1);
    std::shuffle(thresholds.begin(), thresholds.end(), rng);

    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<bool> is_signal(n_bands, false);
    for (int b : out.signal_bands) is_signal[b] = true;

    int sig_idx = 0;
    for (int b = 0; b < n_bands; ++b) {
        double* dst = out.cube.values.data() + static_cast<std::size_t>(b) * px;
        if (is_signal[b]) {
            int t = thresholds[sig_idx % thresholds.size()];
            ++sig_idx;
            for (std::size_t i = 0; i < px; ++i)
                dst[i] = out.gt.labels[i] > t ? 1.0 : 0.0;
        } else {
            for (std::size_t i = 0; i < px; ++i) dst[i] = uni(rng);
        }
    }

    // overwrite noise bands above a signal source with exact copies
    int placed = 0;
    for (int b = n_bands - 1; b >= 0 && placed < n_duplicates; --b) {
        if (is_signal[b]) continue;
        std::vector<int> sources;
        for (int s : out.signal_bands)
            if (s < b) sources.push_back(s);
        if (sources.empty()) continue;
        int src = sources[rng() % sources.size()];
        std::copy_n(out.cube.values.data() + static_cast<std::size_t>(src) * px,
                    px, out.cube.values.data() + static_cast<std::size_t>(b) * px);
        out.duplicate_bands.push_back(b);
        ++placed;
    }
    std::sort(out.duplicate_bands.begin(), out.duplicate_bands.end());
    return out;
}

/// The built-in benchmark scene: 32x32 pixels in four 16x16 class blocks,
/// 60 bands of which 8 carry class structure and 52 are label-independent
/// binary noise. Each signal band is a noisy indicator of one of the seven
/// distinct binary groupings of the four classes (one grouping repeats), so
/// the signal bands complement one another rather than repeating the same
/// pattern; the per-pixel noise keeps single bands weak enough that the
/// 52 noise bands visibly hurt an all-band classifier at low training
/// fractions.
inline PlantedCube make_trend_cube(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t w = 32, h = 32, px = w * h;
    const int n_bands = 60, n_signal = 8;

    PlantedCube out;
    out.cube.header.samples = w;
    out.cube.header.lines = h;
    out.cube.header.bands = n_bands;
    out.cube.header.dtype = DataType::F32;
    out.cube.values.assign(px * n_bands, 0.0);

    std::vector<std::uint16_t> labels(px);
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < w; ++c)
            labels[r * w + c] =
                static_cast<std::uint16_t>(1 + (r / 16) * 2 + (c / 16));
    out.gt = make_ground_truth(w, h, std::move(labels));

    for (int b = 0; b < n_signal; ++b) out.signal_bands.push_back(b * 7);

    const std::vector<std::vector<int>> groups{
        {1}, {1, 2}, {1, 3}, {1, 4}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {1, 2}};
    std::normal_distribution<double> noise(0.0, 0.35);
    std::vector<bool> is_signal(n_bands, false);
    for (int b : out.signal_bands) is_signal[b] = true;

    int sig_idx = 0;
    for (int b = 0; b < n_bands; ++b) {
        double* dst = out.cube.values.data() + static_cast<std::size_t>(b) * px;
        if (is_signal[b]) {
            const auto& g = groups[sig_idx++];
            for (std::size_t i = 0; i < px; ++i) {
                bool in = std::find(g.begin(), g.end(),
                                    static_cast<int>(out.gt.labels[i])) !=
                          g.end();
                dst[i] = (in ? 1.0 : 0.0) + noise(rng);
            }
        } else {
            for (std::size_t i = 0; i < px; ++i)
                dst[i] = (rng() & 1) ? 1.0 : 0.0;
        }
    }
    return out;
}

}  // namespace nmibs

#endif  // NMIBS_SYNTHETIC_HPP
