#ifndef NMIBS_SVM_HPP
#define NMIBS_SVM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmibs {

struct KernelParams {
    double gamma = 1.0;
    double c = 100.0;
    double tolerance = 1e-3;
    int max_passes = 5;
};

inline double rbf_kernel(std::span<const double> x, std::span<const double> y,
                         double gamma) {
    if (x.size() != y.size())
        throw std::invalid_argument("rbf_kernel: dimension mismatch");
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

struct BinaryModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> alphas;  // > 0
    std::vector<int> signs;      // +1 / -1
    double bias = 0.0;

    double decision(std::span<const double> x, double gamma) const {
        double f = bias;
        for (std::size_t i = 0; i < support_vectors.size(); ++i)
            f += alphas[i] * signs[i] * rbf_kernel(support_vectors[i], x, gamma);
        return f;
    }
};

namespace detail {

// Platt-style SMO over a precomputed Gram matrix.
class SmoSolver {
  public:
    SmoSolver(const std::vector<std::vector<double>>& x,
              std::span<const int> y, const KernelParams& p, std::uint64_t seed)
        : x_(x), y_(y.begin(), y.end()), p_(p), rng_(seed) {
        n_ = x.size();
        alpha_.assign(n_, 0.0);
        err_.assign(n_, 0.0);
        gram_.assign(n_ * n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j)
                gram_[i * n_ + j] = gram_[j * n_ + i] =
                    rbf_kernel(x[i], x[j], p.gamma);
        for (std::size_t i = 0; i < n_; ++i) err_[i] = -y_[i];
        b_ = 0.0;
    }

    void solve() {
        int quiet_sweeps = 0;
        bool examine_all = true;
        // hard cap against pathological non-progress cycling
        const int sweep_cap = 10000;
        for (int sweep = 0; sweep < sweep_cap; ++sweep) {
            int changed = 0;
            std::vector<std::size_t> order(n_);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::shuffle(order.begin(), order.end(), rng_);
            for (std::size_t i : order) {
                if (examine_all ||
                    (alpha_[i] > 0 && alpha_[i] < p_.c))
                    changed += examine(i);
            }
            if (examine_all) {
                if (changed == 0) {
                    if (++quiet_sweeps >= p_.max_passes) break;
                } else {
                    quiet_sweeps = 0;
                }
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }

    BinaryModel model() const {
        BinaryModel m;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] > 0) {
                m.support_vectors.push_back(x_[i]);
                m.alphas.push_back(alpha_[i]);
                m.signs.push_back(y_[i]);
            }
        }
        m.bias = b_;
        return m;
    }

    double dual_objective() const {
        double obj = 0.0;
        for (std::size_t i = 0; i < n_; ++i) obj += alpha_[i];
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] == 0) continue;
            for (std::size_t j = 0; j < n_; ++j)
                obj -= 0.5 * alpha_[i] * alpha_[j] * y_[i] * y_[j] *
                       gram_[i * n_ + j];
        }
        return obj;
    }

  private:
    int examine(std::size_t i2) {
        const double y2 = y_[i2], a2 = alpha_[i2], e2 = err_[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -p_.tolerance && a2 < p_.c) ||
              (r2 > p_.tolerance && a2 > 0)))
            return 0;
        // heuristic 1: max |E1 - E2| among non-bound points
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] > 0 && alpha_[i] < p_.c) {
                double gap = std::fabs(err_[i] - e2);
                if (gap > best_gap) {
                    best_gap = gap;
                    best = i;
                }
            }
        }
        if (best < n_ && take_step(best, i2)) return 1;
        // heuristic 2: non-bound points from a random start
        std::size_t start = rng_() % n_;
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t i = (start + k) % n_;
            if (alpha_[i] > 0 && alpha_[i] < p_.c && take_step(i, i2)) return 1;
        }
        // heuristic 3: all points
        start = rng_() % n_;
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t i = (start + k) % n_;
            if (take_step(i, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1 = alpha_[i1], a2 = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = err_[i1], e2 = err_[i2];
        const double s = y1 * y2;
        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(p_.c, p_.c + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - p_.c);
            hi = std::min(p_.c, a1 + a2);
        }
        if (lo >= hi) return false;
        const double k11 = gram_[i1 * n_ + i1];
        const double k12 = gram_[i1 * n_ + i2];
        const double k22 = gram_[i2 * n_ + i2];
        const double eta = k11 + k22 - 2 * k12;
        double a2_new;
        if (eta > 0) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // flat or concave direction: evaluate the (minimization-form)
            // objective at both segment ends
            double v1 = (e1 + y1 - b_) - y1 * a1 * k11 - y2 * a2 * k12;
            double v2 = (e2 + y2 - b_) - y1 * a1 * k12 - y2 * a2 * k22;
            double f1 = y1 * v1 - 1.0;
            double f2 = y2 * v2 - 1.0;
            double l1 = a1 + s * (a2 - lo);
            double h1 = a1 + s * (a2 - hi);
            double obj_lo = 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                            s * lo * l1 * k12 + l1 * f1 + lo * f2;
            double obj_hi = 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                            s * hi * h1 * k12 + h1 * f1 + hi * f2;
            if (obj_lo < obj_hi - 1e-12)
                a2_new = lo;
            else if (obj_lo > obj_hi + 1e-12)
                a2_new = hi;
            else
                return false;
        }
        if (std::fabs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12))
            return false;
        const double a1_new = a1 + s * (a2 - a2_new);

        const double b1 = b_ - e1 - y1 * (a1_new - a1) * k11 -
                          y2 * (a2_new - a2) * k12;
        const double b2 = b_ - e2 - y1 * (a1_new - a1) * k12 -
                          y2 * (a2_new - a2) * k22;
        double b_new;
        if (a1_new > 0 && a1_new < p_.c)
            b_new = b1;
        else if (a2_new > 0 && a2_new < p_.c)
            b_new = b2;
        else
            b_new = (b1 + b2) / 2;

        for (std::size_t i = 0; i < n_; ++i)
            err_[i] += y1 * (a1_new - a1) * gram_[i1 * n_ + i] +
                       y2 * (a2_new - a2) * gram_[i2 * n_ + i] + (b_new - b_);
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        b_ = b_new;
        return true;
    }

    const std::vector<std::vector<double>>& x_;
    std::vector<int> y_;
    KernelParams p_;
    std::mt19937_64 rng_;
    std::size_t n_ = 0;
    std::vector<double> alpha_;
    std::vector<double> err_;  // E_i = f(x_i) - y_i
    std::vector<double> gram_;
    double b_ = 0.0;
};

}  // namespace detail

/// Soft-margin binary SVM via SMO. labels are +1/-1; deterministic in seed.
inline BinaryModel train_binary(const std::vector<std::vector<double>>& features,
                                std::span<const int> labels,
                                const KernelParams& params,
                                std::uint64_t seed) {
    if (features.size() != labels.size() || features.empty())
        throw std::invalid_argument("train_binary: bad input sizes");
    bool pos = false, neg = false;
    for (int y : labels) {
        if (y == 1) pos = true;
        else if (y == -1) neg = true;
        else throw std::invalid_argument("labels must be +1/-1");
    }
    if (!pos || !neg)
        throw std::invalid_argument("training set needs both label signs");
    for (const auto& row : features)
        for (double v : row)
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite feature value");
    detail::SmoSolver solver(features, labels, params, seed);
    solver.solve();
    return solver.model();
}

struct MulticlassModel {
    std::vector<int> class_labels;
    // one model per unordered pair, indexed (i,j) i<j in class_labels order;
    // positive decision votes for class i.
    std::vector<BinaryModel> pairwise;
    KernelParams params;
    std::vector<std::pair<double, double>> feature_scaling;  // (min, max)

    std::size_t pair_index(std::size_t i, std::size_t j) const {
        // i < j; row-major upper triangle
        std::size_t c = class_labels.size();
        return i * c - i * (i + 1) / 2 + (j - i - 1);
    }

    std::vector<double> scale(std::span<const double> row) const {
        std::vector<double> out(row.size());
        for (std::size_t f = 0; f < row.size(); ++f) {
            auto [lo, hi] = feature_scaling[f];
            out[f] = hi > lo ? (row[f] - lo) / (hi - lo) : 0.0;
        }
        return out;
    }
};

/// One-vs-one multiclass training with per-feature min-max scaling fitted on
/// the training set.
inline MulticlassModel train_multiclass(
    const std::vector<std::vector<double>>& features,
    std::span<const int> labels, const KernelParams& params,
    std::uint64_t seed) {
    if (features.size() != labels.size() || features.empty())
        throw std::invalid_argument("train_multiclass: bad input sizes");
    MulticlassModel model;
    model.params = params;
    for (int l : labels)
        if (std::find(model.class_labels.begin(), model.class_labels.end(),
                      l) == model.class_labels.end())
            model.class_labels.push_back(l);
    std::sort(model.class_labels.begin(), model.class_labels.end());
    if (model.class_labels.size() < 2)
        throw std::invalid_argument("need at least 2 classes");

    const std::size_t nfeat = features[0].size();
    model.feature_scaling.assign(nfeat, {0.0, 0.0});
    for (std::size_t f = 0; f < nfeat; ++f) {
        double lo = features[0][f], hi = features[0][f];
        for (const auto& row : features) {
            lo = std::min(lo, row[f]);
            hi = std::max(hi, row[f]);
        }
        model.feature_scaling[f] = {lo, hi};
    }
    std::vector<std::vector<double>> scaled(features.size());
    for (std::size_t i = 0; i < features.size(); ++i)
        scaled[i] = model.scale(features[i]);

    const std::size_t c = model.class_labels.size();
    for (std::size_t i = 0; i < c; ++i) {
        for (std::size_t j = i + 1; j < c; ++j) {
            std::vector<std::vector<double>> x;
            std::vector<int> y;
            for (std::size_t p = 0; p < scaled.size(); ++p) {
                if (labels[p] == model.class_labels[i]) {
                    x.push_back(scaled[p]);
                    y.push_back(+1);
                } else if (labels[p] == model.class_labels[j]) {
                    x.push_back(scaled[p]);
                    y.push_back(-1);
                }
            }
            // per-pair seed keeps each training independent of pair order
            std::uint64_t pair_seed = seed * 1000003u + i * 131u + j;
            model.pairwise.push_back(train_binary(x, y, params, pair_seed));
        }
    }
    return model;
}

/// One-vs-one voting; ties go to the tied class with the largest summed
/// pairwise decision margin, then to the lower class id.
inline std::vector<int> predict(const MulticlassModel& model,
                                const std::vector<std::vector<double>>& rows) {
    const std::size_t c = model.class_labels.size();
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& raw : rows) {
        if (raw.size() != model.feature_scaling.size())
            throw std::invalid_argument("predict: feature width mismatch");
        std::vector<double> x = model.scale(raw);
        std::vector<int> votes(c, 0);
        std::vector<double> margin(c, 0.0);
        for (std::size_t i = 0; i < c; ++i) {
            for (std::size_t j = i + 1; j < c; ++j) {
                double d = model.pairwise[model.pair_index(i, j)].decision(
                    x, model.params.gamma);
                if (d >= 0) ++votes[i];
                else ++votes[j];
                margin[i] += d;
                margin[j] -= d;
            }
        }
        std::size_t winner = 0;
        for (std::size_t i = 1; i < c; ++i) {
            if (votes[i] > votes[winner] ||
                (votes[i] == votes[winner] && margin[i] > margin[winner]))
                winner = i;
        }
        out.push_back(model.class_labels[winner]);
    }
    return out;
}

}  // namespace nmibs

#endif  // NMIBS_SVM_HPP
