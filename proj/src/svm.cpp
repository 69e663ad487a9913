#include "vatc/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vatc/error.hpp"

namespace vatc {

Standardizer Standardizer::fit(std::span<const SparseVector> rows, std::size_t n_features) {
    Standardizer s;
    s.mean.assign(n_features, 0.0);
    s.stddev.assign(n_features, 0.0);
    const double n = static_cast<double>(rows.size());
    if (rows.empty()) return s;
    for (const auto& row : rows)
        for (const auto& e : row.entries) s.mean[e.index] += e.value;
    for (auto& m : s.mean) m /= n;
    std::vector<double> ss(n_features);
    for (std::size_t f = 0; f < n_features; ++f) ss[f] = n * s.mean[f] * s.mean[f];
    for (const auto& row : rows)
        for (const auto& e : row.entries) {
            const double mu = s.mean[e.index];
            ss[e.index] += (e.value - mu) * (e.value - mu) - mu * mu;
        }
    if (rows.size() > 1)
        for (std::size_t f = 0; f < n_features; ++f) s.stddev[f] = std::sqrt(std::max(0.0, ss[f]) / (n - 1.0));
    return s;
}

std::vector<double> Standardizer::apply_dense(const SparseVector& x) const {
    std::vector<double> out(mean.size());
    for (std::size_t f = 0; f < mean.size(); ++f) out[f] = -mean[f] * scale(f);
    for (const auto& e : x.entries)
        if (e.index < mean.size()) out[e.index] = (e.value - mean[e.index]) * scale(e.index);
    return out;
}

void BinarySVMModel::finalize() {
    raw_weights = weights;
    raw_bias = bias;
    if (standardizer) {
        for (std::size_t f = 0; f < weights.size(); ++f) {
            raw_weights[f] = weights[f] * standardizer->scale(f);
            raw_bias -= raw_weights[f] * standardizer->mean[f];
        }
    }
}

double BinarySVMModel::decision(const SparseVector& x) const {
    double s = raw_bias;
    for (const auto& e : x.entries)
        if (e.index < raw_weights.size()) s += raw_weights[e.index] * e.value;
    return s;
}

namespace {

// Linear kernel over standardized points without densifying them:
// with u_i = x_i * scale and m = mean * scale,
//   K(i, j) = (u_i - m) . (u_j - m) = u_i . u_j - p_i - p_j + m . m.
class LinearKernel {
public:
    LinearKernel(std::span<const SparseVector> rows, std::size_t n_features, const Standardizer* standardizer)
        : n_(rows.size()), scratch_(n_features, 0.0) {
        points_.reserve(n_);
        std::vector<double> offset(n_features, 0.0);
        for (const auto& row : rows) {
            SparseVector u;
            for (const auto& e : row.entries) {
                const double s = standardizer ? standardizer->scale(e.index) : 1.0;
                if (s != 0.0) u.entries.push_back({e.index, e.value * s});
            }
            points_.push_back(std::move(u));
        }
        if (standardizer)
            for (std::size_t f = 0; f < n_features; ++f) offset[f] = standardizer->mean[f] * standardizer->scale(f);
        projections_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) projections_[i] = points_[i].dot(offset);
        offset_norm_ = std::inner_product(offset.begin(), offset.end(), offset.begin(), 0.0);
        offset_ = std::move(offset);

        if (n_ <= kFullGramLimit) {
            gram_.resize(n_ * n_);
            std::vector<double> row(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                compute_row(i, row, i);
                for (std::size_t j = i; j < n_; ++j) gram_[i * n_ + j] = gram_[j * n_ + i] = row[j];
            }
        }
    }

    std::size_t size() const { return n_; }
    const SparseVector& point(std::size_t i) const { return points_[i]; }
    const std::vector<double>& offset() const { return offset_; }

    /// Fills `out` with K(i, j) for j >= from.
    void row(std::size_t i, std::vector<double>& out) {
        if (!gram_.empty()) {
            std::copy_n(gram_.begin() + static_cast<std::ptrdiff_t>(i * n_), n_, out.begin());
        } else {
            compute_row(i, out, 0);
        }
    }

    double diag(std::size_t i) {
        if (!gram_.empty()) return gram_[i * n_ + i];
        const auto& u = points_[i];
        double d = 0.0;
        for (const auto& e : u.entries) d += e.value * e.value;
        return d - 2.0 * projections_[i] + offset_norm_;
    }

private:
    static constexpr std::size_t kFullGramLimit = 4096;

    void compute_row(std::size_t i, std::vector<double>& out, std::size_t from) {
        for (const auto& e : points_[i].entries) scratch_[e.index] = e.value;
        for (std::size_t j = from; j < n_; ++j)
            out[j] = points_[j].dot(scratch_) - projections_[i] - projections_[j] + offset_norm_;
        for (const auto& e : points_[i].entries) scratch_[e.index] = 0.0;
    }

    std::size_t n_;
    std::vector<SparseVector> points_;
    std::vector<double> projections_;
    std::vector<double> offset_;
    double offset_norm_ = 0.0;
    std::vector<double> scratch_;
    std::vector<double> gram_;
};

class SmoSolver {
public:
    SmoSolver(LinearKernel& kernel, std::span<const int> signs, const SvmParams& params)
        : kernel_(kernel), y_(signs.begin(), signs.end()), c_(params.c), tol_(params.tolerance),
          eps_(params.epsilon), n_(kernel.size()), alpha_(n_, 0.0), f_(n_), k1_(n_), k2_(n_) {
        for (std::size_t i = 0; i < n_; ++i) f_[i] = -static_cast<double>(y_[i]);
    }

    void solve() {
        const std::size_t cap = 200 * n_;
        std::size_t stale = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (;;) {
            find_thresholds();
            if (i_up_ < 0 || i_low_ < 0) break;
            const double gap = b_low_ - b_up_;
            if (gap <= 2.0 * tol_) break;
            if (gap < best_gap) {
                best_gap = gap;
                stale = 0;
            } else if (++stale >= cap) {
                throw Error("SMO iteration cap reached: " + std::to_string(cap) +
                            " steps (200 * n) without reducing the KKT gap");
            }
            ++iterations_;
            if (take_step(static_cast<std::size_t>(i_low_), static_cast<std::size_t>(i_up_))) continue;
            if (!fallback_step()) throw Error("SMO stalled: no violating pair admits a step");
        }
    }

    const std::vector<double>& alphas() const { return alpha_; }
    double b_up() const { return b_up_; }
    double b_low() const { return b_low_; }
    std::size_t iterations() const { return iterations_; }

private:
    bool in_up(std::size_t i) const {
        return (y_[i] > 0 && alpha_[i] < c_) || (y_[i] < 0 && alpha_[i] > 0.0);
    }
    bool in_low(std::size_t i) const {
        return (y_[i] < 0 && alpha_[i] < c_) || (y_[i] > 0 && alpha_[i] > 0.0);
    }

    void find_thresholds() {
        i_up_ = i_low_ = -1;
        b_up_ = std::numeric_limits<double>::infinity();
        b_low_ = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n_; ++i) {
            if (in_up(i) && f_[i] < b_up_) {
                b_up_ = f_[i];
                i_up_ = static_cast<std::ptrdiff_t>(i);
            }
            if (in_low(i) && f_[i] > b_low_) {
                b_low_ = f_[i];
                i_low_ = static_cast<std::ptrdiff_t>(i);
            }
        }
    }

    // Tries violators other than the maximal pair, strongest first.
    bool fallback_step() {
        const auto up = static_cast<std::size_t>(i_up_);
        const auto low = static_cast<std::size_t>(i_low_);
        std::vector<std::size_t> order(n_);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f_[a] > f_[b]; });
        for (std::size_t j : order)
            if (j != low && in_low(j) && f_[j] > b_up_ + 2.0 * tol_ && take_step(j, up)) return true;
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            if (*it != up && in_up(*it) && f_[*it] < b_low_ - 2.0 * tol_ && take_step(low, *it)) return true;
        return false;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1_old = alpha_[i1], a2_old = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double f1 = f_[i1], f2 = f_[i2];
        const double s = y1 * y2;
        double lo, hi;
        if (s < 0) {
            lo = std::max(0.0, a2_old - a1_old);
            hi = std::min(c_, c_ + a2_old - a1_old);
        } else {
            lo = std::max(0.0, a1_old + a2_old - c_);
            hi = std::min(c_, a1_old + a2_old);
        }
        if (lo >= hi) return false;

        kernel_.row(i1, k1_);
        kernel_.row(i2, k2_);
        const double k11 = k1_[i1], k22 = k2_[i2], k12 = k1_[i2];
        const double eta = k11 + k22 - 2.0 * k12;
        double a2;
        if (eta > 0.0) {
            a2 = std::clamp(a2_old + y2 * (f1 - f2) / eta, lo, hi);
        } else {
            // Degenerate curvature: move to whichever end has the lower objective.
            const double g1 = y1 * f1 - a1_old * k11 - s * a2_old * k12;
            const double g2 = y2 * f2 - s * a1_old * k12 - a2_old * k22;
            auto objective = [&](double a2_end) {
                const double a1_end = a1_old + s * (a2_old - a2_end);
                return a1_end * g1 + a2_end * g2 + 0.5 * a1_end * a1_end * k11 + 0.5 * a2_end * a2_end * k22 +
                       s * a2_end * a1_end * k12;
            };
            const double obj_lo = objective(lo), obj_hi = objective(hi);
            if (obj_lo < obj_hi - eps_) a2 = lo;
            else if (obj_lo > obj_hi + eps_) a2 = hi;
            else a2 = a2_old;
        }
        const double snap = c_ * 1e-12;
        if (a2 < snap) a2 = 0.0;
        else if (a2 > c_ - snap) a2 = c_;
        if (std::abs(a2 - a2_old) < eps_ * (a2 + a2_old + eps_)) return false;

        double a1 = a1_old + s * (a2_old - a2);
        // Keep sum(alpha * y) fixed while pinning a1 to its bound.
        if (a1 < snap) {
            a2 += s * a1;
            a1 = 0.0;
        } else if (a1 > c_ - snap) {
            a2 += s * (a1 - c_);
            a1 = c_;
        }
        a2 = std::clamp(a2, 0.0, c_);

        const double d1 = y1 * (a1 - a1_old);
        const double d2 = y2 * (a2 - a2_old);
        for (std::size_t j = 0; j < n_; ++j) f_[j] += d1 * k1_[j] + d2 * k2_[j];
        alpha_[i1] = a1;
        alpha_[i2] = a2;
        return true;
    }

    LinearKernel& kernel_;
    std::vector<int> y_;
    double c_, tol_, eps_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> f_;  // F_i = sum_j alpha_j y_j K_ij - y_i
    std::vector<double> k1_, k2_;
    double b_up_ = 0.0, b_low_ = 0.0;
    std::ptrdiff_t i_up_ = -1, i_low_ = -1;
    std::size_t iterations_ = 0;
};

}  // namespace

BinarySVMModel train_binary_svm_smo(std::span<const SparseVector> rows, std::span<const int> signs,
                                    std::size_t n_features, const SvmParams& params) {
    if (rows.size() != signs.size()) throw Error("SVM: rows and labels differ in length");
    if (!(params.c > 0.0)) throw Error("SVM: C must be positive");
    if (!(params.tolerance > 0.0)) throw Error("SVM: tolerance must be positive");
    bool has_pos = false, has_neg = false;
    for (int y : signs) {
        if (y == 1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw Error("SVM: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw Error("SVM: both classes must be present");
    for (const auto& row : rows)
        for (const auto& e : row.entries) {
            if (!std::isfinite(e.value)) throw Error("SVM: non-finite feature value");
            if (e.index >= n_features) throw Error("SVM: feature index out of range");
        }

    BinarySVMModel model;
    model.c = params.c;
    model.tolerance = params.tolerance;
    if (params.standardize) model.standardizer = Standardizer::fit(rows, n_features);

    LinearKernel kernel(rows, n_features, model.standardizer ? &*model.standardizer : nullptr);
    SmoSolver solver(kernel, signs, params);
    solver.solve();

    model.alphas = solver.alphas();
    model.b_up = solver.b_up();
    model.b_low = solver.b_low();
    model.iterations = solver.iterations();
    model.bias = -(model.b_up + model.b_low) / 2.0;

    model.weights.assign(n_features, 0.0);
    double alpha_y_sum = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double ay = model.alphas[i] * signs[i];
        if (ay == 0.0) continue;
        alpha_y_sum += ay;
        for (const auto& e : kernel.point(i).entries) model.weights[e.index] += ay * e.value;
    }
    const auto& offset = kernel.offset();
    for (std::size_t f = 0; f < n_features; ++f) model.weights[f] -= alpha_y_sum * offset[f];
    model.finalize();
    return model;
}

BinarySVMModel train_binary_svm_smo(const DocTermMatrix& matrix, const SvmParams& params) {
    std::vector<std::size_t> counts(matrix.classes.size(), 0);
    for (int l : matrix.labels) ++counts.at(static_cast<std::size_t>(l));
    std::vector<int> present;
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] > 0) present.push_back(static_cast<int>(c));
    if (present.size() != 2) throw Error("binary SVM needs rows from exactly two classes");
    std::vector<int> signs;
    for (int l : matrix.labels) signs.push_back(l == present[0] ? -1 : 1);
    auto model = train_binary_svm_smo(matrix.rows, signs, matrix.n_features(), params);
    model.negative_class = present[0];
    model.positive_class = present[1];
    return model;
}

MulticlassSVMModel train_multiclass_svm(const DocTermMatrix& matrix, const SvmParams& params) {
    const std::size_t n_classes = matrix.classes.size();
    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t r = 0; r < matrix.n_rows(); ++r) by_class.at(static_cast<std::size_t>(matrix.labels[r])).push_back(r);
    std::vector<int> present;
    for (std::size_t c = 0; c < n_classes; ++c)
        if (!by_class[c].empty()) present.push_back(static_cast<int>(c));
    if (present.size() < 2) throw Error("SVM needs training rows from at least 2 classes");

    MulticlassSVMModel model;
    model.classes = matrix.classes;
    model.n_features = matrix.n_features();
    for (std::size_t a = 0; a < present.size(); ++a) {
        for (std::size_t b = a + 1; b < present.size(); ++b) {
            std::vector<SparseVector> rows;
            std::vector<int> signs;
            for (int cls : {present[a], present[b]}) {
                for (std::size_t r : by_class[static_cast<std::size_t>(cls)]) {
                    rows.push_back(matrix.rows[r]);
                    signs.push_back(cls == present[a] ? -1 : 1);
                }
            }
            auto machine = train_binary_svm_smo(rows, signs, model.n_features, params);
            machine.negative_class = present[a];
            machine.positive_class = present[b];
            model.machines.push_back(std::move(machine));
        }
    }
    return model;
}

std::vector<std::size_t> svm_votes(const MulticlassSVMModel& model, const SparseVector& x) {
    std::vector<std::size_t> votes(model.classes.size(), 0);
    for (const auto& m : model.machines) {
        const int winner = m.decision(x) > 0.0 ? m.positive_class : m.negative_class;
        ++votes[static_cast<std::size_t>(winner)];
    }
    return votes;
}

int svm_predict(const MulticlassSVMModel& model, const SparseVector& x) {
    const auto votes = svm_votes(model, x);
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace vatc
