#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vatc/vectorize.hpp"

namespace vatc {

struct SvmParams {
    double c = 1.0;
    double tolerance = 1e-3;
    double epsilon = 1e-12;
    bool standardize = true;
};

/// Per-feature z-scoring fitted on training rows. Constant features get
/// scale 0 and drop out of the model.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    static Standardizer fit(std::span<const SparseVector> rows, std::size_t n_features);
    double scale(std::size_t f) const { return stddev[f] > 0.0 ? 1.0 / stddev[f] : 0.0; }
    std::vector<double> apply_dense(const SparseVector& x) const;
};

/// Linear soft-margin SVM for one class pair. `negative_class` maps to -1,
/// `positive_class` to +1. Weights live in the (optionally standardized)
/// training space: weights = sum_i alpha_i y_i x_i.
struct BinarySVMModel {
    int negative_class = 0;
    int positive_class = 1;
    std::vector<double> alphas;
    double bias = 0.0;
    std::vector<double> weights;
    double c = 1.0;
    double tolerance = 1e-3;
    std::optional<Standardizer> standardizer;
    double b_up = 0.0;   // at termination
    double b_low = 0.0;  // at termination
    std::size_t iterations = 0;

    /// Raw-input weights and bias folding in the standardizer; rebuilt by finalize().
    std::vector<double> raw_weights;
    double raw_bias = 0.0;

    void finalize();
    /// w . x + b for a raw (unstandardized) input.
    double decision(const SparseVector& x) const;
};

/// SMO with Keerthi's two-threshold optimality test, selecting the
/// maximally violating pair (i_up, i_low) each step. Stops once
/// b_low <= b_up + 2 * tolerance. `signs` holds +1 / -1 per row.
BinarySVMModel train_binary_svm_smo(std::span<const SparseVector> rows, std::span<const int> signs,
                                    std::size_t n_features, const SvmParams& params);

/// Two-class matrix overload: the earlier class in `matrix.classes` is -1.
BinarySVMModel train_binary_svm_smo(const DocTermMatrix& matrix, const SvmParams& params);

/// One-vs-one decomposition: one machine per unordered class pair.
struct MulticlassSVMModel {
    std::vector<CategoryId> classes;
    std::size_t n_features = 0;
    std::vector<BinarySVMModel> machines;
};

MulticlassSVMModel train_multiclass_svm(const DocTermMatrix& matrix, const SvmParams& params);
std::vector<std::size_t> svm_votes(const MulticlassSVMModel& model, const SparseVector& x);
/// Majority vote; ties go to the earliest class.
int svm_predict(const MulticlassSVMModel& model, const SparseVector& x);

}  // namespace vatc
