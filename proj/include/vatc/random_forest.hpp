#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vatc/vectorize.hpp"

namespace vatc {

struct ForestParams {
    std::size_t n_trees = 10;
    /// Features sampled per split; 0 selects floor(log2(V)) + 1.
    std::size_t m_try = 0;
    /// 0 means unlimited.
    std::size_t max_depth = 0;
    std::size_t min_leaf = 1;
    /// Diagnostic switch: grow every tree on the full training set.
    bool bootstrap = true;
    unsigned threads = 1;
};

/// Internal nodes send x[feature] <= threshold to `left`. Leaves hold the
/// class-count distribution of their training rows.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::uint32_t> counts;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    const TreeNode& leaf_for(const SparseVector& x) const;
    /// Majority class of the leaf; ties go to the earliest class.
    int predict(const SparseVector& x) const;
};

struct RFModel {
    std::vector<CategoryId> classes;
    std::size_t n_features = 0;
    std::size_t n_trees = 0;
    std::size_t m_try = 0;
    std::uint64_t seed = 0;
    std::vector<DecisionTree> trees;
};

std::size_t default_m_try(std::size_t n_features);

/// Gini impurity 1 - sum p_c^2 of a count distribution.
double gini_impurity(const std::vector<std::uint32_t>& counts);

/// Tree t is grown from derive_seed(seed, "tree", t), so the forest does not
/// depend on how trees are scheduled across threads.
RFModel train_random_forest(const DocTermMatrix& matrix, const ForestParams& params, std::uint64_t seed);

std::vector<std::size_t> rf_votes(const RFModel& model, const SparseVector& x);
int rf_predict(const RFModel& model, const SparseVector& x);

}  // namespace vatc
