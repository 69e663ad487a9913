#include "vatc/random_forest.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <numeric>
#include <optional>
#include <thread>

#include "vatc/error.hpp"
#include "vatc/rng.hpp"

namespace vatc {

std::size_t default_m_try(std::size_t n_features) {
    if (n_features == 0) return 0;
    return std::min<std::size_t>(n_features, static_cast<std::size_t>(std::bit_width(n_features) - 1) + 1);
}

double gini_impurity(const std::vector<std::uint32_t>& counts) {
    double n = 0.0, sq = 0.0;
    for (auto c : counts) {
        n += c;
        sq += static_cast<double>(c) * c;
    }
    return n > 0.0 ? 1.0 - sq / (n * n) : 0.0;
}

const TreeNode& DecisionTree::leaf_for(const SparseVector& x) const {
    const TreeNode* node = &nodes.front();
    while (!node->is_leaf()) {
        const double v = x.at(static_cast<std::uint32_t>(node->feature));
        node = &nodes[static_cast<std::size_t>(v <= node->threshold ? node->left : node->right)];
    }
    return *node;
}

int DecisionTree::predict(const SparseVector& x) const {
    const auto& counts = leaf_for(x).counts;
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

namespace {

struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;  // size-weighted Gini of the two children
};

class TreeGrower {
public:
    TreeGrower(const DocTermMatrix& matrix, const std::vector<std::vector<SparseEntry>>& columns,
               const ForestParams& params, std::size_t m_try, std::uint64_t seed)
        : matrix_(matrix), columns_(columns), params_(params), m_try_(m_try), rng_(seed),
          n_classes_(matrix.classes.size()), multiplicity_(matrix.n_rows(), 0),
          feature_order_(matrix.n_features()) {
        std::iota(feature_order_.begin(), feature_order_.end(), 0);
    }

    DecisionTree grow() {
        const std::size_t n = matrix_.n_rows();
        std::vector<std::uint32_t> sample;
        sample.reserve(n);
        if (params_.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) sample.push_back(static_cast<std::uint32_t>(rng_.below(n)));
        } else {
            for (std::size_t i = 0; i < n; ++i) sample.push_back(static_cast<std::uint32_t>(i));
        }

        DecisionTree tree;
        struct Pending {
            std::size_t node;
            std::vector<std::uint32_t> rows;
            std::size_t depth;
        };
        std::vector<Pending> stack;
        tree.nodes.emplace_back();
        stack.push_back({0, std::move(sample), 0});
        while (!stack.empty()) {
            Pending item = std::move(stack.back());
            stack.pop_back();
            auto counts = class_counts(item.rows);
            const double parent = gini_impurity(counts);
            std::optional<Split> split;
            const bool depth_ok = params_.max_depth == 0 || item.depth < params_.max_depth;
            if (parent > 0.0 && depth_ok && item.rows.size() >= 2 * params_.min_leaf)
                split = find_split(item.rows, counts, parent);
            if (!split) {
                tree.nodes[item.node].counts = std::move(counts);
                continue;
            }
            std::vector<std::uint32_t> left, right;
            for (auto r : item.rows)
                (value(r, split->feature) <= split->threshold ? left : right).push_back(r);
            const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& node = tree.nodes[item.node];
            node.feature = split->feature;
            node.threshold = split->threshold;
            node.left = left_id;
            node.right = left_id + 1;
            stack.push_back({static_cast<std::size_t>(left_id + 1), std::move(right), item.depth + 1});
            stack.push_back({static_cast<std::size_t>(left_id), std::move(left), item.depth + 1});
        }
        return tree;
    }

private:
    std::vector<std::uint32_t> class_counts(const std::vector<std::uint32_t>& rows) const {
        std::vector<std::uint32_t> counts(n_classes_, 0);
        for (auto r : rows) ++counts[static_cast<std::size_t>(matrix_.labels[r])];
        return counts;
    }

    double value(std::uint32_t row, std::int32_t feature) const {
        return matrix_.rows[row].at(static_cast<std::uint32_t>(feature));
    }

    // Samples m_try features; if none of them improves on the parent, keeps
    // drawing one feature at a time until one does or all are exhausted.
    // With every feature exhausted, the best non-worsening split is taken so
    // impure nodes of distinguishable rows (XOR-like pockets) keep growing.
    std::optional<Split> find_split(const std::vector<std::uint32_t>& rows, const std::vector<std::uint32_t>& counts,
                                    double parent) {
        for (auto r : rows) ++multiplicity_[r];
        std::optional<Split> best, level;
        const std::size_t n_features = feature_order_.size();
        for (std::size_t drawn = 0; drawn < n_features; ++drawn) {
            if (drawn >= m_try_ && best) break;
            const std::size_t j = drawn + static_cast<std::size_t>(rng_.below(n_features - drawn));
            std::swap(feature_order_[drawn], feature_order_[j]);
            const auto f = static_cast<std::int32_t>(feature_order_[drawn]);
            auto s = best_threshold(f, rows, counts);
            if (!s) continue;
            if (s->impurity < parent - 1e-12) {
                if (!best || s->impurity < best->impurity) best = s;
            } else if (s->impurity <= parent + 1e-12 && (!level || s->impurity < level->impurity)) {
                level = s;
            }
        }
        for (auto r : rows) multiplicity_[r] = 0;
        return best ? best : level;
    }

    std::optional<Split> best_threshold(std::int32_t feature, const std::vector<std::uint32_t>& rows,
                                        const std::vector<std::uint32_t>& counts) {
        struct Point {
            double value;
            int cls;
            std::uint32_t weight;
        };
        std::vector<Point> points;
        const auto& column = columns_[static_cast<std::size_t>(feature)];
        if (column.size() <= 4 * rows.size()) {
            for (const auto& e : column)
                if (auto m = multiplicity_[e.index]) points.push_back({e.value, matrix_.labels[e.index], m});
        } else {
            for (auto r : rows)
                if (double v = value(r, feature); v != 0.0) points.push_back({v, matrix_.labels[r], 1});
        }
        // Rows absent from the column hold 0.0.
        std::vector<std::uint32_t> zero_counts(counts);
        for (const auto& p : points) zero_counts[static_cast<std::size_t>(p.cls)] -= p.weight;
        std::uint32_t zero_total = 0;
        for (auto c : zero_counts) zero_total += c;
        if (zero_total > 0)
            for (std::size_t c = 0; c < n_classes_; ++c)
                if (zero_counts[c]) points.push_back({0.0, static_cast<int>(c), zero_counts[c]});
        if (points.empty()) return std::nullopt;
        std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
            return a.value < b.value || (a.value == b.value && a.cls < b.cls);
        });

        std::uint32_t total = 0;
        for (auto c : counts) total += c;
        std::vector<std::uint32_t> left(n_classes_, 0), right(counts);
        std::uint32_t n_left = 0;
        std::optional<Split> best;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            const auto c = static_cast<std::size_t>(points[i].cls);
            left[c] += points[i].weight;
            right[c] -= points[i].weight;
            n_left += points[i].weight;
            if (points[i + 1].value == points[i].value) continue;
            const std::uint32_t n_right = total - n_left;
            if (n_left < params_.min_leaf || n_right < params_.min_leaf) continue;
            const double impurity = (n_left * gini_impurity(left) + n_right * gini_impurity(right)) / total;
            if (!best || impurity < best->impurity) {
                const double lo = points[i].value, hi = points[i + 1].value;
                double threshold = lo + (hi - lo) / 2.0;
                if (!(threshold < hi)) threshold = lo;
                best = Split{feature, threshold, impurity};
            }
        }
        return best;
    }

    const DocTermMatrix& matrix_;
    const std::vector<std::vector<SparseEntry>>& columns_;
    const ForestParams& params_;
    std::size_t m_try_;
    CounterRng rng_;
    std::size_t n_classes_;
    std::vector<std::uint32_t> multiplicity_;
    std::vector<std::size_t> feature_order_;
};

}  // namespace

RFModel train_random_forest(const DocTermMatrix& matrix, const ForestParams& params, std::uint64_t seed) {
    if (params.n_trees == 0) throw Error("random forest needs n_trees >= 1");
    if (params.min_leaf == 0) throw Error("random forest needs min_leaf >= 1");
    if (matrix.n_rows() == 0) throw Error("random forest needs training rows");
    std::vector<std::size_t> class_rows(matrix.classes.size(), 0);
    for (int l : matrix.labels) ++class_rows.at(static_cast<std::size_t>(l));
    if (std::count_if(class_rows.begin(), class_rows.end(), [](auto c) { return c > 0; }) < 2)
        throw Error("random forest needs training rows from at least 2 classes");

    RFModel model;
    model.classes = matrix.classes;
    model.n_features = matrix.n_features();
    model.n_trees = params.n_trees;
    model.m_try = params.m_try == 0 ? default_m_try(model.n_features) : std::min(params.m_try, model.n_features);
    model.seed = seed;
    model.trees.resize(params.n_trees);

    // Column-major copy: (row, value) per feature, rows ascending.
    std::vector<std::vector<SparseEntry>> columns(model.n_features);
    for (std::size_t r = 0; r < matrix.n_rows(); ++r)
        for (const auto& e : matrix.rows[r].entries) columns[e.index].push_back({static_cast<std::uint32_t>(r), e.value});

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < params.n_trees;) {
            try {
                TreeGrower grower(matrix, columns, params, model.m_try, derive_seed(seed, "tree", t));
                model.trees[t] = grower.grow();
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(params.threads, static_cast<unsigned>(params.n_trees)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return model;
}

std::vector<std::size_t> rf_votes(const RFModel& model, const SparseVector& x) {
    std::vector<std::size_t> votes(model.classes.size(), 0);
    for (const auto& tree : model.trees) ++votes[static_cast<std::size_t>(tree.predict(x))];
    return votes;
}

int rf_predict(const RFModel& model, const SparseVector& x) {
    const auto votes = rf_votes(model, x);
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace vatc
