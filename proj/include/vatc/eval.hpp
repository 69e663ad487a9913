#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vatc/classifier.hpp"
#include "vatc/corpus.hpp"
#include "vatc/keyness.hpp"
#include "vatc/vectorize.hpp"

namespace vatc {

/// Stratified assignment of documents to k folds.
struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;  // document -> fold
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_rows(std::size_t fold) const;
    std::vector<std::size_t> train_rows(std::size_t fold) const;
    std::string digest() const;
};

/// Shuffles each class (classes in index order, one seeded stream) and deals
/// its members round-robin, continuing the fold cursor across classes so
/// fold sizes also stay within one of each other.
FoldPlan make_stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

/// counts[gold][pred], row-major.
struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<std::uint64_t> counts;

    explicit ConfusionMatrix(std::size_t n = 0) : n_classes(n), counts(n * n, 0) {}
    std::uint64_t at(std::size_t gold, std::size_t pred) const { return counts[gold * n_classes + pred]; }
    void add(std::size_t gold, std::size_t pred) { ++counts[gold * n_classes + pred]; }
    std::uint64_t total() const;
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
    double accuracy = 0.0;
};

/// Undefined ratios (0/0) count as 0.
ClassMetrics metrics_from_confusion(const ConfusionMatrix& cm);

struct Evaluation {
    ConfusionMatrix confusion;
    ClassMetrics metrics;
};

Evaluation compute_metrics(std::span<const int> golds, std::span<const int> preds, std::size_t n_classes);
Evaluation compute_metrics(std::span<const CategoryId> golds, std::span<const CategoryId> preds,
                           std::span<const CategoryId> classes);

/// Keyness reduction. The `all` threshold means no reduction.
struct FeatureConfig {
    Threshold threshold = Threshold::all();
    ReferenceMode reference_mode = ReferenceMode::complement;
    /// Rank on the full corpus once instead of per training fold (leaks
    /// test-fold statistics into feature selection).
    bool full_corpus = false;

    bool reduces() const { return !threshold.is_all(); }
};

struct ExperimentCell {
    ClassifierConfig classifier;
    WeightingScheme scheme = WeightingScheme::tfidf;
    FeatureConfig features;
};

/// Digests of everything fitted on the training folds.
struct FittedStatistics {
    std::string vocabulary;
    std::string idf;
    std::string keyness;
    std::string standardizer;

    bool operator==(const FittedStatistics&) const = default;
};

struct FoldOutcome {
    std::size_t fold = 0;
    std::vector<std::size_t> test_rows;
    std::vector<int> predictions;
    std::size_t n_features = 0;
    FittedStatistics fitted;
    Evaluation evaluation;
};

/// Fits vocabulary (and keyness features) on the training folds of `fold`,
/// trains, and predicts the held-out documents. `full_corpus_rankings` is
/// used instead of fold-local rankings when the cell asks for full-corpus
/// keyness.
FoldOutcome run_fold(const TokenizedCorpus& corpus, const FoldPlan& plan, std::size_t fold,
                     const ExperimentCell& cell, std::uint64_t seed,
                     const std::vector<KeynessRanking>* full_corpus_rankings = nullptr);

struct CvResult {
    ConfusionMatrix pooled;
    ClassMetrics metrics;  // from the pooled matrix
    std::vector<FoldOutcome> folds;
    double fold_macro_f1_mean = 0.0;
    double fold_macro_f1_std = 0.0;  // sample standard deviation
    double mean_features = 0.0;
};

/// Pools per-fold outcomes (ordered by fold) into one result.
CvResult pool_folds(std::vector<FoldOutcome> folds, std::size_t n_classes);

CvResult cross_validate(const TokenizedCorpus& corpus, const FoldPlan& plan, const ExperimentCell& cell,
                        std::uint64_t seed, unsigned threads = 1);
CvResult cross_validate(const TokenizedCorpus& corpus, const ExperimentCell& cell, std::size_t k,
                        std::uint64_t seed, unsigned threads = 1);

struct ReportRow {
    ExperimentCell cell;
    std::optional<CvResult> result;
    std::string error;  // set when the cell failed

    bool ok() const { return result.has_value(); }
};

struct ReportMetadata {
    std::string command;
    std::uint64_t seed = 0;
    std::string config_digest;
    std::string corpus_digest;
    std::string fold_plan_digest;
    std::size_t k = 0;
    std::size_t n_docs = 0;
    std::vector<CategoryId> classes;
    std::vector<std::size_t> class_counts;
    ReferenceMode reference_mode = ReferenceMode::complement;
    bool leaky = false;
    std::string started_at;
    std::string finished_at;
};

struct Report {
    ReportMetadata metadata;
    std::vector<ReportRow> grid;
    std::vector<ReportRow> sweep;

    bool all_ok() const;
};

struct RunOptions {
    unsigned threads = 1;
    FeatureConfig features;  // applied to every grid cell
};

/// Cross-validates every (classifier, scheme) pair on one shared fold plan.
/// A failing cell records its error; the rest of the grid still runs.
Report run_experiment_grid(const TokenizedCorpus& corpus, std::span<const ClassifierConfig> classifiers,
                           std::span<const WeightingScheme> schemes, std::size_t k, std::uint64_t seed,
                           const RunOptions& options = {});

/// One row per threshold (sorted, `all` last), keyness fold-local unless
/// options.features.full_corpus is set.
Report run_feature_sweep(const TokenizedCorpus& corpus, WeightingScheme scheme, const ClassifierConfig& classifier,
                         std::span<const Threshold> thresholds, std::size_t k, std::uint64_t seed,
                         const RunOptions& options = {});

}  // namespace vatc
