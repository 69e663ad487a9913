#include "vatc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vatc/digest.hpp"
#include "vatc/error.hpp"
#include "vatc/parallel.hpp"
#include "vatc/rng.hpp"

namespace vatc {

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == fold) rows.push_back(i);
    return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] != fold) rows.push_back(i);
    return rows;
}

std::string FoldPlan::digest() const {
    Digest d;
    d.update(static_cast<std::uint64_t>(k));
    for (auto f : assignment) d.update(static_cast<std::uint64_t>(f));
    return d.hex();
}

FoldPlan make_stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error("cross-validation needs k >= 2");
    if (k > labels.size())
        throw Error("k = " + std::to_string(k) + " exceeds the number of documents (" +
                    std::to_string(labels.size()) + ")");
    int max_label = -1;
    for (int l : labels) {
        if (l < 0) throw Error("negative class label in fold planning");
        max_label = std::max(max_label, l);
    }
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_label + 1));
    for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(labels.size(), 0);
    CounterRng rng(seed);
    std::size_t cursor = 0;
    for (auto& group : members) {
        rng.shuffle(std::span(group));
        for (std::size_t doc : group) {
            plan.assignment[doc] = cursor;
            cursor = (cursor + 1) % k;
        }
    }
    return plan;
}

std::uint64_t ConfusionMatrix::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.n_classes != n_classes) throw Error("confusion matrices differ in class count");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    return *this;
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

ClassMetrics metrics_from_confusion(const ConfusionMatrix& cm) {
    const std::size_t n = cm.n_classes;
    ClassMetrics m;
    m.precision.resize(n);
    m.recall.resize(n);
    m.f1.resize(n);
    double tp_all = 0.0, fp_all = 0.0, fn_all = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        double tp = static_cast<double>(cm.at(c, c)), fp = 0.0, fn = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            if (o == c) continue;
            fp += static_cast<double>(cm.at(o, c));
            fn += static_cast<double>(cm.at(c, o));
        }
        m.precision[c] = ratio(tp, tp + fp);
        m.recall[c] = ratio(tp, tp + fn);
        m.f1[c] = harmonic(m.precision[c], m.recall[c]);
        tp_all += tp;
        fp_all += fp;
        fn_all += fn;
    }
    m.macro_f1 = n > 0 ? std::accumulate(m.f1.begin(), m.f1.end(), 0.0) / static_cast<double>(n) : 0.0;
    m.micro_f1 = harmonic(ratio(tp_all, tp_all + fp_all), ratio(tp_all, tp_all + fn_all));
    m.accuracy = ratio(tp_all, static_cast<double>(cm.total()));
    return m;
}

Evaluation compute_metrics(std::span<const int> golds, std::span<const int> preds, std::size_t n_classes) {
    if (golds.size() != preds.size())
        throw Error("compute_metrics: " + std::to_string(golds.size()) + " gold labels but " +
                    std::to_string(preds.size()) + " predictions");
    if (golds.empty()) throw Error("compute_metrics: no labels");
    ConfusionMatrix cm(n_classes);
    for (std::size_t i = 0; i < golds.size(); ++i) {
        if (golds[i] < 0 || preds[i] < 0 || static_cast<std::size_t>(golds[i]) >= n_classes ||
            static_cast<std::size_t>(preds[i]) >= n_classes)
            throw Error("compute_metrics: label outside the class list");
        cm.add(static_cast<std::size_t>(golds[i]), static_cast<std::size_t>(preds[i]));
    }
    return {cm, metrics_from_confusion(cm)};
}

Evaluation compute_metrics(std::span<const CategoryId> golds, std::span<const CategoryId> preds,
                           std::span<const CategoryId> classes) {
    auto index = [&](const CategoryId& c) {
        auto it = std::find(classes.begin(), classes.end(), c);
        if (it == classes.end()) throw Error("compute_metrics: unknown class '" + c + "'");
        return static_cast<int>(it - classes.begin());
    };
    std::vector<int> g, p;
    for (const auto& c : golds) g.push_back(index(c));
    for (const auto& c : preds) p.push_back(index(c));
    return compute_metrics(g, p, classes.size());
}

FoldOutcome run_fold(const TokenizedCorpus& corpus, const FoldPlan& plan, std::size_t fold,
                     const ExperimentCell& cell, std::uint64_t seed,
                     const std::vector<KeynessRanking>* full_corpus_rankings) {
    if (plan.assignment.size() != corpus.size()) throw Error("fold plan does not match the corpus");
    FoldOutcome out;
    out.fold = fold;
    out.test_rows = plan.test_rows(fold);
    const auto train = corpus.subset(plan.train_rows(fold));
    const auto test = corpus.subset(out.test_rows);

    const Vocabulary vocab = Vocabulary::fit(train.docs);
    out.fitted.vocabulary = vocab.digest();
    Digest idf;
    for (std::size_t i = 0; i < vocab.size(); ++i) idf.update(vocab.idf(i));
    out.fitted.idf = idf.hex();

    DocTermMatrix matrix = build_matrix(train, vocab, cell.scheme);
    std::vector<SparseVector> test_rows;
    test_rows.reserve(test.size());
    for (const auto& doc : test.docs) test_rows.push_back(weigh_document(doc, vocab, cell.scheme));

    if (cell.features.reduces()) {
        std::vector<KeynessRanking> local;
        const std::vector<KeynessRanking>* rankings = full_corpus_rankings;
        if (cell.features.full_corpus && !rankings)
            throw Error("full-corpus keyness requested without full-corpus rankings");
        if (!cell.features.full_corpus) {
            local = rank_all_categories(train, cell.features.reference_mode);
            rankings = &local;
        }
        out.fitted.keyness = rankings_digest(*rankings);
        const FeatureProjection projection(vocab, select_feature_union(*rankings, cell.features.threshold));
        for (auto& row : matrix.rows) row = projection.apply(row);
        for (auto& row : test_rows) row = projection.apply(row);
        matrix.vocab = projection.vocabulary();
    }
    out.n_features = matrix.n_features();

    const Model model = train_model(cell.classifier, matrix, derive_seed(seed, "classifier", fold));
    out.fitted.standardizer = standardizer_digest(model);
    out.predictions = predict_all(model, test_rows);
    out.evaluation = compute_metrics(test.labels, out.predictions, corpus.classes.size());
    return out;
}

CvResult pool_folds(std::vector<FoldOutcome> folds, std::size_t n_classes) {
    CvResult r;
    r.pooled = ConfusionMatrix(n_classes);
    double features = 0.0;
    std::vector<double> per_fold;
    for (const auto& f : folds) {
        r.pooled += f.evaluation.confusion;
        per_fold.push_back(f.evaluation.metrics.macro_f1);
        features += static_cast<double>(f.n_features);
    }
    r.metrics = metrics_from_confusion(r.pooled);
    if (!per_fold.empty()) {
        const double n = static_cast<double>(per_fold.size());
        r.fold_macro_f1_mean = std::accumulate(per_fold.begin(), per_fold.end(), 0.0) / n;
        double ss = 0.0;
        for (double v : per_fold) ss += (v - r.fold_macro_f1_mean) * (v - r.fold_macro_f1_mean);
        r.fold_macro_f1_std = per_fold.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        r.mean_features = features / n;
    }
    r.folds = std::move(folds);
    return r;
}

CvResult cross_validate(const TokenizedCorpus& corpus, const FoldPlan& plan, const ExperimentCell& cell,
                        std::uint64_t seed, unsigned threads) {
    std::vector<KeynessRanking> full;
    if (cell.features.reduces() && cell.features.full_corpus)
        full = rank_all_categories(corpus, cell.features.reference_mode);
    std::vector<FoldOutcome> folds(plan.k);
    parallel_for(plan.k, threads, [&](std::size_t f) { folds[f] = run_fold(corpus, plan, f, cell, seed, &full); });
    return pool_folds(std::move(folds), corpus.classes.size());
}

CvResult cross_validate(const TokenizedCorpus& corpus, const ExperimentCell& cell, std::size_t k, std::uint64_t seed,
                        unsigned threads) {
    const auto plan = make_stratified_folds(corpus.labels, k, derive_seed(seed, "folds"));
    return cross_validate(corpus, plan, cell, seed, threads);
}

bool Report::all_ok() const {
    return std::all_of(grid.begin(), grid.end(), [](const auto& r) { return r.ok(); }) &&
           std::all_of(sweep.begin(), sweep.end(), [](const auto& r) { return r.ok(); });
}

namespace {

ReportMetadata base_metadata(const TokenizedCorpus& corpus, const FoldPlan& plan, std::uint64_t seed,
                             const FeatureConfig& features) {
    ReportMetadata md;
    md.seed = seed;
    md.fold_plan_digest = plan.digest();
    md.k = plan.k;
    md.n_docs = corpus.size();
    md.classes = corpus.classes;
    md.class_counts.assign(corpus.classes.size(), 0);
    for (int l : corpus.labels) ++md.class_counts[static_cast<std::size_t>(l)];
    md.reference_mode = features.reference_mode;
    md.leaky = features.full_corpus;
    return md;
}

// Runs every (row, fold) pair as one task and pools per row; a failing fold
// marks its row failed without stopping the others.
void run_rows(const TokenizedCorpus& corpus, const FoldPlan& plan, std::uint64_t seed, unsigned threads,
              std::vector<ReportRow>& rows) {
    std::vector<KeynessRanking> full;
    bool need_full = std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) {
        return r.cell.features.reduces() && r.cell.features.full_corpus;
    });
    if (need_full) full = rank_all_categories(corpus, rows.front().cell.features.reference_mode);

    const std::size_t k = plan.k;
    std::vector<std::optional<FoldOutcome>> outcomes(rows.size() * k);
    std::vector<std::string> errors(rows.size() * k);
    parallel_for(rows.size() * k, threads, [&](std::size_t task) {
        const std::size_t row = task / k, fold = task % k;
        try {
            outcomes[task] = run_fold(corpus, plan, fold, rows[row].cell, seed, &full);
        } catch (const std::exception& e) {
            errors[task] = "fold " + std::to_string(fold) + ": " + e.what();
        }
    });
    for (std::size_t row = 0; row < rows.size(); ++row) {
        std::vector<FoldOutcome> folds;
        for (std::size_t fold = 0; fold < k; ++fold) {
            const std::size_t task = row * k + fold;
            if (!outcomes[task]) {
                rows[row].error = errors[task];
                break;
            }
            folds.push_back(std::move(*outcomes[task]));
        }
        if (rows[row].error.empty()) rows[row].result = pool_folds(std::move(folds), corpus.classes.size());
    }
}

}  // namespace

Report run_experiment_grid(const TokenizedCorpus& corpus, std::span<const ClassifierConfig> classifiers,
                           std::span<const WeightingScheme> schemes, std::size_t k, std::uint64_t seed,
                           const RunOptions& options) {
    if (classifiers.empty() || schemes.empty()) throw Error("experiment grid needs classifiers and schemes");
    const auto plan = make_stratified_folds(corpus.labels, k, derive_seed(seed, "folds"));
    Report report;
    report.metadata = base_metadata(corpus, plan, seed, options.features);
    report.metadata.command = "run";
    for (const auto& scheme : schemes)
        for (const auto& clf : classifiers) report.grid.push_back({ExperimentCell{clf, scheme, options.features}, {}, {}});
    run_rows(corpus, plan, seed, options.threads, report.grid);
    return report;
}

Report run_feature_sweep(const TokenizedCorpus& corpus, WeightingScheme scheme, const ClassifierConfig& classifier,
                         std::span<const Threshold> thresholds, std::size_t k, std::uint64_t seed,
                         const RunOptions& options) {
    if (thresholds.empty()) throw Error("feature sweep needs at least one threshold");
    const auto plan = make_stratified_folds(corpus.labels, k, derive_seed(seed, "folds"));
    std::vector<Threshold> sorted(thresholds.begin(), thresholds.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Report report;
    report.metadata = base_metadata(corpus, plan, seed, options.features);
    report.metadata.command = "sweep";
    for (const auto& t : sorted) {
        FeatureConfig features = options.features;
        features.threshold = t;
        report.sweep.push_back({ExperimentCell{classifier, scheme, features}, {}, {}});
    }
    run_rows(corpus, plan, seed, options.threads, report.sweep);
    return report;
}

}  // namespace vatc
