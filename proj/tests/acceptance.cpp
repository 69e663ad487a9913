// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vatc/commands.hpp"
#include "vatc/eval.hpp"
#include "vatc/keyness.hpp"
#include "vatc/naive_bayes.hpp"
#include "vatc/random_forest.hpp"
#include "vatc/rng.hpp"
#include "vatc/svm.hpp"
#include "vatc/synthetic.hpp"

using namespace vatc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

SparseVector dense(const std::vector<double>& values) {
    SparseVector v;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != 0.0) v.entries.push_back({static_cast<std::uint32_t>(i), values[i]});
    return v;
}

DocTermMatrix dense_matrix(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                           std::size_t n_classes) {
    DocTermMatrix m;
    TokenizedDocument doc{"v", {}};
    for (std::size_t f = 0; f < rows[0].size(); ++f) doc.tokens.push_back("f" + std::to_string(f));
    std::vector<TokenizedDocument> docs = {doc};
    m.vocab = Vocabulary::fit(docs);
    for (std::size_t c = 0; c < n_classes; ++c) m.classes.push_back("c" + std::to_string(c));
    m.labels = labels;
    for (const auto& r : rows) m.rows.push_back(dense(r));
    return m;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv_rows(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

int cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int rc = run_cli(args, out, err);
    if (rc != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return rc;
}

// ---------------------------------------------------------------------------

Outcome weighting_oracle() {
    Outcome o;
    const std::vector<std::vector<std::string>> hand = {
        {"fever", "fever", "fever", "cough", "the"},
        {"fever", "rash", "the"},
        {"cough", "cough", "rash", "baby", "the"},
        {"baby", "baby", "the", "fever", "cough"},
    };
    std::vector<TokenizedDocument> docs;
    for (std::size_t i = 0; i < hand.size(); ++i) docs.push_back({"d" + std::to_string(i), hand[i]});
    const auto vocab = fit_vocabulary(docs);
    double worst = 0.0;
    for (auto scheme : all_schemes())
        for (const auto& doc : hand) {
            const auto got = weigh_document(doc, vocab, scheme);
            const auto want = oracle::weights(doc, hand, std::string(to_string(scheme)));
            o.require(got.size() == want.size(), "stored entry count differs");
            for (const auto& [term, value] : want)
                worst = std::max(worst, std::abs(got.at(static_cast<std::uint32_t>(*vocab.index_of(term))) - value));
        }
    o.require(worst <= 1e-12, "max deviation " + fmt("%.3g", worst));

    // tf(rash)=... spot values: fever appears 3 times, df(fever)=3 of 4 here, so use "rash" twice with df 2.
    std::vector<std::string> spot = {"rash", "rash", "rash"};
    const double tfidf = weigh_document(spot, vocab, WeightingScheme::tfidf).at(
        static_cast<std::uint32_t>(*vocab.index_of("rash")));
    o.require(std::abs(tfidf - 3.0 * std::log(2.0)) <= 1e-12, "tfidf spot " + fmt("%.12f", tfidf));
    o.require(std::abs(tfidf - 2.0794) < 1e-4, "tfidf spot not 2.0794");
    std::vector<std::string> ntf_doc = {"fever", "fever", "cough"};
    const auto ntf = weigh_document(ntf_doc, vocab, WeightingScheme::ntf);
    o.require(std::abs(ntf.at(static_cast<std::uint32_t>(*vocab.index_of("fever"))) - 2.0 / 3.0) <= 1e-12,
              "ntf fever != 2/3");
    o.require(std::abs(ntf.at(static_cast<std::uint32_t>(*vocab.index_of("cough"))) - 1.0 / 3.0) <= 1e-12,
              "ntf cough != 1/3");
    if (o.pass) o.detail = "4 schemes x 4 docs max |diff| " + fmt("%.1g", worst) + ", 3ln2=" + fmt("%.4f", tfidf);
    return o;
}

Outcome g2_oracle() {
    Outcome o;
    const double equal = g2_statistic({5, 45, 100, 900});
    const double spot = g2_statistic({10, 10, 1000, 9000});
    o.require(std::abs(equal) <= 1e-12, "equal-rate G2 " + fmt("%.3g", equal));
    o.require(std::abs(spot - 20.433) <= 1e-3, "spot G2 " + fmt("%.6f", spot));
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        CounterRng rng(derive_seed(2, "g2", t));
        const std::uint64_t n1 = 1 + rng.below(50000), n2 = 1 + rng.below(50000);
        std::uint64_t a = rng.below(n1 + 1), b = rng.below(n2 + 1);
        if (a + b == 0) a = 1;
        const double want = oracle::g2(double(a), double(n1), double(b), double(n2));
        worst = std::max(worst, std::abs(g2_statistic({a, b, n1, n2}) - want));
    }
    o.require(worst <= 1e-9, "random tables max |diff| " + fmt("%.3g", worst));
    if (o.pass) o.detail = "G2(10,1000,10,9000)=" + fmt("%.4f", spot) + ", 1000 tables max |diff| " + fmt("%.1g", worst);
    return o;
}

Outcome smo_correctness() {
    Outcome o;
    SvmParams raw;
    raw.standardize = false;
    std::vector<SparseVector> rows = {dense({-1}), dense({1})};
    std::vector<int> signs = {-1, 1};
    auto m = train_binary_svm_smo(rows, signs, 1, raw);
    o.require(std::abs(m.weights[0] - 1.0) <= 1e-3 && std::abs(m.bias) <= 1e-3 &&
                  std::abs(m.alphas[0] - 0.5) <= 1e-3 && std::abs(m.alphas[1] - 0.5) <= 1e-3,
              "1-D solution w=" + fmt("%.4f", m.weights[0]) + " b=" + fmt("%.4f", m.bias));

    std::size_t fitted = 0;
    double worst_sum = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        CounterRng rng(derive_seed(3, "smo", s));
        const double angle = rng.uniform() * 2.0 * M_PI, off = rng.uniform() * 2.0 - 1.0;
        std::vector<SparseVector> pts;
        std::vector<int> ys;
        while (pts.size() < 20) {
            const double x = rng.uniform() * 10.0 - 5.0, y = rng.uniform() * 10.0 - 5.0;
            const double side = std::cos(angle) * x + std::sin(angle) * y + off;
            if (std::abs(side) < 0.5) continue;
            pts.push_back(dense({x, y}));
            ys.push_back(side > 0 ? 1 : -1);
        }
        if (std::all_of(ys.begin(), ys.end(), [&](int v) { return v == ys[0]; })) ys[0] = -ys[0], pts[0] = dense({0, 0});
        SvmParams params;  // default tolerance, standardized
        params.c = 100.0;  // hard-margin regime: the separating solution lies inside the box
        auto model = train_binary_svm_smo(pts, ys, 2, params);
        bool all_right = true, feasible = true;
        double ay = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            all_right &= ys[i] * model.decision(pts[i]) > 0.0;
            feasible &= model.alphas[i] >= 0.0 && model.alphas[i] <= params.c;
            ay += model.alphas[i] * ys[i];
        }
        worst_sum = std::max(worst_sum, std::abs(ay));
        fitted += all_right ? 1 : 0;
        o.require(feasible, "alpha outside [0, C] in set " + std::to_string(s));
        o.require(model.b_up >= model.b_low - 2.0 * params.tolerance, "KKT gap in set " + std::to_string(s));
    }
    o.require(fitted == 50, std::to_string(fitted) + "/50 sets fit exactly");
    o.require(worst_sum <= 1e-6, "|sum alpha y| " + fmt("%.3g", worst_sum));
    if (o.pass)
        o.detail = "1-D (w,b)=(" + fmt("%.4f", m.weights[0]) + "," + fmt("%.4f", m.bias) +
                   "), 50/50 separable sets, max |sum alpha y| " + fmt("%.1g", worst_sum);
    return o;
}

Outcome nb_oracle() {
    Outcome o;
    auto g = train_naive_bayes(dense_matrix({{1}, {2}, {3}, {5}, {6}, {7}}, {0, 0, 0, 1, 1, 1}, 2));
    const auto pg = nb_predict(g, dense({3}));
    o.require(pg.label == 0 && std::abs(pg.posterior[0] - 1.0 / (1.0 + std::exp(-4.0))) <= 1e-9,
              "gaussian posterior " + fmt("%.12f", pg.posterior[0]));
    auto mn = train_naive_bayes(dense_matrix({{3, 1}, {1, 3}}, {0, 1}, 2), {EventModel::multinomial});
    const auto pm = nb_predict(mn, dense({2, 0}));
    o.require(pm.label == 0 && std::abs(pm.posterior[0] - 0.8) <= 1e-9,
              "multinomial posterior " + fmt("%.12f", pm.posterior[0]));

    double worst = 0.0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        CounterRng rng(derive_seed(4, "nb", t));
        const std::size_t classes = 2 + rng.below(4), features = 1 + rng.below(6);
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (std::size_t c = 0; c < classes; ++c)
            for (std::size_t i = 0, n = 2 + rng.below(4); i < n; ++i) {
                std::vector<double> r;
                for (std::size_t f = 0; f < features; ++f)
                    r.push_back(rng.bernoulli(0.3) ? 0.0 : double(rng.below(6)) + rng.uniform());
                rows.push_back(r);
                labels.push_back(static_cast<int>(c));
            }
        std::vector<double> x;
        for (std::size_t f = 0; f < features; ++f) x.push_back(rng.bernoulli(0.3) ? 0.0 : rng.uniform() * 8.0);
        const auto matrix = dense_matrix(rows, labels, classes);
        for (auto model : {EventModel::gaussian, EventModel::multinomial}) {
            const auto p = nb_predict(train_naive_bayes(matrix, {model}), dense(x));
            worst = std::max(worst, std::abs(std::accumulate(p.posterior.begin(), p.posterior.end(), 0.0) - 1.0));
        }
    }
    o.require(worst <= 1e-9, "posterior sum off by " + fmt("%.3g", worst));
    if (o.pass)
        o.detail = "gaussian " + fmt("%.10f", pg.posterior[0]) + ", multinomial " + fmt("%.10f", pm.posterior[0]) +
                   ", 2000 posteriors sum to 1 within " + fmt("%.1g", worst);
    return o;
}

Outcome random_forest() {
    Outcome o;
    // consistent multi-feature data
    CounterRng rng(5);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::set<std::vector<double>> seen;
    while (rows.size() < 200) {
        std::vector<double> r;
        for (int f = 0; f < 8; ++f) r.push_back(rng.bernoulli(0.5) ? 0.0 : double(rng.below(4)));
        if (!seen.insert(r).second) continue;
        rows.push_back(r);
        labels.push_back(static_cast<int>(rng.below(3)));
    }
    labels[0] = 0, labels[1] = 1, labels[2] = 2;
    const auto m = dense_matrix(rows, labels, 3);
    ForestParams diag;
    diag.n_trees = 1;
    diag.m_try = 8;
    diag.bootstrap = false;
    const auto single = train_random_forest(m, diag, 1);
    std::size_t right = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) right += rf_predict(single, m.rows[i]) == labels[i] ? 1 : 0;
    o.require(right == rows.size(), "diagnostic tree training accuracy " + std::to_string(right) + "/200");

    // one feature: root split versus exhaustive threshold search
    std::size_t agree = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        CounterRng r(derive_seed(5, "split", s));
        std::vector<double> xs;
        std::vector<int> ys;
        for (int i = 0; i < 40; ++i) {
            xs.push_back(double(r.below(15)) - 5.0);
            ys.push_back(static_cast<int>(r.below(2)));
        }
        ys[0] = 0, ys[1] = 1;
        std::vector<std::vector<double>> one;
        for (double x : xs) one.push_back({x});
        const auto model = train_random_forest(dense_matrix(one, ys, 2), diag, s);
        // exhaustive search over every midpoint
        std::vector<double> sorted = xs;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        auto split_gini = [&](double t) {
            std::vector<std::uint32_t> l(2, 0), rr(2, 0);
            for (std::size_t i = 0; i < xs.size(); ++i) ++(xs[i] <= t ? l : rr)[static_cast<std::size_t>(ys[i])];
            const double nl = l[0] + l[1], nr = rr[0] + rr[1];
            return (nl * gini_impurity(l) + nr * gini_impurity(rr)) / (nl + nr);
        };
        double best = 1e300;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) best = std::min(best, split_gini(0.5 * (sorted[i] + sorted[i + 1])));
        const auto& root = model.trees[0].nodes[0];
        const double got = root.is_leaf() ? 1e300 : split_gini(root.threshold);
        agree += std::abs(got - best) <= 1e-12 ? 1 : 0;
    }
    o.require(agree == 50, "split search agreement " + std::to_string(agree) + "/50");

    // determinism across runs and thread counts
    ForestParams p;
    p.n_trees = 25;
    const auto a = train_random_forest(m, p, 77);
    const auto b = train_random_forest(m, p, 77);
    p.threads = 4;
    const auto c = train_random_forest(m, p, 77);
    bool same = true;
    for (const auto& row : m.rows) same &= rf_votes(a, row) == rf_votes(b, row) && rf_votes(a, row) == rf_votes(c, row);
    o.require(same, "predictions differ across runs or thread counts");
    if (o.pass) o.detail = "diagnostic tree 200/200, split search 50/50, 25-tree forest identical at 1 and 4 threads";
    return o;
}

Outcome stratification() {
    Outcome o;
    const auto corpus = tokenize_corpus(generate_synthetic_corpus(synthetic_preset("table2")));
    const auto counts_raw = std::vector<std::size_t>{2005, 801, 998, 1376, 1227};
    std::map<std::string, std::size_t> expected;
    for (const auto& [name, n] : reference_category_counts()) expected[name] = n;
    const auto plan = make_stratified_folds(corpus.labels, 10, derive_seed(6, "folds"));
    double worst = 0.0;
    std::vector<int> covered(corpus.size(), 0);
    for (std::size_t f = 0; f < 10; ++f) {
        std::vector<std::size_t> per_class(corpus.classes.size(), 0);
        for (auto r : plan.test_rows(f)) {
            ++per_class[static_cast<std::size_t>(corpus.labels[r])];
            ++covered[r];
        }
        for (std::size_t c = 0; c < corpus.classes.size(); ++c)
            worst = std::max(worst, std::abs(double(per_class[c]) - double(expected[corpus.classes[c]]) / 10.0));
    }
    (void)counts_raw;
    o.require(corpus.size() == 6407, "corpus size " + std::to_string(corpus.size()));
    o.require(worst < 1.0, "max deviation from count/10 " + fmt("%.2f", worst));
    o.require(std::all_of(covered.begin(), covered.end(), [](int v) { return v == 1; }), "not a partition");
    const auto again = make_stratified_folds(corpus.labels, 10, derive_seed(6, "folds"));
    o.require(again.assignment == plan.assignment, "same seed gave a different plan");
    if (o.pass) o.detail = "6407 docs, max |fold count - count/10| = " + fmt("%.1f", worst) + ", partition, reproducible";
    return o;
}

Outcome metrics_identities() {
    Outcome o;
    std::vector<CategoryId> classes = {"A", "B"}, golds = {"A", "A", "B"}, preds = {"A", "B", "B"};
    const auto hand = compute_metrics(golds, preds, classes);
    o.require(hand.metrics.macro_f1 == 2.0 / 3.0, "hand macro " + fmt("%.17g", hand.metrics.macro_f1));
    double worst_macro = 0.0, worst_micro = 0.0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        CounterRng rng(derive_seed(7, "metrics", t));
        const std::size_t k = 2 + rng.below(8), n = 1 + rng.below(300);
        std::vector<int> g(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = static_cast<int>(rng.below(k));
            p[i] = rng.bernoulli(0.6) ? g[i] : static_cast<int>(rng.below(k));
        }
        const auto e = compute_metrics(g, p, k);
        const double mean = std::accumulate(e.metrics.f1.begin(), e.metrics.f1.end(), 0.0) / double(k);
        worst_macro = std::max(worst_macro, std::abs(mean - e.metrics.macro_f1));
        worst_micro = std::max(worst_micro, std::abs(e.metrics.micro_f1 - e.metrics.accuracy));
    }
    o.require(worst_macro <= 1e-12, "macro deviation " + fmt("%.3g", worst_macro));
    o.require(worst_micro <= 1e-12, "micro/accuracy deviation " + fmt("%.3g", worst_micro));
    if (o.pass)
        o.detail = "hand macro = 2/3 exactly; 1000 sets max deviations " + fmt("%.1g", worst_macro) + " / " +
                   fmt("%.1g", worst_micro);
    return o;
}

Outcome grid_reproduction(const fs::path& work) {
    Outcome o;
    std::ofstream(work / "grid.cfg") << "corpus.preset = desk\nfolds = 10\n";
    const auto start = std::chrono::steady_clock::now();
    const int rc1 = cli({"--config", (work / "grid.cfg").string(), "--out", (work / "grid_a").string(), "run"});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const int rc2 = cli({"--config", (work / "grid.cfg").string(), "--out", (work / "grid_b").string(), "run"});
    o.require(rc1 == 0 && rc2 == 0, "run exit codes " + std::to_string(rc1) + "," + std::to_string(rc2));
    o.require(seconds < 300.0, "took " + fmt("%.1f", seconds) + " s");

    const auto rows = read_csv_rows(work / "grid_a" / "grid.csv");
    std::size_t cells = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].size() > 3 && rows[i].back() == "ok") ++cells;
    o.require(cells == 12, std::to_string(cells) + " ok cells");

    // Table layout: 4 scheme rows, each with 3 macro-F1 values.
    const auto table = slurp(work / "grid_a" / "grid.txt");
    std::size_t table_rows = 0;
    for (const char* scheme : {"Binary", "Frequency", "Normalised Frequency", "TFIDF"}) {
        std::istringstream in(table);
        for (std::string line; std::getline(in, line);) {
            if (line.rfind(scheme, 0) != 0 || (std::string(scheme) == "Frequency" && line.rfind("Frequency ", 0) != 0))
                continue;
            std::istringstream cells_in(line.substr(std::string("Feature Value Representation").size()));
            double v;
            std::size_t n = 0;
            while (cells_in >> v) ++n;
            if (n == 3) ++table_rows;
        }
    }
    o.require(table_rows == 4, std::to_string(table_rows) + "/4 table rows with 3 cells");
    bool identical = true;
    for (const char* name : {"grid.csv", "grid.txt", "grid_folds.csv"})
        identical &= slurp(work / "grid_a" / name) == slurp(work / "grid_b" / name);
    o.require(identical, "reruns differ");
    if (o.pass)
        o.detail = "1000 docs, 12 cells, 10-fold, " + fmt("%.1f", seconds) + " s, reruns byte-identical";
    return o;
}

Outcome sweep_direction(const fs::path& work) {
    Outcome o;
    std::ofstream(work / "sweep.cfg") << "corpus.preset = noisy\nfolds = 10\n";
    const auto spec = synthetic_preset("noisy");
    const double noise_share = 1.0 - spec.signal_rate;
    o.require(noise_share >= 0.5, "noise share " + fmt("%.2f", noise_share));
    const auto start = std::chrono::steady_clock::now();
    const int rc = cli({"--config", (work / "sweep.cfg").string(), "--out", (work / "sweep").string(), "sweep"});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(rc == 0, "sweep exit code " + std::to_string(rc));
    o.require(seconds < 300.0, "took " + fmt("%.1f", seconds) + " s");
    const auto rows = read_csv_rows(work / "sweep" / "sweep.csv");
    o.require(rows.size() == 11, std::to_string(rows.size() ? rows.size() - 1 : 0) + " sweep rows");
    if (!o.pass) return o;
    double best_reduced = -1.0, baseline = -1.0;
    std::string best_k;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double macro = std::stod(rows[i][3]);
        if (rows[i][2] == "all") baseline = macro;
        else if (macro > best_reduced) best_reduced = macro, best_k = rows[i][2];
    }
    o.require(baseline >= 0.0, "no all row");
    o.require(best_reduced >= baseline - 0.01,
              "best reduced " + fmt("%.4f", best_reduced) + " < all " + fmt("%.4f", baseline) + " - 0.01");
    if (o.pass)
        o.detail = "10 rows, best top-" + best_k + " macro-F1 " + fmt("%.4f", best_reduced) + " vs all " +
                   fmt("%.4f", baseline) + ", " + fmt("%.1f", seconds) + " s";
    return o;
}

Outcome no_leakage() {
    Outcome o;
    const Corpus raw = generate_synthetic_corpus(synthetic_preset("desk"));
    const auto corpus = tokenize_corpus(raw);
    const auto plan = make_stratified_folds(corpus.labels, 10, derive_seed(10, "folds"));
    ClassifierConfig svm;
    svm.kind = ClassifierKind::svm;
    FeatureConfig features;
    features.threshold = Threshold::top(50);
    std::size_t checked = 0;
    for (auto scheme : {WeightingScheme::tfidf, WeightingScheme::ntf}) {
        const ExperimentCell cell{svm, scheme, features};
        for (std::size_t fold = 0; fold < plan.k; ++fold) {
            Corpus scrambled = raw;
            CounterRng rng(derive_seed(10, "scramble", fold));
            for (auto r : plan.test_rows(fold)) {
                std::string text;
                for (std::uint64_t i = 0, n = rng.below(30); i < n; ++i)
                    text += "junk" + std::to_string(rng.below(1000)) + (rng.bernoulli(0.1) ? "!\n" : " ");
                scrambled.documents[r].text = text;
            }
            const auto before = run_fold(corpus, plan, fold, cell, 10);
            const auto after = run_fold(tokenize_corpus(scrambled), plan, fold, cell, 10);
            o.require(before.fitted.vocabulary == after.fitted.vocabulary, "vocabulary changed in fold " + std::to_string(fold));
            o.require(before.fitted.idf == after.fitted.idf, "idf changed in fold " + std::to_string(fold));
            o.require(before.fitted.keyness == after.fitted.keyness, "keyness changed in fold " + std::to_string(fold));
            o.require(before.fitted.standardizer == after.fitted.standardizer,
                      "standardizer changed in fold " + std::to_string(fold));
            o.require(!before.fitted.keyness.empty() && !before.fitted.standardizer.empty(), "missing digests");
            ++checked;
        }
    }
    if (o.pass) o.detail = std::to_string(checked) + " folds: vocabulary, idf, keyness and standardizer digests unchanged";
    return o;
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "vatc_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;  // 0: no runtime bound
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "weighting oracle", 1.0, weighting_oracle},
        {2, "G2 oracle", 1.0, g2_oracle},
        {3, "SMO correctness", 10.0, smo_correctness},
        {4, "naive Bayes oracle", 0.0, nb_oracle},
        {5, "random forest", 0.0, random_forest},
        {6, "stratification", 0.0, stratification},
        {7, "metric identities", 0.0, metrics_identities},
        {8, "grid reproduction", 0.0, [&] { return grid_reproduction(work); }},
        {9, "sweep direction", 0.0, [&] { return sweep_direction(work); }},
        {10, "no-leakage audit", 0.0, no_leakage},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0.0 && seconds >= c.budget_seconds)
            o.require(false, "runtime " + fmt("%.2f", seconds) + " s over " + fmt("%.0f", c.budget_seconds) + " s");
        std::printf("[%s] %2d %-20s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    fs::remove_all(work);
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
