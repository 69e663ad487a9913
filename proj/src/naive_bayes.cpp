#include "vatc/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vatc/error.hpp"

namespace vatc {

std::string_view to_string(EventModel model) {
    return model == EventModel::gaussian ? "gaussian" : "multinomial";
}

EventModel parse_event_model(std::string_view name) {
    if (name == "gaussian") return EventModel::gaussian;
    if (name == "multinomial") return EventModel::multinomial;
    throw ConfigError("unknown naive bayes event model '" + std::string(name) + "' (expected gaussian or multinomial)");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double gaussian_log_density(double x, double mean, double variance) {
    const double d = x - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * variance) - d * d / (2.0 * variance);
}

}  // namespace

NBModel train_naive_bayes(const DocTermMatrix& matrix, NaiveBayesParams params) {
    const std::size_t n_classes = matrix.classes.size();
    const std::size_t n_features = matrix.n_features();
    const std::size_t n = matrix.n_rows();
    std::vector<std::size_t> class_rows(n_classes, 0);
    for (int label : matrix.labels) ++class_rows.at(static_cast<std::size_t>(label));
    if (std::count_if(class_rows.begin(), class_rows.end(), [](std::size_t c) { return c > 0; }) < 2)
        throw Error("naive bayes needs training rows from at least 2 classes");

    NBModel m;
    m.event_model = params.event_model;
    m.classes = matrix.classes;
    m.n_features = n_features;
    m.priors.resize(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c)
        m.priors[c] = static_cast<double>(class_rows[c]) / static_cast<double>(n);

    if (params.event_model == EventModel::gaussian) {
        m.means.assign(n_classes, std::vector<double>(n_features, 0.0));
        m.variances.assign(n_classes, std::vector<double>(n_features, 0.0));
        std::vector<double> global_mean(n_features, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            auto c = static_cast<std::size_t>(matrix.labels[r]);
            for (const auto& e : matrix.rows[r].entries) {
                m.means[c][e.index] += e.value;
                global_mean[e.index] += e.value;
            }
        }
        for (std::size_t c = 0; c < n_classes; ++c)
            if (class_rows[c] > 0)
                for (auto& v : m.means[c]) v /= static_cast<double>(class_rows[c]);
        for (auto& v : global_mean) v /= static_cast<double>(n);

        // Sum of squared deviations: start from the all-zero contribution
        // (rows * mean^2) and correct for each stored entry.
        std::vector<double> global_ss(n_features);
        for (std::size_t f = 0; f < n_features; ++f)
            global_ss[f] = static_cast<double>(n) * global_mean[f] * global_mean[f];
        for (std::size_t c = 0; c < n_classes; ++c)
            for (std::size_t f = 0; f < n_features; ++f)
                m.variances[c][f] = static_cast<double>(class_rows[c]) * m.means[c][f] * m.means[c][f];
        for (std::size_t r = 0; r < n; ++r) {
            auto c = static_cast<std::size_t>(matrix.labels[r]);
            for (const auto& e : matrix.rows[r].entries) {
                const double mu = m.means[c][e.index];
                m.variances[c][e.index] += (e.value - mu) * (e.value - mu) - mu * mu;
                const double g = global_mean[e.index];
                global_ss[e.index] += (e.value - g) * (e.value - g) - g * g;
            }
        }
        double mean_global_var = 0.0;
        if (n > 1 && n_features > 0) {
            for (double ss : global_ss) mean_global_var += std::max(0.0, ss) / static_cast<double>(n - 1);
            mean_global_var /= static_cast<double>(n_features);
        }
        m.variance_floor = mean_global_var > 0.0 ? 1e-9 * mean_global_var : 1e-9;
        for (std::size_t c = 0; c < n_classes; ++c) {
            for (auto& v : m.variances[c]) {
                v = class_rows[c] > 1 ? std::max(0.0, v) / static_cast<double>(class_rows[c] - 1) : 0.0;
                v = std::max(v, m.variance_floor);
            }
        }
    } else {
        m.smoothed_counts.assign(n_classes, std::vector<double>(n_features, 1.0));
        m.class_totals.assign(n_classes, static_cast<double>(n_features));
        for (std::size_t r = 0; r < n; ++r) {
            auto c = static_cast<std::size_t>(matrix.labels[r]);
            for (const auto& e : matrix.rows[r].entries) {
                if (e.value < 0.0) throw Error("multinomial naive bayes needs nonnegative feature values");
                m.smoothed_counts[c][e.index] += e.value;
                m.class_totals[c] += e.value;
            }
        }
    }
    m.finalize();
    return m;
}

void NBModel::finalize() {
    const std::size_t n_classes = classes.size();
    log_terms.assign(n_classes, std::vector<double>(n_features, 0.0));
    inv_two_var.clear();
    log_base.assign(n_classes, 0.0);
    if (event_model == EventModel::gaussian) {
        inv_two_var.assign(n_classes, std::vector<double>(n_features, 0.0));
        for (std::size_t c = 0; c < n_classes; ++c) {
            double base = priors[c] > 0.0 ? std::log(priors[c]) : kNegInf;
            for (std::size_t f = 0; f < n_features; ++f) {
                log_terms[c][f] = gaussian_log_density(0.0, means[c][f], variances[c][f]);
                inv_two_var[c][f] = 1.0 / (2.0 * variances[c][f]);
                base += log_terms[c][f];
            }
            log_base[c] = base;
        }
    } else {
        for (std::size_t c = 0; c < n_classes; ++c) {
            log_base[c] = priors[c] > 0.0 ? std::log(priors[c]) : kNegInf;
            for (std::size_t f = 0; f < n_features; ++f)
                log_terms[c][f] = std::log(smoothed_counts[c][f] / class_totals[c]);
        }
    }
}

std::vector<double> nb_log_scores(const NBModel& model, const SparseVector& x) {
    const std::size_t n_classes = model.classes.size();
    std::vector<double> scores(model.log_base);
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (model.priors[c] <= 0.0) continue;
        double s = 0.0;
        for (const auto& e : x.entries) {
            if (e.index >= model.n_features) continue;
            if (model.event_model == EventModel::gaussian) {
                // log N(x) - log N(0), since the base already holds log N(0).
                const double mu = model.means[c][e.index];
                const double d = e.value - mu;
                s += (mu * mu - d * d) * model.inv_two_var[c][e.index];
            } else {
                s += e.value * model.log_terms[c][e.index];
            }
        }
        scores[c] += s;
    }
    return scores;
}

NBPrediction nb_predict(const NBModel& model, const SparseVector& x) {
    NBPrediction p;
    const auto scores = nb_log_scores(model, x);
    double best = kNegInf;
    for (std::size_t c = 0; c < scores.size(); ++c) {
        if (model.priors[c] > 0.0 && (p.label < 0 || scores[c] > best)) {
            best = scores[c];
            p.label = static_cast<int>(c);
        }
    }
    p.posterior.assign(scores.size(), 0.0);
    if (!std::isfinite(best)) {
        // Every class underflowed to -inf: fall back to the priors.
        for (std::size_t c = 0; c < scores.size(); ++c) p.posterior[c] = model.priors[c];
        p.label = static_cast<int>(std::max_element(model.priors.begin(), model.priors.end()) - model.priors.begin());
        return p;
    }
    double z = 0.0;
    for (std::size_t c = 0; c < scores.size(); ++c) {
        if (model.priors[c] <= 0.0) continue;
        p.posterior[c] = std::exp(scores[c] - best);
        z += p.posterior[c];
    }
    for (auto& v : p.posterior) v /= z;
    return p;
}

}  // namespace vatc
