#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "vatc/vectorize.hpp"

namespace vatc {

enum class EventModel { gaussian, multinomial };

std::string_view to_string(EventModel model);
EventModel parse_event_model(std::string_view name);

struct NaiveBayesParams {
    EventModel event_model = EventModel::gaussian;
};

/// Naive Bayes over dense features (absent sparse entries are 0.0).
/// Classes without training rows get prior 0 and are never predicted.
struct NBModel {
    EventModel event_model = EventModel::gaussian;
    std::vector<CategoryId> classes;
    std::size_t n_features = 0;
    std::vector<double> priors;

    // gaussian: [class][feature]
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> variances;
    double variance_floor = 0.0;

    // multinomial: [class][feature] add-one smoothed weight sums, and per-class totals
    std::vector<std::vector<double>> smoothed_counts;
    std::vector<double> class_totals;

    /// Derived caches; rebuilt by finalize().
    std::vector<std::vector<double>> log_terms;  // gaussian: log N(0); multinomial: log P(f|c)
    std::vector<std::vector<double>> inv_two_var;
    std::vector<double> log_base;                // per class, includes the log prior

    void finalize();
};

struct NBPrediction {
    int label = -1;
    std::vector<double> posterior;
};

NBModel train_naive_bayes(const DocTermMatrix& matrix, NaiveBayesParams params = {});
NBPrediction nb_predict(const NBModel& model, const SparseVector& x);

/// Per-class joint log score log P(c) + sum log P(x_f | c).
std::vector<double> nb_log_scores(const NBModel& model, const SparseVector& x);

}  // namespace vatc
