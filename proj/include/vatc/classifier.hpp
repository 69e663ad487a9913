#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vatc/naive_bayes.hpp"
#include "vatc/random_forest.hpp"
#include "vatc/svm.hpp"

namespace vatc {

enum class ClassifierKind { naive_bayes, svm, random_forest };

/// Config name: nb, svm, rf.
std::string_view to_string(ClassifierKind kind);
/// Column label in the rendered results table.
std::string_view display_name(ClassifierKind kind);
ClassifierKind parse_classifier(std::string_view name);

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::svm;
    NaiveBayesParams nb;
    SvmParams svm;
    ForestParams rf;
};

using Model = std::variant<NBModel, MulticlassSVMModel, RFModel>;

Model train_model(const ClassifierConfig& config, const DocTermMatrix& matrix, std::uint64_t seed);
int predict(const Model& model, const SparseVector& x);
std::vector<int> predict_all(const Model& model, const std::vector<SparseVector>& rows);

/// Digest of data-fitted preprocessing inside the model (SVM standardizers);
/// empty for models without any.
std::string standardizer_digest(const Model& model);

}  // namespace vatc
