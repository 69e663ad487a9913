#include "vatc/classifier.hpp"

#include "vatc/digest.hpp"
#include "vatc/error.hpp"

namespace vatc {

std::string_view to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::naive_bayes: return "nb";
        case ClassifierKind::svm: return "svm";
        case ClassifierKind::random_forest: return "rf";
    }
    return "?";
}

std::string_view display_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::naive_bayes: return "Naive Bayes";
        case ClassifierKind::svm: return "Support Vector Machine";
        case ClassifierKind::random_forest: return "Random Forest";
    }
    return "?";
}

ClassifierKind parse_classifier(std::string_view name) {
    if (name == "nb") return ClassifierKind::naive_bayes;
    if (name == "svm") return ClassifierKind::svm;
    if (name == "rf") return ClassifierKind::random_forest;
    throw ConfigError("unknown classifier '" + std::string(name) + "' (expected nb, svm or rf)");
}

Model train_model(const ClassifierConfig& config, const DocTermMatrix& matrix, std::uint64_t seed) {
    switch (config.kind) {
        case ClassifierKind::naive_bayes: return train_naive_bayes(matrix, config.nb);
        case ClassifierKind::svm: return train_multiclass_svm(matrix, config.svm);
        case ClassifierKind::random_forest: return train_random_forest(matrix, config.rf, seed);
    }
    throw Error("unknown classifier kind");
}

int predict(const Model& model, const SparseVector& x) {
    struct Visitor {
        const SparseVector& x;
        int operator()(const NBModel& m) const { return nb_predict(m, x).label; }
        int operator()(const MulticlassSVMModel& m) const { return svm_predict(m, x); }
        int operator()(const RFModel& m) const { return rf_predict(m, x); }
    };
    return std::visit(Visitor{x}, model);
}

std::vector<int> predict_all(const Model& model, const std::vector<SparseVector>& rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(predict(model, row));
    return out;
}

std::string standardizer_digest(const Model& model) {
    const auto* svm = std::get_if<MulticlassSVMModel>(&model);
    if (!svm) return {};
    Digest d;
    for (const auto& m : svm->machines) {
        d.update(static_cast<std::uint64_t>(m.negative_class)).update(static_cast<std::uint64_t>(m.positive_class));
        if (!m.standardizer) continue;
        for (double v : m.standardizer->mean) d.update(v);
        for (double v : m.standardizer->stddev) d.update(v);
    }
    return d.hex();
}

}  // namespace vatc
