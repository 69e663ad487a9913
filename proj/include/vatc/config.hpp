#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vatc/classifier.hpp"
#include "vatc/corpus.hpp"
#include "vatc/keyness.hpp"
#include "vatc/synthetic.hpp"
#include "vatc/vectorize.hpp"

namespace vatc {

/// Everything a run needs. Defaults mirror an untuned workbench setup:
/// 10-fold CV, SVM C = 1 with standardization, Gaussian naive Bayes,
/// 10-tree random forest.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    std::size_t folds = 10;
    std::string output_dir = "out";
    unsigned threads = 1;

    // Corpus: a file when corpus_path is set, otherwise a synthetic preset
    // with optional per-field overrides.
    std::string corpus_path;
    std::optional<CorpusFormat> corpus_format;
    std::string preset = "tiny";
    std::map<std::string, std::string> synthetic_overrides;  // field -> raw value

    std::vector<WeightingScheme> schemes = all_schemes();
    std::vector<ClassifierKind> classifiers = {ClassifierKind::random_forest, ClassifierKind::naive_bayes,
                                               ClassifierKind::svm};
    NaiveBayesParams nb;
    SvmParams svm;
    ForestParams rf;

    ReferenceMode reference_mode = ReferenceMode::complement;
    bool keyness_full_corpus = false;
    std::vector<Threshold> thresholds = threshold_levels();

    ClassifierKind sweep_classifier = ClassifierKind::svm;
    WeightingScheme sweep_scheme = WeightingScheme::tfidf;

    std::string keywords_category;  // empty: every category

    ClassifierConfig classifier_config(ClassifierKind kind) const;
    /// Preset plus overrides; the generator seed derives from `seed`.
    SyntheticSpec synthetic_spec() const;
};

/// Parses `key = value` lines (dotted keys, `#` comments). Unknown keys and
/// bad values raise ConfigError naming the key and line.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

/// Applies one `key = value` assignment on top of an existing config.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Every resolved setting as sorted `key = value` lines.
std::string canonical_config(const ExperimentConfig& config);
std::string config_digest(const ExperimentConfig& config);

/// Known keys with their default values, in documentation order.
std::vector<std::pair<std::string, std::string>> config_keys();

}  // namespace vatc
