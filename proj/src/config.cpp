#include "vatc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "vatc/digest.hpp"
#include "vatc/error.hpp"
#include "vatc/rng.hpp"

namespace vatc {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size())
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + value + "'");
    return v;
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value, Parse parse) {
    std::vector<T> out;
    for (const auto& item : split_list(value)) {
        T v = parse(item);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    if (out.empty()) throw ConfigError("key '" + key + "': list is empty");
    return out;
}

const std::set<std::string>& synthetic_fields() {
    static const std::set<std::string> fields = {"total_docs",         "categories",       "signal_vocab_per_class",
                                                 "shared_noise_vocab", "signal_rate",      "misspelling_rate",
                                                 "min_length",         "max_length"};
    return fields;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& items) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ',';
        if constexpr (std::is_same_v<T, Threshold>) out += item.to_string();
        else out += to_string(item);
    }
    return out;
}

double to_rate(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("key '" + key + "': expected a value in [0, 1], got '" + value + "'");
    return v;
}

// Category weights are relative; they are normalized to sum to 1.
void apply_synthetic_field(SyntheticSpec& s, const std::string& field, const std::string& value) {
    const std::string key = "synthetic." + field;
    if (field == "total_docs") s.total_docs = to_u64(key, value);
    else if (field == "signal_vocab_per_class") s.signal_vocab_per_class = to_u64(key, value);
    else if (field == "shared_noise_vocab") s.shared_noise_vocab = to_u64(key, value);
    else if (field == "signal_rate") s.signal_rate = to_rate(key, value);
    else if (field == "misspelling_rate") s.misspelling_rate = to_rate(key, value);
    else if (field == "min_length") s.min_length = to_u64(key, value);
    else if (field == "max_length") s.max_length = to_u64(key, value);
    else if (field == "categories") {
        std::vector<std::pair<CategoryId, double>> weights;
        double total = 0.0;
        for (const auto& item : split_list(value)) {
            const auto colon = item.rfind(':');
            if (colon == std::string::npos)
                throw ConfigError("key '" + key + "': expected name:weight, got '" + item + "'");
            const double w = to_double(key, trim(item.substr(colon + 1)));
            if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("key '" + key + "': weights must be positive");
            weights.emplace_back(trim(item.substr(0, colon)), w);
            total += w;
        }
        if (weights.empty()) throw ConfigError("key '" + key + "': list is empty");
        for (auto& [_, w] : weights) w /= total;
        s.category_weights = std::move(weights);
    } else
        throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
    try {
        if (key == "seed") c.seed = to_u64(key, value);
        else if (key == "folds") c.folds = to_u64(key, value);
        else if (key == "threads") c.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, to_u64(key, value)));
        else if (key == "output.dir") c.output_dir = value;
        else if (key == "corpus.path") c.corpus_path = value;
        else if (key == "corpus.format") c.corpus_format = parse_corpus_format(value);
        else if (key == "corpus.preset") {
            synthetic_preset(value);  // validates the name
            c.preset = value;
        } else if (key.starts_with("synthetic.")) {
            const std::string field = key.substr(10);
            if (!synthetic_fields().contains(field)) throw ConfigError("unknown key '" + key + "'");
            SyntheticSpec probe;
            apply_synthetic_field(probe, field, value);
            c.synthetic_overrides[field] = value;
        } else if (key == "experiment.schemes")
            c.schemes = parse_list<WeightingScheme>(key, value, parse_scheme);
        else if (key == "experiment.classifiers")
            c.classifiers = parse_list<ClassifierKind>(key, value, parse_classifier);
        else if (key == "nb.event_model") c.nb.event_model = parse_event_model(value);
        else if (key == "svm.c") c.svm.c = to_double(key, value);
        else if (key == "svm.tolerance") c.svm.tolerance = to_double(key, value);
        else if (key == "svm.epsilon") c.svm.epsilon = to_double(key, value);
        else if (key == "svm.standardize") c.svm.standardize = to_bool(key, value);
        else if (key == "rf.n_trees") c.rf.n_trees = to_u64(key, value);
        else if (key == "rf.m_try") c.rf.m_try = to_u64(key, value);
        else if (key == "rf.max_depth") c.rf.max_depth = to_u64(key, value);
        else if (key == "rf.min_leaf") c.rf.min_leaf = to_u64(key, value);
        else if (key == "rf.bootstrap") c.rf.bootstrap = to_bool(key, value);
        else if (key == "keyness.reference_mode") c.reference_mode = parse_reference_mode(value);
        else if (key == "keyness.full_corpus") c.keyness_full_corpus = to_bool(key, value);
        else if (key == "keyness.thresholds") c.thresholds = parse_list<Threshold>(key, value, Threshold::parse);
        else if (key == "sweep.classifier") c.sweep_classifier = parse_classifier(value);
        else if (key == "sweep.scheme") c.sweep_scheme = parse_scheme(value);
        else if (key == "keywords.category") c.keywords_category = value;
        else throw ConfigError("unknown key '" + key + "'");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        if (what.find("'" + key + "'") != std::string::npos) throw;
        throw ConfigError("key '" + key + "': " + what);
    } catch (const Error& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
    if (c.folds < 2 && key == "folds") throw ConfigError("key 'folds': must be at least 2");
    if (key == "svm.c" && !(c.svm.c > 0.0)) throw ConfigError("key 'svm.c': must be positive");
    if (key == "svm.tolerance" && !(c.svm.tolerance > 0.0)) throw ConfigError("key 'svm.tolerance': must be positive");
    if (key == "rf.n_trees" && c.rf.n_trees == 0) throw ConfigError("key 'rf.n_trees': must be at least 1");
    if (key == "rf.min_leaf" && c.rf.min_leaf == 0) throw ConfigError("key 'rf.min_leaf': must be at least 1");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    ExperimentConfig config;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + t + "'");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "missing key before '='");
        if (!seen.insert(key).second) throw ConfigError(where + "key '" + key + "' is set twice");
        try {
            apply_setting(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    try {
        config.synthetic_spec();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

ClassifierConfig ExperimentConfig::classifier_config(ClassifierKind kind) const {
    ClassifierConfig c;
    c.kind = kind;
    c.nb = nb;
    c.svm = svm;
    c.rf = rf;
    return c;
}

SyntheticSpec ExperimentConfig::synthetic_spec() const {
    SyntheticSpec s = synthetic_preset(preset);
    for (const auto& [field, value] : synthetic_overrides) apply_synthetic_field(s, field, value);
    s.seed = derive_seed(seed, "corpus");
    try {
        s.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return s;
}

std::string canonical_config(const ExperimentConfig& c) {
    std::map<std::string, std::string> kv;
    kv["seed"] = std::to_string(c.seed);
    kv["folds"] = std::to_string(c.folds);
    kv["corpus.path"] = c.corpus_path;
    kv["corpus.format"] = c.corpus_format ? (*c.corpus_format == CorpusFormat::csv ? "csv" : "jsonl") : "";
    kv["corpus.preset"] = c.corpus_path.empty() ? c.preset : "";
    if (c.corpus_path.empty())
        for (const auto& [field, value] : c.synthetic_overrides) kv["synthetic." + field] = value;
    kv["experiment.schemes"] = join(c.schemes);
    kv["experiment.classifiers"] = join(c.classifiers);
    kv["nb.event_model"] = std::string(to_string(c.nb.event_model));
    kv["svm.c"] = format_double(c.svm.c);
    kv["svm.tolerance"] = format_double(c.svm.tolerance);
    kv["svm.epsilon"] = format_double(c.svm.epsilon);
    kv["svm.standardize"] = c.svm.standardize ? "true" : "false";
    kv["rf.n_trees"] = std::to_string(c.rf.n_trees);
    kv["rf.m_try"] = std::to_string(c.rf.m_try);
    kv["rf.max_depth"] = std::to_string(c.rf.max_depth);
    kv["rf.min_leaf"] = std::to_string(c.rf.min_leaf);
    kv["rf.bootstrap"] = c.rf.bootstrap ? "true" : "false";
    kv["keyness.reference_mode"] = std::string(to_string(c.reference_mode));
    kv["keyness.full_corpus"] = c.keyness_full_corpus ? "true" : "false";
    kv["keyness.thresholds"] = join(c.thresholds);
    kv["sweep.classifier"] = std::string(to_string(c.sweep_classifier));
    kv["sweep.scheme"] = std::string(to_string(c.sweep_scheme));
    kv["keywords.category"] = c.keywords_category;
    // output.dir and threads do not affect results and stay out of the digest.
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::string config_digest(const ExperimentConfig& config) { return to_hex(fnv1a64(canonical_config(config))); }

std::vector<std::pair<std::string, std::string>> config_keys() {
    return {
        {"seed", "1"},
        {"folds", "10"},
        {"threads", "1"},
        {"output.dir", "out"},
        {"corpus.path", ""},
        {"corpus.format", "(from extension)"},
        {"corpus.preset", "tiny"},
        {"synthetic.total_docs", "(preset)"},
        {"synthetic.categories", "(preset)"},
        {"synthetic.signal_vocab_per_class", "(preset)"},
        {"synthetic.shared_noise_vocab", "(preset)"},
        {"synthetic.signal_rate", "(preset)"},
        {"synthetic.misspelling_rate", "(preset)"},
        {"synthetic.min_length", "(preset)"},
        {"synthetic.max_length", "(preset)"},
        {"experiment.schemes", "binary,tf,ntf,tfidf"},
        {"experiment.classifiers", "rf,nb,svm"},
        {"nb.event_model", "gaussian"},
        {"svm.c", "1.0"},
        {"svm.tolerance", "0.001"},
        {"svm.epsilon", "1e-12"},
        {"svm.standardize", "true"},
        {"rf.n_trees", "10"},
        {"rf.m_try", "0 (floor(log2 V) + 1)"},
        {"rf.max_depth", "0 (unlimited)"},
        {"rf.min_leaf", "1"},
        {"rf.bootstrap", "true"},
        {"keyness.reference_mode", "complement"},
        {"keyness.full_corpus", "false"},
        {"keyness.thresholds", "10,25,50,100,150,200,250,300,350,all"},
        {"sweep.classifier", "svm"},
        {"sweep.scheme", "tfidf"},
        {"keywords.category", "(all)"},
    };
}

}  // namespace vatc
