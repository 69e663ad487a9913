#include "vatc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "vatc/error.hpp"
#include "vatc/rng.hpp"

namespace vatc {

void SyntheticSpec::validate() const {
    if (total_docs == 0) throw Error("synthetic spec: total_docs must be positive");
    if (category_weights.size() < 2) throw Error("synthetic spec: need at least 2 categories");
    double sum = 0.0;
    std::unordered_set<std::string_view> names;
    for (const auto& [name, w] : category_weights) {
        if (name.empty()) throw Error("synthetic spec: empty category name");
        if (!names.insert(name).second) throw Error("synthetic spec: duplicate category '" + name + "'");
        if (!(w > 0.0) || !std::isfinite(w))
            throw Error("synthetic spec: weight of '" + name + "' must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("synthetic spec: category weights must sum to 1");
    if (signal_vocab_per_class == 0) throw Error("synthetic spec: signal_vocab_per_class must be positive");
    if (shared_noise_vocab == 0 && signal_rate < 1.0)
        throw Error("synthetic spec: shared_noise_vocab must be positive when signal_rate < 1");
    if (!(signal_rate >= 0.0 && signal_rate <= 1.0)) throw Error("synthetic spec: signal_rate outside [0,1]");
    if (!(misspelling_rate >= 0.0 && misspelling_rate <= 1.0))
        throw Error("synthetic spec: misspelling_rate outside [0,1]");
    if (min_length > max_length) throw Error("synthetic spec: min_length > max_length");
}

const std::vector<std::pair<CategoryId, std::size_t>>& reference_category_counts() {
    static const std::vector<std::pair<CategoryId, std::size_t>> counts = {
        {"Neonatal", 2005},
        {"Non_stillbirth_unknown_cause", 801},
        {"Intrapartum_still_birth", 998},
        {"Antepartum_stillbirth", 1376},
        {"PostNeonatal", 1227},
    };
    return counts;
}

namespace {

std::vector<std::pair<CategoryId, double>> reference_weights() {
    std::size_t total = 0;
    for (const auto& [_, n] : reference_category_counts()) total += n;
    std::vector<std::pair<CategoryId, double>> w;
    for (const auto& [name, n] : reference_category_counts())
        w.emplace_back(name, static_cast<double>(n) / static_cast<double>(total));
    return w;
}

std::vector<std::pair<CategoryId, double>> uniform_weights() {
    std::vector<std::pair<CategoryId, double>> w;
    for (const auto& [name, _] : reference_category_counts()) w.emplace_back(name, 0.2);
    return w;
}

}  // namespace

SyntheticSpec synthetic_preset(std::string_view name) {
    SyntheticSpec s;
    if (name == "tiny") {
        s.total_docs = 100;
        s.category_weights = uniform_weights();
        s.signal_vocab_per_class = 40;
        s.shared_noise_vocab = 300;
        s.signal_rate = 0.5;
        s.misspelling_rate = 0.02;
        s.min_length = 15;
        s.max_length = 40;
    } else if (name == "desk") {
        s.total_docs = 1000;
        s.category_weights = reference_weights();
        s.signal_vocab_per_class = 120;
        s.shared_noise_vocab = 1500;
        s.signal_rate = 0.3;
        s.misspelling_rate = 0.03;
        s.min_length = 20;
        s.max_length = 60;
    } else if (name == "noisy") {
        s.total_docs = 1000;
        s.category_weights = reference_weights();
        s.signal_vocab_per_class = 120;
        s.shared_noise_vocab = 3000;
        s.signal_rate = 0.15;
        s.misspelling_rate = 0.05;
        s.min_length = 20;
        s.max_length = 60;
    } else if (name == "table2") {
        s.total_docs = 6407;
        s.category_weights = reference_weights();
        s.signal_vocab_per_class = 200;
        s.shared_noise_vocab = 4000;
        s.signal_rate = 0.25;
        s.misspelling_rate = 0.03;
        s.min_length = 30;
        s.max_length = 120;
    } else {
        throw ConfigError("unknown synthetic preset '" + std::string(name) +
                          "' (expected tiny, desk, noisy or table2)");
    }
    return s;
}

std::vector<std::string> synthetic_preset_names() { return {"tiny", "desk", "noisy", "table2"}; }

std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& weights) {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> counts(weights.size());
    std::vector<double> remainder(weights.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double quota = static_cast<double>(total) * weights[i] / sum;
        // Absorb representation error so exact integer quotas are not floored down.
        double floor_q = std::floor(quota + 1e-9);
        counts[i] = static_cast<std::size_t>(floor_q);
        remainder[i] = quota - floor_q;
        assigned += counts[i];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[order[k % order.size()]];
    return counts;
}

namespace {

// Common narrative words seeded into the head of the noise vocabulary so
// that stop-word-like, class-independent terms dominate token counts.
constexpr const char* kCommonWords[] = {
    "the", "and", "was", "she", "he", "had", "of", "to", "a", "in", "at", "after", "before",
    "baby", "mother", "child", "hospital", "days", "born", "said", "her", "his", "it", "on",
    "for", "with", "they", "when", "then", "not", "died", "home", "night", "morning", "took",
};

std::string make_word(CounterRng& rng) {
    static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "h", "k", "l", "m", "n", "p",
                                              "r", "s", "t", "v", "w", "z", "ch", "sh", "tr", "kw"};
    static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
    std::string word;
    std::size_t syllables = 2 + static_cast<std::size_t>(rng.below(3));
    for (std::size_t s = 0; s < syllables; ++s) {
        word += kOnsets[rng.below(std::size(kOnsets))];
        word += kVowels[rng.below(std::size(kVowels))];
    }
    if (rng.bernoulli(0.3)) word += "n";
    return word;
}

class ZipfSampler {
public:
    explicit ZipfSampler(std::size_t n) : cdf_(n) {
        double acc = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            acc += 1.0 / static_cast<double>(r + 1);
            cdf_[r] = acc;
        }
    }
    std::size_t sample(CounterRng& rng) const {
        double u = rng.uniform() * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
    }

private:
    std::vector<double> cdf_;
};

}  // namespace

std::string misspell(std::string_view word, CounterRng& rng) {
    std::string out(word);
    auto letter = [&] { return static_cast<char>('a' + rng.below(26)); };
    std::uint64_t op = rng.below(4);
    if (out.size() < 2 && (op == 1 || op == 3)) op = 0;
    if (out.empty()) return std::string(1, letter());
    switch (op) {
        case 0: {
            auto pos = rng.below(out.size());
            char c = letter();
            if (c == out[pos]) c = c == 'z' ? 'a' : static_cast<char>(c + 1);
            out[pos] = c;
            break;
        }
        case 1: out.erase(rng.below(out.size()), 1); break;
        case 2: out.insert(out.begin() + static_cast<std::ptrdiff_t>(rng.below(out.size() + 1)), letter()); break;
        default: {
            auto pos = rng.below(out.size() - 1);
            std::swap(out[pos], out[pos + 1]);
            break;
        }
    }
    return out;
}

SyntheticVocabulary make_synthetic_vocabulary(const SyntheticSpec& spec) {
    CounterRng rng(derive_seed(spec.seed, "vocabulary"));
    std::unordered_set<std::string> used;
    SyntheticVocabulary vocab;
    for (const char* w : kCommonWords) {
        if (vocab.noise.size() == spec.shared_noise_vocab) break;
        vocab.noise.emplace_back(w);
        used.insert(w);
    }
    auto fresh = [&] {
        for (;;) {
            std::string w = make_word(rng);
            if (used.insert(w).second) return w;
        }
    };
    while (vocab.noise.size() < spec.shared_noise_vocab) vocab.noise.push_back(fresh());
    vocab.signal.resize(spec.category_weights.size());
    for (auto& words : vocab.signal)
        for (std::size_t i = 0; i < spec.signal_vocab_per_class; ++i) words.push_back(fresh());
    return vocab;
}

Corpus generate_synthetic_corpus(const SyntheticSpec& spec) {
    spec.validate();
    std::vector<double> weights;
    for (const auto& [_, w] : spec.category_weights) weights.push_back(w);
    const auto counts = apportion(spec.total_docs, weights);
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] == 0)
            throw Error("synthetic spec is infeasible: category '" + spec.category_weights[c].first +
                        "' is apportioned 0 documents");

    const auto vocab = make_synthetic_vocabulary(spec);
    const ZipfSampler signal_sampler(spec.signal_vocab_per_class);
    const ZipfSampler noise_sampler(std::max<std::size_t>(spec.shared_noise_vocab, 1));

    std::vector<std::size_t> doc_class;
    for (std::size_t c = 0; c < counts.size(); ++c) doc_class.insert(doc_class.end(), counts[c], c);
    CounterRng order_rng(derive_seed(spec.seed, "order"));
    order_rng.shuffle(std::span(doc_class));

    std::vector<Document> docs;
    docs.reserve(spec.total_docs);
    for (std::size_t d = 0; d < doc_class.size(); ++d) {
        const std::size_t c = doc_class[d];
        CounterRng rng(derive_seed(spec.seed, "document", d));
        const std::size_t length =
            spec.min_length + static_cast<std::size_t>(rng.below(spec.max_length - spec.min_length + 1));
        std::string text;
        for (std::size_t t = 0; t < length; ++t) {
            std::string word = rng.bernoulli(spec.signal_rate)
                                   ? vocab.signal[c][signal_sampler.sample(rng)]
                                   : vocab.noise[noise_sampler.sample(rng)];
            if (rng.bernoulli(spec.misspelling_rate)) word = misspell(word, rng);
            if (t == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
            else text += ' ';
            text += word;
        }
        if (!text.empty()) text += '.';
        char id[32];
        std::snprintf(id, sizeof id, "va%05zu", d + 1);
        docs.push_back({id, std::move(text), spec.category_weights[c].first});
    }
    return Corpus::from_documents(std::move(docs));
}

std::string describe(const SyntheticSpec& spec) {
    std::ostringstream out;
    out.precision(17);
    out << "total_docs = " << spec.total_docs << '\n';
    out << "categories = ";
    for (std::size_t i = 0; i < spec.category_weights.size(); ++i)
        out << (i ? "," : "") << spec.category_weights[i].first << ':' << spec.category_weights[i].second;
    out << '\n';
    out << "signal_vocab_per_class = " << spec.signal_vocab_per_class << '\n';
    out << "shared_noise_vocab = " << spec.shared_noise_vocab << '\n';
    out << "signal_rate = " << spec.signal_rate << '\n';
    out << "misspelling_rate = " << spec.misspelling_rate << '\n';
    out << "min_length = " << spec.min_length << '\n';
    out << "max_length = " << spec.max_length << '\n';
    out << "seed = " << spec.seed << '\n';
    return out.str();
}

}  // namespace vatc
