#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "vatc/error.hpp"
#include "vatc/synthetic.hpp"

using namespace vatc;

TEST_CASE("largest remainder apportionment") {
    CHECK(apportion(100, {1, 1, 1, 1, 1}) == std::vector<std::size_t>{20, 20, 20, 20, 20});
    CHECK(apportion(10, {1, 1, 1}) == std::vector<std::size_t>{4, 3, 3});
    CHECK(apportion(7, {0.5, 0.25, 0.25}) == std::vector<std::size_t>{3, 2, 2});
    const std::vector<double> w = {2005, 801, 998, 1376, 1227};
    CHECK(apportion(6407, w) == std::vector<std::size_t>{2005, 801, 998, 1376, 1227});
    for (std::size_t total : {1u, 13u, 999u, 1000u}) {
        auto counts = apportion(total, w);
        CHECK(std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == total);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double exact = total * w[i] / 6407.0;
            CHECK(std::abs(static_cast<double>(counts[i]) - exact) < 1.0);
        }
    }
}

TEST_CASE("tiny preset gives 20 documents per class") {
    auto corpus = generate_synthetic_corpus(synthetic_preset("tiny"));
    CHECK(corpus.documents.size() == 100);
    CHECK(corpus.categories.size() == 5);
    for (auto n : corpus.category_counts()) CHECK(n == 20);
}

TEST_CASE("table2 preset reproduces the reference class counts") {
    auto spec = synthetic_preset("table2");
    spec.min_length = 3;
    spec.max_length = 5;
    auto corpus = generate_synthetic_corpus(spec);
    CHECK(corpus.documents.size() == 6407);
    const auto counts = corpus.category_counts();
    for (const auto& [name, expected] : reference_category_counts())
        CHECK(counts[static_cast<std::size_t>(corpus.category_index(name))] == expected);
}

TEST_CASE("generation is deterministic and seed dependent") {
    auto spec = synthetic_preset("tiny");
    auto a = generate_synthetic_corpus(spec);
    auto b = generate_synthetic_corpus(spec);
    CHECK(a == b);
    std::ostringstream sa, sb;
    write_corpus(sa, a, CorpusFormat::jsonl);
    write_corpus(sb, b, CorpusFormat::jsonl);
    CHECK(sa.str() == sb.str());
    spec.seed += 1;
    CHECK_FALSE(generate_synthetic_corpus(spec) == a);
}

TEST_CASE("documents respect length bounds and unique ids") {
    auto spec = synthetic_preset("tiny");
    auto corpus = generate_synthetic_corpus(spec);
    std::set<std::string> ids;
    for (const auto& d : corpus.documents) {
        ids.insert(d.id);
        const auto n = tokenize(d.text).size();
        CHECK(n >= spec.min_length);
        CHECK(n <= spec.max_length);
        CHECK(d.label.has_value());
    }
    CHECK(ids.size() == corpus.documents.size());
}

TEST_CASE("signal vocabularies are disjoint from each other and from noise") {
    auto spec = synthetic_preset("desk");
    auto vocab = make_synthetic_vocabulary(spec);
    std::set<std::string> seen(vocab.noise.begin(), vocab.noise.end());
    CHECK(seen.size() == spec.shared_noise_vocab);
    for (const auto& words : vocab.signal) {
        CHECK(words.size() == spec.signal_vocab_per_class);
        for (const auto& w : words) CHECK(seen.insert(w).second);
    }
}

TEST_CASE("noisy preset is mostly class independent noise") {
    auto spec = synthetic_preset("noisy");
    CHECK(spec.signal_rate <= 0.5);
    CHECK(spec.shared_noise_vocab >= spec.signal_vocab_per_class * spec.category_weights.size());
}

TEST_CASE("misspell makes exactly one edit") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        CounterRng rng(s);
        const std::string word = "convulsion";
        const auto out = misspell(word, rng);
        const auto diff = static_cast<long>(out.size()) - static_cast<long>(word.size());
        CHECK(std::abs(diff) <= 1);
    }
}

TEST_CASE("infeasible specs are rejected") {
    auto spec = synthetic_preset("tiny");
    spec.total_docs = 3;
    CHECK_THROWS_AS(generate_synthetic_corpus(spec), Error);
    spec = synthetic_preset("tiny");
    spec.min_length = 50;
    spec.max_length = 10;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec = synthetic_preset("tiny");
    spec.misspelling_rate = 1.5;
    CHECK_THROWS_AS(spec.validate(), Error);
    CHECK_THROWS_AS(synthetic_preset("huge"), Error);
}
