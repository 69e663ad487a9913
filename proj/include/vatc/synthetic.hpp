#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vatc/corpus.hpp"
#include "vatc/rng.hpp"

namespace vatc {

/// Parameters of the synthetic narrative generator. Each document draws its
/// tokens from its class's signal vocabulary with probability `signal_rate`
/// and from a shared, class-independent noise vocabulary otherwise; both
/// vocabularies are Zipf-distributed. A token is then misspelled by one
/// character edit with probability `misspelling_rate`.
struct SyntheticSpec {
    std::size_t total_docs = 100;
    std::vector<std::pair<CategoryId, double>> category_weights;
    std::size_t signal_vocab_per_class = 40;
    std::size_t shared_noise_vocab = 300;
    double signal_rate = 0.5;
    double misspelling_rate = 0.02;
    std::size_t min_length = 15;
    std::size_t max_length = 40;
    std::uint64_t seed = 1;

    void validate() const;
};

/// The five high-level cause-of-death categories and their document counts
/// in the 6407-document reference dataset.
const std::vector<std::pair<CategoryId, std::size_t>>& reference_category_counts();

/// Named presets: tiny, desk, noisy, table2.
SyntheticSpec synthetic_preset(std::string_view name);
std::vector<std::string> synthetic_preset_names();

/// Largest-remainder apportionment of `total` over `weights`; ties go to
/// the earlier entry.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& weights);

struct SyntheticVocabulary {
    std::vector<std::vector<std::string>> signal;  // per category, spec order
    std::vector<std::string> noise;
};

SyntheticVocabulary make_synthetic_vocabulary(const SyntheticSpec& spec);

Corpus generate_synthetic_corpus(const SyntheticSpec& spec);

/// Single-character edit (substitute, delete, insert or transpose).
std::string misspell(std::string_view word, CounterRng& rng);

/// key = value echo of a spec, one field per line.
std::string describe(const SyntheticSpec& spec);

}  // namespace vatc
