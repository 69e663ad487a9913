#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace vatc {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a parent seed and a component label.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index);

/// Counter-based generator: the n-th draw is mix64(key + n * golden_gamma).
/// Every draw is a pure function of (key, n), so sequences are identical on
/// every platform and compiler. Range reduction and shuffling are done here
/// rather than through <random> distributions, whose output is
/// implementation-defined.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(mix64(seed)) {}

    std::uint64_t next();
    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform();
    /// Uniform integer in [0, bound); bound must be > 0.
    std::uint64_t below(std::uint64_t bound);
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t counter() const { return counter_; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace vatc
