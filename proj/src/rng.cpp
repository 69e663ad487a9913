#include "vatc/rng.hpp"

#include <stdexcept>

#include "vatc/digest.hpp"

namespace vatc {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    return mix64(seed ^ mix64(fnv1a64(label)));
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index) {
    return mix64(derive_seed(seed, label) + (index + 1) * kGamma);
}

std::uint64_t CounterRng::next() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double CounterRng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("CounterRng::below: bound must be positive");
    // Rejection keeps the reduction unbiased.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

}  // namespace vatc
