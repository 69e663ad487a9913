#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vatc {

std::uint64_t fnv1a64(std::string_view bytes);

/// Incremental FNV-1a digest used for config, corpus, fold-plan and
/// fitted-statistics fingerprints. Not cryptographic.
class Digest {
public:
    Digest& update(std::string_view bytes);
    Digest& update(std::uint64_t value);
    /// Hashes the exact bit pattern.
    Digest& update(double value);

    std::uint64_t value() const { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xCBF29CE484222325ULL;
};

std::string to_hex(std::uint64_t value);

}  // namespace vatc
