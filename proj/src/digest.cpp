#include "vatc/digest.hpp"

#include <bit>
#include <cstdio>

namespace vatc {

namespace {
constexpr std::uint64_t kPrime = 0x100000001B3ULL;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    return Digest{}.update(bytes).value();
}

Digest& Digest::update(std::string_view bytes) {
    for (unsigned char c : bytes) {
        state_ ^= c;
        state_ *= kPrime;
    }
    return *this;
}

Digest& Digest::update(std::uint64_t value) {
    for (int i = 0; i < 8; ++i) {
        state_ ^= (value >> (8 * i)) & 0xFF;
        state_ *= kPrime;
    }
    return *this;
}

Digest& Digest::update(double value) {
    return update(std::bit_cast<std::uint64_t>(value));
}

std::string Digest::hex() const { return to_hex(state_); }

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace vatc
