#pragma once

// Counter-based deterministic RNG. Every stream is keyed by the run seed
// plus a label (generator name, stimulus id), so per-stimulus streams do
// not depend on iteration order. SplitMix64 core.

#include <cmath>
#include <cstdint>
#include <string_view>

namespace neva {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_label(std::uint64_t key, std::string_view label) {
    for (unsigned char c : label) key = splitmix64(key ^ c);
    return key;
}

}  // namespace detail

class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(detail::splitmix64(seed)) {}

    // Independent stream for a named sub-task.
    Rng derive(std::string_view label) const {
        Rng r(detail::mix_label(key_, label));
        return r;
    }

    std::uint64_t next_u64() { return detail::splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, 1] excluding exact 0 (safe for logs and powers).
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    // Standard normal, Box-Muller.
    double normal() {
        double u1 = uniform_pos();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace neva
