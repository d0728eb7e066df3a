#pragma once

#include <cstdint>
#include <random>

namespace hdrtk {

/// Seedable generator with a fixed, platform-independent output stream:
/// std::mt19937_64 (fully specified by the standard) with doubles built from
/// the top 53 bits. std::uniform_real_distribution is avoided because its
/// algorithm is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Per-item seed for batch jobs: splitmix64(master + index * golden gamma).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + index * 0x9E3779B97F4A7C15ull);
}

}  // namespace hdrtk
