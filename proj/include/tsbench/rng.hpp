#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tsbench {

std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit FNV-1a. Used for config hashes and keyed seed derivation.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

/// Child seed for a named stage, e.g. derive_seed(global, "exathlon/app5/iforest/fit").
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);

/// mt19937_64 with distributions implemented here, so draws are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi);

    double normal();

private:
    std::mt19937_64 engine_;
};

} // namespace tsbench
