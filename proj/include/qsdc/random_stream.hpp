#pragma once

#include <cstdint>
#include <random>

namespace qsdc {

/// Deterministic random source injected into every sampling operation.
///
/// Uniform doubles are built directly from the 64-bit engine output so that a
/// given seed produces the same stream on every standard library.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream number `counter` split off a master seed.
    static RandomStream derive(std::uint64_t master_seed, std::uint64_t counter);

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace qsdc
