#pragma once

#include <cstdint>
#include <random>

namespace smean {

/// Deterministic uniform double generator. std::uniform_real_distribution is
/// implementation-defined, so doubles are derived from raw mt19937_64 output
/// directly; the stream is bit-identical on every platform for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace smean
