#pragma once

#include <cstdint>
#include <random>

namespace iwf {

/// Deterministic RNG used by the schedulers and perturbation layer.
/// All draws go through explicit helpers so that streams are reproducible
/// bit-for-bit for a given seed, independent of standard-library
/// distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    /// Uniform integer in [lo, hi], inclusive. Always consumes one draw.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(eng_() % span);
    }

    bool bernoulli(double p) { return u01() < p; }

private:
    std::mt19937_64 eng_;
};

} // namespace iwf
