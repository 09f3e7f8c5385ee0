#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace sigmalab {

/// Counter-based generator: draw i of stream s under seed k is
///   mix64(key(k, s) + (i + 1) * 0x9E3779B97F4A7C15)
/// with the SplitMix64 finalizer as mix64 and key(k, s) = mix64(k ^ mix64(s + 1)).
/// Each Monte Carlo path owns one stream, so results do not depend on thread scheduling.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream + 1))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Exponential with the given rate by inversion.
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    /// Standard normal by Box-Muller (one value per call).
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::uint64_t counter() const { return counter_; }

    static constexpr std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace sigmalab
