#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace spikepca {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Counter-based generator: the k-th output is mix64(seed + (k+1)*gamma), so
/// a stream is fully determined by its seed and position. Value semantics;
/// copies continue independently from the same position.
///
/// Satisfies UniformRandomBitGenerator. Gaussian variates use Box-Muller with
/// our own uniform mapping so output does not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    /// Independent child stream keyed by `stream`.
    constexpr Rng split(std::uint64_t stream) const noexcept {
        return Rng(mix64(state_ ^ mix64(stream + kGoldenGamma)));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_zero() noexcept {
        return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
    }

    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform_open_zero()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double rademacher() noexcept { return ((*this)() >> 63) != 0 ? 1.0 : -1.0; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace spikepca
