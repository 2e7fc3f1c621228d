#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spikepca {

/// lambda_1 = d^alpha, all remaining eigenvalues at the base level.
struct SingleSpike {
    double alpha = 0.0;
};

/// lambda_j = c_j d^alpha for j <= m with c_1 > c_2 > ... > c_m > 1.
struct MultiSpike {
    double alpha = 0.0;
    std::vector<double> constants;
};

struct Tier {
    double exponent = 0.0;        ///< eigenvalue order d^exponent
    std::size_t multiplicity = 1;
    double scale = 1.0;           ///< every member equals scale * d^exponent
};

/// Groups of equal eigenvalues with strictly decreasing exponents.
struct Tiered {
    std::vector<Tier> tiers;
};

/// Leading eigenvalues given verbatim; runs of equal values form tiers.
struct Explicit {
    std::vector<double> values;
};

using SpectrumKind = std::variant<SingleSpike, MultiSpike, Tiered, Explicit>;

struct SpectrumSpec {
    SpectrumKind kind = SingleSpike{};
    double base_level = 1.0;
    std::size_t zero_tail = 0;  ///< trailing exact-zero population eigenvalues
};

/// How n follows d. With fixed_n set, gamma is ignored.
struct ScalingLaw {
    double gamma = 0.0;
    std::optional<std::size_t> fixed_n;
    std::vector<std::size_t> d_values;
};

/// 0-based half-open index range [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
    bool operator==(const IndexRange&) const = default;
};

/// Spike tiers H_1..H_r followed by the noise block H_{r+1}. The sets are
/// contiguous, ordered and partition 0..effective_dimension-1; a zero tail,
/// when present, lies beyond the last set.
struct TierIndex {
    std::vector<IndexRange> sets;

    std::size_t spike_tiers() const noexcept { return sets.empty() ? 0 : sets.size() - 1; }
    std::size_t spike_count() const noexcept { return sets.empty() ? 0 : sets.back().begin; }
    const IndexRange& noise() const { return sets.back(); }
    /// Tier (0-based) containing coordinate i; sets.size() if i is in the zero tail.
    std::size_t tier_of(std::size_t i) const noexcept;
};

/// c_j = 2^{m-j+1}.
std::vector<double> default_multi_constants(std::size_t m);

/// Number of eigenvalues above the noise block (m).
std::size_t spike_count(const SpectrumSpec& spec);

/// Throws ValidationError when a structural invariant of the spectrum fails.
void validate(const SpectrumSpec& spec);

std::vector<double> build_spectrum(const SpectrumSpec& spec, std::size_t d);

std::size_t resolve_n(const ScalingLaw& law, std::size_t d);

TierIndex tier_index(const SpectrumSpec& spec, std::size_t d);

/// a_l = max_{k<=l} delta_{k+1}/delta_k with delta_l the first eigenvalue of
/// tier l and delta_{r+1} the first noise eigenvalue.
std::vector<double> gap_ratios(const std::vector<double>& spectrum, const TierIndex& tiers);

std::size_t effective_dimension(const SpectrumSpec& spec, std::size_t d);

std::string describe(const SpectrumSpec& spec);

}  // namespace spikepca
