#pragma once

#include "spikepca/spike_model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace spikepca {

enum class RegimeKind { Consistent, SubspaceConsistent, StronglyInconsistent, Boundary };

struct RegimeLabel {
    RegimeKind kind = RegimeKind::Boundary;
    std::size_t tier = 0;  ///< 1-based; meaningful for SubspaceConsistent only

    bool operator==(const RegimeLabel&) const = default;
};

std::string to_string(const RegimeLabel& label);
/// One-letter glyph for diagrams and compact tables: C, S, I, B.
char glyph(const RegimeLabel& label);

enum class AsymptoticDomain {
    GrowingN,  ///< n ~ d^gamma with gamma > 0
    FixedN,    ///< explicit fixed n, or gamma = 0
};

/// Which limit statement decides a label or rate.
enum class Clause {
    GrowingSpikeLowDim,        ///< d/(n lambda) -> 0 and d/n -> 0
    GrowingSpikeHighDim,       ///< d/(n lambda) -> 0 and d/n -> inf
    GrowingSpikeProportional,  ///< d/(n lambda) -> 0 and d/n -> const (rate approximate)
    GrowingInconsistent,       ///< d/(n lambda) -> inf
    GrowingBoundary,           ///< d/(n lambda) -> const
    GrowingNoiseSubspace,      ///< noise block once every spike tier separates
    FixedSpike,                ///< d/lambda -> 0
    FixedInconsistent,         ///< d/lambda -> inf
    FixedBoundary,             ///< d/lambda -> const
};

const char* to_string(Clause clause);

/// Spike group as the classifier sees it. With fixed n, adjacent groups of the
/// same order merge, since equal-order eigenvalues cannot be separated.
struct RegimeTier {
    IndexRange range;
    double exponent = 0.0;  ///< lambda ~ d^exponent
};

struct IndexRegime {
    std::size_t j = 0;     ///< 1-based
    std::size_t tier = 0;  ///< 1-based into RegimeReport::tiers
    double ratio_exponent = 0.0;  ///< exponent of d/(n lambda_j), or d/lambda_j with fixed n
    RegimeLabel label;
    Clause clause = Clause::GrowingBoundary;
};

struct RegimeReport {
    AsymptoticDomain domain = AsymptoticDomain::GrowingN;
    double gamma = 0.0;
    std::vector<RegimeTier> tiers;
    std::vector<IndexRegime> spikes;
    RegimeLabel noise{RegimeKind::StronglyInconsistent, 0};
    /// True when every spike tier separates with growing n, so the noise
    /// eigenvectors also concentrate on the noise span.
    bool noise_subspace_consistent = false;
};

/// Exponent-symbolic classification; ratios are compared by the sign of the
/// power of d they carry. Explicit spectra are rejected (UnsupportedSpec).
RegimeReport classify(const SpectrumSpec& spec, const ScalingLaw& law);

/// The single-spike (or index-1) label per (alpha, gamma) node, rows ordered by
/// gamma descending and columns by alpha ascending. The template's alpha is
/// replaced at each node; fixed_n is never set.
std::vector<std::vector<RegimeLabel>> region_grid(const std::vector<double>& alpha_values,
                                                  const std::vector<double>& gamma_values,
                                                  const SpectrumSpec& spec_template);

/// Copy of `spec` with its spike exponent(s) set to alpha (Tiered: the first
/// tier's exponent).
SpectrumSpec with_alpha(const SpectrumSpec& spec, double alpha);

inline constexpr double kExponentTolerance = 1e-12;

}  // namespace spikepca
