#pragma once

#include "spikepca/eigencore.hpp"
#include "spikepca/regime.hpp"
#include "spikepca/sampler.hpp"
#include "spikepca/spike_model.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spikepca {

/// Limit of <u1_hat, u1>^2 for a fixed spike lambda1 with d/n -> c:
/// ((lambda1-1)^2 - c)_+ / ((lambda1-1)^2 + c (lambda1-1)).
double nadler_limit(double lambda1, double c);

/// One draw of chi2_n / (chi2_n + c), chi2_n as a sum of n squared normals.
double jung_limit_draw(std::size_t n, double c, std::uint64_t seed);

/// `count` draws from one generator seeded with `seed`.
std::vector<double> jung_limit_draws(std::size_t n, double c, std::size_t count, std::uint64_t seed);

struct BaiYinEdges {
    double largest = 0.0;
    double smallest_nonzero = 0.0;
};

/// ((1 + sqrt c)^2, (1 - sqrt c)^2).
BaiYinEdges bai_yin_edges(double c);

struct HdlssConstants {
    double k_const = 0.0;                 ///< sum of non-spike lambda_j / (n d)
    std::vector<SymMatrix> tier_matrices;  ///< A*_l = n^{-1} sum_{k in H_l} z_k z_k^T, size n x n
};

HdlssConstants hdlss_constants(const Dataset& data, const TierIndex& tiers);

enum class RateQuantity {
    ConsistencyGap,            ///< 1 - |<u_hat_j, u_j>|
    StrongInconsistencyLevel,  ///< |<u_hat_j, u_j>|
    SubspaceGap,               ///< 1 - cos of the angle to the tier span
};

const char* to_string(RateQuantity quantity);

struct RatePrediction {
    RateQuantity quantity = RateQuantity::ConsistencyGap;
    double rate = 0.0;
    Clause clause = Clause::GrowingBoundary;
    bool approximate = false;  ///< d/n -> constant; d/n taken at its finite value

    std::string theorem_case() const { return to_string(clause); }
};

/// Rate for eigen index j (1-based) at finite d, with every symbol evaluated on
/// the finite spectrum and the effective dimension.
RatePrediction predict_rate(const SpectrumSpec& spec, const ScalingLaw& law, std::size_t d, std::size_t j);

}  // namespace spikepca
