#pragma once

#include "spikepca/eigencore.hpp"
#include "spikepca/sampler.hpp"
#include "spikepca/spike_model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace spikepca {

/// |u^T v| clamped to [0, 1]. Both inputs must have norm within 1e-8 of 1.
double abs_inner(const Vector& u, const Vector& v);

struct SubspaceCosine {
    double cos = 0.0;     ///< norm of the projection onto the span
    double cos_sq = 0.0;  ///< sum of squared coordinates on the span
};

/// Cosine of the angle between unit v and span{basis[:, k] : k in h}.
SubspaceCosine subspace_cos(const Vector& v, std::span<const std::size_t> h, const Matrix& basis);
/// Same, in the standard basis.
SubspaceCosine subspace_cos(const Vector& v, std::span<const std::size_t> h);
SubspaceCosine subspace_cos(const Vector& v, const IndexRange& h);

std::vector<double> eigen_ratios(std::span<const double> sample_vals, std::span<const double> pop_vals);

/// Consistency measures of one sample eigenvector against its population
/// counterpart.
struct IndexMeasure {
    std::size_t j = 0;     ///< 1-based eigen index
    std::size_t tier = 0;  ///< 1-based tier holding j (r+1 for the noise block)
    double sample_value = 0.0;
    double population_value = 0.0;
    double eigen_ratio = 0.0;
    double abs_inner = 0.0;
    double inner_sq = 0.0;
    double subspace_cos = 0.0;
    double subspace_cos_sq = 0.0;
};

/// Measures for the requested 1-based indices (each must be <= number of
/// computed eigenpairs) against the dataset's population eigenbasis.
std::vector<IndexMeasure> measure_indices(const Dataset& data, const EigenResult& eig, const TierIndex& tiers,
                                          std::span<const std::size_t> indices);

}  // namespace spikepca
