#pragma once

#include "spikepca/eigencore.hpp"
#include "spikepca/spike_model.hpp"

#include <cstdint>
#include <optional>

namespace spikepca {

/// Zero mean, unit variance, finite fourth moment.
enum class ScoreDistribution { Gaussian, Rademacher, ScaledUniform };

const char* to_string(ScoreDistribution dist);

/// Analytic fourth moment E[z^4].
double fourth_moment(ScoreDistribution dist);

enum class BasisKind { Identity, Haar };

const char* to_string(BasisKind basis);

struct Dataset {
    DataMatrix x;       ///< d x n, X = U Lambda^{1/2} scores
    DataMatrix scores;  ///< d x n; row j is the dual vector for coordinate j
    BasisKind basis = BasisKind::Identity;
    std::optional<Matrix> rotation;  ///< U when basis is Haar
    Vector spectrum;
    std::uint64_t seed = 0;

    Eigen::Index dimension() const noexcept { return x.rows(); }
    Eigen::Index samples() const noexcept { return x.cols(); }

    /// Coordinates of a d-vector in the population eigenbasis (U^T v).
    Vector population_coordinates(const Vector& v) const;
};

/// i.i.d. d x n score matrix, filled observation by observation. Output is a
/// pure function of the arguments.
DataMatrix sample_scores(Eigen::Index d, Eigen::Index n, ScoreDistribution dist, std::uint64_t seed);

/// Haar-distributed orthogonal matrix from the QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
Matrix haar_orthogonal(Eigen::Index d, std::uint64_t seed);

/// Seed of the Haar rotation used for a dataset with the given seed.
std::uint64_t rotation_seed(std::uint64_t dataset_seed);

Dataset synthesize(const SpectrumSpec& spec, const ScalingLaw& law, std::size_t d, ScoreDistribution dist,
                   BasisKind basis, std::uint64_t seed);

/// Builds X from given scores; `rotation` empty means the identity basis.
Dataset synthesize_from_scores(const Vector& spectrum, DataMatrix scores, std::optional<Matrix> rotation,
                               std::uint64_t seed = 0);

}  // namespace spikepca
