#include "spikepca/sampler.hpp"
#include "spikepca/error.hpp"
#include "spikepca/rng.hpp"

#include <cmath>

namespace spikepca {

const char* to_string(ScoreDistribution dist) {
    switch (dist) {
        case ScoreDistribution::Gaussian: return "gaussian";
        case ScoreDistribution::Rademacher: return "rademacher";
        case ScoreDistribution::ScaledUniform: return "scaled_uniform";
    }
    return "?";
}

double fourth_moment(ScoreDistribution dist) {
    switch (dist) {
        case ScoreDistribution::Gaussian: return 3.0;
        case ScoreDistribution::Rademacher: return 1.0;
        case ScoreDistribution::ScaledUniform: return 1.8;
    }
    return 0.0;
}

const char* to_string(BasisKind basis) { return basis == BasisKind::Identity ? "identity" : "haar"; }

Vector Dataset::population_coordinates(const Vector& v) const {
    if (rotation) return rotation->transpose() * v;
    return v;
}

DataMatrix sample_scores(Eigen::Index d, Eigen::Index n, ScoreDistribution dist, std::uint64_t seed) {
    if (d < 1 || n < 1) throw Error(ErrorKind::DimensionMismatch, "score matrix needs d, n >= 1");
    Rng rng(seed);
    DataMatrix z(d, n);
    double* data = z.data();
    const Eigen::Index total = d * n;
    switch (dist) {
        case ScoreDistribution::Gaussian:
            for (Eigen::Index k = 0; k < total; ++k) data[k] = rng.normal();
            break;
        case ScoreDistribution::Rademacher:
            for (Eigen::Index k = 0; k < total; ++k) data[k] = rng.rademacher();
            break;
        case ScoreDistribution::ScaledUniform: {
            const double root3 = std::sqrt(3.0);
            for (Eigen::Index k = 0; k < total; ++k) data[k] = root3 * (2.0 * rng.uniform() - 1.0);
            break;
        }
    }
    return z;
}

Matrix haar_orthogonal(Eigen::Index d, std::uint64_t seed) {
    const Matrix g = sample_scores(d, d, ScoreDistribution::Gaussian, seed);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < d; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

std::uint64_t rotation_seed(std::uint64_t dataset_seed) { return mix64(dataset_seed ^ 0x6A09E667F3BCC909ULL); }

Dataset synthesize_from_scores(const Vector& spectrum, DataMatrix scores, std::optional<Matrix> rotation,
                               std::uint64_t seed) {
    if (spectrum.size() != scores.rows())
        throw Error(ErrorKind::DimensionMismatch, "spectrum length differs from score rows");
    Dataset ds;
    ds.spectrum = spectrum;
    ds.seed = seed;
    ds.x = spectrum.cwiseSqrt().asDiagonal() * scores;
    if (rotation) {
        if (rotation->rows() != scores.rows() || rotation->cols() != scores.rows())
            throw Error(ErrorKind::DimensionMismatch, "rotation must be d x d");
        ds.x = (*rotation) * ds.x;
        ds.basis = BasisKind::Haar;
    }
    ds.rotation = std::move(rotation);
    ds.scores = std::move(scores);
    return ds;
}

Dataset synthesize(const SpectrumSpec& spec, const ScalingLaw& law, std::size_t d, ScoreDistribution dist,
                   BasisKind basis, std::uint64_t seed) {
    const std::vector<double> values = build_spectrum(spec, d);
    const std::size_t n = resolve_n(law, d);
    const Eigen::Index dd = static_cast<Eigen::Index>(d);
    Vector spectrum = Eigen::Map<const Vector>(values.data(), dd);
    DataMatrix scores = sample_scores(dd, static_cast<Eigen::Index>(n), dist, seed);
    std::optional<Matrix> rotation;
    if (basis == BasisKind::Haar) rotation = haar_orthogonal(dd, rotation_seed(seed));
    return synthesize_from_scores(spectrum, std::move(scores), std::move(rotation), seed);
}

}  // namespace spikepca
