#include "spikepca/metrics.hpp"
#include "spikepca/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spikepca {

namespace {

void require_unit(const Vector& v, const char* name) {
    const double norm = v.norm();
    if (!(std::abs(norm - 1.0) <= 1e-8))
        throw Error(ErrorKind::NotUnit, std::string(name) + " has norm " + std::to_string(norm));
}

SubspaceCosine from_squared(double sq) {
    sq = std::clamp(sq, 0.0, 1.0);
    return {std::sqrt(sq), sq};
}

}  // namespace

double abs_inner(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
    require_unit(u, "u");
    require_unit(v, "v");
    return std::min(1.0, std::abs(u.dot(v)));
}

SubspaceCosine subspace_cos(const Vector& v, std::span<const std::size_t> h, const Matrix& basis) {
    if (h.empty()) throw Error(ErrorKind::EmptyIndexSet, "subspace index set is empty");
    if (basis.rows() != v.size()) throw Error(ErrorKind::DimensionMismatch, "basis rows differ from vector length");
    require_unit(v, "v");
    double sq = 0.0;
    for (std::size_t k : h) {
        if (k >= static_cast<std::size_t>(basis.cols()))
            throw Error(ErrorKind::DimensionMismatch, "subspace index " + std::to_string(k) + " out of range");
        const double c = basis.col(static_cast<Eigen::Index>(k)).dot(v);
        sq += c * c;
    }
    return from_squared(sq);
}

SubspaceCosine subspace_cos(const Vector& v, std::span<const std::size_t> h) {
    if (h.empty()) throw Error(ErrorKind::EmptyIndexSet, "subspace index set is empty");
    require_unit(v, "v");
    double sq = 0.0;
    for (std::size_t k : h) {
        if (k >= static_cast<std::size_t>(v.size()))
            throw Error(ErrorKind::DimensionMismatch, "subspace index " + std::to_string(k) + " out of range");
        sq += v[static_cast<Eigen::Index>(k)] * v[static_cast<Eigen::Index>(k)];
    }
    return from_squared(sq);
}

SubspaceCosine subspace_cos(const Vector& v, const IndexRange& h) {
    if (h.size() == 0) throw Error(ErrorKind::EmptyIndexSet, "subspace index set is empty");
    if (h.end > static_cast<std::size_t>(v.size())) throw Error(ErrorKind::DimensionMismatch, "range exceeds vector");
    require_unit(v, "v");
    return from_squared(v.segment(static_cast<Eigen::Index>(h.begin), static_cast<Eigen::Index>(h.size())).squaredNorm());
}

std::vector<double> eigen_ratios(std::span<const double> sample_vals, std::span<const double> pop_vals) {
    if (sample_vals.size() != pop_vals.size()) throw Error(ErrorKind::DimensionMismatch, "eigenvalue vectors differ in length");
    std::vector<double> out(sample_vals.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (pop_vals[j] == 0.0)
            throw Error(ErrorKind::ZeroDivision, "population eigenvalue " + std::to_string(j + 1) + " is zero");
        out[j] = sample_vals[j] / pop_vals[j];
    }
    return out;
}

std::vector<IndexMeasure> measure_indices(const Dataset& data, const EigenResult& eig, const TierIndex& tiers,
                                          std::span<const std::size_t> indices) {
    std::vector<IndexMeasure> out;
    out.reserve(indices.size());
    for (std::size_t j : indices) {
        if (j < 1 || j > static_cast<std::size_t>(eig.vectors.cols()))
            throw Error(ErrorKind::DimensionMismatch, "eigen index " + std::to_string(j) + " not computed");
        const Eigen::Index col = static_cast<Eigen::Index>(j - 1);
        const Vector coords = data.population_coordinates(eig.vectors.col(col));

        IndexMeasure m;
        m.j = j;
        const std::size_t tier = tiers.tier_of(j - 1);
        m.tier = tier + 1;
        m.sample_value = eig.values[col];
        m.population_value = data.spectrum[col];
        m.eigen_ratio = eigen_ratios(std::span(&m.sample_value, 1), std::span(&m.population_value, 1))[0];
        m.abs_inner = std::min(1.0, std::abs(coords[col]));
        m.inner_sq = m.abs_inner * m.abs_inner;
        if (tier < tiers.sets.size()) {
            const SubspaceCosine sc = subspace_cos(coords / coords.norm(), tiers.sets[tier]);
            m.subspace_cos = sc.cos;
            m.subspace_cos_sq = sc.cos_sq;
        }
        out.push_back(m);
    }
    return out;
}

}  // namespace spikepca
