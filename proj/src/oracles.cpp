#include "spikepca/oracles.hpp"
#include "spikepca/error.hpp"
#include "spikepca/rng.hpp"

#include <algorithm>
#include <cmath>

namespace spikepca {

double nadler_limit(double lambda1, double c) {
    if (!(std::isfinite(lambda1) && lambda1 > 1.0))
        throw Error(ErrorKind::DomainError, "nadler_limit needs lambda1 > 1");
    if (!(std::isfinite(c) && c >= 0.0)) throw Error(ErrorKind::DomainError, "nadler_limit needs c >= 0");
    const double g = lambda1 - 1.0;
    const double num = std::max(0.0, g * g - c);
    return num / (g * g + c * g);
}

namespace {

double jung_draw(Rng& rng, std::size_t n, double c) {
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rng.normal();
        chi2 += z * z;
    }
    if (c == 0.0) return 1.0;
    return chi2 / (chi2 + c);
}

void check_jung(std::size_t n, double c) {
    if (n < 1) throw Error(ErrorKind::DomainError, "jung draws need n >= 1");
    if (!(std::isfinite(c) && c >= 0.0)) throw Error(ErrorKind::DomainError, "jung draws need c >= 0");
}

}  // namespace

double jung_limit_draw(std::size_t n, double c, std::uint64_t seed) {
    check_jung(n, c);
    Rng rng(seed);
    return jung_draw(rng, n, c);
}

std::vector<double> jung_limit_draws(std::size_t n, double c, std::size_t count, std::uint64_t seed) {
    check_jung(n, c);
    Rng rng(seed);
    std::vector<double> out(count);
    for (auto& v : out) v = jung_draw(rng, n, c);
    return out;
}

BaiYinEdges bai_yin_edges(double c) {
    if (!(std::isfinite(c) && c >= 0.0)) throw Error(ErrorKind::DomainError, "bai_yin_edges needs c >= 0");
    const double s = std::sqrt(c);
    return {(1.0 + s) * (1.0 + s), (1.0 - s) * (1.0 - s)};
}

HdlssConstants hdlss_constants(const Dataset& data, const TierIndex& tiers) {
    const Eigen::Index d = data.dimension();
    const Eigen::Index n = data.samples();
    if (data.scores.size() == 0 || data.scores.rows() != d || data.scores.cols() != n)
        throw Error(ErrorKind::MissingScores, "dataset carries no score matrix");
    if (tiers.sets.empty()) throw Error(ErrorKind::EmptyIndexSet, "tier index is empty");

    HdlssConstants out;
    const std::size_t m = tiers.spike_count();
    double mass = 0.0;
    for (Eigen::Index j = static_cast<Eigen::Index>(m); j < data.spectrum.size(); ++j) mass += data.spectrum(j);
    out.k_const = mass / (static_cast<double>(n) * static_cast<double>(d));

    for (std::size_t l = 0; l < tiers.spike_tiers(); ++l) {
        const IndexRange& h = tiers.sets[l];
        const auto rows = data.scores.middleRows(static_cast<Eigen::Index>(h.begin), static_cast<Eigen::Index>(h.size()));
        Matrix a = Matrix::Zero(n, n);
        a.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose(), 1.0 / static_cast<double>(n));
        a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
        out.tier_matrices.emplace_back(a);
    }
    return out;
}

const char* to_string(RateQuantity quantity) {
    switch (quantity) {
        case RateQuantity::ConsistencyGap: return "ConsistencyGap";
        case RateQuantity::StrongInconsistencyLevel: return "StrongInconsistencyLevel";
        case RateQuantity::SubspaceGap: return "SubspaceGap";
    }
    return "?";
}

RatePrediction predict_rate(const SpectrumSpec& spec, const ScalingLaw& law, std::size_t d, std::size_t j) {
    const RegimeReport rep = classify(spec, law);
    const std::vector<double> lambda = build_spectrum(spec, d);
    const double n = static_cast<double>(resolve_n(law, d));
    const double d1 = static_cast<double>(effective_dimension(spec, d));
    const std::size_t m = spike_count(spec);
    if (j < 1 || j > effective_dimension(spec, d))
        throw Error(ErrorKind::DomainError, "index j must lie in 1..effective dimension");
    const bool fixed = rep.domain == AsymptoticDomain::FixedN;

    // Gap ratios over the classifier's tiers (merged for fixed n).
    TierIndex ti;
    for (const auto& t : rep.tiers) ti.sets.push_back(t.range);
    ti.sets.push_back({m, static_cast<std::size_t>(d1)});
    const std::vector<double> a = gap_ratios(lambda, ti);

    RatePrediction out;
    const auto separated = [&](std::size_t l, double value) {
        if (fixed) return std::sqrt(std::max(a[l], d1 / value));
        if (rep.gamma > 1.0 + kExponentTolerance) return std::sqrt(std::max(a[l], 1.0 / value));
        return std::sqrt(std::max(a[l], d1 / (n * value)));
    };
    const auto level = [&](double value) { return fixed ? std::sqrt(value / d1) : std::sqrt(n * value / d1); };

    if (j <= m) {
        const IndexRegime& s = rep.spikes[j - 1];
        const std::size_t l = s.tier - 1;
        out.clause = s.clause;
        out.approximate = s.clause == Clause::GrowingSpikeProportional;
        switch (s.label.kind) {
            case RegimeKind::Boundary:
                throw Error(ErrorKind::BoundaryCase, std::string("index ") + std::to_string(j) + " sits on " +
                                                         to_string(s.clause) + "; no rate is asserted");
            case RegimeKind::Consistent:
                out.quantity = RateQuantity::ConsistencyGap;
                out.rate = separated(l, lambda[j - 1]);
                break;
            case RegimeKind::SubspaceConsistent:
                out.quantity = RateQuantity::SubspaceGap;
                out.rate = separated(l, lambda[rep.tiers[l].range.begin]);
                break;
            case RegimeKind::StronglyInconsistent:
                out.quantity = RateQuantity::StrongInconsistencyLevel;
                out.rate = level(lambda[j - 1]);
                break;
        }
    } else {
        const int dn = fixed ? 1 : (rep.gamma < 1.0 - kExponentTolerance ? 1 : (rep.gamma > 1.0 + kExponentTolerance ? -1 : 0));
        if (dn > 0) {
            out.quantity = RateQuantity::StrongInconsistencyLevel;
            out.clause = fixed ? Clause::FixedInconsistent : Clause::GrowingInconsistent;
            out.rate = level(lambda[j - 1]);
        } else if (rep.noise_subspace_consistent) {
            const double delta = lambda[m];
            out.quantity = RateQuantity::SubspaceGap;
            out.clause = Clause::GrowingNoiseSubspace;
            out.approximate = dn == 0;
            const double floor_term = dn < 0 ? 1.0 / delta : d1 / (n * delta);
            out.rate = std::sqrt(std::max(a.back(), floor_term));
        } else {
            throw Error(ErrorKind::BoundaryCase, "noise block with an unseparated spike tier has no asserted rate");
        }
    }
    if (!(std::isfinite(out.rate) && out.rate > 0.0))
        throw Error(ErrorKind::DomainError, "rate is not a positive finite number at index " + std::to_string(j));
    return out;
}

}  // namespace spikepca
