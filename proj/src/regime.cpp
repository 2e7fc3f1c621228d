#include "spikepca/regime.hpp"
#include "spikepca/error.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace spikepca {

std::string to_string(const RegimeLabel& label) {
    switch (label.kind) {
        case RegimeKind::Consistent: return "Consistent";
        case RegimeKind::SubspaceConsistent: return "SubspaceConsistent(" + std::to_string(label.tier) + ")";
        case RegimeKind::StronglyInconsistent: return "StronglyInconsistent";
        case RegimeKind::Boundary: return "Boundary";
    }
    return "?";
}

char glyph(const RegimeLabel& label) {
    switch (label.kind) {
        case RegimeKind::Consistent: return 'C';
        case RegimeKind::SubspaceConsistent: return 'S';
        case RegimeKind::StronglyInconsistent: return 'I';
        case RegimeKind::Boundary: return 'B';
    }
    return '?';
}

const char* to_string(Clause clause) {
    switch (clause) {
        case Clause::GrowingSpikeLowDim: return "growing-n/separated/d-over-n-to-zero";
        case Clause::GrowingSpikeHighDim: return "growing-n/separated/d-over-n-to-infinity";
        case Clause::GrowingSpikeProportional: return "growing-n/separated/d-over-n-to-constant";
        case Clause::GrowingInconsistent: return "growing-n/noise-dominated";
        case Clause::GrowingBoundary: return "growing-n/boundary";
        case Clause::GrowingNoiseSubspace: return "growing-n/noise-block-subspace";
        case Clause::FixedSpike: return "fixed-n/separated";
        case Clause::FixedInconsistent: return "fixed-n/noise-dominated";
        case Clause::FixedBoundary: return "fixed-n/boundary";
    }
    return "?";
}

namespace {

int exponent_sign(double e) {
    if (e < -kExponentTolerance) return -1;
    if (e > kExponentTolerance) return 1;
    return 0;
}

std::vector<RegimeTier> structural_tiers(const SpectrumSpec& spec) {
    std::vector<RegimeTier> tiers;
    if (const auto* s = std::get_if<SingleSpike>(&spec.kind)) {
        tiers.push_back({{0, 1}, s->alpha});
    } else if (const auto* m = std::get_if<MultiSpike>(&spec.kind)) {
        for (std::size_t j = 0; j < m->constants.size(); ++j) tiers.push_back({{j, j + 1}, m->alpha});
    } else if (const auto* t = std::get_if<Tiered>(&spec.kind)) {
        std::size_t pos = 0;
        for (const auto& tier : t->tiers) {
            tiers.push_back({{pos, pos + tier.multiplicity}, tier.exponent});
            pos += tier.multiplicity;
        }
    } else {
        throw Error(ErrorKind::UnsupportedSpec, "explicit spectra carry no exponent structure");
    }
    return tiers;
}

std::vector<RegimeTier> merge_equal_orders(const std::vector<RegimeTier>& tiers) {
    std::vector<RegimeTier> out;
    for (const auto& t : tiers) {
        if (!out.empty() && exponent_sign(out.back().exponent - t.exponent) == 0)
            out.back().range.end = t.range.end;
        else
            out.push_back(t);
    }
    return out;
}

}  // namespace

RegimeReport classify(const SpectrumSpec& spec, const ScalingLaw& law) {
    validate(spec);
    RegimeReport rep;
    rep.domain = (law.fixed_n || exponent_sign(law.gamma) == 0) ? AsymptoticDomain::FixedN : AsymptoticDomain::GrowingN;
    rep.gamma = rep.domain == AsymptoticDomain::FixedN ? 0.0 : law.gamma;

    // The effective dimension d - zero_tail grows like d, so it carries power 1.
    constexpr double dimension_exponent = 1.0;
    const bool fixed = rep.domain == AsymptoticDomain::FixedN;
    rep.tiers = structural_tiers(spec);
    if (fixed) rep.tiers = merge_equal_orders(rep.tiers);

    bool all_separate = true;
    for (std::size_t l = 0; l < rep.tiers.size(); ++l) {
        const RegimeTier& tier = rep.tiers[l];
        const double ratio = dimension_exponent - rep.gamma - tier.exponent;
        const int sign = exponent_sign(ratio);

        RegimeLabel label;
        Clause clause;
        if (sign < 0) {
            label = tier.range.size() == 1 ? RegimeLabel{RegimeKind::Consistent, 0}
                                           : RegimeLabel{RegimeKind::SubspaceConsistent, l + 1};
            if (fixed) {
                clause = Clause::FixedSpike;
            } else {
                const int dn = exponent_sign(dimension_exponent - rep.gamma);
                clause = dn < 0 ? Clause::GrowingSpikeLowDim
                                : (dn > 0 ? Clause::GrowingSpikeHighDim : Clause::GrowingSpikeProportional);
            }
        } else if (sign > 0) {
            label = {RegimeKind::StronglyInconsistent, 0};
            clause = fixed ? Clause::FixedInconsistent : Clause::GrowingInconsistent;
            all_separate = false;
        } else {
            label = {RegimeKind::Boundary, 0};
            clause = fixed ? Clause::FixedBoundary : Clause::GrowingBoundary;
            all_separate = false;
        }
        for (std::size_t i = tier.range.begin; i < tier.range.end; ++i)
            rep.spikes.push_back({i + 1, l + 1, ratio, label, clause});
    }
    rep.noise = {RegimeKind::StronglyInconsistent, 0};
    rep.noise_subspace_consistent = !fixed && all_separate;
    return rep;
}

SpectrumSpec with_alpha(const SpectrumSpec& spec, double alpha) {
    SpectrumSpec out = spec;
    if (auto* s = std::get_if<SingleSpike>(&out.kind)) {
        s->alpha = alpha;
    } else if (auto* m = std::get_if<MultiSpike>(&out.kind)) {
        m->alpha = alpha;
    } else if (auto* t = std::get_if<Tiered>(&out.kind)) {
        if (!t->tiers.empty()) t->tiers.front().exponent = alpha;
    } else {
        throw Error(ErrorKind::UnsupportedSpec, "explicit spectra carry no spike index");
    }
    return out;
}

std::vector<std::vector<RegimeLabel>> region_grid(const std::vector<double>& alpha_values,
                                                  const std::vector<double>& gamma_values,
                                                  const SpectrumSpec& spec_template) {
    if (alpha_values.empty() || gamma_values.empty())
        throw Error(ErrorKind::ValidationError, "region grid needs nonempty alpha and gamma grids");
    std::vector<double> alphas = alpha_values;
    std::vector<double> gammas = gamma_values;
    std::sort(alphas.begin(), alphas.end());
    std::sort(gammas.begin(), gammas.end(), std::greater<>());

    std::vector<std::vector<RegimeLabel>> grid;
    for (double g : gammas) {
        std::vector<RegimeLabel> row;
        ScalingLaw law;
        law.gamma = g;
        for (double a : alphas) {
            const RegimeReport rep = classify(with_alpha(spec_template, a), law);
            row.push_back(rep.spikes.front().label);
        }
        grid.push_back(std::move(row));
    }
    return grid;
}

}  // namespace spikepca
