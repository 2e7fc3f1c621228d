#include "spikepca/spike_model.hpp"
#include "spikepca/error.hpp"

#include <cmath>
#include <sstream>

namespace spikepca {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, ErrorKind kind, const std::string& message) {
    if (!ok) throw Error(kind, message);
}

}  // namespace

std::size_t TierIndex::tier_of(std::size_t i) const noexcept {
    for (std::size_t l = 0; l < sets.size(); ++l)
        if (sets[l].contains(i)) return l;
    return sets.size();
}

std::vector<double> default_multi_constants(std::size_t m) {
    std::vector<double> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = std::ldexp(1.0, static_cast<int>(m - j));
    return c;
}

std::size_t spike_count(const SpectrumSpec& spec) {
    return std::visit(Overloaded{
                          [](const SingleSpike&) -> std::size_t { return 1; },
                          [](const MultiSpike& s) { return s.constants.size(); },
                          [](const Tiered& t) {
                              std::size_t m = 0;
                              for (const auto& tier : t.tiers) m += tier.multiplicity;
                              return m;
                          },
                          [](const Explicit& e) { return e.values.size(); },
                      },
                      spec.kind);
}

void validate(const SpectrumSpec& spec) {
    require(std::isfinite(spec.base_level) && spec.base_level > 0.0, ErrorKind::ValidationError,
            "base_level must be positive");
    std::visit(Overloaded{
                   [](const SingleSpike& s) {
                       require(std::isfinite(s.alpha) && s.alpha >= 0.0, ErrorKind::ValidationError,
                               "alpha must be >= 0");
                   },
                   [](const MultiSpike& s) {
                       require(std::isfinite(s.alpha) && s.alpha >= 0.0, ErrorKind::ValidationError,
                               "alpha must be >= 0");
                       require(!s.constants.empty(), ErrorKind::ValidationError, "constants must be nonempty");
                       for (std::size_t j = 0; j < s.constants.size(); ++j) {
                           require(std::isfinite(s.constants[j]) && s.constants[j] > 1.0, ErrorKind::ValidationError,
                                   "constants must exceed 1");
                           if (j > 0)
                               require(s.constants[j - 1] > s.constants[j], ErrorKind::ValidationError,
                                       "constants must be strictly decreasing");
                       }
                   },
                   [](const Tiered& t) {
                       require(!t.tiers.empty(), ErrorKind::ValidationError, "tiers must be nonempty");
                       for (std::size_t l = 0; l < t.tiers.size(); ++l) {
                           const Tier& tier = t.tiers[l];
                           require(std::isfinite(tier.exponent), ErrorKind::ValidationError, "tier exponent must be finite");
                           require(tier.multiplicity >= 1, ErrorKind::ValidationError, "tier multiplicity must be >= 1");
                           require(std::isfinite(tier.scale) && tier.scale > 0.0, ErrorKind::ValidationError,
                                   "tier scale must be positive");
                           if (l > 0)
                               require(t.tiers[l - 1].exponent > tier.exponent, ErrorKind::ValidationError,
                                       "tier exponents must be strictly decreasing");
                       }
                   },
                   [](const Explicit& e) {
                       for (std::size_t j = 0; j < e.values.size(); ++j) {
                           require(std::isfinite(e.values[j]) && e.values[j] >= 0.0, ErrorKind::NotMonotone,
                                   "explicit values must be finite and nonnegative");
                           if (j > 0)
                               require(e.values[j - 1] >= e.values[j], ErrorKind::NotMonotone,
                                       "explicit values must be nonincreasing");
                       }
                   },
               },
               spec.kind);
}

std::vector<double> build_spectrum(const SpectrumSpec& spec, std::size_t d) {
    validate(spec);
    const std::size_t m = spike_count(spec);
    require(m + spec.zero_tail < d, ErrorKind::SpecTooLarge,
            std::to_string(m) + " spikes plus " + std::to_string(spec.zero_tail) + " zeros do not fit in d=" +
                std::to_string(d));

    const double dd = static_cast<double>(d);
    std::vector<double> out(d, spec.base_level);
    std::visit(Overloaded{
                   [&](const SingleSpike& s) { out[0] = std::pow(dd, s.alpha); },
                   [&](const MultiSpike& s) {
                       for (std::size_t j = 0; j < m; ++j) out[j] = s.constants[j] * std::pow(dd, s.alpha);
                   },
                   [&](const Tiered& t) {
                       std::size_t pos = 0;
                       for (const auto& tier : t.tiers) {
                           const double value = tier.scale * std::pow(dd, tier.exponent);
                           for (std::size_t k = 0; k < tier.multiplicity; ++k) out[pos++] = value;
                       }
                   },
                   [&](const Explicit& e) {
                       for (std::size_t j = 0; j < m; ++j) out[j] = e.values[j];
                   },
               },
               spec.kind);
    for (std::size_t j = d - spec.zero_tail; j < d; ++j) out[j] = 0.0;

    for (std::size_t j = 1; j < d; ++j)
        require(out[j - 1] >= out[j], ErrorKind::NotMonotone,
                "spectrum increases at index " + std::to_string(j + 1) + " (" + std::to_string(out[j - 1]) + " < " +
                    std::to_string(out[j]) + ")");
    return out;
}

std::size_t resolve_n(const ScalingLaw& law, std::size_t d) {
    if (law.fixed_n) return *law.fixed_n;
    const double n = std::round(std::pow(static_cast<double>(d), law.gamma));
    return n < 2.0 ? 2 : static_cast<std::size_t>(n);
}

TierIndex tier_index(const SpectrumSpec& spec, std::size_t d) {
    const std::vector<double> spectrum = build_spectrum(spec, d);
    const std::size_t m = spike_count(spec);
    TierIndex out;
    std::visit(Overloaded{
                   [&](const SingleSpike&) { out.sets.push_back({0, 1}); },
                   [&](const MultiSpike&) {
                       for (std::size_t j = 0; j < m; ++j) out.sets.push_back({j, j + 1});
                   },
                   [&](const Tiered& t) {
                       std::size_t pos = 0;
                       for (const auto& tier : t.tiers) {
                           out.sets.push_back({pos, pos + tier.multiplicity});
                           pos += tier.multiplicity;
                       }
                   },
                   [&](const Explicit&) {
                       std::size_t start = 0;
                       for (std::size_t j = 1; j <= m; ++j) {
                           if (j == m || spectrum[j] != spectrum[start]) {
                               out.sets.push_back({start, j});
                               start = j;
                           }
                       }
                   },
               },
               spec.kind);
    out.sets.push_back({m, effective_dimension(spec, d)});
    return out;
}

std::vector<double> gap_ratios(const std::vector<double>& spectrum, const TierIndex& tiers) {
    const std::size_t r = tiers.spike_tiers();
    std::vector<double> out(r);
    double running = 0.0;
    for (std::size_t l = 0; l < r; ++l) {
        const double delta = spectrum.at(tiers.sets[l].begin);
        require(delta != 0.0, ErrorKind::ZeroDivision, "tier " + std::to_string(l + 1) + " representative is zero");
        const double next = spectrum.at(tiers.sets[l + 1].begin);
        running = std::max(running, next / delta);
        out[l] = running;
    }
    return out;
}

std::size_t effective_dimension(const SpectrumSpec& spec, std::size_t d) {
    return d > spec.zero_tail ? d - spec.zero_tail : 0;
}

std::string describe(const SpectrumSpec& spec) {
    std::ostringstream os;
    std::visit(Overloaded{
                   [&](const SingleSpike& s) { os << "single spike alpha=" << s.alpha; },
                   [&](const MultiSpike& s) {
                       os << "multi spike alpha=" << s.alpha << " constants=(";
                       for (std::size_t j = 0; j < s.constants.size(); ++j) os << (j ? "," : "") << s.constants[j];
                       os << ")";
                   },
                   [&](const Tiered& t) {
                       os << "tiered";
                       for (const auto& tier : t.tiers)
                           os << " [exp=" << tier.exponent << " q=" << tier.multiplicity << " scale=" << tier.scale << "]";
                   },
                   [&](const Explicit& e) { os << "explicit, " << e.values.size() << " leading values"; },
               },
               spec.kind);
    os << ", base=" << spec.base_level;
    if (spec.zero_tail) os << ", zero_tail=" << spec.zero_tail;
    return os.str();
}

}  // namespace spikepca
