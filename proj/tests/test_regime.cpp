#include "doctest.h"

#include "spikepca/error.hpp"
#include "spikepca/regime.hpp"
#include "spikepca/rng.hpp"

using namespace spikepca;

namespace {

SpectrumSpec single(double alpha) {
    SpectrumSpec s;
    s.kind = SingleSpike{alpha};
    return s;
}

ScalingLaw growing(double gamma) {
    ScalingLaw law;
    law.gamma = gamma;
    return law;
}

RegimeLabel first(const SpectrumSpec& spec, const ScalingLaw& law) { return classify(spec, law).spikes.front().label; }

}  // namespace

TEST_CASE("single spike examples") {
    CHECK(first(single(0.8), growing(0.5)).kind == RegimeKind::Consistent);
    CHECK(first(single(0.3), growing(0.3)).kind == RegimeKind::StronglyInconsistent);
    CHECK(first(single(0.5), growing(0.5)).kind == RegimeKind::Boundary);
    CHECK(first(single(0.25), growing(0.75)).kind == RegimeKind::Boundary);
}

TEST_CASE("equal-order multi spike with fixed n is one subspace tier") {
    SpectrumSpec m;
    m.kind = MultiSpike{1.5, {4, 2}};
    const RegimeReport rep = classify(m, growing(0.0));
    CHECK(rep.domain == AsymptoticDomain::FixedN);
    REQUIRE(rep.spikes.size() == 2);
    REQUIRE(rep.tiers.size() == 1);
    CHECK(rep.tiers[0].range == IndexRange{0, 2});
    CHECK(rep.spikes[0].label == RegimeLabel{RegimeKind::SubspaceConsistent, 1});
    CHECK(rep.spikes[1].label == RegimeLabel{RegimeKind::SubspaceConsistent, 1});

    ScalingLaw f;
    f.fixed_n = 10;
    f.gamma = 0.7;
    CHECK(classify(m, f).spikes[0].label.kind == RegimeKind::SubspaceConsistent);
}

TEST_CASE("equal-order multi spike with growing n separates individually") {
    SpectrumSpec m;
    m.kind = MultiSpike{1.0, {8, 4, 2}};
    const RegimeReport rep = classify(m, growing(0.5));
    for (const auto& s : rep.spikes) CHECK(s.label.kind == RegimeKind::Consistent);
    CHECK(rep.noise.kind == RegimeKind::StronglyInconsistent);
    CHECK(rep.noise_subspace_consistent);
}

TEST_CASE("tiers with multiplicity map to subspace labels") {
    SpectrumSpec t;
    t.kind = Tiered{{{1.5, 2, 1.0}, {1.2, 1, 1.0}, {0.2, 1, 1.0}}};
    const RegimeReport rep = classify(t, growing(0.5));
    REQUIRE(rep.spikes.size() == 4);
    CHECK(rep.spikes[0].label == RegimeLabel{RegimeKind::SubspaceConsistent, 1});
    CHECK(rep.spikes[1].label == RegimeLabel{RegimeKind::SubspaceConsistent, 1});
    CHECK(rep.spikes[2].label.kind == RegimeKind::Consistent);
    CHECK(rep.spikes[3].label.kind == RegimeKind::StronglyInconsistent);
    CHECK(!rep.noise_subspace_consistent);
}

TEST_CASE("explicit spectra are unsupported") {
    SpectrumSpec e;
    e.kind = Explicit{{2.0}};
    try {
        classify(e, growing(1.0));
        FAIL("expected UnsupportedSpec");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::UnsupportedSpec);
    }
}

TEST_CASE("zero tail does not change labels") {
    SpectrumSpec s = single(0.8);
    s.zero_tail = 30;
    CHECK(first(s, growing(0.5)).kind == RegimeKind::Consistent);
}

TEST_CASE("region_grid examples") {
    const auto grid = region_grid({0.2, 1.0}, {0.2, 0.5}, single(0.0));
    REQUIRE(grid.size() == 2);
    // Row 0 is the largest gamma.
    CHECK(grid[0][0].kind == RegimeKind::StronglyInconsistent);
    CHECK(grid[0][1].kind == RegimeKind::Consistent);
    CHECK(grid[1][0].kind == RegimeKind::StronglyInconsistent);
    CHECK(grid[1][1].kind == RegimeKind::Consistent);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            CHECK(grid[r][c] == first(single(c ? 1.0 : 0.2), growing(r ? 0.2 : 0.5)));

    const auto upper = region_grid({1.0, 1.5, 2.0}, {0.25, 0.5, 1.0}, single(0.0));
    for (const auto& row : upper)
        for (const auto& l : row) CHECK(l.kind == RegimeKind::Consistent);

    SpectrumSpec m;
    m.kind = MultiSpike{0.0, {4, 2}};
    const auto hdlss = region_grid({1.25, 1.5, 2.0}, {0.0}, m);
    for (const auto& l : hdlss[0]) CHECK(l == RegimeLabel{RegimeKind::SubspaceConsistent, 1});

    CHECK_THROWS_AS(region_grid({}, {0.5}, single(0.0)), Error);
}

TEST_CASE("property: labels depend only on the sign structure") {
    Rng rng(55);
    for (int i = 0; i < 2000; ++i) {
        const double a = 2.0 * rng.uniform(), g = 1.5 * rng.uniform();
        const double a2 = 2.0 * rng.uniform(), g2 = 1.5 * rng.uniform();
        const auto sign = [](double x) { return x < -kExponentTolerance ? -1 : (x > kExponentTolerance ? 1 : 0); };
        if (sign(a + g - 1.0) == sign(a2 + g2 - 1.0) && sign(g) == sign(g2))
            CHECK(first(single(a), growing(g)) == first(single(a2), growing(g2)));
    }
}

TEST_CASE("property: common scaling of constants leaves labels unchanged") {
    for (double alpha : {0.2, 0.7, 1.0, 1.6}) {
        for (double gamma : {0.0, 0.3, 0.8}) {
            SpectrumSpec a, b;
            a.kind = MultiSpike{alpha, {6, 3, 1.5}};
            b.kind = MultiSpike{alpha, {60, 30, 15}};
            const RegimeReport ra = classify(a, growing(gamma));
            const RegimeReport rb = classify(b, growing(gamma));
            REQUIRE(ra.spikes.size() == rb.spikes.size());
            for (std::size_t j = 0; j < ra.spikes.size(); ++j) CHECK(ra.spikes[j].label == rb.spikes[j].label);
        }
    }
}

TEST_CASE("label strings") {
    CHECK(to_string(RegimeLabel{RegimeKind::SubspaceConsistent, 2}) == "SubspaceConsistent(2)");
    CHECK(to_string(RegimeLabel{RegimeKind::Consistent, 0}) == "Consistent");
    CHECK(glyph(RegimeLabel{RegimeKind::Boundary, 0}) == 'B');
}
