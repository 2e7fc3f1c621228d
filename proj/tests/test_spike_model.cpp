#include "doctest.h"

#include "spikepca/error.hpp"
#include "spikepca/rng.hpp"
#include "spikepca/spike_model.hpp"

#include <algorithm>

using namespace spikepca;

namespace {

SpectrumSpec single(double alpha) {
    SpectrumSpec s;
    s.kind = SingleSpike{alpha};
    return s;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::TrialFailure;
}

}  // namespace

TEST_CASE("build_spectrum examples") {
    const auto s = build_spectrum(single(1.0), 100);
    CHECK(s.size() == 100);
    CHECK(s[0] == doctest::Approx(100));
    CHECK(std::all_of(s.begin() + 1, s.end(), [](double v) { return v == 1.0; }));

    SpectrumSpec multi;
    multi.kind = MultiSpike{1.0, {4, 2}};
    const auto m = build_spectrum(multi, 10);
    CHECK(m[0] == doctest::Approx(40));
    CHECK(m[1] == doctest::Approx(20));
    CHECK(std::all_of(m.begin() + 2, m.end(), [](double v) { return v == 1.0; }));

    const auto flat = build_spectrum(single(0.0), 5);
    CHECK(std::all_of(flat.begin(), flat.end(), [](double v) { return v == 1.0; }));
}

TEST_CASE("build_spectrum errors") {
    SpectrumSpec s = single(1.0);
    s.zero_tail = 4;
    CHECK(kind_of([&] { build_spectrum(s, 5); }) == ErrorKind::SpecTooLarge);

    SpectrumSpec e;
    e.kind = Explicit{{2.0, 3.0}};
    CHECK(kind_of([&] { build_spectrum(e, 5); }) == ErrorKind::NotMonotone);

    SpectrumSpec below;
    below.kind = Explicit{{0.5}};
    CHECK(kind_of([&] { build_spectrum(below, 5); }) == ErrorKind::NotMonotone);
}

TEST_CASE("multi constants must decrease and exceed one") {
    SpectrumSpec s;
    s.kind = MultiSpike{1.0, {2, 3}};
    CHECK(kind_of([&] { validate(s); }) == ErrorKind::ValidationError);
    s.kind = MultiSpike{1.0, {3, 1}};
    CHECK(kind_of([&] { validate(s); }) == ErrorKind::ValidationError);
    CHECK(default_multi_constants(3) == std::vector<double>{8, 4, 2});
}

TEST_CASE("zero tail and effective dimension") {
    SpectrumSpec s = single(1.0);
    CHECK(effective_dimension(s, 100) == 100);
    s.zero_tail = 40;
    CHECK(effective_dimension(s, 100) == 60);
    const auto v = build_spectrum(s, 100);
    CHECK(std::count(v.begin(), v.end(), 0.0) == 40);
    CHECK(v[59] == 1.0);
    s.zero_tail = 98;
    CHECK(effective_dimension(s, 100) == 2);
}

TEST_CASE("resolve_n examples") {
    ScalingLaw law;
    law.gamma = 0.5;
    CHECK(resolve_n(law, 100) == 10);
    law.gamma = 0.0;
    CHECK(resolve_n(law, 100) == 2);
    law.fixed_n = 10;
    CHECK(resolve_n(law, 12345) == 10);
}

TEST_CASE("tier_index examples") {
    SpectrumSpec t;
    t.kind = Tiered{{{1.0, 2, 1.0}, {0.5, 1, 1.0}}};
    const TierIndex ti = tier_index(t, 10);
    REQUIRE(ti.sets.size() == 3);
    CHECK(ti.sets[0] == IndexRange{0, 2});
    CHECK(ti.sets[1] == IndexRange{2, 3});
    CHECK(ti.sets[2] == IndexRange{3, 10});
    CHECK(ti.spike_tiers() == 2);
    CHECK(ti.spike_count() == 3);

    const TierIndex one = tier_index(single(1.0), 5);
    REQUIRE(one.sets.size() == 2);
    CHECK(one.sets[0] == IndexRange{0, 1});
    CHECK(one.sets[1] == IndexRange{1, 5});

    SpectrumSpec m;
    m.kind = MultiSpike{1.0, default_multi_constants(3)};
    const TierIndex mt = tier_index(m, 8);
    REQUIRE(mt.sets.size() == 4);
    CHECK(mt.sets[2] == IndexRange{2, 3});
    CHECK(mt.sets[3] == IndexRange{3, 8});

    SpectrumSpec z = single(1.0);
    z.zero_tail = 3;
    const TierIndex zt = tier_index(z, 10);
    CHECK(zt.noise() == IndexRange{1, 7});
    CHECK(zt.tier_of(8) == zt.sets.size());
}

TEST_CASE("explicit spectra group equal runs into tiers") {
    SpectrumSpec e;
    e.kind = Explicit{{10, 10, 5}};
    const TierIndex ti = tier_index(e, 6);
    REQUIRE(ti.sets.size() == 3);
    CHECK(ti.sets[0] == IndexRange{0, 2});
    CHECK(ti.sets[1] == IndexRange{2, 3});
}

TEST_CASE("gap_ratios examples") {
    std::vector<double> spectrum{40, 20, 1, 1, 1};
    TierIndex ti{{{0, 1}, {1, 2}, {2, 5}}};
    const auto a = gap_ratios(spectrum, ti);
    CHECK(a[0] == doctest::Approx(0.5));
    CHECK(a[1] == doctest::Approx(0.5));

    const auto eq = gap_ratios({10, 10, 1, 1}, TierIndex{{{0, 2}, {2, 4}}});
    REQUIRE(eq.size() == 1);
    CHECK(eq[0] == doctest::Approx(0.1));

    const auto one = gap_ratios(build_spectrum(single(1.0), 50), tier_index(single(1.0), 50));
    CHECK(one[0] == doctest::Approx(1.0 / 50));

    CHECK_THROWS_AS(gap_ratios({0, 0, 0}, TierIndex{{{0, 1}, {1, 3}}}), Error);
}

TEST_CASE("property: random valid specs give nonincreasing spectra and bounded gaps") {
    Rng rng(2718);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 10 + rng() % 200;
        SpectrumSpec spec;
        spec.base_level = 0.5 + rng.uniform();
        const int kind = static_cast<int>(rng() % 3);
        if (kind == 0) {
            spec.kind = SingleSpike{2.0 * rng.uniform()};
        } else if (kind == 1) {
            spec.kind = MultiSpike{2.0 * rng.uniform(), default_multi_constants(1 + rng() % 4)};
        } else {
            Tiered t;
            double e = 2.0 * rng.uniform() + 0.5;
            const std::size_t r = 1 + rng() % 3;
            for (std::size_t l = 0; l < r; ++l) {
                t.tiers.push_back({e, 1 + rng() % 3, 1.0});
                e -= 0.2 + 0.3 * rng.uniform();
            }
            spec.kind = t;
        }
        spec.zero_tail = rng() % (d / 2);
        std::vector<double> v;
        try {
            v = build_spectrum(spec, d);
        } catch (const Error& e) {
            // Low exponents can fall below the base level; that is a rejected spec, not a bug.
            CHECK((e.kind() == ErrorKind::NotMonotone || e.kind() == ErrorKind::SpecTooLarge));
            continue;
        }
        for (std::size_t i = 1; i < d; ++i) CHECK(v[i - 1] >= v[i]);
        CHECK(static_cast<std::size_t>(std::count(v.end() - static_cast<long>(spec.zero_tail), v.end(), 0.0)) ==
              spec.zero_tail);
        CHECK(effective_dimension(spec, d) <= d);

        const TierIndex ti = tier_index(spec, d);
        CHECK(ti.sets.front().begin == 0);
        CHECK(ti.sets.back().end == effective_dimension(spec, d));
        for (std::size_t l = 1; l < ti.sets.size(); ++l) CHECK(ti.sets[l - 1].end == ti.sets[l].begin);

        const bool strict = [&] {
            for (std::size_t l = 1; l < ti.sets.size(); ++l)
                if (!(v[ti.sets[l - 1].begin] > v[ti.sets[l].begin])) return false;
            return true;
        }();
        if (strict)
            for (double a : gap_ratios(v, ti)) {
                CHECK(a > 0.0);
                CHECK(a <= 1.0);
            }
    }
}
