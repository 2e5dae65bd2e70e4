#include <doctest.h>

#include "idrisk/error.hpp"
#include "idrisk/experiments.hpp"
#include "idrisk/function_class.hpp"
#include "idrisk/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace idrisk;

namespace {

SampleSet scalar_samples(std::vector<double> values) {
    return SampleSet(1, std::move(values), 0, "fixed");
}

GeneratingTriplet one_atom(double drift, double u, double w) {
    return GeneratingTriplet({drift}, AtomicMeasure({Atom{{u}, w}}));
}

}  // namespace

TEST_CASE("ramp family members are Lipschitz with range [0, slope*cap]") {
    LipschitzRampFamily family({-2.0, -0.3, 0.0, 1.7}, 2.5, 0.8);
    CHECK(family.A() == 0.0);
    CHECK(family.B() == doctest::Approx(2.0));
    auto rng = Rng::substream(17, 0);
    for (std::size_t m = 0; m < family.size(); ++m) {
        const Ramp f = family.member(m);
        CHECK(lipschitz_constant(ScalarFunction{f}) == 2.5);
        std::size_t violations = 0;
        for (int k = 0; k < 100000; ++k) {
            const double z1 = -6 + 12 * rng.uniform();
            const double z2 = -6 + 12 * rng.uniform();
            if (std::abs(f(z1) - f(z2)) > 2.5 * std::abs(z1 - z2) * (1 + 1e-15) + 1e-300) ++violations;
            if (f(z1) < 0.0 || f(z1) > family.B()) ++violations;
        }
        CHECK(violations == 0);
    }
    CHECK_THROWS_AS(LipschitzRampFamily({0.0, 0.0}, 1, 1), DomainError);
    CHECK_THROWS_AS(LipschitzRampFamily({1.0, 0.0}, 1, 1), DomainError);
    CHECK_THROWS_AS(LipschitzRampFamily({0.0}, 0, 1), DomainError);
    CHECK_THROWS_AS(LipschitzRampFamily({0.0}, 1, -1), DomainError);
    CHECK_THROWS_AS(LipschitzRampFamily({}, 1, 1), DomainError);

    const auto [lo, hi] = value_range(ScalarFunction{Identity{}});
    CHECK(std::isinf(lo));
    CHECK(std::isinf(hi));
}

TEST_CASE("empirical risk") {
    const Ramp far{100.0, 1.0, 1.0};
    CHECK(empirical_risk(far, scalar_samples({-1, 0, 3})) == 0.0);
    const Ramp steep{0.5, 2.0, 3.0};
    CHECK(empirical_risk(steep, scalar_samples({0.5 + 1.5})) == doctest::Approx(3.0));
    CHECK(empirical_risk(steep, scalar_samples({1.0, 2.0})) == doctest::Approx(2.0));
    CHECK(empirical_risk(Identity{}, scalar_samples({1.0, 2.0, 6.0})) == doctest::Approx(3.0));
    CHECK_THROWS_AS(empirical_risk(Identity{}, SampleSet(2, {1, 2}, 0, "x")), DomainError);
}

TEST_CASE("lattice law of Poisson(1) - 1") {
    const auto law = lattice_law(standard_triplet());
    REQUIRE(law.has_value());
    const auto pmf = oracle::poisson_pmf_table(1.0, 40);
    double total = 0;
    for (std::size_t i = 0; i < law->values.size(); ++i) {
        const int k = static_cast<int>(std::lround(law->values[i] + 1));
        CHECK(law->values[i] == doctest::Approx(k - 1.0));
        CHECK(law->probs[i] == doctest::Approx(pmf[k]).epsilon(1e-13));
        total += law->probs[i];
    }
    CHECK(law->dropped_mass < 1e-12);
    CHECK(total + law->dropped_mass == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_FALSE(lattice_law(GeneratingTriplet({0.0}, ExpIntensityMeasure(1, 2))).has_value());
    CHECK_FALSE(lattice_law(GeneratingTriplet({0.0, 0.0}, AtomicMeasure({Atom{{1, 0}, 1}}))).has_value());
}

TEST_CASE("expected risk: exact examples") {
    const auto triplet = standard_triplet();
    // clamp(z, 0, 1) on Poisson(1) - 1 equals Pr{P >= 2} = 1 - 2/e
    const auto r = expected_risk(Ramp{0.0, 1.0, 1.0}, triplet);
    CHECK(r.exact);
    CHECK(r.std_error == 0.0);
    CHECK(std::abs(r.value - (1 - 2 / std::numbers::e)) <= 2e-12);
    const auto pmf = oracle::poisson_pmf_table(1.0, 60);
    double oracle_value = 0;
    for (int k = 2; k <= 60; ++k) oracle_value += pmf[k];
    CHECK(std::abs(r.value - oracle_value) <= 2e-12);

    CHECK(expected_risk(Ramp{1e6, 1.0, 1.0}, triplet).value == 0.0);
    CHECK(expected_risk(Identity{}, triplet).value == doctest::Approx(0.0));
    CHECK(expected_risk(Identity{}, one_atom(0.5, 2.0, 3.0)).value == doctest::Approx(6.5));
}

TEST_CASE("expected risk: exact and Monte-Carlo paths agree") {
    const std::vector<std::pair<GeneratingTriplet, Ramp>> cases{
        {standard_triplet(), Ramp{-0.5, 1.0, 1.0}},
        {one_atom(0.2, 0.5, 3.0), Ramp{0.3, 2.0, 0.7}},
        {GeneratingTriplet({0.0}, AtomicMeasure({Atom{{0.5}, 1.0}, Atom{{-1.5}, 0.4}})), Ramp{0.0, 1.0, 2.0}},
    };
    for (const auto& [triplet, f] : cases) {
        const auto exact = expected_risk(f, triplet);
        REQUIRE(exact.exact);
        const auto mc = expected_risk_mc(f, triplet, 400000, 99);
        CHECK_FALSE(mc.exact);
        CHECK(mc.std_error > 0.0);
        CHECK(std::abs(mc.value - exact.value) <= 4 * mc.std_error);
    }
}

TEST_CASE("covering numbers: examples") {
    const auto family = standard_family();
    const auto samples = scalar_samples({-1.0, 0.0, 0.0, 1.0, 2.0, -1.0});
    const auto d = DistanceMatrix::l1(family, samples.data());
    CHECK(covering_number_L1(family, d.diameter() + 1e-9, samples).greedy == 1);
    const auto at_zero = covering_number_L1(family, 0.0, samples);
    CHECK(at_zero.greedy == family.size());
    REQUIRE(at_zero.exact.has_value());
    CHECK(*at_zero.exact == family.size());

    // 5 members, 3 fixed points, radius half the smallest pairwise distance
    LipschitzRampFamily five({-1.0, -0.4, 0.1, 0.7, 1.2}, 1.0, 1.5);
    const std::vector<double> points{-0.2, 0.6, 1.4};
    const auto dm = DistanceMatrix::l1(five, points);
    double min_d = 1e300;
    std::vector<std::vector<double>> dense(5, std::vector<double>(5));
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            dense[i][j] = dm(i, j);
            if (i != j) min_d = std::min(min_d, dm(i, j));
        }
    }
    const double radius = min_d / 2;
    const auto brute = oracle::brute_force_cover(dense, radius);
    CHECK(exact_cover_size(dm, radius) == static_cast<std::size_t>(brute));
    CHECK(greedy_cover_size(dm, radius) >= static_cast<std::size_t>(brute));
}

TEST_CASE("covering numbers: greedy bounds the exhaustive minimum, monotone in radius") {
    auto rng = Rng::substream(4242, 1);
    for (int instance = 0; instance < 30; ++instance) {
        const std::size_t m = 3 + instance % 10;
        std::vector<double> thetas;
        double t = -2.0;
        for (std::size_t i = 0; i < m; ++i) {
            t += 0.05 + 0.5 * rng.uniform();
            thetas.push_back(t);
        }
        LipschitzRampFamily family(thetas, 0.5 + rng.uniform(), 0.5 + 2 * rng.uniform());
        std::vector<double> pts;
        for (int k = 0; k < 7; ++k) pts.push_back(-3 + 6 * rng.uniform());
        const SampleSet s = scalar_samples(pts);
        const auto dm = DistanceMatrix::l1(family, pts);
        std::vector<std::vector<double>> dense(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) dense[i][j] = dm(i, j);

        std::size_t last = m + 1;
        for (double xi = 0.0; xi <= dm.diameter() * 1.1; xi += dm.diameter() / 9 + 1e-12) {
            const auto c = covering_number_L1(family, xi, s);
            REQUIRE(c.exact.has_value());
            CHECK(*c.exact == static_cast<std::size_t>(oracle::brute_force_cover(dense, xi)));
            CHECK(c.greedy >= *c.exact);
            CHECK(c.greedy <= m);
            CHECK(c.greedy <= last);
            last = c.greedy;
        }
    }
}

TEST_CASE("sup deviation") {
    const auto triplet = standard_triplet();
    LipschitzRampFamily zero({1e6}, 1.0, 1.0);
    const auto s = sample_set(triplet, 50, 3);
    CHECK(sup_deviation(zero, s, triplet) == 0.0);

    LipschitzRampFamily single({0.0}, 1.0, 1.0);
    const double ef = expected_risk(single.member(0), triplet).value;
    CHECK(sup_deviation(single, s, triplet) == doctest::Approx(std::abs(empirical_risk(single.member(0), s) - ef)));

    const auto family = standard_family();
    const auto big = sample_set(triplet, 1'000'000, kDefaultSeed);
    std::vector<double> risks;
    for (std::size_t m = 0; m < family.size(); ++m) {
        risks.push_back(expected_risk(family.member(m), triplet).value);
        CHECK(std::abs(empirical_risk(family.member(m), big) - risks.back()) < 0.01);
    }
    CHECK(sup_deviation(family, big, risks) < 0.01);
}

TEST_CASE("ln covering estimate is deterministic and bounded by ln |F|") {
    const auto family = standard_family();
    const auto triplet = standard_triplet();
    const double a = estimate_ln_covering(family, triplet, 40, 0.05, 20, 7, 1);
    const double b = estimate_ln_covering(family, triplet, 40, 0.05, 20, 7, 3);
    CHECK(a == b);
    CHECK(a >= 0.0);
    CHECK(a <= std::log(static_cast<double>(family.size())) + 1e-15);
    CHECK(estimate_ln_covering(family, triplet, 40, 100.0, 20, 7) == 0.0);
}
