#include <doctest.h>

#include "idrisk/error.hpp"
#include "idrisk/sampler.hpp"
#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>

using namespace idrisk;

namespace {

GeneratingTriplet atoms1d(double drift, std::vector<std::pair<double, double>> atoms) {
    std::vector<Atom> list;
    for (auto [u, w] : atoms) list.push_back({{u}, w});
    return GeneratingTriplet({drift}, AtomicMeasure(std::move(list)));
}

// Every k with non-negligible mass must match the exact pmf to within five
// binomial standard errors.
void check_against_pmf(const std::map<long, long>& counts, long draws, double rate, long offset) {
    const auto pmf = oracle::poisson_pmf_table(rate, static_cast<int>(rate * 4 + 60));
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        if (pmf[k] < 1e-4) continue;
        const auto it = counts.find(static_cast<long>(k) + offset);
        const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second) / draws;
        const double se = std::sqrt(pmf[k] * (1 - pmf[k]) / draws);
        CHECK_MESSAGE(std::abs(observed - pmf[k]) <= 5 * se, "rate ", rate, " k ", k);
    }
}

}  // namespace

TEST_CASE("Poisson variates follow the exact pmf on both branches") {
    for (double rate : {0.3, 1.0, 4.0, 9.9, 10.0, 30.0, 150.0}) {
        Rng rng(static_cast<std::uint64_t>(rate * 1000));
        std::map<long, long> counts;
        const long draws = 200000;
        for (long i = 0; i < draws; ++i) ++counts[sample_poisson(rng, rate)];
        check_against_pmf(counts, draws, rate, 0);
    }
    Rng rng(1);
    CHECK(sample_poisson(rng, 0.0) == 0);
    CHECK_THROWS_AS(sample_poisson(rng, -1.0), DomainError);
}

TEST_CASE("zero-jump branch returns the compensated drift") {
    const auto t = atoms1d(0.75, {{0.5, 1e-14}, {3.0, 1e-14}});
    Rng rng(99);
    const auto z = sample_one(t, rng);
    CHECK(z[0] == 0.75 - 1e-14 * 0.5);
}

TEST_CASE("compensated Poisson marginal law") {
    const auto t = atoms1d(0, {{1, 1}});
    const auto s = sample_set(t, 200000, 4242);
    std::map<long, long> counts;
    for (double z : s.data()) {
        CHECK(z == std::round(z));
        ++counts[std::lround(z)];
    }
    check_against_pmf(counts, 200000, 1.0, -1);
}

TEST_CASE("compound Poisson mean and variance") {
    const auto big = atoms1d(0, {{2, 3}});
    const auto s = sample_set(big, 1000000, 17);
    double mean = 0;
    for (double z : s.data()) mean += z;
    mean /= 1e6;
    CHECK(std::abs(mean - 6.0) <= 3.0 * std::sqrt(12.0) / 1000.0);

    const auto unit = atoms1d(0, {{1, 1}});
    const auto u = sample_set(unit, 100000, 23);
    double m = 0, sq = 0;
    for (double z : u.data()) m += z;
    m /= 1e5;
    for (double z : u.data()) sq += (z - m) * (z - m);
    CHECK(sq / (1e5 - 1) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sample_set determinism and substreams") {
    const auto t = GeneratingTriplet({0.1, -0.2}, AtomicMeasure({Atom{{1, 0.5}, 2.0}, Atom{{-2, 1}, 0.7}}));
    const auto one = sample_set(t, 1, 555);
    Rng rng = Rng::substream(555, 0);
    CHECK(Vector(one.point(0).begin(), one.point(0).end()) == sample_one(t, rng));

    const auto a = sample_set(t, 5000, 1234, 1);
    const auto b = sample_set(t, 5000, 1234, 4);
    const auto c = sample_set(t, 5000, 1234, 0);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.dimension() == 2);
    CHECK(a.size() == 5000);
    CHECK(a.triplet_id() == fingerprint(t));
    CHECK_FALSE(a == sample_set(t, 5000, 1235, 1));
    CHECK_THROWS_AS(sample_set(t, 0, 1), DomainError);
}

TEST_CASE("infinite-activity sampling is unsupported") {
    GeneratingTriplet t({0.0}, ExpIntensityMeasure(1, 1));
    Rng rng(1);
    CHECK_THROWS_AS(sample_one(t, rng), UnsupportedOperation);
    CHECK_THROWS_AS(sample_set(t, 10, 1), UnsupportedOperation);
}

TEST_CASE("empirical characteristic function") {
    const auto t = atoms1d(0, {{1, 1}});
    const auto s = sample_set(t, 100000, 31337);
    const double zero[] = {0.0};
    CHECK(empirical_char_function(s, zero) == std::complex<double>(1.0, 0.0));

    const SampleSet single(1, {std::numbers::pi}, 0, "manual");
    const double one[] = {1.0};
    const auto v = empirical_char_function(single, one);
    CHECK(v.real() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(v.imag()) < 1e-15);

    const double pi[] = {std::numbers::pi};
    const auto expected = std::exp(std::complex<double>(-2.0, -std::numbers::pi));
    CHECK(std::abs(empirical_char_function(s, pi) - expected) < 0.01);

    const double bad[] = {1.0, 1.0};
    CHECK_THROWS_AS(empirical_char_function(s, bad), DomainError);
}

TEST_CASE("empirical CF matches exp(char_exponent) within 4/sqrt(N)") {
    const std::vector<GeneratingTriplet> triplets{
        atoms1d(0, {{1, 1}}),
        atoms1d(-0.3, {{0.4, 2.5}, {-1.7, 0.6}, {3.0, 0.2}}),
        atoms1d(1.0, {{0.05, 40.0}}),
        GeneratingTriplet({0.2, 0.0}, AtomicMeasure({Atom{{0.6, 0.6}, 1.5}, Atom{{-1.2, 2.0}, 0.4}})),
    };
    const std::size_t n = 10000;
    std::uint64_t seed = 100;
    for (const auto& t : triplets) {
        const auto s = sample_set(t, n, seed++);
        for (double th : {-2.5, -1.0, -0.3, 0.2, 0.9, 1.7, 3.0}) {
            Vector theta(t.dimension(), th);
            if (theta.size() == 2) theta[1] = 0.5 - th;
            const auto ecf = empirical_char_function(s, theta);
            CHECK(std::abs(ecf) <= 1.0 + 1e-15);
            const auto cf = std::exp(char_exponent(t, theta));
            CHECK(std::abs(ecf - cf) <= 4.0 / std::sqrt(static_cast<double>(n)));
        }
    }
}

TEST_CASE("divisibility: sum of m pieces reproduces the CF") {
    const auto t = atoms1d(0.5, {{0.7, 1.2}, {2.0, 0.5}});
    const unsigned m = 4;
    const auto piece = divided_triplet(t, m);
    const CompoundPoissonSampler sampler(piece);
    const std::size_t n = 20000;
    std::vector<double> sums(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (unsigned j = 0; j < m; ++j) {
            Rng rng = Rng::substream(derive_seed(77, i), j);
            sums[i] += sampler.draw(rng)[0];
        }
    }
    const SampleSet s(1, sums, 77, "sum");
    for (double th : {-2.0, -0.5, 0.5, 1.0, 2.5}) {
        const double theta[] = {th};
        CHECK(std::abs(empirical_char_function(s, theta) - std::exp(char_exponent(t, theta))) <=
              4.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("CSV export and import preserve points exactly") {
    const auto tmp = std::filesystem::temp_directory_path() / "idrisk_samples_test.csv";
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto t = GeneratingTriplet({0.123456789, -1.0 / 3.0},
                                         AtomicMeasure({Atom{{std::sqrt(2.0), 0.1}, 1.3}}));
        const auto s = sample_set(t, 257, seed);
        write_samples_csv(s, tmp);
        const auto back = read_samples_csv(tmp);
        CHECK(back.dimension() == 2);
        CHECK(std::equal(back.data().begin(), back.data().end(), s.data().begin(), s.data().end()));
    }
    CHECK(samples_csv(SampleSet(2, {1.0, 2.5}, 0, "x")) == "z_0,z_1\n1,2.5\n");
    std::filesystem::remove(tmp);
    CHECK_THROWS_AS(read_samples_csv("/nonexistent/dir/file.csv"), IoError);
}
