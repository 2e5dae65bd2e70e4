// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "idrisk/bounds.hpp"
#include "idrisk/experiments.hpp"
#include "idrisk/function_class.hpp"
#include "idrisk/levy.hpp"
#include "idrisk/rng.hpp"
#include "idrisk/sampler.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace idrisk;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double time_limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < time_limit_s;
    const bool ok = out.ok && in_time;
    if (!ok) ++failures;
    std::printf("%s criterion %d: %s [%.3f s / limit %.0f s]%s%s%s\n", ok ? "PASS" : "FAIL", id, title,
                secs, time_limit_s, out.detail.empty() ? "" : " -- ", out.detail.c_str(),
                in_time ? "" : " (time limit exceeded)");
    std::fflush(stdout);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

Outcome xhat_reproduction() {
    const auto r = find_xhat();
    const bool ok = r.xhat >= 69.35 && r.xhat <= 70.35 && r.gamma_max > 1.27 && r.gamma_max <= 1.30;
    return {ok, fmt("xhat = %.10g, gamma_max = %.10g", r.xhat, r.gamma_max)};
}

Outcome figure_curves() {
    const auto [gamma, gamma_prime] = gamma_curves(1.05, 500.0, 1000);
    int sign_changes = 0;
    for (std::size_t i = 1; i < gamma_prime.points.size(); ++i) {
        if ((gamma_prime.points[i].second > 0.0) != (gamma_prime.points[i - 1].second > 0.0)) ++sign_changes;
    }
    const auto peak = std::max_element(gamma.points.begin(), gamma.points.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    bool unimodal = true;
    for (auto it = gamma.points.begin(); it + 1 != gamma.points.end(); ++it) {
        const bool rising = (it + 1)->second >= it->second;
        if ((it < peak) != rising) unimodal = false;
    }
    const double xhat = find_xhat().xhat;
    const bool ok = sign_changes == 1 && unimodal && peak->first == xhat;
    return {ok, fmt("sign changes = %.0f, unimodal = %.0f, peak at x = %.10g", sign_changes, unimodal,
                    peak->first)};
}

Outcome bound_equality() {
    const TauContext ctx(AtomicMeasure({Atom{{1.0}, 1.0}}), 1.0, 1);
    double worst_pair = 0.0, worst_analytic = 0.0;
    for (int i = 1; i <= 50; ++i) {
        const double xi = 20.0 * i / 50.0;
        const double integral = deviation_bound_integral(ctx, xi).value;
        const double closed = deviation_bound_closed(xi, 1.0, 1.0, 1.0, 1).value;
        const double analytic = std::exp(xi - (1.0 + xi) * std::log1p(xi));
        worst_pair = std::max(worst_pair, std::abs(integral - closed));
        worst_analytic = std::max({worst_analytic, std::abs(integral - analytic), std::abs(closed - analytic)});
    }
    return {worst_pair <= 1e-9 && worst_analytic <= 1e-9,
            fmt("max |integral - closed| = %.3g, max |bound - analytic| = %.3g (tol 1e-9)", worst_pair,
                worst_analytic)};
}

Outcome chernoff_identity() {
    const std::vector<TauContext> contexts{
        TauContext(AtomicMeasure({Atom{{1.0}, 1.0}}), 1.0, 1),
        TauContext(AtomicMeasure({Atom{{0.5, -0.2}, 2.0}, Atom{{-1.5, 0.3}, 0.4}}), 0.8, 5),
        TauContext(ExpIntensityMeasure(1.0, 2.0), 1.0, 3),
    };
    double worst = 0.0;
    for (const auto& ctx : contexts) {
        for (int i = 1; i <= 20; ++i) {
            const double xi = 0.5 * i;
            worst = std::max(worst, std::abs(chernoff_min(ctx, xi) + ctx.integral_tau_inverse(xi)));
        }
    }
    return {worst <= 1e-8, fmt("max |chernoff_min + int tau^-1| = %.3g over 60 points (tol 1e-8)", worst)};
}

Outcome mc_domination() {
    std::vector<double> grid;
    for (int x = 1; x <= 10; ++x) grid.push_back(x);
    const auto rows = bound_dominance_report(standard_triplet(), Identity{}, 10, grid, 100000, kDefaultSeed);
    int violations = 0;
    for (const auto& r : rows) {
        if (r.tail.ci_low > r.integral.value || r.tail.ci_low > r.closed.value) ++violations;
    }
    const auto& at5 = rows[4].tail;
    const double exact = oracle::poisson_two_sided_tail(10.0, 5.0);
    const bool covered = at5.ci_low <= exact && exact <= at5.ci_high;
    return {violations == 0 && covered,
            fmt("violations = %.0f; xi=5: exact %.6f in [%.6f, ", violations, exact, at5.ci_low) +
                fmt("%.6f] point %.6f", at5.ci_high, at5.point)};
}

Outcome sampler_validation() {
    const std::size_t n = 100000;
    const double tol = 4.0 / std::sqrt(static_cast<double>(n));
    const std::vector<double> thetas{-3.0, -2.0, -1.2, -0.6, -0.2, 0.3, 0.8, 1.4, 2.2, 3.1};
    double worst = 0.0;
    const std::vector<GeneratingTriplet> triplets{
        standard_triplet(),
        GeneratingTriplet({0.5}, AtomicMeasure({Atom{{0.7}, 1.2}, Atom{{2.0}, 0.5}, Atom{{-0.4}, 3.0}})),
    };
    for (const auto& t : triplets) {
        const auto s = sample_set(t, n, kDefaultSeed);
        for (double th : thetas) {
            const double theta[] = {th};
            worst = std::max(worst, std::abs(empirical_char_function(s, theta) - std::exp(char_exponent(t, theta))));
        }
    }
    // divisibility: each draw is the sum of 4 draws from the quarter triplet
    const auto& t = triplets[1];
    const CompoundPoissonSampler piece(divided_triplet(t, 4));
    std::vector<double> sums(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < 4; ++j) {
            Rng rng = Rng::substream(derive_seed(kDefaultSeed, i), j);
            sums[i] += piece.draw(rng)[0];
        }
    }
    const SampleSet summed(1, std::move(sums), kDefaultSeed, "divided");
    double worst_div = 0.0;
    for (double th : thetas) {
        const double theta[] = {th};
        worst_div = std::max(worst_div,
                             std::abs(empirical_char_function(summed, theta) - std::exp(char_exponent(t, theta))));
    }
    return {worst <= tol && worst_div <= tol,
            fmt("max CF error %.4g, divisibility %.4g (tol %.4g)", worst, worst_div, tol)};
}

Outcome risk_domination() {
    const std::vector<double> grid{0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
    const auto rows = risk_dominance_report(standard_triplet(), standard_family(), 1000, grid, 10000, 200,
                                            kDefaultSeed);
    int violations = 0, informative = 0;
    for (const auto& r : rows) {
        if (r.closed.value <= 1.0) {
            ++informative;
            if (r.tail.ci_low > r.closed.value) ++violations;
        }
    }
    return {violations == 0,
            fmt("violations = %.0f over %.0f xi values with bound <= 1 (of %.0f)", violations, informative,
                static_cast<double>(grid.size()))};
}

Outcome rate_exactness() {
    RateSweepConfig cfg;
    const double gamma_max = find_xhat().gamma_max;
    cfg.gamma = gamma_max;
    cfg.ln_cov = std::log(5.0);
    cfg.mc_replicates = 200;
    const auto r = rate_sweep(standard_family(), standard_triplet(), cfg, kDefaultSeed);
    const double target = -1.0 / gamma_max;
    const bool ok = std::abs(r.bound_slope - target) <= 1e-6 && r.bound_slope < r.reference_slope;
    return {ok, fmt("slope %.12f, -1/gamma_max %.12f, reference %.1f", r.bound_slope, target, r.reference_slope)};
}

Outcome covering_oracle() {
    Rng rng = Rng::substream(kDefaultSeed, 9);
    int below = 0, equal = 0, checked_by_bitmask = 0;
    for (int instance = 0; instance < 50; ++instance) {
        const std::size_t m = 4 + static_cast<std::size_t>(rng.uniform() * 17.0);
        std::vector<double> thetas;
        double t = -3.0;
        for (std::size_t i = 0; i < m; ++i) {
            t += 0.02 + 0.4 * rng.uniform();
            thetas.push_back(t);
        }
        const LipschitzRampFamily family(thetas, 0.5 + rng.uniform(), 0.3 + 2.0 * rng.uniform());
        std::vector<double> points(12);
        for (auto& p : points) p = -4.0 + 8.0 * rng.uniform();
        const auto d = DistanceMatrix::l1(family, points);
        const double radius = d.diameter() * (0.05 + 0.3 * rng.uniform());
        const std::size_t greedy = greedy_cover_size(d, radius);
        const std::size_t exact = exact_cover_size(d, radius);
        if (m <= 14) {
            std::vector<std::vector<double>> dense(m, std::vector<double>(m));
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) dense[i][j] = d(i, j);
            if (static_cast<std::size_t>(oracle::brute_force_cover(dense, radius)) != exact) ++below;
            ++checked_by_bitmask;
        }
        if (greedy < exact) ++below;
        if (greedy == exact) ++equal;
    }
    return {below == 0, fmt("50 instances, greedy == exact in %.0f, mismatches %.0f, bitmask-checked %.0f", equal,
                            below, checked_by_bitmask)};
}

}  // namespace

int main() {
    run(1, "x-hat reproduction", 1, xhat_reproduction);
    run(2, "gamma and gamma' curves", 1, figure_curves);
    run(3, "integral and closed bounds agree for a single atom", 1, bound_equality);
    run(4, "Chernoff identity", 5, chernoff_identity);
    run(5, "Monte-Carlo domination of the deviation bounds", 60, mc_domination);
    run(6, "sampler characteristic function and divisibility", 30, sampler_validation);
    run(7, "Monte-Carlo domination of the risk bound", 120, risk_domination);
    run(8, "rate exponent of the radius", 5, rate_exactness);
    run(9, "greedy cover against exhaustive minimum", 10, covering_oracle);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
