#include "idrisk/experiments.hpp"

#include "idrisk/error.hpp"
#include "idrisk/numerics.hpp"
#include "idrisk/parallel.hpp"
#include "idrisk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace idrisk {

GeneratingTriplet standard_triplet() {
    return GeneratingTriplet({0.0}, AtomicMeasure({Atom{{1.0}, 1.0}}));
}

LipschitzRampFamily standard_family() {
    return LipschitzRampFamily({-1.0, -0.5, 0.0, 0.5, 1.0}, 1.0, 1.0);
}

TailEstimate make_tail_estimate(double xi, std::size_t hits, std::size_t trials) {
    if (trials == 0) throw DomainError("trials must be at least 1");
    if (hits > trials) throw DomainError("hits exceed trials");
    const auto [lo, hi] = numerics::clopper_pearson(hits, trials, 0.95);
    const double point = static_cast<double>(hits) / static_cast<double>(trials);
    return {xi, trials, hits, point, std::min(lo, point), std::max(hi, point)};
}

namespace {

std::vector<double> member_risks(const LipschitzRampFamily& family, const GeneratingTriplet& triplet) {
    std::vector<double> risks(family.size());
    const auto law = lattice_law(triplet);
    for (std::size_t i = 0; i < family.size(); ++i) {
        risks[i] = law ? expected_risk(family.member(i), *law)
                       : expected_risk(family.member(i), triplet).value;
    }
    return risks;
}

double sup_deviation_fast(const LipschitzRampFamily& family, std::span<const double> z,
                          std::span<const double> risks, std::vector<double>& scratch) {
    scratch.resize(z.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const Ramp f = family.member(i);
        for (std::size_t k = 0; k < z.size(); ++k) scratch[k] = f(z[k]);
        const double mean = numerics::pairwise_sum(scratch) / static_cast<double>(z.size());
        sup = std::max(sup, std::abs(mean - risks[i]));
    }
    return sup;
}

std::size_t count_above(std::span<const double> values, double threshold) {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [threshold](double v) { return v > threshold; }));
}

}  // namespace

std::vector<double> simulate_deviations(const GeneratingTriplet& triplet, const ScalarFunction& f,
                                        std::size_t n, std::size_t trials, std::uint64_t seed,
                                        unsigned workers) {
    if (trials == 0) throw DomainError("trials must be at least 1");
    if (n == 0) throw DomainError("N must be at least 1");
    if (triplet.dimension() != 1) throw DomainError("tail estimation needs a scalar triplet");
    const double expected_total = static_cast<double>(n) * expected_risk(f, triplet).value;
    const CompoundPoissonSampler sampler(triplet);
    std::vector<double> deviations(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_seed(seed, t);
        double total = 0.0;
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Rng rng = Rng::substream(trial_seed, i);
            sampler.draw(rng, std::span<double>(&z, 1));
            total += evaluate(f, z);
        }
        deviations[t] = std::abs(total - expected_total);
    });
    return deviations;
}

TailEstimate mc_tail_probability(const GeneratingTriplet& triplet, const ScalarFunction& f,
                                 std::size_t n, double xi, std::size_t trials, std::uint64_t seed,
                                 unsigned workers) {
    const auto deviations = simulate_deviations(triplet, f, n, trials, seed, workers);
    return make_tail_estimate(xi, count_above(deviations, xi), trials);
}

std::vector<DominanceRow> bound_dominance_report(const GeneratingTriplet& triplet,
                                                 const ScalarFunction& f, std::size_t n,
                                                 std::span<const double> xi_grid,
                                                 std::size_t trials, std::uint64_t seed,
                                                 unsigned workers) {
    const double V = second_moment(triplet.measure());
    const double R = support_radius(triplet.measure());
    if (!std::isfinite(R)) throw InapplicableBound("bound_dominance_report: bounded support required");
    const double lambda = lipschitz_constant(f);
    const TauContext ctx(triplet.measure(), lambda, n);
    const auto deviations = simulate_deviations(triplet, f, n, trials, seed, workers);

    std::vector<DominanceRow> rows;
    for (double xi : xi_grid) {
        DominanceRow row{make_tail_estimate(xi, count_above(deviations, xi), trials),
                         deviation_bound_integral(ctx, xi),
                         deviation_bound_closed(xi, V, R, lambda, n), false};
        row.violation = row.tail.ci_low > row.integral.value || row.tail.ci_low > row.closed.value;
        rows.push_back(row);
    }
    return rows;
}

SymmetrizationResult symmetrization_check(const GeneratingTriplet& triplet,
                                          const LipschitzRampFamily& family, std::size_t n,
                                          double xi, std::size_t trials, std::uint64_t seed,
                                          double slack, unsigned workers) {
    require_symmetrization_condition(xi, n, family.A(), family.B());
    if (trials == 0) throw DomainError("trials must be at least 1");
    const auto risks = member_risks(family, triplet);
    const CompoundPoissonSampler sampler(triplet);
    const std::string id = fingerprint(triplet);
    std::vector<unsigned char> lhs_hit(trials, 0);
    std::vector<unsigned char> rhs_hit(trials, 0);
    parallel_for(trials, workers, [&](std::size_t t) {
        const auto z = sample_set(sampler, n, derive_seed(seed, 2 * t), id, 1);
        const auto z_prime = sample_set(sampler, n, derive_seed(seed, 2 * t + 1), id, 1);
        std::vector<double> scratch;
        lhs_hit[t] = sup_deviation_fast(family, z.data(), risks, scratch) > xi;
        double ghost_sup = 0.0;
        for (std::size_t i = 0; i < family.size(); ++i) {
            const Ramp f = family.member(i);
            ghost_sup = std::max(ghost_sup, std::abs(empirical_risk(f, z_prime) - empirical_risk(f, z)));
        }
        rhs_hit[t] = ghost_sup > xi / 2.0;
    });
    const auto lhs_hits = static_cast<std::size_t>(std::count(lhs_hit.begin(), lhs_hit.end(), 1));
    const auto rhs_hits = static_cast<std::size_t>(std::count(rhs_hit.begin(), rhs_hit.end(), 1));
    SymmetrizationResult result{make_tail_estimate(xi, lhs_hits, trials),
                                make_tail_estimate(xi / 2.0, rhs_hits, trials), false};
    result.holds = result.lhs.ci_low <= 2.0 * result.rhs.ci_high + slack;
    return result;
}

std::vector<RiskDominanceRow> risk_dominance_report(const GeneratingTriplet& triplet,
                                                    const LipschitzRampFamily& family,
                                                    std::size_t n, std::span<const double> xi_grid,
                                                    std::size_t trials,
                                                    std::size_t cover_replicates,
                                                    std::uint64_t seed, unsigned workers) {
    if (trials == 0) throw DomainError("trials must be at least 1");
    const double V = second_moment(triplet.measure());
    const double R = support_radius(triplet.measure());
    for (double xi : xi_grid) require_symmetrization_condition(xi, n, family.A(), family.B());

    const auto risks = member_risks(family, triplet);
    const CompoundPoissonSampler sampler(triplet);
    const std::string id = fingerprint(triplet);
    std::vector<double> sups(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        const auto z = sample_set(sampler, n, derive_seed(seed, t), id, 1);
        std::vector<double> scratch;
        sups[t] = sup_deviation_fast(family, z.data(), risks, scratch);
    });

    std::vector<RiskDominanceRow> rows;
    const std::uint64_t cover_seed = derive_seed(seed, ~std::uint64_t{0});
    for (double xi : xi_grid) {
        const double ln_cov =
            estimate_ln_covering(family, triplet, n, xi / 8.0, cover_replicates, cover_seed, workers);
        RiskDominanceRow row{make_tail_estimate(xi, count_above(sups, xi), trials),
                             risk_bound_closed(xi, n, ln_cov, V, R, family.slope(), family.A(),
                                               family.B()),
                             false};
        row.violation = row.closed.value <= 1.0 && row.tail.ci_low > row.closed.value;
        rows.push_back(row);
    }
    return rows;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("loglog_slope: need at least two paired points");
    }
    const double m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope: values must be positive");
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) throw DomainError("loglog_slope: x values are all equal");
    return sxy / sxx;
}

RateSweepResult rate_sweep(const LipschitzRampFamily& family, const GeneratingTriplet& triplet,
                           const RateSweepConfig& config, std::uint64_t seed, unsigned workers) {
    if (config.n_grid.size() < 2) throw DomainError("rate_sweep: at least two N values required");
    for (std::size_t i = 1; i < config.n_grid.size(); ++i) {
        if (!(config.n_grid[i] > config.n_grid[i - 1])) {
            throw DomainError("rate_sweep: N grid must be strictly increasing");
        }
    }
    if (config.gamma && !(*config.gamma > 0.0)) throw DomainError("rate_sweep: gamma must be positive");
    if (config.mc_replicates == 0) throw DomainError("rate_sweep: mc_replicates must be positive");
    const double V = second_moment(triplet.measure());
    const double R = support_radius(triplet.measure());
    if (!std::isfinite(R)) throw InapplicableBound("rate_sweep: bounded support required");
    const double lambda = family.slope();
    const double gamma_max = find_xhat().gamma_max;
    const auto risks = member_risks(family, triplet);
    const CompoundPoissonSampler sampler(triplet);
    const std::string id = fingerprint(triplet);

    RateSweepResult result;
    result.reference_slope = -0.5;
    result.note = std::string(kConvergenceThresholdNote);

    for (std::size_t row_index = 0; row_index < config.n_grid.size(); ++row_index) {
        const std::size_t n = config.n_grid[row_index];
        const std::uint64_t row_seed = derive_seed(seed, row_index);

        double gamma = config.gamma.value_or(gamma_max);
        double ln_cov = config.ln_cov.value_or(std::log(static_cast<double>(family.size())));
        auto radius = sup_deviation_radius(config.epsilon, n, ln_cov, V, R, lambda, gamma);
        // gamma and the covering term both depend on the radius they produce;
        // iterate a few times towards a consistent triple.
        for (int iter = 0; iter < 20 && (!config.gamma || !config.ln_cov); ++iter) {
            double next_gamma = gamma;
            if (!config.gamma && radius.x > 1.0) {
                const double g = gamma_exponent(radius.x);
                if (g > 0.0) next_gamma = std::min(g, gamma_max);
            }
            double next_ln_cov = ln_cov;
            if (!config.ln_cov) {
                next_ln_cov = estimate_ln_covering(family, triplet, n, radius.radius / 8.0,
                                                   config.cover_replicates, row_seed, workers);
            }
            const bool settled = std::abs(next_gamma - gamma) <= 1e-12 && next_ln_cov == ln_cov;
            gamma = next_gamma;
            ln_cov = next_ln_cov;
            radius = sup_deviation_radius(config.epsilon, n, ln_cov, V, R, lambda, gamma);
            if (settled) break;
        }

        std::vector<double> sups(config.mc_replicates);
        const std::uint64_t mc_seed = derive_seed(row_seed, 1);
        parallel_for(config.mc_replicates, workers, [&](std::size_t r) {
            const auto z = sample_set(sampler, n, derive_seed(mc_seed, r), id, 1);
            std::vector<double> scratch;
            sups[r] = sup_deviation_fast(family, z.data(), risks, scratch);
        });
        std::sort(sups.begin(), sups.end());
        const auto rank = static_cast<std::size_t>(
            std::ceil((1.0 - config.epsilon) * static_cast<double>(sups.size())));
        const double quantile = sups[std::clamp<std::size_t>(rank, 1, sups.size()) - 1];

        result.rows.push_back({n, radius.radius, quantile, gamma, ln_cov, radius.gamma_admissible});
    }

    std::vector<double> ns, bounds, mcs;
    bool mc_positive = true;
    for (const auto& row : result.rows) {
        ns.push_back(static_cast<double>(row.n));
        bounds.push_back(row.bound_radius);
        mcs.push_back(row.mc_sup_dev);
        mc_positive = mc_positive && row.mc_sup_dev > 0.0;
    }
    result.bound_slope = loglog_slope(ns, bounds);
    result.mc_slope = mc_positive ? loglog_slope(ns, mcs) : std::numeric_limits<double>::quiet_NaN();
    return result;
}

std::pair<Series, Series> gamma_curves(double lo, double hi, std::size_t points) {
    if (!(lo > 1.0) || !(hi > lo) || points < 2) {
        throw DomainError("gamma_curves: need 1 < lo < hi and at least two points");
    }
    std::vector<double> xs;
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        xs.push_back(i + 1 == points ? hi : lo * std::exp(step * static_cast<double>(i)));
    }
    const double xhat = find_xhat().xhat;
    if (xhat > lo && xhat < hi) {
        xs.insert(std::upper_bound(xs.begin(), xs.end(), xhat), xhat);
    }
    Series gamma{"gamma", {}};
    Series gamma_prime{"gamma_prime", {}};
    for (double x : xs) {
        gamma.points.emplace_back(x, gamma_exponent(x));
        gamma_prime.points.emplace_back(x, gamma_exponent_derivative(x));
    }
    return {gamma, gamma_prime};
}

}  // namespace idrisk
