#pragma once

#include "idrisk/bounds.hpp"
#include "idrisk/function_class.hpp"
#include "idrisk/levy.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace idrisk {

inline constexpr std::uint64_t kDefaultSeed = 20120627;
inline constexpr std::size_t kDefaultTrials = 100000;

/// a = 0, single atom u = 1 with rate 1: z ~ Poisson(1) - 1.
GeneratingTriplet standard_triplet();
/// Five ramps, thresholds -1, -0.5, 0, 0.5, 1, slope 1, cap 1.
LipschitzRampFamily standard_family();

/// hits / trials with its exact 95% Clopper-Pearson interval.
struct TailEstimate {
    double xi;
    std::size_t trials;
    std::size_t hits;
    double point;
    double ci_low;
    double ci_high;
};

TailEstimate make_tail_estimate(double xi, std::size_t hits, std::size_t trials);

/// |F(Z) - EF| for `trials` independent sample sets of size N, where
/// F = sum_n f(z_n) and EF = N Ef. Trial t draws with seed derive_seed(seed, t).
std::vector<double> simulate_deviations(const GeneratingTriplet& triplet, const ScalarFunction& f,
                                        std::size_t n, std::size_t trials, std::uint64_t seed,
                                        unsigned workers = 0);

/// Fraction of trials with |F - EF| > xi.
TailEstimate mc_tail_probability(const GeneratingTriplet& triplet, const ScalarFunction& f,
                                 std::size_t n, double xi, std::size_t trials, std::uint64_t seed,
                                 unsigned workers = 0);

struct DominanceRow {
    TailEstimate tail;
    BoundReport integral;
    BoundReport closed;
    /// ci_low above either bound.
    bool violation;
};

/// Monte-Carlo tail at every xi next to the integral and closed-form
/// deviation bounds. All rows share one set of simulated deviations.
std::vector<DominanceRow> bound_dominance_report(const GeneratingTriplet& triplet,
                                                 const ScalarFunction& f, std::size_t n,
                                                 std::span<const double> xi_grid,
                                                 std::size_t trials, std::uint64_t seed,
                                                 unsigned workers = 0);

struct SymmetrizationResult {
    /// Pr{sup_f |Ef - E_N f| > xi}
    TailEstimate lhs;
    /// Pr{sup_f |E'_N f - E_N f| > xi/2}; the inequality compares lhs with twice this.
    TailEstimate rhs;
    /// lhs.ci_low <= 2 rhs.ci_high + slack
    bool holds;
};

SymmetrizationResult symmetrization_check(const GeneratingTriplet& triplet,
                                          const LipschitzRampFamily& family, std::size_t n,
                                          double xi, std::size_t trials, std::uint64_t seed,
                                          double slack = 0.0, unsigned workers = 0);

/// Pr{sup_f |E_N f - Ef| > xi} with the risk bounds at the same xi.
struct RiskDominanceRow {
    TailEstimate tail;
    BoundReport closed;
    /// ci_low above the bound while the bound is <= 1.
    bool violation;
};

std::vector<RiskDominanceRow> risk_dominance_report(const GeneratingTriplet& triplet,
                                                    const LipschitzRampFamily& family,
                                                    std::size_t n, std::span<const double> xi_grid,
                                                    std::size_t trials,
                                                    std::size_t cover_replicates,
                                                    std::uint64_t seed, unsigned workers = 0);

struct RateSweepConfig {
    std::vector<std::size_t> n_grid{250, 500, 1000, 2000, 4000};
    double epsilon = 0.05;
    /// Fixed rate exponent; when unset, gamma follows gamma_exponent(x) per
    /// row, clipped to (0, gamma_max].
    std::optional<double> gamma;
    /// Constant covering term; when unset, estimated per row at radius xi/8.
    std::optional<double> ln_cov;
    std::size_t cover_replicates = 200;
    std::size_t mc_replicates = 2000;
};

struct RateSweepRow {
    std::size_t n;
    double bound_radius;
    double mc_sup_dev;
    double gamma_used;
    double ln_cov;
    bool gamma_admissible;
};

struct RateSweepResult {
    std::vector<RateSweepRow> rows;
    double bound_slope;
    double mc_slope;
    double reference_slope;
    std::string note;
};

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Probability-(1 - epsilon) radius against N next to the measured (1 - epsilon)
/// quantile of the sup-deviation, with fitted log-log slopes.
RateSweepResult rate_sweep(const LipschitzRampFamily& family, const GeneratingTriplet& triplet,
                           const RateSweepConfig& config, std::uint64_t seed,
                           unsigned workers = 0);

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// gamma(x) and gamma'(x) on a log-spaced grid over [lo, hi] with x-hat inserted.
std::pair<Series, Series> gamma_curves(double lo = 1.05, double hi = 500.0,
                                       std::size_t points = 1000);

}  // namespace idrisk
