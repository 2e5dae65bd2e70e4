#pragma once

#include "idrisk/levy.hpp"
#include "idrisk/sampler.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace idrisk {

/// f(z) = slope * clamp(z - theta, 0, cap). slope-Lipschitz, range [0, slope * cap].
struct Ramp {
    double theta;
    double slope;
    double cap;

    double operator()(double z) const noexcept {
        return slope * std::clamp(z - theta, 0.0, cap);
    }
};

/// f(z) = z. 1-Lipschitz, unbounded.
struct Identity {
    double operator()(double z) const noexcept { return z; }
};

using ScalarFunction = std::variant<Identity, Ramp>;

double evaluate(const ScalarFunction& f, double z) noexcept;
double lipschitz_constant(const ScalarFunction& f) noexcept;
/// [A, B]; infinite ends for unbounded functions.
std::pair<double, double> value_range(const ScalarFunction& f) noexcept;

/// Finite grid of ramps sharing slope and cap, thresholds strictly increasing.
class LipschitzRampFamily {
public:
    LipschitzRampFamily(std::vector<double> thetas, double slope, double cap);

    std::size_t size() const noexcept { return thetas_.size(); }
    Ramp member(std::size_t i) const noexcept { return {thetas_[i], slope_, cap_}; }
    const std::vector<double>& thetas() const noexcept { return thetas_; }
    double slope() const noexcept { return slope_; }
    double cap() const noexcept { return cap_; }
    double A() const noexcept { return 0.0; }
    double B() const noexcept { return slope_ * cap_; }

private:
    std::vector<double> thetas_;
    double slope_;
    double cap_;
};

/// E_N f = (1/N) sum_n f(z_n). Scalar samples only.
double empirical_risk(const ScalarFunction& f, const SampleSet& samples);

/// Exact law of a scalar finite-activity ID variable whose jump sizes sit on
/// a common lattice: support points in increasing order with probabilities.
struct LatticeLaw {
    std::vector<double> values;
    std::vector<double> probs;
    /// Poisson tail mass left out by truncation (< the requested tail mass).
    double dropped_mass;
};

/// Enumerates the compound-Poisson law, truncating each atom's count where
/// the residual Poisson mass drops below tail_mass / (number of atoms).
/// Returns nullopt for infinite activity, K != 1, or more than max_states
/// distinct support points (incommensurable jump sizes).
std::optional<LatticeLaw> lattice_law(const GeneratingTriplet& triplet, double tail_mass = 1e-12,
                                      std::size_t max_states = 1u << 20);

struct RiskValue {
    double value;
    /// 0 for exact evaluation.
    double std_error;
    bool exact;
};

/// Ef by exact lattice enumeration when available (the identity uses the
/// closed-form mean), else by Monte Carlo with `mc_draws` draws.
RiskValue expected_risk(const ScalarFunction& f, const GeneratingTriplet& triplet,
                        std::uint64_t mc_seed = 0x5eed, std::size_t mc_draws = 10'000'000);

double expected_risk(const ScalarFunction& f, const LatticeLaw& law) noexcept;

/// Monte-Carlo estimate of Ef with its standard error.
RiskValue expected_risk_mc(const ScalarFunction& f, const GeneratingTriplet& triplet,
                           std::size_t draws, std::uint64_t seed, unsigned workers = 0);

/// Pairwise empirical L1 distances of family members on a point set.
class DistanceMatrix {
public:
    DistanceMatrix(std::size_t size, std::vector<double> entries);
    static DistanceMatrix l1(const LipschitzRampFamily& family, std::span<const double> points);

    std::size_t size() const noexcept { return size_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * size_ + j]; }
    double diameter() const noexcept;

private:
    std::size_t size_;
    std::vector<double> d_;
};

/// Greedy cover with centres drawn from the family; ball membership is d <= radius.
std::size_t greedy_cover_size(const DistanceMatrix& d, double radius);

/// Minimum cover size by exhaustive search over centre subsets (size <= 20).
std::size_t exact_cover_size(const DistanceMatrix& d, double radius);

struct CoverResult {
    std::size_t greedy;
    std::optional<std::size_t> exact;
};

/// N(F, xi, L1(samples)). The greedy count is the reported value; the exact
/// minimum is attached for families with at most 20 members.
CoverResult covering_number_L1(const LipschitzRampFamily& family, double xi,
                               const SampleSet& samples);

/// max_f |E_N f - Ef| given the members' expected risks.
double sup_deviation(const LipschitzRampFamily& family, const SampleSet& samples,
                     std::span<const double> expected_risks);
double sup_deviation(const LipschitzRampFamily& family, const SampleSet& samples,
                     const GeneratingTriplet& triplet);

/// ln of the mean greedy cover size at `radius` over `replicates` double
/// samples of size 2N; replicate r uses substream (seed, r).
double estimate_ln_covering(const LipschitzRampFamily& family, const GeneratingTriplet& triplet,
                            std::size_t n, double radius, std::size_t replicates,
                            std::uint64_t seed, unsigned workers = 0);

}  // namespace idrisk
