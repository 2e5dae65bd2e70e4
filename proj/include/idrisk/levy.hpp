#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace idrisk {

using Vector = std::vector<double>;

double euclidean_norm(std::span<const double> v) noexcept;

/// One jump size u with Poisson rate w per unit time.
struct Atom {
    Vector location;
    double mass;
};

/// Finite-activity Levy measure: a non-empty list of weighted atoms, none at
/// the origin. All integrals against it are finite sums.
class AtomicMeasure {
public:
    explicit AtomicMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t dimension() const noexcept { return atoms_.front().location.size(); }
    double total_mass() const noexcept;

private:
    std::vector<Atom> atoms_;
};

/// Infinite-activity measure with density alpha * u^-1 * exp(-beta u) on
/// (0, inf), K = 1 (the gamma-subordinator Levy measure).
class ExpIntensityMeasure {
public:
    ExpIntensityMeasure(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    static constexpr std::size_t dimension() noexcept { return 1; }

private:
    double alpha_;
    double beta_;
};

using LevyMeasure = std::variant<AtomicMeasure, ExpIntensityMeasure>;

std::size_t dimension(const LevyMeasure& measure) noexcept;

/// V = integral of |u|^2 against the measure.
double second_moment(const LevyMeasure& measure) noexcept;

/// R = smallest radius outside of which the measure vanishes; +inf when unbounded.
double support_radius(const LevyMeasure& measure) noexcept;

/// M = sup{t >= 0 : E exp(t|z|) < inf}. Bounded support gives +inf.
double exp_moment_radius(const LevyMeasure& measure) noexcept;

/// nu(R^K \ {0}); +inf for infinite activity.
double total_mass(const LevyMeasure& measure) noexcept;

/// Generating triplet (a, 0, nu). The Gaussian component is identically
/// zero and is not representable.
class GeneratingTriplet {
public:
    GeneratingTriplet(Vector drift, LevyMeasure measure);

    const Vector& drift() const noexcept { return drift_; }
    const LevyMeasure& measure() const noexcept { return measure_; }
    std::size_t dimension() const noexcept { return drift_.size(); }
    bool finite_activity() const noexcept {
        return std::holds_alternative<AtomicMeasure>(measure_);
    }

    /// Throws UnsupportedOperation for infinite-activity measures.
    const AtomicMeasure& atomic(const char* operation) const;

private:
    Vector drift_;
    LevyMeasure measure_;
};

/// ln phi(theta) = i<a,theta> + int (e^{i<theta,u>} - 1 - i<theta,u> 1{|u|<=1}) nu(du).
std::complex<double> char_exponent(const GeneratingTriplet& triplet,
                                   std::span<const double> theta);

/// E z = a + sum over atoms with |u| > 1 of w u. Atomic measures only.
Vector mean_vector(const GeneratingTriplet& triplet);

/// Triplet of one of m i.i.d. summands: drift a/m, every mass w/m.
GeneratingTriplet divided_triplet(const GeneratingTriplet& triplet, unsigned pieces);

/// Short stable identifier derived from the triplet's parameters.
std::string fingerprint(const GeneratingTriplet& triplet);

}  // namespace idrisk
