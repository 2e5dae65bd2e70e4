#pragma once

#include "idrisk/levy.hpp"

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

namespace idrisk {

enum class BoundMethod { integral, closed, risk_integral, risk_closed };

std::string_view to_string(BoundMethod method) noexcept;
/// Accepts the names produced by to_string. Throws DomainError otherwise.
BoundMethod parse_bound_method(std::string_view name);

/// One evaluated bound. Deviation bounds lie in (0, 1]; risk bounds may
/// exceed 1 and are then vacuous. ln_cov is NaN for deviation bounds.
struct BoundReport {
    double xi;
    double value;
    BoundMethod method;
    std::size_t n;
    double lambda;
    double V;
    double R;
    double ln_cov;
    double log_value;
};

/// The cumulant-rate function
///   tau(t) = N * int lambda|u| (e^{t lambda |u|} - 1) nu(du),  0 < t < M/lambda,
/// its antiderivative Phi and its inverse, for a fixed measure, Lipschitz
/// constant and sample size.
class TauContext {
public:
    TauContext(LevyMeasure measure, double lipschitz_lambda, std::size_t n_samples);

    const LevyMeasure& measure() const noexcept { return measure_; }
    double lambda() const noexcept { return lambda_; }
    std::size_t n() const noexcept { return n_; }
    /// M / lambda.
    double domain_limit() const noexcept { return domain_limit_; }

    double tau(double t) const;
    double tau_derivative(double t) const;
    /// Phi(t) = N * int (e^{t lambda|u|} - t lambda|u| - 1) nu(du); Phi' = tau.
    double phi(double t) const;

    /// tau((M/lambda)^-). Both supported families give +inf.
    double range_limit() const noexcept;

    /// Unique t with tau(t) = s; relative tolerance 1e-12.
    double tau_inverse(double s) const;

    /// int_0^xi tau^{-1}(s) ds by adaptive Simpson.
    double integral_tau_inverse(double xi) const;

private:
    void check_domain(double t, const char* op) const;

    LevyMeasure measure_;
    double lambda_;
    std::size_t n_;
    double domain_limit_;
    std::vector<std::pair<double, double>> radius_mass_;  // atomic only
};

/// N lambda^2 V (e^{t lambda R} - 1) / (lambda R): majorant of tau when the
/// support is bounded. The closed-form deviation bound inverts this majorant
/// only at lambda = 1; for other lambda pass lambda^2 V as its V argument to
/// keep the domination.
double tau_bounded_support_majorant(const TauContext& ctx, double t);

/// exp(-int_0^xi tau^{-1}(s) ds). xi = 0 returns 1.
BoundReport deviation_bound_integral(const TauContext& ctx, double xi);

/// exp{ xi/(lambda R) - (xi/(lambda R) + N V/(lambda R)^2) ln(1 + xi lambda R/(N V)) }.
BoundReport deviation_bound_closed(double xi, double V, double R, double lambda, std::size_t n);

/// min_t { Phi(t) - t xi } evaluated at t = tau^{-1}(xi).
double chernoff_min(const TauContext& ctx, double xi);

/// Gamma(x) = x - (x + 1) ln(x + 1), x >= 0.
double big_gamma(double x);

/// gamma(x) = ln((x+1) ln(x+1) - x) / ln x, x > 1. Solves Gamma(x) = -x^gamma.
double gamma_exponent(double x);

/// d gamma / dx, x > 1.
double gamma_exponent_derivative(double x);

struct XhatResult {
    double xhat;
    double gamma_max;
};

/// Maximizer of gamma_exponent on (1, 1e6) by golden-section search.
XhatResult find_xhat();

/// Gate N xi^2 >= 32 max{A^2, B^2}; throws DomainError naming the condition.
void require_symmetrization_condition(double xi, std::size_t n, double A, double B);

/// 2 exp(ln_cov) exp(-int_0^{N xi/8} tau^{-1}(s) ds).
BoundReport risk_bound_integral(const TauContext& ctx, double xi, double ln_cov, double A, double B);

/// 2 exp(ln_cov) exp{ N V/(lambda^2 R^2) Gamma(xi lambda R/(8 V)) }.
BoundReport risk_bound_closed(double xi, std::size_t n, double ln_cov, double V, double R,
                              double lambda, double A, double B);

struct DeviationRadius {
    double radius;
    /// radius * lambda R / (8 V)
    double x;
    /// x > 1 and gamma <= gamma_exponent(x): the radius is a valid
    /// probability-(1 - epsilon) bound.
    bool gamma_admissible;
};

/// (8 lambda R (ln_cov - ln(eps/2)) / (N (lambda R/(8V))^{gamma-1}))^{1/gamma}.
DeviationRadius sup_deviation_radius(double epsilon, std::size_t n, double ln_cov, double V,
                                     double R, double lambda, double gamma);

/// Gamma has no root on x > 0 (Gamma(0) = 0, Gamma' = -ln(1+x) < 0), so the
/// threshold 8 x* V/(lambda R) of the convergence statement is degenerate;
/// the toolkit treats convergence as holding for every xi > 0.
inline constexpr std::string_view kConvergenceThresholdNote =
    "Gamma(x) < 0 for all x > 0; the root x* of Gamma(x) = 0, x > 0 does not exist, "
    "so the convergence threshold is taken as xi > 0";

}  // namespace idrisk
