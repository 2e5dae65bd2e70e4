#include "idrisk/bounds.hpp"

#include "idrisk/error.hpp"
#include "idrisk/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace idrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadratureAbsTol = 1e-10;
constexpr double kQuadratureRelTol = 1e-12;
constexpr double kInverseRelTol = 1e-12;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// -ln(1 - y) - y for 0 <= y < 1
double neg_log1m_minus_linear(double y) {
    if (y < 1e-3) return y * y * (0.5 + y * (1.0 / 3.0 + y * (0.25 + y * 0.2)));
    return -std::log1p(-y) - y;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || std::isnan(v)) {
        throw DomainError(std::string(name) + " must be positive (got " + fmt(v) + ")");
    }
}

}  // namespace

std::string_view to_string(BoundMethod method) noexcept {
    switch (method) {
        case BoundMethod::integral: return "integral";
        case BoundMethod::closed: return "closed";
        case BoundMethod::risk_integral: return "risk_integral";
        case BoundMethod::risk_closed: return "risk_closed";
    }
    return "unknown";
}

BoundMethod parse_bound_method(std::string_view name) {
    for (auto m : {BoundMethod::integral, BoundMethod::closed, BoundMethod::risk_integral,
                   BoundMethod::risk_closed}) {
        if (to_string(m) == name) return m;
    }
    throw DomainError("unknown bound method '" + std::string(name) + "'");
}

TauContext::TauContext(LevyMeasure measure, double lipschitz_lambda, std::size_t n_samples)
    : measure_(std::move(measure)), lambda_(lipschitz_lambda), n_(n_samples) {
    require_positive(lambda_, "lambda");
    if (n_ == 0) throw DomainError("N must be at least 1");
    domain_limit_ = exp_moment_radius(measure_) / lambda_;
    if (const auto* m = std::get_if<AtomicMeasure>(&measure_)) {
        for (const auto& atom : m->atoms()) {
            radius_mass_.emplace_back(euclidean_norm(atom.location), atom.mass);
        }
    }
}

void TauContext::check_domain(double t, const char* op) const {
    if (!(t >= 0.0) || !(t < domain_limit_)) {
        throw DomainError(std::string(op) + ": t = " + fmt(t) + " outside the domain 0 < t < M/λ = " +
                          fmt(domain_limit_));
    }
}

double TauContext::tau(double t) const {
    check_domain(t, "tau");
    const double nd = static_cast<double>(n_);
    if (const auto* m = std::get_if<ExpIntensityMeasure>(&measure_)) {
        const double a = m->alpha();
        const double b = m->beta();
        return nd * lambda_ * lambda_ * a * t / (b * (b - lambda_ * t));
    }
    double s = 0.0;
    for (const auto& [r, w] : radius_mass_) s += w * lambda_ * r * std::expm1(t * lambda_ * r);
    return nd * s;
}

double TauContext::tau_derivative(double t) const {
    check_domain(t, "tau_derivative");
    const double nd = static_cast<double>(n_);
    if (const auto* m = std::get_if<ExpIntensityMeasure>(&measure_)) {
        const double gap = m->beta() - lambda_ * t;
        return nd * lambda_ * lambda_ * m->alpha() / (gap * gap);
    }
    double s = 0.0;
    for (const auto& [r, w] : radius_mass_) {
        const double lr = lambda_ * r;
        s += w * lr * lr * std::exp(t * lr);
    }
    return nd * s;
}

double TauContext::phi(double t) const {
    check_domain(t, "phi");
    const double nd = static_cast<double>(n_);
    if (const auto* m = std::get_if<ExpIntensityMeasure>(&measure_)) {
        return nd * m->alpha() * neg_log1m_minus_linear(lambda_ * t / m->beta());
    }
    double s = 0.0;
    for (const auto& [r, w] : radius_mass_) s += w * numerics::exp_minus_linear(t * lambda_ * r);
    return nd * s;
}

double TauContext::range_limit() const noexcept {
    // Atomic: M = inf and tau grows exponentially. Exp-intensity: tau has a
    // pole at beta/lambda.
    return kInf;
}

double TauContext::tau_inverse(double s) const {
    if (std::isnan(s) || s < 0.0) throw DomainError("tau_inverse: s = " + fmt(s) + " must be >= 0");
    if (s == 0.0) return 0.0;
    if (!(s < range_limit())) {
        throw RangeError("tau_inverse: s = " + fmt(s) + " is not below τ((M/λ)⁻) = " +
                         fmt(range_limit()));
    }
    const double cap = std::isfinite(domain_limit_) ? domain_limit_ * (1.0 - 1e-9) : kInf;
    double hi = std::min(1.0, cap);
    while (tau(hi) < s) {
        if (hi >= cap) {
            throw RangeError("tau_inverse: s = " + fmt(s) +
                             " exceeds the numerically attainable part of τ((M/λ)⁻) (τ = " +
                             fmt(tau(cap)) + " at t = (1 - 1e-9) M/λ)");
        }
        hi = std::min(2.0 * hi, cap);
        if (!std::isfinite(tau(hi))) break;
    }
    return numerics::increasing_root([&](double t) { return tau(t) - s; },
                                     [&](double t) { return tau_derivative(t); }, 0.0, hi,
                                     kInverseRelTol);
}

double TauContext::integral_tau_inverse(double xi) const {
    if (std::isnan(xi) || xi < 0.0) throw DomainError("xi = " + fmt(xi) + " must be >= 0");
    if (xi == 0.0) return 0.0;
    const double top = tau_inverse(xi);
    // the integrand is increasing, so xi * top bounds the integral
    const double tol = std::max(kQuadratureAbsTol, kQuadratureRelTol * xi * top);
    return numerics::adaptive_simpson([&](double s) { return tau_inverse(s); }, 0.0, xi, tol, 30);
}

double tau_bounded_support_majorant(const TauContext& ctx, double t) {
    const double R = support_radius(ctx.measure());
    if (!std::isfinite(R)) throw InapplicableBound("τ majorant: bounded support required (R = inf)");
    const double lr = ctx.lambda() * R;
    return static_cast<double>(ctx.n()) * second_moment(ctx.measure()) * ctx.lambda() *
           ctx.lambda() * std::expm1(t * lr) / lr;
}

BoundReport deviation_bound_integral(const TauContext& ctx, double xi) {
    if (std::isnan(xi) || xi < 0.0) throw DomainError("xi = " + fmt(xi) + " must be >= 0");
    if (!(xi < ctx.range_limit())) {
        throw RangeError("xi = " + fmt(xi) + " must satisfy 0 < ξ < τ((M/λ)⁻) = " +
                         fmt(ctx.range_limit()));
    }
    const double log_value = -ctx.integral_tau_inverse(xi);
    return {xi,
            std::exp(log_value),
            BoundMethod::integral,
            ctx.n(),
            ctx.lambda(),
            second_moment(ctx.measure()),
            support_radius(ctx.measure()),
            nan(),
            log_value};
}

namespace {

double closed_log_value(double xi, double V, double R, double lambda, std::size_t n) {
    const double lr = lambda * R;
    const double nv = static_cast<double>(n) * V;
    const double a = xi / lr;
    const double c = nv / (lr * lr);
    return a - (a + c) * std::log1p(xi * lr / nv);
}

void require_closed_form_inputs(double V, double R, double lambda, std::size_t n) {
    if (!std::isfinite(R)) {
        throw InapplicableBound("bounded support required: R = inf; use the integral bound instead");
    }
    require_positive(V, "V");
    require_positive(R, "R");
    require_positive(lambda, "lambda");
    if (n == 0) throw DomainError("N must be at least 1");
}

}  // namespace

BoundReport deviation_bound_closed(double xi, double V, double R, double lambda, std::size_t n) {
    require_closed_form_inputs(V, R, lambda, n);
    if (std::isnan(xi) || xi < 0.0) throw DomainError("xi = " + fmt(xi) + " must be >= 0");
    const double log_value = xi == 0.0 ? 0.0 : closed_log_value(xi, V, R, lambda, n);
    return {xi, std::exp(log_value), BoundMethod::closed, n, lambda, V, R, nan(), log_value};
}

double chernoff_min(const TauContext& ctx, double xi) {
    if (std::isnan(xi) || xi < 0.0) throw DomainError("xi = " + fmt(xi) + " must be >= 0");
    if (xi == 0.0) return 0.0;
    const double t = ctx.tau_inverse(xi);
    return ctx.phi(t) - t * xi;
}

double big_gamma(double x) {
    if (std::isnan(x) || x < 0.0) throw DomainError("Gamma: x = " + fmt(x) + " must be >= 0");
    return x - (x + 1.0) * std::log1p(x);
}

double gamma_exponent(double x) {
    if (!(x > 1.0)) throw DomainError("gamma: x = " + fmt(x) + " must be > 1");
    const double l1 = std::log1p(x);
    return std::log((x + 1.0) * l1 - x) / std::log(x);
}

double gamma_exponent_derivative(double x) {
    if (!(x > 1.0)) throw DomainError("gamma': x = " + fmt(x) + " must be > 1");
    const double l1 = std::log1p(x);
    const double lx = std::log(x);
    const double g = (x + 1.0) * l1 - x;
    return l1 / (lx * g) - std::log(g) / (x * lx * lx);
}

XhatResult find_xhat() {
    const auto best = numerics::golden_section_max([](double x) { return gamma_exponent(x); },
                                                   1.0, 1e6, 1e-6);
    return {best.x, best.value};
}

void require_symmetrization_condition(double xi, std::size_t n, double A, double B) {
    const double lhs = static_cast<double>(n) * xi * xi;
    const double rhs = 32.0 * std::max(A * A, B * B);
    if (!(lhs >= rhs)) {
        throw DomainError("precondition Nξ² ≥ 32 max{A², B²} violated: Nξ² = " + fmt(lhs) +
                          ", 32 max{A², B²} = " + fmt(rhs));
    }
}

BoundReport risk_bound_integral(const TauContext& ctx, double xi, double ln_cov, double A, double B) {
    if (!(xi > 0.0)) throw DomainError("xi = " + fmt(xi) + " must be > 0");
    if (!std::isfinite(ln_cov)) throw DomainError("ln_cov must be finite");
    require_symmetrization_condition(xi, ctx.n(), A, B);
    const double radius = static_cast<double>(ctx.n()) * xi / 8.0;
    if (!(radius < ctx.range_limit())) {
        throw RangeError("precondition 0 < Nξ/8 < τ((M/λ)⁻) violated: Nξ/8 = " + fmt(radius));
    }
    const double log_value = std::log(2.0) + ln_cov - ctx.integral_tau_inverse(radius);
    return {xi,
            std::exp(log_value),
            BoundMethod::risk_integral,
            ctx.n(),
            ctx.lambda(),
            second_moment(ctx.measure()),
            support_radius(ctx.measure()),
            ln_cov,
            log_value};
}

BoundReport risk_bound_closed(double xi, std::size_t n, double ln_cov, double V, double R,
                              double lambda, double A, double B) {
    require_closed_form_inputs(V, R, lambda, n);
    if (!(xi > 0.0)) throw DomainError("xi = " + fmt(xi) + " must be > 0");
    if (!std::isfinite(ln_cov)) throw DomainError("ln_cov must be finite");
    require_symmetrization_condition(xi, n, A, B);
    const double lr = lambda * R;
    const double exponent = static_cast<double>(n) * V / (lr * lr) * big_gamma(xi * lr / (8.0 * V));
    const double log_value = std::log(2.0) + ln_cov + exponent;
    return {xi, std::exp(log_value), BoundMethod::risk_closed, n, lambda, V, R, ln_cov, log_value};
}

DeviationRadius sup_deviation_radius(double epsilon, std::size_t n, double ln_cov, double V,
                                     double R, double lambda, double gamma) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw DomainError("epsilon = " + fmt(epsilon) + " must lie in (0, 1)");
    }
    require_closed_form_inputs(V, R, lambda, n);
    require_positive(gamma, "gamma");
    const double confidence_term = ln_cov - std::log(epsilon / 2.0);
    if (!(confidence_term > 0.0)) {
        throw DomainError("ln_cov - ln(ε/2) must be positive (got " + fmt(confidence_term) + ")");
    }
    const double lr = lambda * R;
    const double scale = lr / (8.0 * V);
    const double base =
        8.0 * lr * confidence_term / (static_cast<double>(n) * std::pow(scale, gamma - 1.0));
    const double radius = std::pow(base, 1.0 / gamma);
    const double x = radius * scale;
    const bool admissible = x > 1.0 && gamma <= gamma_exponent(x);
    return {radius, x, admissible};
}

}  // namespace idrisk
