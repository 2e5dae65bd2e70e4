#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

namespace idrisk::numerics {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
/// Each bisection halves the local tolerance; recursion stops at `max_depth`.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

struct GoldenResult {
    double x;
    double value;
};

/// Maximizes a unimodal f on [lo, hi] by golden-section search until the
/// bracket is narrower than x_tol.
template <class F>
GoldenResult golden_section_max(F&& f, double lo, double hi, double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

/// Root of a strictly increasing g on [lo, hi] with g(lo) <= 0 <= g(hi).
/// Newton steps are taken when they stay inside the current bracket,
/// bisection otherwise. Stops at relative x tolerance rel_tol.
template <class G, class DG>
double increasing_root(G&& g, DG&& dg, double lo, double hi, double rel_tol = 1e-12,
                       int max_iter = 400) {
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const double gx = g(x);
        if (gx == 0.0) return x;
        if (gx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= rel_tol * std::abs(hi)) return 0.5 * (lo + hi);

        const double slope = dg(x);
        double next = (slope > 0.0 && std::isfinite(slope)) ? x - gx / slope : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 0.25 * rel_tol * std::abs(x)) return next;
        x = next;
    }
    return x;
}

/// Pairwise (cascade) summation; order-fixed, so deterministic.
double pairwise_sum(std::span<const double> values) noexcept;

/// Exact (Clopper-Pearson) two-sided binomial confidence interval for
/// `hits` successes in `trials` at the given confidence level.
std::pair<double, double> clopper_pearson(std::size_t hits, std::size_t trials,
                                          double confidence = 0.95);

/// e^x - x - 1 without cancellation for small |x|.
double exp_minus_linear(double x) noexcept;

/// Poisson probability mass function, evaluated in log space.
double poisson_pmf(long k, double rate) noexcept;

}  // namespace idrisk::numerics
