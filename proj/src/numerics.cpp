#include "idrisk/numerics.hpp"

#include "idrisk/error.hpp"

#include <boost/math/special_functions/beta.hpp>

namespace idrisk::numerics {

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::pair<double, double> clopper_pearson(std::size_t hits, std::size_t trials, double confidence) {
    if (trials == 0) throw DomainError("clopper_pearson: trials must be positive");
    if (hits > trials) throw DomainError("clopper_pearson: hits exceed trials");
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw DomainError("clopper_pearson: confidence must lie in (0, 1)");
    }
    const double alpha = 1.0 - confidence;
    const double k = static_cast<double>(hits);
    const double n = static_cast<double>(trials);
    const double lo = hits == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
    const double hi = hits == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
    return {lo, hi};
}

double exp_minus_linear(double x) noexcept {
    if (std::abs(x) < 1e-3) {
        // x^2/2 + x^3/6 + x^4/24 + x^5/120
        return x * x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x / 120.0)));
    }
    return std::expm1(x) - x;
}

double poisson_pmf(long k, double rate) noexcept {
    if (k < 0) return 0.0;
    if (rate == 0.0) return k == 0 ? 1.0 : 0.0;
    const double kd = static_cast<double>(k);
    return std::exp(kd * std::log(rate) - rate - std::lgamma(kd + 1.0));
}

}  // namespace idrisk::numerics
