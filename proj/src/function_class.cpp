#include "idrisk/function_class.hpp"

#include "idrisk/error.hpp"
#include "idrisk/numerics.hpp"
#include "idrisk/parallel.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace idrisk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_scalar(const SampleSet& samples, const char* op) {
    if (samples.dimension() != 1) {
        throw DomainError(std::string(op) + ": scalar samples required (K = " +
                          std::to_string(samples.dimension()) + ")");
    }
}

}  // namespace

double evaluate(const ScalarFunction& f, double z) noexcept {
    return std::visit([z](const auto& g) { return g(z); }, f);
}

double lipschitz_constant(const ScalarFunction& f) noexcept {
    return std::visit(overloaded{
                          [](const Identity&) { return 1.0; },
                          [](const Ramp& r) { return r.slope; },
                      },
                      f);
}

std::pair<double, double> value_range(const ScalarFunction& f) noexcept {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(overloaded{
                          [](const Identity&) { return std::pair{-inf, inf}; },
                          [](const Ramp& r) { return std::pair{0.0, r.slope * r.cap}; },
                      },
                      f);
}

LipschitzRampFamily::LipschitzRampFamily(std::vector<double> thetas, double slope, double cap)
    : thetas_(std::move(thetas)), slope_(slope), cap_(cap) {
    if (thetas_.empty()) throw DomainError("family: thetas is empty");
    if (!(slope_ > 0.0) || !std::isfinite(slope_)) throw DomainError("family: lambda must be positive");
    if (!(cap_ > 0.0) || !std::isfinite(cap_)) throw DomainError("family: cap must be positive");
    for (std::size_t i = 0; i < thetas_.size(); ++i) {
        if (!std::isfinite(thetas_[i])) throw DomainError("family: thetas must be finite");
        if (i > 0 && !(thetas_[i] > thetas_[i - 1])) {
            throw DomainError("family: thetas must be strictly increasing");
        }
    }
}

double empirical_risk(const ScalarFunction& f, const SampleSet& samples) {
    require_scalar(samples, "empirical_risk");
    if (samples.size() == 0) throw DomainError("empirical_risk: empty sample set");
    std::vector<double> values(samples.size());
    const auto z = samples.data();
    for (std::size_t n = 0; n < values.size(); ++n) values[n] = evaluate(f, z[n]);
    return numerics::pairwise_sum(values) / static_cast<double>(values.size());
}

std::optional<LatticeLaw> lattice_law(const GeneratingTriplet& triplet, double tail_mass,
                                      std::size_t max_states) {
    if (!triplet.finite_activity() || triplet.dimension() != 1) return std::nullopt;
    const auto& atoms = triplet.atomic("lattice_law").atoms();

    double base = triplet.drift()[0];
    for (const auto& atom : atoms) {
        if (std::abs(atom.location[0]) <= 1.0) base -= atom.mass * atom.location[0];
    }

    // Support points are merged on a 2^-30 grid; jump sizes on a common
    // lattice collapse onto few keys, incommensurable ones overflow max_states.
    constexpr double kKeyScale = 1073741824.0;
    struct Cell {
        double offset;
        double prob;
    };
    std::unordered_map<long long, Cell> law{{0, {0.0, 1.0}}};
    const double per_atom_tail = tail_mass / static_cast<double>(atoms.size());

    for (const auto& atom : atoms) {
        const double w = atom.mass;
        const double u = atom.location[0];
        std::vector<double> pmf;
        double cdf = 0.0;
        for (long k = 0;; ++k) {
            const double p = numerics::poisson_pmf(k, w);
            pmf.push_back(p);
            cdf += p;
            if (static_cast<double>(k) > w && 1.0 - cdf < per_atom_tail) break;
            if (k > 100000) return std::nullopt;
        }
        std::unordered_map<long long, Cell> next;
        next.reserve(law.size() * pmf.size());
        for (const auto& [key, cell] : law) {
            for (std::size_t k = 0; k < pmf.size(); ++k) {
                const double offset = cell.offset + static_cast<double>(k) * u;
                const long long nk = std::llround(offset * kKeyScale);
                auto [it, inserted] = next.try_emplace(nk, Cell{offset, 0.0});
                it->second.prob += cell.prob * pmf[k];
            }
            if (next.size() > max_states) return std::nullopt;
        }
        law = std::move(next);
    }

    std::vector<std::pair<double, double>> sorted;
    sorted.reserve(law.size());
    for (const auto& [key, cell] : law) sorted.emplace_back(base + cell.offset, cell.prob);
    std::sort(sorted.begin(), sorted.end());
    LatticeLaw out;
    double total = 0.0;
    for (const auto& [v, p] : sorted) {
        out.values.push_back(v);
        out.probs.push_back(p);
    }
    total = numerics::pairwise_sum(out.probs);
    out.dropped_mass = std::max(0.0, 1.0 - total);
    return out;
}

double expected_risk(const ScalarFunction& f, const LatticeLaw& law) noexcept {
    std::vector<double> terms(law.values.size());
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = law.probs[i] * evaluate(f, law.values[i]);
    return numerics::pairwise_sum(terms);
}

RiskValue expected_risk_mc(const ScalarFunction& f, const GeneratingTriplet& triplet,
                           std::size_t draws, std::uint64_t seed, unsigned workers) {
    if (draws < 2) throw DomainError("expected_risk_mc: at least 2 draws required");
    if (triplet.dimension() != 1) throw DomainError("expected_risk_mc: scalar triplet required");
    const auto samples = sample_set(triplet, draws, seed, workers);
    std::vector<double> values(draws);
    std::vector<double> squares(draws);
    const auto z = samples.data();
    for (std::size_t n = 0; n < draws; ++n) {
        values[n] = evaluate(f, z[n]);
    }
    const double nd = static_cast<double>(draws);
    const double mean = numerics::pairwise_sum(values) / nd;
    for (std::size_t n = 0; n < draws; ++n) squares[n] = (values[n] - mean) * (values[n] - mean);
    const double variance = numerics::pairwise_sum(squares) / (nd - 1.0);
    return {mean, std::sqrt(variance / nd), false};
}

RiskValue expected_risk(const ScalarFunction& f, const GeneratingTriplet& triplet,
                        std::uint64_t mc_seed, std::size_t mc_draws) {
    if (triplet.dimension() != 1) throw DomainError("expected_risk: scalar triplet required");
    if (std::holds_alternative<Identity>(f)) {
        return {mean_vector(triplet)[0], 0.0, true};
    }
    if (const auto law = lattice_law(triplet)) return {expected_risk(f, *law), 0.0, true};
    return expected_risk_mc(f, triplet, mc_draws, mc_seed);
}

DistanceMatrix::DistanceMatrix(std::size_t size, std::vector<double> entries)
    : size_(size), d_(std::move(entries)) {
    if (d_.size() != size_ * size_) throw DomainError("distance matrix: wrong number of entries");
}

DistanceMatrix DistanceMatrix::l1(const LipschitzRampFamily& family, std::span<const double> points) {
    if (points.empty()) throw DomainError("L1 distance: empty sample set");
    const std::size_t m = family.size();
    const std::size_t n = points.size();
    std::vector<double> values(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        const Ramp f = family.member(i);
        for (std::size_t k = 0; k < n; ++k) values[i * n + k] = f(points[k]);
    }
    std::vector<double> d(m * m, 0.0);
    std::vector<double> diffs(n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (std::size_t k = 0; k < n; ++k) diffs[k] = std::abs(values[i * n + k] - values[j * n + k]);
            const double dist = numerics::pairwise_sum(diffs) / static_cast<double>(n);
            d[i * m + j] = dist;
            d[j * m + i] = dist;
        }
    }
    return DistanceMatrix(m, std::move(d));
}

double DistanceMatrix::diameter() const noexcept {
    return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

std::size_t greedy_cover_size(const DistanceMatrix& d, double radius) {
    const std::size_t m = d.size();
    std::vector<bool> covered(m, false);
    std::size_t remaining = m;
    std::size_t centres = 0;
    while (remaining > 0) {
        std::size_t best = 0;
        std::size_t best_gain = 0;
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t gain = 0;
            for (std::size_t j = 0; j < m; ++j) {
                if (!covered[j] && d(c, j) <= radius) ++gain;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (!covered[j] && d(best, j) <= radius) {
                covered[j] = true;
                --remaining;
            }
        }
        ++centres;
    }
    return centres;
}

namespace {

bool cover_exists(const std::vector<std::uint32_t>& balls, std::uint32_t full, std::size_t start,
                  std::size_t left, std::uint32_t acc) {
    if (acc == full) return true;
    if (left == 0) return false;
    for (std::size_t c = start; c + left <= balls.size(); ++c) {
        if (cover_exists(balls, full, c + 1, left - 1, acc | balls[c])) return true;
    }
    return false;
}

}  // namespace

std::size_t exact_cover_size(const DistanceMatrix& d, double radius) {
    const std::size_t m = d.size();
    if (m > 20) throw DomainError("exact cover: at most 20 members supported");
    std::vector<std::uint32_t> balls(m, 0);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t j = 0; j < m; ++j) {
            if (d(c, j) <= radius) balls[c] |= (1u << j);
        }
    }
    const std::uint32_t full = m == 32 ? ~0u : ((1u << m) - 1u);
    for (std::size_t k = 1; k <= m; ++k) {
        if (cover_exists(balls, full, 0, k, 0u)) return k;
    }
    return m;
}

CoverResult covering_number_L1(const LipschitzRampFamily& family, double xi, const SampleSet& samples) {
    require_scalar(samples, "covering_number_L1");
    if (std::isnan(xi) || xi < 0.0) throw DomainError("covering_number_L1: xi must be >= 0");
    const auto d = DistanceMatrix::l1(family, samples.data());
    CoverResult result{greedy_cover_size(d, xi), std::nullopt};
    if (family.size() <= 20) result.exact = exact_cover_size(d, xi);
    return result;
}

double sup_deviation(const LipschitzRampFamily& family, const SampleSet& samples,
                     std::span<const double> expected_risks) {
    if (expected_risks.size() != family.size()) {
        throw DomainError("sup_deviation: one expected risk per member required");
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        sup = std::max(sup, std::abs(empirical_risk(family.member(i), samples) - expected_risks[i]));
    }
    return sup;
}

double sup_deviation(const LipschitzRampFamily& family, const SampleSet& samples,
                     const GeneratingTriplet& triplet) {
    std::vector<double> risks(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        risks[i] = expected_risk(family.member(i), triplet).value;
    }
    return sup_deviation(family, samples, risks);
}

double estimate_ln_covering(const LipschitzRampFamily& family, const GeneratingTriplet& triplet,
                            std::size_t n, double radius, std::size_t replicates,
                            std::uint64_t seed, unsigned workers) {
    if (replicates == 0) throw DomainError("estimate_ln_covering: replicates must be positive");
    if (n == 0) throw DomainError("estimate_ln_covering: N must be at least 1");
    const CompoundPoissonSampler sampler(triplet);
    const std::string id = fingerprint(triplet);
    std::vector<double> sizes(replicates);
    // replicates run in parallel; each double sample is drawn serially
    parallel_for(replicates, workers, [&](std::size_t r) {
        const auto double_sample = sample_set(sampler, 2 * n, derive_seed(seed, r), id, 1);
        const auto d = DistanceMatrix::l1(family, double_sample.data());
        sizes[r] = static_cast<double>(greedy_cover_size(d, radius));
    });
    return std::log(numerics::pairwise_sum(sizes) / static_cast<double>(replicates));
}

}  // namespace idrisk
