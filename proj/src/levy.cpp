#include "idrisk/levy.hpp"

#include "idrisk/error.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>

namespace idrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

double euclidean_norm(std::span<const double> v) noexcept {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("atomic measure: atom list is empty");
    const std::size_t k = atoms_.front().location.size();
    if (k == 0) throw DomainError("atomic measure: atom location has dimension 0");
    for (const auto& atom : atoms_) {
        if (atom.location.size() != k) {
            throw DomainError("atomic measure: atoms have inconsistent dimensions");
        }
        for (double x : atom.location) {
            if (!std::isfinite(x)) throw DomainError("atomic measure: atom location is not finite");
        }
        if (euclidean_norm(atom.location) == 0.0) {
            throw DomainError("atomic measure: atom at the origin (nu({0}) must be 0)");
        }
        if (!(atom.mass > 0.0) || !std::isfinite(atom.mass)) {
            throw DomainError("atomic measure: atom mass must be positive and finite");
        }
    }
    double levy_integral = 0.0;
    for (const auto& atom : atoms_) {
        const double r = euclidean_norm(atom.location);
        levy_integral += atom.mass * std::min(r * r, 1.0);
    }
    if (!std::isfinite(levy_integral)) {
        throw DomainError("atomic measure: integral of min(|u|^2, 1) is not finite");
    }
}

double AtomicMeasure::total_mass() const noexcept {
    double s = 0.0;
    for (const auto& atom : atoms_) s += atom.mass;
    return s;
}

ExpIntensityMeasure::ExpIntensityMeasure(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError("exp_intensity measure: alpha must be positive and finite");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("exp_intensity measure: beta must be positive and finite");
    }
}

std::size_t dimension(const LevyMeasure& measure) noexcept {
    return std::visit([](const auto& m) { return m.dimension(); }, measure);
}

double second_moment(const LevyMeasure& measure) noexcept {
    return std::visit(overloaded{
                          [](const AtomicMeasure& m) {
                              double v = 0.0;
                              for (const auto& atom : m.atoms()) {
                                  const double r = euclidean_norm(atom.location);
                                  v += atom.mass * r * r;
                              }
                              return v;
                          },
                          [](const ExpIntensityMeasure& m) {
                              return m.alpha() / (m.beta() * m.beta());
                          },
                      },
                      measure);
}

double support_radius(const LevyMeasure& measure) noexcept {
    return std::visit(overloaded{
                          [](const AtomicMeasure& m) {
                              double r = 0.0;
                              for (const auto& atom : m.atoms()) {
                                  r = std::max(r, euclidean_norm(atom.location));
                              }
                              return r;
                          },
                          [](const ExpIntensityMeasure&) { return kInf; },
                      },
                      measure);
}

double exp_moment_radius(const LevyMeasure& measure) noexcept {
    return std::visit(overloaded{
                          [](const AtomicMeasure&) { return kInf; },
                          [](const ExpIntensityMeasure& m) { return m.beta(); },
                      },
                      measure);
}

double total_mass(const LevyMeasure& measure) noexcept {
    return std::visit(overloaded{
                          [](const AtomicMeasure& m) { return m.total_mass(); },
                          [](const ExpIntensityMeasure&) { return kInf; },
                      },
                      measure);
}

GeneratingTriplet::GeneratingTriplet(Vector drift, LevyMeasure measure)
    : drift_(std::move(drift)), measure_(std::move(measure)) {
    if (drift_.size() != idrisk::dimension(measure_)) {
        throw DomainError("generating triplet: drift dimension " + std::to_string(drift_.size()) +
                          " does not match measure dimension " +
                          std::to_string(idrisk::dimension(measure_)));
    }
    for (double x : drift_) {
        if (!std::isfinite(x)) throw DomainError("generating triplet: drift is not finite");
    }
}

const AtomicMeasure& GeneratingTriplet::atomic(const char* operation) const {
    if (const auto* m = std::get_if<AtomicMeasure>(&measure_)) return *m;
    throw UnsupportedOperation(std::string(operation) +
                               ": not supported for an infinite-activity measure");
}

std::complex<double> char_exponent(const GeneratingTriplet& triplet, std::span<const double> theta) {
    if (theta.size() != triplet.dimension()) {
        throw DomainError("char_exponent: theta has dimension " + std::to_string(theta.size()) +
                          ", triplet has dimension " + std::to_string(triplet.dimension()));
    }
    using namespace std::complex_literals;
    const std::complex<double> drift_term = 1i * dot(triplet.drift(), theta);
    return drift_term +
           std::visit(overloaded{
                          [&](const AtomicMeasure& m) {
                              std::complex<double> acc = 0.0;
                              for (const auto& atom : m.atoms()) {
                                  const double s = dot(theta, atom.location);
                                  const double comp =
                                      euclidean_norm(atom.location) <= 1.0 ? s : 0.0;
                                  // e^{is} - 1 written with expm1-style accuracy for small s
                                  const std::complex<double> jump(-2.0 * std::pow(std::sin(s / 2), 2),
                                                                  std::sin(s) - comp);
                                  acc += atom.mass * jump;
                              }
                              return acc;
                          },
                          [&](const ExpIntensityMeasure& m) {
                              const double t = theta[0];
                              const double a = m.alpha();
                              const double b = m.beta();
                              // Frullani: int (e^{itu} - 1) u^-1 e^{-bu} du = -log(1 - it/b)
                              const std::complex<double> jumps = -a * std::log(1.0 - 1i * (t / b));
                              const double compensator = t * a * (-std::expm1(-b)) / b;
                              return jumps - 1i * compensator;
                          },
                      },
                      triplet.measure());
}

Vector mean_vector(const GeneratingTriplet& triplet) {
    const auto& m = triplet.atomic("mean_vector");
    Vector mean = triplet.drift();
    for (const auto& atom : m.atoms()) {
        if (euclidean_norm(atom.location) > 1.0) {
            for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += atom.mass * atom.location[k];
        }
    }
    return mean;
}

GeneratingTriplet divided_triplet(const GeneratingTriplet& triplet, unsigned pieces) {
    if (pieces == 0) throw DomainError("divided_triplet: pieces must be positive");
    const double m = static_cast<double>(pieces);
    Vector drift = triplet.drift();
    for (double& x : drift) x /= m;
    return std::visit(overloaded{
                          [&](const AtomicMeasure& measure) {
                              std::vector<Atom> atoms = measure.atoms();
                              for (auto& atom : atoms) atom.mass /= m;
                              return GeneratingTriplet(drift, AtomicMeasure(std::move(atoms)));
                          },
                          [&](const ExpIntensityMeasure& measure) {
                              return GeneratingTriplet(
                                  drift, ExpIntensityMeasure(measure.alpha() / m, measure.beta()));
                          },
                      },
                      triplet.measure());
}

std::string fingerprint(const GeneratingTriplet& triplet) {
    std::string text;
    char buf[40];
    auto put = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g,", x);
        text += buf;
    };
    for (double x : triplet.drift()) put(x);
    text += '|';
    std::visit(overloaded{
                   [&](const AtomicMeasure& m) {
                       for (const auto& atom : m.atoms()) {
                           for (double x : atom.location) put(x);
                           text += ':';
                           put(atom.mass);
                       }
                   },
                   [&](const ExpIntensityMeasure& m) {
                       text += "exp:";
                       put(m.alpha());
                       put(m.beta());
                   },
               },
               triplet.measure());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace idrisk
