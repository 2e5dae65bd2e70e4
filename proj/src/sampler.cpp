#include "idrisk/sampler.hpp"

#include "idrisk/error.hpp"
#include "idrisk/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace idrisk {

namespace {

long poisson_inversion(Rng& rng, double rate) {
    const double u = rng.uniform();
    long k = 0;
    double p = std::exp(-rate);
    double cdf = p;
    // the cap only matters if u lands in the last ~1e-16 of mass
    while (u > cdf && k < 1000) {
        ++k;
        p *= rate / static_cast<double>(k);
        cdf += p;
        if (p == 0.0) break;
    }
    return k;
}

long poisson_ptrs(Rng& rng, double rate) {
    const double log_rate = std::log(rate);
    const double b = 0.931 + 2.53 * std::sqrt(rate);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    while (true) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + rate + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long>(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        if (kd > static_cast<double>(std::numeric_limits<long>::max() / 2)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -rate + kd * log_rate - std::lgamma(kd + 1.0);
        if (lhs <= rhs) return static_cast<long>(kd);
    }
}

}  // namespace

long sample_poisson(Rng& rng, double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw DomainError("sample_poisson: rate must be finite and non-negative");
    }
    if (rate == 0.0) return 0;
    return rate < 10.0 ? poisson_inversion(rng, rate) : poisson_ptrs(rng, rate);
}

SampleSet::SampleSet(std::size_t dimension, std::vector<double> data, std::uint64_t seed,
                     std::string triplet_id)
    : dimension_(dimension), data_(std::move(data)), seed_(seed), triplet_id_(std::move(triplet_id)) {
    if (dimension_ == 0) throw DomainError("sample set: dimension must be positive");
    if (data_.size() % dimension_ != 0) {
        throw DomainError("sample set: data length is not a multiple of the dimension");
    }
}

CompoundPoissonSampler::CompoundPoissonSampler(const GeneratingTriplet& triplet)
    : base_(triplet.drift()), atoms_(triplet.atomic("sample").atoms()) {
    for (const auto& atom : atoms_) {
        if (euclidean_norm(atom.location) <= 1.0) {
            for (std::size_t k = 0; k < base_.size(); ++k) {
                base_[k] -= atom.mass * atom.location[k];
            }
        }
    }
}

void CompoundPoissonSampler::draw(Rng& rng, std::span<double> out) const {
    std::copy(base_.begin(), base_.end(), out.begin());
    for (const auto& atom : atoms_) {
        const long count = sample_poisson(rng, atom.mass);
        if (count == 0) continue;
        const double c = static_cast<double>(count);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * atom.location[k];
    }
}

Vector CompoundPoissonSampler::draw(Rng& rng) const {
    Vector out(base_.size());
    draw(rng, out);
    return out;
}

Vector sample_one(const GeneratingTriplet& triplet, Rng& rng) {
    return CompoundPoissonSampler(triplet).draw(rng);
}

SampleSet sample_set(const CompoundPoissonSampler& sampler, std::size_t n, std::uint64_t seed,
                     const std::string& triplet_id, unsigned workers) {
    if (n == 0) throw DomainError("sample_set: N must be at least 1");
    const std::size_t k = sampler.dimension();
    std::vector<double> data(n * k);
    parallel_for(n, workers, [&](std::size_t i) {
        Rng rng = Rng::substream(seed, i);
        sampler.draw(rng, std::span<double>(data.data() + i * k, k));
    });
    return SampleSet(k, std::move(data), seed, triplet_id);
}

SampleSet sample_set(const GeneratingTriplet& triplet, std::size_t n, std::uint64_t seed,
                     unsigned workers) {
    return sample_set(CompoundPoissonSampler(triplet), n, seed, fingerprint(triplet), workers);
}

std::complex<double> empirical_char_function(const SampleSet& samples, std::span<const double> theta) {
    if (theta.size() != samples.dimension()) {
        throw DomainError("empirical_char_function: theta has dimension " +
                          std::to_string(theta.size()) + ", samples have dimension " +
                          std::to_string(samples.dimension()));
    }
    if (samples.size() == 0) throw DomainError("empirical_char_function: empty sample set");
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const auto z = samples.point(n);
        const double s = std::inner_product(z.begin(), z.end(), theta.begin(), 0.0);
        re += std::cos(s);
        im += std::sin(s);
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    return {re * inv, im * inv};
}

std::string samples_csv(const SampleSet& samples) {
    std::string out;
    for (std::size_t k = 0; k < samples.dimension(); ++k) {
        if (k) out += ',';
        out += "z_" + std::to_string(k);
    }
    out += '\n';
    char buf[32];
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const auto z = samples.point(n);
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (k) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", z[k]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void write_samples_csv(const SampleSet& samples, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file << samples_csv(samples);
    if (!file) throw IoError("write failed: " + path.string());
}

SampleSet read_samples_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open " + path.string() + " for reading");
    std::string line;
    if (!std::getline(file, line)) throw IoError(path.string() + ": missing header");
    std::size_t dim = 0;
    {
        std::stringstream header(line);
        std::string cell;
        while (std::getline(header, cell, ',')) {
            if (cell != "z_" + std::to_string(dim)) {
                throw IoError(path.string() + ": unexpected header column '" + cell + "'");
            }
            ++dim;
        }
    }
    if (dim == 0) throw IoError(path.string() + ": empty header");
    std::vector<double> data;
    std::size_t row = 1;
    while (std::getline(file, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream cells(line);
        std::string cell;
        std::size_t count = 0;
        while (std::getline(cells, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') {
                throw IoError(path.string() + ": row " + std::to_string(row) +
                              " has a non-numeric cell");
            }
            data.push_back(v);
            ++count;
        }
        if (count != dim) {
            throw IoError(path.string() + ": row " + std::to_string(row) + " has " +
                          std::to_string(count) + " columns, expected " + std::to_string(dim));
        }
    }
    return SampleSet(dim, std::move(data), 0, "csv:" + path.filename().string());
}

}  // namespace idrisk
