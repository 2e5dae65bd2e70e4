#pragma once

#include "idrisk/levy.hpp"
#include "idrisk/rng.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace idrisk {

/// Poisson(rate) variate. Inversion by sequential search below rate 10,
/// Hormann's transformed rejection (PTRS) at and above it.
long sample_poisson(Rng& rng, double rate);

/// i.i.d. draws z_1..z_N stored row-major, plus their provenance.
class SampleSet {
public:
    SampleSet(std::size_t dimension, std::vector<double> data, std::uint64_t seed,
              std::string triplet_id);

    std::size_t size() const noexcept { return data_.size() / dimension_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::span<const double> point(std::size_t n) const noexcept {
        return {data_.data() + n * dimension_, dimension_};
    }
    /// Flat row-major storage.
    std::span<const double> data() const noexcept { return data_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& triplet_id() const noexcept { return triplet_id_; }

    friend bool operator==(const SampleSet&, const SampleSet&) = default;

private:
    std::size_t dimension_;
    std::vector<double> data_;
    std::uint64_t seed_;
    std::string triplet_id_;
};

/// Exact sampler for a finite-activity triplet:
///   z = a - sum_{|u_i| <= 1} w_i u_i + sum_i k_i u_i,  k_i ~ Poisson(w_i) independent.
class CompoundPoissonSampler {
public:
    /// Throws UnsupportedOperation for infinite-activity triplets.
    explicit CompoundPoissonSampler(const GeneratingTriplet& triplet);

    std::size_t dimension() const noexcept { return base_.size(); }

    /// Writes one draw into `out` (size = dimension()).
    void draw(Rng& rng, std::span<double> out) const;
    Vector draw(Rng& rng) const;

private:
    Vector base_;  // drift minus the small-jump compensator
    std::vector<Atom> atoms_;
};

Vector sample_one(const GeneratingTriplet& triplet, Rng& rng);

/// N draws; point n uses substream (seed, n). Output depends only on
/// (triplet, N, seed), never on `workers`.
SampleSet sample_set(const GeneratingTriplet& triplet, std::size_t n, std::uint64_t seed,
                     unsigned workers = 0);

/// Same as sample_set with a prebuilt sampler.
SampleSet sample_set(const CompoundPoissonSampler& sampler, std::size_t n, std::uint64_t seed,
                     const std::string& triplet_id, unsigned workers = 0);

/// (1/N) sum_n exp(i <theta, z_n>).
std::complex<double> empirical_char_function(const SampleSet& samples,
                                             std::span<const double> theta);

/// CSV with header z_0..z_{K-1}, one row per point, values at %.17g.
void write_samples_csv(const SampleSet& samples, const std::filesystem::path& path);
std::string samples_csv(const SampleSet& samples);

/// Reads a file written by write_samples_csv. Provenance is not stored in
/// the file: seed is 0 and triplet_id is "csv:<filename>".
SampleSet read_samples_csv(const std::filesystem::path& path);

}  // namespace idrisk
