#pragma once

// Seeded generation of sensing ensembles, sparse ground-truth signals,
// measurements, and additive noise. Everything is a pure function of its
// seed; experiment drivers derive child seeds with trial_seed so results
// never depend on execution order.

#include <cstdint>

#include "otk/numerics.hpp"
#include "otk/rng.hpp"

namespace otk {

enum class Ensemble { Gaussian, Bernoulli };

const char* to_string(Ensemble e);

struct SensingMatrix {
    Matrix matrix;
    Ensemble ensemble = Ensemble::Gaussian;
    std::uint64_t seed = 0;
    double K = 0.0;  // sub-Gaussian norm proxy of a single entry
};

struct SparseSignal {
    Vec x_star;
    std::vector<std::size_t> support;  // ascending, |support| = k
    std::uint64_t seed = 0;
};

struct MeasurementSet {
    Vec y;
    Vec noise;
    double noise_norm = 0.0;
};

/// Entry psi_2 norms: sqrt(8/3) for a standard normal, 1/sqrt(ln 2) for a
/// symmetric +-1 variable.
double subgaussian_norm_proxy(Ensemble e);

/// m x n matrix filled in row-major order from the seeded stream. Gaussian
/// entries come from NormalStream(seed); Bernoulli entries take one sign per
/// entry from SplitMix64(seed).
SensingMatrix make_matrix(std::size_t m, std::size_t n, Ensemble ensemble, std::uint64_t seed);

/// k-sparse signal: the support is the first k entries of a partial
/// Fisher-Yates shuffle of 0..n-1 driven by SplitMix64(seed), sorted
/// ascending; the nonzero values are then drawn from the same stream via
/// Box-Muller, assigned in ascending index order.
SparseSignal make_signal(std::size_t n, std::size_t k, std::uint64_t seed);

/// y = A x_star + noise with noise entries iid Normal(0, noise_sigma^2) from
/// NormalStream(seed). noise_sigma = 0 yields exactly y = A x_star.
MeasurementSet measure(const SensingMatrix& A, const SparseSignal& x, double noise_sigma,
                       std::uint64_t seed);

/// Stream tags for trial_seed; p (the iteration budget) never enters seeding,
/// so one instance serves every budget.
enum class Stream : std::uint64_t { MatrixEntries = 1, SignalEntries = 2, NoiseEntries = 3 };

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t m, std::size_t trial,
                                Stream tag) {
    return hash64({master_seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial),
                   static_cast<std::uint64_t>(tag)});
}

}  // namespace otk
