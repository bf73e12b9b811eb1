#include "otk/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace otk {

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1]: add one ulp-step before scaling so log(u1) is finite.
    const double u1 = static_cast<double>((rng_.next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = rng_.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

const char* to_string(Ensemble e) {
    return e == Ensemble::Gaussian ? "gaussian" : "bernoulli";
}

double subgaussian_norm_proxy(Ensemble e) {
    return e == Ensemble::Gaussian ? std::sqrt(8.0 / 3.0) : 1.0 / std::sqrt(std::log(2.0));
}

SensingMatrix make_matrix(std::size_t m, std::size_t n, Ensemble ensemble, std::uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("make_matrix: m, n must be >= 1");
    SensingMatrix sm;
    sm.matrix = Matrix(m, n);
    sm.ensemble = ensemble;
    sm.seed = seed;
    sm.K = subgaussian_norm_proxy(ensemble);
    if (ensemble == Ensemble::Gaussian) {
        NormalStream g(seed);
        for (double& e : sm.matrix.data) e = g.next();
    } else {
        SplitMix64 rng(seed);
        for (double& e : sm.matrix.data) e = rng.next_sign();
    }
    return sm;
}

SparseSignal make_signal(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 1 || k > n) throw std::invalid_argument("make_signal: need 1 <= k <= n");
    SparseSignal sig;
    sig.seed = seed;
    sig.x_star.assign(n, 0.0);

    SplitMix64 rng(seed);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
        std::swap(idx[i], idx[j]);
    }
    sig.support.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(sig.support.begin(), sig.support.end());

    // Continue on the same stream for the values (Box-Muller state of its own).
    NormalStream values(rng.next_u64());
    for (std::size_t i : sig.support) sig.x_star[i] = values.next();
    return sig;
}

MeasurementSet measure(const SensingMatrix& A, const SparseSignal& x, double noise_sigma,
                       std::uint64_t seed) {
    if (noise_sigma < 0.0) throw std::invalid_argument("measure: noise_sigma must be >= 0");
    MeasurementSet ms;
    ms.y = matvec(A.matrix, x.x_star);
    ms.noise.assign(A.matrix.rows, 0.0);
    if (noise_sigma > 0.0) {
        NormalStream g(seed);
        for (double& e : ms.noise) e = noise_sigma * g.next();
        for (std::size_t i = 0; i < ms.y.size(); ++i) ms.y[i] += ms.noise[i];
    }
    ms.noise_norm = norm2(ms.noise);
    return ms;
}

}  // namespace otk
