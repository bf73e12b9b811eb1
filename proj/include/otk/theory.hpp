#pragma once

// Numerical evaluation of the convergence analysis behind ROT/ROTP: Monte
// Carlo Gaussian-complexity estimates for sparse caps, the convergence-rate
// constants and their measurement thresholds, and exact deviation suprema of
// sensing matrices over sparse caps on small instances.

#include <cstdint>
#include <optional>
#include <string>

#include "otk/numerics.hpp"
#include "otk/sensing.hpp"

namespace otk {

/// Exact supremum of |<g, x>| over the sparse cap
/// D_k = {x : ||x||_0 <= k, ||x||_2 = 1}: the l2 norm of the k
/// largest-magnitude entries of g.
double top_k_magnitude_norm(const Vec& g, std::size_t k);

struct GammaEstimate {
    std::size_t n = 0, k = 0, samples = 0;
    double gamma_hat = 0.0;  // mean of the per-draw suprema
    double width_hat = 0.0;  // equals gamma_hat: the cap is sign-symmetric
    double std_error = 0.0;
};

/// Monte Carlo estimate of the Gaussian complexity gamma(D_k) from `samples`
/// standard normal draws. Requires samples >= 100 and 1 <= k <= n.
GammaEstimate estimate_gamma(std::size_t n, std::size_t k, std::size_t samples,
                             std::uint64_t seed);

struct TheoryParams {
    std::size_t m = 0, n = 0, k = 0;
    double eta = 0.0;       // step size; must satisfy eta * m <= 1
    double ck2 = 1.0;       // the product C*K^2, exposed as one knob
    double gamma_2k = 0.0;  // gamma(D_2k), estimated or supplied
    double gamma_k = 0.0;   // gamma(D_k); defaults to gamma_2k (its upper bound)

    TheoryParams(std::size_t m, std::size_t n, std::size_t k, double eta, double ck2,
                 double gamma_2k, double gamma_k = -1.0);
};

struct TheoryReport {
    double r1 = 0.0, r2 = 0.0, rho1 = 0.0;
    double c1 = 0.0, c21 = 0.0, c22 = 0.0, c2 = 0.0;
    double rho2 = 0.0, c3 = 0.0;  // +inf when max(r1, r2) >= 1 (divergent)
    bool rot_converges = false;   // rho1 < 1 with a positive denominator
    bool rotp_converges = false;  // rho2 < 1 likewise
    std::optional<std::size_t> m_transition_rot;   // smallest m with rho1 < 1 at eta = 1/m
    std::optional<std::size_t> m_transition_rotp;  // smallest m with rho2 < 1 at eta = 1/m
};

/// Evaluates every displayed constant of the convergence analysis at the
/// given parameters, then scans m upward (with eta = 1/m, gammas held fixed)
/// for the smallest m below scan_cap giving a contraction.
TheoryReport theory_report(const TheoryParams& params, std::size_t scan_cap = 50'000'000);

struct ThresholdRoots {
    double c_rot = 0.0;   // positive root of t^2 - 50 t - 48
    double c_rotp = 0.0;  // positive real root of t^4 - 4 t^3 - 2444 t^2 - 4032 t - 2880
};

/// Finds both roots by bisection on [1, 100] to 1e-9 and validates them
/// against their known decimal values (throws if either disagrees). With
/// eta = 1/m and gamma_k = gamma_2k, rho1 < 1 is equivalent to
/// sqrt(m) > c_rot * ck2 * gamma_2k, and rho2 < 1 to the same with c_rotp.
ThresholdRoots threshold_roots();

struct InequalityCheck {
    std::string name;
    double lhs = 0.0, rhs = 0.0, slack = 0.0;  // pass iff lhs <= rhs + slack
    bool passed = false;
};

struct GammaInequalityReport {
    GammaEstimate d_k, d_2k;
    double minkowski_hat = 0.0;  // gamma(D_k + D_k): per-draw sup splits into 2 * top-k
    double minkowski_se = 0.0;
    std::vector<InequalityCheck> checks;
    bool all_passed = false;
};

/// Checks, with 3-standard-error slack: gamma(D_2k) <= 2 gamma(D_k); the
/// Minkowski-sum bound gamma(D_k + D_k) <= 2 gamma(D_k); monotonicity
/// gamma(D_k) <= gamma(D_2k); and the width/complexity sandwich
/// (w + 1)/3 <= gamma <= 2(w + 1) on D_k (its members are unit vectors).
/// Requires 2k <= n. All estimates share the same draws.
GammaInequalityReport check_gamma_inequalities(std::size_t n, std::size_t k,
                                               std::size_t samples, std::uint64_t seed);

/// Exact value of sup over D_k of | ||A x||_2 - sqrt(m) ||x||_2 |, computed
/// by enumerating every size-k support and taking singular-value extremes of
/// the column submatrices. Guarded by C(n, k) <= 1e5.
double exact_deviation_supremum(const Matrix& A, std::size_t k);
double exact_deviation_supremum(const SensingMatrix& A, std::size_t k);

/// Randomized lower bound on the same supremum from `samples` uniform unit
/// k-sparse vectors; cross-check for the exact enumeration.
double random_deviation_lower_bound(const Matrix& A, std::size_t k, std::size_t samples,
                                    std::uint64_t seed);

/// k * ln(e n / k): the predicted scaling of the measurement transition.
double transition_order(std::size_t n, std::size_t k);

}  // namespace otk
