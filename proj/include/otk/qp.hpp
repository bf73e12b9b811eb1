#pragma once

// The inner problem of the relaxed optimal k-thresholding iteration:
//   min_w ||y - A(u .* w)||_2^2   s.t.   sum w = k,  0 <= w <= 1,
// solved by projected gradient descent with a fixed 1/L step, plus an
// exhaustive binary-mask oracle used for testing.

#include "otk/numerics.hpp"

namespace otk {

struct QpSolution {
    Vec w;                  // feasible point in the capped simplex
    double objective = 0.0; // ||y - A(u .* w)||_2^2 recomputed at w
    std::size_t iterations = 0;
    bool converged = false;
};

/// Projected gradient descent on the relaxed mask problem. Starts from
/// warm_start when given, otherwise from (k/n) * ones. The step is 1/L with
/// L = 2 * sigma_max(A diag(u))^2 estimated by 50 power-iteration steps and a
/// 5% safety margin. Stops when ||w - P(w - g/L)||_2 <= tol * (1 + ||w||_2)
/// where P projects onto the capped simplex; hitting max_iters returns the
/// best iterate with converged = false. A zero u returns the start point
/// immediately (the objective is then constant in w).
/// If objective_history is given it receives the objective after every step.
QpSolution solve_relaxed_ot(const Matrix& A, const Vec& y, const Vec& u, std::size_t k,
                            double tol = 1e-8, std::size_t max_iters = 2000,
                            const Vec* warm_start = nullptr,
                            std::vector<double>* objective_history = nullptr);

struct BruteForceSolution {
    Vec w;  // binary mask
    std::vector<std::size_t> support;
    double objective = 0.0;
};

/// Enumerates every binary w with sum w = k and returns the minimizer of
/// ||y - A(u .* w)||_2^2; ties go to the lexicographically smallest support.
/// Guarded by C(n, k) <= 1e6. Test oracle, not a production path.
BruteForceSolution brute_force_ot(const Matrix& A, const Vec& y, const Vec& u, std::size_t k);

/// C(n, k) capped at `limit` (returns limit + 1 once exceeded).
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t limit);

}  // namespace otk
