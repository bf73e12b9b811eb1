#include "otk/qp.hpp"

#include <cmath>
#include <stdexcept>

#include "otk/operators.hpp"

namespace otk {

namespace {

// sigma_max of B via power iteration on B^T B, deterministic start.
double sigma_max_estimate(const Matrix& B, int steps) {
    const std::size_t n = B.cols;
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
    double nv = norm2(v);
    for (std::size_t i = 0; i < n; ++i) v[i] /= nv;
    double lambda = 0.0;
    for (int s = 0; s < steps; ++s) {
        Vec t = matvec_t(B, matvec(B, v));
        lambda = dot(v, t);
        const double nt = norm2(t);
        if (nt == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = t[i] / nt;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

double residual_sq(const Matrix& B, const Vec& y, const Vec& w) {
    const Vec r = matvec(B, w) - y;
    double s = 0.0;
    for (double x : r) s += x * x;
    return s;
}

// Gaussian elimination with partial pivoting; returns false when singular.
bool solve_dense(std::vector<double>& M, std::vector<double>& rhs, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(M[r * n + col]) > std::fabs(M[pivot * n + col])) pivot = r;
        if (std::fabs(M[pivot * n + col]) < 1e-300) return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(M[pivot * n + c], M[col * n + c]);
            std::swap(rhs[pivot], rhs[col]);
        }
        const double inv = 1.0 / M[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = M[r * n + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) M[r * n + c] -= f * M[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double v = rhs[r];
        for (std::size_t c = r + 1; c < n; ++c) v -= M[r * n + c] * rhs[c];
        rhs[r] = v / M[r * n + r];
    }
    return true;
}

// Exact minimizer on the face the iterate sits on: coordinates clamped at the
// box bounds stay fixed and the rest solve the restricted least squares.
// Fixed-step gradient progress is arbitrarily slow along coordinates with
// tiny u entries, while this tail step is exact there. Interior coordinates
// whose B column is zero leave the objective unchanged; they only absorb
// whatever simplex mass the solved coordinates do not take (any feasible
// completion is optimal on them). Returns true and overwrites w only when
// the face solution is feasible and no worse.
bool polish_active_set(const Matrix& B, const Vec& y, std::size_t k, Vec& w,
                       double current_objective, double* polished_objective) {
    const std::size_t n = B.cols, m = B.rows;
    std::vector<std::size_t> solved, flat;
    double fixed_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (w[j] == 0.0) continue;
        if (w[j] == 1.0) {
            fixed_sum += 1.0;
            continue;
        }
        double col_sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) col_sq += B(i, j) * B(i, j);
        (col_sq > 0.0 ? solved : flat).push_back(j);
    }
    const std::size_t t = solved.size();
    if (t == 0) return false;

    // Residual of the clamped part: y - B_{upper} * 1.
    Vec rhs_res = y;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (w[j] == 1.0) rhs_res[i] -= B(i, j);

    const double budget = static_cast<double>(k) - fixed_sum;  // mass left for solved + flat
    const bool constrained = flat.empty();  // no absorbers: the sum constraint binds
    const std::size_t dim = constrained ? t + 1 : t;
    std::vector<double> M(dim * dim, 0.0), rhs(dim, 0.0);
    for (std::size_t a = 0; a < t; ++a) {
        for (std::size_t b = a; b < t; ++b) {
            double g = 0.0;
            for (std::size_t i = 0; i < m; ++i) g += B(i, solved[a]) * B(i, solved[b]);
            M[a * dim + b] = g;
            M[b * dim + a] = g;
        }
        double bb = 0.0;
        for (std::size_t i = 0; i < m; ++i) bb += B(i, solved[a]) * rhs_res[i];
        rhs[a] = bb;
        if (constrained) {
            M[a * dim + t] = 1.0;
            M[t * dim + a] = 1.0;
        }
    }
    if (constrained) rhs[t] = budget;

    if (!solve_dense(M, rhs, dim)) return false;
    double solved_sum = 0.0;
    for (std::size_t a = 0; a < t; ++a) {
        if (rhs[a] < -1e-12 || rhs[a] > 1.0 + 1e-12) return false;
        solved_sum += std::clamp(rhs[a], 0.0, 1.0);
    }
    double flat_share = 0.0;
    if (!flat.empty()) {
        const double leftover = budget - solved_sum;
        flat_share = leftover / static_cast<double>(flat.size());
        if (flat_share < -1e-12 || flat_share > 1.0 + 1e-12) return false;
        flat_share = std::clamp(flat_share, 0.0, 1.0);
    } else if (std::fabs(solved_sum - budget) > 1e-9) {
        return false;
    }

    Vec cand = w;
    for (std::size_t a = 0; a < t; ++a) cand[solved[a]] = std::clamp(rhs[a], 0.0, 1.0);
    for (std::size_t j : flat) cand[j] = flat_share;
    const double obj = residual_sq(B, y, cand);
    if (obj > current_objective) return false;
    w = std::move(cand);
    *polished_objective = obj;
    return true;
}

}  // namespace

QpSolution solve_relaxed_ot(const Matrix& A, const Vec& y, const Vec& u, std::size_t k,
                            double tol, std::size_t max_iters, const Vec* warm_start,
                            std::vector<double>* objective_history) {
    const std::size_t m = A.rows, n = A.cols;
    if (y.size() != m) throw std::invalid_argument("solve_relaxed_ot: y length != rows");
    if (u.size() != n) throw std::invalid_argument("solve_relaxed_ot: u length != cols");
    if (k > n) throw std::invalid_argument("solve_relaxed_ot: k > n");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_relaxed_ot: tol must be positive");

    // B = A diag(u); the objective is ||y - B w||^2.
    Matrix B(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) B(i, j) = A(i, j) * u[j];

    QpSolution sol;
    if (warm_start) {
        if (warm_start->size() != n)
            throw std::invalid_argument("solve_relaxed_ot: warm start length != cols");
        sol.w = project_capped_simplex(*warm_start, k);
    } else {
        sol.w.assign(n, n ? static_cast<double>(k) / static_cast<double>(n) : 0.0);
    }

    const double sigma = sigma_max_estimate(B, 50);
    if (sigma == 0.0) {
        // u (or A) is zero on every coordinate: objective constant in w.
        sol.objective = residual_sq(B, y, sol.w);
        sol.converged = true;
        if (objective_history) objective_history->push_back(sol.objective);
        return sol;
    }
    const double L = 1.05 * 2.0 * sigma * sigma;

    auto prox_candidate = [&](const Vec& w) {
        const Vec g = matvec_t(B, matvec(B, w) - y);  // half the gradient
        Vec step(n);
        for (std::size_t j = 0; j < n; ++j) step[j] = w[j] - 2.0 * g[j] / L;
        return project_capped_simplex(step, k);
    };

    Vec w = sol.w;
    for (std::size_t it = 0; it < max_iters; ++it) {
        Vec cand = prox_candidate(w);
        const double res = norm2(w - cand);
        const bool stationary = res <= tol * (1.0 + norm2(w));
        w = std::move(cand);
        ++sol.iterations;
        if (objective_history) objective_history->push_back(residual_sq(B, y, w));
        if (stationary) {
            sol.converged = true;
            break;
        }
    }

    // Exact tail step on the identified face, then re-measure stationarity.
    double objective = residual_sq(B, y, w);
    double polished = 0.0;
    if (polish_active_set(B, y, k, w, objective, &polished)) {
        objective = polished;
        if (objective_history) objective_history->push_back(objective);
        sol.converged = norm2(w - prox_candidate(w)) <= tol * (1.0 + norm2(w));
    }
    sol.w = std::move(w);
    sol.objective = objective;
    return sol;
}

std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t limit) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;  // exact in this order
        if (c > limit) return limit + 1;
    }
    return static_cast<std::size_t>(c);
}

BruteForceSolution brute_force_ot(const Matrix& A, const Vec& y, const Vec& u, std::size_t k) {
    const std::size_t m = A.rows, n = A.cols;
    if (y.size() != m) throw std::invalid_argument("brute_force_ot: y length != rows");
    if (u.size() != n) throw std::invalid_argument("brute_force_ot: u length != cols");
    if (k > n) throw std::invalid_argument("brute_force_ot: k > n");
    constexpr std::size_t kComboLimit = 1'000'000;
    if (binomial_capped(n, k, kComboLimit) > kComboLimit)
        throw std::invalid_argument("brute_force_ot: C(n, k) over enumeration limit");

    BruteForceSolution best;
    best.objective = -1.0;

    std::vector<std::size_t> support(k);
    for (std::size_t i = 0; i < k; ++i) support[i] = i;

    auto next_combination = [&]() -> bool {
        std::size_t i = k;
        while (i-- > 0) {
            if (support[i] < n - k + i) {
                ++support[i];
                for (std::size_t j = i + 1; j < k; ++j) support[j] = support[j - 1] + 1;
                return true;
            }
        }
        return false;
    };

    for (;;) {
        double obj = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double s = y[i];
            for (std::size_t j : support) s -= A(i, j) * u[j];
            obj += s * s;
        }
        if (best.objective < 0.0 || obj < best.objective) {
            best.objective = obj;
            best.support = support;
        }
        if (k == 0 || !next_combination()) break;
    }

    best.w.assign(n, 0.0);
    for (std::size_t j : best.support) best.w[j] = 1.0;
    return best;
}

}  // namespace otk
