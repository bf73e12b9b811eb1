#pragma once

// The four recovery algorithms (IHT, HTP, ROT, ROTP) behind one iteration
// driver with the shared stopping rule and trace recording.
//
// Every algorithm iterates u = x + eta * A^T(y - A x) and then maps u to the
// next k-sparse iterate:
//   IHT   x' = H_k(u)
//   HTP   x' = least squares on supp(H_k(u))
//   ROT   x' = H_k(u .* w) with w from the relaxed mask problem
//   ROTP  x' = least squares on supp(H_k(u .* w))
// The run stops after max_iters iterations or as soon as
// ||x^p - x^{p-1}||_2 < epsilon (the stall rule). The stall tolerance and the
// success tolerance (relative error against a known ground truth) share the
// field `epsilon` unless `success_epsilon` overrides the latter.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "otk/numerics.hpp"

namespace otk {

enum class Algorithm { IHT, HTP, ROT, ROTP };

const char* to_string(Algorithm a);
std::optional<Algorithm> algorithm_from_string(const std::string& s);

struct RecoveryConfig {
    Algorithm algorithm = Algorithm::ROTP;
    std::size_t k = 0;
    double eta = 0.0;       // step size; callers usually set 1/m
    double epsilon = 1e-2;  // stall tolerance
    std::size_t max_iters = 50;
    Vec x0;                 // empty = start at zero
    double qp_tol = 1e-8;
    std::size_t qp_max_iters = 2000;
    bool warm_start_qp = false;   // reuse the previous mask as the QP start
    bool record_iterates = false; // keep full iterates in the trace
    std::optional<double> success_epsilon;  // defaults to epsilon
};

struct IterationRecord {
    std::size_t p = 0;
    double residual_norm = 0.0;            // ||y - A x^p||_2
    std::optional<double> error_to_truth;  // ||x* - x^p|| / ||x*|| when known
    std::size_t qp_iterations = 0;
    bool qp_converged = true;
    Vec iterate;  // filled only when record_iterates is set
};

enum class Termination { MaxIters, IterateStalled };

struct IterationTrace {
    std::vector<IterationRecord> records;  // record 0 is the initial point
    Termination termination_reason = Termination::MaxIters;
    bool nonfinite = false;  // a diverging iterate was detected
};

struct RecoveryResult {
    Vec x_hat;
    IterationTrace trace;
    std::optional<bool> success;  // set when the ground truth was supplied
};

/// Called after each iteration with (p, x^p); must not mutate anything the
/// run depends on.
using IterateObserver = std::function<void(std::size_t, const Vec&)>;

RecoveryResult run_recovery(const Matrix& A, const Vec& y, const RecoveryConfig& config,
                            const Vec* x_star = nullptr,
                            const IterateObserver& observer = nullptr);

RecoveryResult run_iht(const Matrix& A, const Vec& y, RecoveryConfig config,
                       const Vec* x_star = nullptr);
RecoveryResult run_htp(const Matrix& A, const Vec& y, RecoveryConfig config,
                       const Vec* x_star = nullptr);
RecoveryResult run_rot(const Matrix& A, const Vec& y, RecoveryConfig config,
                       const Vec* x_star = nullptr);
RecoveryResult run_rotp(const Matrix& A, const Vec& y, RecoveryConfig config,
                        const Vec* x_star = nullptr);

/// Relative l2 error test ||x* - x_hat|| / ||x*|| <= epsilon. Throws when
/// x* is the zero vector.
bool check_success(const Vec& x_star, const Vec& x_hat, double epsilon);

}  // namespace otk
