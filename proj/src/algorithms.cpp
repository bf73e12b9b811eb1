#include "otk/algorithms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "otk/operators.hpp"
#include "otk/qp.hpp"

namespace otk {

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::IHT: return "iht";
        case Algorithm::HTP: return "htp";
        case Algorithm::ROT: return "rot";
        case Algorithm::ROTP: return "rotp";
    }
    return "?";
}

std::optional<Algorithm> algorithm_from_string(const std::string& s) {
    if (s == "iht") return Algorithm::IHT;
    if (s == "htp") return Algorithm::HTP;
    if (s == "rot") return Algorithm::ROT;
    if (s == "rotp") return Algorithm::ROTP;
    return std::nullopt;
}

bool check_success(const Vec& x_star, const Vec& x_hat, double epsilon) {
    const double nx = norm2(x_star);
    if (!(nx > 0.0)) throw std::invalid_argument("check_success: ||x*|| must be positive");
    return norm2(x_star - x_hat) / nx <= epsilon;
}

namespace {

void validate(const Matrix& A, const Vec& y, const RecoveryConfig& cfg) {
    if (y.size() != A.rows) throw std::invalid_argument("run_recovery: y length != rows");
    if (cfg.k > A.cols) throw std::invalid_argument("run_recovery: k > n");
    if (!(cfg.eta > 0.0)) throw std::invalid_argument("run_recovery: eta must be positive");
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("run_recovery: epsilon must be positive");
    if (cfg.max_iters < 1) throw std::invalid_argument("run_recovery: max_iters must be >= 1");
    if (!cfg.x0.empty() && cfg.x0.size() != A.cols)
        throw std::invalid_argument("run_recovery: x0 length != n");
}

double relative_error(const Vec& x_star, const Vec& x) {
    return norm2(x_star - x) / norm2(x_star);
}

}  // namespace

RecoveryResult run_recovery(const Matrix& A, const Vec& y, const RecoveryConfig& cfg,
                            const Vec* x_star, const IterateObserver& observer) {
    validate(A, y, cfg);
    const std::size_t n = A.cols;

    RecoveryResult out;
    Vec x = cfg.x0.empty() ? Vec(n, 0.0) : cfg.x0;

    auto record = [&](std::size_t p, std::size_t qp_iters, bool qp_conv) {
        IterationRecord rec;
        rec.p = p;
        rec.residual_norm = norm2(y - matvec(A, x));
        if (x_star) rec.error_to_truth = relative_error(*x_star, x);
        rec.qp_iterations = qp_iters;
        rec.qp_converged = qp_conv;
        if (cfg.record_iterates) rec.iterate = x;
        out.trace.records.push_back(std::move(rec));
    };

    record(0, 0, true);

    Vec previous_mask;  // QP warm start, when enabled
    out.trace.termination_reason = Termination::MaxIters;

    for (std::size_t p = 1; p <= cfg.max_iters; ++p) {
        const Vec r = y - matvec(A, x);
        const Vec u = x + scaled(matvec_t(A, r), cfg.eta);

        std::size_t qp_iters = 0;
        bool qp_conv = true;
        Vec x_next;
        bool bad = !all_finite(u);
        if (!bad) {
            switch (cfg.algorithm) {
                case Algorithm::IHT:
                    x_next = hard_threshold(u, cfg.k);
                    break;
                case Algorithm::HTP:
                    x_next = least_squares_on_support(A, y, support_of(hard_threshold(u, cfg.k)));
                    break;
                case Algorithm::ROT:
                case Algorithm::ROTP: {
                    const Vec* start = cfg.warm_start_qp && !previous_mask.empty()
                                           ? &previous_mask
                                           : nullptr;
                    QpSolution sol =
                        solve_relaxed_ot(A, y, u, cfg.k, cfg.qp_tol, cfg.qp_max_iters, start);
                    qp_iters = sol.iterations;
                    qp_conv = sol.converged;
                    if (cfg.warm_start_qp) previous_mask = sol.w;
                    const Vec v = hard_threshold(hadamard(u, sol.w), cfg.k);
                    x_next = cfg.algorithm == Algorithm::ROT
                                 ? v
                                 : least_squares_on_support(A, y, support_of(v));
                    break;
                }
            }
            bad = !all_finite(x_next);
        }

        if (bad) {
            // Diverged: the non-finite iterate stands so downstream success
            // checks fail for this and every later budget.
            x.assign(n, std::numeric_limits<double>::quiet_NaN());
            out.trace.nonfinite = true;
            out.trace.termination_reason = Termination::MaxIters;
            IterationRecord rec;
            rec.p = p;
            rec.residual_norm = std::numeric_limits<double>::quiet_NaN();
            if (x_star) rec.error_to_truth = std::numeric_limits<double>::quiet_NaN();
            if (cfg.record_iterates) rec.iterate = x;
            out.trace.records.push_back(std::move(rec));
            if (observer) observer(p, x);
            break;
        }

        const double step_norm = norm2(x_next - x);
        x = std::move(x_next);
        record(p, qp_iters, qp_conv);
        if (observer) observer(p, x);
        if (step_norm < cfg.epsilon) {
            out.trace.termination_reason = Termination::IterateStalled;
            break;
        }
    }

    out.x_hat = std::move(x);
    if (x_star) {
        const double eps = cfg.success_epsilon.value_or(cfg.epsilon);
        const double rel = relative_error(*x_star, out.x_hat);
        out.success = rel <= eps;  // NaN compares false
    }
    return out;
}

RecoveryResult run_iht(const Matrix& A, const Vec& y, RecoveryConfig cfg, const Vec* x_star) {
    cfg.algorithm = Algorithm::IHT;
    return run_recovery(A, y, cfg, x_star);
}

RecoveryResult run_htp(const Matrix& A, const Vec& y, RecoveryConfig cfg, const Vec* x_star) {
    cfg.algorithm = Algorithm::HTP;
    return run_recovery(A, y, cfg, x_star);
}

RecoveryResult run_rot(const Matrix& A, const Vec& y, RecoveryConfig cfg, const Vec* x_star) {
    cfg.algorithm = Algorithm::ROT;
    return run_recovery(A, y, cfg, x_star);
}

RecoveryResult run_rotp(const Matrix& A, const Vec& y, RecoveryConfig cfg, const Vec* x_star) {
    cfg.algorithm = Algorithm::ROTP;
    return run_recovery(A, y, cfg, x_star);
}

}  // namespace otk
