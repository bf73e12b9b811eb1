#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "otk/algorithms.hpp"
#include "otk/operators.hpp"
#include "otk/sensing.hpp"

using namespace otk;

namespace {

struct Instance {
    SensingMatrix A;
    SparseSignal x;
    MeasurementSet y;
};

Instance noiseless(std::size_t m, std::size_t n, std::size_t k, std::uint64_t seed,
                   Ensemble ensemble = Ensemble::Gaussian) {
    Instance inst;
    inst.A = make_matrix(m, n, ensemble, hash64({seed, 1}));
    inst.x = make_signal(n, k, hash64({seed, 2}));
    inst.y = measure(inst.A, inst.x, 0.0, hash64({seed, 3}));
    return inst;
}

RecoveryConfig base_config(Algorithm algo, std::size_t k, std::size_t m) {
    RecoveryConfig cfg;
    cfg.algorithm = algo;
    cfg.k = k;
    cfg.eta = 1.0 / static_cast<double>(m);
    cfg.epsilon = 1e-2;
    cfg.max_iters = 50;
    return cfg;
}

}  // namespace

TEST_CASE("fixed point: starting at the truth stays at the truth") {
    for (Algorithm algo : {Algorithm::IHT, Algorithm::HTP, Algorithm::ROT, Algorithm::ROTP}) {
        const Instance inst = noiseless(15, 20, 3, 7100 + static_cast<int>(algo));
        RecoveryConfig cfg = base_config(algo, 3, 15);
        cfg.x0 = inst.x.x_star;
        cfg.qp_tol = 1e-12;
        cfg.qp_max_iters = 100000;
        const RecoveryResult res = run_recovery(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star);
        CHECK(res.trace.records.back().p == 1);  // stalls after one iteration
        CHECK(res.trace.termination_reason == Termination::IterateStalled);
        CHECK(norm2(res.x_hat - inst.x.x_star) <= 1e-8 * norm2(inst.x.x_star));
        if (algo == Algorithm::IHT) CHECK(res.x_hat == inst.x.x_star);  // bitwise fixed point
    }
}

TEST_CASE("identity operator converges in one step from zero") {
    const std::size_t n = 6;
    SensingMatrix A;
    A.matrix = Matrix::identity(n);
    SparseSignal x = make_signal(n, 2, 4);
    const MeasurementSet y = measure(A, x, 0.0, 5);
    RecoveryConfig cfg = base_config(Algorithm::IHT, 2, n);
    cfg.eta = 1.0;
    const RecoveryResult res = run_iht(A.matrix, y.y, cfg, &x.x_star);
    CHECK(res.x_hat == x.x_star);
    CHECK(res.trace.records[1].error_to_truth.value() == 0.0);
}

TEST_CASE("zero data keeps every iterate at zero and stalls immediately") {
    const Matrix A = make_matrix(8, 12, Ensemble::Bernoulli, 3).matrix;
    RecoveryConfig cfg = base_config(Algorithm::ROT, 3, 8);
    const RecoveryResult res = run_rot(A, Vec(8, 0.0), cfg);
    CHECK(res.x_hat == Vec(12, 0.0));
    CHECK(res.trace.records.back().p == 1);
    CHECK(res.trace.termination_reason == Termination::IterateStalled);
}

TEST_CASE("stall rule fires at the first qualifying step, never earlier") {
    // With A = I the second step repeats the first iterate exactly, so the
    // stall rule must fire at p = 2 (p = 1 moves by ||x*|| > eps).
    const std::size_t n = 5;
    SensingMatrix A;
    A.matrix = Matrix::identity(n);
    SparseSignal x = make_signal(n, 2, 9);
    const MeasurementSet y = measure(A, x, 0.0, 10);
    RecoveryConfig cfg = base_config(Algorithm::IHT, 2, n);
    cfg.eta = 1.0;
    cfg.epsilon = 1e-3;
    const RecoveryResult res = run_iht(A.matrix, y.y, cfg, &x.x_star);
    REQUIRE(norm2(x.x_star) > cfg.epsilon);
    CHECK(res.trace.records.size() == 3);  // p = 0, 1, 2
    CHECK(res.trace.termination_reason == Termination::IterateStalled);
}

TEST_CASE("every iterate is k-sparse") {
    for (Algorithm algo : {Algorithm::IHT, Algorithm::HTP, Algorithm::ROT, Algorithm::ROTP}) {
        const Instance inst = noiseless(12, 24, 3, 7200 + static_cast<int>(algo));
        RecoveryConfig cfg = base_config(algo, 3, 12);
        cfg.max_iters = 8;
        cfg.record_iterates = true;
        const RecoveryResult res = run_recovery(inst.A.matrix, inst.y.y, cfg);
        for (const auto& rec : res.trace.records)
            CHECK(support_of(rec.iterate).size() <= 3);
    }
}

TEST_CASE("identical inputs give identical traces") {
    const Instance inst = noiseless(14, 28, 3, 7300);
    RecoveryConfig cfg = base_config(Algorithm::ROTP, 3, 14);
    cfg.record_iterates = true;
    const RecoveryResult a = run_recovery(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star);
    const RecoveryResult b = run_recovery(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star);
    REQUIRE(a.trace.records.size() == b.trace.records.size());
    CHECK(a.x_hat == b.x_hat);
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        CHECK(a.trace.records[i].iterate == b.trace.records[i].iterate);
        CHECK(a.trace.records[i].residual_norm == b.trace.records[i].residual_norm);
    }
}

TEST_CASE("pursuit reaches the least-squares floor once the support is right") {
    // Generous m: HTP and ROTP find the support and then solve the restricted
    // system exactly.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Instance inst = noiseless(40, 50, 3, 7400 + seed);
        for (Algorithm algo : {Algorithm::HTP, Algorithm::ROTP}) {
            RecoveryConfig cfg = base_config(algo, 3, 40);
            const RecoveryResult res = run_recovery(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star);
            REQUIRE(res.success.value());
            CHECK(res.trace.records.back().error_to_truth.value() <= 1e-8);
        }
    }
}

TEST_CASE("check_success arithmetic") {
    const Vec x{3.0, 0.0, -4.0};  // norm 5
    CHECK(check_success(x, x, 1e-12));
    CHECK_FALSE(check_success(x, Vec(3, 0.0), 1e-2));
    const Vec close = scaled(x, 1.0 + 5e-3);
    CHECK(check_success(x, close, 1e-2));
    CHECK_FALSE(check_success(x, close, 1e-3));
    CHECK_THROWS_AS(check_success(Vec(3, 0.0), x, 1e-2), std::invalid_argument);
}

TEST_CASE("config validation") {
    const Matrix A = Matrix::identity(4);
    RecoveryConfig cfg = base_config(Algorithm::IHT, 2, 4);
    cfg.eta = 0.0;
    CHECK_THROWS_AS(run_recovery(A, Vec(4, 0.0), cfg), std::invalid_argument);
    cfg = base_config(Algorithm::IHT, 9, 4);
    CHECK_THROWS_AS(run_recovery(A, Vec(4, 0.0), cfg), std::invalid_argument);
    cfg = base_config(Algorithm::IHT, 2, 4);
    cfg.x0 = Vec(3, 0.0);
    CHECK_THROWS_AS(run_recovery(A, Vec(4, 0.0), cfg), std::invalid_argument);
}

TEST_CASE("divergent steps are flagged and fail the success check") {
    // A huge step size makes IHT blow up on a non-trivial instance.
    const Instance inst = noiseless(10, 20, 3, 7500);
    RecoveryConfig cfg = base_config(Algorithm::IHT, 3, 10);
    cfg.eta = 1e150;
    cfg.max_iters = 400;
    const RecoveryResult res = run_recovery(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star);
    CHECK(res.trace.nonfinite);
    CHECK(res.trace.termination_reason == Termination::MaxIters);
    CHECK_FALSE(res.success.value());
}

TEST_CASE("halving the noise does not inflate the final error") {
    std::size_t ok = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::size_t m = 45, n = 50, k = 3;
        const SensingMatrix A = make_matrix(m, n, Ensemble::Bernoulli, hash64({7600 + seed, 1}));
        const SparseSignal x = make_signal(n, k, hash64({7600 + seed, 2}));
        const MeasurementSet loud = measure(A, x, 0.1, hash64({7600 + seed, 3}));
        const MeasurementSet soft = measure(A, x, 0.05, hash64({7600 + seed, 3}));
        RecoveryConfig cfg = base_config(Algorithm::ROTP, k, m);
        const double e_loud =
            run_rotp(A.matrix, loud.y, cfg, &x.x_star).trace.records.back().error_to_truth.value();
        const double e_soft =
            run_rotp(A.matrix, soft.y, cfg, &x.x_star).trace.records.back().error_to_truth.value();
        ++total;
        if (e_soft <= 2.0 * e_loud + 1e-8) ++ok;
    }
    CHECK(ok == total);
}

TEST_CASE("HTP needs no more iterations than IHT on most instances") {
    std::size_t htp_no_worse = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Instance inst = noiseless(40, 50, 3, 7700 + seed);
        RecoveryConfig cfg = base_config(Algorithm::IHT, 3, 40);
        const auto iht = run_iht(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star);
        const auto htp = run_htp(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star);
        ++total;
        if (htp.trace.records.back().p <= iht.trace.records.back().p) ++htp_no_worse;
    }
    CHECK(static_cast<double>(htp_no_worse) >= 0.6 * static_cast<double>(total));
}

TEST_CASE("ROT succeeds at the generous-m edge of the protocol") {
    std::size_t hits = 0;
    const std::size_t trials = 50;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const SensingMatrix A =
            make_matrix(45, 50, Ensemble::Bernoulli, trial_seed(1, 45, t, Stream::MatrixEntries));
        const SparseSignal x = make_signal(50, 3, trial_seed(1, 45, t, Stream::SignalEntries));
        const MeasurementSet y = measure(A, x, 0.0, trial_seed(1, 45, t, Stream::NoiseEntries));
        RecoveryConfig cfg = base_config(Algorithm::ROT, 3, 45);
        if (run_rot(A.matrix, y.y, cfg, &x.x_star).success.value()) ++hits;
    }
    CHECK(static_cast<double>(hits) >= 0.8 * static_cast<double>(trials));
}

TEST_CASE("ROTP iterate is exact from the moment the support is identified") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Instance inst = noiseless(40, 50, 3, 7900 + seed, Ensemble::Bernoulli);
        RecoveryConfig cfg = base_config(Algorithm::ROTP, 3, 40);
        cfg.record_iterates = true;
        const RecoveryResult res = run_recovery(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star);
        for (const auto& rec : res.trace.records) {
            if (rec.p == 0) continue;
            if (support_of(rec.iterate) == inst.x.support)
                CHECK(rec.error_to_truth.value() <= 1e-8);
        }
    }
}

TEST_CASE("trace never exceeds max_iters + 1 records") {
    const Instance inst = noiseless(8, 30, 3, 7950);  // under-measured: no stall
    RecoveryConfig cfg = base_config(Algorithm::IHT, 3, 8);
    cfg.max_iters = 5;
    cfg.epsilon = 1e-12;
    const RecoveryResult res = run_recovery(inst.A.matrix, inst.y.y, cfg);
    CHECK(res.trace.records.size() <= cfg.max_iters + 1);
    CHECK(res.trace.records.back().p == 5);
    CHECK(res.trace.termination_reason == Termination::MaxIters);
}

TEST_CASE("IHT succeeds at generous m on most seeds") {
    // Measured rate at m = 40 is 72-84% across seed batches (failures are
    // genuine wrong-support plateaus); the floor is pinned at 70%.
    std::size_t hits = 0;
    const std::size_t trials = 50;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        const Instance inst = noiseless(40, 50, 3, 7800 + seed, Ensemble::Gaussian);
        RecoveryConfig cfg = base_config(Algorithm::IHT, 3, 40);
        if (run_iht(inst.A.matrix, inst.y.y, cfg, &inst.x.x_star).success.value()) ++hits;
    }
    CHECK(static_cast<double>(hits) >= 0.7 * static_cast<double>(trials));
}
