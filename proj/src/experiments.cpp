#include "otk/experiments.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace otk {

PhaseGridSpec default_replication_spec(Algorithm algorithm) {
    PhaseGridSpec spec;
    spec.algorithm = algorithm;
    for (std::size_t m = 4; m <= 50; m += 2) spec.m_values.push_back(m);
    for (std::size_t p = 1; p <= 10; ++p) spec.p_values.push_back(p);
    for (std::size_t p = 15; p <= 50; p += 5) spec.p_values.push_back(p);
    return spec;
}

namespace {

void validate(const PhaseGridSpec& spec) {
    if (spec.n < 1 || spec.k < 1 || spec.k > spec.n)
        throw std::invalid_argument("phase grid: need 1 <= k <= n");
    if (spec.m_values.empty() || spec.p_values.empty())
        throw std::invalid_argument("phase grid: m_values and p_values must be nonempty");
    for (std::size_t i = 1; i < spec.m_values.size(); ++i)
        if (spec.m_values[i] <= spec.m_values[i - 1])
            throw std::invalid_argument("phase grid: m_values must be strictly ascending");
    for (std::size_t i = 1; i < spec.p_values.size(); ++i)
        if (spec.p_values[i] <= spec.p_values[i - 1])
            throw std::invalid_argument("phase grid: p_values must be strictly ascending");
    if (spec.p_values.front() < 1) throw std::invalid_argument("phase grid: budgets start at 1");
    if (spec.trials < 1) throw std::invalid_argument("phase grid: trials must be >= 1");
    if (!(spec.epsilon > 0.0)) throw std::invalid_argument("phase grid: epsilon must be positive");
    if (spec.noise_sigma < 0.0) throw std::invalid_argument("phase grid: noise_sigma >= 0");
}

}  // namespace

std::vector<bool> budget_success_flags(const std::vector<double>& rel_err_by_iter,
                                       const std::vector<std::size_t>& p_values, double epsilon) {
    std::vector<bool> flags(p_values.size(), false);
    if (rel_err_by_iter.empty()) return flags;
    for (std::size_t j = 0; j < p_values.size(); ++j) {
        const std::size_t standing = std::min(p_values[j], rel_err_by_iter.size());
        const double err = rel_err_by_iter[standing - 1];
        flags[j] = err <= epsilon;  // NaN (diverged) compares false
    }
    return flags;
}

PhaseGrid run_phase_grid(const PhaseGridSpec& spec, unsigned workers, const ProgressFn& progress) {
    validate(spec);
    const std::size_t M = spec.m_values.size(), P = spec.p_values.size();

    PhaseGrid grid;
    grid.spec = spec;
    grid.successes.assign(M * P, 0);
    grid.wall_times.assign(M * P, 0.0);

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t total = M * spec.trials;
    std::atomic<std::size_t> next_task{0};
    std::atomic<std::size_t> done{0};
    std::mutex merge_mutex;

    auto worker = [&]() {
        std::vector<std::size_t> local_successes(M * P, 0);
        std::vector<double> local_times(M * P, 0.0);
        std::vector<double> rel_err;
        std::vector<double> budget_seconds;

        for (;;) {
            const std::size_t task = next_task.fetch_add(1);
            if (task >= total) break;
            const std::size_t mi = task / spec.trials;
            const std::size_t trial = task % spec.trials;
            const std::size_t m = spec.m_values[mi];

            const SensingMatrix A = make_matrix(
                m, spec.n, spec.ensemble, trial_seed(spec.master_seed, m, trial, Stream::MatrixEntries));
            const SparseSignal sig =
                make_signal(spec.n, spec.k, trial_seed(spec.master_seed, m, trial, Stream::SignalEntries));
            const MeasurementSet meas = measure(
                A, sig, spec.noise_sigma, trial_seed(spec.master_seed, m, trial, Stream::NoiseEntries));

            RecoveryConfig cfg;
            cfg.algorithm = spec.algorithm;
            cfg.k = spec.k;
            cfg.eta = 1.0 / static_cast<double>(m);
            cfg.epsilon = spec.epsilon;
            cfg.max_iters = spec.p_values.back();

            rel_err.clear();
            budget_seconds.assign(P, 0.0);
            const double x_norm = norm2(sig.x_star);
            const auto t0 = std::chrono::steady_clock::now();
            std::size_t budget_cursor = 0;
            auto observer = [&](std::size_t p, const Vec& x) {
                rel_err.push_back(norm2(sig.x_star - x) / x_norm);
                while (budget_cursor < P && spec.p_values[budget_cursor] == p) {
                    budget_seconds[budget_cursor] =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    ++budget_cursor;
                }
            };
            run_recovery(A.matrix, meas.y, cfg, nullptr, observer);
            const double final_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            for (; budget_cursor < P; ++budget_cursor) budget_seconds[budget_cursor] = final_seconds;

            const std::vector<bool> flags = budget_success_flags(rel_err, spec.p_values, spec.epsilon);
            for (std::size_t pi = 0; pi < P; ++pi) {
                if (flags[pi]) ++local_successes[mi * P + pi];
                local_times[mi * P + pi] += budget_seconds[pi];
            }
            if (progress) progress(done.fetch_add(1) + 1, total);
        }

        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t i = 0; i < M * P; ++i) {
            grid.successes[i] += local_successes[i];
            grid.wall_times[i] += local_times[i];
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return grid;
}

std::vector<std::pair<std::size_t, std::size_t>> minimal_m_curve(const PhaseGrid& grid,
                                                                 double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("minimal_m_curve: threshold must be in (0, 1]");
    std::vector<std::pair<std::size_t, std::size_t>> curve;
    const std::size_t M = grid.spec.m_values.size(), P = grid.spec.p_values.size();
    for (std::size_t pi = 0; pi < P; ++pi) {
        for (std::size_t mi = 0; mi < M; ++mi) {
            if (grid.rate(mi, pi) >= threshold) {
                curve.emplace_back(grid.spec.p_values[pi], grid.spec.m_values[mi]);
                break;
            }
        }
    }
    return curve;
}

SingleRunResult run_single(const SingleRunSpec& spec) {
    SingleRunResult out;
    out.matrix = make_matrix(spec.m, spec.n, spec.ensemble,
                             trial_seed(spec.seed, spec.m, 0, Stream::MatrixEntries));
    out.signal =
        make_signal(spec.n, spec.k, trial_seed(spec.seed, spec.m, 0, Stream::SignalEntries));
    out.measurements = measure(out.matrix, out.signal, spec.noise_sigma,
                               trial_seed(spec.seed, spec.m, 0, Stream::NoiseEntries));
    RecoveryConfig cfg = spec.config;
    cfg.record_iterates = true;
    out.recovery = run_recovery(out.matrix.matrix, out.measurements.y, cfg, &out.signal.x_star);
    return out;
}

}  // namespace otk
