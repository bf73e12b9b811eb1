#pragma once

// Monte-Carlo phase-transition harness over the (m, p) lattice, plus the
// single-run driver behind the CLI.
//
// Each (m, trial) pair maps to one problem instance seeded purely from
// (master_seed, m, trial), never from execution order or the iteration
// budget, and a single trajectory of the algorithm is evaluated at every
// budget in p_values. If the stall rule fires before a budget, the frozen
// iterate stands in for all larger budgets. Grids are therefore identical
// for any worker count and monotone in p per trial once stalled.

#include <cstdint>
#include <functional>

#include "otk/algorithms.hpp"
#include "otk/sensing.hpp"

namespace otk {

struct PhaseGridSpec {
    std::size_t n = 50, k = 3;
    std::vector<std::size_t> m_values;  // strictly ascending
    std::vector<std::size_t> p_values;  // strictly ascending, >= 1
    std::size_t trials = 50;
    double epsilon = 1e-2;  // success tolerance; also the stall tolerance
    Algorithm algorithm = Algorithm::ROTP;
    Ensemble ensemble = Ensemble::Bernoulli;
    double noise_sigma = 0.0;
    std::uint64_t master_seed = 0;
};

/// The m = 4..50 step 2, p = 1..10 then 15..50 step 5, 50-trial grid used by
/// the replication study.
PhaseGridSpec default_replication_spec(Algorithm algorithm);

struct PhaseGrid {
    PhaseGridSpec spec;
    std::vector<std::size_t> successes;  // (m_index, p_index), m-major
    std::vector<double> wall_times;      // seconds summed over trials to reach each budget

    std::size_t success_count(std::size_t mi, std::size_t pi) const {
        return successes[mi * spec.p_values.size() + pi];
    }
    double rate(std::size_t mi, std::size_t pi) const {
        return static_cast<double>(success_count(mi, pi)) / static_cast<double>(spec.trials);
    }
};

/// Called after each finished trial with (done, total); may be invoked
/// concurrently from worker threads.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Runs the grid on `workers` threads (0 = hardware concurrency). The result
/// is independent of the worker count.
PhaseGrid run_phase_grid(const PhaseGridSpec& spec, unsigned workers = 0,
                         const ProgressFn& progress = nullptr);

/// Success flags per budget for one trial: rel_err_by_iter[i] is the relative
/// error after iteration i+1, and the last entry stands for every budget past
/// the end of the trajectory.
std::vector<bool> budget_success_flags(const std::vector<double>& rel_err_by_iter,
                                       const std::vector<std::size_t>& p_values, double epsilon);

/// Per budget p, the smallest grid m whose success rate reaches `threshold`;
/// budgets where no m qualifies are omitted.
std::vector<std::pair<std::size_t, std::size_t>> minimal_m_curve(const PhaseGrid& grid,
                                                                 double threshold);

struct SingleRunSpec {
    std::size_t n = 50, k = 3, m = 25;
    Ensemble ensemble = Ensemble::Bernoulli;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    RecoveryConfig config;
};

struct SingleRunResult {
    SensingMatrix matrix;
    SparseSignal signal;
    MeasurementSet measurements;
    RecoveryResult recovery;
};

/// One fully traced run: instance from the seed streams, then the configured
/// algorithm with iterate recording on.
SingleRunResult run_single(const SingleRunSpec& spec);

}  // namespace otk
