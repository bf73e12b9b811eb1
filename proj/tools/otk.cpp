// otk: sparse-recovery toolkit CLI.
//
// Subcommands:
//   recover  one seeded instance, one algorithm, optional trace CSV
//   phase    Monte-Carlo phase-transition grid -> CSV (+ optional PGM heatmap)
//   theory   convergence constants, threshold roots, predicted transitions
//   gamma    Gaussian-complexity estimate and inequality checks
//
// Exit codes: 0 success, 1 recovery failed the success criterion (recover
// only), 2 usage or I/O error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "otk/experiments.hpp"
#include "otk/gridio.hpp"
#include "otk/theory.hpp"

namespace {

using namespace otk;

Ensemble parse_ensemble(const std::string& s) {
    if (s == "gaussian") return Ensemble::Gaussian;
    if (s == "bernoulli") return Ensemble::Bernoulli;
    throw CLI::ValidationError("--ensemble", "expected 'gaussian' or 'bernoulli'");
}

Algorithm parse_algorithm(const std::string& s) {
    const auto a = algorithm_from_string(s);
    if (!a) throw CLI::ValidationError("--algo", "expected one of iht|htp|rot|rotp");
    return *a;
}

unsigned resolve_workers(unsigned flag_value) {
    if (const char* env = std::getenv("OTK_WORKERS"); env && *env) {
        const long v = std::strtol(env, nullptr, 10);
        if (v < 1) throw std::invalid_argument("OTK_WORKERS must be a positive integer");
        return static_cast<unsigned>(v);
    }
    return flag_value;
}

struct RecoverArgs {
    std::string algo = "rotp";
    std::size_t n = 50, k = 3, m = 25;
    double eta = 0.0;  // 0 = default 1/m
    double eps = 1e-2;
    std::size_t max_iters = 50;
    std::string ensemble = "bernoulli";
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::string trace_out;
};

int cmd_recover(const RecoverArgs& args) {
    if (args.k < 1 || args.k > args.n) {
        std::cerr << "recover: need 1 <= k <= n\n";
        return 2;
    }
    if (args.m < 1) {
        std::cerr << "recover: need m >= 1\n";
        return 2;
    }
    SingleRunSpec spec;
    spec.n = args.n;
    spec.k = args.k;
    spec.m = args.m;
    spec.ensemble = parse_ensemble(args.ensemble);
    spec.noise_sigma = args.noise_sigma;
    spec.seed = args.seed;
    spec.config.algorithm = parse_algorithm(args.algo);
    spec.config.k = args.k;
    spec.config.eta = args.eta > 0.0 ? args.eta : 1.0 / static_cast<double>(args.m);
    spec.config.epsilon = args.eps;
    spec.config.max_iters = args.max_iters;

    const SingleRunResult run = run_single(spec);
    const auto& records = run.recovery.trace.records;
    const double rel_error = records.back().error_to_truth.value_or(std::nan(""));
    const std::size_t iterations = records.back().p;
    std::cout << "algorithm=" << args.algo << " m=" << args.m << " n=" << args.n
              << " k=" << args.k << " iterations=" << iterations
              << " rel_error=" << rel_error
              << " success=" << (run.recovery.success.value_or(false) ? 1 : 0) << '\n';

    if (!args.trace_out.empty()) {
        std::ofstream os(args.trace_out, std::ios::binary);
        if (!os) {
            std::cerr << "recover: cannot write " << args.trace_out << '\n';
            return 2;
        }
        write_trace_csv(run.recovery.trace, os);
    }
    return run.recovery.success.value_or(false) ? 0 : 1;
}

struct PhaseArgs {
    std::string config_path;
    std::string out_csv;
    std::string out_heatmap;
    unsigned workers = 0;
    std::string algo, ensemble, m_list, p_list;
    std::size_t n = 0, k = 0, trials = 0;
    double epsilon = -1.0, noise_sigma = -1.0;
    bool seed_set = false;
    std::uint64_t master_seed = 0;
};

std::vector<std::size_t> parse_list(const std::string& s, const char* what) {
    std::vector<std::size_t> out;
    std::istringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty()) continue;
        out.push_back(std::stoull(part));
    }
    if (out.empty()) throw std::invalid_argument(std::string("empty list for ") + what);
    return out;
}

int cmd_phase(const PhaseArgs& args) {
    PhaseGridSpec spec = default_replication_spec(Algorithm::ROTP);
    if (!args.config_path.empty()) {
        std::ifstream is(args.config_path);
        if (!is) {
            std::cerr << "phase: cannot read " << args.config_path << '\n';
            return 2;
        }
        parse_phase_config(is, spec);
    }
    if (!args.algo.empty()) spec.algorithm = parse_algorithm(args.algo);
    if (!args.ensemble.empty()) spec.ensemble = parse_ensemble(args.ensemble);
    if (!args.m_list.empty()) spec.m_values = parse_list(args.m_list, "--m-values");
    if (!args.p_list.empty()) spec.p_values = parse_list(args.p_list, "--p-values");
    if (args.n) spec.n = args.n;
    if (args.k) spec.k = args.k;
    if (args.trials) spec.trials = args.trials;
    if (args.epsilon >= 0.0) spec.epsilon = args.epsilon;
    if (args.noise_sigma >= 0.0) spec.noise_sigma = args.noise_sigma;
    if (args.seed_set) spec.master_seed = args.master_seed;

    const unsigned workers = resolve_workers(args.workers);
    const PhaseGrid grid = run_phase_grid(spec, workers);

    std::ofstream os(args.out_csv, std::ios::binary);
    if (!os) {
        std::cerr << "phase: cannot write " << args.out_csv << '\n';
        return 2;
    }
    write_grid_csv(grid, os);
    os.close();
    if (!os) {
        std::cerr << "phase: write failed: " << args.out_csv << '\n';
        return 2;
    }
    if (!args.out_heatmap.empty()) write_heatmap_pgm(grid, args.out_heatmap);
    return 0;
}

struct TheoryArgs {
    std::size_t n = 50, k = 3;
    double ck2 = 1.0;
    std::size_t gamma_samples = 10000;
    std::uint64_t seed = 0;
    std::size_t m = 0;  // 0 = no point report
    double eta = 0.0;   // 0 = default 1/m
};

int cmd_theory(const TheoryArgs& args) {
    if (args.k < 1 || args.k > args.n) {
        std::cerr << "theory: need 1 <= k <= n\n";
        return 2;
    }
    const std::size_t m_for_params = args.m ? args.m : 1;
    const double eta = args.eta > 0.0 ? args.eta : 1.0 / static_cast<double>(m_for_params);
    if (args.m && eta * static_cast<double>(args.m) > 1.0 + 1e-9) {
        std::cerr << "theory: eta * m must be <= 1 (step-size hypothesis)\n";
        return 2;
    }

    const GammaEstimate gk =
        estimate_gamma(args.n, args.k, args.gamma_samples, hash64({args.seed, 1}));
    const GammaEstimate g2k = estimate_gamma(args.n, std::min(2 * args.k, args.n),
                                             args.gamma_samples, hash64({args.seed, 2}));
    const ThresholdRoots roots = threshold_roots();
    const TheoryParams params(m_for_params, args.n, args.k, eta, args.ck2, g2k.gamma_hat,
                              gk.gamma_hat);
    const TheoryReport rep = theory_report(params);

    std::ostream& os = std::cout;
    os << "name,value\n";
    os << "n," << args.n << "\nk," << args.k << "\nck2," << args.ck2 << '\n';
    os << "gamma_k," << gk.gamma_hat << "\ngamma_k_std_error," << gk.std_error << '\n';
    os << "gamma_2k," << g2k.gamma_hat << "\ngamma_2k_std_error," << g2k.std_error << '\n';
    os << "transition_order," << transition_order(args.n, args.k) << '\n';
    os << "threshold_root_rot," << roots.c_rot << '\n';
    os << "threshold_root_rotp," << roots.c_rotp << '\n';
    os << "roots_check,pass\n";
    if (args.m) {
        os << "m," << args.m << "\neta," << eta << '\n';
        os << "r1," << rep.r1 << "\nr2," << rep.r2 << "\nrho1," << rep.rho1 << '\n';
        os << "c1," << rep.c1 << "\nc21," << rep.c21 << "\nc22," << rep.c22 << "\nc2," << rep.c2
           << '\n';
        os << "rho2," << rep.rho2 << "\nc3," << rep.c3 << '\n';
        os << "rot_converges," << (rep.rot_converges ? 1 : 0) << '\n';
        os << "rotp_converges," << (rep.rotp_converges ? 1 : 0) << '\n';
    }
    // Scanned transitions (literal constants, estimated gammas) next to the
    // closed-form predictions sqrt(m) > C * ck2 * gamma_2k.
    auto closed_m = [&](double c) {
        const double root = c * args.ck2 * g2k.gamma_hat;
        return static_cast<std::size_t>(std::floor(root * root)) + 1;
    };
    if (rep.m_transition_rot)
        os << "m_transition_rot," << *rep.m_transition_rot << '\n';
    else
        os << "m_transition_rot,none\n";
    if (rep.m_transition_rotp)
        os << "m_transition_rotp," << *rep.m_transition_rotp << '\n';
    else
        os << "m_transition_rotp,none\n";
    os << "closed_m_rot," << closed_m(roots.c_rot) << '\n';
    os << "closed_m_rotp," << closed_m(roots.c_rotp) << '\n';
    return 0;
}

struct GammaArgs {
    std::size_t n = 50, k = 3, samples = 10000;
    std::uint64_t seed = 0;
};

int cmd_gamma(const GammaArgs& args) {
    if (args.k < 1 || args.k > args.n) {
        std::cerr << "gamma: need 1 <= k <= n\n";
        return 2;
    }
    const GammaEstimate est = estimate_gamma(args.n, args.k, args.samples, args.seed);
    std::cout << "name,value\n";
    std::cout << "n," << est.n << "\nk," << est.k << "\nsamples," << est.samples << '\n';
    std::cout << "gamma_hat," << est.gamma_hat << "\nwidth_hat," << est.width_hat
              << "\nstd_error," << est.std_error << '\n';
    if (2 * args.k > args.n) {
        std::cerr << "gamma: 2k > n, skipping the inequality checks\n";
        return 0;
    }
    const GammaInequalityReport rep =
        check_gamma_inequalities(args.n, args.k, args.samples, args.seed);
    std::cout << "check,lhs,rhs,slack,passed\n";
    for (const auto& c : rep.checks)
        std::cout << c.name << ',' << c.lhs << ',' << c.rhs << ',' << c.slack << ','
                  << (c.passed ? 1 : 0) << '\n';
    std::cout << "all_passed," << (rep.all_passed ? 1 : 0) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse-recovery toolkit: thresholding algorithms, theory constants, "
                 "and phase-transition experiments"};
    app.require_subcommand(1);

    RecoverArgs rec;
    CLI::App* recover = app.add_subcommand("recover", "run one seeded recovery instance");
    recover->add_option("--algo", rec.algo, "iht|htp|rot|rotp")->capture_default_str();
    recover->add_option("--n", rec.n, "signal dimension")->capture_default_str();
    recover->add_option("--k", rec.k, "sparsity level")->capture_default_str();
    recover->add_option("--m", rec.m, "number of measurements")->capture_default_str();
    recover->add_option("--eta", rec.eta, "step size (default 1/m)");
    recover->add_option("--eps", rec.eps, "stall/success tolerance")->capture_default_str();
    recover->add_option("--max-iters", rec.max_iters, "iteration cap")->capture_default_str();
    recover->add_option("--ensemble", rec.ensemble, "gaussian|bernoulli")->capture_default_str();
    recover->add_option("--noise-sigma", rec.noise_sigma, "noise std dev")->capture_default_str();
    recover->add_option("--seed", rec.seed, "instance seed")->capture_default_str();
    recover->add_option("--trace-out", rec.trace_out, "per-iteration CSV path");

    PhaseArgs ph;
    CLI::App* phase = app.add_subcommand("phase", "run a phase-transition grid");
    phase->add_option("--config", ph.config_path, "key = value config file");
    phase->add_option("--out-csv", ph.out_csv, "grid CSV path")->required();
    phase->add_option("--out-heatmap", ph.out_heatmap, "PGM heatmap path");
    phase->add_option("--workers", ph.workers, "worker threads (default: machine parallelism; "
                                               "env OTK_WORKERS overrides)");
    phase->add_option("--algo", ph.algo, "iht|htp|rot|rotp");
    phase->add_option("--ensemble", ph.ensemble, "gaussian|bernoulli");
    phase->add_option("--m-values", ph.m_list, "comma-separated m grid");
    phase->add_option("--p-values", ph.p_list, "comma-separated p grid");
    phase->add_option("--n", ph.n, "signal dimension");
    phase->add_option("--k", ph.k, "sparsity level");
    phase->add_option("--trials", ph.trials, "trials per cell");
    phase->add_option("--eps", ph.epsilon, "success tolerance");
    phase->add_option("--noise-sigma", ph.noise_sigma, "noise std dev");
    phase->add_option("--master-seed", ph.master_seed, "grid master seed")
        ->each([&](const std::string&) { ph.seed_set = true; });

    TheoryArgs th;
    CLI::App* theory = app.add_subcommand("theory", "evaluate the convergence constants");
    theory->add_option("--n", th.n, "signal dimension")->capture_default_str();
    theory->add_option("--k", th.k, "sparsity level")->capture_default_str();
    theory->add_option("--ck2", th.ck2, "the C*K^2 product")->capture_default_str();
    theory->add_option("--gamma-samples", th.gamma_samples, "Monte Carlo samples")
        ->capture_default_str();
    theory->add_option("--seed", th.seed, "sampling seed")->capture_default_str();
    theory->add_option("--m", th.m, "point report at this m (else scan only)");
    theory->add_option("--eta", th.eta, "step size (default 1/m)");

    GammaArgs ga;
    CLI::App* gamma = app.add_subcommand("gamma", "estimate Gaussian complexity of sparse caps");
    gamma->add_option("--n", ga.n, "dimension")->capture_default_str();
    gamma->add_option("--k", ga.k, "sparsity")->capture_default_str();
    gamma->add_option("--samples", ga.samples, "Monte Carlo samples")->capture_default_str();
    gamma->add_option("--seed", ga.seed, "sampling seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (recover->parsed()) return cmd_recover(rec);
        if (phase->parsed()) return cmd_phase(ph);
        if (theory->parsed()) return cmd_theory(th);
        if (gamma->parsed()) return cmd_gamma(ga);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
