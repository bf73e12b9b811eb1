#include "otk/gridio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otk {

namespace {

std::string format_rate(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", rate);
    return buf;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    return parts;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(what);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad " + what + ": '" + s + "'");
    }
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad " + what + ": '" + s + "'");
    }
}

std::vector<std::size_t> parse_size_list(const std::string& s, const std::string& what) {
    std::vector<std::size_t> out;
    for (const std::string& part : split(s, ','))
        if (!part.empty()) out.push_back(parse_size(part, what));
    if (out.empty()) throw std::invalid_argument("empty list for " + what);
    return out;
}

}  // namespace

void write_grid_csv(const PhaseGrid& grid, std::ostream& os) {
    os << "m,p,successes,trials,rate\n";
    for (std::size_t mi = 0; mi < grid.spec.m_values.size(); ++mi) {
        for (std::size_t pi = 0; pi < grid.spec.p_values.size(); ++pi) {
            os << grid.spec.m_values[mi] << ',' << grid.spec.p_values[pi] << ','
               << grid.success_count(mi, pi) << ',' << grid.spec.trials << ','
               << format_rate(grid.rate(mi, pi)) << '\n';
        }
    }
}

std::vector<GridCsvRow> parse_grid_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != "m,p,successes,trials,rate")
        throw std::invalid_argument("grid csv: bad header");
    std::vector<GridCsvRow> rows;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto parts = split(line, ',');
        if (parts.size() != 5) throw std::invalid_argument("grid csv: bad row: " + line);
        GridCsvRow row;
        row.m = parse_size(parts[0], "m");
        row.p = parse_size(parts[1], "p");
        row.successes = parse_size(parts[2], "successes");
        row.trials = parse_size(parts[3], "trials");
        row.rate = parse_double(parts[4], "rate");
        rows.push_back(row);
    }
    return rows;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& os) {
    os << "p,rel_error,residual_norm,qp_iters,qp_converged\n";
    for (const IterationRecord& rec : trace.records) {
        if (rec.p == 0) continue;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%zu,%.12e,%.12e,%zu,%d\n", rec.p,
                      rec.error_to_truth.value_or(std::nan("")), rec.residual_norm,
                      rec.qp_iterations, rec.qp_converged ? 1 : 0);
        os << buf;
    }
}

void write_heatmap_pgm(const PhaseGrid& grid, const std::string& path) {
    const std::size_t M = grid.spec.m_values.size(), P = grid.spec.p_values.size();
    std::ofstream pgm(path, std::ios::binary);
    if (!pgm) throw std::runtime_error("cannot write " + path);
    pgm << "P2\n" << P << ' ' << M << "\n255\n";
    for (std::size_t mi = 0; mi < M; ++mi) {
        for (std::size_t pi = 0; pi < P; ++pi) {
            pgm << static_cast<int>(std::lround(255.0 * grid.rate(mi, pi)));
            pgm << (pi + 1 < P ? ' ' : '\n');
        }
    }
    if (!pgm) throw std::runtime_error("write failed: " + path);

    std::ofstream axes(path + ".txt", std::ios::binary);
    if (!axes) throw std::runtime_error("cannot write " + path + ".txt");
    axes << "rows m:";
    for (std::size_t m : grid.spec.m_values) axes << ' ' << m;
    axes << "\ncols p:";
    for (std::size_t p : grid.spec.p_values) axes << ' ' << p;
    axes << '\n';
}

void parse_phase_config(std::istream& is, PhaseGridSpec& spec) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "n") {
            spec.n = parse_size(value, "n");
        } else if (key == "k") {
            spec.k = parse_size(value, "k");
        } else if (key == "m_values") {
            spec.m_values = parse_size_list(value, "m_values");
        } else if (key == "p_values") {
            spec.p_values = parse_size_list(value, "p_values");
        } else if (key == "trials") {
            spec.trials = parse_size(value, "trials");
        } else if (key == "epsilon") {
            spec.epsilon = parse_double(value, "epsilon");
        } else if (key == "algorithm") {
            const auto algo = algorithm_from_string(value);
            if (!algo) throw std::invalid_argument("unknown algorithm: " + value);
            spec.algorithm = *algo;
        } else if (key == "ensemble") {
            if (value == "gaussian")
                spec.ensemble = Ensemble::Gaussian;
            else if (value == "bernoulli")
                spec.ensemble = Ensemble::Bernoulli;
            else
                throw std::invalid_argument("unknown ensemble: " + value);
        } else if (key == "noise_sigma") {
            spec.noise_sigma = parse_double(value, "noise_sigma");
        } else if (key == "master_seed") {
            spec.master_seed = parse_size(value, "master_seed");
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
}

}  // namespace otk
