#pragma once

// File formats shared by the CLI and the tests:
//   - grid CSV: header `m,p,successes,trials,rate`, rate to 6 decimals, rows
//     sorted (m asc, p asc), LF line endings, no trailing separator;
//   - trace CSV: header `p,rel_error,residual_norm,qp_iters,qp_converged`,
//     one row per iteration;
//   - heatmap: plain PGM ("P2"), one pixel per (m, p) cell, gray =
//     round(255 * rate), m on rows ascending downward, p on columns ascending
//     rightward; a sidecar `<path>.txt` lists the axis values;
//   - phase config: `key = value` lines with `#` comments, keys named after
//     the PhaseGridSpec fields, lists comma-separated.

#include <iosfwd>
#include <string>

#include "otk/experiments.hpp"

namespace otk {

void write_grid_csv(const PhaseGrid& grid, std::ostream& os);

struct GridCsvRow {
    std::size_t m = 0, p = 0, successes = 0, trials = 0;
    double rate = 0.0;
};

/// Parses a grid CSV back into rows; throws on a malformed header or row.
std::vector<GridCsvRow> parse_grid_csv(std::istream& is);

/// Writes the per-iteration rows of a traced run (the initial point is not a
/// row; rows start at p = 1).
void write_trace_csv(const IterationTrace& trace, std::ostream& os);

void write_heatmap_pgm(const PhaseGrid& grid, const std::string& path);

/// Parses a phase config into `spec` (fields not mentioned keep their current
/// values). Unknown keys or unparsable values throw std::invalid_argument.
void parse_phase_config(std::istream& is, PhaseGridSpec& spec);

}  // namespace otk
