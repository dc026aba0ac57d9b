#pragma once

#include <ostream>

#include "config.hpp"

namespace qbayes::cli {

/// Writes the optimal strategy (S, spectrum, POM, estimates, error budget)
/// as a JSON document.
void cmd_solve(RunConfig& cfg, std::ostream& out);

/// CSV grid over (a, alpha, beta); per-cell failures land in the error
/// column and the run continues.
void cmd_sweep(RunConfig& cfg, std::ostream& out);

/// CSV of mean hyperbolic errors for SLD-eigenbasis measurements.
void cmd_figure1(RunConfig& cfg, std::ostream& out);

/// Per-shot CSV plus a summary JSON (final estimate and central 95%
/// credible interval in theta).
void cmd_simulate(RunConfig& cfg, std::ostream& csv_out, std::ostream& json_out);

} // namespace qbayes::cli
