#pragma once

#include <string>
#include <vector>

#include "fusekit/scenarios.hpp"

namespace fusekit {

/// Trace CSV, one row per truth step. Columns:
/// t, x_true_0..n, z_0..d, x_hat_0..n, p_diag_0..n, nu_0..d, sig3_0..n.
/// Steps without a measurement carry the literal token NA in the z and nu
/// columns. Reals are written with 17 significant digits, locale
/// independent, so a fixed (params, seed) pair reproduces the file
/// byte-for-byte.
std::string trace_to_csv(const ScenarioTrace& trace);

/// Plot-oriented CSV: t, truth, estimate, and estimate +/- 3 sigma per
/// state.
std::string trace_to_plot_csv(const ScenarioTrace& trace);

/// "key: value" lines for a scenario summary.
std::string summary_to_text(const ScenarioSummary& summary);

/// Shortest-round-trip-or-17-digit decimal rendering used by every
/// writer; locale independent.
std::string format_real(double value);

}  // namespace fusekit
