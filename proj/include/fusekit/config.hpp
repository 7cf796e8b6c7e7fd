#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fusekit/scenarios.hpp"

namespace fusekit {

enum class ScenarioKind { kPendulum, kTracking };

/// Validated run configuration. Exactly one of pendulum/tracking is
/// active depending on scenario.
struct RunConfig {
  ScenarioKind scenario = ScenarioKind::kPendulum;
  PendulumParams pendulum;
  TrackingParams tracking;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = ".";
  bool emit_trace_csv = true;
  bool emit_summary = true;
  bool emit_plot_data = false;

  bool operator==(const RunConfig&) const = default;
};

/// Parse a flat "key = value" document with '#' comments. Unknown keys
/// are rejected; missing keys take the documented defaults. Throws
/// ConfigError with a line number on syntax errors and DomainError on
/// value constraint violations.
RunConfig parse_config(const std::string& text);

/// Render a config back to the document format; parse_config(render(c))
/// reproduces c for every valid config.
std::string render_config(const RunConfig& config);

/// Execute the configured scenario for every seed, writing the requested
/// files under config.output_dir and printing a summary table. Returns a
/// process exit status: 0 on success; nonzero on I/O failure, or when
/// check is set and pooled per-state containment falls below
/// kContainmentGate.
int run_command(const RunConfig& config, bool check = false);

inline constexpr double kContainmentGate = 0.95;

}  // namespace fusekit
