#pragma once

#include <string>

#include "slung/controller.hpp"
#include "slung/estimator.hpp"
#include "slung/sim.hpp"
#include "slung/types.hpp"

namespace slung::config {

/// Full description of one scenario. Built from defaults, a named preset, or
/// a config file; `finalize` derives the initial states from the setpoints
/// before the config is handed to the simulator.
struct RunConfig {
  SystemParams params;
  Setpoints setpoints{-40.0 * kDegToRad, 40.0 * kDegToRad};
  sim::SimConfig sim;
  estimator::EstimatorConfig est;
  control::Gains gains;
  /// Initial true cable angles relative to the setpoints (rad); the roll
  /// starts at the feedforward value and all rates at zero.
  Vec2 x0_offset{10.0 * kDegToRad, 10.0 * kDegToRad};
};

/// Baseline configuration: nominal parameters, estimated-feedback mode,
/// 60 s at 200 Hz, default noise.
RunConfig defaults();

/// Named presets: "openloop", "truth", "estimated", "two-robot".
/// Throws ConfigError for unknown names.
RunConfig preset(const std::string& name);

/// Parses an INI-style config (sections [params], [setpoints], [sim],
/// [noise], [estimator], [gains], [leader]; '#' or ';' comments) on top of
/// the defaults, then finalizes. Unknown keys and malformed values are
/// rejected with `origin:line: section.key` messages. Angles appear in
/// degrees in files and radians internally.
RunConfig parse_string(const std::string& text, const std::string& origin);

/// parse_string on the contents of `path`. Throws ConfigError when the file
/// cannot be read.
RunConfig load_file(const std::string& path);

/// Derives sim.x0 (equilibrium at the setpoints plus x0_offset on the cable
/// angles) and the estimator's initial mean (the unperturbed equilibrium),
/// and validates parameter ranges. Called by preset/parse/load.
void finalize(RunConfig& rc);

sim::Mode mode_from_name(const std::string& name);
std::string mode_name(sim::Mode mode);

}  // namespace slung::config
