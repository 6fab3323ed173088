#pragma once

#include <string>

#include "slung/sim.hpp"

namespace slung::csv {

/// Column order of the trace CSV (28 columns, SI units / radians):
///   t,
///   phi_b, dphi_b, phi_0, dphi_0, phi_1, dphi_1,          true state
///   est_phi_b, ..., est_dphi_1,                           filter mean
///   y_phi_b, y_dphi_b, y_ay, y_az,                        measurement
///   f_cmd, phi_b_cmd, tau_b,                              commands
///   sigma_diag_0, ..., sigma_diag_5,                      cov diagonal
///   aL_y, aL_z                                            leader accel
extern const char kTraceHeader[];

/// Writes one row per tick with 9 significant digits. Throws
/// std::runtime_error when the file cannot be written.
void write_trace_csv(const sim::Trace& trace, const std::string& path);

/// Reads a file produced by write_trace_csv. The header line must match
/// kTraceHeader exactly. Throws ConfigError naming the offending line on
/// malformed input. The abort flag is not stored in the CSV, so the
/// returned trace is never marked aborted.
sim::Trace read_trace_csv(const std::string& path);

}  // namespace slung::csv
