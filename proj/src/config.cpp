#include "slung/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "slung/errors.hpp"

namespace slung::config {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& v) {
  const char* s = v.c_str();
  char* end = nullptr;
  const double x = std::strtod(s, &end);
  if (end == s || *end != '\0') {
    throw ConfigError("not a number: '" + v + "'");
  }
  return x;
}

std::uint64_t to_uint64(const std::string& v) {
  const char* s = v.c_str();
  char* end = nullptr;
  const unsigned long long x = std::strtoull(s, &end, 10);
  // strtoull silently wraps negative input, so reject the sign ourselves.
  if (end == s || *end != '\0' || v.find('-') != std::string::npos) {
    throw ConfigError("not an unsigned integer: '" + v + "'");
  }
  return x;
}

template <typename VecT>
VecT to_list(const std::string& v) {
  VecT out;
  const int n = static_cast<int>(out.size());
  std::vector<std::string> items;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(item);
  if (static_cast<int>(items.size()) != n) {
    throw ConfigError("expected " + std::to_string(n) +
                      " comma-separated values, got " +
                      std::to_string(items.size()));
  }
  for (int i = 0; i < n; ++i) out[i] = to_double(trim(items[i]));
  return out;
}

/// Applies one key to the config. Returns false for an unknown key.
bool apply(RunConfig& rc, const std::string& section, const std::string& key,
           const std::string& value) {
  if (section == "params") {
    if (key == "m") rc.params.m = to_double(value);
    else if (key == "M") rc.params.M = to_double(value);
    else if (key == "l0") rc.params.l0 = to_double(value);
    else if (key == "l1") rc.params.l1 = to_double(value);
    else if (key == "Ib") rc.params.Ib = to_double(value);
    else if (key == "g") rc.params.g = to_double(value);
    else return false;
    return true;
  }
  if (section == "setpoints") {
    if (key == "phi_0_deg") rc.setpoints.phi_0 = to_double(value) * kDegToRad;
    else if (key == "phi_1_deg") rc.setpoints.phi_1 = to_double(value) * kDegToRad;
    else return false;
    return true;
  }
  if (section == "sim") {
    if (key == "dt") rc.sim.dt = to_double(value);
    else if (key == "duration") rc.sim.duration = to_double(value);
    else if (key == "seed") rc.sim.seed = to_uint64(value);
    else if (key == "substeps") rc.sim.substeps = static_cast<int>(to_uint64(value));
    else if (key == "c_d") rc.sim.c_d = to_double(value);
    else if (key == "thrust_bias") rc.sim.thrust_bias = to_double(value);
    else if (key == "mode") rc.sim.mode = mode_from_name(value);
    else if (key == "x0_offset_phi_0_deg") rc.x0_offset[0] = to_double(value) * kDegToRad;
    else if (key == "x0_offset_phi_1_deg") rc.x0_offset[1] = to_double(value) * kDegToRad;
    else return false;
    return true;
  }
  if (section == "noise") {
    if (key == "sigma_phi_b_deg") rc.sim.noise.sigma_phi_b = to_double(value) * kDegToRad;
    else if (key == "sigma_dphi_b_dps") rc.sim.noise.sigma_dphi_b = to_double(value) * kDegToRad;
    else if (key == "sigma_acc") rc.sim.noise.sigma_acc = to_double(value);
    else if (key == "sigma_process") rc.sim.noise.sigma_process = to_list<Vec6>(value);
    else return false;
    return true;
  }
  if (section == "estimator") {
    if (key == "lambda") rc.est.lambda = to_double(value);
    else if (key == "q_diag") rc.est.q_diag = to_list<Vec6>(value);
    else if (key == "r_diag") rc.est.r_diag = to_list<Vec4>(value);
    else if (key == "sigma0_diag") rc.est.sigma0_diag = to_list<Vec6>(value);
    else if (key == "fd_step") rc.est.fd_step = to_double(value);
    else return false;
    return true;
  }
  if (section == "gains") {
    if (key == "kp") rc.gains.kp = to_list<Vec2>(value);
    else if (key == "kd") rc.gains.kd = to_list<Vec2>(value);
    else if (key == "ki") rc.gains.ki = to_list<Vec2>(value);
    else if (key == "integ_limit_deg_s") rc.gains.integ_limit = to_double(value) * kDegToRad;
    else if (key == "f_min") rc.gains.f_min = to_double(value);
    else if (key == "f_max") rc.gains.f_max = to_double(value);
    else if (key == "roll_kp") rc.sim.roll.kp = to_double(value);
    else if (key == "roll_kd") rc.sim.roll.kd = to_double(value);
    else return false;
    return true;
  }
  if (section == "leader") {
    using Kind = sim::LeaderTrajectory::Kind;
    if (key == "kind") {
      if (value == "fixed") rc.sim.leader.kind = Kind::kFixed;
      else if (value == "sinusoid") rc.sim.leader.kind = Kind::kSinusoid;
      else if (value == "waypoint") rc.sim.leader.kind = Kind::kWaypointRamp;
      else throw ConfigError("unknown leader kind '" + value + "'");
    } else if (key == "amplitude") {
      rc.sim.leader.amplitude = to_double(value);
    } else if (key == "period") {
      rc.sim.leader.period = to_double(value);
    } else if (key == "axis") {
      if (value == "y") rc.sim.leader.axis = 0;
      else if (value == "z") rc.sim.leader.axis = 1;
      else throw ConfigError("leader axis must be 'y' or 'z'");
    } else {
      return false;
    }
    return true;
  }
  throw ConfigError("unknown section [" + section + "]");
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invalid config: ") + what);
}

}  // namespace

sim::Mode mode_from_name(const std::string& name) {
  if (name == "openloop") return sim::Mode::kOpenLoop;
  if (name == "truth") return sim::Mode::kTruthFeedback;
  if (name == "estimated") return sim::Mode::kEstimatedFeedback;
  throw ConfigError("unknown mode '" + name +
                    "' (expected openloop|truth|estimated)");
}

std::string mode_name(sim::Mode mode) {
  switch (mode) {
    case sim::Mode::kOpenLoop: return "openloop";
    case sim::Mode::kTruthFeedback: return "truth";
    case sim::Mode::kEstimatedFeedback: return "estimated";
  }
  return "?";
}

void finalize(RunConfig& rc) {
  try {
    rc.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const double half_pi = kPi / 2.0;
  require(std::abs(rc.setpoints.phi_0) < half_pi &&
              std::abs(rc.setpoints.phi_1) < half_pi,
          "setpoints must lie in (-90, 90) deg");
  require(rc.sim.dt > 0.0, "sim.dt must be > 0");
  require(rc.sim.duration > 0.0, "sim.duration must be > 0");
  require(rc.sim.substeps >= 1, "sim.substeps must be >= 1");
  require(rc.sim.c_d >= 0.0, "sim.c_d must be >= 0");
  require(rc.sim.noise.sigma_phi_b >= 0.0 && rc.sim.noise.sigma_dphi_b >= 0.0 &&
              rc.sim.noise.sigma_acc >= 0.0 &&
              (rc.sim.noise.sigma_process.array() >= 0.0).all(),
          "noise sigmas must be >= 0");
  require(rc.est.lambda > 0.0, "estimator.lambda must be > 0");
  require(rc.est.fd_step > 0.0, "estimator.fd_step must be > 0");
  require((rc.est.q_diag.array() >= 0.0).all(), "estimator.q_diag must be >= 0");
  require((rc.est.r_diag.array() >= 0.0).all(), "estimator.r_diag must be >= 0");
  require((rc.est.sigma0_diag.array() >= 0.0).all(),
          "estimator.sigma0_diag must be >= 0");
  require((rc.gains.kp.array() >= 0.0).all() &&
              (rc.gains.kd.array() >= 0.0).all() &&
              (rc.gains.ki.array() >= 0.0).all(),
          "gains must be >= 0");
  require(rc.gains.integ_limit >= 0.0, "gains.integ_limit must be >= 0");
  require(rc.gains.f_min >= 0.0, "gains.f_min must be >= 0");
  require(rc.sim.roll.kp > 0.0 && rc.sim.roll.kd > 0.0,
          "roll gains must be > 0");
  if (rc.sim.leader.kind != sim::LeaderTrajectory::Kind::kFixed) {
    require(rc.sim.leader.period > 0.0, "leader.period must be > 0");
    require(rc.sim.leader.amplitude >= 0.0, "leader.amplitude must be >= 0");
  }

  // Initial conditions: truth starts offset from the commanded equilibrium,
  // the filter starts on it. Throws SingularConfiguration for phi_0* = phi_1*.
  const auto ff = control::feedforward(rc.setpoints, rc.params);
  rc.sim.x0 = StateVec{ff.phi_b, 0.0, rc.setpoints.phi_0 + rc.x0_offset[0], 0.0,
                       rc.setpoints.phi_1 + rc.x0_offset[1], 0.0};
  rc.est.x0 =
      StateVec{ff.phi_b, 0.0, rc.setpoints.phi_0, 0.0, rc.setpoints.phi_1, 0.0}
          .vec();
}

RunConfig defaults() {
  RunConfig rc;
  finalize(rc);
  return rc;
}

RunConfig preset(const std::string& name) {
  RunConfig rc;
  if (name == "openloop") {
    rc.sim.mode = sim::Mode::kOpenLoop;
    rc.sim.c_d = 0.002;
  } else if (name == "truth") {
    rc.sim.mode = sim::Mode::kTruthFeedback;
  } else if (name == "estimated") {
    rc.sim.mode = sim::Mode::kEstimatedFeedback;
  } else if (name == "two-robot") {
    rc.sim.mode = sim::Mode::kEstimatedFeedback;
    rc.sim.leader.kind = sim::LeaderTrajectory::Kind::kSinusoid;
    rc.sim.leader.amplitude = 0.1;
    rc.sim.leader.period = 10.0;
    rc.sim.leader.axis = 0;
  } else {
    throw ConfigError("unknown preset '" + name +
                      "' (expected openloop|truth|estimated|two-robot)");
  }
  finalize(rc);
  return rc;
}

RunConfig parse_string(const std::string& text, const std::string& origin) {
  RunConfig rc;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  const auto fail = [&](const std::string& msg) -> void {
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "params" && section != "setpoints" && section != "sim" &&
          section != "noise" && section != "estimator" && section != "gains" &&
          section != "leader") {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail("expected 'key = value'");
    if (section.empty()) fail("key '" + key + "' outside any section");
    try {
      if (!apply(rc, section, key, value)) {
        fail("unknown key " + section + "." + key);
      }
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      if (what.rfind(origin + ":", 0) == 0) throw;  // already located
      fail(section + "." + key + ": " + what);
    }
  }
  try {
    finalize(rc);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return rc;
}

RunConfig load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

}  // namespace slung::config
