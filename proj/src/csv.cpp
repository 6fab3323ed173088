#include "slung/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "slung/errors.hpp"

namespace slung::csv {

const char kTraceHeader[] =
    "t,phi_b,dphi_b,phi_0,dphi_0,phi_1,dphi_1,"
    "est_phi_b,est_dphi_b,est_phi_0,est_dphi_0,est_phi_1,est_dphi_1,"
    "y_phi_b,y_dphi_b,y_ay,y_az,"
    "f_cmd,phi_b_cmd,tau_b,"
    "sigma_diag_0,sigma_diag_1,sigma_diag_2,sigma_diag_3,sigma_diag_4,"
    "sigma_diag_5,aL_y,aL_z";

namespace {
constexpr int kColumns = 28;
}

void write_trace_csv(const sim::Trace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << kTraceHeader << '\n';
  char buf[32];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.9g%c", v, sep);
    out << buf;
  };
  for (const auto& r : trace.rows) {
    put(r.t, ',');
    const Vec6 x = r.truth.vec();
    for (int i = 0; i < 6; ++i) put(x[i], ',');
    for (int i = 0; i < 6; ++i) put(r.xhat[i], ',');
    const Vec4 y = r.y.vec();
    for (int i = 0; i < 4; ++i) put(y[i], ',');
    put(r.f_cmd, ',');
    put(r.phi_b_cmd, ',');
    put(r.tau_b, ',');
    for (int i = 0; i < 6; ++i) put(r.sigma_diag[i], ',');
    put(r.leader_accel[0], ',');
    put(r.leader_accel[1], '\n');
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

sim::Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError(path + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) {
    throw ConfigError(path + ":1: unexpected header");
  }

  sim::Trace trace;
  double fields[kColumns];
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const char* s = line.c_str();
    for (int i = 0; i < kColumns; ++i) {
      char* end = nullptr;
      fields[i] = std::strtod(s, &end);
      if (end == s) {
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": bad number in column " + std::to_string(i + 1));
      }
      s = end;
      if (i < kColumns - 1) {
        if (*s != ',') {
          throw ConfigError(path + ":" + std::to_string(line_no) +
                            ": expected ',' after column " +
                            std::to_string(i + 1));
        }
        ++s;
      }
    }
    if (*s != '\0') {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": trailing characters");
    }

    sim::TickRecord r;
    r.t = fields[0];
    Vec6 x;
    for (int i = 0; i < 6; ++i) x[i] = fields[1 + i];
    r.truth = StateVec::from_vec(x);
    for (int i = 0; i < 6; ++i) r.xhat[i] = fields[7 + i];
    Vec4 y;
    for (int i = 0; i < 4; ++i) y[i] = fields[13 + i];
    r.y = Measurement::from_vec(y);
    r.f_cmd = fields[17];
    r.phi_b_cmd = fields[18];
    r.tau_b = fields[19];
    for (int i = 0; i < 6; ++i) r.sigma_diag[i] = fields[20 + i];
    r.leader_accel = Vec2(fields[26], fields[27]);
    trace.rows.push_back(r);
  }
  return trace;
}

}  // namespace slung::csv
