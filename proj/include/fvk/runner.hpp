#pragma once

// Scenario execution: named presets for the library's reference problems,
// configuration handling, result serialization. The CLI is a thin wrapper
// around run_config.

#include <map>
#include <string>

#include "fvk/families.hpp"
#include "fvk/relax.hpp"
#include "fvk/solve.hpp"

namespace fvk {

struct RunConfig {
  std::string command;  // energy gradcheck minimize buckle family relax
                        // prestress poincare sweep
  std::string preset;
  std::string out_dir;  // empty: write nothing
  std::uint64_t seed = 0;

  // geometry
  bool annulus = false;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  int nx = 33, ny = 33;
  double r1 = 1.0, r2 = 2.0;
  int nr = 64, ntheta = 256;

  // material and load
  double young = 1.0;
  double nu = 0.3;
  double h = 0.1;
  double alpha = 0.0;
  double f = 0.0;              // uniform normal traction
  double threshold_frac = 0.0; // when nonzero: f = frac * compression_threshold
  double gamma = 1.0;          // shear / buckling load factor
  double p1 = 0.0, p2 = 0.0;   // annulus boundary pressures

  // boundary condition: free | supported | clamped (+ optional partial Gamma)
  std::string bc = "free";
  std::string gamma_region = "all";  // all | left | shear_strip

  // family / eigen parameters
  std::string family;  // ce12 ce14 remark13 ce33 radial_osc tangential_osc
  int n_lo = 1, n_hi = 8;
  int trials = 10;
  int modes = 3;
  int nodes_1d = 401;
  std::string variant = "clamped";  // buckle: clamped | supported | free
  double width = 1.0;               // in-plane width for critical thickness
  double c_beta = 1.0, c_sigma = 1.0, sigma_exp = -1.0;
  std::vector<double> h_list;       // relax / sweep thickness values
  std::vector<double> alpha_list;   // sweep exponents

  SolveOptions solve;
};

struct RunResult {
  int exit_code = 0;          // 0 ok, 1 usage, 2 numerical failure,
                              // 3 divergence certificate
  std::string summary_json;   // serialized summary (also written to out_dir)
  std::map<std::string, double> scalars;  // selected outputs for callers
};

std::vector<std::string> preset_names();
RunConfig make_preset(const std::string& name);

RunResult run_config(const RunConfig& cfg);

/// Least-squares line fit y = slope*x + intercept; returns (slope, r_squared).
std::pair<double, double> linear_fit(const std::vector<double>& x,
                                     const std::vector<double>& y);

}  // namespace fvk
