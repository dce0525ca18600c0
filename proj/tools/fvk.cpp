// Command-line front end: presets and config files map onto RunConfig, flags
// override both, and the summary JSON is echoed to stdout.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "fvk/runner.hpp"

namespace {

using nlohmann::json;

void apply_config_json(const json& j, fvk::RunConfig& cfg) {
  auto get = [&](const char* k, auto& dst) {
    if (j.contains(k)) j.at(k).get_to(dst);
  };
  get("command", cfg.command);
  get("out", cfg.out_dir);
  get("seed", cfg.seed);
  if (j.contains("rectangle")) {
    const json& r = j.at("rectangle");
    cfg.annulus = false;
    if (r.contains("x0")) r.at("x0").get_to(cfg.x0);
    if (r.contains("x1")) r.at("x1").get_to(cfg.x1);
    if (r.contains("y0")) r.at("y0").get_to(cfg.y0);
    if (r.contains("y1")) r.at("y1").get_to(cfg.y1);
    if (r.contains("nx")) r.at("nx").get_to(cfg.nx);
    if (r.contains("ny")) r.at("ny").get_to(cfg.ny);
  }
  if (j.contains("annulus")) {
    const json& a = j.at("annulus");
    cfg.annulus = true;
    if (a.contains("r1")) a.at("r1").get_to(cfg.r1);
    if (a.contains("r2")) a.at("r2").get_to(cfg.r2);
    if (a.contains("nr")) a.at("nr").get_to(cfg.nr);
    if (a.contains("ntheta")) a.at("ntheta").get_to(cfg.ntheta);
  }
  get("E", cfg.young);
  get("nu", cfg.nu);
  get("h", cfg.h);
  get("alpha", cfg.alpha);
  get("f", cfg.f);
  get("threshold_frac", cfg.threshold_frac);
  get("gamma", cfg.gamma);
  get("p1", cfg.p1);
  get("p2", cfg.p2);
  get("bc", cfg.bc);
  get("gamma_region", cfg.gamma_region);
  get("family", cfg.family);
  get("n_lo", cfg.n_lo);
  get("n_hi", cfg.n_hi);
  get("trials", cfg.trials);
  get("modes", cfg.modes);
  get("nodes_1d", cfg.nodes_1d);
  get("variant", cfg.variant);
  get("width", cfg.width);
  get("c_beta", cfg.c_beta);
  get("c_sigma", cfg.c_sigma);
  get("sigma_exp", cfg.sigma_exp);
  get("h_list", cfg.h_list);
  get("alpha_list", cfg.alpha_list);
  if (j.contains("solve")) {
    const json& s = j.at("solve");
    if (s.contains("max_iters")) s.at("max_iters").get_to(cfg.solve.max_iters);
    if (s.contains("grad_tol")) s.at("grad_tol").get_to(cfg.solve.grad_tol);
    if (s.contains("memory")) s.at("memory").get_to(cfg.solve.memory);
    if (s.contains("noise_amplitude")) s.at("noise_amplitude").get_to(cfg.solve.noise_amplitude);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Foppl-von Karman plate energies: minimization, buckling, relaxation"};
  app.require_subcommand(0, 1);
  app.set_help_flag("--help", "print usage");
  app.fallthrough();

  std::optional<std::string> preset, config_path, out_dir, grid, annulus, rect, bc,
      gamma_region, family, variant, h_list_s, alpha_list_s;
  std::optional<double> h, alpha, nu, young, f, threshold_frac, gamma, p1, p2, width,
      c_beta, c_sigma, sigma_exp, noise, grad_tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_lo, n_hi, trials, modes, nodes_1d, max_iters;

  app.add_option("--preset", preset, "named reference scenario");
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory for summary.json and CSVs");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--grid", grid, "rectangle resolution NXxNY");
  app.add_option("--rect", rect, "rectangle extent x0,x1,y0,y1");
  app.add_option("--annulus", annulus, "annulus geometry R1,R2,nr,ntheta");
  app.add_option("--h", h, "thickness");
  app.add_option("--alpha", alpha, "load scaling exponent");
  app.add_option("--nu", nu, "Poisson ratio");
  app.add_option("--E", young, "Young modulus");
  app.add_option("--f", f, "uniform normal boundary traction");
  app.add_option("--threshold-frac", threshold_frac, "set f as a fraction of the compression threshold");
  app.add_option("--gamma", gamma, "shear load factor");
  app.add_option("--p1", p1, "inner boundary pressure");
  app.add_option("--p2", p2, "outer boundary pressure");
  app.add_option("--bc", bc, "free | supported | clamped");
  app.add_option("--gamma-region", gamma_region, "all | left");
  app.add_option("--family", family, "ce12 | ce14 | remark13 | ce33 | radial_osc | tangential_osc");
  app.add_option("--n-lo", n_lo, "first family index");
  app.add_option("--n-hi", n_hi, "last family index");
  app.add_option("--trials", trials, "gradcheck trials");
  app.add_option("--modes", modes, "buckling modes to compute");
  app.add_option("--nodes-1d", nodes_1d, "1D eigenproblem resolution");
  app.add_option("--variant", variant, "buckling variant: clamped | supported | free | shear");
  app.add_option("--width", width, "plate width for critical thickness");
  app.add_option("--c-beta", c_beta, "oscillation count prefactor");
  app.add_option("--c-sigma", c_sigma, "mollification width prefactor");
  app.add_option("--sigma-exp", sigma_exp, "mollification width exponent override");
  app.add_option("--h-list", h_list_s, "comma-separated thickness list");
  app.add_option("--alpha-list", alpha_list_s, "comma-separated alpha list");
  app.add_option("--noise", noise, "initial perturbation amplitude");
  app.add_option("--max-iters", max_iters, "solver iteration cap");
  app.add_option("--grad-tol", grad_tol, "solver gradient tolerance");

  const char* commands[] = {"energy", "gradcheck", "minimize", "buckle", "family",
                            "relax", "prestress", "poincare", "sweep"};
  for (const char* c : commands) app.add_subcommand(c)->silent();

  CLI11_PARSE(app, argc, argv);

  fvk::RunConfig cfg;
  try {
    if (preset) cfg = fvk::make_preset(*preset);
    if (config_path) {
      std::ifstream is(*config_path);
      if (!is) {
        std::fprintf(stderr, "cannot open config file %s\n", config_path->c_str());
        return 1;
      }
      json j = json::parse(is);
      apply_config_json(j, cfg);
    }
    for (const char* c : commands)
      if (app.get_subcommand(c)->parsed()) cfg.command = c;

    auto parse_list = [](const std::string& s) {
      std::vector<double> out;
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
      return out;
    };
    if (grid) {
      const auto pos = grid->find('x');
      if (pos == std::string::npos) throw std::invalid_argument("--grid expects NXxNY");
      cfg.annulus = false;
      cfg.nx = std::stoi(grid->substr(0, pos));
      cfg.ny = std::stoi(grid->substr(pos + 1));
    }
    if (rect) {
      const auto v = parse_list(*rect);
      if (v.size() != 4) throw std::invalid_argument("--rect expects x0,x1,y0,y1");
      cfg.annulus = false;
      cfg.x0 = v[0];
      cfg.x1 = v[1];
      cfg.y0 = v[2];
      cfg.y1 = v[3];
    }
    if (annulus) {
      const auto v = parse_list(*annulus);
      if (v.size() != 4) throw std::invalid_argument("--annulus expects R1,R2,nr,ntheta");
      cfg.annulus = true;
      cfg.r1 = v[0];
      cfg.r2 = v[1];
      cfg.nr = static_cast<int>(v[2]);
      cfg.ntheta = static_cast<int>(v[3]);
    }
    if (out_dir) cfg.out_dir = *out_dir;
    if (seed) cfg.seed = *seed;
    if (h) cfg.h = *h;
    if (alpha) cfg.alpha = *alpha;
    if (nu) cfg.nu = *nu;
    if (young) cfg.young = *young;
    if (f) cfg.f = *f;
    if (threshold_frac) cfg.threshold_frac = *threshold_frac;
    if (gamma) cfg.gamma = *gamma;
    if (p1) cfg.p1 = *p1;
    if (p2) cfg.p2 = *p2;
    if (bc) cfg.bc = *bc;
    if (gamma_region) cfg.gamma_region = *gamma_region;
    if (family) cfg.family = *family;
    if (n_lo) cfg.n_lo = *n_lo;
    if (n_hi) cfg.n_hi = *n_hi;
    if (trials) cfg.trials = *trials;
    if (modes) cfg.modes = *modes;
    if (nodes_1d) cfg.nodes_1d = *nodes_1d;
    if (variant) cfg.variant = *variant;
    if (width) cfg.width = *width;
    if (c_beta) cfg.c_beta = *c_beta;
    if (c_sigma) cfg.c_sigma = *c_sigma;
    if (sigma_exp) cfg.sigma_exp = *sigma_exp;
    if (h_list_s) cfg.h_list = parse_list(*h_list_s);
    if (alpha_list_s) cfg.alpha_list = parse_list(*alpha_list_s);
    if (noise) cfg.solve.noise_amplitude = *noise;
    if (max_iters) cfg.solve.max_iters = *max_iters;
    if (grad_tol) cfg.solve.grad_tol = *grad_tol;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }

  if (cfg.command.empty()) {
    std::fprintf(stderr, "no command: give a subcommand, --preset, or --config\n");
    return 1;
  }

  const fvk::RunResult r = fvk::run_config(cfg);
  std::fputs(r.summary_json.c_str(), stdout);
  return r.exit_code;
}
