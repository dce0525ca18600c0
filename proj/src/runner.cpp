#include "fvk/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace fvk {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fm(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& dir, const std::string& name, const std::string& body) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / name, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + name + " under " + dir);
  os << body;
}

void write_fields_csv(const std::string& dir, const Grid& g, const VectorField2& u,
                      const ScalarField& w) {
  std::string s = "x1,x2,u1,u2,w\n";
  for (int i = 0; i < g.num_nodes(); ++i)
    s += fm(g.x(i)) + "," + fm(g.y(i)) + "," + fm(u.x[i]) + "," + fm(u.y[i]) + "," +
         fm(w[i]) + "\n";
  write_text(dir, "fields.csv", s);
}

Grid make_grid(const RunConfig& cfg) {
  if (cfg.annulus) return Grid::make_annulus(cfg.r1, cfg.r2, cfg.nr, cfg.ntheta);
  return Grid::make_rectangle(cfg.x0, cfg.x1, cfg.y0, cfg.y1, cfg.nx, cfg.ny);
}

BoundarySpec make_bc(const RunConfig& cfg, const Grid& g) {
  BcClass c;
  if (cfg.bc == "free") return BoundarySpec::free_plate();
  if (cfg.bc == "supported") c = BcClass::A1;
  else if (cfg.bc == "clamped") c = BcClass::A0;
  else throw std::invalid_argument("unknown boundary condition: " + cfg.bc);
  if (cfg.gamma_region == "all") return BoundarySpec::whole_boundary(g, c);
  if (cfg.gamma_region == "left") {
    const double xl = cfg.x0, tol = 0.5 * g.spacing();
    return BoundarySpec::from_predicate(g, c, [xl, tol](double x, double) {
      return std::abs(x - xl) < tol;
    });
  }
  throw std::invalid_argument("unknown gamma region: " + cfg.gamma_region);
}

LoadSpec shear_edge_load(double gamma) {
  // tangential traction: +gamma tau on the vertical edges, -gamma tau on the
  // horizontal ones (tau the counterclockwise tangent)
  LoadSpec l;
  l.traction = [gamma](double, double, const Vec2& n) {
    const Vec2 tau{-n.y, n.x};
    return (std::abs(n.x) > 0.5 ? gamma : -gamma) * tau;
  };
  return l;
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["preset"] = cfg.preset;
  j["command"] = cfg.command;
  j["seed"] = cfg.seed;
  if (cfg.annulus) {
    j["annulus"] = {{"r1", cfg.r1}, {"r2", cfg.r2}, {"nr", cfg.nr}, {"ntheta", cfg.ntheta}};
  } else {
    j["rectangle"] = {{"x0", cfg.x0}, {"x1", cfg.x1}, {"y0", cfg.y0}, {"y1", cfg.y1},
                      {"nx", cfg.nx}, {"ny", cfg.ny}};
  }
  j["E"] = cfg.young;
  j["nu"] = cfg.nu;
  j["h"] = cfg.h;
  j["alpha"] = cfg.alpha;
  j["f"] = cfg.f;
  j["threshold_frac"] = cfg.threshold_frac;
  j["gamma"] = cfg.gamma;
  j["p1"] = cfg.p1;
  j["p2"] = cfg.p2;
  j["bc"] = cfg.bc;
  j["gamma_region"] = cfg.gamma_region;
  j["family"] = cfg.family;
  j["n_lo"] = cfg.n_lo;
  j["n_hi"] = cfg.n_hi;
  j["trials"] = cfg.trials;
  j["modes"] = cfg.modes;
  j["nodes_1d"] = cfg.nodes_1d;
  j["variant"] = cfg.variant;
  j["width"] = cfg.width;
  j["c_beta"] = cfg.c_beta;
  j["c_sigma"] = cfg.c_sigma;
  j["sigma_exp"] = cfg.sigma_exp;
  j["h_list"] = cfg.h_list;
  j["alpha_list"] = cfg.alpha_list;
  j["solve"] = {{"max_iters", cfg.solve.max_iters}, {"grad_tol", cfg.solve.grad_tol},
                {"memory", cfg.solve.memory}, {"noise_amplitude", cfg.solve.noise_amplitude}};
  return j;
}

ordered_json breakdown_json(const EnergyBreakdown& e) {
  return {{"membrane", e.membrane}, {"bending", e.bending},
          {"load_work_inplane", e.load_work_inplane},
          {"load_work_transverse", e.load_work_transverse}, {"total", e.total}};
}

ordered_json report_json(const SolveReport& r) {
  std::vector<double> hist = r.energy_history;
  if (hist.size() > 1000) hist.resize(1000);
  return {{"iterations", r.iterations}, {"final_residual", r.final_residual},
          {"converged", r.converged}, {"diverging", r.diverging},
          {"energy_history", hist}};
}

LoadSpec family_load(const RunConfig& cfg) {
  if (cfg.family == "ce14") return shear_edge_load(cfg.gamma);
  if (cfg.family == "ce33") return ce33_load();
  LoadSpec l = LoadSpec::normal_pressure(cfg.f);
  l.alpha = cfg.alpha;
  return l;
}

FamilyPair family_at(const RunConfig& cfg, const Grid& g, int n) {
  if (cfg.family == "ce12") return family_ce12(n, g);
  if (cfg.family == "ce14") return family_ce14(n, g);
  if (cfg.family == "remark13") return family_remark13(n, g);
  if (cfg.family == "ce33") return family_ce33(n, g);
  throw std::invalid_argument("unknown family: " + cfg.family);
}

// predictor the energy decays linearly against; the partially supported
// family grows quadratically in its index, the others linearly
double family_predictor(const RunConfig& cfg, int n) {
  if (cfg.family == "remark13") return static_cast<double>(n) * n + n;
  return static_cast<double>(n);
}

struct FamilyCertificate {
  std::vector<double> energies;
  std::vector<double> predictor;
  double slope = 0.0, r2 = 0.0;
  bool decreasing = false, certified = false;
};

FamilyCertificate family_certificate(const RunConfig& cfg, const Grid& g,
                                     const Material& m, const LoadSpec& load) {
  FamilyCertificate c;
  for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
    const FamilyPair fp = family_at(cfg, g, n);
    c.energies.push_back(total_energy(g, fp.u, fp.w, m, load).total);
    c.predictor.push_back(family_predictor(cfg, n));
  }
  c.decreasing = true;
  for (std::size_t i = 1; i < c.energies.size(); ++i)
    if (!(c.energies[i] < c.energies[i - 1])) c.decreasing = false;
  std::tie(c.slope, c.r2) = linear_fit(c.predictor, c.energies);
  c.certified = c.decreasing && c.slope < 0.0 && c.r2 > 0.99;
  return c;
}

// ---- commands ------------------------------------------------------------

int run_energy(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  const Material m(cfg.young, cfg.nu, cfg.h);
  VectorField2 u(g.num_nodes());
  ScalarField w(g.num_nodes(), 0.0);
  LoadSpec load = LoadSpec::normal_pressure(cfg.f);
  load.alpha = cfg.alpha;
  if (!cfg.family.empty()) {
    const FamilyPair fp = family_at(cfg, g, cfg.n_lo);
    u = fp.u;
    w = fp.w;
    load = family_load(cfg);
  }
  const EnergyBreakdown e = total_energy(g, u, w, m, load);
  out["energy"] = breakdown_json(e);
  res.scalars["total"] = e.total;
  write_fields_csv(cfg.out_dir, g, u, w);
  return 0;
}

int run_gradcheck(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  const Material m(cfg.young, cfg.nu, cfg.h);
  const BoundarySpec bc = BoundarySpec::free_plate();
  const int nn = g.num_nodes();
  std::mt19937_64 rng(cfg.seed + 17);
  std::uniform_real_distribution<double> amp(-0.1, 0.1);
  double worst = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    VectorField2 u(nn);
    ScalarField w(nn);
    for (int i = 0; i < nn; ++i) {
      u.x[i] = amp(rng);
      u.y[i] = amp(rng);
      w[i] = amp(rng);
    }
    LoadSpec load;
    const double c0 = amp(rng), c1 = amp(rng), c2 = amp(rng), c3 = amp(rng);
    load.traction = [=](double x, double y, const Vec2& n) {
      return Vec2{c0 + c1 * x + c2 * n.x, c3 + c1 * y + c2 * n.y};
    };
    load.transverse.resize(nn);
    for (int i = 0; i < nn; ++i) load.transverse[i] = amp(rng);

    VectorField2 gu;
    ScalarField gw;
    energy_gradient(g, u, w, m, load, bc, gu, gw);
    double gnorm = 0.0;
    for (int i = 0; i < nn; ++i)
      gnorm = std::max({gnorm, std::abs(gu.x[i]), std::abs(gu.y[i]), std::abs(gw[i])});

    auto eval = [&] { return total_energy(g, u, w, m, load).total; };
    std::uniform_int_distribution<int> pick_node(0, nn - 1), pick_block(0, 2);
    const double delta = 1e-5;
    for (int k = 0; k < 30; ++k) {
      const int i = pick_node(rng);
      const int blk = pick_block(rng);
      double* slot = blk == 0 ? &u.x[i] : blk == 1 ? &u.y[i] : &w[i];
      const double ref = blk == 0 ? gu.x[i] : blk == 1 ? gu.y[i] : gw[i];
      const double save = *slot;
      *slot = save + delta;
      const double ep = eval();
      *slot = save - delta;
      const double em = eval();
      *slot = save;
      const double fd = (ep - em) / (2.0 * delta);
      worst = std::max(worst, std::abs(fd - ref) / std::max(gnorm, 1e-12));
    }
  }
  out["max_rel_error"] = worst;
  res.scalars["max_rel_error"] = worst;
  return 0;
}

int run_minimize(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  const Material m(cfg.young, cfg.nu, cfg.h);
  const BoundarySpec bc = make_bc(cfg, g);
  double f = cfg.f;
  if (cfg.threshold_frac != 0.0) {
    const double thr = compression_threshold(m, g);
    f = cfg.threshold_frac * thr;
    out["threshold"] = thr;
    res.scalars["threshold"] = thr;
  }
  LoadSpec load = LoadSpec::normal_pressure(f);
  load.alpha = cfg.alpha;
  VectorField2 u(g.num_nodes());
  ScalarField w(g.num_nodes(), 0.0);
  SolveOptions opts = cfg.solve;
  opts.seed = cfg.seed;
  if (opts.noise_amplitude > 0.0)
    seed_noise(g, bc, opts.noise_amplitude, opts.seed, u, w);
  const SolveReport rep = minimize(g, m, load, bc, u, w, opts);
  const EnergyBreakdown e = total_energy(g, u, w, m, load);
  out["f"] = f;
  out["energy"] = breakdown_json(e);
  out["report"] = report_json(rep);
  res.scalars["total"] = e.total;
  res.scalars["final_residual"] = rep.final_residual;
  res.scalars["iterations"] = rep.iterations;
  write_fields_csv(cfg.out_dir, g, u, w);
  if (rep.diverging) return 3;
  return rep.converged ? 0 : 2;
}

int run_family(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  const Material m(cfg.young, cfg.nu, cfg.h);
  const LoadSpec load = family_load(cfg);
  const FamilyCertificate c = family_certificate(cfg, g, m, load);
  out["family"] = cfg.family;
  out["indices"] = {{"lo", cfg.n_lo}, {"hi", cfg.n_hi}};
  out["energies"] = c.energies;
  out["predictor"] = c.predictor;
  out["fit"] = {{"slope", c.slope}, {"r_squared", c.r2}};
  out["strictly_decreasing"] = c.decreasing;
  out["divergence_certified"] = c.certified;
  res.scalars["slope"] = c.slope;
  res.scalars["r_squared"] = c.r2;
  res.scalars["strictly_decreasing"] = c.decreasing ? 1.0 : 0.0;
  for (std::size_t i = 0; i < c.energies.size(); ++i)
    res.scalars["energy_" + std::to_string(i)] = c.energies[i];
  const FamilyPair last = family_at(cfg, g, cfg.n_hi);
  write_fields_csv(cfg.out_dir, g, last.u, last.w);
  return c.certified ? 3 : 0;
}

int run_buckle(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  ordered_json modes = ordered_json::array();
  ScalarField w(g.num_nodes(), 0.0);
  if (cfg.variant == "shear") {
    for (int n = 1; n <= cfg.modes; ++n) {
      const BuckledModeResult mr =
          buckled_mode_shear(g, n, cfg.gamma, cfg.young, cfg.nu, cfg.nodes_1d);
      modes.push_back({{"k", mr.k}, {"h_critical", mr.h_critical}});
      if (n == 1) {
        w = mr.w;
        res.scalars["k1"] = mr.k;
        res.scalars["h1"] = mr.h_critical;
      }
    }
  } else {
    BucklingBc bc;
    if (cfg.variant == "clamped") bc = BucklingBc::clamped;
    else if (cfg.variant == "supported") bc = BucklingBc::supported;
    else if (cfg.variant == "free") bc = BucklingBc::free_ends;
    else throw std::invalid_argument("unknown buckling variant: " + cfg.variant);
    const auto ms = buckling_critical(bc, 0.0, 1.0, cfg.nodes_1d, cfg.modes);
    for (std::size_t n = 0; n < ms.size(); ++n) {
      const double hc =
          critical_thickness_compression(ms[n].k, cfg.gamma, cfg.width, cfg.young, cfg.nu);
      modes.push_back({{"k", ms[n].k}, {"h_critical", hc}});
      if (n == 0) {
        res.scalars["k1"] = ms[n].k;
        res.scalars["h1"] = hc;
      }
    }
    if (cfg.variant == "clamped" && !ms.empty()) {
      const BuckledModeResult mr = buckled_mode_compression(g, 1, cfg.gamma, cfg.width,
                                                            cfg.young, cfg.nu, cfg.nodes_1d);
      w = mr.w;
    }
  }
  out["variant"] = cfg.variant;
  out["modes"] = modes;
  write_fields_csv(cfg.out_dir, g, VectorField2(g.num_nodes()), w);
  return 0;
}

int run_prestress(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  const Material m(cfg.young, cfg.nu, cfg.h);
  const PrestressAnnulus ps = annulus_prestress(cfg.p1, cfg.p2, cfg.r1, cfg.r2, m);
  const VectorField2 v = sample_prestress(ps, g);
  const Sym2Field strain = sym_grad_vector(g, v);
  const StateClass sc = classify_state(strain, m);

  // Neumann residual of the closed form: max over boundary quadrature of
  // |J'(E(v)) n - p n| relative to max |p|
  const LoadSpec load = prestress_load(ps);
  double resid = 0.0;
  const double pscale = std::max({std::abs(cfg.p1), std::abs(cfg.p2), 1e-30});
  for (const auto& b : g.boundary_quad()) {
    const Sym2 stress = energy_density_grad(strain[b.node], m);
    const Vec2 t = stress.apply(b.normal);
    const Vec2 want = load.traction_at(g.x(b.node), g.y(b.node), b.normal);
    resid = std::max(resid, (t - want).norm() / pscale);
  }

  out["a"] = ps.a;
  out["b"] = ps.b;
  out["neumann_residual"] = resid;
  out["all_tensile"] = sc.all_tensile;
  out["all_compressive"] = sc.all_compressive;
  res.scalars["a"] = ps.a;
  res.scalars["b"] = ps.b;
  res.scalars["neumann_residual"] = resid;
  res.scalars["all_tensile"] = sc.all_tensile ? 1.0 : 0.0;
  res.scalars["all_compressive"] = sc.all_compressive ? 1.0 : 0.0;

  std::string csv = "x1,x2,s1,flag\n";
  for (int i = 0; i < g.num_nodes(); ++i)
    csv += fm(g.x(i)) + "," + fm(g.y(i)) + "," + fm(sc.s1[i]) + "," +
           std::to_string(int(sc.tensile[i])) + "\n";
  write_text(cfg.out_dir, "classify.csv", csv);
  write_fields_csv(cfg.out_dir, g, v, ScalarField(g.num_nodes(), 0.0));
  return 0;
}

int run_relax(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  const Material base(cfg.young, cfg.nu, cfg.h);
  const PrestressAnnulus ps = annulus_prestress(cfg.p1, cfg.p2, cfg.r1, cfg.r2, base);
  const VectorField2 v = sample_prestress(ps, g);
  LoadSpec load = prestress_load(ps);
  load.alpha = cfg.alpha;
  const double relaxed_min = relaxed_min_energy(g, v, base, load);

  const bool radial = cfg.family != "tangential_osc";
  const PressCase pc =
      cfg.p1 <= cfg.p2 ? PressCase::inner_leq_outer : PressCase::outer_leq_inner;

  ordered_json rows = ordered_json::array();
  std::vector<double> hs = cfg.h_list.empty() ? std::vector<double>{cfg.h} : cfg.h_list;
  ScalarField last_zeta(g.num_nodes(), 0.0);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double h = hs[i];
    const ScalingChoice s =
        optimal_scaling(radial ? OscKind::radial : OscKind::tangential, cfg.alpha, h,
                        cfg.c_beta, cfg.c_sigma, cfg.sigma_exp);
    ScalarField zeta = radial
        ? family_radial_osc(g, ps.a, ps.b, pc, cfg.nu, s.beta, s.sigma)
        : family_tangential_osc(g, ps.b, cfg.nu, s.beta, s.sigma, s.delta);
    const Material m(cfg.young, cfg.nu, h);
    const double w = scaled_prestressed_energy(g, v, zeta, m, load);
    const double gap = w - relaxed_min;
    rows.push_back({{"h", h}, {"beta", s.beta}, {"sigma", s.sigma}, {"delta", s.delta},
                    {"scaled_energy", w}, {"gap", gap}});
    res.scalars["gap_" + std::to_string(i)] = gap;
    res.scalars["scaled_energy_" + std::to_string(i)] = w;
    last_zeta = zeta;
  }
  out["a"] = ps.a;
  out["b"] = ps.b;
  out["relaxed_min_energy"] = relaxed_min;
  out["sequence"] = rows;
  res.scalars["relaxed_min_energy"] = relaxed_min;

  // envelope samples at the node nearest the mid-radius
  const double rmid = 0.5 * (cfg.r1 + cfg.r2);
  int imid = 0;
  double dbest = 1e300;
  for (int i = 0; i < g.num_nodes(); ++i) {
    const double d = std::abs(std::hypot(g.x(i), g.y(i)) - rmid);
    if (d < dbest) {
      dbest = d;
      imid = i;
    }
  }
  const Sym2Field strain = sym_grad_vector(g, v);
  const Sym2 A = 2.0 * strain[imid];
  const MinGA mg = min_gA(A, cfg.nu);
  const EnvelopeSamples env =
      convexify_2d(A, cfg.nu, 2.0 * std::max(mg.xi_star.norm(), 1.0), 41);
  std::string csv = "xi1,xi2,g,envelope\n";
  for (int i2 = 0; i2 < env.res; ++i2)
    for (int i1 = 0; i1 < env.res; ++i1)
      csv += fm(env.coord[i1]) + "," + fm(env.coord[i2]) + "," +
             fm(env.g[i2 * env.res + i1]) + "," + fm(env.env[i2 * env.res + i1]) + "\n";
  write_text(cfg.out_dir, "envelope.csv", csv);
  write_fields_csv(cfg.out_dir, g, v, last_zeta);
  return 0;
}

int run_poincare(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  const Material m(cfg.young, cfg.nu, cfg.h);
  const double k = poincare_constant(g);
  const double thr = compression_threshold(m, g);
  out["poincare_constant"] = k;
  out["compression_threshold"] = thr;
  res.scalars["poincare_constant"] = k;
  res.scalars["compression_threshold"] = thr;
  return 0;
}

int run_sweep(const RunConfig& cfg, const Grid& g, ordered_json& out, RunResult& res) {
  if (cfg.h_list.empty() || cfg.alpha_list.empty())
    throw std::invalid_argument("sweep: h_list and alpha_list must be nonempty");
  ordered_json rows = ordered_json::array();
  std::string csv = "h,alpha,scaled_energy,regime\n";
  for (double alpha : cfg.alpha_list) {
    std::vector<double> ws;
    std::string regime;
    if (cfg.family == "ce33") {
      // scaled energy along the fine-scale family: test state
      // (h^alpha v_n, h^(alpha/2) zeta_n) with load h^alpha f, normalized by
      // h^(1+2alpha); divergence read off the index direction at each h
      for (double h : cfg.h_list) {
        const Material m(cfg.young, cfg.nu, h);
        const double ha = std::pow(h, alpha);
        LoadSpec load = ce33_load();
        auto raw = load.traction;
        load.traction = [raw, ha](double x, double y, const Vec2& n) {
          return ha * raw(x, y, n);
        };
        double best = 0.0;
        std::vector<double> seq, idx;
        for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
          FamilyPair fp = family_ce33(n, g);
          for (auto& c : fp.u.x) c *= ha;
          for (auto& c : fp.u.y) c *= ha;
          for (auto& c : fp.w) c *= std::pow(h, alpha / 2.0);
          const double w =
              total_energy(g, fp.u, fp.w, m, load).total / std::pow(h, 1.0 + 2.0 * alpha);
          seq.push_back(w);
          idx.push_back(n);
          best = n == cfg.n_lo ? w : std::min(best, w);
        }
        const auto [slope, r2] = linear_fit(idx, seq);
        bool dec = true;
        for (std::size_t i = 1; i < seq.size(); ++i)
          if (!(seq[i] < seq[i - 1])) dec = false;
        const bool diverging = dec && slope < 0.0 && r2 > 0.99;
        ws.push_back(best);
        if (regime.empty()) regime = diverging ? "diverging" : "bounded";
        else if (diverging) regime = "diverging";
      }
    } else {
      // minimize the rescaled functional; thickness t = h^((2-alpha)/2) turns
      // h^-(1+2alpha) F_h along (h^alpha v, h^(alpha/2) zeta) into
      // total_energy with thickness t divided by t
      for (double h : cfg.h_list) {
        const double t = std::pow(h, (2.0 - alpha) / 2.0);
        const Material m(cfg.young, cfg.nu, t);
        const BoundarySpec bc = make_bc(cfg, g);
        LoadSpec load = LoadSpec::normal_pressure(cfg.f);
        VectorField2 u(g.num_nodes());
        ScalarField w(g.num_nodes(), 0.0);
        SolveOptions opts = cfg.solve;
        opts.seed = cfg.seed;
        if (opts.noise_amplitude > 0.0)
          seed_noise(g, bc, opts.noise_amplitude, opts.seed, u, w);
        const SolveReport rep = minimize(g, m, load, bc, u, w, opts);
        if (rep.diverging) {
          regime = "diverging";
          ws.push_back(total_energy(g, u, w, m, load).total / t);
          continue;
        }
        ws.push_back(total_energy(g, u, w, m, load).total / t);
      }
      if (regime.empty()) {
        bool cauchy = true;
        for (std::size_t i = 1; i < ws.size(); ++i)
          if (std::abs(ws[i] - ws[i - 1]) > 0.01 * std::max(std::abs(ws[i - 1]), 1e-12))
            cauchy = false;
        regime = cauchy ? "bounded" : "diverging";
      }
    }
    for (std::size_t i = 0; i < ws.size(); ++i) {
      rows.push_back({{"h", cfg.h_list[i]}, {"alpha", alpha},
                      {"scaled_energy", ws[i]}, {"regime", regime}});
      csv += fm(cfg.h_list[i]) + "," + fm(alpha) + "," + fm(ws[i]) + "," + regime + "\n";
    }
    res.scalars["regime_alpha_" + fm(alpha)] = regime == "diverging" ? 1.0 : 0.0;
  }
  out["rows"] = rows;
  write_text(cfg.out_dir, "sweep.csv", csv);
  return 0;
}

}  // namespace

std::pair<double, double> linear_fit(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("linear_fit: need matching sizes >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissa");
  const double slope = sxy / sxx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {slope, r2};
}

std::vector<std::string> preset_names() {
  return {"thm11", "thm13", "thm16", "thm18", "ce12", "ce14", "remark13",
          "ce33", "ex27", "ex28", "ex45", "ex46", "ex48"};
}

RunConfig make_preset(const std::string& name) {
  RunConfig c;
  c.preset = name;
  const double E = 1.0, nu = 0.3;
  const double Cnu = std::max(1.0 / (1.0 - nu), 1.0 / (1.0 + nu));
  if (name == "thm11") {
    // free plate under uniform tension: flat minimizer with uniform strain
    c.command = "minimize";
    c.x1 = 2.0;
    c.nx = 64;
    c.ny = 32;
    c.f = 0.1;
    c.bc = "free";
    c.solve.noise_amplitude = 1e-3;
    c.solve.max_iters = 20000;
    c.solve.grad_tol = 1e-8;
  } else if (name == "thm13") {
    // simply supported square just under the compression threshold
    c.command = "minimize";
    c.nx = c.ny = 64;
    c.bc = "supported";
    c.threshold_frac = 0.9;
    c.solve.noise_amplitude = 1e-4;
    c.solve.max_iters = 20000;
  } else if (name == "thm16") {
    // simply supported plate, equilibrated tension
    c.command = "minimize";
    c.nx = c.ny = 48;
    c.bc = "supported";
    c.f = 0.05;
    c.solve.noise_amplitude = 1e-4;
    c.solve.max_iters = 20000;
  } else if (name == "thm18") {
    // clamped plate, mild equilibrated compression
    c.command = "minimize";
    c.nx = c.ny = 48;
    c.bc = "clamped";
    c.f = -0.02;
    c.solve.noise_amplitude = 1e-4;
    c.solve.max_iters = 20000;
  } else if (name == "ce12") {
    c.command = "family";
    c.family = "ce12";
    c.x0 = -2.0;
    c.x1 = 2.0;
    c.y0 = -1.0;
    c.y1 = 1.0;
    c.nx = 65;
    c.ny = 33;
    c.f = -Cnu * E * c.h * c.h / 32.0;  // twice past the flatness threshold
  } else if (name == "ce14") {
    c.command = "family";
    c.family = "ce14";
    c.x0 = -2.0;
    c.x1 = 2.0;
    c.y0 = -1.0;
    c.y1 = 1.0;
    c.nx = 65;
    c.ny = 33;
    c.gamma = 12.0 * E * Cnu * c.h * c.h;
  } else if (name == "remark13") {
    c.command = "family";
    c.family = "remark13";
    c.nx = c.ny = 33;
    c.bc = "supported";
    c.gamma_region = "left";
    c.f = -c.h * c.h;
  } else if (name == "ce33") {
    c.command = "family";
    c.family = "ce33";
    c.h = 0.001;
    c.x1 = 2.0 * E * Cnu;
    c.nx = 129;
    c.ny = 577;
  } else if (name == "ex27") {
    c.command = "buckle";
    c.variant = "clamped";
    c.nx = c.ny = 33;
    c.gamma = 1.0;
    c.width = 1.0;
    c.modes = 3;
  } else if (name == "ex28") {
    c.command = "buckle";
    c.variant = "shear";
    c.x0 = -2.0;
    c.x1 = 2.0;
    c.y0 = -1.0;
    c.y1 = 1.0;
    c.nx = 65;
    c.ny = 33;
    c.gamma = 1.0;
    c.modes = 3;
  } else if (name == "ex45") {
    // compressed annulus: radial wrinkling approaches the relaxed minimum
    c.command = "relax";
    c.annulus = true;
    c.nr = 256;
    c.ntheta = 64;
    c.p1 = -2.0;
    c.p2 = -1.0;
    c.alpha = 0.0;
    c.family = "radial_osc";
    c.h_list = {1e-2, 1e-3, 1e-4};
    c.c_beta = 0.047;
    c.c_sigma = 0.9;
    c.sigma_exp = 0.25;
  } else if (name == "ex46") {
    c.command = "prestress";
    c.annulus = true;
    c.nr = 64;
    c.ntheta = 256;
    c.p1 = 1.0;
    c.p2 = 1.0;
  } else if (name == "ex48") {
    // pure shear-free prestress (a = 0): tangential wrinkling
    c.command = "relax";
    c.annulus = true;
    c.nr = 64;
    c.ntheta = 256;
    c.p1 = 1.0;
    c.p2 = 0.25;
    c.alpha = 0.0;
    c.family = "tangential_osc";
    c.h_list = {1e-1, 3e-2, 1e-2};
    c.c_beta = 0.3;
    c.c_sigma = 1.0;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return c;
}

RunResult run_config(const RunConfig& cfg) {
  RunResult res;
  const auto t0 = std::chrono::steady_clock::now();
  ordered_json summary;
  summary["schema_version"] = 1;
  summary["config"] = config_json(cfg);
  ordered_json results;
  try {
    const Grid g = make_grid(cfg);
    if (cfg.command == "energy") res.exit_code = run_energy(cfg, g, results, res);
    else if (cfg.command == "gradcheck") res.exit_code = run_gradcheck(cfg, g, results, res);
    else if (cfg.command == "minimize") res.exit_code = run_minimize(cfg, g, results, res);
    else if (cfg.command == "family") res.exit_code = run_family(cfg, g, results, res);
    else if (cfg.command == "buckle") res.exit_code = run_buckle(cfg, g, results, res);
    else if (cfg.command == "prestress") res.exit_code = run_prestress(cfg, g, results, res);
    else if (cfg.command == "relax") res.exit_code = run_relax(cfg, g, results, res);
    else if (cfg.command == "poincare") res.exit_code = run_poincare(cfg, g, results, res);
    else if (cfg.command == "sweep") res.exit_code = run_sweep(cfg, g, results, res);
    else {
      summary["error"] = "unknown command: " + cfg.command;
      res.exit_code = 1;
    }
  } catch (const std::invalid_argument& e) {
    summary["error"] = e.what();
    res.exit_code = 1;
  } catch (const std::exception& e) {
    summary["error"] = e.what();
    res.exit_code = 2;
  }
  summary["results"] = results;
  summary["exit_code"] = res.exit_code;
  const auto t1 = std::chrono::steady_clock::now();
  // timings are informational and excluded from reproducibility comparisons
  summary["timings"] = {
      {"wall_ms", std::chrono::duration<double, std::milli>(t1 - t0).count()}};
  res.summary_json = summary.dump(2) + "\n";
  write_text(cfg.out_dir, "summary.json", res.summary_json);
  return res;
}

}  // namespace fvk
