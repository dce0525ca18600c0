#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fvk/families.hpp"
#include "fvk/solve.hpp"

using namespace fvk;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("minimize descends monotonically and is deterministic") {
  const Grid g = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 17, 17);
  const Material m(1.0, 0.3, 0.1);
  const LoadSpec load = LoadSpec::normal_pressure(0.05);
  const BoundarySpec bc = BoundarySpec::whole_boundary(g, BcClass::A1);
  SolveOptions opts;
  opts.max_iters = 2000;
  opts.grad_tol = 1e-8;
  opts.noise_amplitude = 1e-3;
  opts.seed = 42;

  VectorField2 u1(g.num_nodes());
  ScalarField w1(g.num_nodes(), 0.0);
  seed_noise(g, bc, opts.noise_amplitude, opts.seed, u1, w1);
  const SolveReport r1 = minimize(g, m, load, bc, u1, w1, opts);
  CHECK(r1.converged);
  for (std::size_t i = 1; i < r1.energy_history.size(); ++i)
    CHECK(r1.energy_history[i] <= r1.energy_history[i - 1] + 1e-14);

  VectorField2 u2(g.num_nodes());
  ScalarField w2(g.num_nodes(), 0.0);
  seed_noise(g, bc, opts.noise_amplitude, opts.seed, u2, w2);
  const SolveReport r2 = minimize(g, m, load, bc, u2, w2, opts);
  CHECK(r1.iterations == r2.iterations);
  for (int i = 0; i < g.num_nodes(); ++i) {
    CHECK(u1.x[i] == u2.x[i]);
    CHECK(w1[i] == w2[i]);
  }
}

TEST_CASE("membrane correction solves the quadratic exactly for a tilted plane") {
  // w = c y: Dw (x) Dw / 2 = diag(0, c^2/2) is constant, so the optimal
  // correction has strain -diag(0, c^2/2) and the minimum is zero
  const Grid g = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 17, 17);
  const Material m(1.0, 0.3, 0.1);
  const double c = 0.4;
  ScalarField w(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) w[i] = c * g.y(i);
  const auto [z, qmin] = membrane_correction(g, w, m);
  CHECK(std::abs(qmin) < 1e-14);
  const Sym2Field e = sym_grad_vector(g, z);
  for (int i = 0; i < g.num_nodes(); ++i) {
    CHECK(std::abs(e[i].a11) < 1e-8);
    CHECK(std::abs(e[i].a12) < 1e-8);
    CHECK(e[i].a22 == doctest::Approx(-0.5 * c * c).epsilon(1e-7));
  }
}

TEST_CASE("poincare constant on rectangles") {
  const Grid sq = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 64, 64);
  const double k1 = poincare_constant(sq);
  CHECK(k1 == doctest::Approx(1.0 / (pi * pi)).epsilon(5e-3));

  // longest direction dominates: K((0,L)x(0,1)) = L^2/pi^2
  const Grid rect = Grid::make_rectangle(0.0, 2.0, 0.0, 1.0, 64, 32);
  CHECK(poincare_constant(rect) == doctest::Approx(4.0 / (pi * pi)).epsilon(5e-3));

  // scaling the domain by s scales the constant by s^2
  const Grid small = Grid::make_rectangle(0.0, 0.5, 0.0, 0.5, 64, 64);
  CHECK(poincare_constant(small) == doctest::Approx(0.25 * k1).epsilon(1e-6));
}

TEST_CASE("compression threshold value") {
  const Grid sq = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 64, 64);
  // nu = 0: c_nu = 1, threshold = -h^2 E / (12 K) = -h^2 E pi^2 / 12
  const Material m0(1.0, 0.0, 0.1);
  CHECK(compression_threshold(m0, sq) ==
        doctest::Approx(-0.01 * pi * pi / 12.0).epsilon(5e-3));
  // the nu-dependence enters through c_nu = 1/(1+|nu|) shape
  const Material m3(1.0, 0.3, 0.1);
  CHECK(compression_threshold(m3, sq) ==
        doctest::Approx(compression_threshold(m0, sq) / 1.3).epsilon(1e-12));
}

TEST_CASE("1D buckling eigenvalues match the closed forms") {
  const auto cl = buckling_critical(BucklingBc::clamped, 0.0, 1.0, 401, 2);
  CHECK(cl[0].k == doctest::Approx(4.0 * pi * pi).epsilon(5e-3));
  const auto su = buckling_critical(BucklingBc::supported, 0.0, 1.0, 401, 2);
  CHECK(su[0].k == doctest::Approx(pi * pi).epsilon(5e-3));
  CHECK(su[1].k == doctest::Approx(4.0 * pi * pi).epsilon(5e-3));
  // interval scaling: eigenvalues go like 1/length^2
  const auto su2 = buckling_critical(BucklingBc::supported, -1.0, 1.0, 401, 1);
  CHECK(su2[0].k == doctest::Approx(pi * pi / 4.0).epsilon(5e-3));
}

TEST_CASE("critical thickness closed forms") {
  const double E = 1.0, nu = 0.3, gamma = 1.0;
  // h_n = 1/(2 n pi) sqrt(12 gamma a (1-nu^2)/E) at the clamped eigenvalue
  for (int n = 1; n <= 3; ++n) {
    const double k = 4.0 * n * n * pi * pi;
    const double expect = std::sqrt(12.0 * gamma * (1.0 - nu * nu) / E) / (2.0 * n * pi);
    CHECK(critical_thickness_compression(k, gamma, 1.0, E, nu) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(critical_thickness_shear(4.0 * pi * pi, gamma, E, nu) ==
        doctest::Approx(std::sqrt(6.0 * gamma * (1.0 - nu * nu) / E) / (2.0 * pi))
            .epsilon(1e-12));
}

TEST_CASE("buckled modes embed the 1D shapes") {
  const Grid g = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 33, 33);
  const BuckledModeResult b = buckled_mode_compression(g, 1, 1.0, 1.0, 1.0, 0.3, 401);
  CHECK(b.k == doctest::Approx(4.0 * pi * pi).epsilon(5e-3));
  double mx = 0.0;
  for (double v : b.w) mx = std::max(mx, std::abs(v));
  CHECK(mx == doctest::Approx(1.0).epsilon(1e-12));
  // clamped profile vanishes on the transverse boundary
  for (int i : g.boundary_nodes())
    if (g.y(i) < 1e-12 || g.y(i) > 1.0 - 1e-12) CHECK(std::abs(b.w[i]) < 1e-12);
}

TEST_CASE("uniform Palais-Smale check accepts critical flat states") {
  const Grid g = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 13, 13);
  const Material m(1.0, 0.3, 0.1);
  const double f = 0.1;
  const LoadSpec load = LoadSpec::normal_pressure(f);
  const BoundarySpec bc = BoundarySpec::free_plate();
  const double al = f * (1.0 - 0.3) / 1.0;
  PsElement el;
  el.eps = 1.0;
  el.u = VectorField2(g.num_nodes());
  el.w.assign(g.num_nodes(), 0.0);
  for (int i = 0; i < g.num_nodes(); ++i) {
    el.u.x[i] = al * g.x(i);
    el.u.y[i] = al * g.y(i);
  }
  const std::vector<PsElement> seq{el, el, el};
  for (bool b : uniform_ps_check(g, seq, m, load, bc, 1.0, 0.0)) CHECK(b);
  // an energy bound below the critical value rejects every element
  for (bool b : uniform_ps_check(g, seq, m, load, bc, -1.0, 0.0)) CHECK(!b);
}
