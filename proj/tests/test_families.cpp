#include <cmath>

#include "doctest.h"
#include "fvk/families.hpp"
#include "fvk/relax.hpp"

using namespace fvk;

TEST_CASE("compression family values and exact bending energy") {
  const Grid g = Grid::make_rectangle(-2.0, 2.0, -1.0, 1.0, 65, 33);
  const double E = 1.0, nu = 0.3, h = 0.1;
  const Material m(E, nu, h);
  const FamilyPair f1 = family_ce12(1, g);
  // values at x1 = 0: u = -(2)^3/6 e1, w = (2)^2/2
  for (int i = 0; i < g.num_nodes(); ++i) {
    if (std::abs(g.x(i)) > 1e-12) continue;
    CHECK(f1.u.x[i] == doctest::Approx(-4.0 / 3.0).epsilon(1e-13));
    CHECK(f1.u.y[i] == 0.0);
    CHECK(f1.w[i] == doctest::Approx(2.0).epsilon(1e-13));
  }
  // the hessian of w_n is the constant sqrt(n) e1 (x) e1, so the discrete
  // bending energy hits the closed form E n h^3 / (3 (1 - nu^2)) exactly
  for (int n : {1, 3, 5}) {
    const FamilyPair fn = family_ce12(n, g);
    CHECK(bending_energy(g, fn.w, m) ==
          doctest::Approx(E * n * h * h * h / (3.0 * (1.0 - nu * nu))).epsilon(1e-11));
  }
  // the cubic/quadratic pair annihilates the stretching up to O(dx^2)
  const FamilyPair f4 = family_ce12(4, g);
  const Sym2Field d = stretching(g, f4.u, f4.w);
  double mx = 0.0;
  for (const Sym2& s : d) mx = std::max(mx, std::sqrt(s.norm2()));
  CHECK(mx < 0.05);
}

TEST_CASE("shear profile properties") {
  // even, supported on [-1,1], unit slope on the core interval
  CHECK(ce14_psi(1.5) == 0.0);
  CHECK(ce14_psi(-1.5) == 0.0);
  CHECK(std::abs(ce14_psi(1.0)) < 1e-14);
  for (double t : {0.1, 0.33, 0.62, 0.95}) {
    CHECK(ce14_psi(t) == doctest::Approx(ce14_psi(-t)).epsilon(1e-13));
    CHECK(ce14_psi_prime(-t) == doctest::Approx(-ce14_psi_prime(t)).epsilon(1e-13));
  }
  for (double t : {0.25, 0.4, 0.6, 0.75}) CHECK(ce14_psi_prime(t) == doctest::Approx(-1.0));
  // psi' is the derivative of psi and |psi''| stays below 4 + eps
  const double eps = 1e-6;
  for (double t = -1.2; t <= 1.2; t += 0.01) {
    const double fd = (ce14_psi(t + eps) - ce14_psi(t - eps)) / (2.0 * eps);
    CHECK(fd == doctest::Approx(ce14_psi_prime(t)).epsilon(1e-4).scale(1.0));
    const double fd2 = (ce14_psi_prime(t + eps) - ce14_psi_prime(t - eps)) / (2.0 * eps);
    CHECK(std::abs(fd2) <= 4.0 + 1e-6);
  }
}

TEST_CASE("partially supported family vanishes on the supported edge") {
  const Grid g = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 33, 33);
  for (int mi : {1, 4}) {
    const FamilyPair f = family_remark13(mi, g);
    for (int i = 0; i < g.num_nodes(); ++i) {
      if (g.x(i) < 1e-12) CHECK(std::abs(f.w[i]) < 1e-14);
    }
    // closed forms at x1 = 1
    for (int i = 0; i < g.num_nodes(); ++i) {
      if (std::abs(g.x(i) - 1.0) > 1e-12) continue;
      CHECK(f.w[i] == doctest::Approx(((1.0 + mi) * (1.0 + mi) - mi * mi) / 2.0).epsilon(1e-13));
      CHECK(f.u.x[i] == doctest::Approx(-std::pow(1.0 + mi, 3) / 6.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("fine-scale sawtooth family") {
  const Grid g = Grid::make_rectangle(0.0, 2.0, 0.0, 1.0, 33, 65);
  for (int n : {1, 4}) {
    const FamilyPair f = family_ce33(n, g);
    // transverse profile vanishes on the whole boundary
    for (int i : g.boundary_nodes()) CHECK(std::abs(f.w[i]) < 1e-13);
    // in-plane part is v = (0, -n x2 / 2)
    for (int i = 0; i < g.num_nodes(); ++i) {
      CHECK(f.u.x[i] == 0.0);
      CHECK(f.u.y[i] == doctest::Approx(-0.5 * n * g.y(i)).epsilon(1e-13));
    }
    // amplitude scale n^{-1/2}
    double mx = 0.0;
    for (double v : f.w) mx = std::max(mx, std::abs(v));
    CHECK(mx <= 0.51 / std::sqrt(n) + 1e-12);
    CHECK(mx > 0.2 / std::sqrt(n));
  }
}

TEST_CASE("oscillation scalings follow the documented exponents") {
  const double cb = 0.5, cs = 0.8;
  for (double alpha : {0.0, 1.0}) {
    const ScalingChoice r1 = optimal_scaling(OscKind::radial, alpha, 1e-2, cb, cs);
    const ScalingChoice r2 = optimal_scaling(OscKind::radial, alpha, 1e-3, cb, cs);
    CHECK(r1.beta == doctest::Approx(cb * std::pow(1e-2, -(2.0 - alpha) / 3.0)).epsilon(1e-12));
    CHECK(r2.beta / r1.beta == doctest::Approx(std::pow(10.0, (2.0 - alpha) / 3.0)).epsilon(1e-12));
    CHECK(r1.sigma == doctest::Approx(cs * std::pow(1e-2, 5.0 / 3.0 * (2.0 - alpha))).epsilon(1e-12));

    const ScalingChoice t1 = optimal_scaling(OscKind::tangential, alpha, 1e-2, cb, cs);
    CHECK(t1.beta == doctest::Approx(cb * std::pow(1e-2, -(1.0 - alpha / 2.0))).epsilon(1e-12));
    CHECK(t1.delta == doctest::Approx(std::sqrt(1.0 / t1.beta)).epsilon(1e-12));
    CHECK(t1.sigma ==
          doctest::Approx(cs * std::pow(1e-2, 1.0 - alpha / 2.0) * std::sqrt(t1.beta)).epsilon(1e-12));
  }
  // explicit exponent override wins
  const ScalingChoice o = optimal_scaling(OscKind::radial, 0.0, 1e-3, cb, cs, 0.25);
  CHECK(o.sigma == doctest::Approx(cs * std::pow(1e-3, 0.25)).epsilon(1e-12));
}

TEST_CASE("radial oscillation closes the relaxation gap across decades") {
  // fine radial grid so the discretization error does not mask the decay
  const Grid g = Grid::make_annulus(1.0, 2.0, 1024, 8);
  const double E = 1.0, nu = 0.3;
  const Material base(E, nu, 0.1);
  const PrestressAnnulus ps = annulus_prestress(-2.0, -1.0, 1.0, 2.0, base);
  const VectorField2 v = sample_prestress(ps, g);
  LoadSpec load = prestress_load(ps);
  load.alpha = 0.0;
  const double relaxed_min = relaxed_min_energy(g, v, base, load);

  std::vector<double> gaps;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    const ScalingChoice s = optimal_scaling(OscKind::radial, 0.0, h, 0.047, 0.9, 0.25);
    const ScalarField zeta =
        family_radial_osc(g, ps.a, ps.b, PressCase::inner_leq_outer, nu, s.beta, s.sigma);
    const Material m(E, nu, h);
    gaps.push_back(scaled_prestressed_energy(g, v, zeta, m, load) - relaxed_min);
  }
  for (double gp : gaps) CHECK(gp > 0.0);
  CHECK(gaps[1] < gaps[0]);
  CHECK(gaps[2] < 0.5 * gaps[0]);
}
