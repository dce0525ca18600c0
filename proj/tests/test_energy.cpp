#include <cmath>
#include <random>

#include "doctest.h"
#include "fvk/energy.hpp"

using namespace fvk;

namespace {

struct Fields {
  VectorField2 u;
  ScalarField w;
};

Fields random_fields(const Grid& g, std::uint64_t seed, double amp = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-amp, amp);
  Fields f;
  f.u = VectorField2(g.num_nodes());
  f.w.resize(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) {
    f.u.x[i] = d(rng);
    f.u.y[i] = d(rng);
    f.w[i] = d(rng);
  }
  return f;
}

}  // namespace

TEST_CASE("closed-form membrane and bending values") {
  const Grid g = Grid::make_rectangle(0.0, 2.0, 0.0, 1.0, 21, 11);
  const double E = 1.5, nu = 0.3, h = 0.1;
  const Material m(E, nu, h);
  const int n = g.num_nodes();

  // linear in-plane field, strain diag(a, b), w = 0
  const double a = 0.03, b = -0.01;
  VectorField2 u(n);
  ScalarField w(n, 0.0);
  for (int i = 0; i < n; ++i) {
    u.x[i] = a * g.x(i);
    u.y[i] = b * g.y(i);
  }
  const double j = E / (2.0 * (1.0 - nu * nu)) * ((a + b) * (a + b) - 2.0 * (1.0 - nu) * a * b);
  CHECK(membrane_energy(g, u, w, m) == doctest::Approx(h * 2.0 * j).epsilon(1e-12));

  // paraboloid: hessian = I everywhere, J(I) = E/(1-nu)
  for (int i = 0; i < n; ++i) w[i] = 0.5 * (g.x(i) * g.x(i) + g.y(i) * g.y(i));
  CHECK(bending_energy(g, w, m) ==
        doctest::Approx(h * h * h / 12.0 * 2.0 * E / (1.0 - nu)).epsilon(1e-11));
}

TEST_CASE("uniform tension has an exactly critical flat state") {
  // free plate, constant normal traction f: u = f(1-nu)/E x is a critical
  // point, membrane energy h|Omega| f^2 (1-nu)/E, load work twice that
  const Grid g = Grid::make_rectangle(0.0, 2.0, 0.0, 1.0, 32, 16);
  const double E = 1.0, nu = 0.3, h = 0.1, f = 0.1;
  const Material m(E, nu, h);
  const LoadSpec load = LoadSpec::normal_pressure(f);
  const int n = g.num_nodes();
  VectorField2 u(n);
  ScalarField w(n, 0.0);
  const double al = f * (1.0 - nu) / E;
  for (int i = 0; i < n; ++i) {
    u.x[i] = al * g.x(i);
    u.y[i] = al * g.y(i);
  }
  const double mref = h * 2.0 * f * f * (1.0 - nu) / E;
  const EnergyBreakdown e = total_energy(g, u, w, m, load);
  CHECK(e.membrane == doctest::Approx(mref).epsilon(1e-12));
  CHECK(e.load_work_inplane == doctest::Approx(2.0 * mref).epsilon(1e-12));
  CHECK(e.total == doctest::Approx(-mref).epsilon(1e-12));

  VectorField2 gu;
  ScalarField gw;
  energy_gradient(g, u, w, m, load, BoundarySpec::free_plate(), gu, gw);
  double gmax = 0.0;
  for (int i = 0; i < n; ++i)
    gmax = std::max({gmax, std::abs(gu.x[i]), std::abs(gu.y[i]), std::abs(gw[i])});
  CHECK(gmax < 1e-14);
}

TEST_CASE("breakdown is consistent") {
  const Grid g = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 13, 13);
  const Material m(2.0, 0.25, 0.05);
  LoadSpec load = LoadSpec::normal_pressure(0.03);
  load.transverse.assign(g.num_nodes(), 0.2);
  const Fields f = random_fields(g, 4);
  const EnergyBreakdown e = total_energy(g, f.u, f.w, m, load);
  CHECK(e.total == doctest::Approx(e.membrane + e.bending - e.load_work_inplane -
                                   e.load_work_transverse)
                       .epsilon(1e-14));
  CHECK(e.membrane == doctest::Approx(membrane_energy(g, f.u, f.w, m)).epsilon(1e-14));
  CHECK(e.bending == doctest::Approx(bending_energy(g, f.w, m)).epsilon(1e-14));
}

TEST_CASE("energy is invariant under in-plane translation") {
  const Grid g = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 11, 11);
  const Material m(1.0, 0.3, 0.1);
  const LoadSpec load = LoadSpec::normal_pressure(0.05);
  Fields f = random_fields(g, 9);
  const double e0 = total_energy(g, f.u, f.w, m, load).total;
  for (int i = 0; i < g.num_nodes(); ++i) {
    f.u.x[i] += 3.7;
    f.u.y[i] -= 1.2;
  }
  // strains kill the translation; the divergence-form load work does too
  CHECK(total_energy(g, f.u, f.w, m, load).total == doctest::Approx(e0).epsilon(1e-11));
}

TEST_CASE("gradient matches finite differences") {
  const double delta = 1e-6;
  for (const Grid& g : {Grid::make_rectangle(0.0, 2.0, 0.0, 1.0, 8, 6),
                        Grid::make_annulus(1.0, 2.0, 6, 24)}) {
    const Material m(1.3, 0.28, 0.2);
    LoadSpec load;
    load.traction = [](double x, double y, const Vec2& n) {
      return Vec2{0.1 * n.x + 0.02 * y, 0.1 * n.y - 0.03 * x};
    };
    load.transverse.assign(g.num_nodes(), 0.0);
    for (int i = 0; i < g.num_nodes(); ++i) load.transverse[i] = 0.05 + 0.02 * g.x(i);
    const BoundarySpec bc = g.kind() == Grid::Kind::rectangle
                                ? BoundarySpec::whole_boundary(g, BcClass::A1)
                                : BoundarySpec::free_plate();
    Fields f = random_fields(g, 21);
    f.w = apply_bc(g, f.w, bc);
    VectorField2 gu;
    ScalarField gw;
    energy_gradient(g, f.u, f.w, m, load, bc, gu, gw);
    double gnorm = 0.0;
    for (int i = 0; i < g.num_nodes(); ++i)
      gnorm = std::max({gnorm, std::abs(gu.x[i]), std::abs(gu.y[i]), std::abs(gw[i])});

    std::mt19937_64 rng(33);
    std::uniform_int_distribution<int> pick(0, g.num_nodes() - 1);
    const auto fd = [&](std::vector<double>& c, int i) {
      const double keep = c[i];
      c[i] = keep + delta;
      const double ep = total_energy(g, f.u, f.w, m, load).total;
      c[i] = keep - delta;
      const double em = total_energy(g, f.u, f.w, m, load).total;
      c[i] = keep;
      return (ep - em) / (2.0 * delta);
    };
    const auto frozen = bc.constrained_nodes(g);
    for (int t = 0; t < 25; ++t) {
      const int i = pick(rng);
      CHECK(fd(f.u.x, i) == doctest::Approx(gu.x[i]).epsilon(1e-6).scale(gnorm));
      CHECK(fd(f.u.y, i) == doctest::Approx(gu.y[i]).epsilon(1e-6).scale(gnorm));
      bool isfrozen = false;
      for (int k : frozen) isfrozen |= (k == i);
      if (!isfrozen) CHECK(fd(f.w, i) == doctest::Approx(gw[i]).epsilon(1e-6).scale(gnorm));
    }
  }
}

TEST_CASE("transverse rescaling identity") {
  const Grid g = Grid::make_rectangle(0.0, 1.0, 0.0, 1.0, 9, 9);
  const Material m(1.0, 0.3, 0.1);
  const LoadSpec load = LoadSpec::normal_pressure(0.02);
  const Fields f = random_fields(g, 5);
  const double eps = 0.125, ref = -0.003;
  ScalarField ew(f.w.size());
  for (std::size_t i = 0; i < f.w.size(); ++i) ew[i] = eps * f.w[i];
  const double direct = (total_energy(g, f.u, ew, m, load).total - ref) / (eps * eps);
  CHECK(scaled_energy(g, f.u, f.w, m, load, eps, ref) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("prestressed energy reduces correctly at zeta = 0") {
  const Grid g = Grid::make_annulus(1.0, 2.0, 12, 48);
  const double h = 0.01, alpha = 0.5;
  const Material m(1.0, 0.3, h);
  LoadSpec load;
  load.alpha = alpha;
  load.traction = [](double, double, const Vec2& n) { return 0.3 * n; };
  Fields f = random_fields(g, 8, 0.05);
  const ScalarField zero(g.num_nodes(), 0.0);
  const double membrane_int = membrane_energy(g, f.u, zero, m) / h;
  const double expect =
      std::pow(h, 2.0 * alpha + 1.0) * (membrane_int - inplane_load_work(g, load, f.u));
  CHECK(prestressed_energy(g, f.u, zero, m, load) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(scaled_prestressed_energy(g, f.u, zero, m, load) ==
        doctest::Approx(expect / std::pow(h, 2.0 * alpha + 1.0)).epsilon(1e-12));
}
