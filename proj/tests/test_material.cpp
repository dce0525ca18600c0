#include <cmath>
#include <random>

#include "doctest.h"
#include "fvk/material.hpp"

using namespace fvk;

namespace {

Sym2 rotate(const Sym2& a, double t) {
  const double c = std::cos(t), s = std::sin(t);
  // R A R^T with R = [[c,-s],[s,c]]
  const double b11 = c * (c * a.a11 - s * a.a12) - s * (c * a.a12 - s * a.a22);
  const double b12 = c * (s * a.a11 + c * a.a12) - s * (s * a.a12 + c * a.a22);
  const double b22 = s * (s * a.a11 + c * a.a12) + c * (s * a.a12 + c * a.a22);
  return {b11, b12, b22};
}

}  // namespace

TEST_CASE("constructor validates parameters") {
  CHECK_NOTHROW(Material(1.0, 0.3, 0.1));
  CHECK_THROWS_AS(Material(0.0, 0.3, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(Material(1.0, 0.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(Material(1.0, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(Material(1.0, 0.3, 0.0), std::invalid_argument);
}

TEST_CASE("density values on reference tensors") {
  const double E = 2.0, nu = 0.3;
  Material m(E, nu, 0.1);
  // rank-one e2 (x) e2: tr = 1, det = 0
  CHECK(energy_density({0, 0, 1}, m) == doctest::Approx(E / (2.0 * (1.0 - nu * nu))).epsilon(1e-14));
  // pure shear: tr = 0, det = -1
  CHECK(energy_density({0, 1, 0}, m) == doctest::Approx(E / (1.0 + nu)).epsilon(1e-14));
  // identity: tr = 2, det = 1
  CHECK(energy_density(Sym2::identity(), m) == doctest::Approx(E / (1.0 - nu)).epsilon(1e-14));
  CHECK(energy_density({0, 0, 0}, m) == 0.0);
}

TEST_CASE("density is frame invariant") {
  Material m(1.7, 0.25, 0.1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const Sym2 a{d(rng), d(rng), d(rng)};
    const double t = d(rng);
    CHECK(energy_density(rotate(a, t), m) == doctest::Approx(energy_density(a, m)).epsilon(1e-12));
  }
}

TEST_CASE("density gradient matches finite differences") {
  Material m(1.3, 0.2, 0.1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double eps = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const Sym2 a{d(rng), d(rng), d(rng)};
    const Sym2 gr = energy_density_grad(a, m);
    const auto fd = [&](const Sym2& dir) {
      return (energy_density(a + eps * dir, m) - energy_density(a - eps * dir, m)) / (2.0 * eps);
    };
    // dJ(A)[B] = J'(A) : B, the off-diagonal direction counts twice
    CHECK(fd({1, 0, 0}) == doctest::Approx(gr.a11).epsilon(1e-7));
    CHECK(fd({0, 0, 1}) == doctest::Approx(gr.a22).epsilon(1e-7));
    CHECK(fd({0, 1, 0}) == doctest::Approx(2.0 * gr.a12).epsilon(1e-7));
  }
}

TEST_CASE("coercivity constants") {
  const auto [c, C] = coercivity_constants(0.3);
  CHECK(c == doctest::Approx(1.0 / 1.3).epsilon(1e-15));
  CHECK(C == doctest::Approx(1.0 / 0.7).epsilon(1e-15));
  CHECK_THROWS_AS(coercivity_constants(0.5), std::invalid_argument);

  // the bounds actually hold
  Material m(1.0, 0.3, 0.1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Sym2 a{d(rng), d(rng), d(rng)};
    const double j = energy_density(a, m);
    CHECK(j >= 0.5 * c * a.norm2() - 1e-14);
    CHECK(j <= 0.5 * C * a.norm2() + 1e-14);
  }
}

TEST_CASE("eigen decomposition reconstructs the tensor") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const Sym2 a{d(rng), d(rng), d(rng)};
    const EigPair e = eig_sym2(a);
    CHECK(e.lam1 <= e.lam2);
    CHECK(e.v1.norm() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(e.v1.dot(e.v2)) < 1e-13);
    const Sym2 rec = e.lam1 * Sym2::outer(e.v1) + e.lam2 * Sym2::outer(e.v2);
    CHECK(rec.a11 == doctest::Approx(a.a11).epsilon(1e-12));
    CHECK(rec.a12 == doctest::Approx(a.a12).epsilon(1e-12));
    CHECK(rec.a22 == doctest::Approx(a.a22).epsilon(1e-12));
  }
  // multiple of the identity gets the canonical axes
  const EigPair e = eig_sym2(2.0 * Sym2::identity());
  CHECK(e.v1.x == 1.0);
  CHECK(e.v2.y == 1.0);
}
