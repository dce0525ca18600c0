#pragma once

// Pointwise constitutive algebra for a Foppl-von Karman plate:
// the quadratic energy density J, its derivative, and the 2x2
// symmetric-tensor eigen machinery everything else is built on.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fvk {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Constitutive and thickness parameters. The reference thickness s0 is 1,
/// so `thickness` is the nondimensional scale factor h.
struct Material {
  double young;      // E > 0
  double poisson;    // nu in (-1, 1/2)
  double thickness;  // h > 0

  Material(double E, double nu, double h) : young(E), poisson(nu), thickness(h) {
    if (!(E > 0.0)) throw std::invalid_argument("Material: young modulus must be positive");
    if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("Material: poisson ratio must lie in (-1, 1/2)");
    if (!(h > 0.0)) throw std::invalid_argument("Material: thickness must be positive");
  }
};

/// 2x2 real symmetric tensor; only the three independent entries are stored.
struct Sym2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  Sym2() = default;
  Sym2(double a11_, double a12_, double a22_) : a11(a11_), a12(a12_), a22(a22_) {}

  static Sym2 identity() { return {1.0, 0.0, 1.0}; }
  /// xi (x) xi
  static Sym2 outer(const Vec2& v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a12; }
  /// Frobenius norm squared, |A|^2 = sum A_ij^2.
  double norm2() const { return a11 * a11 + 2.0 * a12 * a12 + a22 * a22; }

  Sym2 operator+(const Sym2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
  Sym2 operator-(const Sym2& o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }
  Sym2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }

  /// Full contraction A : B.
  double contract(const Sym2& o) const {
    return a11 * o.a11 + 2.0 * a12 * o.a12 + a22 * o.a22;
  }

  Vec2 apply(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y};
  }
};

inline Sym2 operator*(double s, const Sym2& a) { return a * s; }

/// Ordered eigen-decomposition of a Sym2: lam1 <= lam2, orthonormal v1, v2.
struct EigPair {
  double lam1 = 0.0;
  double lam2 = 0.0;
  Vec2 v1;
  Vec2 v2;
};

/// J(A) = E/(2(1-nu^2)) (|Tr A|^2 - 2(1-nu) det A).
inline double energy_density(const Sym2& a, const Material& m) {
  const double tr = a.trace();
  return m.young / (2.0 * (1.0 - m.poisson * m.poisson)) *
         (tr * tr - 2.0 * (1.0 - m.poisson) * a.det());
}

/// J'(A) = E/(1+nu) A + E nu/(1-nu^2) (Tr A) I.
inline Sym2 energy_density_grad(const Sym2& a, const Material& m) {
  const double c1 = m.young / (1.0 + m.poisson);
  const double c2 = m.young * m.poisson / (1.0 - m.poisson * m.poisson) * a.trace();
  return {c1 * a.a11 + c2, c1 * a.a12, c1 * a.a22 + c2};
}

namespace detail {
// Sign convention: first nonzero component positive.
inline Vec2 canonical_sign(Vec2 v) {
  if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) return {-v.x, -v.y};
  return v;
}
}  // namespace detail

/// Closed-form ordered eigen-decomposition. For A = c*I the canonical axes
/// (1,0), (0,1) are returned.
inline EigPair eig_sym2(const Sym2& a) {
  EigPair e;
  const double mean = 0.5 * (a.a11 + a.a22);
  const double diff = 0.5 * (a.a11 - a.a22);
  const double rad = std::hypot(diff, a.a12);
  e.lam1 = mean - rad;
  e.lam2 = mean + rad;
  if (rad == 0.0) {
    e.v1 = {1.0, 0.0};
    e.v2 = {0.0, 1.0};
    return e;
  }
  // Eigenvector of lam2: pick the better-conditioned column of A - lam1*I.
  Vec2 c1{a.a11 - e.lam1, a.a12};
  Vec2 c2{a.a12, a.a22 - e.lam1};
  Vec2 v2 = (c1.norm() >= c2.norm()) ? c1 : c2;
  const double n = v2.norm();
  v2 = {v2.x / n, v2.y / n};
  e.v2 = detail::canonical_sign(v2);
  e.v1 = detail::canonical_sign(Vec2{-v2.y, v2.x});
  return e;
}

/// (c_nu, C_nu) of the coercivity bounds c_nu E/2 |A|^2 <= J(A) <= C_nu E/2 |A|^2.
inline std::pair<double, double> coercivity_constants(double nu) {
  if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("coercivity_constants: nu out of (-1, 1/2)");
  const double a = 1.0 / (1.0 - nu);
  const double b = 1.0 / (1.0 + nu);
  return {std::min(a, b), std::max(a, b)};
}

}  // namespace fvk
