#pragma once

// Pointwise relaxation machinery: the auxiliary density g_A and its closed-form
// minimum, numerical convexification, annulus prestress in closed form, and the
// tensile/compressive state classifier.

#include <cstdint>

#include "fvk/energy.hpp"

namespace fvk {

/// g_A(xi) = |A + xi (x) xi|^2 + (nu/(1-nu)) (Tr A + |xi|^2)^2.
double g_A(const Sym2& a, double nu, const Vec2& xi);

struct MinGA {
  double value = 0.0;
  Vec2 xi_star;  // a representative minimizer
};

/// Closed-form minimum of g_A over xi: g_A(0) when nu*lam2 + lam1 >= 0,
/// otherwise (1+nu) lam2^2 attained at xi = sqrt(-nu*lam2 - lam1) v1.
MinGA min_gA(const Sym2& a, double nu);

/// Lower convex envelope of g_A sampled on [-radius, radius]^2, computed by a
/// double discrete Legendre transform.
struct EnvelopeSamples {
  int res = 0;
  double radius = 0.0;
  std::vector<double> coord;  // shared 1D axis, size res
  std::vector<double> g;      // row-major, index i2*res + i1
  std::vector<double> env;

  double min_env() const;
  /// Bilinear interpolation of the envelope; xi must lie inside the box.
  double interpolate(const Vec2& xi) const;
};

EnvelopeSamples convexify_2d(const Sym2& a, double nu, double radius, int res);

/// Closed-form in-plane equilibrium of an annulus under normal boundary
/// pressures p1 (inner) and p2 (outer): v(x) = (a + b |x|^-2) x.
struct PrestressAnnulus {
  double r1 = 0.0, r2 = 0.0;
  double p1 = 0.0, p2 = 0.0;
  double a = 0.0, b = 0.0;

  Vec2 v(double x, double y) const {
    const double s = a + b / (x * x + y * y);
    return {s * x, s * y};
  }
};

PrestressAnnulus annulus_prestress(double p1, double p2, double r1, double r2,
                                   const Material& m);
VectorField2 sample_prestress(const PrestressAnnulus& ps, const Grid& g);
/// The boundary load realizing the prestress: -p1 x/R1 inside, p2 x/R2 outside.
LoadSpec prestress_load(const PrestressAnnulus& ps);

struct StateClass {
  std::vector<double> s1;            // smallest stress eigenvalue per node
  std::vector<std::uint8_t> tensile; // s1 >= 0
  bool all_tensile = true;
  bool all_compressive = true;
};

/// Per-node sign of the smallest eigenvalue of the stress J'(strain).
StateClass classify_state(const Sym2Field& strain, const Material& m);

/// Integral of the convexified transverse density at D(zeta) minus the in-plane
/// load work; the envelope is built per node (resolution `res`).
double relaxed_energy(const Grid& g, const VectorField2& v, const ScalarField& zeta,
                      const Material& m, const LoadSpec& load, int res = 41);

/// Integral of the pointwise minimum (E/(8(1+nu))) min g_{2E(v)} minus the
/// load work: the value the oscillating constructions approach. A lower bound
/// for the relaxed functional in general, exact for the annulus examples.
double relaxed_min_energy(const Grid& g, const VectorField2& v, const Material& m,
                          const LoadSpec& load);

}  // namespace fvk
