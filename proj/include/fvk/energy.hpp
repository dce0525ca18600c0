#pragma once

// The plate functional: membrane + bending - load work, its scaled and
// prestressed variants, and the exact gradient of the discrete energy.

#include <functional>

#include "fvk/grid.hpp"

namespace fvk {

/// In-plane boundary traction (force per unit length, sampled on boundary
/// quadrature entries), transverse load (force per unit area, nodal), and the
/// load scaling exponent used by the prestressed paths.
struct LoadSpec {
  std::function<Vec2(double x, double y, const Vec2& n)> traction;  // null = none
  ScalarField transverse;  // empty = none
  double alpha = 0.0;
  // Constant normal pressure f n. Its work is discretized through the
  // divergence theorem, f * int div u, so that the uniform-strain state is an
  // exact critical point of the discrete energy (the boundary-sampled form is
  // not compatible with one-sided stencils).
  double pressure = 0.0;
  bool has_pressure = false;

  static LoadSpec none() { return {}; }
  static LoadSpec normal_pressure(double f) {
    LoadSpec l;
    l.pressure = f;
    l.has_pressure = true;
    return l;
  }

  Vec2 traction_at(double x, double y, const Vec2& n) const {
    if (has_pressure) return pressure * n;
    return traction ? traction(x, y, n) : Vec2{0.0, 0.0};
  }
};

/// Work of the in-plane load against u (the h-free line integral; pressure
/// mode uses the volume form).
double inplane_load_work(const Grid& g, const LoadSpec& load, const VectorField2& u);

struct EnergyBreakdown {
  double membrane = 0.0;
  double bending = 0.0;
  double load_work_inplane = 0.0;
  double load_work_transverse = 0.0;
  double total = 0.0;
};

/// h * integral of J(D(u,w)).
double membrane_energy(const Grid& g, const VectorField2& u, const ScalarField& w,
                       const Material& m);

/// (h^3/12) * integral of J(D^2 w).
double bending_energy(const Grid& g, const ScalarField& w, const Material& m);

/// Full functional; total = membrane + bending - h*int(g_h w) - h*bint(f_h . u).
EnergyBreakdown total_energy(const Grid& g, const VectorField2& u, const ScalarField& w,
                             const Material& m, const LoadSpec& load);

/// Exact partial derivatives of total_energy with respect to every nodal value;
/// w-components at nodes frozen by `bc` are zeroed.
void energy_gradient(const Grid& g, const VectorField2& u, const ScalarField& w,
                     const Material& m, const LoadSpec& load, const BoundarySpec& bc,
                     VectorField2& grad_u, ScalarField& grad_w);

/// eps^-2 (F_h(u, eps*w) - min_ref), the transverse-rescaled energy.
double scaled_energy(const Grid& g, const VectorField2& u, const ScalarField& w,
                     const Material& m, const LoadSpec& load, double eps, double min_ref);

/// Bending plus the prestress-weighted quadratic term:
/// F^b(w) + (h/2) int J'(E(u*)) : Dw (x) Dw.
double limit_energy(const Grid& g, const VectorField2& u_star, const ScalarField& w,
                    const Material& m);

/// G~_h(v, zeta) = h^alpha F^b(zeta) + h^(2a+1) (int J(D(v,zeta)) - bint f.v),
/// with f the unscaled traction from `load`.
double prestressed_energy(const Grid& g, const VectorField2& v, const ScalarField& zeta,
                          const Material& m, const LoadSpec& load);

/// h^-(2a+1) G~_h, the normalization whose h -> 0 limit is the relaxed functional.
double scaled_prestressed_energy(const Grid& g, const VectorField2& v, const ScalarField& zeta,
                                 const Material& m, const LoadSpec& load);

}  // namespace fvk
