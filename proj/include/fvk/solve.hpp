#pragma once

// Minimization of the plate energy under boundary constraints, the
// membrane-correction linear solve, Poincare-constant estimation, and the
// one-dimensional buckling eigenproblem.

#include <cstdint>
#include <utility>

#include "fvk/energy.hpp"

namespace fvk {

struct SolveOptions {
  int max_iters = 2000;
  double grad_tol = 1e-8;          // projected-gradient norm threshold
  double backtrack = 0.5;          // line-search shrink factor
  double armijo = 1e-4;            // sufficient-decrease constant
  int memory = 10;                 // quasi-Newton history, 0 = gradient descent
  std::uint64_t seed = 0;          // for random initial perturbations
  double energy_floor_scale = 1e6; // floor = -scale * |E0 + 1|
  double noise_amplitude = 0.0;    // added to the initial iterate when > 0
};

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> energy_history;
  bool converged = false;
  bool diverging = false;  // energy fell below the divergence floor
};

/// Descent on total_energy from (u, w); the iterate is updated in place.
/// Free-plate runs quotient rigid motions of u and the mean of w.
SolveReport minimize(const Grid& g, const Material& m, const LoadSpec& load,
                     const BoundarySpec& bc, VectorField2& u, ScalarField& w,
                     const SolveOptions& opts);

/// Adds seeded uniform noise of the given amplitude (free w nodes only).
void seed_noise(const Grid& g, const BoundarySpec& bc, double amplitude,
                std::uint64_t seed, VectorField2& u, ScalarField& w);

/// argmin over z of Q_w(z) = int J(E(z) + 1/2 Dw (x) Dw), rigid motions
/// quotiented; returns (z_w, min Q_w). Conjugate-gradient on the convex
/// quadratic, relative residual 1e-10.
std::pair<VectorField2, double> membrane_correction(const Grid& g, const ScalarField& w,
                                                    const Material& m);

struct PsElement {
  VectorField2 u;
  ScalarField w;
  double eps;
};

/// Uniform Palais-Smale test along a sequence: energy below `bound` and
/// non-increasing residual of the eps-scaled gradient.
std::vector<bool> uniform_ps_check(const Grid& g, const std::vector<PsElement>& seq,
                                   const Material& m, const LoadSpec& load,
                                   const BoundarySpec& bc, double bound, double min_ref);

/// Best constant K with ||v - mean||_L2^2 <= K ||Dv||_L2^2, i.e. the
/// reciprocal of the smallest nonzero Neumann eigenvalue. Inverse power
/// iteration with constants deflated.
double poincare_constant(const Grid& g);

/// -h^2 c_nu E / (12 K(Omega)): tractions above this cannot buckle the plate.
double compression_threshold(const Material& m, const Grid& g);

enum class BucklingBc { clamped, supported, free_ends };

struct BucklingMode {
  double k = 0.0;             // eigenvalue of w'''' = -k w''
  std::vector<double> shape;  // nodal mode on the full 1D grid
};

/// Smallest n_modes eigenpairs of the 1D buckling pencil
/// (discrete w'''')= k (-discrete w'') on [x0, x1] with `nodes` points.
std::vector<BucklingMode> buckling_critical(BucklingBc bc, double x0, double x1,
                                            int nodes, int n_modes);

/// h_n for uniaxial compression gamma over a plate of width a.
double critical_thickness_compression(double k, double gamma, double a, double E, double nu);
/// h_n for the shear-strip problem.
double critical_thickness_shear(double k, double gamma, double E, double nu);

}  // namespace fvk
