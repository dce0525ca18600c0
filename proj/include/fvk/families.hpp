#pragma once

// Closed-form displacement families: the divergent sequences on rectangles,
// the buckled modes of the 1D eigenproblem, and the oscillating annulus
// constructions, all sampled onto grids. Generators never solve anything,
// so they stay independent oracles for the solver modules.

#include "fvk/energy.hpp"
#include "fvk/solve.hpp"

namespace fvk {

struct FamilyPair {
  VectorField2 u;
  ScalarField w;
};

/// Compression family on (-2,2)x(-1,1):
/// u_n = -n (2+x1)^3/6 e1, w_n = sqrt(n) (2+x1)^2/2.
FamilyPair family_ce12(int n, const Grid& g);

/// Shear family on (-2,2)x(-1,1): w_n = sqrt(n) psi(x1-x2) with the ramp
/// profile psi below, u_n = n/2 int |psi'|^2 (-e1 + e2).
FamilyPair family_ce14(int n, const Grid& g);

/// The C^{1,1} profile of the shear family: even, support [-1,1],
/// psi' = -1 on [1/4,3/4], |psi''| <= 4 (piecewise quadratic realization).
double ce14_psi(double t);
double ce14_psi_prime(double t);

/// Partially supported family on (0,1)^2, w = 0 on {x1 = 0}:
/// w_m = ((x1+m)^2 - m^2)/2, u_m = -(x1+m)^3/6 e1.
FamilyPair family_remark13(int m, const Grid& g);

/// Fine-scale transverse sawtooth on (0,a)x(0,1):
/// zeta_n = n^{-1/2} phi(n x2) psi_n(x1), v_n = (0, -n x2 / 2).
FamilyPair family_ce33(int n, const Grid& g);
/// The load driving it: e2 on the bottom edge, -e2 on the top edge.
LoadSpec ce33_load();

struct BuckledModeResult {
  ScalarField w;      // mode embedded on the 2D grid, max-normalized
  double k = 0.0;     // 1D eigenvalue
  double h_critical = 0.0;
};

/// n-th clamped compression mode w(x2) on a rectangle of width `width`.
BuckledModeResult buckled_mode_compression(const Grid& g, int n, double gamma,
                                           double width, double E, double nu,
                                           int nodes_1d = 401);
/// n-th shear-strip mode psi(x1-x2), clamped on (-1,1), zero outside the strip.
BuckledModeResult buckled_mode_shear(const Grid& g, int n, double gamma,
                                     double E, double nu, int nodes_1d = 401);

enum class PressCase { inner_leq_outer, outer_leq_inner };  // p1<=p2<0, p2<=p1<0

/// Radially oscillating profile on the annulus, amplitude
/// sqrt(2(1-nu)|b| r^-2 - 2a(1+nu)), period (R2-R1)/floor(beta),
/// folds mollified over width sigma in the rescaled radial variable.
ScalarField family_radial_osc(const Grid& g, double a, double b, PressCase pc,
                              double nu, double beta, double sigma);

/// Tangentially oscillating profile, amplitude sqrt(-2b(1-nu)), angular
/// period 2pi/floor(beta), radial cutoff ramp over [R1, R1+delta].
ScalarField family_tangential_osc(const Grid& g, double b, double nu, double beta,
                                  double sigma, double delta);

enum class OscKind { radial, tangential };

struct ScalingChoice {
  double beta = 0.0;
  double sigma = 0.0;
  double delta = 0.0;  // radial case: unused
};

/// Oscillation scales for thickness h and load exponent alpha:
/// beta^-1 = c_beta h^((2-alpha)/3) radial, c_beta h^(1-alpha/2) tangential;
/// sigma = c_sigma h^sigma_exp with the default exponent per kind
/// ((5/3)(2-alpha) radial, 1-alpha/2 + half the beta exponent tangential);
/// delta = sqrt(beta^-1).
ScalingChoice optimal_scaling(OscKind kind, double alpha, double h,
                              double c_beta = 1.0, double c_sigma = 1.0,
                              double sigma_exp = -1.0);

}  // namespace fvk
