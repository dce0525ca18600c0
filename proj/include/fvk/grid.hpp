#pragma once

// Structured grids (rectangle, annulus), nodal fields, finite-difference
// differential operators with their transposes, quadrature and boundary
// machinery. Operators are stored as sparse matrices so that energies stay
// smooth functions of nodal values and their exact adjoints are available
// to the gradient assembly.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fvk/material.hpp"

namespace fvk {

/// Sparse linear operator in CSR form.
struct LinOp {
  int rows = 0;
  int cols = 0;
  std::vector<int> rptr;  // size rows+1
  std::vector<int> cidx;
  std::vector<double> val;

  std::vector<double> apply(std::span<const double> x) const;
  /// out += s * A^T y
  void add_transpose_apply(std::span<const double> y, double s, std::span<double> out) const;

  static LinOp compose(const LinOp& a, const LinOp& b);          // a*b
  static LinOp add(const LinOp& a, const LinOp& b, double sa = 1.0, double sb = 1.0);
  LinOp scaled_rows(std::span<const double> d) const;            // diag(d)*A
};

using ScalarField = std::vector<double>;

struct VectorField2 {
  std::vector<double> x;
  std::vector<double> y;

  VectorField2() = default;
  explicit VectorField2(std::size_t n) : x(n, 0.0), y(n, 0.0) {}
  std::size_t size() const { return x.size(); }
};

using Sym2Field = std::vector<Sym2>;

/// One boundary quadrature entry. Corner nodes of a rectangle appear twice,
/// once per incident edge, each with that edge's normal and half-weight.
struct BoundaryQuad {
  int node;
  double weight;   // dH^1 weight
  Vec2 normal;     // outward unit normal of the owning edge
  Vec2 tangent;    // counterclockwise unit tangent
};

class Grid {
 public:
  enum class Kind { rectangle, annulus };

  static Grid make_rectangle(double x0, double x1, double y0, double y1, int nx, int ny);
  static Grid make_annulus(double r1, double r2, int nr, int ntheta);

  Kind kind() const { return kind_; }
  int num_nodes() const { return static_cast<int>(xs_.size()); }
  double x(int i) const { return xs_[i]; }
  double y(int i) const { return ys_[i]; }
  const std::vector<double>& quad_weights() const { return qw_; }
  const std::vector<int>& boundary_nodes() const { return bnodes_; }
  const std::vector<BoundaryQuad>& boundary_quad() const { return bquad_; }
  bool is_boundary(int i) const { return bflag_[i] != 0; }
  /// First interior-layer node inward of a boundary node (clamped A0 layer).
  int interior_neighbor(int bnode) const;

  // rectangle metadata
  double x0() const { return x0_; }
  double x1() const { return x1_; }
  double y0() const { return y0_; }
  double y1() const { return y1_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  // annulus metadata
  double r1() const { return r1_; }
  double r2() const { return r2_; }
  int nr() const { return nr_; }
  int ntheta() const { return ntheta_; }

  double spacing() const { return spacing_; }  // max nodal spacing, tolerance scale

  const LinOp& dx() const { return dx_; }
  const LinOp& dy() const { return dy_; }
  const LinOp& dxx() const { return dxx_; }
  const LinOp& dyy() const { return dyy_; }
  /// Symmetrized mixed second derivative.
  const LinOp& dxy() const { return dxy_; }

 private:
  Grid() = default;

  Kind kind_ = Kind::rectangle;
  double x0_ = 0, x1_ = 0, y0_ = 0, y1_ = 0;
  int nx_ = 0, ny_ = 0;
  double r1_ = 0, r2_ = 0;
  int nr_ = 0, ntheta_ = 0;
  double spacing_ = 0;

  std::vector<double> xs_, ys_, qw_;
  std::vector<int> bnodes_;
  std::vector<std::uint8_t> bflag_;
  std::vector<int> inner_of_;  // -1 for non-boundary nodes
  std::vector<BoundaryQuad> bquad_;
  LinOp dx_, dy_, dxx_, dyy_, dxy_;
};

enum class BcClass { A0, A1, A2 };

/// Boundary condition: class selector plus the Gamma subset of boundary nodes.
struct BoundarySpec {
  BcClass cls = BcClass::A2;
  std::vector<std::uint8_t> gamma;  // per-node mask, meaningful on boundary nodes

  static BoundarySpec free_plate();
  static BoundarySpec whole_boundary(const Grid& g, BcClass c);
  static BoundarySpec from_predicate(const Grid& g, BcClass c,
                                     const std::function<bool(double, double)>& on_gamma);

  /// w-node indices frozen to zero by this condition (Gamma nodes, plus the
  /// first interior layer for A0).
  std::vector<int> constrained_nodes(const Grid& g) const;
  void validate(const Grid& g) const;
};

VectorField2 grad_scalar(const Grid& g, const ScalarField& w);
Sym2Field hessian_scalar(const Grid& g, const ScalarField& w);
Sym2Field sym_grad_vector(const Grid& g, const VectorField2& u);
/// D(u, w) = E(u) + 1/2 Dw (x) Dw
Sym2Field stretching(const Grid& g, const VectorField2& u, const ScalarField& w);

double integrate(const Grid& g, const ScalarField& f);
/// Integrates a nodal scalar over the boundary, dH^1.
double boundary_integrate(const Grid& g, const ScalarField& f);

ScalarField apply_bc(const Grid& g, const ScalarField& w, const BoundarySpec& bc);
ScalarField project_bc_grad(const Grid& g, const ScalarField& grad_w, const BoundarySpec& bc);

/// L2-orthogonal projection of u onto infinitesimal rigid displacements.
VectorField2 rigid_project(const Grid& g, const VectorField2& u);

}  // namespace fvk
