#include "fvk/energy.hpp"

#include <stdexcept>

namespace fvk {

namespace {

void check_sizes(const Grid& g, const VectorField2& u, const ScalarField& w) {
  const std::size_t n = static_cast<std::size_t>(g.num_nodes());
  if (u.size() != n || w.size() != n)
    throw std::invalid_argument("energy: field size does not match grid");
}

}  // namespace

double inplane_load_work(const Grid& g, const LoadSpec& load, const VectorField2& u) {
  if (load.has_pressure) {
    const auto ux = g.dx().apply(u.x);
    const auto vy = g.dy().apply(u.y);
    const auto& q = g.quad_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * (ux[i] + vy[i]);
    return load.pressure * s;
  }
  if (!load.traction) return 0.0;
  double s = 0.0;
  for (const auto& b : g.boundary_quad()) {
    const Vec2 f = load.traction(g.x(b.node), g.y(b.node), b.normal);
    s += b.weight * (f.x * u.x[b.node] + f.y * u.y[b.node]);
  }
  return s;
}

double membrane_energy(const Grid& g, const VectorField2& u, const ScalarField& w,
                       const Material& m) {
  check_sizes(g, u, w);
  const Sym2Field d = stretching(g, u, w);
  const auto& q = g.quad_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += q[i] * energy_density(d[i], m);
  return m.thickness * s;
}

double bending_energy(const Grid& g, const ScalarField& w, const Material& m) {
  const Sym2Field hess = hessian_scalar(g, w);
  const auto& q = g.quad_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < hess.size(); ++i) s += q[i] * energy_density(hess[i], m);
  const double h = m.thickness;
  return h * h * h / 12.0 * s;
}

EnergyBreakdown total_energy(const Grid& g, const VectorField2& u, const ScalarField& w,
                             const Material& m, const LoadSpec& load) {
  check_sizes(g, u, w);
  EnergyBreakdown e;
  e.membrane = membrane_energy(g, u, w, m);
  e.bending = bending_energy(g, w, m);
  e.load_work_inplane = m.thickness * inplane_load_work(g, load, u);
  if (!load.transverse.empty()) {
    if (load.transverse.size() != w.size())
      throw std::invalid_argument("energy: transverse load size does not match grid");
    double s = 0.0;
    const auto& q = g.quad_weights();
    for (std::size_t i = 0; i < w.size(); ++i) s += q[i] * load.transverse[i] * w[i];
    e.load_work_transverse = m.thickness * s;
  }
  e.total = e.membrane + e.bending - e.load_work_inplane - e.load_work_transverse;
  return e;
}

void energy_gradient(const Grid& g, const VectorField2& u, const ScalarField& w,
                     const Material& m, const LoadSpec& load, const BoundarySpec& bc,
                     VectorField2& grad_u, ScalarField& grad_w) {
  check_sizes(g, u, w);
  const int n = g.num_nodes();
  const auto& q = g.quad_weights();
  const double h = m.thickness;

  grad_u = VectorField2(n);
  grad_w.assign(n, 0.0);

  // membrane: G = J'(D), chain rule through the difference operators
  const auto wx = g.dx().apply(w);
  const auto wy = g.dy().apply(w);
  const Sym2Field d = stretching(g, u, w);
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const Sym2 gi = energy_density_grad(d[i], m);
    a[i] = h * q[i] * gi.a11;
    b[i] = h * q[i] * gi.a12;
  }
  g.dx().add_transpose_apply(a, 1.0, grad_u.x);
  g.dy().add_transpose_apply(b, 1.0, grad_u.x);
  g.dx().add_transpose_apply(b, 1.0, grad_u.y);
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    const Sym2 gi = energy_density_grad(d[i], m);
    c[i] = h * q[i] * gi.a22;
  }
  g.dy().add_transpose_apply(c, 1.0, grad_u.y);
  // w part of the membrane term: dD = sym(Dw (x) dDw)
  for (int i = 0; i < n; ++i) {
    const Sym2 gi = energy_density_grad(d[i], m);
    a[i] = h * q[i] * (gi.a11 * wx[i] + gi.a12 * wy[i]);
    b[i] = h * q[i] * (gi.a12 * wx[i] + gi.a22 * wy[i]);
  }
  g.dx().add_transpose_apply(a, 1.0, grad_w);
  g.dy().add_transpose_apply(b, 1.0, grad_w);

  // bending
  const Sym2Field hess = hessian_scalar(g, w);
  const double kb = h * h * h / 12.0;
  std::vector<double> p11(n), p12(n), p22(n);
  for (int i = 0; i < n; ++i) {
    const Sym2 gi = energy_density_grad(hess[i], m);
    p11[i] = kb * q[i] * gi.a11;
    p12[i] = kb * q[i] * 2.0 * gi.a12;
    p22[i] = kb * q[i] * gi.a22;
  }
  g.dxx().add_transpose_apply(p11, 1.0, grad_w);
  g.dxy().add_transpose_apply(p12, 1.0, grad_w);
  g.dyy().add_transpose_apply(p22, 1.0, grad_w);

  // loads
  if (load.has_pressure) {
    std::vector<double> pq(n);
    for (int i = 0; i < n; ++i) pq[i] = h * load.pressure * q[i];
    g.dx().add_transpose_apply(pq, -1.0, grad_u.x);
    g.dy().add_transpose_apply(pq, -1.0, grad_u.y);
  } else if (load.traction) {
    for (const auto& bq : g.boundary_quad()) {
      const Vec2 f = load.traction(g.x(bq.node), g.y(bq.node), bq.normal);
      grad_u.x[bq.node] -= h * bq.weight * f.x;
      grad_u.y[bq.node] -= h * bq.weight * f.y;
    }
  }
  if (!load.transverse.empty())
    for (int i = 0; i < n; ++i) grad_w[i] -= h * q[i] * load.transverse[i];

  grad_w = project_bc_grad(g, grad_w, bc);
}

double scaled_energy(const Grid& g, const VectorField2& u, const ScalarField& w,
                     const Material& m, const LoadSpec& load, double eps, double min_ref) {
  ScalarField ew(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) ew[i] = eps * w[i];
  return (total_energy(g, u, ew, m, load).total - min_ref) / (eps * eps);
}

double limit_energy(const Grid& g, const VectorField2& u_star, const ScalarField& w,
                    const Material& m) {
  check_sizes(g, u_star, w);
  const Sym2Field e = sym_grad_vector(g, u_star);
  const auto dw = grad_scalar(g, w);
  const auto& q = g.quad_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Sym2 stress = energy_density_grad(e[i], m);
    s += q[i] * stress.contract(Sym2::outer({dw.x[i], dw.y[i]}));
  }
  return bending_energy(g, w, m) + 0.5 * m.thickness * s;
}

double prestressed_energy(const Grid& g, const VectorField2& v, const ScalarField& zeta,
                          const Material& m, const LoadSpec& load) {
  check_sizes(g, v, zeta);
  const double h = m.thickness;
  const double ha = std::pow(h, load.alpha);
  const double h2a1 = std::pow(h, 2.0 * load.alpha + 1.0);
  const double membrane = membrane_energy(g, v, zeta, m) / h;  // int J(D)
  return ha * bending_energy(g, zeta, m) +
         h2a1 * (membrane - inplane_load_work(g, load, v));
}

double scaled_prestressed_energy(const Grid& g, const VectorField2& v, const ScalarField& zeta,
                                 const Material& m, const LoadSpec& load) {
  const double h = m.thickness;
  return prestressed_energy(g, v, zeta, m, load) / std::pow(h, 2.0 * load.alpha + 1.0);
}

}  // namespace fvk
