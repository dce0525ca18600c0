#include "fvk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fvk {

namespace {

struct Triplet {
  int r, c;
  double v;
};

LinOp from_triplets(int rows, int cols, std::vector<Triplet> t) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  LinOp op;
  op.rows = rows;
  op.cols = cols;
  op.rptr.assign(rows + 1, 0);
  for (std::size_t k = 0; k < t.size();) {
    std::size_t j = k;
    double s = 0.0;
    while (j < t.size() && t[j].r == t[k].r && t[j].c == t[k].c) s += t[j++].v;
    if (s != 0.0) {
      op.cidx.push_back(t[k].c);
      op.val.push_back(s);
      op.rptr[t[k].r + 1]++;
    }
    k = j;
  }
  for (int r = 0; r < rows; ++r) op.rptr[r + 1] += op.rptr[r];
  return op;
}

// 1D first-derivative stencil at index i of an n-point uniform axis:
// central interior, second-order one-sided at the ends.
void d1_stencil(int n, int i, double inv_d, std::vector<std::pair<int, double>>& out) {
  out.clear();
  if (i == 0) {
    out = {{0, -1.5 * inv_d}, {1, 2.0 * inv_d}, {2, -0.5 * inv_d}};
  } else if (i == n - 1) {
    out = {{n - 1, 1.5 * inv_d}, {n - 2, -2.0 * inv_d}, {n - 3, 0.5 * inv_d}};
  } else {
    out = {{i - 1, -0.5 * inv_d}, {i + 1, 0.5 * inv_d}};
  }
}

// 1D second derivative: interior (1,-2,1), boundary one-sided 4-point
// (second order) when the axis is long enough.
void d2_stencil(int n, int i, double inv_d2, std::vector<std::pair<int, double>>& out) {
  out.clear();
  if (i == 0) {
    if (n >= 4)
      out = {{0, 2.0 * inv_d2}, {1, -5.0 * inv_d2}, {2, 4.0 * inv_d2}, {3, -1.0 * inv_d2}};
    else
      out = {{0, inv_d2}, {1, -2.0 * inv_d2}, {2, inv_d2}};
  } else if (i == n - 1) {
    if (n >= 4)
      out = {{n - 1, 2.0 * inv_d2}, {n - 2, -5.0 * inv_d2}, {n - 3, 4.0 * inv_d2}, {n - 4, -1.0 * inv_d2}};
    else
      out = {{n - 1, inv_d2}, {n - 2, -2.0 * inv_d2}, {n - 3, inv_d2}};
  } else {
    out = {{i - 1, inv_d2}, {i, -2.0 * inv_d2}, {i + 1, inv_d2}};
  }
}

// periodic central first derivative
void d1_periodic_stencil(int n, int i, double inv_d, std::vector<std::pair<int, double>>& out) {
  out.clear();
  const int im = (i + n - 1) % n;
  const int ip = (i + 1) % n;
  out = {{im, -0.5 * inv_d}, {ip, 0.5 * inv_d}};
}

}  // namespace

std::vector<double> LinOp::apply(std::span<const double> x) const {
  std::vector<double> out(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (int k = rptr[r]; k < rptr[r + 1]; ++k) s += val[k] * x[cidx[k]];
    out[r] = s;
  }
  return out;
}

void LinOp::add_transpose_apply(std::span<const double> y, double s, std::span<double> out) const {
  for (int r = 0; r < rows; ++r) {
    const double yr = s * y[r];
    if (yr == 0.0) continue;
    for (int k = rptr[r]; k < rptr[r + 1]; ++k) out[cidx[k]] += val[k] * yr;
  }
}

LinOp LinOp::compose(const LinOp& a, const LinOp& b) {
  if (a.cols != b.rows) throw std::invalid_argument("LinOp::compose: shape mismatch");
  std::vector<Triplet> t;
  t.reserve(a.val.size() * 4);
  for (int r = 0; r < a.rows; ++r)
    for (int k = a.rptr[r]; k < a.rptr[r + 1]; ++k) {
      const int m = a.cidx[k];
      const double av = a.val[k];
      for (int j = b.rptr[m]; j < b.rptr[m + 1]; ++j)
        t.push_back({r, b.cidx[j], av * b.val[j]});
    }
  return from_triplets(a.rows, b.cols, std::move(t));
}

LinOp LinOp::add(const LinOp& a, const LinOp& b, double sa, double sb) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("LinOp::add: shape mismatch");
  std::vector<Triplet> t;
  t.reserve(a.val.size() + b.val.size());
  for (int r = 0; r < a.rows; ++r) {
    for (int k = a.rptr[r]; k < a.rptr[r + 1]; ++k) t.push_back({r, a.cidx[k], sa * a.val[k]});
    for (int k = b.rptr[r]; k < b.rptr[r + 1]; ++k) t.push_back({r, b.cidx[k], sb * b.val[k]});
  }
  return from_triplets(a.rows, a.cols, std::move(t));
}

LinOp LinOp::scaled_rows(std::span<const double> d) const {
  LinOp out = *this;
  for (int r = 0; r < rows; ++r)
    for (int k = rptr[r]; k < rptr[r + 1]; ++k) out.val[k] = val[k] * d[r];
  return out;
}

Grid Grid::make_rectangle(double x0, double x1, double y0, double y1, int nx, int ny) {
  if (nx < 3 || ny < 3) throw std::invalid_argument("Grid: need at least 3 nodes per axis");
  if (!(x1 > x0 && y1 > y0)) throw std::invalid_argument("Grid: degenerate rectangle");
  Grid g;
  g.kind_ = Kind::rectangle;
  g.x0_ = x0; g.x1_ = x1; g.y0_ = y0; g.y1_ = y1;
  g.nx_ = nx; g.ny_ = ny;
  const double dx = (x1 - x0) / (nx - 1);
  const double dy = (y1 - y0) / (ny - 1);
  g.spacing_ = std::max(dx, dy);
  const int n = nx * ny;
  g.xs_.resize(n); g.ys_.resize(n); g.qw_.resize(n);
  g.bflag_.assign(n, 0);
  g.inner_of_.assign(n, -1);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int id = iy * nx + ix;
      g.xs_[id] = x0 + ix * dx;
      g.ys_[id] = y0 + iy * dy;
      const double wx = (ix == 0 || ix == nx - 1) ? 0.5 * dx : dx;
      const double wy = (iy == 0 || iy == ny - 1) ? 0.5 * dy : dy;
      g.qw_[id] = wx * wy;
      const bool bx = (ix == 0 || ix == nx - 1);
      const bool by = (iy == 0 || iy == ny - 1);
      if (bx || by) {
        g.bflag_[id] = 1;
        g.bnodes_.push_back(id);
        int jx = ix == 0 ? 1 : (ix == nx - 1 ? nx - 2 : ix);
        int jy = iy == 0 ? 1 : (iy == ny - 1 ? ny - 2 : iy);
        g.inner_of_[id] = jy * nx + jx;
      }
    }
  // boundary quadrature, edge by edge; corner nodes enter twice
  auto edge_w = [](int i, int m, double d) { return (i == 0 || i == m - 1) ? 0.5 * d : d; };
  for (int ix = 0; ix < nx; ++ix) {  // bottom, top
    g.bquad_.push_back({ix, edge_w(ix, nx, dx), {0, -1}, {1, 0}});
    g.bquad_.push_back({(ny - 1) * nx + ix, edge_w(ix, nx, dx), {0, 1}, {-1, 0}});
  }
  for (int iy = 0; iy < ny; ++iy) {  // left, right
    g.bquad_.push_back({iy * nx, edge_w(iy, ny, dy), {-1, 0}, {0, -1}});
    g.bquad_.push_back({iy * nx + nx - 1, edge_w(iy, ny, dy), {1, 0}, {0, 1}});
  }
  // differential operators
  std::vector<Triplet> tx, ty, txx, tyy;
  std::vector<std::pair<int, double>> st;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int id = iy * nx + ix;
      d1_stencil(nx, ix, 1.0 / dx, st);
      for (auto& [j, v] : st) tx.push_back({id, iy * nx + j, v});
      d1_stencil(ny, iy, 1.0 / dy, st);
      for (auto& [j, v] : st) ty.push_back({id, j * nx + ix, v});
      d2_stencil(nx, ix, 1.0 / (dx * dx), st);
      for (auto& [j, v] : st) txx.push_back({id, iy * nx + j, v});
      d2_stencil(ny, iy, 1.0 / (dy * dy), st);
      for (auto& [j, v] : st) tyy.push_back({id, j * nx + ix, v});
    }
  g.dx_ = from_triplets(n, n, std::move(tx));
  g.dy_ = from_triplets(n, n, std::move(ty));
  g.dxx_ = from_triplets(n, n, std::move(txx));
  g.dyy_ = from_triplets(n, n, std::move(tyy));
  g.dxy_ = LinOp::compose(g.dx_, g.dy_);  // axes commute on a tensor grid
  return g;
}

Grid Grid::make_annulus(double r1, double r2, int nr, int ntheta) {
  if (!(r1 > 0.0 && r2 > r1)) throw std::invalid_argument("Grid: annulus needs 0 < R1 < R2");
  if (nr < 3 || ntheta < 3) throw std::invalid_argument("Grid: need at least 3 nodes per axis");
  Grid g;
  g.kind_ = Kind::annulus;
  g.r1_ = r1; g.r2_ = r2; g.nr_ = nr; g.ntheta_ = ntheta;
  const double dr = (r2 - r1) / (nr - 1);
  const double dt = 2.0 * std::numbers::pi / ntheta;
  g.spacing_ = std::max(dr, r2 * dt);
  const int n = nr * ntheta;
  g.xs_.resize(n); g.ys_.resize(n); g.qw_.resize(n);
  g.bflag_.assign(n, 0);
  g.inner_of_.assign(n, -1);
  for (int ir = 0; ir < nr; ++ir) {
    const double r = r1 + ir * dr;
    const double wr = (ir == 0 || ir == nr - 1) ? 0.5 * dr : dr;
    for (int it = 0; it < ntheta; ++it) {
      const int id = ir * ntheta + it;
      const double th = it * dt;
      g.xs_[id] = r * std::cos(th);
      g.ys_[id] = r * std::sin(th);
      g.qw_[id] = wr * r * dt;
      if (ir == 0 || ir == nr - 1) {
        g.bflag_[id] = 1;
        g.bnodes_.push_back(id);
        g.inner_of_[id] = (ir == 0 ? 1 : nr - 2) * ntheta + it;
        const double sgn = ir == 0 ? -1.0 : 1.0;
        Vec2 nrm{sgn * std::cos(th), sgn * std::sin(th)};
        g.bquad_.push_back({id, r * dt, nrm, {-nrm.y, nrm.x}});
      }
    }
  }
  // polar first derivatives, then Cartesian components
  std::vector<Triplet> tr, tt;
  std::vector<std::pair<int, double>> st;
  for (int ir = 0; ir < nr; ++ir)
    for (int it = 0; it < ntheta; ++it) {
      const int id = ir * ntheta + it;
      d1_stencil(nr, ir, 1.0 / dr, st);
      for (auto& [j, v] : st) tr.push_back({id, j * ntheta + it, v});
      d1_periodic_stencil(ntheta, it, 1.0 / dt, st);
      for (auto& [j, v] : st) tt.push_back({id, ir * ntheta + j, v});
    }
  const LinOp Dr = from_triplets(n, n, std::move(tr));
  const LinOp Dt = from_triplets(n, n, std::move(tt));
  std::vector<double> cs(n), sn(n), cs_r(n), sn_r(n);
  for (int ir = 0; ir < nr; ++ir) {
    const double r = r1 + ir * dr;
    for (int it = 0; it < ntheta; ++it) {
      const int id = ir * ntheta + it;
      const double th = it * dt;
      cs[id] = std::cos(th);
      sn[id] = std::sin(th);
      cs_r[id] = cs[id] / r;
      sn_r[id] = sn[id] / r;
    }
  }
  g.dx_ = LinOp::add(Dr.scaled_rows(cs), Dt.scaled_rows(sn_r), 1.0, -1.0);
  g.dy_ = LinOp::add(Dr.scaled_rows(sn), Dt.scaled_rows(cs_r), 1.0, 1.0);
  g.dxx_ = LinOp::compose(g.dx_, g.dx_);
  g.dyy_ = LinOp::compose(g.dy_, g.dy_);
  g.dxy_ = LinOp::add(LinOp::compose(g.dx_, g.dy_), LinOp::compose(g.dy_, g.dx_), 0.5, 0.5);
  return g;
}

int Grid::interior_neighbor(int bnode) const {
  const int j = inner_of_[bnode];
  if (j < 0) throw std::invalid_argument("Grid::interior_neighbor: not a boundary node");
  return j;
}

BoundarySpec BoundarySpec::free_plate() { return {BcClass::A2, {}}; }

BoundarySpec BoundarySpec::whole_boundary(const Grid& g, BcClass c) {
  BoundarySpec bc;
  bc.cls = c;
  bc.gamma.assign(g.num_nodes(), 0);
  for (int b : g.boundary_nodes()) bc.gamma[b] = 1;
  return bc;
}

BoundarySpec BoundarySpec::from_predicate(const Grid& g, BcClass c,
                                          const std::function<bool(double, double)>& on_gamma) {
  BoundarySpec bc;
  bc.cls = c;
  bc.gamma.assign(g.num_nodes(), 0);
  for (int b : g.boundary_nodes())
    if (on_gamma(g.x(b), g.y(b))) bc.gamma[b] = 1;
  return bc;
}

void BoundarySpec::validate(const Grid& g) const {
  if (cls == BcClass::A2) return;
  bool any = false;
  for (int b : g.boundary_nodes())
    if (!gamma.empty() && gamma[b]) { any = true; break; }
  if (!any) throw std::invalid_argument("BoundarySpec: A0/A1 require a nonempty Gamma");
}

std::vector<int> BoundarySpec::constrained_nodes(const Grid& g) const {
  std::vector<int> out;
  if (cls == BcClass::A2) return out;
  validate(g);
  std::vector<std::uint8_t> mark(g.num_nodes(), 0);
  for (int b : g.boundary_nodes())
    if (gamma[b]) {
      mark[b] = 1;
      if (cls == BcClass::A0) mark[g.interior_neighbor(b)] = 1;
    }
  for (int i = 0; i < g.num_nodes(); ++i)
    if (mark[i]) out.push_back(i);
  return out;
}

VectorField2 grad_scalar(const Grid& g, const ScalarField& w) {
  VectorField2 out;
  out.x = g.dx().apply(w);
  out.y = g.dy().apply(w);
  return out;
}

Sym2Field hessian_scalar(const Grid& g, const ScalarField& w) {
  const auto h11 = g.dxx().apply(w);
  const auto h22 = g.dyy().apply(w);
  const auto h12 = g.dxy().apply(w);
  Sym2Field out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = {h11[i], h12[i], h22[i]};
  return out;
}

Sym2Field sym_grad_vector(const Grid& g, const VectorField2& u) {
  const auto u1x = g.dx().apply(u.x);
  const auto u1y = g.dy().apply(u.x);
  const auto u2x = g.dx().apply(u.y);
  const auto u2y = g.dy().apply(u.y);
  Sym2Field out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = {u1x[i], 0.5 * (u1y[i] + u2x[i]), u2y[i]};
  return out;
}

Sym2Field stretching(const Grid& g, const VectorField2& u, const ScalarField& w) {
  Sym2Field e = sym_grad_vector(g, u);
  const auto dw = grad_scalar(g, w);
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i].a11 += 0.5 * dw.x[i] * dw.x[i];
    e[i].a12 += 0.5 * dw.x[i] * dw.y[i];
    e[i].a22 += 0.5 * dw.y[i] * dw.y[i];
  }
  return e;
}

double integrate(const Grid& g, const ScalarField& f) {
  double s = 0.0;
  const auto& q = g.quad_weights();
  for (std::size_t i = 0; i < f.size(); ++i) s += q[i] * f[i];
  return s;
}

double boundary_integrate(const Grid& g, const ScalarField& f) {
  double s = 0.0;
  for (const auto& b : g.boundary_quad()) s += b.weight * f[b.node];
  return s;
}

ScalarField apply_bc(const Grid& g, const ScalarField& w, const BoundarySpec& bc) {
  ScalarField out = w;
  for (int i : bc.constrained_nodes(g)) out[i] = 0.0;
  return out;
}

ScalarField project_bc_grad(const Grid& g, const ScalarField& grad_w, const BoundarySpec& bc) {
  ScalarField out = grad_w;
  for (int i : bc.constrained_nodes(g)) out[i] = 0.0;
  return out;
}

VectorField2 rigid_project(const Grid& g, const VectorField2& u) {
  const int n = g.num_nodes();
  const auto& q = g.quad_weights();
  // basis: (1,0), (0,1), (-y, x)
  double gram[3][3] = {};
  double rhs[3] = {};
  for (int i = 0; i < n; ++i) {
    const double xi = g.x(i), yi = g.y(i), qi = q[i];
    gram[0][0] += qi;
    gram[1][1] += qi;
    gram[0][2] += qi * (-yi);
    gram[1][2] += qi * xi;
    gram[2][2] += qi * (xi * xi + yi * yi);
    rhs[0] += qi * u.x[i];
    rhs[1] += qi * u.y[i];
    rhs[2] += qi * (-yi * u.x[i] + xi * u.y[i]);
  }
  gram[2][0] = gram[0][2];
  gram[2][1] = gram[1][2];
  gram[1][0] = gram[0][1];
  // 3x3 solve by Gaussian elimination
  double a[3][4] = {{gram[0][0], gram[0][1], gram[0][2], rhs[0]},
                    {gram[1][0], gram[1][1], gram[1][2], rhs[1]},
                    {gram[2][0], gram[2][1], gram[2][2], rhs[2]}};
  for (int c = 0; c < 3; ++c) {
    int p = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
    }
  }
  const double c0 = a[0][3] / a[0][0], c1 = a[1][3] / a[1][1], c2 = a[2][3] / a[2][2];
  VectorField2 out(n);
  for (int i = 0; i < n; ++i) {
    out.x[i] = c0 - c2 * g.y(i);
    out.y[i] = c1 + c2 * g.x(i);
  }
  return out;
}

}  // namespace fvk
