#include "fvk/relax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fvk {

double g_A(const Sym2& a, double nu, const Vec2& xi) {
  const Sym2 s = a + Sym2::outer(xi);
  const double tr = a.trace() + xi.dot(xi);
  return s.norm2() + nu / (1.0 - nu) * tr * tr;
}

MinGA min_gA(const Sym2& a, double nu) {
  if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("min_gA: nu out of (-1, 1/2)");
  const EigPair e = eig_sym2(a);
  MinGA out;
  const double t = nu * e.lam2 + e.lam1;
  if (t >= 0.0) {
    out.value = g_A(a, nu, {0.0, 0.0});
    out.xi_star = {0.0, 0.0};
  } else {
    out.value = (1.0 + nu) * e.lam2 * e.lam2;
    const double amp = std::sqrt(-t);
    out.xi_star = amp * e.v1;
  }
  return out;
}

namespace {

// 1D discrete Legendre transform: out[k] = max_j (s[k]*x[j] - f[j]).
void conj_1d(const std::vector<double>& x, const double* f, int n,
             const std::vector<double>& s, double* out) {
  for (std::size_t k = 0; k < s.size(); ++k) {
    double best = s[k] * x[0] - f[0];
    for (int j = 1; j < n; ++j) best = std::max(best, s[k] * x[j] - f[j]);
    out[k] = best;
  }
}

std::vector<double> slope_axis(double smax, int res) {
  std::vector<double> s(res);
  for (int i = 0; i < res; ++i) s[i] = -smax + 2.0 * smax * i / (res - 1);
  return s;
}

}  // namespace

double EnvelopeSamples::min_env() const {
  return *std::min_element(env.begin(), env.end());
}

double EnvelopeSamples::interpolate(const Vec2& xi) const {
  const double d = 2.0 * radius / (res - 1);
  double fx = (xi.x + radius) / d;
  double fy = (xi.y + radius) / d;
  if (fx < 0.0 || fy < 0.0 || fx > res - 1 || fy > res - 1)
    throw std::invalid_argument("EnvelopeSamples::interpolate: point outside the box");
  int ix = std::min(static_cast<int>(fx), res - 2);
  int iy = std::min(static_cast<int>(fy), res - 2);
  const double tx = fx - ix, ty = fy - iy;
  const auto at = [&](int i2, int i1) { return env[i2 * res + i1]; };
  return (1 - tx) * (1 - ty) * at(iy, ix) + tx * (1 - ty) * at(iy, ix + 1) +
         (1 - tx) * ty * at(iy + 1, ix) + tx * ty * at(iy + 1, ix + 1);
}

EnvelopeSamples convexify_2d(const Sym2& a, double nu, double radius, int res) {
  if (res < 5) throw std::invalid_argument("convexify_2d: resolution too small");
  if (res % 2 == 0) ++res;  // keep 0 on the axes so the minimum is preserved
  const MinGA mg = min_gA(a, nu);
  if (mg.xi_star.norm() > radius)
    throw std::invalid_argument("convexify_2d: radius does not contain the minimizer");

  EnvelopeSamples es;
  es.res = res;
  es.radius = radius;
  es.coord.resize(res);
  for (int i = 0; i < res; ++i) es.coord[i] = -radius + 2.0 * radius * i / (res - 1);
  es.g.resize(res * res);
  for (int i2 = 0; i2 < res; ++i2)
    for (int i1 = 0; i1 < res; ++i1)
      es.g[i2 * res + i1] = g_A(a, nu, {es.coord[i1], es.coord[i2]});

  // double Legendre transform, dimension by dimension
  const double d = 2.0 * radius / (res - 1);
  double s1max = 0.0, s2max = 0.0;
  for (int i2 = 0; i2 < res; ++i2)
    for (int i1 = 0; i1 + 1 < res; ++i1)
      s1max = std::max(s1max, std::abs(es.g[i2 * res + i1 + 1] - es.g[i2 * res + i1]) / d);
  for (int i1 = 0; i1 < res; ++i1)
    for (int i2 = 0; i2 + 1 < res; ++i2)
      s2max = std::max(s2max, std::abs(es.g[(i2 + 1) * res + i1] - es.g[i2 * res + i1]) / d);
  const auto s1 = slope_axis(s1max, res);
  const auto s2 = slope_axis(s2max, res);

  // h(i1, k2) = max_{i2} s2[k2]*x2 - f(i1, i2)
  std::vector<double> col(res), tmp(res), h(res * res), fstar(res * res);
  for (int i1 = 0; i1 < res; ++i1) {
    for (int i2 = 0; i2 < res; ++i2) col[i2] = es.g[i2 * res + i1];
    conj_1d(es.coord, col.data(), res, s2, tmp.data());
    for (int k2 = 0; k2 < res; ++k2) h[k2 * res + i1] = tmp[k2];
  }
  // fstar(k1, k2) = max_{i1} s1[k1]*x1 + h(i1, k2); reuse conj_1d on -h
  for (int k2 = 0; k2 < res; ++k2) {
    for (int i1 = 0; i1 < res; ++i1) col[i1] = -h[k2 * res + i1];
    conj_1d(es.coord, col.data(), res, s1, tmp.data());
    for (int k1 = 0; k1 < res; ++k1) fstar[k2 * res + k1] = tmp[k1];
  }
  // back: k(k1, i2) = max_{k2} x2*s2[k2] - fstar(k1, k2)
  std::vector<double> back(res * res);
  for (int k1 = 0; k1 < res; ++k1) {
    for (int k2 = 0; k2 < res; ++k2) col[k2] = fstar[k2 * res + k1];
    conj_1d(s2, col.data(), res, es.coord, tmp.data());
    for (int i2 = 0; i2 < res; ++i2) back[i2 * res + k1] = tmp[i2];
  }
  es.env.resize(res * res);
  for (int i2 = 0; i2 < res; ++i2) {
    for (int k1 = 0; k1 < res; ++k1) col[k1] = -back[i2 * res + k1];
    conj_1d(s1, col.data(), res, es.coord, tmp.data());
    for (int i1 = 0; i1 < res; ++i1) es.env[i2 * res + i1] = tmp[i1];
  }
  return es;
}

PrestressAnnulus annulus_prestress(double p1, double p2, double r1, double r2,
                                   const Material& m) {
  if (!(r1 > 0.0 && r2 > r1)) throw std::invalid_argument("annulus_prestress: need 0 < R1 < R2");
  PrestressAnnulus ps;
  ps.r1 = r1;
  ps.r2 = r2;
  ps.p1 = p1;
  ps.p2 = p2;
  const double den = m.young * (r2 * r2 - r1 * r1);
  ps.a = (1.0 - m.poisson) * (p2 * r2 * r2 - p1 * r1 * r1) / den;
  ps.b = (1.0 + m.poisson) * (p2 - p1) * r1 * r1 * r2 * r2 / den;
  return ps;
}

VectorField2 sample_prestress(const PrestressAnnulus& ps, const Grid& g) {
  VectorField2 out(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) {
    const Vec2 v = ps.v(g.x(i), g.y(i));
    out.x[i] = v.x;
    out.y[i] = v.y;
  }
  return out;
}

LoadSpec prestress_load(const PrestressAnnulus& ps) {
  LoadSpec l;
  const double rmid = 0.5 * (ps.r1 + ps.r2);
  const double p1 = ps.p1, p2 = ps.p2;
  l.traction = [rmid, p1, p2](double x, double y, const Vec2& n) {
    const double p = std::hypot(x, y) < rmid ? p1 : p2;
    return p * n;
  };
  return l;
}

StateClass classify_state(const Sym2Field& strain, const Material& m) {
  StateClass sc;
  sc.s1.resize(strain.size());
  sc.tensile.resize(strain.size());
  const double c = m.young / (1.0 - m.poisson * m.poisson);
  for (std::size_t i = 0; i < strain.size(); ++i) {
    const EigPair e = eig_sym2(strain[i]);
    sc.s1[i] = c * (m.poisson * e.lam2 + e.lam1);
    sc.tensile[i] = sc.s1[i] >= 0.0;
    (sc.tensile[i] ? sc.all_compressive : sc.all_tensile) = false;
  }
  return sc;
}

double relaxed_energy(const Grid& g, const VectorField2& v, const ScalarField& zeta,
                      const Material& m, const LoadSpec& load, int res) {
  const int n = g.num_nodes();
  const Sym2Field e = sym_grad_vector(g, v);
  const auto dz = grad_scalar(g, zeta);
  const auto& q = g.quad_weights();
  const double pref = m.young / (8.0 * (1.0 + m.poisson));
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const Sym2 a = 2.0 * e[i];
    const Vec2 xi{dz.x[i], dz.y[i]};
    const MinGA mg = min_gA(a, m.poisson);
    const double radius = 1.5 * std::max({xi.norm(), mg.xi_star.norm(), 1e-3});
    const EnvelopeSamples env = convexify_2d(a, m.poisson, radius, res);
    s += q[i] * pref * env.interpolate(xi);
  }
  return s - inplane_load_work(g, load, v);
}

double relaxed_min_energy(const Grid& g, const VectorField2& v, const Material& m,
                          const LoadSpec& load) {
  const Sym2Field e = sym_grad_vector(g, v);
  const auto& q = g.quad_weights();
  const double pref = m.young / (8.0 * (1.0 + m.poisson));
  double s = 0.0;
  for (int i = 0; i < g.num_nodes(); ++i)
    s += q[i] * pref * min_gA(2.0 * e[i], m.poisson).value;
  return s - inplane_load_work(g, load, v);
}

}  // namespace fvk
