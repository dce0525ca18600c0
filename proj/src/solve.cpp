#include "fvk/solve.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace fvk {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double nrm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(double s, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

}  // namespace

void seed_noise(const Grid& g, const BoundarySpec& bc, double amplitude,
                std::uint64_t seed, VectorField2& u, ScalarField& w) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  for (int i = 0; i < g.num_nodes(); ++i) {
    u.x[i] += dist(rng);
    u.y[i] += dist(rng);
    w[i] += dist(rng);
  }
  w = apply_bc(g, w, bc);
}

SolveReport minimize(const Grid& g, const Material& m, const LoadSpec& load,
                     const BoundarySpec& bc, VectorField2& u, ScalarField& w,
                     const SolveOptions& opts) {
  bc.validate(g);
  const int n = g.num_nodes();
  const bool fix_w_mean = bc.constrained_nodes(g).empty();

  if (opts.noise_amplitude > 0.0) seed_noise(g, bc, opts.noise_amplitude, opts.seed, u, w);
  w = apply_bc(g, w, bc);

  auto pack = [n](const VectorField2& uu, const ScalarField& ww) {
    std::vector<double> x(3 * n);
    std::copy(uu.x.begin(), uu.x.end(), x.begin());
    std::copy(uu.y.begin(), uu.y.end(), x.begin() + n);
    std::copy(ww.begin(), ww.end(), x.begin() + 2 * n);
    return x;
  };
  auto unpack = [n](const std::vector<double>& x, VectorField2& uu, ScalarField& ww) {
    std::copy(x.begin(), x.begin() + n, uu.x.begin());
    std::copy(x.begin() + n, x.begin() + 2 * n, uu.y.begin());
    std::copy(x.begin() + 2 * n, x.end(), ww.begin());
  };

  // gauge: rigid motions of u are flat directions; the mean of w too when
  // no node is kinematically frozen
  auto gauge = [&](std::vector<double>& x) {
    VectorField2 uu(n);
    ScalarField ww(n);
    unpack(x, uu, ww);
    const VectorField2 r = rigid_project(g, uu);
    for (int i = 0; i < n; ++i) {
      uu.x[i] -= r.x[i];
      uu.y[i] -= r.y[i];
    }
    if (fix_w_mean) {
      double area = 0.0, mean = 0.0;
      const auto& q = g.quad_weights();
      for (int i = 0; i < n; ++i) {
        area += q[i];
        mean += q[i] * ww[i];
      }
      mean /= area;
      for (int i = 0; i < n; ++i) ww[i] -= mean;
    }
    x = pack(uu, ww);
  };

  VectorField2 uu = u;
  ScalarField ww = w;
  auto eval = [&](const std::vector<double>& x, std::vector<double>* grad) {
    unpack(x, uu, ww);
    if (grad) {
      VectorField2 gu;
      ScalarField gw;
      energy_gradient(g, uu, ww, m, load, bc, gu, gw);
      *grad = pack(gu, gw);
    }
    return total_energy(g, uu, ww, m, load).total;
  };

  std::vector<double> x = pack(u, w);
  gauge(x);

  SolveReport rep;
  std::vector<double> grad;
  double e = eval(x, &grad);
  if (!std::isfinite(e)) throw std::runtime_error("minimize: non-finite initial energy");
  rep.energy_history.push_back(e);
  const double floor = -opts.energy_floor_scale * std::abs(e + 1.0);

  std::deque<std::vector<double>> sk, yk;
  std::vector<double> dir(3 * n), x_new(3 * n), grad_new;

  for (int it = 0; it < opts.max_iters; ++it) {
    const double gn = nrm(grad);
    rep.final_residual = gn;
    if (gn < opts.grad_tol) {
      rep.converged = true;
      break;
    }
    if (e < floor) {
      rep.diverging = true;
      break;
    }

    // two-loop recursion
    dir = grad;
    std::vector<double> alpha(sk.size());
    for (int i = static_cast<int>(sk.size()) - 1; i >= 0; --i) {
      const double rho = 1.0 / dot(yk[i], sk[i]);
      alpha[i] = rho * dot(sk[i], dir);
      axpy(-alpha[i], yk[i], dir);
    }
    if (!sk.empty()) {
      const auto& s = sk.back();
      const auto& y = yk.back();
      const double scale = dot(s, y) / dot(y, y);
      for (auto& d : dir) d *= scale;
    }
    for (std::size_t i = 0; i < sk.size(); ++i) {
      const double rho = 1.0 / dot(yk[i], sk[i]);
      const double beta = rho * dot(yk[i], dir);
      axpy(alpha[i] - beta, sk[i], dir);
    }
    for (auto& d : dir) d = -d;

    double slope = dot(grad, dir);
    if (!(slope < 0.0)) {  // not a descent direction: fall back
      sk.clear();
      yk.clear();
      dir = grad;
      for (auto& d : dir) d = -d;
      slope = -gn * gn;
    }

    // backtracking Armijo line search
    double t = sk.empty() ? std::min(1.0, 1.0 / gn) : 1.0;
    double e_new = e;
    bool accepted = false;
    while (t > 1e-20) {
      x_new = x;
      axpy(t, dir, x_new);
      gauge(x_new);
      e_new = eval(x_new, nullptr);
      if (std::isfinite(e_new) && e_new <= e + opts.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) break;

    eval(x_new, &grad_new);
    if (opts.memory > 0) {
      std::vector<double> s = x_new, y = grad_new;
      axpy(-1.0, x, s);
      axpy(-1.0, grad, y);
      if (dot(s, y) > 1e-14 * nrm(s) * nrm(y)) {
        sk.push_back(std::move(s));
        yk.push_back(std::move(y));
        if (static_cast<int>(sk.size()) > opts.memory) {
          sk.pop_front();
          yk.pop_front();
        }
      }
    }
    x = x_new;
    grad = grad_new;
    e = e_new;
    rep.energy_history.push_back(e);
    rep.iterations = it + 1;
    rep.final_residual = nrm(grad);
  }

  unpack(x, u, w);
  return rep;
}

std::pair<VectorField2, double> membrane_correction(const Grid& g, const ScalarField& w,
                                                    const Material& m) {
  const int n = g.num_nodes();
  const auto& q = g.quad_weights();
  const auto dw = grad_scalar(g, w);
  Sym2Field pre(n);
  for (int i = 0; i < n; ++i) pre[i] = 0.5 * Sym2::outer({dw.x[i], dw.y[i]});

  // gradient of Q_w at z, assembled like the membrane part of the energy
  auto grad_q = [&](const VectorField2& z) {
    Sym2Field d = sym_grad_vector(g, z);
    for (int i = 0; i < n; ++i) d[i] = d[i] + pre[i];
    std::vector<double> a(n), b(n), c(n);
    for (int i = 0; i < n; ++i) {
      const Sym2 gi = energy_density_grad(d[i], m);
      a[i] = q[i] * gi.a11;
      b[i] = q[i] * gi.a12;
      c[i] = q[i] * gi.a22;
    }
    VectorField2 out(n);
    g.dx().add_transpose_apply(a, 1.0, out.x);
    g.dy().add_transpose_apply(b, 1.0, out.x);
    g.dx().add_transpose_apply(b, 1.0, out.y);
    g.dy().add_transpose_apply(c, 1.0, out.y);
    return out;
  };
  auto deflate = [&](VectorField2& z) {
    const VectorField2 r = rigid_project(g, z);
    for (int i = 0; i < n; ++i) {
      z.x[i] -= r.x[i];
      z.y[i] -= r.y[i];
    }
  };
  auto vdot = [n](const VectorField2& a, const VectorField2& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a.x[i] * b.x[i] + a.y[i] * b.y[i];
    return s;
  };

  // CG on A z = -b where grad_q(z) = A z + b, quotienting rigid motions
  VectorField2 z(n);
  VectorField2 b0 = grad_q(VectorField2(n));
  deflate(b0);
  VectorField2 r(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = -b0.x[i];
    r.y[i] = -b0.y[i];
  }
  const double r0 = std::sqrt(vdot(r, r));
  if (r0 > 0.0) {
    VectorField2 p = r;
    double rr = vdot(r, r);
    const int cap = 20 * n;
    int it = 0;
    for (; it < cap; ++it) {
      VectorField2 ap = grad_q(p);
      for (int i = 0; i < n; ++i) {
        ap.x[i] -= b0.x[i];
        ap.y[i] -= b0.y[i];
      }
      deflate(ap);
      const double alpha = rr / vdot(p, ap);
      for (int i = 0; i < n; ++i) {
        z.x[i] += alpha * p.x[i];
        z.y[i] += alpha * p.y[i];
        r.x[i] -= alpha * ap.x[i];
        r.y[i] -= alpha * ap.y[i];
      }
      deflate(r);
      const double rr_new = vdot(r, r);
      if (std::sqrt(rr_new) < 1e-10 * r0) break;
      const double beta = rr_new / rr;
      rr = rr_new;
      for (int i = 0; i < n; ++i) {
        p.x[i] = r.x[i] + beta * p.x[i];
        p.y[i] = r.y[i] + beta * p.y[i];
      }
    }
    if (it == cap) throw std::runtime_error("membrane_correction: CG did not converge");
    deflate(z);
  }

  Sym2Field d = sym_grad_vector(g, z);
  double qmin = 0.0;
  for (int i = 0; i < n; ++i) qmin += q[i] * energy_density(d[i] + pre[i], m);
  return {z, qmin};
}

std::vector<bool> uniform_ps_check(const Grid& g, const std::vector<PsElement>& seq,
                                   const Material& m, const LoadSpec& load,
                                   const BoundarySpec& bc, double bound, double min_ref) {
  std::vector<bool> flags;
  double prev = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& el = seq[k];
    const double en = scaled_energy(g, el.u, el.w, m, load, el.eps, min_ref);
    ScalarField ew(el.w.size());
    for (std::size_t i = 0; i < ew.size(); ++i) ew[i] = el.eps * el.w[i];
    VectorField2 gu;
    ScalarField gw;
    energy_gradient(g, el.u, ew, m, load, bc, gu, gw);
    double s = 0.0;
    const double su = 1.0 / (el.eps * el.eps), sw = 1.0 / el.eps;
    for (std::size_t i = 0; i < gw.size(); ++i)
      s += su * su * (gu.x[i] * gu.x[i] + gu.y[i] * gu.y[i]) + sw * sw * gw[i] * gw[i];
    const double res = std::sqrt(s);
    bool ok = en <= bound;
    if (k > 0 && res > prev * 1.05) ok = false;  // small slack for the FD floor
    flags.push_back(ok);
    prev = res;
  }
  return flags;
}

double poincare_constant(const Grid& g) {
  const int n = g.num_nodes();
  const auto& q = g.quad_weights();
  double area = 0.0;
  for (double w : q) area += w;

  auto stiffness = [&](const std::vector<double>& v) {
    auto vx = g.dx().apply(v);
    auto vy = g.dy().apply(v);
    for (int i = 0; i < n; ++i) {
      vx[i] *= q[i];
      vy[i] *= q[i];
    }
    std::vector<double> out(n, 0.0);
    g.dx().add_transpose_apply(vx, 1.0, out);
    g.dy().add_transpose_apply(vy, 1.0, out);
    return out;
  };
  auto remove_mean = [&](std::vector<double>& v) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += q[i] * v[i];
    mean /= area;
    for (auto& vi : v) vi -= mean;
  };
  // conjugate gradients for K x = b, b orthogonal to constants
  auto solve = [&](const std::vector<double>& b) {
    std::vector<double> x(n, 0.0), r = b, p = b;
    double rr = dot(r, r);
    const double r0 = std::sqrt(rr);
    for (int it = 0; it < 20 * n && std::sqrt(rr) > 1e-12 * r0; ++it) {
      auto ap = stiffness(p);
      const double alpha = rr / dot(p, ap);
      axpy(alpha, p, x);
      axpy(-alpha, ap, r);
      const double rr_new = dot(r, r);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    remove_mean(x);
    return x;
  };

  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = std::sin(1.0 + i);
  remove_mean(v);
  double mu = 0.0;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> mv(n);
    double vmv = 0.0;
    for (int i = 0; i < n; ++i) {
      mv[i] = q[i] * v[i];
      vmv += v[i] * mv[i];
    }
    auto x = solve(mv);
    double xmx = 0.0, xmv = 0.0;
    for (int i = 0; i < n; ++i) {
      xmx += q[i] * x[i] * x[i];
      xmv += q[i] * x[i] * v[i];
    }
    const double mu_new = xmv / xmx;  // Rayleigh quotient of the iterate
    const double scale = 1.0 / std::sqrt(xmx);
    for (int i = 0; i < n; ++i) v[i] = x[i] * scale;
    if (it > 2 && std::abs(mu_new - mu) < 1e-10 * std::abs(mu_new)) {
      mu = mu_new;
      break;
    }
    mu = mu_new;
  }
  if (!(mu > 0.0)) throw std::runtime_error("poincare_constant: iteration failed");
  return 1.0 / mu;
}

double compression_threshold(const Material& m, const Grid& g) {
  const auto [c_nu, C_nu] = coercivity_constants(m.poisson);
  (void)C_nu;
  const double k = poincare_constant(g);
  return -m.thickness * m.thickness * c_nu * m.young / (12.0 * k);
}

std::vector<BucklingMode> buckling_critical(BucklingBc bc, double x0, double x1,
                                            int nodes, int n_modes) {
  if (nodes < 10) throw std::invalid_argument("buckling_critical: too few nodes");
  const int n = nodes;
  const double d = (x1 - x0) / (n - 1);
  Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      d1(0, 0) = -1.5; d1(0, 1) = 2.0; d1(0, 2) = -0.5;
      d2(0, 0) = 2.0; d2(0, 1) = -5.0; d2(0, 2) = 4.0; d2(0, 3) = -1.0;
    } else if (i == n - 1) {
      d1(i, i) = 1.5; d1(i, i - 1) = -2.0; d1(i, i - 2) = 0.5;
      d2(i, i) = 2.0; d2(i, i - 1) = -5.0; d2(i, i - 2) = 4.0; d2(i, i - 3) = -1.0;
    } else {
      d1(i, i - 1) = -0.5; d1(i, i + 1) = 0.5;
      d2(i, i - 1) = 1.0; d2(i, i) = -2.0; d2(i, i + 1) = 1.0;
    }
  }
  d1 /= d;
  d2 /= d * d;
  Eigen::VectorXd q = Eigen::VectorXd::Constant(n, d);
  q(0) = q(n - 1) = 0.5 * d;

  Eigen::MatrixXd a = d2.transpose() * q.asDiagonal() * d2;
  Eigen::MatrixXd b = d1.transpose() * q.asDiagonal() * d1;

  // basis Z of the constrained subspace: columns are admissible nodal shapes.
  // supported: drop the end nodes. clamped: additionally slave the first
  // interior node to the second so the one-sided derivative -1.5w0+2w1-0.5w2
  // vanishes (second-order zero slope), i.e. w1 = w2/4.
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    const bool edge = (i == 0 || i == n - 1);
    const bool layer = (i <= 1 || i >= n - 2);
    if (bc == BucklingBc::clamped && layer) continue;
    if (bc == BucklingBc::supported && edge) continue;
    keep.push_back(i);
  }
  const int nk = static_cast<int>(keep.size());
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, nk);
  for (int j = 0; j < nk; ++j) z(keep[j], j) = 1.0;
  if (bc == BucklingBc::clamped) {
    z(1, 0) = 0.25;           // slaved to node 2
    z(n - 2, nk - 1) = 0.25;  // slaved to node n-3
  }

  Eigen::MatrixXd as = z.transpose() * a * z;
  Eigen::MatrixXd bs = z.transpose() * b * z;
  if (bc == BucklingBc::free_ends) {
    // constants span the kernel of B; a rank-one mass term makes the pencil
    // definite, the artificial mode lands at k ~ 0 and is filtered below
    Eigen::VectorXd qv = q;
    bs += qv * qv.transpose();
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(as, bs);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("buckling_critical: eigensolver failed");

  std::vector<BucklingMode> out;
  for (int j = 0; j < nk && static_cast<int>(out.size()) < n_modes; ++j) {
    const double k = es.eigenvalues()(j);
    if (std::abs(k) < 1e-8) continue;  // rigid/affine kernel
    BucklingMode mode;
    mode.k = k;
    mode.shape.assign(n, 0.0);
    Eigen::VectorXd full = z * es.eigenvectors().col(j);
    for (int i = 0; i < n; ++i) mode.shape[i] = full(i);
    out.push_back(std::move(mode));
  }
  return out;
}

double critical_thickness_compression(double k, double gamma, double a, double E, double nu) {
  return std::sqrt(12.0 * gamma * a * (1.0 - nu * nu) / (E * k));
}

double critical_thickness_shear(double k, double gamma, double E, double nu) {
  return std::sqrt(6.0 * gamma * (1.0 - nu * nu) / (E * k));
}

}  // namespace fvk
