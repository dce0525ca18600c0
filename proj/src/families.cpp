#include "fvk/families.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace fvk {

FamilyPair family_ce12(int n, const Grid& g) {
  if (n < 0) throw std::invalid_argument("family_ce12: negative index");
  const int nn = g.num_nodes();
  FamilyPair f{VectorField2(nn), ScalarField(nn, 0.0)};
  const double sn = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < nn; ++i) {
    const double s = 2.0 + g.x(i);
    f.u.x[i] = -n * s * s * s / 6.0;
    f.w[i] = sn * s * s / 2.0;
  }
  return f;
}

double ce14_psi(double t) {
  const double s = std::abs(t);
  if (s >= 1.0) return 0.0;
  if (s <= 0.25) return 0.75 - 2.0 * s * s;
  if (s <= 0.75) return 0.875 - s;
  return (1.0 - s) - 0.125 + 2.0 * (s - 0.75) * (s - 0.75);
}

double ce14_psi_prime(double t) {
  const double s = std::abs(t);
  double d;
  if (s >= 1.0) d = 0.0;
  else if (s <= 0.25) d = -4.0 * s;
  else if (s <= 0.75) d = -1.0;
  else d = -1.0 + 4.0 * (s - 0.75);
  return t >= 0.0 ? d : -d;
}

namespace {

// int_0^t |psi'|^2, odd in t
double ce14_psi_sq_int(double t) {
  const double s = std::min(std::abs(t), 1.0);
  double p;
  if (s <= 0.25) {
    p = 16.0 * s * s * s / 3.0;
  } else if (s <= 0.75) {
    p = 1.0 / 12.0 + (s - 0.25);
  } else {
    const double c = 1.0 - 4.0 * (s - 0.75);
    p = 1.0 / 12.0 + 0.5 + (1.0 - c * c * c) / 12.0;
  }
  return t >= 0.0 ? p : -p;
}

}  // namespace

FamilyPair family_ce14(int n, const Grid& g) {
  if (n < 0) throw std::invalid_argument("family_ce14: negative index");
  const int nn = g.num_nodes();
  FamilyPair f{VectorField2(nn), ScalarField(nn, 0.0)};
  const double sn = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < nn; ++i) {
    const double t = g.x(i) - g.y(i);
    // int_{-1}^{t} |psi'|^2 = 2/3 + int_0^t
    const double integral = 2.0 / 3.0 + ce14_psi_sq_int(t);
    f.u.x[i] = -0.5 * n * integral;
    f.u.y[i] = 0.5 * n * integral;
    f.w[i] = sn * ce14_psi(t);
  }
  return f;
}

FamilyPair family_remark13(int m, const Grid& g) {
  if (m < 0) throw std::invalid_argument("family_remark13: negative index");
  const int nn = g.num_nodes();
  FamilyPair f{VectorField2(nn), ScalarField(nn, 0.0)};
  for (int i = 0; i < nn; ++i) {
    const double s = g.x(i) + m;
    f.u.x[i] = -s * s * s / 6.0;
    f.w[i] = (s * s - static_cast<double>(m) * m) / 2.0;
  }
  return f;
}

FamilyPair family_ce33(int n, const Grid& g) {
  if (n < 1) throw std::invalid_argument("family_ce33: index must be >= 1");
  const double a = g.x1() - g.x0();
  const int nn = g.num_nodes();
  FamilyPair f{VectorField2(nn), ScalarField(nn, 0.0)};
  const double isn = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < nn; ++i) {
    const double x = g.x(i) - g.x0();
    const double y = g.y(i) - g.y0();
    const double ramp = std::max(0.0, std::min({n * x, 1.0, n * (a - x)}));
    double fy = std::fmod(n * y, 1.0);
    if (fy < 0.0) fy += 1.0;
    const double saw = 0.5 * (1.0 - std::abs(1.0 - 2.0 * fy));
    f.w[i] = isn * saw * ramp;
    f.u.y[i] = -0.5 * n * y;
  }
  return f;
}

LoadSpec ce33_load() {
  LoadSpec l;
  l.traction = [](double, double, const Vec2& n) {
    if (std::abs(n.y) > 0.5) return Vec2{0.0, -n.y};
    return Vec2{0.0, 0.0};
  };
  return l;
}

namespace {

// linear interpolation of a 1D nodal profile on [x0, x1]
double interp_1d(const std::vector<double>& v, double x0, double x1, double x) {
  const int n = static_cast<int>(v.size());
  const double f = (x - x0) / (x1 - x0) * (n - 1);
  if (f <= 0.0) return v[0];
  if (f >= n - 1) return v[n - 1];
  const int i = static_cast<int>(f);
  const double t = f - i;
  return (1.0 - t) * v[i] + t * v[i + 1];
}

void max_normalize(std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m > 0.0)
    for (double& x : v) x /= m;
}

}  // namespace

BuckledModeResult buckled_mode_compression(const Grid& g, int n, double gamma,
                                           double width, double E, double nu,
                                           int nodes_1d) {
  auto modes = buckling_critical(BucklingBc::clamped, 0.0, 1.0, nodes_1d, n);
  if (static_cast<int>(modes.size()) < n)
    throw std::runtime_error("buckled_mode_compression: mode not found");
  auto& mode = modes[n - 1];
  max_normalize(mode.shape);
  BuckledModeResult out;
  out.k = mode.k;
  out.h_critical = critical_thickness_compression(mode.k, gamma, width, E, nu);
  out.w.resize(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i)
    out.w[i] = interp_1d(mode.shape, 0.0, 1.0, g.y(i));
  return out;
}

BuckledModeResult buckled_mode_shear(const Grid& g, int n, double gamma,
                                     double E, double nu, int nodes_1d) {
  auto modes = buckling_critical(BucklingBc::clamped, -1.0, 1.0, nodes_1d, n);
  if (static_cast<int>(modes.size()) < n)
    throw std::runtime_error("buckled_mode_shear: mode not found");
  auto& mode = modes[n - 1];
  max_normalize(mode.shape);
  BuckledModeResult out;
  out.k = mode.k;
  out.h_critical = critical_thickness_shear(mode.k, gamma, E, nu);
  out.w.resize(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) {
    const double t = g.x(i) - g.y(i);
    out.w[i] = std::abs(t) >= 1.0 ? 0.0 : interp_1d(mode.shape, -1.0, 1.0, t);
  }
  return out;
}

namespace {

// convolution with a unit-mass bump supported on [-sigma, sigma]
double mollify(const std::function<double(double)>& f, double t, double sigma) {
  if (sigma <= 0.0) return f(t);
  constexpr int K = 41;
  double wsum = 0.0, val = 0.0;
  for (int i = 0; i < K; ++i) {
    const double u = -1.0 + (2.0 * i + 1.0) / K;
    const double w = std::exp(-1.0 / (1.0 - u * u));
    wsum += w;
    val += w * f(t - sigma * u);
  }
  return val / wsum;
}

}  // namespace

ScalarField family_radial_osc(const Grid& g, double a, double b, PressCase pc,
                              double nu, double beta, double sigma) {
  const double fb = std::floor(beta);
  if (fb < 1.0) throw std::invalid_argument("family_radial_osc: beta < 1");
  const double r1 = g.r1(), r2 = g.r2();
  const double period = r2 - r1;
  const double beff = (pc == PressCase::inner_leq_outer) ? b : -b;
  if (beff < 0.0)
    throw std::invalid_argument("family_radial_osc: sign of b inconsistent with the case");

  auto tent = [=](double t) {
    double tt = std::fmod(t - r1, period);
    if (tt < 0.0) tt += period;
    return std::max(0.0, std::min(tt - sigma, period - sigma - tt));
  };

  ScalarField zeta(g.num_nodes(), 0.0);
  for (int i = 0; i < g.num_nodes(); ++i) {
    const double r = std::hypot(g.x(i), g.y(i));
    const double rad = 2.0 * (1.0 - nu) * beff / (r * r) - 2.0 * a * (1.0 + nu);
    if (rad < -1e-12)
      throw std::invalid_argument("family_radial_osc: negative amplitude radicand");
    const double amp = std::sqrt(std::max(rad, 0.0));
    const double t = r1 + (r - r1) * fb;
    zeta[i] = amp * mollify(tent, t, sigma) / fb;
  }
  return zeta;
}

ScalarField family_tangential_osc(const Grid& g, double b, double nu, double beta,
                                  double sigma, double delta) {
  const double fb = std::floor(beta);
  if (fb < 1.0) throw std::invalid_argument("family_tangential_osc: beta < 1");
  if (!(b < 0.0)) throw std::invalid_argument("family_tangential_osc: requires b < 0");
  if (!(delta > 0.0)) throw std::invalid_argument("family_tangential_osc: requires delta > 0");
  const double amp = std::sqrt(-2.0 * b * (1.0 - nu));
  const double two_pi = 2.0 * std::numbers::pi;

  auto tent = [=](double t) {
    double tt = std::fmod(t, two_pi);
    if (tt < 0.0) tt += two_pi;
    return std::max(0.0, std::min(tt - sigma, two_pi - sigma - tt));
  };

  ScalarField zeta(g.num_nodes(), 0.0);
  for (int i = 0; i < g.num_nodes(); ++i) {
    const double r = std::hypot(g.x(i), g.y(i));
    const double theta = std::atan2(g.y(i), g.x(i));
    const double ramp = std::clamp((r - g.r1()) / delta, 0.0, 1.0);
    zeta[i] = amp * mollify(tent, fb * theta, sigma) * ramp / fb;
  }
  return zeta;
}

ScalingChoice optimal_scaling(OscKind kind, double alpha, double h,
                              double c_beta, double c_sigma, double sigma_exp) {
  if (!(h > 0.0)) throw std::invalid_argument("optimal_scaling: h must be positive");
  ScalingChoice sc;
  if (kind == OscKind::radial) {
    const double e_beta = (2.0 - alpha) / 3.0;
    if (sigma_exp < 0.0) sigma_exp = 5.0 / 3.0 * (2.0 - alpha);
    sc.beta = c_beta * std::pow(h, -e_beta);
    sc.sigma = c_sigma * std::pow(h, sigma_exp);
  } else {
    const double e_beta = 1.0 - alpha / 2.0;
    sc.beta = c_beta * std::pow(h, -e_beta);
    sc.delta = std::sqrt(1.0 / sc.beta);
    sc.sigma = sigma_exp < 0.0 ? c_sigma * std::pow(h, e_beta) * std::sqrt(sc.beta)
                               : c_sigma * std::pow(h, sigma_exp);
  }
  return sc;
}

}  // namespace fvk
