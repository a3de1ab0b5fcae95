#include "asw/archwhittaker.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>

#include "asw/error.hpp"

namespace asw {

namespace bq = boost::math::quadrature;
using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_pole(double x) { return x <= 0 && std::abs(x - std::round(x)) < 1e-13; }

struct Counter {
  long n = 0;
  long budget = 0;
  void tick() {
    if (++n > budget) fail(ErrorKind::tolerance, "quadrature node budget exhausted");
  }
};

bool positive_definite(const RMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(m);
  return es.eigenvalues().minCoeff() > 0;
}

void check_sym(const RMatrix& m, const char* what) {
  require(m.rows() == m.cols() && m.rows() >= 1, std::string(what) + " must be square");
  require((m - m.transpose()).norm() <= 1e-12 * (1 + m.norm()), std::string(what) + " must be symmetric");
}

// int_0^inf e^{-z v} v^{p1-1} (v + c)^{p2-1} dv
QuadResult laplace_kernel(double z, double p1, double c, double p2, const QuadratureSpec& q) {
  require(z > 0 && p1 > 0 && c > 0, "kernel integral diverges");
  Counter cnt{0, q.node_budget};
  auto f = [&](double t) {
    cnt.tick();
    double v = t / z;
    if (v == 0 || !std::isfinite(v)) return 0.0;
    return std::exp(-t + (p1 - 1) * std::log(v) + (p2 - 1) * std::log(v + c));
  };
  bq::exp_sinh<double> es;
  double err = 0, l1 = 0;
  double val = es.integrate(f, 0.0, kInf, q.tolerance, &err, &l1);
  return {val / z, err / z, cnt.n};
}

QuadResult eta1(double y, double t, double alpha, double beta, const QuadratureSpec& q) {
  require(y > 0, "y must be positive");
  require(t != 0, "T must be nonzero");
  double at = std::abs(t);
  // v = u - |T|: v^{p1 - 1} (v + 2|T|)^{p2 - 1}
  double p1 = t > 0 ? beta : alpha, p2 = t > 0 ? alpha : beta;
  auto r = laplace_kernel(y, p1, 2 * at, p2, q);
  double sc = std::exp(-y * at);
  return {r.value * sc, r.err_estimate * sc, r.nodes_used};
}

// Integral over v > 0, v + 2D > 0 of e^{-tr(yv)} det(v)^{p} det(v + 2D)^{q'} dv with
// D = diag(d1, d2), d1 > 0. The factor e^{-tr(yD)} is not included.
QuadResult eta2_core(const RMatrix& y, double d1, double d2, double pexp, double qexp, const QuadratureSpec& q) {
  const double y11 = y(0, 0), y12 = y(0, 1), y22 = y(1, 1);
  const double dety = y11 * y22 - y12 * y12;
  require(y11 > 0 && dety > 0, "y must be positive definite");
  Counter cnt{0, q.node_budget};
  const double tol_in = std::max(q.tolerance * 1e-2, 1e-13);
  const double tol_mid = std::max(q.tolerance * 1e-1, 1e-12);
  bq::exp_sinh<double> es_a, es_w, es_d;
  bq::tanh_sinh<double> ts_w;
  bq::sinh_sinh<double> ss_w;

  // int_{max(0,d0)}^inf e^{-y22 d} d^p (d - d0)^q' dd
  auto inner = [&](double d0) {
    double dm = std::max(0.0, d0);
    auto f = [&](double t) {
      cnt.tick();
      double d = dm + t / y22;
      double g = d - d0;
      if (d <= 0 || g <= 0 || !std::isfinite(d)) return 0.0;
      return std::exp(-t + pexp * std::log(d) + qexp * std::log(g));
    };
    double err = 0;
    double v = es_d.integrate(f, 0.0, kInf, tol_in, &err);
    return v * std::exp(-y22 * dm) / y22;
  };

  auto h = [&](double x) {
    double a = x * y22 / dety;
    // below 1e-200 the integrand is O(a^-1/2) and the sliver is negligible
    if (a < 1e-200 || !std::isfinite(a)) return 0.0;
    double bc = -y12 * a / y22, sg = std::sqrt(a / y22);
    double pref = std::exp(-x + pexp * std::log(a) + qexp * std::log(a + 2 * d1)) * sg;
    auto gw = [&](double w) {
      // e^{-w^2} underflows long before this
      if (!(std::abs(w) < 40)) return 0.0;
      double b = bc + sg * w;
      double d0 = -2 * d2 - 2 * d1 * b * b / (a * (a + 2 * d1));
      return std::exp(-w * w) * inner(d0);
    };
    double err = 0, s = 0;
    if (d2 > 0) {
      s = ss_w.integrate(gw, tol_mid, &err);
    } else {
      double bb = std::sqrt(-d2 * a * (a + 2 * d1) / d1);
      double wl = (-bb - bc) / sg, wr = (bb - bc) / sg;
      s = ts_w.integrate(gw, wl, wr, tol_mid, &err);
      s += es_w.integrate([&](double t) { return gw(wr + t); }, 0.0, kInf, tol_mid, &err);
      s += es_w.integrate([&](double t) { return gw(wl - t); }, 0.0, kInf, tol_mid, &err);
    }
    return pref * s;
  };
  double err = 0, l1 = 0;
  double val = es_a.integrate(h, 0.0, kInf, q.tolerance, &err, &l1) * y22 / dety;
  double e = err * y22 / dety + tol_mid * std::abs(val);
  return {val, e, cnt.n};
}

QuadResult eta2(const RMatrix& y, const RMatrix& t, double alpha, double beta, const QuadratureSpec& q) {
  const double rho = 1.5;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(t);
  RMatrix r = es.eigenvectors();
  Eigen::Vector2d d = es.eigenvalues();
  require(std::abs(d(0)) > 1e-14 && std::abs(d(1)) > 1e-14, "T must be nonsingular");
  // u -> R u R^T preserves the measure and the cone; put a positive eigenvalue first.
  if (d(1) > 0 && d(0) < 0) {
    std::swap(d(0), d(1));
    r.col(0).swap(r.col(1));
  }
  RMatrix yr = r.transpose() * y * r;
  double a = alpha, b = beta;
  if (d(0) < 0) {
    // negative definite: u + T > 0 is the binding cone
    d = -d;
    std::swap(a, b);
  }
  double tr = yr(0, 0) * d(0) + yr(1, 1) * d(1);
  auto core = eta2_core(yr, d(0), d(1), b - rho, a - rho, q);
  double sc = std::exp(-tr);
  return {core.value * sc, core.err_estimate * sc, core.nodes_used};
}

double log_siegel_gamma_real(int n, double s) {
  double r = n * (n - 1) / 4.0 * std::log(pi);
  for (int k = 0; k < n; ++k) {
    require(s - k / 2.0 > 0, "Siegel gamma argument out of range");
    r += std::lgamma(s - k / 2.0);
  }
  return r;
}

}  // namespace

cplx siegel_gamma(int n, cplx s) {
  require(n >= 1, "n must be positive");
  cplx r = std::pow(pi, n * (n - 1) / 4.0);
  for (int k = 0; k < n; ++k) {
    cplx z = s - k / 2.0;
    if (std::abs(z.imag()) < 1e-15 && is_pole(z.real()))
      fail(ErrorKind::invalid_input, "Siegel gamma has a pole at this argument");
    gsl_sf_result lnr, arg;
    gsl_set_error_handler_off();
    int st = gsl_sf_lngamma_complex_e(z.real(), z.imag(), &lnr, &arg);
    if (st) fail(ErrorKind::internal, "complex log-gamma failed");
    r *= std::polar(std::exp(lnr.val), arg.val);
  }
  return r;
}

QuadResult eta(const RMatrix& y, const RMatrix& t, double alpha, double beta, const QuadratureSpec& q) {
  check_sym(y, "y");
  check_sym(t, "T");
  int n = static_cast<int>(t.rows());
  require(y.rows() == n, "y and T must have the same size");
  if (n > 2) fail(ErrorKind::unsupported, "eta quadrature is implemented for n <= 2");
  double rho = (n + 1) / 2.0;
  if (!(alpha > rho - 1 && beta > rho - 1))
    fail(ErrorKind::invalid_input, "eta integral diverges: need alpha, beta > rho_n - 1");
  require(positive_definite(y), "y must be positive definite");
  if (n == 1) return eta1(y(0, 0), t(0, 0), alpha, beta, q);
  return eta2(y, t, alpha, beta, q);
}

double eta_closed_form(const RMatrix& y, const RMatrix& t, double beta) {
  int n = static_cast<int>(t.rows());
  require(positive_definite(t), "closed form needs T positive definite");
  return std::exp(log_siegel_gamma_real(n, beta) - beta * std::log(y.determinant()) - (y * t).trace());
}

cplx whittaker_constant_reduced(int n, double alpha, double beta) {
  double rho = (n + 1) / 2.0;
  cplx ph = std::polar(1.0, pi / 2 * n * (beta - alpha));
  double mag = std::pow(2.0, n * (n - 1) / 4.0) * std::pow(2.0, -n * (rho - 1)) * std::pow(2 * pi, n * rho);
  return ph * mag / siegel_gamma(n, alpha);
}

WhittakerValue whittaker_real(const RMatrix& t, const RadialPoint& pt, double s, double kappa,
                              const QuadratureSpec& q) {
  check_sym(t, "T");
  int n = static_cast<int>(t.rows());
  require(pt.a.rows() == n && pt.a.cols() == n, "a must be n x n");
  double deta = pt.a.determinant();
  require(deta > 0, "a must have positive determinant");
  require(std::abs(t.determinant()) > 1e-300, "T must be nonsingular");
  ConfluentParams cp{n, kappa, s};
  double al = cp.alpha(), be = cp.beta(), rho = cp.rho();
  RMatrix y = pt.y();
  cplx phase = 1;
  if (pt.u.size()) phase = std::polar(1.0, 2 * pi * (t * pt.u).trace());
  WhittakerValue w;
  cplx base = phase * whittaker_constant_reduced(n, al, be) * std::pow(deta, s + rho);
  if (std::abs(al - rho) < 1e-14 && positive_definite(t)) {
    // eta(g, h, rho, beta) = Gamma_n(beta) det(g)^-beta e^{-tr(gh)}; Gamma_n(beta) cancels.
    RMatrix g = 2 * y;
    w.value = base * std::pow(g.determinant(), -be) * std::exp(-2 * pi * (y * t).trace());
    w.route = "closed_form";
    return w;
  }
  auto e = eta(2 * y, pi * t, al, be, q);
  cplx g = siegel_gamma(n, be);
  w.value = base * e.value / g;
  w.err_estimate = std::abs(base / g) * e.err_estimate;
  w.nodes_used = e.nodes_used;
  w.route = "quadrature";
  return w;
}

cplx whittaker_at_zero_posdef(const RMatrix& t, const RadialPoint& pt) {
  int n = static_cast<int>(t.rows());
  require(positive_definite(t), "T must be positive definite");
  double rho = (n + 1) / 2.0;
  RMatrix y = pt.y();
  // (-2 pi i)^{n rho}, n rho = n(n+1)/2 an integer
  int e = n * (n + 1) / 2;
  cplx ph = std::pow(cplx(0, -1), e) * std::pow(2 * pi, e);
  return ph * std::pow(2.0, -n * (n - 1) / 4.0) / siegel_gamma(n, rho) * std::pow(y.determinant(), rho / 2) *
         std::exp(-2 * pi * (t * y).trace());
}

int whittaker_vanishing_bound(SignaturePair sig) { return (sig.q_minus + 1) / 2; }

QuadResult kummer_U(double a, double b, double z, const QuadratureSpec& q) {
  if (!(a > 0)) fail(ErrorKind::invalid_input, "kummer_U needs a > 0");
  if (!(z > 0)) fail(ErrorKind::invalid_input, "kummer_U needs z > 0");
  auto r = laplace_kernel(z, a, 1.0, b - a, q);
  double g = std::tgamma(a);
  return {r.value / g, r.err_estimate / g, r.nodes_used};
}

cplx whittaker_derivative_n1(double t) {
  if (!(t < 0)) fail(ErrorKind::invalid_input, "derivative is only defined here for T < 0 (W_T(1,0) != 0 otherwise)");
  double at = std::abs(t);
  auto u = kummer_U(1, 1, 4 * pi * at);
  return cplx(0, -pi) * std::exp(-2 * pi * at) * u.value;
}

DerivativeEstimate whittaker_derivative_n1_numeric(double t, const QuadratureSpec& q) {
  if (!(t < 0)) fail(ErrorKind::invalid_input, "derivative is only defined here for T < 0");
  RMatrix tm(1, 1);
  tm(0, 0) = t;
  auto pt = RadialPoint::identity(1);
  // Chebyshev nodes on [1/2, 2]; W(s)/s is analytic there, extrapolate to s = 0.
  auto estimate = [&](int m) {
    std::vector<double> s(m);
    std::vector<cplx> f(m);
    for (int i = 0; i < m; ++i) {
      s[i] = 1.25 + 0.75 * std::cos(pi * (2 * i + 1) / (2.0 * m));
      f[i] = whittaker_real(tm, pt, s[i], 1.0, q).value / s[i];
    }
    cplx r = 0;
    for (int i = 0; i < m; ++i) {
      cplx l = f[i];
      for (int j = 0; j < m; ++j)
        if (j != i) l *= (0 - s[j]) / (s[i] - s[j]);
      r += l;
    }
    return std::make_pair(r, s);
  };
  auto [lo, s1] = estimate(10);
  auto [hi, s2] = estimate(14);
  return {hi, std::abs(hi - lo), s2};
}

AsymptoticCheck eta_asymptotic_check(const RMatrix& t, double alpha, double beta, const std::vector<double>& schedule,
                                     double y12, double y2, const QuadratureSpec& q) {
  check_sym(t, "T");
  int n = static_cast<int>(t.rows());
  if (n > 2) fail(ErrorKind::unsupported, "asymptotic check is implemented for n <= 2");
  double rho = (n + 1) / 2.0;
  require(beta > rho - 0.5, "need beta > rho_n - 1/2");
  double t1 = t(0, 0);
  if (t1 == 0) fail(ErrorKind::invalid_input, "T1 = 0 is degenerate");
  AsymptoticCheck c;
  if (t1 > 0) {
    double lim = std::tgamma(beta + 1 - rho) * std::pow(pi, (n - 1) / 2.0) * std::pow(2 * t1, alpha - rho);
    if (n == 2) {
      double t12 = t(0, 1), t2 = t(1, 1);
      double tt2 = t2 - t12 * t12 / t1;
      RMatrix yy(1, 1), tt(1, 1);
      yy(0, 0) = y2;
      tt(0, 0) = tt2;
      lim *= std::exp(-2 * t12 * y12 + (tt2 - t2) * y2) * eta(yy, tt, alpha - 0.5, beta, q).value;
    }
    c.rhs = lim;
  }
  for (double y1 : schedule) {
    RMatrix y(n, n);
    y(0, 0) = y1;
    if (n == 2) {
      y(0, 1) = y(1, 0) = y12;
      y(1, 1) = y2;
    }
    auto e = eta(y, t, alpha, beta, q);
    double sc = std::exp(t1 * y1) * std::pow(y1, beta);
    double lhs = e.value * sc;
    c.y1.push_back(y1);
    c.lhs.push_back(lhs);
    c.lhs_err.push_back(e.err_estimate * sc);
    c.residuals.push_back(c.rhs != 0 ? std::abs(lhs - c.rhs) / std::abs(c.rhs) : std::abs(lhs));
  }
  c.monotone = true;
  for (size_t i = 1; i < c.residuals.size(); ++i)
    if (c.residuals[i] > c.residuals[i - 1]) c.monotone = false;
  return c;
}

double expint_e1(double t) {
  if (!(t > 0)) fail(ErrorKind::invalid_input, "E1 needs t > 0");
  if (t <= 1) {
    // -gamma - log t - sum (-t)^k / (k k!)
    double sum = 0, term = 1;
    for (int k = 1; k < 200; ++k) {
      term *= -t / k;
      double add = term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(t) - sum;
  }
  // continued fraction, modified Lentz
  const double tiny = 1e-300;
  double b = t + 1, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * i;
    b += 2;
    d = 1 / (an * d + b);
    c = b + an / c;
    double del = c * d;
    h *= del;
    if (std::abs(del - 1) < 1e-16) break;
  }
  return h * std::exp(-t);
}

double exp_integral(double z) {
  if (!(z < 0)) fail(ErrorKind::invalid_input, "exp_integral is implemented for z < 0");
  return -expint_e1(-z);
}

RMatrix green_space_gram(int m, const RMatrix& gram) {
  if (m == 0) {
    require(gram.rows() == 2 && gram.cols() == 2, "m = 0 needs a 2x2 Gram");
    return gram;
  }
  require(m == 1, "green_xi supports m in {0, 1}");
  require(gram.rows() == 1 && gram(0, 0) < 0, "m = 1 needs a negative 1x1 Gram for v0");
  RMatrix g = RMatrix::Zero(3, 3);
  g(0, 2) = g(2, 0) = 1;
  g(1, 1) = gram(0, 0);
  return g;
}

Eigen::VectorXcd tube_point(int m, const RMatrix& gram, cplx z) {
  require(m == 1, "tube coordinates are used for m = 1");
  require(z.imag() != 0, "z must lie off the real locus");
  // w(z) = z + e - Q(z) f
  cplx qz = gram(0, 0) * z * z / 2.0;
  Eigen::VectorXcd w(3);
  w << 1, z, -qz;
  return w;
}

GreenEvaluation green_xi_w(const RMatrix& g, const RVector& x, const Eigen::VectorXcd& w) {
  RVector re = w.real(), im = w.imag();
  Eigen::Matrix2d gp;
  gp << re.dot(g * re), re.dot(g * im), im.dot(g * re), im.dot(g * im);
  require(gp.determinant() > 0 && gp(0, 0) < 0, "w(z) does not span a negative plane");
  Eigen::Vector2d v(x.dot(g * re), x.dot(g * im));
  GreenEvaluation e;
  e.norm = x.dot(g * x);
  e.r = -v.dot(gp.inverse() * v);
  if (e.r <= 1e-14 * (1 + std::abs(e.norm)))
    fail(ErrorKind::invalid_input, "z lies on the divisor of x (R(x,z) = 0): logarithmic singularity");
  e.xi0 = expint_e1(2 * pi * e.r);
  e.xi = e.xi0 * std::exp(-pi * e.norm);
  e.majorant = e.norm + 2 * e.r;
  return e;
}

GreenEvaluation green_xi(int m, const RMatrix& gram, const RVector& x, cplx z) {
  RMatrix g = green_space_gram(m, gram);
  require(x.size() == g.rows(), "x has the wrong dimension");
  if (m == 0) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(g);
    require(es.eigenvalues().maxCoeff() < 0, "m = 0 needs a negative definite V");
    GreenEvaluation e;
    e.norm = x.dot(g * x);
    e.r = -e.norm;
    if (e.r <= 0) fail(ErrorKind::invalid_input, "x = 0 lies on every divisor");
    e.xi0 = expint_e1(2 * pi * e.r);
    e.xi = e.xi0 * std::exp(-pi * e.norm);
    e.majorant = e.norm + 2 * e.r;
    return e;
  }
  return green_xi_w(g, x, tube_point(m, gram, z));
}

double height_arch_n1(double t) {
  if (!(t < 0)) fail(ErrorKind::invalid_input, "height_arch_n1 needs T < 0");
  return expint_e1(-4 * pi * t);
}

}  // namespace asw
