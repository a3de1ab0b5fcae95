#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gsl/gsl_sf_expint.h>
#include <gsl/gsl_sf_gamma.h>
#include <gsl/gsl_sf_hyperg.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <numbers>
#include <random>

#include "asw/archwhittaker.hpp"
#include "asw/error.hpp"

using namespace asw;
using std::numbers::pi;

namespace {

RMatrix m1(double x) {
  RMatrix m(1, 1);
  m(0, 0) = x;
  return m;
}

RMatrix m2(double a, double b, double d) {
  RMatrix m(2, 2);
  m << a, b, b, d;
  return m;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("siegel gamma") {
  for (double s : {0.5, 1.0, 2.5, 7.25}) CHECK(siegel_gamma(1, s).real() == doctest::Approx(std::tgamma(s)).epsilon(1e-13));
  CHECK(rel(siegel_gamma(2, 1.5), pi / 2) < 1e-13);
  CHECK(rel(siegel_gamma(2, 2.0), pi / 2) < 1e-13);
  // recursion Gamma_n(s) = pi^((n-1)/2) Gamma(s) Gamma_{n-1}(s - 1/2)
  for (int n = 2; n <= 5; ++n)
    for (cplx s : {cplx(3.1, 0), cplx(4.0, 1.5), cplx(2.75, -0.5)}) {
      cplx rhs = std::pow(pi, (n - 1) / 2.0) * siegel_gamma(1, s) * siegel_gamma(n - 1, s - 0.5);
      CHECK(rel(siegel_gamma(n, s), rhs) < 1e-12);
    }
  CHECK_THROWS_AS(siegel_gamma(2, 0.5), Error);
  CHECK_THROWS_AS(siegel_gamma(1, -2.0), Error);
}

TEST_CASE("eta examples") {
  auto e = eta(m1(2), m1(pi), 1, 2);
  CHECK(e.value == doctest::Approx(std::exp(-2 * pi) / 4).epsilon(1e-10));
  CHECK(e.err_estimate <= 1e-9);
  CHECK(e.nodes_used > 0);
  // n = 1, T < 0 against Kummer's U
  for (double t : {-0.5, -1.0, -2.0})
    for (double y : {0.7, 2.0}) {
      double al = 2, be = 1.5;
      double want = std::exp(-std::abs(t) * y) * std::pow(2 * std::abs(t), al + be - 1) * std::tgamma(al) *
                    gsl_sf_hyperg_U(al, al + be, 2 * std::abs(t) * y);
      CHECK(eta(m1(y), m1(t), al, be).value == doctest::Approx(want).epsilon(1e-9));
    }
  // alpha = rho with T positive definite
  for (const auto& [y, t] : {std::pair{m1(1.3), m1(0.8)}, std::pair{m2(2, 0.3, 1), m2(1, 0.2, 0.7)}}) {
    int n = static_cast<int>(t.rows());
    double rho = (n + 1) / 2.0, be = rho + 0.25;
    CHECK(eta(y, t, rho, be).value == doctest::Approx(eta_closed_form(y, t, be)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(eta(m1(1), m1(1), 0.0, 1), Error);
  CHECK_THROWS_AS(eta(m2(1, 0, 1), m2(1, 0, 1), 2, 0.5), Error);
}

TEST_CASE("eta transformation law on 20 random base changes") {
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> u(-0.8, 0.8), pos(0.6, 1.6);
  for (int it = 0; it < 20; ++it) {
    int n = it < 8 ? 1 : 2;
    RMatrix s = RMatrix::Identity(n, n) * 1.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s(i, j) = (i == j ? pos(rng) : u(rng) * 0.5);
    if (s.determinant() <= 0) s.col(0) *= -1;
    RMatrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = u(rng);
    RMatrix y = b * b.transpose() + RMatrix::Identity(n, n);
    RMatrix t = n == 1 ? m1(it % 2 ? 0.7 : -0.9) : (it % 2 ? m2(1.1, 0.2, -0.6) : m2(0.9, 0.1, 0.5));
    double al = n == 1 ? 1.5 : 2.0, be = n == 1 ? 1.25 : 1.75, rho = (n + 1) / 2.0;
    double lhs = eta(s.transpose() * y * s, t, al, be).value;
    double rhs = std::pow(s.determinant(), 2 * (rho - al - be)) * eta(y, s * t * s.transpose(), al, be).value;
    INFO("instance " << it);
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-6);
  }
}

TEST_CASE("real whittaker values") {
  auto w = whittaker_real(m1(1), RadialPoint::identity(1), 0, 1);
  CHECK(w.route == "closed_form");
  CHECK(rel(w.value, cplx(0, -2 * pi) * std::exp(-2 * pi)) < 1e-13);
  auto w2 = whittaker_real(RMatrix::Identity(2, 2), RadialPoint::identity(2), 0, 1.5);
  cplx want = std::pow(cplx(0, -2 * pi), 3) * std::pow(2.0, -0.5) / (pi / 2) * std::exp(-4 * pi);
  CHECK(rel(w2.value, want) < 1e-12);
  // the closed form against quadrature at alpha = rho (kappa = rho - s)
  for (int n : {1, 2}) {
    RMatrix t = n == 1 ? m1(0.6) : m2(0.8, 0.1, 0.5);
    double rho = (n + 1) / 2.0, s = 0.7;
    RMatrix tt = t;
    auto a = whittaker_real(tt, RadialPoint::identity(n), s, rho - s);
    CHECK(a.route == "closed_form");
    RMatrix y = RMatrix::Identity(n, n) * 2;
    double be = (s + rho - (rho - s)) / 2;
    double q = eta(y, pi * t, rho, be).value;
    double c = eta_closed_form(y, pi * t, be);
    CHECK(q == doctest::Approx(c).epsilon(1e-8));
  }
}

TEST_CASE("whittaker transformation under m(a)") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5), pos(0.7, 1.4);
  for (int it = 0; it < 6; ++it) {
    int n = it < 3 ? 1 : 2;
    RMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = i == j ? pos(rng) : u(rng);
    RMatrix t = n == 1 ? m1(-0.8) : m2(0.9, 0.2, -0.7);
    double s = 1.3, kappa = (n + 1) / 2.0, rho = kappa;
    auto lhs = whittaker_real(t, {a, RMatrix()}, s, kappa).value;
    auto rhs = std::pow(a.determinant(), rho - s) * whittaker_real(a.transpose() * t * a, RadialPoint::identity(n), s, kappa).value;
    INFO("instance " << it);
    CHECK(rel(lhs, rhs) < 1e-7);
  }
}

TEST_CASE("covariance at kappa = rho for n = 1") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> uu(-2, 2), vv(0.3, 3);
  for (int it = 0; it < 5; ++it) {
    double u = uu(rng), v = vv(rng), s = 0.4, t = it % 2 ? 0.9 : -0.6;
    double a = std::sqrt(v);
    cplx lhs = std::pow(v, -0.5) * whittaker_real(m1(t), {m1(a), m1(u)}, s, 1).value;
    cplx rhs = std::polar(1.0, 2 * pi * t * u) * std::pow(a, -s) *
               whittaker_real(m1(a * a * t), RadialPoint::identity(1), s, 1).value;
    CHECK(rel(lhs, rhs) < 1e-8);
  }
}

TEST_CASE("vanishing bound") {
  CHECK(whittaker_vanishing_bound({3, 0}) == 0);
  CHECK(whittaker_vanishing_bound({2, 1}) == 1);
  CHECK(whittaker_vanishing_bound({1, 2}) == 1);
  CHECK(whittaker_vanishing_bound({0, 3}) == 2);
}

TEST_CASE("kummer U") {
  for (double a : {0.5, 1.0, 2.5})
    for (double z : {0.3, 1.0, 7.0}) CHECK(kummer_U(a, a + 1, z).value == doctest::Approx(std::pow(z, -a)).epsilon(1e-10));
  CHECK(kummer_U(1, 1, 1).value == doctest::Approx(std::exp(1.0) * gsl_sf_expint_E1(1.0)).epsilon(1e-10));
  CHECK(kummer_U(1, 1, 1).value == doctest::Approx(0.596347362323194).epsilon(1e-12));
  for (double a : {0.5, 1.5, 3.0})
    for (double b : {0.5, 1.0, 2.5, 4.0})
      for (double z : {0.2, 2.0, 12.566370614359172})
        CHECK(kummer_U(a, b, z).value == doctest::Approx(gsl_sf_hyperg_U(a, b, z)).epsilon(1e-9));
  CHECK(kummer_U(1, 1, 1e3).value * 1e3 == doctest::Approx(1).epsilon(2e-3));
  CHECK_THROWS_AS(kummer_U(-1, 1, 1), Error);
  CHECK_THROWS_AS(kummer_U(1, 1, -1), Error);
}

TEST_CASE("n = 1 derivative at s = 0") {
  for (double t : {-0.5, -1.0, -2.0}) {
    double at = std::abs(t);
    cplx want = cplx(0, -pi) * std::exp(-2 * pi * at) * gsl_sf_hyperg_U(1, 1, 4 * pi * at);
    CHECK(rel(whittaker_derivative_n1(t), want) < 1e-10);
    auto num = whittaker_derivative_n1_numeric(t);
    CHECK(rel(num.value, want) < 1e-8);
  }
  CHECK_THROWS_AS(whittaker_derivative_n1(1), Error);
}

TEST_CASE("asymptotic limits at n = 1") {
  auto neg = eta_asymptotic_check(m1(-1), 2, 1.5, {10, 20, 40});
  CHECK(neg.rhs == 0);
  CHECK(neg.monotone);
  CHECK(neg.residuals.back() < 1e-10);
  auto pos = eta_asymptotic_check(m1(2), 2, 1.5, {12.5, 25, 50, 100});
  CHECK(pos.rhs == doctest::Approx(std::tgamma(1.5) * 4).epsilon(1e-14));
  CHECK(pos.monotone);
  // the residual decays like 1 / y1
  for (size_t i = 0; i + 1 < pos.residuals.size(); ++i)
    CHECK(pos.residuals[i] / pos.residuals[i + 1] == doctest::Approx(2).epsilon(0.1));
}

TEST_CASE("exponential integral") {
  CHECK(exp_integral(-1) == doctest::Approx(-0.219383934395521).epsilon(1e-13));
  for (double t : {1e-3, 0.2, 1.0, 1.5, 4.0, 12.566370614359172, 40.0})
    CHECK(expint_e1(t) == doctest::Approx(gsl_sf_expint_E1(t)).epsilon(1e-12));
  boost::math::quadrature::exp_sinh<double> q;
  double integral = q.integrate([](double u) { return std::exp(-2 * (1 + u)) / (1 + u); });
  CHECK(expint_e1(2) == doctest::Approx(integral).epsilon(1e-12));
  double t = 200;
  CHECK(expint_e1(t) * t * std::exp(t) == doctest::Approx(1).epsilon(2 / t));
  CHECK_THROWS_AS(exp_integral(0.5), Error);
}

TEST_CASE("green function") {
  RMatrix g = m2(-2, 0.5, -3);
  RVector x(2);
  x << 0.4, -0.3;
  auto e = green_xi(0, g, x, 0);
  double norm = x.dot(g * x);
  CHECK(e.r == doctest::Approx(-norm));
  CHECK(e.xi0 == doctest::Approx(gsl_sf_expint_E1(-2 * pi * norm)).epsilon(1e-12));
  CHECK(e.majorant == doctest::Approx(norm + 2 * e.r));
  CHECK_THROWS_AS(green_xi(0, g, RVector::Zero(2), 0), Error);

  // m = 1: invariance under the orthogonal group of V and under rescaling w
  RMatrix g0 = m1(-1.5);
  RMatrix vg = green_space_gram(1, g0);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int it = 0; it < 10; ++it) {
    cplx z(u(rng), 0.5 + std::abs(u(rng)));
    RVector xv(3);
    xv << u(rng) + 1, u(rng), u(rng) - 0.5;
    auto w = tube_point(1, g0, z);
    auto base = green_xi_w(vg, xv, w);
    CHECK(base.r >= 0);
    CHECK(base.majorant == doctest::Approx(base.norm + 2 * base.r).epsilon(1e-12));
    CHECK(base.xi == doctest::Approx(base.xi0 * std::exp(-pi * base.norm)).epsilon(1e-12));
    auto scaled = green_xi_w(vg, xv, cplx(0.3, -1.7) * w);
    CHECK(scaled.r == doctest::Approx(base.r).epsilon(1e-12));
    RMatrix k(3, 3);
    k << 0, u(rng), u(rng), 0, 0, u(rng), 0, 0, 0;
    k = k - RMatrix(k.transpose());
    RMatrix a = vg.inverse() * k;
    RMatrix h = (RMatrix::Identity(3, 3) - a).inverse() * (RMatrix::Identity(3, 3) + a);
    REQUIRE((h.transpose() * vg * h - vg).norm() < 1e-12);
    auto moved = green_xi_w(vg, h * xv, h.cast<cplx>() * w);
    CHECK(moved.xi == doctest::Approx(base.xi).epsilon(1e-10));
  }
  // x orthogonal to Re w and Im w lies on the divisor
  cplx z(0.2, 0.8);
  auto w = tube_point(1, g0, z);
  RMatrix cons(2, 3);
  cons.row(0) = (vg * w.real()).transpose();
  cons.row(1) = (vg * w.imag()).transpose();
  Eigen::FullPivLU<RMatrix> lu(cons);
  RVector xs = lu.kernel().col(0);
  CHECK_THROWS_AS(green_xi_w(vg, xs, w), Error);
}

TEST_CASE("archimedean height for n = 1") {
  CHECK(height_arch_n1(-1) == doctest::Approx(gsl_sf_expint_E1(4 * pi)).epsilon(1e-13));
  CHECK(height_arch_n1(-1e-8) > height_arch_n1(-1e-4));
  CHECK_THROWS_AS(height_arch_n1(0), Error);
}
