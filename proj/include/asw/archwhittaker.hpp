#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asw/quadform.hpp"

namespace asw {

using cplx = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

struct ConfluentParams {
  int n = 1;
  double kappa = 1;
  double s = 0;
  double rho() const { return (n + 1) / 2.0; }
  double alpha() const { return (s + rho() + kappa) / 2; }
  double beta() const { return (s + rho() - kappa) / 2; }
};

// y = a a^T, tau = u + i y.
struct RadialPoint {
  RMatrix a;
  RMatrix u;  // empty means 0
  RMatrix y() const { return a * a.transpose(); }
  static RadialPoint identity(int n) { return {RMatrix::Identity(n, n), RMatrix()}; }
};

struct QuadratureSpec {
  double tolerance = 1e-10;
  long node_budget = 200'000'000;
};

struct QuadResult {
  double value = 0;
  double err_estimate = 0;
  long nodes_used = 0;
};

struct WhittakerValue {
  cplx value;
  double err_estimate = 0;
  long nodes_used = 0;
  std::string route;  // "closed_form" or "quadrature"
};

cplx siegel_gamma(int n, cplx s);

// Shimura's eta(y, T, alpha, beta) for n <= 2, real parameters.
QuadResult eta(const RMatrix& y, const RMatrix& t, double alpha, double beta, const QuadratureSpec& q = {});
// eta at alpha = rho_n for positive definite T: Gamma_n(beta) det(y)^-beta e^-tr(yT).
double eta_closed_form(const RMatrix& y, const RMatrix& t, double beta);

// c_n(alpha, beta) without the 1/Gamma_n(beta) factor, which is returned separately.
cplx whittaker_constant_reduced(int n, double alpha, double beta);

WhittakerValue whittaker_real(const RMatrix& t, const RadialPoint& pt, double s, double kappa,
                              const QuadratureSpec& q = {});
// W_T(m(a), 0, Phi_rho) for positive definite T.
cplx whittaker_at_zero_posdef(const RMatrix& t, const RadialPoint& pt);

int whittaker_vanishing_bound(SignaturePair sig);

QuadResult kummer_U(double a, double b, double z, const QuadratureSpec& q = {});

// W'_T(1, 0, Phi_1) for n = 1, T < 0.
cplx whittaker_derivative_n1(double t);
// Same quantity from quadrature values of W(s)/s on [1/2, 2], extrapolated to 0.
struct DerivativeEstimate {
  cplx value;
  double err_estimate = 0;
  std::vector<double> nodes;
};
DerivativeEstimate whittaker_derivative_n1_numeric(double t, const QuadratureSpec& q = {});

struct AsymptoticCheck {
  std::vector<double> y1;
  std::vector<double> lhs;
  std::vector<double> lhs_err;
  double rhs = 0;
  std::vector<double> residuals;  // relative, or absolute when rhs = 0
  bool monotone = false;          // residuals nonincreasing along the schedule
};

// e^{T1 y1} y1^beta eta(y, T, alpha, beta) along y1 against the limit; y12 and
// y2 fix the rest of y (ignored for n = 1).
AsymptoticCheck eta_asymptotic_check(const RMatrix& t, double alpha, double beta, const std::vector<double>& schedule,
                                     double y12 = 0, double y2 = 1, const QuadratureSpec& q = {});

double exp_integral(double z);  // Ei(z), z < 0
double expint_e1(double t);      // E_1(t) = -Ei(-t), t > 0

struct GreenEvaluation {
  double r = 0;          // R(x, z)
  double xi = 0;
  double xi0 = 0;        // xi * e^{pi (x,x)}
  double majorant = 0;   // (x, x)_z = (x, x) + 2R
  double norm = 0;       // (x, x)
};

// m = 0: gram is the negative definite Gram of V and z is unused.
// m = 1: V has basis (e, v0, f) with (e, f) = 1 and gram = the 1x1 Gram of v0
// (negative); z is the coordinate of a point i*t*v0 + ... in V0 (x) C.
GreenEvaluation green_xi(int m, const RMatrix& gram, const RVector& x, cplx z);
// Same, with the full Gram of V and the isotropic vector w(z) given directly.
GreenEvaluation green_xi_w(const RMatrix& v_gram, const RVector& x, const Eigen::VectorXcd& w);
RMatrix green_space_gram(int m, const RMatrix& gram);
Eigen::VectorXcd tube_point(int m, const RMatrix& gram, cplx z);

double height_arch_n1(double t);

}  // namespace asw
