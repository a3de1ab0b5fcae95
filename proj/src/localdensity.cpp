#include "asw/localdensity.hpp"

#include <algorithm>
#include <cmath>

#include "asw/error.hpp"

namespace asw {

std::string to_string(Provenance p) { return p == Provenance::closed_form ? "closed_form" : "interpolated"; }

std::string to_string(SoyluClass c) {
  switch (c) {
    case SoyluClass::zero_dimensional: return "zero_dimensional";
    case SoyluClass::higher_dimensional: return "higher_dimensional";
    default: return "out_of_scope";
  }
}

bool DensityPolynomial::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const Rat& c) { return c == 0; });
}

Rat DensityPolynomial::eval(const Rat& x) const {
  Rat r = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
  return r;
}

Rat DensityPolynomial::derivative(const Rat& x) const {
  Rat r = 0;
  for (int i = degree(); i >= 1; --i) r = r * x + coeffs[i] * i;
  return r;
}

namespace {

void trim(std::vector<Rat>& c) {
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  if (c.empty()) c.push_back(0);
}

void check_odd_prime(long p) {
  if (p == 2) fail(ErrorKind::unsupported, "p = 2 is not supported for local densities");
  require(p > 2 && is_prime(p), "p must be an odd prime");
}

bool p_unit(const Rat& x, long p) { return x != 0 && valuation(x, p) == 0; }

bool p_integral(const QMatrix& m, long p) {
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      if (m(i, j) != 0 && valuation(m(i, j), p) < 0) return false;
  return true;
}

int unit_class(const Rat& x, long p) { return legendre_unit(unit_part(x, p), p); }

// Series of normalized counts at the first precision where k and k+1 agree.
AlphaSeries stabilized_series(long p, const LatticeGram& l, const MomentMatrix& t, int rmax,
                              const CountingOptions& opt) {
  int kt = 0;
  for (const auto& d : diagonalize_p(t.t, p)) kt = std::max(kt, valuation(d, p));
  int k = kt + 1;
  AlphaSeries cur = alpha_series(p, l, t, k, rmax, opt);
  for (; k < opt.max_precision; ++k) {
    AlphaSeries next = alpha_series(p, l, t, k + 1, rmax, opt);
    if (next.alpha == cur.alpha) return cur;
    cur = std::move(next);
  }
  fail(ErrorKind::tolerance, "counting did not stabilize up to precision " + std::to_string(opt.max_precision));
}

}  // namespace

DensityPolynomial poly_mul(const DensityPolynomial& a, const DensityPolynomial& b) {
  DensityPolynomial c;
  c.p = a.p;
  c.provenance = a.provenance;
  c.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Rat(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    for (size_t j = 0; j < b.coeffs.size(); ++j) c.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
  trim(c.coeffs);
  return c;
}

int delta_unimodular(long p, const LatticeGram& l) {
  int r = l.rank();
  if (r % 2) return 0;
  Rat d = l.det();
  if ((r / 2) % 2) d = -d;
  return unit_class(d, p);
}

DensityPolynomial density_unimodular_T(long p, const LatticeGram& l, const MomentMatrix& t) {
  check_odd_prime(p);
  int lr = l.rank(), n = t.rank();
  require(n >= 1 && n <= lr, "need 1 <= rank(T) <= rank(L)");
  require(p_unit(l.det(), p), "L must be p-unimodular");
  require(p_integral(t.t, p) && p_unit(gram_of(t).det(), p), "T must be p-unimodular");
  int dl = delta_unimodular(p, l);
  int dm = 0;
  if ((n + lr) % 2 == 0) {
    Rat d = gram_of(t).det() * l.s.scaled(-1).det();
    if (((n + lr) / 2) % 2) d = -d;
    dm = unit_class(d, p);
  }
  DensityPolynomial poly;
  poly.p = p;
  poly.provenance = Provenance::closed_form;
  poly.coeffs = {1};
  auto linear = [&](int sign, int half_exp) {
    DensityPolynomial f;
    f.p = p;
    f.coeffs = {1, Rat(sign) * rpow(p, -half_exp)};
    return f;
  };
  if (dl) poly = poly_mul(poly, linear(-dl, lr / 2));
  if (dm) poly = poly_mul(poly, linear(dm, (lr - n) / 2));
  for (int e = 0; 2 * e <= lr - 1; ++e) {
    if (2 * e < lr - n + 1) continue;
    DensityPolynomial f;
    f.p = p;
    f.coeffs = {1, 0, -rpow(p, -2 * e)};
    poly = poly_mul(poly, f);
  }
  poly.provenance = Provenance::closed_form;
  return poly;
}

DensityPolynomial density_scaled_split(long p, const LatticeGram& l1, const LatticeGram& l0, const MomentMatrix& t) {
  check_odd_prime(p);
  for (int i = 0; i < l0.rank(); ++i)
    for (int j = 0; j < l0.rank(); ++j)
      require(l0.s(i, j) == 0 || valuation(l0.s(i, j), p) >= 1, "split hypothesis violated: Q(L0) is not in pZ_p");
  return density_unimodular_T(p, l1, t);
}

DensityPolynomial density_scaled_split(long p, const LatticeGram& l, const MomentMatrix& t) {
  check_odd_prime(p);
  auto jf = jordan_decompose(p, moment_of(l));
  std::vector<Rat> unit, rest;
  for (const auto& b : jf.blocks)
    for (const auto& u : b.units) (b.exponent == 0 ? unit : rest).push_back(u * rpow(p, b.exponent));
  require(!unit.empty(), "L has no unimodular component");
  LatticeGram l0 = rest.empty() ? LatticeGram() : diagonal_lattice(rest);
  return density_scaled_split(p, diagonal_lattice(unit), l0, t);
}

int interpolation_degree_bound(long p, const MomentMatrix& t) {
  int n = t.rank();
  int v = valuation(gram_of(t).det(), p);
  return n * (n + 1) / 2 + n * std::max(v, 0) + n;
}

DensityPolynomial density_polynomial_general(long p, const LatticeGram& l, const MomentMatrix& t,
                                             const CountingOptions& opt) {
  check_odd_prime(p);
  require(t.t.det() != 0, "T must be nonsingular");
  int d = interpolation_degree_bound(p, t);
  AlphaSeries s = stabilized_series(p, l, t, d + 1, opt);
  // Newton divided differences at X_r = p^-r.
  std::vector<Rat> xs, c;
  for (int r = 0; r <= d; ++r) {
    xs.push_back(rpow(p, -r));
    c.push_back(s.alpha[r]);
  }
  for (int j = 1; j <= d; ++j)
    for (int i = d; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
  std::vector<Rat> poly{c[d]};
  for (int i = d - 1; i >= 0; --i) {
    std::vector<Rat> np(poly.size() + 1, Rat(0));
    for (size_t j = 0; j < poly.size(); ++j) {
      np[j + 1] += poly[j];
      np[j] -= poly[j] * xs[i];
    }
    np[0] += c[i];
    poly = np;
  }
  trim(poly);
  DensityPolynomial out;
  out.p = p;
  out.coeffs = poly;
  out.provenance = Provenance::interpolated;
  out.precision = s.k;
  if (out.eval(rpow(p, -(d + 1))) != s.alpha[d + 1])
    fail(ErrorKind::tolerance, "density interpolation failed verification at the extra point");
  return out;
}

DensityPolynomial density_polynomial(long p, const LatticeGram& l, const MomentMatrix& t, const CountingOptions& opt) {
  check_odd_prime(p);
  if (t.rank() <= l.rank() && p_unit(l.det(), p) && p_integral(t.t, p) && p_unit(gram_of(t).det(), p))
    return density_unimodular_T(p, l, t);
  return density_polynomial_general(p, l, t, opt);
}

std::complex<double> WhittakerFiniteValue::prefactor() const {
  return gamma_n.value() * std::pow(static_cast<double>(p), -0.5 * n * index_valuation);
}

WhittakerFiniteValue whittaker_finite(long p, const LatticeGram& l, const MomentMatrix& t, const CountingOptions& opt) {
  check_odd_prime(p);
  WhittakerFiniteValue w;
  w.p = p;
  w.n = t.rank();
  w.gamma_n = gamma_space_p(p, diagonalize(l.s.scaled(Rat(1, 2)))).pow(w.n);
  w.index_valuation = valuation(l.det(), p);
  w.alpha = density_polynomial(p, l, t, opt);
  w.value_at_0 = w.alpha.eval(1);
  w.derivative_coeff = -w.alpha.derivative(1);
  return w;
}

Rat nu_p(int a1, int a2, int a3, long p) {
  require(0 <= a1 && a1 <= a2 && a2 <= a3, "nu_p needs 0 <= a1 <= a2 <= a3");
  require(p > 2 && is_prime(p), "p must be an odd prime");
  Rat s = 0;
  for (int i = 0; i <= a1 - 1; ++i) s += Rat((i + 1) * (a1 + a2 + a3 - 3 * i)) * rpow(p, i);
  if ((a2 - a1) % 2 == 0) {
    for (int i = a1; i <= (a1 + a2) / 2 - 1; ++i) s += Rat((a1 + 1) * (2 * a1 + a2 + a3 - 4 * i)) * rpow(p, i);
    s += frac(a1 + 1, 2) * (a3 - a2 + 1) * rpow(p, (a1 + a2) / 2);
  } else {
    for (int i = a1; i <= (a1 + a2 - 1) / 2; ++i) s += Rat((a1 + 1) * (2 * a1 + a2 + a3 - 4 * i)) * rpow(p, i);
  }
  return s;
}

SoyluReport soylu_classify(long p, const LatticeGram& l, const MomentMatrix& t) {
  check_odd_prime(p);
  SoyluReport rep;
  rep.n = t.rank();
  require(l.rank() == rep.n + 1, "L must have rank n+1");
  require(p_unit(l.det(), p), "L must be p-unimodular");
  auto jf = jordan_decompose(p, t);
  int r = jf.rank_at(0), n = rep.n;
  rep.unimodular_rank = r;
  if (r == n) {
    rep.cls = SoyluClass::out_of_scope;
    rep.reason = "T is p-unimodular";
  } else if (r == n - 1 || r == n - 2) {
    rep.cls = SoyluClass::zero_dimensional;
    rep.reason = "r(T) = n-1 or n-2";
  } else if (r == n - 3) {
    Rat d = rpow(2, r);
    for (const auto& b : jf.blocks)
      if (b.exponent == 0)
        for (const auto& u : b.units) d *= u;
    bool same = unit_class(d, p) == unit_class(l.det(), p);
    rep.cls = same ? SoyluClass::zero_dimensional : SoyluClass::higher_dimensional;
    rep.reason = same ? "r(T) = n-3 and det(2T1) = det L" : "r(T) = n-3 and det(2T1) != det L";
  } else {
    rep.cls = SoyluClass::out_of_scope;
    rep.reason = "r(T) < n-3";
  }
  return rep;
}

HeightRatio height_ratio_paths(long p, const LatticeGram& l, const MomentMatrix& t, const CountingOptions& opt) {
  check_odd_prime(p);
  int n = t.rank();
  require(l.rank() == n + 1, "L must have rank n+1");
  require(p_unit(l.det(), p), "L must be p-unimodular");
  if (n < 3) fail(ErrorKind::unsupported, "height ratio needs rank(T) >= 3");
  HeightRatio h;
  h.alpha = density_polynomial(p, l, t, opt);
  if (h.alpha.eval(1) != 0)
    fail(ErrorKind::invalid_input, "Whittaker value nonzero: alpha(1,T,L) = " + to_string(h.alpha.eval(1)));
  auto soy = soylu_classify(p, l, t);
  if (soy.cls != SoyluClass::zero_dimensional)
    fail(ErrorKind::invalid_input, "Soylu condition fails: " + soy.reason);
  auto ex = jordan_decompose(p, t).exponents();
  h.exponents = {ex[n - 3], ex[n - 2], ex[n - 1]};
  h.via_nu = nu_p(h.exponents[0], h.exponents[1], h.exponents[2], p);
  h.alpha_unimodular_at_1 = density_unimodular_T(p, l, MomentMatrix(QMatrix::identity(n))).eval(1);
  h.via_density = -h.alpha.derivative(1) / h.alpha_unimodular_at_1;
  h.agree = h.via_nu == h.via_density;
  return h;
}

HeightRatio height_ratio(long p, const LatticeGram& l, const MomentMatrix& t, const CountingOptions& opt) {
  auto h = height_ratio_paths(p, l, t, opt);
  if (!h.agree)
    fail(ErrorKind::tolerance, "height ratio paths disagree: nu_p = " + to_string(h.via_nu) +
                                   ", density = " + to_string(h.via_density));
  return h;
}

int t_max(int n, const Rat& det_l, long p) {
  check_odd_prime(p);
  require(n >= 1, "n must be positive");
  if (n % 2 == 0) return n;
  Rat s = ((n + 1) / 2) % 2 ? Rat(-1) : Rat(1);
  return unit_class(det_l * s, p) == 1 ? n - 1 : n + 1;
}

VertexLatticeClass vertex_lattice_gram(int t, long p, int n, const Rat& det_l) {
  check_odd_prime(p);
  require(p_unit(det_l, p), "det L must be a p-adic unit");
  require(t >= 2 && t % 2 == 0, "type number t must be even and at least 2");
  int tm = t_max(n, det_l, p);
  require(t <= tm, "type number exceeds t_max = " + std::to_string(tm));
  long nr = least_nonresidue(p);
  VertexLatticeClass v;
  v.p = p;
  v.t = t;
  Rat sgn_r = (t / 2) % 2 ? Rat(-1) : Rat(1);
  std::vector<Rat> g;
  if (t <= n) {
    v.beta = sgn_r * nr;
    v.alpha = unit_class(det_l * v.beta, p) == 1 ? Rat(1) : Rat(nr);
    for (int i = 0; i < n - t; ++i) g.push_back(1);
    g.push_back(v.alpha);
  } else {
    // t = n+1: no unimodular part; the determinant fixes beta.
    v.beta = unit_class(det_l, p) == 1 ? Rat(1) : Rat(nr);
    require(unit_class(sgn_r * v.beta, p) == -1, "no dual vertex lattice of type n+1 for this det L");
    v.alpha = 0;
  }
  for (int i = 0; i < t - 1; ++i) g.push_back(p);
  g.push_back(v.beta * p);
  v.gram = LatticeGram(QMatrix::diagonal(g));
  return v;
}

double CConstant::value() const {
  double v = 1;
  for (const auto& [b, e] : powers) v *= std::pow(std::abs(b.get_d()), e.get_d());
  return v;
}

CConstant c_constant(Place v, const QMatrix& j, int n) {
  if (v.p == 2) fail(ErrorKind::unsupported, "C(J) at the place 2 is not supported");
  require(j.is_symmetric() && j.det() != 0, "J must be symmetric and nondegenerate");
  require(n >= 1, "n must be positive");
  CConstant c;
  c.place = v;
  Rat d2 = j.scaled(2).det();
  if (v.is_infinite()) {
    c.phase = gamma_real(signature(j), n).inverse();
    c.powers.emplace_back(Rat(2), Rat(n) + frac(n * (n - 1), 4));
    c.powers.emplace_back(abs(d2), frac(-n, 2));
  } else {
    check_odd_prime(v.p);
    c.phase = gamma_space_p(v.p, diagonalize(j)).pow(n).inverse();
    int val = valuation(d2, v.p);
    if (val != 0) c.powers.emplace_back(Rat(v.p), frac(n * val, 2));
  }
  return c;
}

std::complex<double> VolumeRatio::value() const {
  return gamma_n.value() * std::pow(static_cast<double>(p), -0.5 * n * index_valuation) * alpha_at_1.get_d();
}

VolumeRatio vol_ratio(long p, const LatticeGram& l) {
  check_odd_prime(p);
  require(l.rank() >= 2, "L must have rank at least 2");
  require(p_unit(l.det(), p), "L must be p-unimodular");
  VolumeRatio v;
  v.p = p;
  v.n = l.rank() - 1;
  v.gamma_n = gamma_space_p(p, diagonalize(l.s.scaled(Rat(1, 2)))).pow(v.n);
  v.alpha_at_1 = density_unimodular_T(p, l, MomentMatrix(QMatrix::identity(v.n))).eval(1);
  v.route = "closed_form";
  return v;
}

VolumeRatio vol_ratio_split(long p, const LatticeGram& l1, const CountingOptions& opt) {
  check_odd_prime(p);
  require(l1.rank() == 0 || p_unit(l1.det(), p), "L1 must be p-unimodular");
  long nr = least_nonresidue(p);
  // Q(a, b) = p (a^2 + eps b^2) with -eps a non-residue: the norm form of the
  // unramified quadratic extension scaled by p.
  Rat eps = -nr;
  QMatrix l0(2);
  l0(0, 0) = 2 * p;
  l0(1, 1) = 2 * p * eps;
  LatticeGram l = l1.rank() ? LatticeGram(block_diag(l1.s, l0)) : LatticeGram(l0);
  int n = l1.rank() + 1;
  QMatrix t(n);
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j + 1 < n; ++j) t(i, j) = l1.s(i, j) / 2;
  t(n - 1, n - 1) = p;
  VolumeRatio v;
  v.p = p;
  v.n = n;
  v.gamma_n = gamma_space_p(p, diagonalize(l.s.scaled(Rat(1, 2)))).pow(n);
  v.index_valuation = valuation(l.det(), p);
  auto s = stabilized_series(p, l, MomentMatrix(t), 0, opt);
  v.alpha_at_1 = s.alpha[0];
  v.route = "counting";
  v.stabilized = true;
  return v;
}

}  // namespace asw
