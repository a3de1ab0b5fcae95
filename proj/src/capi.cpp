#include "asw/asw.h"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include "asw/archwhittaker.hpp"
#include "asw/eisenstein.hpp"
#include "asw/error.hpp"
#include "asw/localdensity.hpp"
#include "asw/quadform.hpp"
#include "json.hpp"
#include "schema.hpp"

using nlohmann::json;
using namespace asw;

struct asw_context {
  CountingOptions counting;
  QuadratureSpec quadrature;
  std::string result;
  std::string error;
};

namespace {

constexpr double pi = std::numbers::pi;

// ---- input conversion ----

Rat in_rat(const json& v) {
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  fail(ErrorKind::invalid_input, "expected a rational, got " + v.dump());
}

double in_real(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return in_rat(v).get_d();
  fail(ErrorKind::invalid_input, "expected a real number, got " + v.dump());
}

template <class F>
void for_square(const json& v, F&& f) {
  size_t n = v.size();
  require(n > 0, "matrix must be nonempty");
  for (size_t i = 0; i < n; ++i) {
    require(v[i].size() == n, "matrix must be square");
    for (size_t j = 0; j < n; ++j) f(static_cast<int>(i), static_cast<int>(j), v[i][j]);
  }
}

QMatrix in_qmatrix(const json& v) {
  QMatrix m(static_cast<int>(v.size()));
  for_square(v, [&](int i, int j, const json& e) { m(i, j) = in_rat(e); });
  return m;
}

RMatrix in_rmatrix(const json& v) {
  RMatrix m(v.size(), v.size());
  for_square(v, [&](int i, int j, const json& e) { m(i, j) = in_real(e); });
  return m;
}

RMatrix to_real(const QMatrix& q) {
  RMatrix m(q.size(), q.size());
  for (int i = 0; i < q.size(); ++i)
    for (int j = 0; j < q.size(); ++j) m(i, j) = q(i, j).get_d();
  return m;
}

long in_prime(const json& v) {
  long p = v.get<long>();
  require(is_prime(p), std::to_string(p) + " is not prime");
  return p;
}

long in_odd_prime(const json& v) {
  long p = in_prime(v);
  if (p == 2) fail(ErrorKind::unsupported, "p = 2 is outside the supported regime (odd primes only)");
  return p;
}

Place in_place(const json& v) {
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "oo") return Place::infinity();
    require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos, "bad place \"" + s + "\"");
    return Place::prime(in_prime(json(std::stol(s))));
  }
  return Place::prime(in_prime(v));
}

cplx in_complex(const json& v) { return {in_real(v.at("re")), v.contains("im") ? in_real(v["im"]) : 0.0}; }

template <class T>
T get_or(const json& r, const char* key, T dflt) {
  return r.contains(key) ? r[key].get<T>() : dflt;
}

double real_or(const json& r, const char* key, double dflt) { return r.contains(key) ? in_real(r[key]) : dflt; }

// ---- output conversion ----

json out(const Rat& q) { return to_string(q); }
json out(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }
json out(Place v) { return v.is_infinite() ? json("inf") : json(v.p); }
json out(const QuadResult& r) {
  return {{"value", r.value}, {"err_estimate", r.err_estimate}, {"nodes_used", r.nodes_used}};
}
json out(const QMatrix& m) {
  json a = json::array();
  for (int i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(out(m(i, j)));
    a.push_back(row);
  }
  return a;
}
json out(Root8 r) { return {{"e8", r.k}, {"str", r.str()}}; }
json out(const std::vector<Rat>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(out(x));
  return a;
}
json out(const std::vector<Place>& v) {
  json a = json::array();
  for (auto p : v) a.push_back(out(p));
  return a;
}
json out(const DensityPolynomial& d) {
  return {{"p", d.p},
          {"coeffs", out(d.coeffs)},
          {"degree", d.degree()},
          {"provenance", to_string(d.provenance)},
          {"precision", d.precision},
          {"value_at_1", out(d.eval(1))},
          {"derivative_at_1", out(d.derivative(1))},
          {"value_at_1_over_p", out(d.eval(frac(1, d.p)))}};
}
json out(const ExactConstant& c) {
  return {{"exact", c.str()}, {"value", out(c.value())}};
}

// ---- request context ----

struct Request {
  const json& body;
  CountingOptions counting;
  QuadratureSpec quadrature;

  Request(const json& b, const asw_context& ctx) : body(b), counting(ctx.counting), quadrature(ctx.quadrature) {
    if (b.contains("counting")) {
      const auto& c = b["counting"];
      counting.max_work = get_or(c, "max_work", counting.max_work);
      counting.threads = get_or(c, "threads", counting.threads);
      counting.max_precision = get_or(c, "max_precision", counting.max_precision);
    }
    if (b.contains("quadrature")) {
      const auto& q = b["quadrature"];
      quadrature.tolerance = get_or(q, "tolerance", quadrature.tolerance);
      quadrature.node_budget = get_or(q, "node_budget", quadrature.node_budget);
    }
  }
  const json& operator[](const char* k) const { return body.at(k); }
  bool has(const char* k) const { return body.contains(k); }
};

LatticeGram lattice(const Request& r) { return LatticeGram(in_qmatrix(r["lattice_gram"])); }
MomentMatrix moment(const Request& r, const char* key = "t") { return MomentMatrix(in_qmatrix(r[key])); }

// ---- commands ----

json cmd_invariants(const Request& r) {
  QMatrix m = in_qmatrix(r["matrix"]);
  require(m.is_symmetric(), "matrix must be symmetric");
  if (get_or<std::string>(r.body, "convention", "moment") == "gram") m = m.scaled(frac(1, 2));
  require(m.det() != 0, "form must be nondegenerate");
  Place v = in_place(r["place"]);
  auto d = diagonalize(m);
  auto inv = local_invariants(v, d);
  json o{{"place", out(v)},
         {"dimension", inv.dimension},
         {"det", out(m.det())},
         {"det_unit", out(inv.det_unit)},
         {"det_valuation_parity", inv.det_valuation_parity},
         {"hasse", inv.hasse},
         {"discriminant", out(inv.discriminant)},
         {"diagonal", out(d)}};
  if (v.is_infinite()) {
    auto sig = signature(d);
    o["signature"] = {sig.p_plus, sig.q_minus};
    o["weil_index"] = out(gamma_real(sig, 1));
  } else if (v.p != 2) {
    o["weil_index"] = out(gamma_space_p(v.p, d));
  }
  return o;
}

json cmd_jordan(const Request& r) {
  QMatrix m = in_qmatrix(r["matrix"]);
  require(m.is_symmetric(), "matrix must be symmetric");
  if (get_or<std::string>(r.body, "convention", "moment") == "gram") m = m.scaled(frac(1, 2));
  long p = in_odd_prime(r["p"]);
  auto jf = jordan_decompose(p, MomentMatrix(m));
  json blocks = json::array();
  for (const auto& b : jf.blocks) blocks.push_back({{"exponent", b.exponent}, {"units", out(b.units)}});
  return {{"p", p}, {"rank", jf.rank}, {"blocks", blocks}, {"diagonal", out(jf.diagonal())},
          {"exponents", jf.exponents()}};
}

json cmd_hilbert(const Request& r) {
  Rat a = in_rat(r["a"]), b = in_rat(r["b"]);
  require(a != 0 && b != 0, "Hilbert symbol needs nonzero arguments");
  Place v = in_place(r["place"]);
  return {{"a", out(a)}, {"b", out(b)}, {"place", out(v)}, {"symbol", hilbert_symbol(a, b, v)}};
}

json cmd_diff_set(const Request& r) {
  auto d = diff_set(in_qmatrix(r["v_gram"]), moment(r));
  return {{"diff", out(d)}, {"cardinality", d.size()}, {"order_lower_bound", d.size()}};
}

json cmd_density(const Request& r) {
  long p = in_odd_prime(r["p"]);
  auto l = lattice(r);
  auto t = moment(r);
  auto mode = get_or<std::string>(r.body, "mode", "auto");
  if (mode == "count") {
    int rr = get_or(r.body, "r", 0);
    int k = get_or(r.body, "k", 0);
    if (k == 0) {
      int e = 0;
      for (int x : jordan_decompose(p, t).exponents()) e = std::max(e, x);
      k = e + 1;
    }
    auto c = count_representations(p, l, t, rr, k, r.counting);
    if (!c.stabilized)
      fail(ErrorKind::tolerance, "count at k = " + std::to_string(k) + " did not stabilize (" +
                                     to_string(c.normalized) + " vs " + to_string(c.normalized_next) + ")");
    return {{"p", p},
            {"r", rr},
            {"k", c.k},
            {"count", c.count.get_str()},
            {"norm_exponent", c.norm_exponent},
            {"normalized", out(c.normalized)},
            {"normalized_next", out(c.normalized_next)},
            {"stabilized", c.stabilized},
            {"x", out(rpow(p, -rr))},
            {"provenance", "counting"}};
  }
  DensityPolynomial d;
  if (mode == "closed")
    d = density_unimodular_T(p, l, t);
  else if (mode == "split")
    d = density_scaled_split(p, l, t);
  else if (mode == "interp")
    d = density_polynomial_general(p, l, t, r.counting);
  else
    d = density_polynomial(p, l, t, r.counting);
  json o = out(d);
  o["mode"] = mode;
  return o;
}

json cmd_nu_p(const Request& r) {
  const auto& a = r["a"];
  long p = in_odd_prime(r["p"]);
  return {{"p", p}, {"a", a}, {"nu", out(nu_p(a[0].get<int>(), a[1].get<int>(), a[2].get<int>(), p))}};
}

json cmd_height_ratio(const Request& r) {
  long p = in_odd_prime(r["p"]);
  auto h = height_ratio_paths(p, lattice(r), moment(r), r.counting);
  if (!h.agree)
    fail(ErrorKind::tolerance, "height ratio routes disagree: nu = " + to_string(h.via_nu) +
                                   ", density = " + to_string(h.via_density));
  return {{"p", p},
          {"exponents", h.exponents},
          {"via_nu", out(h.via_nu)},
          {"via_density", out(h.via_density)},
          {"alpha", out(h.alpha)},
          {"alpha_unimodular_at_1", out(h.alpha_unimodular_at_1)},
          {"agree", h.agree},
          {"ratio", to_string(h.via_nu) + " * log " + std::to_string(p)}};
}

json cmd_soylu(const Request& r) {
  long p = in_odd_prime(r["p"]);
  auto s = soylu_classify(p, lattice(r), moment(r));
  return {{"class", to_string(s.cls)}, {"unimodular_rank", s.unimodular_rank}, {"n", s.n}, {"reason", s.reason}};
}

json cmd_vertex_lattice(const Request& r) {
  long p = in_odd_prime(r["p"]);
  int n = r["n"].get<int>();
  Rat det = in_rat(r["det_l"]);
  int tm = t_max(n, det, p);
  json classes = json::array();
  auto one = [&](int t) {
    auto v = vertex_lattice_gram(t, p, n, det);
    classes.push_back({{"t", v.t}, {"gram", out(v.gram.s)}, {"alpha", out(v.alpha)}, {"beta", out(v.beta)}});
  };
  if (r.has("t")) {
    one(r["t"].get<int>());
  } else {
    for (int t = 2; t <= tm; t += 2) one(t);
  }
  return {{"p", p}, {"n", n}, {"det_l", out(det)}, {"t_max", tm}, {"classes", classes}};
}

json cmd_c_constant(const Request& r) {
  Place v = in_place(r["place"]);
  auto c = c_constant(v, in_qmatrix(r["j"]), r["n"].get<int>());
  json powers = json::array();
  for (const auto& [b, e] : c.powers) powers.push_back({{"base", out(b)}, {"exponent", out(e)}});
  return {{"place", out(v)}, {"phase", out(c.phase)}, {"powers", powers}, {"value", c.value()}};
}

json out(const VolumeRatio& v) {
  return {{"p", v.p},
          {"n", v.n},
          {"gamma_n", out(v.gamma_n)},
          {"index_valuation", v.index_valuation},
          {"alpha_at_1", out(v.alpha_at_1)},
          {"route", v.route},
          {"stabilized", v.stabilized},
          {"value", out(v.value())}};
}

json cmd_vol_ratio(const Request& r) {
  long p = in_odd_prime(r["p"]);
  if (get_or(r.body, "split", false)) return out(vol_ratio_split(p, lattice(r), r.counting));
  return out(vol_ratio(p, lattice(r)));
}

json cmd_siegel_gamma(const Request& r) {
  int n = r["n"].get<int>();
  cplx s = in_complex(r["s"]);
  return {{"n", n}, {"s", out(s)}, {"value", out(siegel_gamma(n, s))}};
}

bool positive_definite(const RMatrix& t) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(t);
  return es.eigenvalues().minCoeff() > 0;
}

json cmd_eta(const Request& r) {
  RMatrix y = in_rmatrix(r["y"]), t = in_rmatrix(r["t"]);
  double al = in_real(r["alpha"]), be = in_real(r["beta"]);
  auto q = eta(y, t, al, be, r.quadrature);
  json o = out(q);
  o["provenance"] = "quadrature";
  double rho = (t.rows() + 1) / 2.0;
  if (std::abs(al - rho) < 1e-14 && positive_definite(t)) o["closed_form"] = eta_closed_form(y, t, be);
  return o;
}

json cmd_kummer_u(const Request& r) {
  json o = out(kummer_U(in_real(r["a"]), in_real(r["b"]), in_real(r["z"]), r.quadrature));
  o["provenance"] = "quadrature";
  return o;
}

json cmd_whittaker(const Request& r) {
  Place v = in_place(r["place"]);
  auto t = moment(r);
  if (!v.is_infinite()) {
    long p = v.p;
    if (p == 2) fail(ErrorKind::unsupported, "p = 2 is outside the supported regime (odd primes only)");
    require(r.has("lattice_gram"), "a finite place needs lattice_gram");
    auto w = whittaker_finite(p, lattice(r), t, r.counting);
    return {{"place", out(v)},
            {"n", w.n},
            {"gamma_n", out(w.gamma_n)},
            {"index_valuation", w.index_valuation},
            {"alpha", out(w.alpha)},
            {"value_at_0", out(w.value_at_0)},
            {"derivative_coeff", out(w.derivative_coeff)},
            {"prefactor", out(w.prefactor())},
            {"value", out(w.prefactor() * w.value_at_0.get_d())},
            {"derivative", out(w.prefactor() * w.derivative_coeff.get_d() * std::log(double(p)))}};
  }
  RMatrix tr = to_real(t.t);
  int n = t.rank();
  if (get_or(r.body, "derivative", false)) {
    require(n == 1, "the archimedean derivative is only available for n = 1");
    double tv = tr(0, 0);
    auto num = whittaker_derivative_n1_numeric(tv, r.quadrature);
    return {{"place", "inf"},
            {"t", tv},
            {"derivative", out(whittaker_derivative_n1(tv))},
            {"derivative_numeric", {{"value", out(num.value)}, {"err_estimate", num.err_estimate}}},
            {"provenance", "closed_form"}};
  }
  RadialPoint pt = RadialPoint::identity(n);
  if (r.has("a")) pt.a = in_rmatrix(r["a"]);
  if (r.has("u")) pt.u = in_rmatrix(r["u"]);
  double s = real_or(r.body, "s", 0.0);
  double kappa = real_or(r.body, "kappa", (n + 1) / 2.0);
  auto w = whittaker_real(tr, pt, s, kappa, r.quadrature);
  return {{"place", "inf"}, {"n", n}, {"s", s}, {"kappa", kappa}, {"value", out(w.value)},
          {"err_estimate", w.err_estimate}, {"nodes_used", w.nodes_used}, {"provenance", w.route}};
}

json cmd_asymptotic_check(const Request& r) {
  std::vector<double> sched;
  for (const auto& x : r["schedule"]) sched.push_back(in_real(x));
  auto c = eta_asymptotic_check(in_rmatrix(r["t"]), in_real(r["alpha"]), in_real(r["beta"]), sched,
                                real_or(r.body, "y12", 0.0), real_or(r.body, "y2", 1.0), r.quadrature);
  return {{"y1", c.y1}, {"lhs", c.lhs}, {"lhs_err", c.lhs_err}, {"rhs", c.rhs},
          {"residuals", c.residuals}, {"monotone", c.monotone}};
}

json cmd_exp_integral(const Request& r) {
  double z = in_real(r["z"]);
  require(z < 0, "Ei is only provided for z < 0");
  return {{"z", z}, {"value", exp_integral(z)}};
}

json cmd_green(const Request& r) {
  int m = r["m"].get<int>();
  RMatrix g = in_rmatrix(r["gram"]);
  RVector x(r["x"].size());
  for (size_t i = 0; i < r["x"].size(); ++i) x(i) = in_real(r["x"][i]);
  cplx z = r.has("z") ? in_complex(r["z"]) : cplx(0, 1);
  auto e = green_xi(m, g, x, z);
  return {{"r", e.r}, {"xi", e.xi}, {"xi0", e.xi0}, {"majorant", e.majorant}, {"norm", e.norm}};
}

json cmd_height_arch(const Request& r) {
  double t = in_real(r["t"]);
  return {{"t", t}, {"height", height_arch_n1(t)}};
}

json cmd_alsw_check(const Request& r) {
  cplx b1 = b_infinity(1).value();
  json rows = json::array();
  double worst = 0;
  for (const auto& x : r["t"]) {
    double t = in_real(x);
    double ht = height_arch_n1(t);
    double lhs = ht * std::exp(-2 * pi * t);
    cplx bw = b1 * whittaker_derivative_n1(t);
    double res = std::abs(lhs + bw) / std::abs(lhs);
    auto num = whittaker_derivative_n1_numeric(t, r.quadrature);
    double res_num = std::abs(lhs + b1 * num.value) / std::abs(lhs);
    worst = std::max({worst, res, res_num});
    rows.push_back({{"t", t},
                    {"height", ht},
                    {"height_times_exp", lhs},
                    {"b1_times_derivative", out(bw)},
                    {"residual", res},
                    {"residual_numeric", res_num}});
  }
  return {{"checks", rows}, {"max_residual", worst}};
}

json out(const PlaceFactor& f) {
  json o{{"place", f.place.p < 0 ? json("good") : out(f.place)},
         {"kind", f.kind},
         {"provenance", f.provenance},
         {"value", out(f.value)},
         {"phase", out(f.phase)}};
  if (f.rational) o["rational"] = out(*f.rational);
  if (f.ratio_to_unimodular) o["ratio_to_unimodular"] = out(*f.ratio_to_unimodular);
  if (!f.note.empty()) o["note"] = f.note;
  return o;
}

json cmd_coefficient(const Request& r) {
  auto d = make_incoherent_datum(lattice(r));
  auto t = moment(r);
  int n = t.rank();
  RMatrix y = RMatrix::Identity(n, n);
  if (r.has("y")) {
    const auto& yj = r["y"];
    if (yj[0].is_array()) {
      y = in_rmatrix(yj);
    } else {
      require(static_cast<int>(yj.size()) == n, "y must have n entries");
      for (int i = 0; i < n; ++i) y(i, i) = in_real(yj[i]);
    }
  }
  auto c = coefficient_derivative(d, t, y, r.counting);
  json factors = json::array();
  for (const auto& f : c.factors) factors.push_back(out(f));
  json o{{"t", out(c.t.t)},
         {"diff", out(c.diff)},
         {"order_bound", c.order_bound},
         {"vanishes", c.vanishes},
         {"complete", c.complete},
         {"factors", factors},
         {"assembled", out(c.assembled)},
         {"unit_phase", out(c.unit_phase)},
         {"q_t", out(c.q_t)},
         {"normalized", out(c.normalized)},
         {"missing", c.missing}};
  if (c.height)
    o["height"] = {{"via_nu", out(c.height->via_nu)}, {"via_density", out(c.height->via_density)},
                   {"exponents", c.height->exponents}, {"agree", c.height->agree}};
  return o;
}

json cmd_degree_prediction(const Request& r) {
  auto d = make_incoherent_datum(lattice(r));
  Rat cc = r.has("counting_constant") ? in_rat(r["counting_constant"]) : Rat(1);
  auto pr = degree_prediction(d, moment(r), cc, get_or(r.body, "vertex_type", 2), r.counting);
  json factors = json::array();
  for (const auto& f : pr.factors) factors.push_back(out(f));
  return {{"p", pr.p},
          {"height", {{"via_nu", out(pr.height.via_nu)}, {"via_density", out(pr.height.via_density)}}},
          {"vertex", {{"t", pr.vertex.t}, {"gram", out(pr.vertex.gram.s)}}},
          {"vertex_factor", out(pr.vertex_factor)},
          {"factors", factors},
          {"finite_product", out(pr.finite_product)},
          {"counting_constant", out(pr.counting_constant)},
          {"point_count", out(pr.point_count)},
          {"missing", pr.missing}};
}

json cmd_constants(const Request& r) {
  int nmax = get_or(r.body, "n_max", 6), lmax = get_or(r.body, "l_max", 6);
  json bs = json::array();
  bool law = true;
  for (int n = 1; n <= nmax; ++n) {
    auto b = b_infinity(n).exact;
    json e = out(b);
    e["n"] = n;
    if (n >= 2) {
      auto q = b_quotient(n);
      bool ok = b == b_infinity(n - 1).exact * q;
      law = law && ok;
      e["quotient"] = out(q);
      e["quotient_law"] = ok;
    }
    bs.push_back(e);
  }
  json vols = json::array();
  for (int l = 1; l <= lmax; ++l) {
    json e = out(so_volume(l));
    e["l"] = l;
    vols.push_back(e);
  }
  return {{"b_infinity", bs}, {"quotient_law_exact", law}, {"so_volume", vols}};
}

json cmd_whittaker_bound(const Request& r) {
  SignaturePair sig{r["signature"][0].get<int>(), r["signature"][1].get<int>()};
  return {{"signature", {sig.p_plus, sig.q_minus}}, {"order_lower_bound", whittaker_vanishing_bound(sig)}};
}

using Handler = json (*)(const Request&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"alsw-check", cmd_alsw_check},
      {"asymptotic-check", cmd_asymptotic_check},
      {"c-constant", cmd_c_constant},
      {"coefficient", cmd_coefficient},
      {"constants", cmd_constants},
      {"degree-prediction", cmd_degree_prediction},
      {"density", cmd_density},
      {"diff-set", cmd_diff_set},
      {"eta", cmd_eta},
      {"exp-integral", cmd_exp_integral},
      {"green", cmd_green},
      {"height-arch", cmd_height_arch},
      {"height-ratio", cmd_height_ratio},
      {"hilbert", cmd_hilbert},
      {"invariants", cmd_invariants},
      {"jordan", cmd_jordan},
      {"kummer-u", cmd_kummer_u},
      {"nu-p", cmd_nu_p},
      {"siegel-gamma", cmd_siegel_gamma},
      {"soylu", cmd_soylu},
      {"vertex-lattice", cmd_vertex_lattice},
      {"vol-ratio", cmd_vol_ratio},
      {"whittaker", cmd_whittaker},
      {"whittaker-bound", cmd_whittaker_bound},
  };
  return h;
}

const json& parsed_schema(const std::string& cmd) {
  static const std::map<std::string, json> cache = [] {
    std::map<std::string, json> m;
    for (const auto& [k, v] : schema::embedded()) m[k] = json::parse(v);
    return m;
  }();
  return cache.at(cmd);
}

asw_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_input: return ASW_ERR_INVALID;
    case ErrorKind::unsupported: return ASW_ERR_UNSUPPORTED;
    case ErrorKind::tolerance: return ASW_ERR_TOLERANCE;
    case ErrorKind::internal: return ASW_ERR_INTERNAL;
  }
  return ASW_ERR_INTERNAL;
}

template <class F>
asw_status guarded(asw_context* ctx, F&& f) {
  if (!ctx) return ASW_ERR_INVALID;
  ctx->result.clear();
  ctx->error.clear();
  try {
    f();
    return ASW_OK;
  } catch (const Error& e) {
    ctx->error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    ctx->error = std::string("bad request: ") + e.what();
    return ASW_ERR_INVALID;
  } catch (const std::exception& e) {
    ctx->error = std::string("internal error: ") + e.what();
    return ASW_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

asw_context* asw_context_new(void) { return new (std::nothrow) asw_context(); }

void asw_context_free(asw_context* ctx) { delete ctx; }

asw_status asw_set_option(asw_context* ctx, const char* key, const char* value) {
  return guarded(ctx, [&] {
    require(key && value, "option key and value are required");
    std::string k = key;
    double v = in_rat(json(std::string(value))).get_d();
    if (k == "threads") {
      require(v >= 1 && v <= 256, "threads must be in [1, 256]");
      ctx->counting.threads = static_cast<int>(v);
    } else if (k == "max_work") {
      require(v >= 1, "max_work must be positive");
      ctx->counting.max_work = v;
    } else if (k == "max_precision") {
      require(v >= 1 && v <= 16, "max_precision must be in [1, 16]");
      ctx->counting.max_precision = static_cast<int>(v);
    } else if (k == "tolerance") {
      require(v > 0, "tolerance must be positive");
      ctx->quadrature.tolerance = v;
    } else if (k == "node_budget") {
      require(v >= 1, "node_budget must be positive");
      ctx->quadrature.node_budget = static_cast<long>(v);
    } else {
      fail(ErrorKind::invalid_input, "unknown option \"" + k + "\"");
    }
  });
}

asw_status asw_invoke(asw_context* ctx, const char* command, const char* request_json) {
  return guarded(ctx, [&] {
    require(command != nullptr, "command is required");
    auto it = handlers().find(command);
    require(it != handlers().end(), std::string("unknown command \"") + command + "\"");
    json body;
    try {
      body = json::parse(request_json ? request_json : "{}");
    } catch (const json::parse_error& e) {
      fail(ErrorKind::invalid_input, std::string("request is not valid JSON: ") + e.what());
    }
    auto err = schema::validate(parsed_schema(command), body);
    if (!err.empty()) fail(ErrorKind::invalid_input, std::string("schema violation in ") + command + ": " + err);
    json res = it->second(Request(body, *ctx));
    res["command"] = command;
    ctx->result = res.dump(2);
  });
}

const char* asw_result(const asw_context* ctx) { return ctx ? ctx->result.c_str() : ""; }

const char* asw_last_error(const asw_context* ctx) { return ctx ? ctx->error.c_str() : "null context"; }

const char* asw_version(void) { return ASW_VERSION; }

const char* asw_schema(const char* command) {
  if (!command) return nullptr;
  auto it = schema::embedded().find(command);
  return it == schema::embedded().end() ? nullptr : it->second.c_str();
}

const char* asw_command_name(int i) {
  if (i < 0) return nullptr;
  for (const auto& [k, v] : handlers())
    if (i-- == 0) return k.c_str();
  return nullptr;
}

const char* asw_status_name(asw_status s) {
  switch (s) {
    case ASW_OK: return "ok";
    case ASW_ERR_TOLERANCE: return "tolerance";
    case ASW_ERR_INVALID: return "invalid";
    case ASW_ERR_UNSUPPORTED: return "unsupported";
    case ASW_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

asw_status asw_hilbert_symbol(asw_context* ctx, const char* a, const char* b, const char* place, int* out) {
  return guarded(ctx, [&] {
    require(a && b && place && out, "null argument");
    Rat x = parse_rational(a), y = parse_rational(b);
    require(x != 0 && y != 0, "Hilbert symbol needs nonzero arguments");
    *out = hilbert_symbol(x, y, in_place(json(std::string(place))));
    ctx->result = std::to_string(*out);
  });
}

asw_status asw_nu_p(asw_context* ctx, int a1, int a2, int a3, long p) {
  return guarded(ctx, [&] {
    require(a1 >= 0 && a2 >= 0 && a3 >= 0, "exponents must be nonnegative");
    in_odd_prime(json(p));
    ctx->result = to_string(nu_p(a1, a2, a3, p));
  });
}

asw_status asw_b_infinity(asw_context* ctx, int n, double* re, double* im) {
  return guarded(ctx, [&] {
    require(re && im, "null argument");
    auto b = b_infinity(n);
    *re = b.value().real();
    *im = b.value().imag();
    ctx->result = b.exact.str();
  });
}

}  // extern "C"
