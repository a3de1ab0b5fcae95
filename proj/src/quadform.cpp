#include "asw/quadform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "asw/error.hpp"

namespace asw {

std::complex<double> Root8::value() const {
  static const double h = std::sqrt(0.5);
  static const std::complex<double> tab[8] = {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
  return tab[k];
}

std::string Root8::str() const { return "e(" + std::to_string(k) + "/8)"; }

MomentMatrix::MomentMatrix(QMatrix m) : t(std::move(m)) { require(t.is_symmetric(), "moment matrix must be symmetric"); }

LatticeGram::LatticeGram(QMatrix m) : s(std::move(m)) {
  require(s.is_symmetric(), "Gram matrix must be symmetric");
  require(s.is_integral(), "Gram matrix must be integral");
  require(s.size() == 0 || s.det() != 0, "Gram matrix must be nonsingular");
}

MomentMatrix moment_of(const LatticeGram& l) { return MomentMatrix(l.s.scaled(Rat(1, 2))); }

LatticeGram gram_of(const MomentMatrix& t) { return LatticeGram(t.t.scaled(2)); }

LatticeGram hyperbolic_plane() {
  QMatrix h(2);
  h(0, 1) = 1;
  h(1, 0) = 1;
  return LatticeGram(h);
}

LatticeGram diagonal_lattice(const std::vector<Rat>& q_diagonal) {
  std::vector<Rat> g;
  for (const auto& d : q_diagonal) g.push_back(2 * d);
  return LatticeGram(QMatrix::diagonal(g));
}

std::vector<Rat> JordanForm::diagonal() const {
  std::vector<Rat> d;
  for (const auto& b : blocks)
    for (const auto& u : b.units) d.push_back(u * rpow(p, b.exponent));
  return d;
}

std::vector<int> JordanForm::exponents() const {
  std::vector<int> e;
  for (const auto& b : blocks)
    for (size_t i = 0; i < b.units.size(); ++i) e.push_back(b.exponent);
  return e;
}

int JordanForm::rank_at(int exponent) const {
  for (const auto& b : blocks)
    if (b.exponent == exponent) return static_cast<int>(b.units.size());
  return 0;
}

namespace {

// Square class of a rational as an integer a = num*den with the same class.
Int class_int(const Rat& a) { return Int(a.get_num()) * Int(a.get_den()); }

int hilbert_odd(const Int& a, const Int& b, long p) {
  int alpha = valuation(a, p), beta = valuation(b, p);
  Int u = a, v = b;
  for (int i = 0; i < alpha; ++i) u /= p;
  for (int i = 0; i < beta; ++i) v /= p;
  Int P(p);
  int s = 1;
  if ((alpha * beta) % 2 && (p % 4 == 3)) s = -s;
  if (beta % 2) s *= mpz_legendre(u.get_mpz_t(), P.get_mpz_t());
  if (alpha % 2) s *= mpz_legendre(v.get_mpz_t(), P.get_mpz_t());
  return s;
}

int hilbert_two(const Int& a, const Int& b) {
  int alpha = valuation(a, 2), beta = valuation(b, 2);
  Int u = a >> alpha, v = b >> beta;
  long u8 = mpz_fdiv_ui(u.get_mpz_t(), 8), v8 = mpz_fdiv_ui(v.get_mpz_t(), 8);
  auto eps = [](long x) { return ((x - 1) / 2) % 2; };
  auto omega = [](long x) { return ((x * x - 1) / 8) % 2; };
  long e = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8);
  return (e % 2) ? -1 : 1;
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, Place v) {
  require(a != 0 && b != 0, "Hilbert symbol of zero");
  if (v.is_infinite()) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
  require(is_prime(v.p), "place must be a prime or infinity");
  Int A = class_int(a), B = class_int(b);
  return v.p == 2 ? hilbert_two(A, B) : hilbert_odd(A, B, v.p);
}

std::vector<Rat> diagonalize(const QMatrix& a0) {
  require(a0.is_symmetric(), "diagonalize: matrix must be symmetric");
  QMatrix a = a0;
  int n = a.size();
  std::vector<Rat> d;
  for (int i = 0; i < n; ++i) {
    if (a(i, i) == 0) {
      int r = -1;
      for (int j = i + 1; j < n && r < 0; ++j)
        if (a(j, j) != 0) r = j;
      if (r >= 0) {
        for (int k = 0; k < n; ++k) std::swap(a(i, k), a(r, k));
        for (int k = 0; k < n; ++k) std::swap(a(k, i), a(k, r));
      } else {
        int c = -1;
        for (int j = i + 1; j < n && c < 0; ++j)
          if (a(i, j) != 0) c = j;
        require(c >= 0, "diagonalize: matrix is singular");
        // e_i <- e_i + e_c makes the pivot 2 a_ic != 0.
        for (int k = 0; k < n; ++k) a(i, k) += a(c, k);
        for (int k = 0; k < n; ++k) a(k, i) += a(k, c);
      }
    }
    for (int j = i + 1; j < n; ++j) {
      if (a(j, i) == 0) continue;
      Rat f = a(j, i) / a(i, i);
      for (int k = 0; k < n; ++k) a(j, k) -= f * a(i, k);
      for (int k = 0; k < n; ++k) a(k, j) -= f * a(k, i);
    }
    d.push_back(a(i, i));
  }
  return d;
}

std::vector<Rat> diagonalize_p(const QMatrix& a0, long p) {
  require(p > 2 && is_prime(p), "p-adic diagonalization needs an odd prime");
  require(a0.is_symmetric(), "diagonalize: matrix must be symmetric");
  QMatrix a = a0;
  int n = a.size();
  std::vector<Rat> d;
  auto swap_idx = [&](int i, int r) {
    if (i == r) return;
    for (int k = 0; k < n; ++k) std::swap(a(i, k), a(r, k));
    for (int k = 0; k < n; ++k) std::swap(a(k, i), a(k, r));
  };
  for (int i = 0; i < n; ++i) {
    int best = 0, br = -1, bc = -1;
    bool best_diag = false;
    for (int r = i; r < n; ++r)
      for (int c = r; c < n; ++c) {
        if (a(r, c) == 0) continue;
        int v = valuation(a(r, c), p);
        bool dg = (r == c);
        if (br < 0 || v < best || (v == best && dg && !best_diag)) {
          best = v;
          br = r;
          bc = c;
          best_diag = dg;
        }
      }
    require(br >= 0, "diagonalize: matrix is singular");
    if (!best_diag) {
      // Minimal valuation only off the diagonal: e_r <- e_r + e_c.
      for (int k = 0; k < n; ++k) a(br, k) += a(bc, k);
      for (int k = 0; k < n; ++k) a(k, br) += a(k, bc);
    }
    swap_idx(i, br);
    for (int j = i + 1; j < n; ++j) {
      if (a(j, i) == 0) continue;
      Rat f = a(j, i) / a(i, i);
      for (int k = 0; k < n; ++k) a(j, k) -= f * a(i, k);
      for (int k = 0; k < n; ++k) a(k, j) -= f * a(k, i);
    }
    d.push_back(a(i, i));
  }
  return d;
}

JordanForm jordan_decompose(long p, const MomentMatrix& t) {
  if (p == 2) fail(ErrorKind::unsupported, "Jordan decomposition at p = 2 is not supported");
  require(p > 2 && is_prime(p), "p must be an odd prime");
  require(t.rank() > 0 && t.t.det() != 0, "Jordan decomposition needs a nonsingular matrix");
  for (int i = 0; i < t.rank(); ++i)
    for (int j = 0; j < t.rank(); ++j)
      require(t.t(i, j) == 0 || valuation(t.t(i, j), p) >= 0, "matrix must be p-integral");
  auto d = diagonalize_p(t.t, p);
  std::vector<std::pair<int, Rat>> ev;
  for (const auto& x : d) ev.emplace_back(valuation(x, p), unit_part(x, p));
  std::stable_sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  JordanForm jf;
  jf.p = p;
  jf.rank = t.rank();
  long nr = least_nonresidue(p);
  for (size_t i = 0; i < ev.size();) {
    size_t j = i;
    int cls = 1;
    while (j < ev.size() && ev[j].first == ev[i].first) cls *= legendre_unit(ev[j++].second, p);
    JordanBlock b;
    b.exponent = ev[i].first;
    b.units.assign(j - i, Rat(1));
    if (cls == -1) b.units.back() = nr;
    jf.blocks.push_back(b);
    i = j;
  }
  return jf;
}

bool equivalent(const JordanForm& a, const JordanForm& b) {
  return a.p == b.p && a.rank == b.rank && a.blocks == b.blocks;
}

int hasse_invariant(Place v, const std::vector<Rat>& d) {
  for (const auto& x : d) require(x != 0, "Hasse invariant of a degenerate form");
  int h = 1;
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j) h *= hilbert_symbol(d[i], d[j], v);
  return h;
}

SignaturePair signature(const std::vector<Rat>& d) {
  SignaturePair s;
  for (const auto& x : d) {
    require(x != 0, "signature of a degenerate form");
    (sgn(x) > 0 ? s.p_plus : s.q_minus)++;
  }
  return s;
}

SignaturePair signature(const QMatrix& a) { return signature(diagonalize(a)); }

int LocalInvariants::chi(const Rat& a) const { return hilbert_symbol(a, discriminant, place); }

LocalInvariants local_invariants(Place v, const std::vector<Rat>& d) {
  LocalInvariants li;
  li.place = v;
  li.dimension = static_cast<int>(d.size());
  Rat det = 1;
  for (const auto& x : d) det *= x;
  require(det != 0, "degenerate form");
  li.hasse = hasse_invariant(v, d);
  long l = li.dimension;
  li.discriminant = ((l * (l - 1) / 2) % 2) ? Rat(-det) : det;
  if (v.is_infinite()) {
    li.det_unit = sgn(det);
    li.det_valuation_parity = 0;
  } else {
    int val = valuation(det, v.p);
    li.det_valuation_parity = ((val % 2) + 2) % 2;
    Rat u = unit_part(det, v.p);
    if (v.p == 2) {
      li.det_unit = static_cast<long>(mpz_fdiv_ui(class_int(u).get_mpz_t(), 8));
    } else {
      li.det_unit = legendre_unit(u, v.p) == 1 ? 1 : least_nonresidue(v.p);
    }
  }
  return li;
}

Root8 gamma_real(SignaturePair sig, int n) { return Root8(n * (sig.q_minus - sig.p_plus)); }

namespace {

Root8 snap_root8(std::complex<double> z) {
  for (int k = 0; k < 8; ++k)
    if (std::abs(z - Root8(k).value()) < 1e-7) return Root8(k);
  fail(ErrorKind::internal, "Gauss sum did not normalize to an eighth root of unity");
}

// sum_{x mod m} e(u x^2 / m)
std::complex<double> gauss_sum(long u, long m) {
  double re = 0, im = 0;
  for (long x = 0; x < m; ++x) {
    long r = static_cast<long>((static_cast<__int128>(u) * x % m) * x % m);
    double ang = 2 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
    re += std::cos(ang);
    im += std::sin(ang);
  }
  return {re, im};
}

}  // namespace

Root8 weil_index_p(const Rat& a, long p) {
  if (p == 2) fail(ErrorKind::unsupported, "Weil index at p = 2 is not supported");
  require(p > 2 && is_prime(p), "p must be an odd prime");
  require(a != 0, "Weil index of zero");
  int v = valuation(a, p);
  Rat u = unit_part(a, p);
  if (v % 2) {
    // Odd valuation: normalized quadratic Gauss sum modulo p.
    require(p < 50000000L, "prime too large for Gauss-sum enumeration");
    long ur = residue(u, p, p);
    return snap_root8(gauss_sum(ur, p) / std::sqrt(static_cast<double>(p)));
  }
  // Even valuation: the unramified sum p^(-1) sum_{x mod p^2} e(u x^2/p^2) = 1.
  if (p <= 3000) {
    long m = p * p;
    long ur = residue(u, p, m);
    return snap_root8(gauss_sum(ur, m) / static_cast<double>(p));
  }
  return Root8(0);
}

Root8 gamma_space_p(long p, const std::vector<Rat>& d) {
  Root8 g;
  for (const auto& x : d) g = g * weil_index_p(x, p);
  return g;
}

bool local_represents(Place v, const std::vector<Rat>& space, const MomentMatrix& t) {
  int n = t.rank();
  require(static_cast<int>(space.size()) == n + 1, "local_represents needs a space of dimension rank(T)+1");
  require(n > 0 && t.t.det() != 0, "T must be nonsingular");
  for (const auto& x : space) require(x != 0, "space must be nondegenerate");
  auto dt = diagonalize(t.t);
  if (v.is_infinite()) {
    auto sv = signature(space), st = signature(dt);
    return st.p_plus <= sv.p_plus && st.q_minus <= sv.q_minus;
  }
  Rat dv = 1, dtd = 1;
  for (const auto& x : space) dv *= x;
  for (const auto& x : dt) dtd *= x;
  auto w = dt;
  w.push_back(dv / dtd);
  return hasse_invariant(v, w) == hasse_invariant(v, space);
}

std::vector<long> relevant_primes(const std::vector<std::vector<Rat>>& diagonals) {
  std::set<long> ps{2};
  for (const auto& d : diagonals)
    for (const auto& x : d) {
      for (long q : prime_factors(Int(x.get_num()))) ps.insert(q);
      for (long q : prime_factors(Int(x.get_den()))) ps.insert(q);
    }
  return {ps.begin(), ps.end()};
}

std::vector<Place> diff_set(const QMatrix& v_gram, const MomentMatrix& t) {
  require(v_gram.is_symmetric() && v_gram.det() != 0, "V must be a nondegenerate symmetric Gram matrix");
  auto vd = diagonalize(v_gram);
  for (auto& x : vd) x /= 2;
  auto sig = signature(vd);
  require(sig.q_minus == 2, "V must have signature (m,2)");
  int m = sig.p_plus;
  require(t.rank() == m + 1, "T must have rank m+1");
  require(t.t.det() != 0, "T must be nonsingular");
  auto td = diagonalize(t.t);
  std::vector<Place> out;
  for (long q : relevant_primes({vd, td}))
    if (!local_represents(Place::prime(q), vd, t)) out.push_back(Place::prime(q));
  auto st = signature(td);
  if (st.q_minus > 0) out.push_back(Place::infinity());
  return out;
}

}  // namespace asw
