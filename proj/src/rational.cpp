#include "asw/rational.hpp"

#include <algorithm>

#include "asw/error.hpp"

namespace asw {

Rat parse_rational(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != ' ') t.push_back(c);
  require(!t.empty(), "empty rational");
  // Accept "a", "a/b" and finite decimals such as "-0.25".
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    require(t.find('/') == std::string::npos, "bad rational: " + s);
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg || (!ip.empty() && ip[0] == '+')) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    require(std::all_of(ip.begin(), ip.end(), ::isdigit) && std::all_of(fp.begin(), fp.end(), ::isdigit),
            "bad rational: " + s);
    Int num(ip + fp), den = ipow(10, static_cast<unsigned>(fp.size()));
    Rat q(num, den);
    q.canonicalize();
    return neg ? Rat(-q) : q;
  }
  Rat q;
  if (q.set_str(t, 10) != 0) fail(ErrorKind::invalid_input, "bad rational: " + s);
  require(q.get_den() != 0, "zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) { return q.get_str(); }

QMatrix QMatrix::identity(int n) {
  QMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::diagonal(const std::vector<Rat>& d) {
  QMatrix m(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
  return m;
}

bool QMatrix::is_symmetric() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < i; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

bool QMatrix::is_integral() const {
  for (const auto& x : a_)
    if (x.get_den() != 1) return false;
  return true;
}

Rat QMatrix::det() const {
  QMatrix m = *this;
  Rat d = 1;
  for (int c = 0; c < n_; ++c) {
    int piv = -1;
    for (int r = c; r < n_; ++r)
      if (m(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n_; ++j) std::swap(m(piv, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (int r = c + 1; r < n_; ++r) {
      if (m(r, c) == 0) continue;
      Rat f = m(r, c) / m(c, c);
      for (int j = c; j < n_; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return d;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::scaled(const Rat& c) const {
  QMatrix t = *this;
  for (auto& x : t.a_) x *= c;
  return t;
}

QMatrix QMatrix::block(int from, int len) const {
  QMatrix b(len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j) b(i, j) = (*this)(from + i, from + j);
  return b;
}

QMatrix operator*(const QMatrix& x, const QMatrix& y) {
  int n = x.size();
  QMatrix z(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (x(i, k) == 0) continue;
      for (int j = 0; j < n; ++j) z(i, j) += x(i, k) * y(k, j);
    }
  return z;
}

QMatrix block_diag(const QMatrix& x, const QMatrix& y) {
  int a = x.size(), b = y.size();
  QMatrix z(a + b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) z(i, j) = x(i, j);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) z(a + i, a + j) = y(i, j);
  return z;
}

QMatrix congruence(const QMatrix& a, const QMatrix& g) { return g.transpose() * a * g; }

int valuation(const Int& a, long p) {
  require(a != 0, "valuation of zero");
  Int x = abs(a);
  int v = 0;
  while (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p))) {
    x /= p;
    ++v;
  }
  return v;
}

int valuation(const Rat& a, long p) {
  require(a != 0, "valuation of zero");
  return valuation(Int(a.get_num()), p) - valuation(Int(a.get_den()), p);
}

Rat unit_part(const Rat& a, long p) {
  int v = valuation(a, p);
  Rat u = a;
  if (v > 0) u /= Rat(ipow(p, static_cast<unsigned>(v)));
  if (v < 0) u *= Rat(ipow(p, static_cast<unsigned>(-v)));
  return u;
}

long residue(const Rat& a, long p, long m) {
  require(mpz_divisible_ui_p(a.get_den_mpz_t(), static_cast<unsigned long>(p)) == 0,
          "residue of a non-p-integral rational");
  Int M(m), num = a.get_num(), den = a.get_den(), inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), M.get_mpz_t());
  Int r = (num * inv) % M;
  if (r < 0) r += M;
  return r.get_si();
}

int legendre(long a, long p) {
  long r = ((a % p) + p) % p;
  if (r == 0) return 0;
  Int A(r), P(p);
  return mpz_legendre(A.get_mpz_t(), P.get_mpz_t());
}

int legendre_unit(const Rat& a, long p) {
  require(valuation(a, p) == 0, "legendre symbol of a non-unit");
  return legendre(residue(a, p, p), p);
}

long least_nonresidue(long p) {
  for (long a = 2; a < p; ++a)
    if (legendre(a, p) == -1) return a;
  fail(ErrorKind::invalid_input, "no quadratic non-residue modulo " + std::to_string(p));
}

bool is_prime(long p) {
  if (p < 2) return false;
  Int P(p);
  return mpz_probab_prime_p(P.get_mpz_t(), 30) > 0;
}

Int ipow(long base, unsigned e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base < 0 ? -base : base), e);
  if (base < 0 && (e & 1)) r = -r;
  return r;
}

Rat rpow(long base, int e) {
  if (e >= 0) return Rat(ipow(base, static_cast<unsigned>(e)));
  return Rat(Int(1), ipow(base, static_cast<unsigned>(-e)));
}

std::vector<long> prime_factors(Int n) {
  std::vector<long> out;
  n = abs(n);
  require(n != 0, "factorization of zero");
  for (long q = 2; n > 1; ++q) {
    if (Int(q) * q > n) {
      require(n.fits_slong_p(), "integer too large to factor");
      out.push_back(n.get_si());
      break;
    }
    require(q < 100000000L, "integer too large to factor");
    if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q))) {
      out.push_back(q);
      while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q))) n /= q;
    }
  }
  return out;
}

Int squarefree_kernel(const Rat& a) {
  require(a != 0, "square class of zero");
  Int x = Int(a.get_num()) * Int(a.get_den());
  Int k = sgn(x) < 0 ? Int(-1) : Int(1);
  for (long q : prime_factors(x))
    if (valuation(x, q) % 2) k *= q;
  return k;
}

}  // namespace asw
