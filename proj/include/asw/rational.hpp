#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace asw {

using Int = mpz_class;
using Rat = mpq_class;

// Canonicalized a/b; mpq_class(a, b) alone does not reduce.
inline Rat frac(long a, long b) {
  Rat q(a, b);
  q.canonicalize();
  return q;
}

Rat parse_rational(const std::string& s);
std::string to_string(const Rat& q);

// Dense square matrix of exact rationals.
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}
  static QMatrix identity(int n);
  static QMatrix diagonal(const std::vector<Rat>& d);

  int size() const { return n_; }
  Rat& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const Rat& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  bool is_symmetric() const;
  bool is_integral() const;
  Rat det() const;
  QMatrix transpose() const;
  QMatrix scaled(const Rat& c) const;
  // Principal block [from, from+len).
  QMatrix block(int from, int len) const;
  bool operator==(const QMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }

 private:
  int n_ = 0;
  std::vector<Rat> a_;
};

QMatrix operator*(const QMatrix& x, const QMatrix& y);
QMatrix block_diag(const QMatrix& x, const QMatrix& y);

// Congruence transform g^T A g.
QMatrix congruence(const QMatrix& a, const QMatrix& g);

// p-adic helpers on rationals. valuation(0) is undefined and rejected.
int valuation(const Int& a, long p);
int valuation(const Rat& a, long p);
// a / p^v(a), still a rational with numerator and denominator prime to p.
Rat unit_part(const Rat& a, long p);
// Residue of a p-integral rational modulo m (m a power of p).
long residue(const Rat& a, long p, long m);
// Legendre symbol (a/p) of a p-adic unit given as rational.
int legendre_unit(const Rat& a, long p);
int legendre(long a, long p);
long least_nonresidue(long p);
bool is_prime(long p);
Int ipow(long base, unsigned e);
Rat rpow(long base, int e);

// Square-free kernel of a nonzero rational (sign kept): the integer d with
// a = d * square.
Int squarefree_kernel(const Rat& a);

std::vector<long> prime_factors(Int n);

}  // namespace asw
