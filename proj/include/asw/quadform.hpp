#pragma once

#include <complex>
#include <string>
#include <vector>

#include "asw/rational.hpp"

namespace asw {

// A place of Q: a prime, or infinity (p == 0).
struct Place {
  long p = 0;
  static Place infinity() { return Place{0}; }
  static Place prime(long q) { return Place{q}; }
  bool is_infinite() const { return p == 0; }
  std::string str() const { return p == 0 ? "inf" : std::to_string(p); }
  bool operator==(const Place& o) const { return p == o.p; }
  // Finite primes ascending, infinity last.
  bool operator<(const Place& o) const {
    if (p == 0) return false;
    if (o.p == 0) return true;
    return p < o.p;
  }
};

// e(k/8) = exp(2 pi i k / 8), kept as the exponent k mod 8.
struct Root8 {
  int k = 0;
  Root8() = default;
  explicit Root8(int e) : k(((e % 8) + 8) % 8) {}
  Root8 operator*(Root8 o) const { return Root8(k + o.k); }
  Root8 inverse() const { return Root8(-k); }
  Root8 pow(int e) const { return Root8(k * e); }
  bool operator==(Root8 o) const { return k == o.k; }
  std::complex<double> value() const;
  std::string str() const;  // "e(k/8)"
};

// Moment matrix T = Q(x): Q(x) = x^T T x on the spanned space.
struct MomentMatrix {
  QMatrix t;
  MomentMatrix() = default;
  explicit MomentMatrix(QMatrix m);
  int rank() const { return t.size(); }
};

// Bilinear Gram matrix S = ((e_i, e_j)) of a lattice, Q(x) = x^T S x / 2.
struct LatticeGram {
  QMatrix s;
  LatticeGram() = default;
  explicit LatticeGram(QMatrix m);
  int rank() const { return s.size(); }
  Rat det() const { return s.det(); }
};

// Q(x) = x^T (S/2) x; the moment matrix of a basis.
MomentMatrix moment_of(const LatticeGram& l);
LatticeGram gram_of(const MomentMatrix& t);
// Hyperbolic plane Q(x, y) = xy.
LatticeGram hyperbolic_plane();
// Lattice with Q(x) = sum d_i x_i^2, i.e. Gram diag(2 d_i).
LatticeGram diagonal_lattice(const std::vector<Rat>& q_diagonal);

struct SignaturePair {
  int p_plus = 0;
  int q_minus = 0;
  int dimension() const { return p_plus + q_minus; }
};

struct JordanBlock {
  int exponent = 0;
  std::vector<Rat> units;
  bool operator==(const JordanBlock& o) const { return exponent == o.exponent && units == o.units; }
};

// Jordan splitting over Z_p (p odd) in the normal form where each block is
// <1, ..., 1, c> with c = 1 or the least quadratic non-residue mod p.
struct JordanForm {
  long p = 0;
  std::vector<JordanBlock> blocks;
  int rank = 0;
  std::vector<Rat> diagonal() const;  // the Q-diagonal p^e * u, block by block
  std::vector<int> exponents() const; // one per basis vector, nondecreasing
  int rank_at(int exponent) const;
};

struct LocalInvariants {
  Place place;
  int dimension = 0;
  Rat det_unit;       // representative of the unit part of det (sign at infinity)
  int det_valuation_parity = 0;
  int hasse = 1;
  Rat discriminant;   // (-1)^(l(l-1)/2) det
  int chi(const Rat& a) const;  // (a, discriminant)_place
};

int hilbert_symbol(const Rat& a, const Rat& b, Place v);

// Q-diagonalization over Q of x -> x^T A x.
std::vector<Rat> diagonalize(const QMatrix& a);
// Diagonalization over Z_(p) with p-adic pivoting; every step is invertible over Z_p.
std::vector<Rat> diagonalize_p(const QMatrix& a, long p);

JordanForm jordan_decompose(long p, const MomentMatrix& t);
bool equivalent(const JordanForm& a, const JordanForm& b);

int hasse_invariant(Place v, const std::vector<Rat>& d);
LocalInvariants local_invariants(Place v, const std::vector<Rat>& d);
SignaturePair signature(const std::vector<Rat>& d);
SignaturePair signature(const QMatrix& a);

Root8 gamma_real(SignaturePair sig, int n);
Root8 weil_index_p(const Rat& a, long p);
Root8 gamma_space_p(long p, const std::vector<Rat>& d);

// Codimension-one representation test: does the space with Q-diagonal `space`
// (dimension n+1) represent the rank-n moment matrix T at the place?
bool local_represents(Place v, const std::vector<Rat>& space, const MomentMatrix& t);

// Places where the incoherent collection built from V (Gram of signature
// (m,2)) fails to represent T of rank m+1.
std::vector<Place> diff_set(const QMatrix& v_gram, const MomentMatrix& t);

// Primes where some Q-diagonal entry of the inputs is not a unit, plus 2.
std::vector<long> relevant_primes(const std::vector<std::vector<Rat>>& diagonals);

}  // namespace asw
