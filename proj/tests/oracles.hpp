#pragma once

// Test-side oracles. They share no code with the library beyond the Rat type.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline long squarefree(long a) {
  long s = a < 0 ? -1 : 1, m = std::labs(a);
  for (long d = 2; d * d <= m; ++d)
    while (m % (d * d) == 0) m /= d * d;
  return s * m;
}

inline long mod(long a, long m) { return ((a % m) + m) % m; }

// (a, b)_p for odd p: a x^2 + b y^2 = z^2 has a primitive solution mod p^2.
// After reducing a, b to squarefree integers that is equivalent to a primitive
// p-adic solution.
inline int hilbert_by_search(long a, long b, long p) {
  a = squarefree(a);
  b = squarefree(b);
  long m = p * p;
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y)
      for (long z = 0; z < m; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        if (mod(a * x * x + b * y * y - z * z, m) == 0) return 1;
      }
  return -1;
}

// Phase of the quadratic Gauss sum attached to a = p^v u:
// sum over y mod p^K of e(u y^2 / p^K), K = 1 for odd v and 2 for even v.
inline std::complex<double> normalized_gauss_sum(long a, long p) {
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  long m = v % 2 ? p : p * p;
  std::complex<double> s = 0;
  for (long y = 0; y < m; ++y)
    s += std::polar(1.0, 2 * std::numbers::pi * double(mod(a * y % m * y, m)) / double(m));
  return s / std::abs(s);
}

// Number of X in M_{m x n}(Z / p^k) with X^T (S/2) X = T mod p^k, by plain
// enumeration. S is the integral Gram matrix (m x m), T a moment matrix with
// p-integral entries. p is odd.
inline mpz_class count_brute(long p, const std::vector<std::vector<long>>& s, const std::vector<std::vector<mpq_class>>& t,
                             int k) {
  int m = static_cast<int>(s.size()), n = static_cast<int>(t.size());
  long q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  long inv2 = (q + 1) / 2;
  // T entries reduced mod q
  std::vector<long> tr(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mpz_class num = t[i][j].get_num(), den = t[i][j].get_den();
      mpz_class inv;
      mpz_class qq = q;
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), qq.get_mpz_t());
      mpz_class r = num * inv;
      mpz_class rr;
      mpz_fdiv_r(rr.get_mpz_t(), r.get_mpz_t(), qq.get_mpz_t());
      tr[i * n + j] = rr.get_si();
    }
  std::vector<long> x(m * n, 0);
  mpz_class count = 0;
  long total = 1;
  for (int i = 0; i < m * n; ++i) total *= q;
  for (long it = 0; it < total; ++it) {
    long c = it;
    for (int i = 0; i < m * n; ++i) {
      x[i] = c % q;
      c /= q;
    }
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      for (int b = a; b < n && ok; ++b) {
        long acc = 0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) acc = (acc + s[i][j] * x[i * n + a] % q * x[j * n + b]) % q;
        acc = mod(acc * inv2, q);
        ok = acc == tr[a * n + b];
      }
    if (ok) ++count;
  }
  return count;
}

// Normalized count p^{k (n(n+1)/2 - m n)} N_k.
inline mpq_class alpha_brute(long p, const std::vector<std::vector<long>>& s, const std::vector<std::vector<mpq_class>>& t,
                             int k) {
  int m = static_cast<int>(s.size()), n = static_cast<int>(t.size());
  int e = k * (n * (n + 1) / 2 - m * n);
  mpz_class pe;
  mpz_ui_pow_ui(pe.get_mpz_t(), p, std::abs(e));
  mpq_class r = count_brute(p, s, t, k);
  if (e >= 0) r *= pe;
  else r /= pe;
  r.canonicalize();
  return r;
}

}  // namespace oracle
