// Exact representation counts through the Fourier expansion of the
// indicator of Q(x) = T over Sym_n(Z/p^k):
//
//   alpha_k(p^-r) = sum_B e(-tr(B T)/p^k) prod(normalized Gauss sums of B (x) L^(r)),
//
// where the Gauss-sum product only depends on the Z_p-class of B. Diagonal
// entries of B are grouped into unit-square classes, the class sums are
// evaluated in closed form in Q(sqrt(p*)), and only off-diagonal entries are
// enumerated.

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <tuple>

#include "asw/error.hpp"
#include "asw/localdensity.hpp"

namespace asw {

namespace {

// a + b sqrt(pstar), pstar = (-1/p) p, so that sqrt(pstar) is the Gauss sum
// sum_{x mod p} e(x^2/p).
struct Surd {
  Rat a, b;
};

Surd mul(const Surd& x, const Surd& y, const Rat& pstar) {
  return {x.a * y.a + x.b * y.b * pstar, x.a * y.b + x.b * y.a};
}

long modinv(long a, long m) {
  long g = m, x = 0, x1 = 1, a1 = a;
  while (a1) {
    long q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  return ((x % m) + m) % m;
}

struct PerIndex {
  int e = 0;     // p-exponent contributed
  int sign = 1;
  int m = 0;     // number of odd-length Gauss sums (powers of sqrt(pstar))
  int j = 0;     // level contributing X^j
};

struct Key {
  int v, e, par;
  bool operator<(const Key& o) const {
    if (v != o.v) return v < o.v;
    if (e != o.e) return e < o.e;
    return par < o.par;
  }
};

struct Engine {
  long p;
  int k;
  long M;
  int n;
  int minus1;  // (-1/p)
  std::vector<int> t_exp, t_leg;
  std::vector<int> l_exp, l_leg;
  std::vector<int> val, leg;
  std::vector<long> ppow, inv;
  std::vector<long> class_rep;
  std::vector<std::pair<int, int>> class_es;  // (e, s); e = k for the zero class
  // contrib[v * 2 + (leg == -1)]
  std::vector<PerIndex> contrib;

  void init() {
    M = 1;
    ppow.assign(k + 1, 1);
    for (int i = 1; i <= k; ++i) ppow[i] = ppow[i - 1] * p;
    M = ppow[k];
    val.assign(M, k);
    leg.assign(M, 0);
    inv.assign(M, 0);
    for (long x = 1; x < M; ++x) {
      long y = x;
      int v = 0;
      while (y % p == 0) {
        y /= p;
        ++v;
      }
      val[x] = v;
      leg[x] = legendre(y % p, p);
      if (v == 0) inv[x] = modinv(x, M);
    }
    minus1 = (p % 4 == 1) ? 1 : -1;
    long nr = least_nonresidue(p);
    class_rep = {0};
    class_es = {{k, 0}};
    for (int e = 0; e < k; ++e)
      for (int s : {1, -1}) {
        class_rep.push_back((ppow[e] * (s == 1 ? 1 : nr)) % M);
        class_es.emplace_back(e, s);
      }
    contrib.assign(2 * (k + 1), PerIndex{});
    for (int v = 0; v <= k; ++v)
      for (int lg : {1, -1}) {
        PerIndex pi;
        pi.j = k - v;
        for (size_t c = 0; c < l_exp.size(); ++c) {
          if (l_exp[c] >= pi.j) continue;
          int jj = pi.j - l_exp[c];
          if (jj % 2 == 0) {
            pi.e -= jj / 2;
          } else {
            pi.e -= (jj + 1) / 2;
            pi.sign *= lg * l_leg[c];
            pi.m += 1;
          }
        }
        contrib[v * 2 + (lg == -1)] = pi;
      }
  }

  // Z_p-diagonalize a symmetric matrix mod p^k in place; returns per-index
  // (valuation, legendre of unit part).
  void diagonalize(long* a, int* vs, int* ls) const {
    for (int i = 0; i < n; ++i) {
      int best = k + 1, br = -1, bc = -1;
      bool bdiag = false;
      for (int r = i; r < n; ++r)
        for (int c = r; c < n; ++c) {
          int v = val[a[r * n + c]];
          bool dg = r == c;
          if (v < best || (v == best && dg && !bdiag)) {
            best = v;
            br = r;
            bc = c;
            bdiag = dg;
          }
        }
      if (best >= k) {
        for (int r = i; r < n; ++r) {
          vs[r] = k;
          ls[r] = 1;
        }
        return;
      }
      if (!bdiag) {
        for (int x = 0; x < n; ++x) a[br * n + x] = (a[br * n + x] + a[bc * n + x]) % M;
        for (int x = 0; x < n; ++x) a[x * n + br] = (a[x * n + br] + a[x * n + bc]) % M;
      }
      if (br != i) {
        for (int x = 0; x < n; ++x) std::swap(a[i * n + x], a[br * n + x]);
        for (int x = 0; x < n; ++x) std::swap(a[x * n + i], a[x * n + br]);
      }
      long piv = a[i * n + i];
      int v = val[piv];
      long w = piv / ppow[v];
      long winv = inv[w % M];
      vs[i] = v;
      ls[i] = leg[piv];
      long q[8];
      for (int j = i + 1; j < n; ++j) q[j] = a[i * n + j] / ppow[v];
      for (int j = i + 1; j < n; ++j)
        for (int l = j; l < n; ++l) {
          long d = (ppow[v] * ((q[j] * q[l]) % M)) % M;
          d = (d * winv) % M;
          long nv = (a[j * n + l] - d) % M;
          if (nv < 0) nv += M;
          a[j * n + l] = nv;
          a[l * n + j] = nv;
        }
    }
  }

  // Sum of F over all off-diagonal fillings of a diagonal class tuple.
  int emin = 0, emax = 0, vmax = 0;

  void bounds(int l_rank) {
    int lo = 0, hi = 0;
    for (const auto& pi : contrib) {
      lo = std::min(lo, pi.e);
      hi = std::max(hi, pi.e);
    }
    emin = n * lo;
    emax = n * hi + (n * l_rank) / 2;
    vmax = n * k;
  }

  std::map<Key, long long> phi(const std::vector<int>& cls) const {
    int erange = emax - emin + 1;
    std::vector<long long> acc(static_cast<size_t>(vmax + 1) * erange * 2, 0);
    int nod = n * (n - 1) / 2;
    std::vector<long> off(nod, 0);
    std::vector<long> a(n * n);
    int vs[8], ls[8];
    while (true) {
      for (int i = 0; i < n; ++i) a[i * n + i] = class_rep[cls[i]];
      int idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          a[i * n + j] = off[idx];
          a[j * n + i] = off[idx];
          ++idx;
        }
      diagonalize(a.data(), vs, ls);
      int e = 0, sign = 1, m = 0, v = 0;
      for (int i = 0; i < n; ++i) {
        const PerIndex& pi = contrib[vs[i] * 2 + (ls[i] == -1)];
        e += pi.e;
        sign *= pi.sign;
        m += pi.m;
        v += pi.j;
      }
      e += m / 2;
      if ((m / 2) % 2 && minus1 == -1) sign = -sign;
      acc[(static_cast<size_t>(v) * erange + (e - emin)) * 2 + (m % 2)] += sign;
      int pos = 0;
      while (pos < nod) {
        if (++off[pos] < M) break;
        off[pos++] = 0;
      }
      if (pos == nod) break;
    }
    std::map<Key, long long> out;
    for (int v = 0; v <= vmax; ++v)
      for (int e = emin; e <= emax; ++e)
        for (int par = 0; par < 2; ++par) {
          long long c = acc[(static_cast<size_t>(v) * erange + (e - emin)) * 2 + par];
          if (c) out[Key{v, e, par}] = c;
        }
    return out;
  }

  Surd class_sum(int cls, int i) const {
    auto [e, s] = class_es[cls];
    if (e == k) return {1, 0};
    int m = k - e - t_exp[i];
    Rat mult(Int(ppow[k - e - 1]));
    if (m <= 0) return {mult * (p - 1) / 2, 0};
    if (m >= 2) return {0, 0};
    int lt = minus1 * t_leg[i];
    return {-mult / 2, Rat(s * lt) * mult / 2};
  }
};

void multisets(int classes, int n, int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int c = from; c < classes; ++c) {
    cur.push_back(c);
    multisets(classes, n, c, cur, out);
    cur.pop_back();
  }
}

double binom(int a, int b) {
  double r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

}  // namespace

double counting_work_estimate(int n, long p, int k) {
  int classes = 2 * k + 1;
  return binom(classes + n - 1, n) * std::pow(static_cast<double>(p), static_cast<double>(k) * n * (n - 1) / 2);
}

AlphaSeries alpha_series(long p, const LatticeGram& l, const MomentMatrix& t, int k, int rmax,
                         const CountingOptions& opt) {
  if (p == 2) fail(ErrorKind::unsupported, "local densities at p = 2 are not supported");
  require(p > 2 && is_prime(p), "p must be an odd prime");
  require(k >= 1, "precision k must be positive");
  require(rmax >= 0, "rmax must be nonnegative");
  int n = t.rank();
  require(n >= 1 && n <= 6, "T must have rank between 1 and 6");
  require(t.t.det() != 0, "T must be nonsingular");
  double work = counting_work_estimate(n, p, k);
  if (work > opt.max_work)
    fail(ErrorKind::unsupported, "counting too large: about " + std::to_string(static_cast<long long>(work)) +
                                     " matrix evaluations at precision " + std::to_string(k) +
                                     " (limit " + std::to_string(static_cast<long long>(opt.max_work)) + ")");
  double mk = std::pow(static_cast<double>(p), k);
  require(mk < 1e6, "p^k too large for the counting oracle");

  AlphaSeries out;
  out.p = p;
  out.k = k;
  out.work = work;
  int l_rank = l.rank();

  Engine eng;
  eng.p = p;
  eng.k = k;
  eng.n = n;
  for (const auto& d : diagonalize_p(l.s.scaled(Rat(1, 2)), p)) {
    int a = valuation(d, p);
    require(a >= 0, "lattice must be p-integral");
    eng.l_exp.push_back(a);
    eng.l_leg.push_back(legendre_unit(unit_part(d, p), p));
  }
  bool integral = true;
  for (const auto& d : diagonalize_p(t.t, p)) {
    int a = valuation(d, p);
    if (a < 0) integral = false;
    eng.t_exp.push_back(a);
    eng.t_leg.push_back(legendre_unit(unit_part(d, p), p));
  }
  for (int r = 0; r <= rmax; ++r) {
    int lr = l_rank + 2 * r;
    int ne = k * (n * lr - n * (n + 1) / 2);
    out.norm_exponent.push_back(ne);
  }
  if (!integral) {
    // Q(x) is p-integral on L^(r), so a non-integral T is never represented.
    out.alpha.assign(rmax + 1, Rat(0));
    out.count.assign(rmax + 1, Int(0));
    return out;
  }
  eng.init();
  eng.bounds(l_rank);

  int classes = static_cast<int>(eng.class_rep.size());
  std::vector<std::vector<int>> ms;
  std::vector<int> cur;
  multisets(classes, n, 0, cur, ms);

  std::vector<std::map<Key, long long>> phis(ms.size());
  int nt = std::max(1, opt.threads);
  if (nt == 1) {
    for (size_t i = 0; i < ms.size(); ++i) phis[i] = eng.phi(ms[i]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w)
      pool.emplace_back([&, w] {
        for (size_t i = w; i < ms.size(); i += nt) phis[i] = eng.phi(ms[i]);
      });
    for (auto& th : pool) th.join();
  }
  std::map<std::vector<int>, size_t> ms_index;
  for (size_t i = 0; i < ms.size(); ++i) ms_index[ms[i]] = i;

  Rat pstar(eng.minus1 * p);
  // Phi_r for each multiset as an element of Q(sqrt(pstar)).
  std::vector<std::vector<Surd>> phir(ms.size(), std::vector<Surd>(rmax + 1));
  for (size_t i = 0; i < ms.size(); ++i)
    for (const auto& [key, cnt] : phis[i]) {
      if (cnt == 0) continue;
      for (int r = 0; r <= rmax; ++r) {
        Rat term = Rat(Int(static_cast<long>(cnt))) * rpow(p, key.e - r * key.v);
        if (key.par) phir[i][r].b += term;
        else phir[i][r].a += term;
      }
    }

  std::vector<Surd> total(rmax + 1);
  std::vector<int> tuple(n, 0);
  while (true) {
    Surd w{1, 0};
    for (int i = 0; i < n && (w.a != 0 || w.b != 0); ++i) w = mul(w, eng.class_sum(tuple[i], i), pstar);
    if (w.a != 0 || w.b != 0) {
      auto sorted = tuple;
      std::sort(sorted.begin(), sorted.end());
      size_t idx = ms_index.at(sorted);
      for (int r = 0; r <= rmax; ++r) {
        Surd z = mul(w, phir[idx][r], pstar);
        total[r].a += z.a;
        total[r].b += z.b;
      }
    }
    int pos = 0;
    while (pos < n) {
      if (++tuple[pos] < classes) break;
      tuple[pos++] = 0;
    }
    if (pos == n) break;
  }

  for (int r = 0; r <= rmax; ++r) {
    if (total[r].b != 0) fail(ErrorKind::internal, "counting produced an irrational density");
    Rat a = total[r].a;
    Rat cnt = a * Rat(ipow(p, static_cast<unsigned>(out.norm_exponent[r])));
    if (cnt.get_den() != 1 || cnt < 0) fail(ErrorKind::internal, "counting produced a non-integral solution count");
    out.alpha.push_back(a);
    out.count.push_back(cnt.get_num());
  }
  return out;
}

CountingResult count_representations(long p, const LatticeGram& l, const MomentMatrix& t, int r, int k,
                                     const CountingOptions& opt) {
  require(t.rank() <= l.rank() + 2 * r, "need n <= l + 2r");
  auto a = alpha_series(p, l, t, k, r, opt);
  CountingResult res;
  res.k = k;
  res.count = a.count[r];
  res.norm_exponent = a.norm_exponent[r];
  res.normalized = a.alpha[r];
  auto b = alpha_series(p, l, t, k + 1, r, opt);
  res.normalized_next = b.alpha[r];
  res.stabilized = res.normalized == res.normalized_next;
  return res;
}

}  // namespace asw
