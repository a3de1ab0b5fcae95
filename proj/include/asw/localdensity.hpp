#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "asw/quadform.hpp"
#include "asw/rational.hpp"

namespace asw {

// Knobs for the counting oracle. `max_work` bounds the number of matrix
// evaluations of a single precision level; `threads` only changes wall time,
// never the result.
struct CountingOptions {
  double max_work = 6e8;
  int threads = 1;
  int max_precision = 8;
};

struct CountingResult {
  int k = 0;
  Int count;               // N_k
  int norm_exponent = 0;   // normalized = p^(-norm_exponent) N_k
  Rat normalized;
  bool stabilized = false; // normalized value at k equals the one at k+1
  Rat normalized_next;
};

// Normalized counts alpha_k(p^-r) for r = 0..rmax at a fixed precision k.
struct AlphaSeries {
  long p = 0;
  int k = 0;
  std::vector<Rat> alpha;
  std::vector<Int> count;
  std::vector<int> norm_exponent;
  double work = 0;  // matrix evaluations performed
};

double counting_work_estimate(int n, long p, int k);

AlphaSeries alpha_series(long p, const LatticeGram& l, const MomentMatrix& t, int k, int rmax,
                         const CountingOptions& opt = {});

CountingResult count_representations(long p, const LatticeGram& l, const MomentMatrix& t, int r, int k,
                                     const CountingOptions& opt = {});

enum class Provenance { closed_form, interpolated };
std::string to_string(Provenance p);

struct DensityPolynomial {
  long p = 0;
  std::vector<Rat> coeffs;  // in X = p^(-s), lowest degree first
  Provenance provenance = Provenance::closed_form;
  int precision = 0;        // counting precision used (interpolated only)

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const;
  Rat eval(const Rat& x) const;
  Rat derivative(const Rat& x) const;
  bool operator==(const DensityPolynomial& o) const { return coeffs == o.coeffs; }
};

DensityPolynomial poly_mul(const DensityPolynomial& a, const DensityPolynomial& b);

// chi_L(p) for a p-unimodular lattice of even rank, 0 for odd rank.
int delta_unimodular(long p, const LatticeGram& l);

DensityPolynomial density_unimodular_T(long p, const LatticeGram& l, const MomentMatrix& t);
DensityPolynomial density_scaled_split(long p, const LatticeGram& l1, const LatticeGram& l0,
                                       const MomentMatrix& t);
// Splits L by its Jordan decomposition and applies the scaled-split reduction.
DensityPolynomial density_scaled_split(long p, const LatticeGram& l, const MomentMatrix& t);

int interpolation_degree_bound(long p, const MomentMatrix& t);
DensityPolynomial density_polynomial_general(long p, const LatticeGram& l, const MomentMatrix& t,
                                             const CountingOptions& opt = {});
// Closed form when both inputs are p-unimodular, counting otherwise.
DensityPolynomial density_polynomial(long p, const LatticeGram& l, const MomentMatrix& t,
                                     const CountingOptions& opt = {});

// W_T(1,s) = (gamma(L) / sqrt[L':L])^n alpha(p^-s).
struct WhittakerFiniteValue {
  long p = 0;
  int n = 0;
  Root8 gamma_n;           // gamma(L)^n
  int index_valuation = 0; // [L':L] = p^index_valuation
  DensityPolynomial alpha;
  Rat value_at_0;          // alpha(1); W(0) = prefactor * value_at_0
  Rat derivative_coeff;    // -alpha'(1); W'(0) = prefactor * derivative_coeff * log p
  std::complex<double> prefactor() const;
};

WhittakerFiniteValue whittaker_finite(long p, const LatticeGram& l, const MomentMatrix& t,
                                      const CountingOptions& opt = {});

Rat nu_p(int a1, int a2, int a3, long p);

enum class SoyluClass { zero_dimensional, higher_dimensional, out_of_scope };
std::string to_string(SoyluClass c);

struct SoyluReport {
  SoyluClass cls = SoyluClass::out_of_scope;
  int unimodular_rank = 0;  // r(T)
  int n = 0;
  std::string reason;
};

SoyluReport soylu_classify(long p, const LatticeGram& l, const MomentMatrix& t);

struct HeightRatio {
  std::array<int, 3> exponents{};  // (a1, a2, a3) of T2
  Rat via_nu;                      // path (a)
  Rat via_density;                 // path (b): -alpha'(1) / alpha(1, T^u)
  DensityPolynomial alpha;
  Rat alpha_unimodular_at_1;
  bool agree = false;
};

// Both paths, without asserting agreement.
HeightRatio height_ratio_paths(long p, const LatticeGram& l, const MomentMatrix& t, const CountingOptions& opt = {});
// W'_T(1,0) / W_{T^u}(1,0) as a rational multiple of log p; throws when the
// two independent routes disagree.
HeightRatio height_ratio(long p, const LatticeGram& l, const MomentMatrix& t, const CountingOptions& opt = {});

struct VertexLatticeClass {
  long p = 0;
  int t = 0;
  LatticeGram gram;
  Rat alpha;
  Rat beta;
};

int t_max(int n, const Rat& det_l, long p);
VertexLatticeClass vertex_lattice_gram(int t, long p, int n, const Rat& det_l);

// Constant of the local Siegel-Weil formula: phase * prod base^exponent.
struct CConstant {
  Place place;
  Root8 phase;
  std::vector<std::pair<Rat, Rat>> powers;  // (base, exponent)
  double value() const;
};

CConstant c_constant(Place v, const QMatrix& j, int n);

struct VolumeRatio {
  long p = 0;
  int n = 0;
  Root8 gamma_n;
  int index_valuation = 0;
  Rat alpha_at_1;
  std::string route;  // "closed_form" or "counting"
  bool stabilized = true;
  std::complex<double> value() const;
};

VolumeRatio vol_ratio(long p, const LatticeGram& l);
// L = L1 + (O_E, p Norm) with E/Q_p unramified, T = diag(T1, p).
VolumeRatio vol_ratio_split(long p, const LatticeGram& l1, const CountingOptions& opt = {});

}  // namespace asw
