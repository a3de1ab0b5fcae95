#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "asw/archwhittaker.hpp"
#include "asw/localdensity.hpp"
#include "asw/quadform.hpp"

namespace asw {

// phase * coeff * 2^pow2 * pi^powpi, kept exact.
struct ExactConstant {
  Root8 phase;
  Rat coeff = 1;
  Rat pow2 = 0;
  Rat powpi = 0;
  cplx value() const;
  std::string str() const;
  ExactConstant operator*(const ExactConstant& o) const;
  ExactConstant inverse() const;
  bool operator==(const ExactConstant& o) const;
};

// Gamma(j/2) for j >= 1.
ExactConstant gamma_half(int j);

struct ArchConstant {
  int n = 0;
  ExactConstant exact;
  cplx value() const { return exact.value(); }
};

ArchConstant b_infinity(int n);
// i^n Gamma(rho_n) / (2 pi)^rho_n
ExactConstant b_quotient(int n);
ExactConstant so_volume(int l);

// V = L (x) Q of signature (m, 2); n = m + 1, kappa = (m + 2) / 2.
struct IncoherentDatum {
  LatticeGram lattice;
  int m = 0;
  int n = 0;
  double kappa = 0;
  std::vector<long> bad_primes;  // 2 and the odd primes dividing det L or a denominator
};

IncoherentDatum make_incoherent_datum(const LatticeGram& l);

int order_lower_bound(const IncoherentDatum& d, const MomentMatrix& t);

// Primes outside the datum's bad set at which T is not a unimodular integral matrix.
std::vector<long> coefficient_bad_primes(const IncoherentDatum& d, const MomentMatrix& t);

// L(s, chi_D) with chi_D(k) = (D/k) for odd k and 0 for even k.
double dirichlet_l(double s, long long disc);
// zeta(2e) = coeff * pi^{2e}
Rat zeta_even_coeff(int e);

struct EulerTail {
  double value = 0;
  std::string expression;        // in terms of L_S and zeta_S (S = excluded primes)
  std::vector<long> excluded;
  long long character = 0;       // discriminant of chi_L, 0 when l is odd
};

// Product over odd primes q not in `excluded` of alpha_q(1, T, L), via zeta and L-values.
EulerTail euler_tail(const IncoherentDatum& d, const MomentMatrix& t, const std::vector<long>& excluded);
// The same product truncated at q <= bound, computed factor by factor.
double euler_tail_truncated(const IncoherentDatum& d, const MomentMatrix& t, const std::vector<long>& excluded,
                            long bound);

struct PlaceFactor {
  Place place;             // p = -1 stands for the good odd primes (Euler tail)
  std::string kind;        // derivative, value, euler_tail
  std::string provenance;  // closed_form, counting, quadrature, symbolic_unit, unavailable
  cplx value;              // numeric factor entering the product (log p included for derivatives)
  Root8 phase;             // tracked unit phase
  std::optional<Rat> rational;      // alpha(1) for values, -alpha'(1) for derivatives
  std::optional<Rat> ratio_to_unimodular;  // -alpha'(1) / alpha(1, I_n, L)
  std::string note;
};

struct CoefficientReport {
  MomentMatrix t;
  std::vector<Place> diff;
  int order_bound = 0;
  bool vanishes = false;   // |Diff| > 1
  bool complete = false;   // every place has a numeric factor
  std::vector<PlaceFactor> factors;
  cplx assembled;          // product of the available factors
  Root8 unit_phase;        // product of the tracked phases
  cplx q_t;                // e(tr T tau)
  cplx normalized;         // assembled / q_t
  std::optional<HeightRatio> height;
  std::vector<long> missing;  // places without a factor
};

// tau = i y with y positive definite.
CoefficientReport coefficient_derivative(const IncoherentDatum& d, const MomentMatrix& t, const RMatrix& y,
                                         const CountingOptions& opt = {});

struct DegreePrediction {
  long p = 0;
  HeightRatio height;
  VertexLatticeClass vertex;
  PlaceFactor vertex_factor;          // W_{T,p}(1, 0, lambda(phi_Lambda))
  std::vector<PlaceFactor> factors;   // other finite places
  cplx finite_product;
  Rat counting_constant;
  cplx point_count;                   // counting_constant * finite_product
  std::vector<long> missing;
};

DegreePrediction degree_prediction(const IncoherentDatum& d, const MomentMatrix& t, const Rat& counting_constant,
                                   int vertex_type = 2, const CountingOptions& opt = {});

}  // namespace asw
