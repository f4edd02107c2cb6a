#pragma once

// Exact moments of the local purity π_A = Tr ρ_A² over unitary orbits
// ρ = U Λ U†, via the Weingarten expansion of Haar integrals, plus the
// closed forms for the first two moments, the second cumulant and the
// first-order high-temperature correction.

#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "purity/rational.hpp"
#include "purity/symcore.hpp"

namespace purity {

/// H_X = H_A ⊗ H_B with 1 <= N_A <= N_B.
class BipartitionDims {
 public:
  /// Throws ValidationError unless 1 <= na <= nb.
  BipartitionDims(int na, int nb);

  int na() const { return na_; }
  int nb() const { return nb_; }
  int n() const { return na_ * nb_; }

  bool operator==(const BipartitionDims&) const = default;

 private:
  int na_;
  int nb_;
};

}  // namespace purity

namespace purity::wg {

/// C[σ] = Σ_{|Y|=n} dim(Y)² χ_Y(σ) / (n!² s_Y(N)).
/// Throws DegenerateDimensionError when a diagram with χ_Y(σ) ≠ 0 has s_Y(N) = 0.
Rational weingarten_coefficient(const sym::Partition& sigma_class, int n_dim);

struct WeingartenTable {
  int n = 0;      // degree of S_n
  int n_dim = 0;  // unitary dimension N
  std::map<sym::Partition, Rational> coeffs;

  static WeingartenTable build(int n, int n_dim);

  const Rational& at(const sym::Partition& cls) const;
};

/// The explicit rational-function forms of C[σ] for n = 2 and n = 4.
/// Throws ValidationError for other degrees and DegenerateDimensionError at
/// the poles (N = 1 for n = 2; N <= 3 for n = 4).
Rational closed_form_coefficient(const sym::Partition& sigma_class, int n_dim);

/// f_k(τ) = N_A^{cycles(τ)} · N_B^{cycles(τ∘s)}, s the nearby-pair swap of degree 2k.
Integer f_count(const sym::Permutation& tau, const BipartitionDims& dims);

/// Product p_{j1} p_{j2} ... of spectral power sums, stored as the
/// non-increasing list of indices. p_1 = Tr Λ = 1 is never stored, so every
/// index is >= 2; the empty monomial is the constant 1.
using Monomial = std::vector<int>;

/// Drops 1s and sorts.
Monomial make_monomial(const sym::Partition& cycle_type);

class PowerSumPolynomial {
 public:
  explicit PowerSumPolynomial(BipartitionDims context) : context_(context) {}

  const BipartitionDims& context() const { return context_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  void add(const Monomial& m, const Rational& coefficient);
  Rational coefficient(const Monomial& m) const;
  bool is_zero() const { return terms_.empty(); }
  int max_index() const;

  PowerSumPolynomial operator-(const PowerSumPolynomial& other) const;
  bool operator==(const PowerSumPolynomial& other) const;

  /// power_sum(j) must return p_j for every j >= 2 appearing in a monomial.
  template <class T, class PowerSum>
  T evaluate(PowerSum&& power_sum) const {
    T total = 0;
    for (const auto& [monomial, coefficient] : terms_) {
      T term = convert<T>(coefficient);
      for (const int j : monomial) term *= power_sum(j);
      total += term;
    }
    return total;
  }

  /// All p_j = 1 (a pure global state).
  Rational evaluate_pure() const;
  /// p_j = N^{1-j} (the maximally mixed state).
  Rational evaluate_maximally_mixed() const;
  double evaluate(std::span<const double> spectrum) const;

  /// {"context":{"NA":..,"NB":..},"terms":[{"monomial":[2,2],"num":..,"den":..},..]}
  /// num/den are JSON integers, or decimal strings when they exceed 64 bits.
  nlohmann::json to_json() const;
  static PowerSumPolynomial from_json(const nlohmann::json& j);

 private:
  template <class T>
  static T convert(const Rational& r) {
    if constexpr (std::is_same_v<T, Rational>) {
      return r;
    } else {
      return static_cast<T>(to_double(r));
    }
  }

  BipartitionDims context_;
  std::map<Monomial, Rational> terms_;
};

struct MomentOptions {
  /// Worker threads for the (τ, σ) sum; partitioned by τ. Results are
  /// independent of this value.
  int threads = 1;
  /// Overrides the computed coefficient table (used for fault injection).
  const WeingartenTable* table = nullptr;
};

/// M_k^A(Λ) = Σ_{τ,σ ∈ S_2k} C[σ] f_k(τ) · monomial([τ∘σ∘s]).
/// k = 3 is supported but slow ((6!)² pairs).
PowerSumPolynomial moment_polynomial(int k, const BipartitionDims& dims, const MomentOptions& options = {});

/// Closed-form first moment over the fixed-purity ensemble:
/// N_A(N_B²−1)/(N²−1) + x·N_B(N_A²−1)/(N²−1). Throws ValidationError unless 1/N <= x <= 1.
Rational closed_m1(const BipartitionDims& dims, const Rational& x);

/// The five-term second-moment closed form as a polynomial in {1, p2, p2², p3, p4}.
/// Throws DegenerateDimensionError for N <= 3.
PowerSumPolynomial closed_m2_polynomial(const BipartitionDims& dims);

/// closed_m2_polynomial evaluated at (p2, p3, p4).
Rational closed_m2_spectrum(const BipartitionDims& dims, const Rational& p2, const Rational& p3, const Rational& p4);

/// K2 = a0 + a1·x + a2·x² + a3·<p3>_x + a4·<p4>_x.
struct Cumulant2Coefficients {
  Rational constant;
  Rational x;
  Rational x2;
  Rational p3;
  Rational p4;
};

Cumulant2Coefficients cumulant2_coefficients(const BipartitionDims& dims);

/// Second cumulant M2 − M1² at β = 0 from the ensemble averages <Tr Λ³>_x and <Tr Λ⁴>_x.
Rational cumulant2(const BipartitionDims& dims, const Rational& x, const Rational& avg_p3, const Rational& avg_p4);
double cumulant2(const BipartitionDims& dims, double x, double avg_p3, double avg_p4);

/// First moment to first order in β: M1(x,0) − β·K2(x).
double m1_high_temperature(const BipartitionDims& dims, double x, double beta, double avg_p3, double avg_p4);

/// √N (1 + x) / (N + 1) for a balanced bipartition. Throws unless N is a perfect square.
double m1_balanced_asymptotic(int n_dim, double x);

/// Diagnostic scale N^{3/2}(1+x)/(2x²) beyond which the first-order β expansion
/// should not be trusted. No validity guarantee.
double beta_critical(int n_dim, double x);

/// Integer square root of a perfect square, or -1.
int exact_sqrt(int n);

}  // namespace purity::wg
