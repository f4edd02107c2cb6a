#pragma once

// The two-copy twirl T(Θ) = ∫dU (U⊗U) Θ (U⊗U)† and the first purity moment
// derived from it, independent of the Weingarten engine.

#include <complex>
#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "purity/errors.hpp"
#include "purity/rational.hpp"
#include "purity/weingarten.hpp"

namespace purity::twirl {

/// T(Θ) = coeff_identity·I + coeff_swap·S on C^N ⊗ C^N.
template <class Scalar>
struct TwirlDecomposition {
  Scalar coeff_identity{};
  Scalar coeff_swap{};
  int n_dim = 0;

  /// Tr of the reconstructed operator: a·N² + b·N.
  Scalar trace() const { return coeff_identity * Scalar(n_dim) * Scalar(n_dim) + coeff_swap * Scalar(n_dim); }
  /// Tr(S·) of the reconstructed operator: a·N + b·N².
  Scalar swap_trace() const { return coeff_identity * Scalar(n_dim) + coeff_swap * Scalar(n_dim) * Scalar(n_dim); }
};

/// a = (N TrΘ − Tr SΘ)/(N(N²−1)), b = (N Tr SΘ − TrΘ)/(N(N²−1)).
/// Throws ValidationError for N < 2.
template <class Scalar>
TwirlDecomposition<Scalar> twirl2_decompose(const Scalar& trace_theta, const Scalar& swap_trace_theta, int n_dim) {
  if (n_dim < 2) throw ValidationError("the twirl decomposition needs N >= 2, got N = " + std::to_string(n_dim));
  const Scalar n(n_dim);
  const Scalar denom = n * (n * n - Scalar(1));
  return {(n * trace_theta - swap_trace_theta) / denom, (n * swap_trace_theta - trace_theta) / denom, n_dim};
}

/// (Tr(S_B ⊗ I_AA'), Tr(I_BB' ⊗ S_A)) = (N_B N_A², N_A N_B²).
std::pair<Integer, Integer> swap_partial_traces(const BipartitionDims& dims);

/// Average local purity of a Haar-random pure state, from the twirl of
/// |ψ⟩⟨ψ|⊗|ψ⟩⟨ψ| contracted with S_B ⊗ I_AA'. Equals (N_A + N_B)/(N_A N_B + 1).
Rational m1_pure_via_twirl(const BipartitionDims& dims);

/// Average local purity over unitary orbits of a spectrum with Tr Λ² = p2,
/// from the twirl of S_B ⊗ S_ancilla ⊗ I_AA' and the two ancilla-swap
/// expectation values (p2 and 1). Throws ValidationError unless 1/N <= p2 <= 1.
Rational m1_mixed_via_twirl(const BipartitionDims& dims, const Rational& p2);

using Matrix = Eigen::MatrixXcd;

/// Swap on C^N ⊗ C^N, basis index i·N + j.
Matrix swap_operator(int n_dim);

/// a·I + b·S.
Matrix reconstruct(const TwirlDecomposition<std::complex<double>>& decomposition);

struct NumericTwirl {
  Matrix mean;
  /// Entrywise standard error (real and imaginary parts combined in modulus).
  Eigen::MatrixXd std_error;
  long n = 0;
};

/// Monte Carlo average of (U⊗U) Θ (U⊗U)† over Haar U. Draws are split into
/// fixed blocks, each on its own stream of `seed`, so the result does not
/// depend on `threads`. Throws ValidationError unless Θ is N²×N² with N <= 6.
NumericTwirl numeric_twirl2(const Matrix& theta, long n_mc, std::uint64_t seed, int threads = 1);

}  // namespace purity::twirl
