#pragma once

// Spectra on the probability simplex, density matrices, Haar unitaries and the
// induced (purification) eigenvalue measure.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "purity/random.hpp"
#include "purity/weingarten.hpp"

namespace purity::ens {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Eigenvalues λ_1..λ_N with λ_i >= 0 and Σλ_i = 1 (tolerance 1e-12).
class Spectrum {
 public:
  /// Throws ValidationError unless every value is in [-1e-12, 1 + 1e-12] and
  /// the sum is 1 within 1e-12.
  explicit Spectrum(std::vector<double> values);

  /// Clamps tiny negative eigenvalues to zero and renormalizes.
  static Spectrum from_eigenvalues(std::vector<double> values);
  static Spectrum uniform(int n_dim);
  /// λ_index = 1, all others 0.
  static Spectrum vertex(int n_dim, int index = 0);

  int dim() const { return static_cast<int>(values_.size()); }
  std::span<const double> values() const { return values_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

  /// Σλ².
  double purity() const;
  /// True only for a spectrum built by uniform(); such states are exactly I/N.
  bool is_uniform() const { return uniform_; }

 private:
  Spectrum(std::vector<double> values, bool uniform) : values_(std::move(values)), uniform_(uniform) {}

  std::vector<double> values_;
  bool uniform_ = false;
};

/// (p_2, ..., p_m) with p_j = Σλ^j. Throws ValidationError for m < 2.
std::vector<double> power_sums(const Spectrum& spectrum, int up_to);

enum class Subsystem { A, B };

/// Hermitian, unit trace, positive semidefinite N×N complex matrix.
class DensityMatrix {
 public:
  /// Checks hermiticity (max abs deviation 1e-12), trace (1e-12) and
  /// eigenvalues >= -1e-10. Throws ValidationError.
  explicit DensityMatrix(Matrix entries);

  static DensityMatrix maximally_mixed(int n_dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  struct Unchecked {};
  DensityMatrix(Matrix entries, Unchecked) : entries_(std::move(entries)) {}
  friend DensityMatrix assemble_state(const Spectrum&, const Matrix&);
  friend DensityMatrix partial_trace(const DensityMatrix&, const BipartitionDims&, Subsystem);

  Matrix entries_;
};

/// Haar-distributed N×N unitary: QR of a complex Ginibre matrix with the
/// phases of diag(R) moved into Q.
Matrix haar_unitary(int n_dim, RandomStream& stream);

/// Eigenvalues of G G† / Tr(G G†) for an N×N Ginibre G, i.e. the spectrum of
/// the reduced state of a Haar-random pure state on C^N ⊗ C^N. Sorted descending.
Spectrum sample_spectrum_induced(int n_dim, RandomStream& stream);

/// U diag(Λ) U†, symmetrized. A uniform spectrum yields exactly I/N.
/// Throws ValidationError on a dimension mismatch.
DensityMatrix assemble_state(const Spectrum& spectrum, const Matrix& unitary);

/// Reduced state. Row index of the full matrix is N_B·α + β (0-indexed) for
/// α ∈ H_A, β ∈ H_B. Throws ValidationError if dim(ρ) != N_A·N_B.
DensityMatrix partial_trace(const DensityMatrix& rho, const BipartitionDims& dims, Subsystem keep);

/// Tr ρ² = Σ|ρ_ij|².
double purity(const DensityMatrix& rho);

/// π_A(U Λ U†) without materializing ρ: ρ_A = Σ_i λ_i M_i M_i†, with M_i the
/// i-th column of U reshaped to N_A × N_B.
double local_purity(std::span<const double> spectrum, const Matrix& unitary, const BipartitionDims& dims);

}  // namespace purity::ens
