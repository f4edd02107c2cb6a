#include "purity/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "purity/errors.hpp"

namespace purity::ens {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kEigenFloor = -1e-10;

void require_dim(int n_dim) {
  if (n_dim < 1) throw ValidationError("dimension must be >= 1, got " + std::to_string(n_dim));
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("spectrum must have at least one eigenvalue");
  double sum = 0.0;
  for (const double v : values_) {
    if (!std::isfinite(v) || v < -kSumTolerance || v > 1.0 + kSumTolerance) {
      throw ValidationError("spectrum entries must lie in [0, 1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ValidationError("spectrum must sum to 1 (got " + to_decimal(sum) + ")");
  }
}

Spectrum Spectrum::from_eigenvalues(std::vector<double> values) {
  if (values.empty()) throw ValidationError("spectrum must have at least one eigenvalue");
  double sum = 0.0;
  for (double& v : values) {
    v = std::max(v, 0.0);
    sum += v;
  }
  if (!(sum > 0.0)) throw ValidationError("eigenvalues sum to zero");
  for (double& v : values) v /= sum;
  return Spectrum(std::move(values), false);
}

Spectrum Spectrum::uniform(int n_dim) {
  require_dim(n_dim);
  return Spectrum(std::vector<double>(static_cast<std::size_t>(n_dim), 1.0 / n_dim), true);
}

Spectrum Spectrum::vertex(int n_dim, int index) {
  require_dim(n_dim);
  if (index < 0 || index >= n_dim) throw ValidationError("vertex index out of range");
  std::vector<double> v(static_cast<std::size_t>(n_dim), 0.0);
  v[static_cast<std::size_t>(index)] = 1.0;
  return Spectrum(std::move(v), n_dim == 1);
}

double Spectrum::purity() const {
  if (uniform_) return 1.0 / dim();
  double s = 0.0;
  for (const double v : values_) s += v * v;
  return s;
}

std::vector<double> power_sums(const Spectrum& spectrum, int up_to) {
  if (up_to < 2) throw ValidationError("power_sums requires up_to >= 2");
  std::vector<double> out(static_cast<std::size_t>(up_to - 1), 0.0);
  if (spectrum.is_uniform()) {
    for (int j = 2; j <= up_to; ++j) out[static_cast<std::size_t>(j - 2)] = std::pow(spectrum.dim(), 1 - j);
    return out;
  }
  for (const double v : spectrum.values()) {
    double power = v;
    for (int j = 2; j <= up_to; ++j) {
      power *= v;
      out[static_cast<std::size_t>(j - 2)] += power;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw ValidationError("density matrix must be square and non-empty");
  }
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance) throw ValidationError("density matrix is not Hermitian");
  const Complex trace = entries_.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > kSumTolerance) throw ValidationError("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < kEigenFloor) {
    throw ValidationError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int n_dim) {
  require_dim(n_dim);
  return DensityMatrix(Matrix::Identity(n_dim, n_dim) / static_cast<double>(n_dim), Unchecked{});
}

Matrix haar_unitary(int n_dim, RandomStream& stream) {
  require_dim(n_dim);
  Matrix g(n_dim, n_dim);
  for (int c = 0; c < n_dim; ++c) {
    for (int r = 0; r < n_dim; ++r) g(r, c) = stream.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int c = 0; c < n_dim; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
  }
  return q;
}

Spectrum sample_spectrum_induced(int n_dim, RandomStream& stream) {
  require_dim(n_dim);
  if (n_dim == 1) return Spectrum::uniform(1);
  Matrix g(n_dim, n_dim);
  for (int c = 0; c < n_dim; ++c) {
    for (int r = 0; r < n_dim; ++r) g(r, c) = stream.complex_normal();
  }
  const Matrix w = g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(w, Eigen::EigenvaluesOnly);
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n_dim);
  std::sort(values.begin(), values.end(), std::greater<>());
  return Spectrum::from_eigenvalues(std::move(values));
}

DensityMatrix assemble_state(const Spectrum& spectrum, const Matrix& unitary) {
  const int n = spectrum.dim();
  if (unitary.rows() != n || unitary.cols() != n) {
    throw ValidationError("unitary is " + std::to_string(unitary.rows()) + "x" + std::to_string(unitary.cols()) +
                          " but the spectrum has " + std::to_string(n) + " entries");
  }
  if (spectrum.is_uniform()) return DensityMatrix::maximally_mixed(n);
  Matrix scaled = unitary;
  for (int c = 0; c < n; ++c) scaled.col(c) *= spectrum[c];
  Matrix rho = scaled * unitary.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho), DensityMatrix::Unchecked{});
}

DensityMatrix partial_trace(const DensityMatrix& rho, const BipartitionDims& dims, Subsystem keep) {
  const int na = dims.na();
  const int nb = dims.nb();
  if (rho.dim() != dims.n()) {
    throw ValidationError("density matrix has dimension " + std::to_string(rho.dim()) + ", expected N_A*N_B = " +
                          std::to_string(dims.n()));
  }
  const Matrix& m = rho.entries();
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(na, na);
    for (int a = 0; a < na; ++a) {
      for (int a2 = 0; a2 < na; ++a2) {
        Complex s = 0.0;
        for (int b = 0; b < nb; ++b) s += m(nb * a + b, nb * a2 + b);
        out(a, a2) = s;
      }
    }
    return DensityMatrix(std::move(out), DensityMatrix::Unchecked{});
  }
  Matrix out = Matrix::Zero(nb, nb);
  for (int b = 0; b < nb; ++b) {
    for (int b2 = 0; b2 < nb; ++b2) {
      Complex s = 0.0;
      for (int a = 0; a < na; ++a) s += m(nb * a + b, nb * a + b2);
      out(b, b2) = s;
    }
  }
  return DensityMatrix(std::move(out), DensityMatrix::Unchecked{});
}

double purity(const DensityMatrix& rho) { return rho.entries().squaredNorm(); }

double local_purity(std::span<const double> spectrum, const Matrix& unitary, const BipartitionDims& dims) {
  const int na = dims.na();
  const int nb = dims.nb();
  const int n = dims.n();
  Matrix rho_a = Matrix::Zero(na, na);
  for (int i = 0; i < n; ++i) {
    const double lambda = spectrum[static_cast<std::size_t>(i)];
    if (lambda == 0.0) continue;
    // Column i of U, row index N_B·α + β, viewed as an N_A × N_B matrix.
    const auto col = unitary.col(i);
    for (int a = 0; a < na; ++a) {
      for (int a2 = a; a2 < na; ++a2) {
        Complex s = 0.0;
        for (int b = 0; b < nb; ++b) s += col(nb * a + b) * std::conj(col(nb * a2 + b));
        rho_a(a, a2) += lambda * s;
      }
    }
  }
  double total = 0.0;
  for (int a = 0; a < na; ++a) {
    total += std::norm(rho_a(a, a));
    for (int a2 = a + 1; a2 < na; ++a2) total += 2.0 * std::norm(rho_a(a, a2));
  }
  return total;
}

}  // namespace purity::ens
