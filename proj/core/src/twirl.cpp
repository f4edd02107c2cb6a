#include "purity/twirl.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "purity/states.hpp"

namespace purity::twirl {

namespace {

constexpr int kMaxNumericDim = 6;
constexpr long kBlock = 1024;

int dim_of_doubled(const Matrix& theta) {
  if (theta.rows() != theta.cols()) throw ValidationError("twirl input must be square");
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(theta.rows()))));
  if (n * n != theta.rows() || n < 1) throw ValidationError("twirl input must be N^2 x N^2");
  if (n > kMaxNumericDim) {
    throw ValidationError("numeric twirl is limited to N <= " + std::to_string(kMaxNumericDim) + ", got N = " +
                          std::to_string(n));
  }
  return n;
}

Matrix kron_self(const Matrix& u) {
  const int n = static_cast<int>(u.rows());
  Matrix k(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) k(i * n + j, a * n + b) = u(i, a) * u(j, b);
      }
    }
  }
  return k;
}

}  // namespace

std::pair<Integer, Integer> swap_partial_traces(const BipartitionDims& dims) {
  const Integer na = dims.na();
  const Integer nb = dims.nb();
  return {nb * na * na, na * nb * nb};
}

Rational m1_pure_via_twirl(const BipartitionDims& dims) {
  if (dims.n() == 1) return Rational(1);
  // Θ = |ψ⟩⟨ψ|⊗|ψ⟩⟨ψ| is swap invariant: Tr Θ = Tr SΘ = 1.
  const auto d = twirl2_decompose<Rational>(Rational(1), Rational(1), dims.n());
  const auto [trace_sb, trace_sa] = swap_partial_traces(dims);
  // Tr((aI + bS)(S_B ⊗ I_AA')) with S = S_B ⊗ S_A and S_B² = I.
  return d.coeff_identity * Rational(trace_sb) + d.coeff_swap * Rational(trace_sa);
}

Rational m1_mixed_via_twirl(const BipartitionDims& dims, const Rational& p2) {
  const Rational lo(1, dims.n());
  if (p2 < lo || p2 > 1) {
    throw ValidationError("global purity must satisfy 1/N <= p2 <= 1, got " + to_string(p2));
  }
  if (dims.n() == 1) return Rational(1);
  // Θ = S_B ⊗ S_ancilla ⊗ I_AA'; its two functionals on XX' carry the ancilla swap along.
  const auto [trace_theta, swap_trace_theta] = swap_partial_traces(dims);
  const auto d = twirl2_decompose<Rational>(Rational(trace_theta), Rational(swap_trace_theta), dims.n());
  // ⟨Ψ⊗Ψ| I ⊗ S_anc |Ψ⊗Ψ⟩ = Tr Λ², ⟨Ψ⊗Ψ| S ⊗ S_anc |Ψ⊗Ψ⟩ = 1.
  return d.coeff_identity * p2 + d.coeff_swap;
}

Matrix swap_operator(int n_dim) {
  if (n_dim < 1) throw ValidationError("dimension must be >= 1");
  Matrix s = Matrix::Zero(n_dim * n_dim, n_dim * n_dim);
  for (int i = 0; i < n_dim; ++i) {
    for (int j = 0; j < n_dim; ++j) s(j * n_dim + i, i * n_dim + j) = 1.0;
  }
  return s;
}

Matrix reconstruct(const TwirlDecomposition<std::complex<double>>& decomposition) {
  const int n = decomposition.n_dim;
  return decomposition.coeff_identity * Matrix::Identity(n * n, n * n) + decomposition.coeff_swap * swap_operator(n);
}

NumericTwirl numeric_twirl2(const Matrix& theta, long n_mc, std::uint64_t seed, int threads) {
  const int n = dim_of_doubled(theta);
  if (n_mc < 2) throw ValidationError("numeric twirl needs at least 2 draws");
  threads = std::max(1, threads);
  const long blocks = (n_mc + kBlock - 1) / kBlock;
  const int d = n * n;
  std::vector<Matrix> sums(static_cast<std::size_t>(blocks), Matrix::Zero(d, d));
  std::vector<Eigen::MatrixXd> squares(static_cast<std::size_t>(blocks), Eigen::MatrixXd::Zero(d, d));

  auto work = [&](int worker) {
    for (long b = worker; b < blocks; b += threads) {
      ens::RandomStream stream(seed, static_cast<std::uint64_t>(b));
      const long count = std::min(kBlock, n_mc - b * kBlock);
      Matrix& sum = sums[static_cast<std::size_t>(b)];
      Eigen::MatrixXd& sq = squares[static_cast<std::size_t>(b)];
      for (long i = 0; i < count; ++i) {
        const Matrix k = kron_self(ens::haar_unitary(n, stream));
        const Matrix sample = k * theta * k.adjoint();
        sum += sample;
        sq += sample.cwiseAbs2();
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }

  Matrix total = Matrix::Zero(d, d);
  Eigen::MatrixXd total_sq = Eigen::MatrixXd::Zero(d, d);
  for (long b = 0; b < blocks; ++b) {
    total += sums[static_cast<std::size_t>(b)];
    total_sq += squares[static_cast<std::size_t>(b)];
  }
  const double count = static_cast<double>(n_mc);
  NumericTwirl out;
  out.n = n_mc;
  out.mean = total / count;
  const Eigen::MatrixXd var = ((total_sq / count - out.mean.cwiseAbs2()) * (count / (count - 1.0))).cwiseMax(0.0);
  out.std_error = (var / count).cwiseSqrt();
  return out;
}

}  // namespace purity::twirl
