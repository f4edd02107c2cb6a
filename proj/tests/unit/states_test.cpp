#include <gtest/gtest.h>

#include <cmath>

#include "purity/errors.hpp"
#include "purity/random.hpp"
#include "purity/states.hpp"

namespace purity::ens {
namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sem_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (const double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

TEST(RandomStream, KeyedReproducibility) {
  RandomStream a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 10; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    EXPECT_NE(x, c.normal());
  }
  EXPECT_LT(a.index(5), 5u);
}

TEST(Spectrum, Validation) {
  EXPECT_NO_THROW(Spectrum({0.5, 0.5}));
  EXPECT_THROW(Spectrum({0.6, 0.6}), ValidationError);
  EXPECT_THROW(Spectrum({1.1, -0.1}), ValidationError);
  EXPECT_THROW(Spectrum({}), ValidationError);
  const auto s = Spectrum::from_eigenvalues({0.5, 0.5 + 1e-13, -1e-13});
  EXPECT_EQ(s[2], 0.0);
  EXPECT_NEAR(s[0] + s[1], 1.0, 1e-15);
}

TEST(Spectrum, Factories) {
  EXPECT_TRUE(Spectrum::uniform(4).is_uniform());
  EXPECT_DOUBLE_EQ(Spectrum::uniform(4).purity(), 0.25);
  EXPECT_EQ(Spectrum::vertex(3, 1)[1], 1.0);
  EXPECT_DOUBLE_EQ(Spectrum({0.4, 0.3, 0.2, 0.1}).purity(), 0.30);
  EXPECT_FALSE(Spectrum({0.5, 0.5}).is_uniform());
}

TEST(PowerSums, Examples) {
  const auto u = power_sums(Spectrum::uniform(4), 4);
  ASSERT_EQ(u.size(), 3u);
  EXPECT_DOUBLE_EQ(u[0], 1.0 / 4);
  EXPECT_DOUBLE_EQ(u[1], 1.0 / 16);
  EXPECT_DOUBLE_EQ(u[2], 1.0 / 64);
  for (const double p : power_sums(Spectrum::vertex(5), 6)) EXPECT_EQ(p, 1.0);
  const auto h = power_sums(Spectrum({0.5, 0.5}), 3);
  EXPECT_DOUBLE_EQ(h[0], 0.5);
  EXPECT_DOUBLE_EQ(h[1], 0.25);
  EXPECT_THROW(power_sums(Spectrum::uniform(2), 1), ValidationError);
}

TEST(HaarUnitary, IsUnitary) {
  RandomStream stream(1);
  for (const int n : {1, 2, 5, 9}) {
    const Matrix u = haar_unitary(n, stream);
    EXPECT_LT((u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_NEAR(std::abs(haar_unitary(1, stream)(0, 0)), 1.0, 1e-15);
}

TEST(HaarUnitary, Deterministic) {
  RandomStream a(99), b(99);
  EXPECT_EQ(haar_unitary(4, a), haar_unitary(4, b));
}

TEST(HaarUnitary, SecondMoments) {
  RandomStream stream(5);
  std::vector<double> u11, u12u21;
  for (int i = 0; i < 100000; ++i) {
    const Matrix u = haar_unitary(4, stream);
    u11.push_back(std::norm(u(0, 0)));
    u12u21.push_back(std::norm(u(0, 1) * u(1, 0)));
  }
  EXPECT_NEAR(mean_of(u11), 0.25, 3 * sem_of(u11));
  // E|U12|²|U21|² = 1/(N²−1) for N = 4.
  EXPECT_NEAR(mean_of(u12u21), 1.0 / 15, 3 * sem_of(u12u21));
}

TEST(HaarUnitary, LeftInvarianceOfPhaseDistribution) {
  // Tr U has E|Tr U|² = 1 for every N, and is unchanged by a fixed left factor.
  RandomStream stream(8);
  RandomStream fixed_stream(9);
  const Matrix w = haar_unitary(3, fixed_stream);
  std::vector<double> plain, shifted;
  for (int i = 0; i < 50000; ++i) {
    const Matrix u = haar_unitary(3, stream);
    plain.push_back(std::norm(u.trace()));
    shifted.push_back(std::norm((w * u).trace()));
  }
  EXPECT_NEAR(mean_of(plain), 1.0, 3 * sem_of(plain));
  EXPECT_NEAR(mean_of(shifted), 1.0, 3 * sem_of(shifted));
}

TEST(InducedSpectrum, Basics) {
  RandomStream stream(2);
  EXPECT_EQ(sample_spectrum_induced(1, stream)[0], 1.0);
  const auto s = sample_spectrum_induced(5, stream);
  for (int i = 1; i < 5; ++i) EXPECT_GE(s[i - 1], s[i]);
}

TEST(InducedSpectrum, MeanPurityMatchesExplicitPurification) {
  // Two paths: eigenvalues of a Ginibre Wishart matrix, and the reduced state of
  // the first column of a Haar unitary on C^4 ⊗ C^4.
  const int n = 4;
  const BipartitionDims dims(n, n);
  RandomStream a(3, 0), b(3, 1);
  std::vector<double> wishart, purified;
  for (int i = 0; i < 40000; ++i) wishart.push_back(sample_spectrum_induced(n, a).purity());
  for (int i = 0; i < 20000; ++i) {
    const Matrix u = haar_unitary(n * n, b);
    std::vector<double> vertex(static_cast<std::size_t>(n * n), 0.0);
    vertex[0] = 1.0;
    purified.push_back(local_purity(vertex, u, dims));
  }
  const double se = std::hypot(sem_of(wishart), sem_of(purified));
  EXPECT_NEAR(mean_of(wishart), mean_of(purified), 3.5 * se);
  EXPECT_NEAR(mean_of(wishart), 8.0 / 17, 3.5 * sem_of(wishart));
}

TEST(AssembleState, IdentityUnitary) {
  const Spectrum s({0.4, 0.3, 0.2, 0.1});
  const auto rho = assemble_state(s, Matrix::Identity(4, 4));
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(rho.entries()(i, i).real(), s[i]);
  EXPECT_DOUBLE_EQ(purity(rho), 0.30);
  EXPECT_THROW(assemble_state(s, Matrix::Identity(3, 3)), ValidationError);
}

TEST(AssembleState, UniformIsExactlyMaximallyMixed) {
  RandomStream stream(4);
  const auto rho = assemble_state(Spectrum::uniform(6), haar_unitary(6, stream));
  EXPECT_EQ(rho.entries(), Matrix::Identity(6, 6) / 6.0);
  EXPECT_DOUBLE_EQ(purity(rho), 1.0 / 6);
}

TEST(PartialTrace, ProductState) {
  Matrix ra(2, 2), rb(3, 3);
  ra << 0.7, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.3;
  rb << 0.5, 0, 0, 0, 0.3, Complex(0, 0.1), 0, Complex(0, -0.1), 0.2;
  Matrix full(6, 6);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 3; ++d) full(3 * a + b, 3 * c + d) = ra(a, c) * rb(b, d);
  const DensityMatrix rho(full);
  const BipartitionDims dims(2, 3);
  EXPECT_LT((partial_trace(rho, dims, Subsystem::A).entries() - ra).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((partial_trace(rho, dims, Subsystem::B).entries() - rb).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(partial_trace(rho, BipartitionDims(2, 2), Subsystem::A), ValidationError);
}

TEST(PartialTrace, BellStateAndTraceChain) {
  Matrix psi = Matrix::Zero(4, 1);
  psi(0, 0) = psi(3, 0) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho(psi * psi.adjoint());
  const BipartitionDims dims(2, 2);
  const auto ra = partial_trace(rho, dims, Subsystem::A);
  EXPECT_LT((ra.entries() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_DOUBLE_EQ(purity(rho), 1.0);
  const auto scalar = partial_trace(ra, BipartitionDims(1, 2), Subsystem::A);
  EXPECT_EQ(scalar.dim(), 1);
  EXPECT_NEAR(scalar.entries()(0, 0).real(), 1.0, 1e-15);
}

TEST(LocalPurity, MatchesPartialTracePath) {
  RandomStream stream(6);
  const BipartitionDims dims(2, 3);
  const Spectrum s({0.35, 0.25, 0.2, 0.1, 0.06, 0.04});
  for (int i = 0; i < 20; ++i) {
    const Matrix u = haar_unitary(6, stream);
    const double direct = purity(partial_trace(assemble_state(s, u), dims, Subsystem::A));
    EXPECT_NEAR(local_purity(s.values(), u, dims), direct, 1e-13);
  }
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix(Matrix::Identity(2, 2)), ValidationError);
  Matrix nonherm = Matrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{nonherm}, ValidationError);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{negative}, ValidationError);
  EXPECT_DOUBLE_EQ(purity(DensityMatrix::maximally_mixed(5)), 0.2);
}

}  // namespace
}  // namespace purity::ens
