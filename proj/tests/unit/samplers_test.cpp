#include <gtest/gtest.h>

#include <cmath>

#include "purity/errors.hpp"
#include "purity/samplers.hpp"

namespace purity::ens {
namespace {

TEST(McConfig, Validation) {
  McConfig mc;
  EXPECT_NO_THROW(mc.validate());
  mc.n_samples = 0;
  EXPECT_THROW(mc.validate(), ValidationError);
  mc = McConfig{};
  mc.thinning = 0;
  EXPECT_THROW(mc.validate(), ValidationError);
  mc = McConfig{};
  mc.chains = 0;
  EXPECT_THROW(mc.validate(), ValidationError);
}

TEST(EnsembleConfig, Validation) {
  EnsembleConfig c;
  c.dims = BipartitionDims(2, 2);
  c.x = 0.5;
  EXPECT_NO_THROW(c.validate());
  c.x = 0.2;
  EXPECT_THROW(c.validate(), ValidationError);
  c.x = 1.01;
  EXPECT_THROW(c.validate(), ValidationError);
  c.x = 0.5;
  c.shell_eps = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  c.shell_eps = 1e-3;
  c.x.reset();
  EXPECT_EQ(c.to_json()["x"], "free");
}

TEST(ShellChain, EndpointsAreFrozen) {
  RandomStream stream(1);
  ShellChain uniform(4, 0.25, 1e-3, 0.3, stream);
  EXPECT_TRUE(uniform.frozen());
  EXPECT_TRUE(uniform.spectrum().is_uniform());
  uniform.step();
  EXPECT_TRUE(uniform.spectrum().is_uniform());

  ShellChain vertex(4, 1.0, 1e-3, 0.3, stream);
  EXPECT_TRUE(vertex.frozen());
  EXPECT_EQ(vertex.spectrum().purity(), 1.0);
}

TEST(ShellChain, InfeasibleTarget) {
  RandomStream stream(1);
  EXPECT_THROW(ShellChain(4, 0.2, 1e-3, 0.3, stream), ValidationError);
  EXPECT_THROW(ShellChain(4, 1.2, 1e-3, 0.3, stream), ValidationError);
}

TEST(ShellChain, StaysOnShellAndSimplex) {
  RandomStream stream(2);
  for (const double x : {0.3, 0.5, 0.9}) {
    ShellChain chain(4, x, 1e-3, 0.3, stream);
    for (int i = 0; i < 2000; ++i) {
      chain.step();
      if (i < 500) chain.adapt();
      const auto& s = chain.spectrum();
      EXPECT_LE(std::abs(s.purity() - x), 1e-3 + 1e-12);
      double sum = 0.0;
      for (const double v : s.values()) {
        EXPECT_GE(v, 0.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
    EXPECT_GT(chain.acceptance(), 0.05);
  }
}

TEST(ShellChain, DeterministicPerSeed) {
  RandomStream a(10), b(10), c(11);
  ShellChain ca(5, 0.4, 1e-3, 0.3, a), cb(5, 0.4, 1e-3, 0.3, b), cc(5, 0.4, 1e-3, 0.3, c);
  bool differs = false;
  for (int i = 0; i < 200; ++i) {
    ca.step();
    cb.step();
    cc.step();
    for (int j = 0; j < 5; ++j) {
      EXPECT_EQ(ca.spectrum()[j], cb.spectrum()[j]);
      differs = differs || ca.spectrum()[j] != cc.spectrum()[j];
    }
  }
  EXPECT_TRUE(differs);
}

struct ShellMeans {
  double p3 = 0.0;
  double p4 = 0.0;
};

ShellMeans run_shell(double eps, std::uint64_t seed, long n) {
  RandomStream stream(seed);
  ShellChain chain(4, 0.5, eps, 0.3, stream);
  for (int i = 0; i < 2000; ++i) {
    chain.step();
    chain.adapt();
  }
  ShellMeans m;
  for (long i = 0; i < n; ++i) {
    chain.step();
    const auto ps = power_sums(chain.spectrum(), 4);
    m.p3 += ps[1];
    m.p4 += ps[2];
  }
  m.p3 /= static_cast<double>(n);
  m.p4 /= static_cast<double>(n);
  return m;
}

TEST(ShellChain, MajorizationWindows) {
  // On the shell p2 = x: p2² <= p3 <= p2 and p3²/p2 <= p4 <= p3.
  const auto m = run_shell(1e-3, 4, 20000);
  EXPECT_GE(m.p3, 0.25);
  EXPECT_LE(m.p3, 0.5);
  EXPECT_GE(m.p4, m.p3 * m.p3 / 0.5);
  EXPECT_LE(m.p4, m.p3);
}

TEST(ShellChain, ThinShellLimitIsStable) {
  // Halving eps moves the averages by much less than their spread across seeds.
  const auto wide = run_shell(2e-3, 5, 40000);
  const auto thin = run_shell(1e-3, 6, 40000);
  EXPECT_NEAR(wide.p3, thin.p3, 2e-3);
  EXPECT_NEAR(wide.p4, thin.p4, 2e-3);
}

TEST(CanonicalChain, PureStateSymmetry) {
  // At x = 1, π_A = π_B, so the reduced purities agree in distribution and pointwise.
  EnsembleConfig c;
  c.dims = BipartitionDims(2, 3);
  c.x = 1.0;
  c.beta = 1.0;
  RandomStream stream(7);
  CanonicalChain chain(c, stream);
  for (int i = 0; i < 200; ++i) {
    chain.step();
    const double pa = chain.local_purity();
    EXPECT_GE(pa, 0.5 - 1e-12);
    EXPECT_LE(pa, 1.0 + 1e-12);
    // π_B from the same eigenvector: swap the tensor factors.
    const auto& u = chain.unitary();
    Matrix m(2, 3);
    const int top = static_cast<int>(std::max_element(chain.shell().spectrum().values().begin(),
                                                      chain.shell().spectrum().values().end()) -
                                     chain.shell().spectrum().values().begin());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 3; ++b) m(a, b) = u(3 * a + b, top);
    const Matrix rb = m.transpose() * m.conjugate();
    EXPECT_NEAR(rb.cwiseAbs2().sum(), pa, 1e-12);
  }
}

TEST(CanonicalChain, UniformSpectrumIsExact) {
  EnsembleConfig c;
  c.dims = BipartitionDims(2, 3);
  c.x = 1.0 / 6;
  c.beta = 5.0;
  RandomStream stream(3);
  CanonicalChain chain(c, stream);
  for (int i = 0; i < 50; ++i) {
    chain.step();
    EXPECT_EQ(chain.local_purity(), 0.5);
  }
}

TEST(CanonicalChain, PurityRangeAndAdaptation) {
  EnsembleConfig c;
  c.dims = BipartitionDims(2, 2);
  c.x = 0.6;
  c.beta = -2.0;
  RandomStream stream(12);
  CanonicalChain chain(c, stream);
  for (int i = 0; i < 3000; ++i) {
    chain.step();
    if (i < 1500) chain.adapt();
    EXPECT_GE(chain.local_purity(), 0.5 - 1e-12);
    EXPECT_LE(chain.local_purity(), 1.0 + 1e-12);
  }
  EXPECT_GT(chain.unitary_acceptance(), 0.05);
  EXPECT_GT(chain.shell().acceptance(), 0.05);
  EXPECT_THROW(CanonicalChain(EnsembleConfig{}, stream), ValidationError);
}

}  // namespace
}  // namespace purity::ens
