#pragma once

// Markov chains for the fixed-global-purity ensemble and for the canonical
// ensemble weighted by exp(-β π_A).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "purity/random.hpp"
#include "purity/states.hpp"
#include "purity/weingarten.hpp"

namespace purity::ens {

struct McConfig {
  long burn_in = 2000;
  long n_samples = 10000;
  int thinning = 1;
  /// Initial angular / unitary step; adapted toward ~30% acceptance during burn-in.
  double step_scale = 0.3;
  /// Independent chains on streams 0..chains-1, run concurrently.
  int chains = 1;

  void validate() const;
};

struct EnsembleConfig {
  BipartitionDims dims{1, 1};
  /// Target global purity; empty means "free" (not fixed).
  std::optional<double> x;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double shell_eps = 1e-3;
  McConfig mc;

  /// Throws ValidationError on an infeasible x, shell_eps <= 0 or a bad McConfig.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Samples spectra from the induced measure restricted to the shell
/// |Σλ² − x| <= shell_eps.
///
/// The state is written λ = (1/N)·1 + r·û with û a unit vector in the
/// sum-zero hyperplane. The induced density is the squared Vandermonde
/// V²(λ) = r^{N(N−1)} V²(û), so with the r^{N−2} volume factor the radial
/// conditional is r^{N²−2} on [r_lo, min(r_hi, r_max(û))] and is sampled
/// exactly. The direction moves by a symmetric random walk on the sphere,
/// accepted on V² and positivity.
///
/// x = 1/N (within 1e-12) pins the uniform spectrum; x = 1 pins a vertex.
class ShellChain {
 public:
  /// Extra log-weight of a candidate spectrum (0 for the plain shell ensemble).
  using LogWeight = std::function<double(std::span<const double>)>;

  ShellChain(int n_dim, double x, double shell_eps, double step_scale, RandomStream& stream);

  /// One radial update and N−1 angular updates.
  void step(const LogWeight& log_weight = {});
  /// Adapts the angular step toward 30% acceptance; call only during burn-in.
  void adapt();
  void reset_counters();

  bool frozen() const { return frozen_; }
  const Spectrum& spectrum() const { return spectrum_; }
  double acceptance() const;
  long proposals() const { return proposed_; }
  double step_size() const { return step_; }

 private:
  std::vector<double> point(double r, std::span<const double> direction) const;
  double max_radius(std::span<const double> direction) const;
  double log_vandermonde(std::span<const double> lambda) const;
  void radial_update(const LogWeight& log_weight);
  void angular_update(const LogWeight& log_weight);
  void commit(std::vector<double> lambda);

  int n_;
  double r_lo_ = 0.0;
  double r_hi_ = 0.0;
  double step_;
  bool frozen_ = false;
  RandomStream* stream_;

  double r_ = 0.0;
  std::vector<double> direction_;
  Spectrum spectrum_;

  long proposed_ = 0;
  long accepted_ = 0;
  long window_proposed_ = 0;
  long window_accepted_ = 0;
};

/// Joint Metropolis chain over (U, Λ) targeting
/// exp(−β π_A(U Λ U†)) dμ_Haar(U) dσ_shell(Λ). Normalizations cancel.
///
/// U moves alternate between independent Haar proposals and local moves
/// U → V U with V the Cayley transform of a scaled Hermitian Gaussian. Λ moves
/// are the ShellChain updates reweighted by exp(−β Δπ_A).
class CanonicalChain {
 public:
  CanonicalChain(const EnsembleConfig& config, RandomStream& stream);

  void step();
  void adapt();
  void reset_counters();

  /// π_A of the current state; exactly 1/N_A when the spectrum is uniform.
  double local_purity() const { return pi_a_; }
  const ShellChain& shell() const { return shell_; }
  const Matrix& unitary() const { return u_; }
  double unitary_acceptance() const;

 private:
  double evaluate(std::span<const double> lambda, const Matrix& u) const;
  Matrix local_unitary_move();

  BipartitionDims dims_;
  double beta_;
  RandomStream* stream_;
  ShellChain shell_;
  Matrix u_;
  double pi_a_ = 0.0;
  double local_step_;
  long move_count_ = 0;

  long proposed_ = 0;
  long accepted_ = 0;
  long window_proposed_ = 0;
  long window_accepted_ = 0;
};

}  // namespace purity::ens
