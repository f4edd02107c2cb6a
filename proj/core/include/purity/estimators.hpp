#pragma once

// Monte Carlo estimates of purity moments and power-sum averages with
// batch-means error bars.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "purity/random.hpp"
#include "purity/samplers.hpp"
#include "purity/states.hpp"

namespace purity::ens {

struct McEstimate {
  double mean = 0.0;
  /// Batch-means standard error. Serialized as "stderr".
  double std_error = 0.0;
  long n = 0;
  /// Effective sample size, reported when autocorrelation is detectable.
  std::optional<double> ess;
  /// Non-fatal sampler remarks (acceptance rates, low ESS).
  std::string note;

  nlohmann::json to_json() const;
};

/// Mean and batch-means stderr of a sample path (>= 50 batches once n >= 50).
/// A constant path gives exactly that constant with zero error.
McEstimate batch_means(std::span<const double> samples);

/// Pools independent per-chain estimates in the given order.
McEstimate pool(std::span<const McEstimate> chains);

/// Average of π_A(U Λ U†)^k over i.i.d. Haar U. A uniform Λ returns exactly
/// N_A^{−k} with zero error.
McEstimate mc_moment_fixed_spectrum(const Spectrum& spectrum, const BipartitionDims& dims, int k,
                                    const McConfig& mc, RandomStream& stream);

/// Average of π_A^k under exp(−β π_A) over the fixed-purity ensemble, from
/// mc.chains independent CanonicalChains on streams 0..chains−1 of config.seed.
/// Throws SamplerDiagnostic if an adaptive move accepts less than 1% of proposals.
McEstimate mc_moment_canonical(const EnsembleConfig& config, int k);

struct PowerSumEstimate {
  McEstimate p3;
  McEstimate p4;
};

/// <Tr Λ³>_x and <Tr Λ⁴>_x over the shell ensemble. Exact at x = 1/N and x = 1.
PowerSumEstimate estimate_avg_power_sums(int n_dim, double x, double shell_eps, const McConfig& mc,
                                         RandomStream& stream);

/// Average of <π_A^k>_Λ over shell spectra, each moment itself an MC average over
/// `unitaries_per_spectrum` Haar draws. Composes the two β-free estimators.
McEstimate mc_moment_shell_average(const EnsembleConfig& config, int k, long unitaries_per_spectrum);

/// Average global purity Tr Λ² under the induced measure, i.i.d.
McEstimate mc_induced_purity(int n_dim, const McConfig& mc, RandomStream& stream);

}  // namespace purity::ens
