#include "purity/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "purity/errors.hpp"

namespace purity::ens {

namespace {

constexpr long kMinBatches = 50;
constexpr double kMinAcceptance = 0.01;

double int_pow(double v, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= v;
  return out;
}

void require_order(int k) {
  if (k < 1) throw ValidationError("moment order k must be >= 1");
}

std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * rate);
  return buf;
}

}  // namespace

nlohmann::json McEstimate::to_json() const {
  nlohmann::json j{{"mean", mean}, {"stderr", std_error}, {"n", n}};
  if (ess) j["ess"] = *ess;
  if (!note.empty()) j["note"] = note;
  return j;
}

McEstimate batch_means(std::span<const double> samples) {
  if (samples.empty()) throw ValidationError("cannot estimate from zero samples");
  McEstimate out;
  out.n = static_cast<long>(samples.size());
  if (std::all_of(samples.begin(), samples.end(), [&](double v) { return v == samples.front(); })) {
    out.mean = samples.front();
    return out;
  }

  double sum = 0.0;
  for (const double v : samples) sum += v;
  out.mean = sum / static_cast<double>(out.n);

  double ss = 0.0;
  for (const double v : samples) ss += (v - out.mean) * (v - out.mean);
  const double sample_var = out.n > 1 ? ss / static_cast<double>(out.n - 1) : 0.0;

  if (out.n < kMinBatches) {
    out.std_error = std::sqrt(sample_var / static_cast<double>(out.n));
    return out;
  }
  const long batches = std::max(kMinBatches, static_cast<long>(std::sqrt(static_cast<double>(out.n))));
  const long size = out.n / batches;
  double batch_sum = 0.0;
  double batch_ss = 0.0;
  std::vector<double> batch_mean(static_cast<std::size_t>(batches));
  for (long b = 0; b < batches; ++b) {
    double s = 0.0;
    for (long i = 0; i < size; ++i) s += samples[static_cast<std::size_t>(b * size + i)];
    batch_mean[static_cast<std::size_t>(b)] = s / static_cast<double>(size);
    batch_sum += batch_mean[static_cast<std::size_t>(b)];
  }
  const double grand = batch_sum / static_cast<double>(batches);
  for (const double m : batch_mean) batch_ss += (m - grand) * (m - grand);
  const double batch_var = batch_ss / static_cast<double>(batches - 1);
  out.std_error = std::sqrt(batch_var / static_cast<double>(batches));

  const double iid_var_of_mean = sample_var / static_cast<double>(out.n);
  if (out.std_error > 0.0) {
    const double ess = static_cast<double>(out.n) * iid_var_of_mean / (out.std_error * out.std_error);
    if (ess < 0.9 * static_cast<double>(out.n)) out.ess = ess;
  }
  return out;
}

McEstimate pool(std::span<const McEstimate> chains) {
  if (chains.empty()) throw ValidationError("cannot pool zero estimates");
  if (chains.size() == 1) return chains.front();
  McEstimate out;
  double weighted = 0.0;
  double var = 0.0;
  double ess = 0.0;
  bool any_ess = false;
  bool constant = true;
  for (const auto& c : chains) {
    out.n += c.n;
    weighted += static_cast<double>(c.n) * c.mean;
    var += static_cast<double>(c.n) * static_cast<double>(c.n) * c.std_error * c.std_error;
    any_ess = any_ess || c.ess.has_value();
    ess += c.ess.value_or(static_cast<double>(c.n));
    constant = constant && c.std_error == 0.0 && c.mean == chains.front().mean;
    if (!c.note.empty()) out.note += (out.note.empty() ? "" : "; ") + c.note;
  }
  const double total = static_cast<double>(out.n);
  out.mean = constant ? chains.front().mean : weighted / total;
  out.std_error = std::sqrt(var) / total;
  if (any_ess) out.ess = ess;
  return out;
}

McEstimate mc_moment_fixed_spectrum(const Spectrum& spectrum, const BipartitionDims& dims, int k,
                                    const McConfig& mc, RandomStream& stream) {
  require_order(k);
  mc.validate();
  if (spectrum.dim() != dims.n()) throw ValidationError("spectrum dimension does not match N_A*N_B");
  if (spectrum.is_uniform()) {
    McEstimate out;
    out.mean = int_pow(1.0 / dims.na(), k);
    out.n = mc.n_samples;
    return out;
  }
  std::vector<double> samples(static_cast<std::size_t>(mc.n_samples));
  for (double& s : samples) {
    const Matrix u = haar_unitary(dims.n(), stream);
    s = int_pow(local_purity(spectrum.values(), u, dims), k);
  }
  return batch_means(samples);
}

McEstimate mc_moment_canonical(const EnsembleConfig& config, int k) {
  require_order(k);
  config.validate();
  const int chains = config.mc.chains;
  std::vector<McEstimate> results(static_cast<std::size_t>(chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chains));

  auto run = [&](int c) {
    try {
      RandomStream stream(config.seed, static_cast<std::uint64_t>(c));
      CanonicalChain chain(config, stream);
      for (long i = 0; i < config.mc.burn_in; ++i) {
        chain.step();
        chain.adapt();
      }
      chain.reset_counters();
      const long n = config.mc.n_samples / chains + (c < config.mc.n_samples % chains ? 1 : 0);
      std::vector<double> samples(static_cast<std::size_t>(std::max(n, 1L)));
      for (double& s : samples) {
        for (int t = 0; t < config.mc.thinning; ++t) chain.step();
        s = int_pow(chain.local_purity(), k);
      }
      McEstimate est = batch_means(samples);
      if (!chain.shell().frozen()) {
        const double shell_rate = chain.shell().acceptance();
        const double u_rate = chain.unitary_acceptance();
        if (shell_rate < kMinAcceptance || u_rate < kMinAcceptance) {
          throw SamplerDiagnostic("chain " + std::to_string(c) + " acceptance too low (spectrum " +
                                  percent(shell_rate) + ", unitary " + percent(u_rate) + ")");
        }
        est.note = "chain " + std::to_string(c) + ": spectrum acceptance " + percent(shell_rate) +
                   ", unitary acceptance " + percent(u_rate);
      }
      results[static_cast<std::size_t>(c)] = std::move(est);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  };

  if (chains == 1) {
    run(0);
  } else {
    std::vector<std::thread> workers;
    for (int c = 0; c < chains; ++c) workers.emplace_back(run, c);
    for (auto& w : workers) w.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return pool(results);
}

PowerSumEstimate estimate_avg_power_sums(int n_dim, double x, double shell_eps, const McConfig& mc,
                                         RandomStream& stream) {
  mc.validate();
  ShellChain chain(n_dim, x, shell_eps, mc.step_scale, stream);
  PowerSumEstimate out;
  if (chain.frozen()) {
    const auto p = power_sums(chain.spectrum(), 4);
    out.p3.mean = p[1];
    out.p4.mean = p[2];
    out.p3.n = out.p4.n = mc.n_samples;
    return out;
  }
  for (long i = 0; i < mc.burn_in; ++i) {
    chain.step();
    chain.adapt();
  }
  chain.reset_counters();
  std::vector<double> p3(static_cast<std::size_t>(mc.n_samples));
  std::vector<double> p4(static_cast<std::size_t>(mc.n_samples));
  for (std::size_t i = 0; i < p3.size(); ++i) {
    for (int t = 0; t < mc.thinning; ++t) chain.step();
    const auto p = power_sums(chain.spectrum(), 4);
    p3[i] = p[1];
    p4[i] = p[2];
  }
  if (n_dim > 2 && chain.acceptance() < kMinAcceptance) {
    throw SamplerDiagnostic("shell sampler acceptance too low (" + percent(chain.acceptance()) + ")");
  }
  out.p3 = batch_means(p3);
  out.p4 = batch_means(p4);
  if (n_dim > 2) {
    out.p3.note = out.p4.note = "spectrum acceptance " + percent(chain.acceptance());
  }
  return out;
}

McEstimate mc_moment_shell_average(const EnsembleConfig& config, int k, long unitaries_per_spectrum) {
  require_order(k);
  config.validate();
  if (!config.x) throw ValidationError("the shell average requires a fixed x");
  if (unitaries_per_spectrum < 1) throw ValidationError("unitaries per spectrum must be >= 1");
  RandomStream spectra(config.seed, 0);
  RandomStream unitaries(config.seed, 1);
  ShellChain chain(config.dims.n(), *config.x, config.shell_eps, config.mc.step_scale, spectra);
  McConfig inner = config.mc;
  inner.n_samples = unitaries_per_spectrum;
  if (chain.frozen()) return mc_moment_fixed_spectrum(chain.spectrum(), config.dims, k, inner, unitaries);
  for (long i = 0; i < config.mc.burn_in; ++i) {
    chain.step();
    chain.adapt();
  }
  chain.reset_counters();
  std::vector<double> values(static_cast<std::size_t>(config.mc.n_samples));
  for (double& v : values) {
    for (int t = 0; t < config.mc.thinning; ++t) chain.step();
    v = mc_moment_fixed_spectrum(chain.spectrum(), config.dims, k, inner, unitaries).mean;
  }
  return batch_means(values);
}

McEstimate mc_induced_purity(int n_dim, const McConfig& mc, RandomStream& stream) {
  mc.validate();
  std::vector<double> samples(static_cast<std::size_t>(mc.n_samples));
  for (double& s : samples) s = sample_spectrum_induced(n_dim, stream).purity();
  return batch_means(samples);
}

}  // namespace purity::ens
