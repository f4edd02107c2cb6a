#include "purity/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "purity/errors.hpp"

namespace purity::ens {

namespace {

constexpr double kPinTolerance = 1e-12;
constexpr double kTargetAcceptance = 0.3;
constexpr long kAdaptWindow = 50;

bool accept(double log_ratio, RandomStream& stream) {
  if (log_ratio >= 0.0) return true;
  return std::log(stream.uniform()) < log_ratio;
}

void tune(double& step, long& proposed, long& accepted, double lo, double hi) {
  if (proposed < kAdaptWindow) return;
  const double rate = static_cast<double>(accepted) / static_cast<double>(proposed);
  step *= rate > kTargetAcceptance ? 1.15 : 0.87;
  step = std::clamp(step, lo, hi);
  proposed = 0;
  accepted = 0;
}

double required_x(const EnsembleConfig& config) {
  config.validate();
  if (!config.x) throw ValidationError("the canonical ensemble requires a fixed x");
  return *config.x;
}

std::vector<double> normalized(std::vector<double> v) {
  double norm = 0.0;
  for (const double e : v) norm += e * e;
  norm = std::sqrt(norm);
  for (double& e : v) e /= norm;
  return v;
}

}  // namespace

void McConfig::validate() const {
  if (burn_in < 0) throw ValidationError("burn-in must be >= 0");
  if (n_samples < 1) throw ValidationError("samples must be >= 1");
  if (thinning < 1) throw ValidationError("thinning must be >= 1");
  if (!(step_scale > 0.0)) throw ValidationError("step scale must be > 0");
  if (chains < 1) throw ValidationError("chains must be >= 1");
}

void EnsembleConfig::validate() const {
  mc.validate();
  if (!(shell_eps > 0.0)) throw ValidationError("shell_eps must be > 0");
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  if (x) {
    const double lo = 1.0 / dims.n();
    if (!(*x >= lo - kPinTolerance && *x <= 1.0 + kPinTolerance)) {
      throw ValidationError("global purity x must satisfy 1/N <= x <= 1 (1/N = " + to_decimal(lo) + ", got " +
                            to_decimal(*x) + ")");
    }
  }
}

nlohmann::json EnsembleConfig::to_json() const {
  nlohmann::json j{{"NA", dims.na()},
                   {"NB", dims.nb()},
                   {"beta", beta},
                   {"seed", seed},
                   {"shell_eps", shell_eps},
                   {"burn_in", mc.burn_in},
                   {"samples", mc.n_samples},
                   {"thinning", mc.thinning},
                   {"step_scale", mc.step_scale},
                   {"chains", mc.chains}};
  j["x"] = x ? nlohmann::json(*x) : nlohmann::json("free");
  return j;
}

// ---------------------------------------------------------------------------

ShellChain::ShellChain(int n_dim, double x, double shell_eps, double step_scale, RandomStream& stream)
    : n_(n_dim), step_(step_scale), stream_(&stream), spectrum_(Spectrum::uniform(std::max(n_dim, 1))) {
  if (n_dim < 1) throw ValidationError("dimension must be >= 1");
  if (!(shell_eps > 0.0)) throw ValidationError("shell_eps must be > 0");
  const double lo = 1.0 / n_dim;
  if (!(x >= lo - kPinTolerance && x <= 1.0 + kPinTolerance)) {
    throw ValidationError("infeasible purity shell: x = " + to_decimal(x) + " is outside [1/N, 1]");
  }
  if (x <= lo + kPinTolerance) {
    frozen_ = true;
    return;
  }
  if (x >= 1.0 - kPinTolerance) {
    frozen_ = true;
    spectrum_ = Spectrum::vertex(n_dim, static_cast<int>(stream.index(static_cast<std::size_t>(n_dim))));
    return;
  }

  r_lo_ = std::sqrt(std::max(0.0, x - shell_eps - lo));
  r_hi_ = std::sqrt(x + shell_eps - lo);

  std::vector<double> vertex(static_cast<std::size_t>(n_), -lo);
  vertex[0] += 1.0;
  std::vector<double> spread(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) spread[static_cast<std::size_t>(i)] = (n_ - 1) / 2.0 - i;
  vertex = normalized(vertex);
  spread = normalized(spread);

  const double r_target = std::sqrt(x - lo);
  double mix = 0.5;
  for (int attempt = 0; attempt < 60; ++attempt, mix *= 0.5) {
    std::vector<double> d(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = vertex[i] + mix * spread[i];
    direction_ = normalized(std::move(d));
    if (r_target <= max_radius(direction_) * (1.0 - 1e-9)) break;
  }
  r_ = std::min(r_target, max_radius(direction_) * (1.0 - 1e-9));
  if (r_ < r_lo_) throw ValidationError("could not place a starting point on the purity shell");
  commit(point(r_, direction_));
}

std::vector<double> ShellChain::point(double r, std::span<const double> direction) const {
  std::vector<double> lambda(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) lambda[static_cast<std::size_t>(i)] = 1.0 / n_ + r * direction[static_cast<std::size_t>(i)];
  return lambda;
}

double ShellChain::max_radius(std::span<const double> direction) const {
  double limit = std::numeric_limits<double>::infinity();
  for (const double d : direction) {
    if (d < 0.0) limit = std::min(limit, (1.0 / n_) / -d);
  }
  return limit;
}

double ShellChain::log_vandermonde(std::span<const double> lambda) const {
  double s = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = i + 1; j < lambda.size(); ++j) s += 2.0 * std::log(std::abs(lambda[i] - lambda[j]));
  }
  return s;
}

void ShellChain::commit(std::vector<double> lambda) { spectrum_ = Spectrum::from_eigenvalues(std::move(lambda)); }

void ShellChain::step(const LogWeight& log_weight) {
  if (frozen_) return;
  radial_update(log_weight);
  for (int i = 1; i < n_; ++i) angular_update(log_weight);
}

void ShellChain::radial_update(const LogWeight& log_weight) {
  const double r_max = std::min(r_hi_, max_radius(direction_));
  if (r_max <= r_lo_) return;
  const double m1 = static_cast<double>(n_) * n_ - 1.0;
  // Inverse CDF of r^{N²−2} on [r_lo, r_max], scaled by r_max to stay in range.
  const double t = std::pow(r_lo_ / r_max, m1);
  const double u = stream_->uniform();
  const double r_new = r_max * std::pow(t + u * (1.0 - t), 1.0 / m1);
  std::vector<double> candidate = point(r_new, direction_);
  if (log_weight) {
    const double delta = log_weight(candidate) - log_weight(spectrum_.values());
    if (!accept(delta, *stream_)) return;
  }
  r_ = r_new;
  commit(std::move(candidate));
}

void ShellChain::angular_update(const LogWeight& log_weight) {
  std::vector<double> proposal(static_cast<std::size_t>(n_));
  if (n_ == 2) {
    proposal = {-direction_[0], -direction_[1]};
  } else {
    double mean = 0.0;
    for (double& g : proposal) {
      g = stream_->normal();
      mean += g;
    }
    mean /= n_;
    for (std::size_t i = 0; i < proposal.size(); ++i) proposal[i] = direction_[i] + step_ * (proposal[i] - mean);
    proposal = normalized(std::move(proposal));
  }
  ++proposed_;
  ++window_proposed_;
  if (r_ > max_radius(proposal)) return;
  std::vector<double> candidate = point(r_, proposal);
  double delta = log_vandermonde(candidate) - log_vandermonde(spectrum_.values());
  if (log_weight) delta += log_weight(candidate) - log_weight(spectrum_.values());
  if (!accept(delta, *stream_)) return;
  ++accepted_;
  ++window_accepted_;
  direction_ = std::move(proposal);
  commit(std::move(candidate));
}

void ShellChain::adapt() {
  if (frozen_ || n_ == 2) return;
  tune(step_, window_proposed_, window_accepted_, 1e-9, 2.0);
}

void ShellChain::reset_counters() {
  proposed_ = accepted_ = window_proposed_ = window_accepted_ = 0;
}

double ShellChain::acceptance() const {
  if (frozen_ || proposed_ == 0) return 1.0;
  return static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

// ---------------------------------------------------------------------------

CanonicalChain::CanonicalChain(const EnsembleConfig& config, RandomStream& stream)
    : dims_(config.dims),
      beta_(config.beta),
      stream_(&stream),
      shell_(config.dims.n(), required_x(config), config.shell_eps, config.mc.step_scale, stream),
      u_(haar_unitary(config.dims.n(), stream)),
      local_step_(config.mc.step_scale) {
  pi_a_ = evaluate(shell_.spectrum().values(), u_);
}

double CanonicalChain::evaluate(std::span<const double> lambda, const Matrix& u) const {
  if (shell_.frozen() && shell_.spectrum().is_uniform()) return 1.0 / dims_.na();
  return ens::local_purity(lambda, u, dims_);
}

Matrix CanonicalChain::local_unitary_move() {
  const int n = dims_.n();
  Matrix g(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) g(r, c) = stream_->complex_normal();
  }
  const Matrix a = Complex(0.0, 0.5 * local_step_) * (0.5 * (g + g.adjoint()));
  const Matrix id = Matrix::Identity(n, n);
  const Matrix v = (id - a).partialPivLu().solve(id + a);
  return v * u_;
}

void CanonicalChain::step() {
  const bool independent = (move_count_++ % 2) == 0;
  Matrix candidate = independent ? haar_unitary(dims_.n(), *stream_) : local_unitary_move();
  const double pi_new = evaluate(shell_.spectrum().values(), candidate);
  const bool ok = accept(-beta_ * (pi_new - pi_a_), *stream_);
  if (!independent) {
    ++proposed_;
    ++window_proposed_;
  }
  if (ok) {
    if (!independent) {
      ++accepted_;
      ++window_accepted_;
    }
    u_ = std::move(candidate);
    pi_a_ = pi_new;
  }

  if (!shell_.frozen()) {
    if (beta_ == 0.0) {
      shell_.step();
    } else {
      shell_.step([this](std::span<const double> lambda) { return -beta_ * evaluate(lambda, u_); });
    }
    pi_a_ = evaluate(shell_.spectrum().values(), u_);
  }
}

void CanonicalChain::adapt() {
  shell_.adapt();
  tune(local_step_, window_proposed_, window_accepted_, 1e-4, 4.0);
}

void CanonicalChain::reset_counters() {
  shell_.reset_counters();
  proposed_ = accepted_ = window_proposed_ = window_accepted_ = 0;
}

double CanonicalChain::unitary_acceptance() const {
  if (proposed_ == 0) return 1.0;
  return static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

}  // namespace purity::ens
