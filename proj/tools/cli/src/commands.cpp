#include "commands.hpp"

#include <cmath>
#include <sstream>

#include "purity/ensembles.hpp"
#include "purity/errors.hpp"
#include "purity/symcore.hpp"

namespace purity::cli {

namespace {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

ens::McConfig mc_config(const Options& opt) {
  ens::McConfig mc;
  mc.burn_in = opt.burn_in;
  mc.n_samples = opt.samples;
  mc.thinning = opt.thinning;
  mc.step_scale = opt.step_scale;
  mc.chains = opt.chains;
  mc.validate();
  return mc;
}

std::string optional_ess(const ens::McEstimate& e) { return e.ess ? fmt_exact(std::round(*e.ess)) : ""; }

/// <p3>_x, <p4>_x when known exactly: from --p3/--p4 or at x = 1/N and x = 1.
std::optional<std::pair<Rational, Rational>> known_power_sums(const Options& opt, const BipartitionDims& dims,
                                                              const Rational& x) {
  if (opt.p3.empty() != opt.p4.empty()) throw ValidationError("--p3 and --p4 must be given together");
  if (!opt.p3.empty()) {
    const Rational p3 = parse_rational(opt.p3);
    const Rational p4 = parse_rational(opt.p4);
    if (p3 < x * x || p3 > x) {
      throw ValidationError("--p3 must satisfy x^2 <= <Tr L^3> <= x (got " + to_string(p3) + ")");
    }
    if (p4 > p3 || p4 * x < p3 * p3) {
      throw ValidationError("--p4 must satisfy <Tr L^3>^2/x <= <Tr L^4> <= <Tr L^3> (got " + to_string(p4) + ")");
    }
    return std::pair{p3, p4};
  }
  const Rational n = dims.n();
  if (x == 1 / n) return std::pair{1 / (n * n), 1 / (n * n * n)};
  if (x == 1) return std::pair{Rational(1), Rational(1)};
  return std::nullopt;
}

void add_common_meta(Table& t, const Context& ctx) {
  t.meta("command", ctx.command);
  t.meta("seed", std::to_string(ctx.opt.seed));
}

}  // namespace

// ---------------------------------------------------------------------------

nlohmann::ordered_json Options::to_json() const {
  return {{"na", na},
          {"nb", nb},
          {"x", x},
          {"beta", beta},
          {"has_beta", has_beta},
          {"betas", betas},
          {"scale_beta", scale_beta},
          {"k", k},
          {"n", n},
          {"seed", seed},
          {"samples", samples},
          {"burn_in", burn_in},
          {"thinning", thinning},
          {"shell_eps", shell_eps},
          {"step_scale", step_scale},
          {"chains", chains},
          {"threads", threads},
          {"unitaries", unitaries},
          {"estimator", estimator},
          {"spectrum", spectrum},
          {"p3", p3},
          {"p4", p4},
          {"ns", ns},
          {"format", format},
          {"inject_fault", inject_fault}};
}

std::vector<std::string> Options::to_args() const {
  std::vector<std::string> a{"--na", std::to_string(na), "--nb", std::to_string(nb), "--x", x,
                             "--betas", betas, "--k", std::to_string(k), "--n", std::to_string(n),
                             "--seed", std::to_string(seed), "--samples", std::to_string(samples),
                             "--burn-in", std::to_string(burn_in), "--thinning", std::to_string(thinning),
                             "--shell-eps", fmt_g17(shell_eps), "--step-scale", fmt_g17(step_scale),
                             "--chains", std::to_string(chains), "--threads", std::to_string(threads),
                             "--unitaries", std::to_string(unitaries), "--estimator", estimator,
                             "--ns", ns, "--format", format};
  if (has_beta) a.insert(a.end(), {"--beta", fmt_g17(beta)});
  if (scale_beta) a.emplace_back("--scale-beta");
  if (!spectrum.empty()) a.insert(a.end(), {"--spectrum", spectrum});
  if (!p3.empty()) a.insert(a.end(), {"--p3", p3});
  if (!p4.empty()) a.insert(a.end(), {"--p4", p4});
  if (!inject_fault.empty()) a.insert(a.end(), {"--inject-fault", inject_fault});
  return a;
}

BipartitionDims dims_of(const Options& opt) { return BipartitionDims(opt.na, opt.nb); }

Rational parse_x(const std::string& text, int n_dim) {
  if (text == "1/N" || text == "minmix") return Rational(1, n_dim);
  if (text == "pure") return Rational(1);
  return parse_rational(text);
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& item : split(text)) out.push_back(parse_rational(item));
  if (out.empty()) throw ValidationError("empty list '" + text + "'");
  return out;
}

ens::EnsembleConfig ensemble_config(const Options& opt, double x) {
  ens::EnsembleConfig cfg;
  cfg.dims = dims_of(opt);
  cfg.x = x;
  cfg.beta = opt.beta;
  cfg.seed = opt.seed;
  cfg.shell_eps = opt.shell_eps;
  cfg.mc = mc_config(opt);
  cfg.validate();
  return cfg;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------

Result cmd_exact(Context& ctx) {
  const Options& opt = ctx.opt;
  const auto dims = dims_of(opt);
  const Rational x = parse_x(opt.x, dims.n());
  if (opt.k != 1 && opt.k != 2) throw ValidationError("exact supports --k 1 or --k 2 (got " + std::to_string(opt.k) + ")");

  Table t("exact", {"quantity", "exact", "decimal"});
  add_common_meta(t, ctx);
  t.meta("NA", std::to_string(dims.na()));
  t.meta("NB", std::to_string(dims.nb()));
  t.meta("x", to_string(x));

  const Rational m1 = wg::closed_m1(dims, x);
  const auto sums = known_power_sums(opt, dims, x);
  if (opt.k == 1) t.row({"M1", to_string(m1), to_decimal(m1)});

  if (opt.k == 2) {
    if (!sums) {
      throw ValidationError("k=2 at generic x needs --p3 and --p4 (ensemble averages <Tr L^3>_x, <Tr L^4>_x; "
                            "estimate them with `mc --estimator power-sums`)");
    }
    const Rational m2 = wg::closed_m2_spectrum(dims, x, sums->first, sums->second);
    t.row({"M2", to_string(m2), to_decimal(m2)});
    const Rational k2 = wg::cumulant2(dims, x, sums->first, sums->second);
    t.row({"K2", to_string(k2), to_decimal(k2)});
  }

  if (opt.has_beta) {
    if (!sums) {
      throw ValidationError("--beta at generic x needs --p3 and --p4 (ensemble averages <Tr L^3>_x, <Tr L^4>_x)");
    }
    const Rational k2 = wg::cumulant2(dims, x, sums->first, sums->second);
    if (opt.k == 1) t.row({"K2", to_string(k2), to_decimal(k2)});
    const double high_t = wg::m1_high_temperature(dims, to_double(x), opt.beta, to_double(sums->first),
                                                  to_double(sums->second));
    t.row({"M1_highT", std::string(), fmt_exact(high_t)});
    const double beta_c = wg::beta_critical(dims.n(), to_double(x));
    t.row({"beta_c", std::string(), fmt_exact(beta_c)});
    if (std::abs(opt.beta) > beta_c) {
      ctx.err << "warning: |beta| = " << fmt_exact(std::abs(opt.beta)) << " exceeds the diagnostic scale beta_c = "
              << fmt_exact(beta_c) << "; the first-order expansion is not reliable there\n";
    }
  }
  return {std::move(t), std::nullopt, 0};
}

Result cmd_mc(Context& ctx) {
  const Options& opt = ctx.opt;
  const auto dims = dims_of(opt);
  const auto mc = mc_config(opt);
  if (opt.k < 1) throw ValidationError("--k must be >= 1");

  Table t("mc", {"op", "k", "mean", "stderr", "n", "ess", "exact"});
  add_common_meta(t, ctx);
  auto emit = [&](const std::string& op, int k, const ens::McEstimate& e, const std::string& exact,
                  nlohmann::json config) {
    t.row({op, std::int64_t{k}, fmt_mc(e.mean, e.std_error), fmt_error(e.std_error), std::int64_t{e.n},
           optional_ess(e), exact});
    t.attach("config", std::move(config));
    if (!e.note.empty()) t.attach("note", e.note);
  };

  if (opt.estimator == "canonical") {
    const Rational x = parse_x(opt.x, dims.n());
    auto cfg = ensemble_config(opt, to_double(x));
    if (x == Rational(1, dims.n())) cfg.x = 1.0 / dims.n();
    auto config = cfg.to_json();
    config["k"] = opt.k;
    t.meta("config", config.dump());
    emit("mc_moment_canonical", opt.k, ens::mc_moment_canonical(cfg, opt.k), "", config);
  } else if (opt.estimator == "fixed-spectrum") {
    if (opt.spectrum.empty()) throw ValidationError("--estimator fixed-spectrum needs --spectrum l1,l2,...");
    const auto exact_values = parse_rational_list(opt.spectrum);
    std::vector<double> values;
    Rational p2 = 0, p3 = 0, p4 = 0;
    for (const auto& v : exact_values) {
      values.push_back(to_double(v));
      p2 += v * v;
      p3 += v * v * v;
      p4 += v * v * v * v;
    }
    const ens::Spectrum spectrum(values);
    if (spectrum.dim() != dims.n()) {
      throw ValidationError("--spectrum has " + std::to_string(spectrum.dim()) + " entries, expected N_A*N_B = " +
                            std::to_string(dims.n()));
    }
    std::string exact;
    if (opt.k == 1) exact = to_string(wg::closed_m1(dims, p2));
    if (opt.k == 2 && dims.n() >= 4) exact = to_string(wg::closed_m2_spectrum(dims, p2, p3, p4));
    ens::RandomStream stream(opt.seed, 0);
    nlohmann::json config{{"NA", dims.na()}, {"NB", dims.nb()}, {"spectrum", values}, {"k", opt.k},
                          {"seed", opt.seed},    {"samples", mc.n_samples}};
    t.meta("config", config.dump());
    emit("mc_moment_fixed_spectrum", opt.k, ens::mc_moment_fixed_spectrum(spectrum, dims, opt.k, mc, stream), exact,
         config);
  } else if (opt.estimator == "power-sums") {
    const Rational x = parse_x(opt.x, dims.n());
    ens::RandomStream stream(opt.seed, 0);
    const auto est = ens::estimate_avg_power_sums(dims.n(), to_double(x), opt.shell_eps, mc, stream);
    nlohmann::json config{{"N", dims.n()}, {"x", to_string(x)}, {"shell_eps", opt.shell_eps}, {"seed", opt.seed},
                          {"burn_in", mc.burn_in}, {"samples", mc.n_samples}};
    t.meta("config", config.dump());
    emit("avg_p3", 3, est.p3, "", config);
    emit("avg_p4", 4, est.p4, "", config);
  } else if (opt.estimator == "induced") {
    ens::RandomStream stream(opt.seed, 0);
    nlohmann::json config{{"N", dims.n()}, {"seed", opt.seed}, {"samples", mc.n_samples}};
    t.meta("config", config.dump());
    emit("induced_purity", 2, ens::mc_induced_purity(dims.n(), mc, stream), "", config);
  } else if (opt.estimator == "shell-average") {
    const Rational x = parse_x(opt.x, dims.n());
    const auto cfg = ensemble_config(opt, to_double(x));
    auto config = cfg.to_json();
    config["k"] = opt.k;
    config["unitaries"] = opt.unitaries;
    t.meta("config", config.dump());
    emit("mc_moment_shell_average", opt.k, ens::mc_moment_shell_average(cfg, opt.k, opt.unitaries), "", config);
  } else {
    throw ValidationError("unknown --estimator '" + opt.estimator +
                          "' (canonical, fixed-spectrum, power-sums, induced, shell-average)");
  }
  return {std::move(t), std::nullopt, 0};
}

Result cmd_sweep_beta(Context& ctx) {
  const Options& opt = ctx.opt;
  const auto dims = dims_of(opt);
  const Rational x_exact = parse_x(opt.x, dims.n());
  const double x = to_double(x_exact);
  const auto mc = mc_config(opt);
  const double beta_c = wg::beta_critical(dims.n(), x);
  const double scale = opt.scale_beta ? std::pow(static_cast<double>(dims.n()), 1.5) : 1.0;

  // <p3>, <p4> for the first-order prediction.
  double p3 = 0, p4 = 0, p3_err = 0, p4_err = 0;
  if (const auto sums = known_power_sums(opt, dims, x_exact)) {
    p3 = to_double(sums->first);
    p4 = to_double(sums->second);
  } else {
    ens::RandomStream stream(derive_seed(opt.seed, 0), 0);
    const auto est = ens::estimate_avg_power_sums(dims.n(), x, opt.shell_eps, mc, stream);
    p3 = est.p3.mean;
    p4 = est.p4.mean;
    p3_err = est.p3.std_error;
    p4_err = est.p4.std_error;
  }
  const double k2 = wg::cumulant2(dims, x, p3, p4);
  const auto coeffs = wg::cumulant2_coefficients(dims);
  const double k2_err = std::abs(to_double(coeffs.p3)) * p3_err + std::abs(to_double(coeffs.p4)) * p4_err;

  Table t("sweep_beta", {"beta", "m1", "stderr", "n", "high_t", "high_t_err", "beta_over_beta_c"});
  add_common_meta(t, ctx);
  t.meta("NA", std::to_string(dims.na()));
  t.meta("NB", std::to_string(dims.nb()));
  t.meta("x", to_string(x_exact));
  t.meta("beta_scale", fmt_exact(scale));
  t.meta("beta_c", fmt_exact(beta_c));
  t.meta("avg_p3", fmt_exact(p3));
  t.meta("avg_p3_err", fmt_exact(p3_err));
  t.meta("avg_p4", fmt_exact(p4));
  t.meta("avg_p4_err", fmt_exact(p4_err));
  t.meta("K2", fmt_exact(k2));
  t.meta("K2_err", fmt_exact(k2_err));

  const auto grid = parse_rational_list(opt.betas);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double beta = to_double(grid[i]) * scale;
    Options row_opt = opt;
    row_opt.beta = beta;
    row_opt.seed = derive_seed(opt.seed, i + 1);
    auto cfg = ensemble_config(row_opt, x);
    if (x_exact == Rational(1, dims.n())) cfg.x = 1.0 / dims.n();
    const auto est = ens::mc_moment_canonical(cfg, 1);
    const double high_t = wg::m1_high_temperature(dims, x, beta, p3, p4);
    if (std::abs(beta) > beta_c) {
      ctx.err << "warning: beta = " << fmt_exact(beta) << " exceeds the diagnostic scale beta_c = "
              << fmt_exact(beta_c) << "\n";
    }
    t.row({fmt_exact(beta), fmt_mc(est.mean, est.std_error), fmt_error(est.std_error), std::int64_t{est.n},
           fmt_exact(high_t), fmt_error(std::abs(beta) * k2_err), fmt_exact(beta / beta_c)});
    t.attach("chain_seed", row_opt.seed);
  }
  return {std::move(t), std::nullopt, 0};
}

Result cmd_scaling(Context& ctx) {
  const Options& opt = ctx.opt;
  if (opt.k < 1 || opt.k > 3) throw ValidationError("scaling supports --k 1, 2 or 3");
  const auto mc = mc_config(opt);

  Table t("scaling", {"N", "x", "k", "moment", "stderr", "asymptote", "rel_dev", "method"});
  add_common_meta(t, ctx);

  const auto ns = parse_rational_list(opt.ns);
  for (std::size_t row = 0; row < ns.size(); ++row) {
    if (denominator(ns[row]) != 1 || ns[row] < 1) throw ValidationError("--ns entries must be positive integers");
    const int n = numerator(ns[row]).convert_to<int>();
    const int root = wg::exact_sqrt(n);
    if (root < 1) throw ValidationError("scaling uses balanced bipartitions; N = " + std::to_string(n) + " is not a perfect square");
    const BipartitionDims dims(root, root);
    const Rational x = parse_x(opt.x, n);
    if (x < Rational(1, n) || x > 1) {
      throw ValidationError("x = " + to_string(x) + " is outside [1/N, 1] for N = " + std::to_string(n));
    }
    const bool endpoint = x == Rational(1, n) || x == 1;

    double moment = 0.0;
    double err = 0.0;
    std::string method = "exact";
    if (opt.k == 1) {
      moment = to_double(wg::closed_m1(dims, x));
    } else if (opt.k == 2) {
      if (endpoint) {
        const Rational p3 = x == 1 ? Rational(1) : Rational(1, n) * Rational(1, n);
        const Rational p4 = x == 1 ? Rational(1) : p3 * Rational(1, n);
        moment = to_double(wg::closed_m2_spectrum(dims, x, p3, p4));
      } else {
        ens::RandomStream stream(derive_seed(opt.seed, row), 0);
        const auto est = ens::estimate_avg_power_sums(n, to_double(x), opt.shell_eps, mc, stream);
        const auto poly = wg::closed_m2_polynomial(dims);
        const double c3 = to_double(poly.coefficient({3}));
        const double c4 = to_double(poly.coefficient({4}));
        moment = to_double(wg::closed_m2_spectrum(dims, x, 0, 0)) + c3 * est.p3.mean + c4 * est.p4.mean;
        err = std::abs(c3) * est.p3.std_error + std::abs(c4) * est.p4.std_error;
        method = "mc-power-sums";
      }
    } else {
      if (!endpoint) throw ValidationError("k=3 scaling is available at x=1 and x=1/N only");
      wg::MomentOptions mo;
      mo.threads = opt.threads;
      const auto poly = wg::moment_polynomial(3, dims, mo);
      moment = to_double(x == 1 ? poly.evaluate_pure() : poly.evaluate_maximally_mixed());
    }
    const double asymptote = std::pow((1.0 + to_double(x)) / std::sqrt(static_cast<double>(n)), opt.k);
    t.row({std::int64_t{n}, to_string(x), std::int64_t{opt.k}, err > 0 ? fmt_mc(moment, err) : fmt_exact(moment),
           fmt_error(err), fmt_exact(asymptote), fmt_exact(moment / asymptote - 1.0), method});
  }
  return {std::move(t), std::nullopt, 0};
}

Result cmd_chartable(Context& ctx) {
  if (ctx.opt.n < 1 || ctx.opt.n > 12) throw ValidationError("chartable supports 1 <= --n <= 12");
  nlohmann::ordered_json doc{{"schema", "purity.chartable.v1"}};
  const auto table = sym::CharacterTable::build(ctx.opt.n).to_json();
  for (const auto& [k, v] : table.items()) doc[k] = v;
  return {std::nullopt, std::move(doc), 0};
}

Result cmd_poly(Context& ctx) {
  const auto dims = dims_of(ctx.opt);
  wg::MomentOptions mo;
  mo.threads = ctx.opt.threads;
  const auto poly = wg::moment_polynomial(ctx.opt.k, dims, mo);
  const Rational pure = poly.evaluate_pure();
  const Rational mixed = poly.evaluate_maximally_mixed();
  nlohmann::ordered_json doc{{"schema", "purity.poly.v1"},
                             {"k", ctx.opt.k},
                             {"polynomial", poly.to_json()},
                             {"pure", {{"exact", to_string(pure)}, {"decimal", to_decimal(pure)}}},
                             {"maximally_mixed", {{"exact", to_string(mixed)}, {"decimal", to_decimal(mixed)}}}};
  return {std::nullopt, std::move(doc), 0};
}

}  // namespace purity::cli
