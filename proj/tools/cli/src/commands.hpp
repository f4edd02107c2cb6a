#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "output.hpp"
#include "purity/rational.hpp"
#include "purity/samplers.hpp"
#include "purity/weingarten.hpp"

namespace purity::cli {

/// Every flag of the tool, after command line and config file are merged.
struct Options {
  int na = 2;
  int nb = 2;
  std::string x = "1";
  double beta = 0.0;
  bool has_beta = false;
  std::string betas = "-0.2,-0.1,0,0.1,0.2";
  bool scale_beta = false;
  int k = 1;
  int n = 4;
  std::uint64_t seed = 0;
  long samples = 20000;
  long burn_in = 2000;
  int thinning = 1;
  double shell_eps = 1e-3;
  double step_scale = 0.3;
  int chains = 1;
  int threads = 1;
  long unitaries = 200;
  std::string estimator = "canonical";
  std::string spectrum;
  std::string p3;
  std::string p4;
  std::string ns = "4,16,36,64";
  std::string out;
  std::string format = "csv";
  std::string manifest;
  std::string inject_fault;

  nlohmann::ordered_json to_json() const;
  /// Flags that reproduce this configuration (excluding --out and --config).
  std::vector<std::string> to_args() const;
};

/// What a command produced: a table, or a JSON document, plus an exit code.
struct Result {
  std::optional<Table> table;
  std::optional<nlohmann::ordered_json> document;
  int code = 0;
};

struct Context {
  std::string command;
  Options opt;
  std::ostream& err;
};

// Parsing helpers shared by the commands.
BipartitionDims dims_of(const Options& opt);
/// "1/N" or "minmix" → 1/N, "pure" → 1, otherwise an exact rational.
Rational parse_x(const std::string& text, int n_dim);
std::vector<Rational> parse_rational_list(const std::string& text);
ens::EnsembleConfig ensemble_config(const Options& opt, double x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

Result cmd_exact(Context& ctx);
Result cmd_mc(Context& ctx);
Result cmd_sweep_beta(Context& ctx);
Result cmd_scaling(Context& ctx);
Result cmd_selftest(Context& ctx);
Result cmd_chartable(Context& ctx);
Result cmd_poly(Context& ctx);

}  // namespace purity::cli
