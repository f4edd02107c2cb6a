#include "purity_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "purity/errors.hpp"

#ifndef PURITY_VERSION
#define PURITY_VERSION "0.0.0"
#endif

namespace purity::cli {

namespace fs = std::filesystem;

namespace {

/// Reads TOML through CLI11, or a flat JSON object whose keys are flag names
/// (underscores and hyphens are interchangeable, arrays become comma lists).
class ConfigFile : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream toml(text);
      return CLI::ConfigTOML::from_config(toml);
    }
    const auto doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw CLI::ConversionError("config file is not a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      item.inputs.push_back(scalar(value));
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar(e);
      return joined;
    }
    return v.dump();
  }
};

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string render(const Result& result, Format format) {
  std::ostringstream os;
  if (result.table) {
    result.table->write(os, format);
  } else if (result.document) {
    os << result.document->dump(2) << "\n";
  }
  return os.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << bytes;
}

fs::path manifest_path_for(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

struct Parsed {
  std::string command;
  Options opt;
  bool seed_given = false;
};

int execute(const Parsed& parsed, const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int replay(const Parsed& parsed, std::ostream& out, std::ostream& err) {
  if (parsed.opt.manifest.empty()) throw ValidationError("replay needs --manifest PATH");
  std::ifstream in(parsed.opt.manifest);
  if (!in) throw ValidationError("cannot read manifest " + parsed.opt.manifest);
  const auto manifest = nlohmann::json::parse(in, nullptr, false);
  if (manifest.is_discarded() || !manifest.contains("command") || !manifest.contains("config")) {
    throw ValidationError("malformed manifest " + parsed.opt.manifest);
  }

  const auto& cfg = manifest["config"];
  Options opt;
  opt.na = cfg.at("na");
  opt.nb = cfg.at("nb");
  opt.x = cfg.at("x");
  opt.beta = cfg.at("beta");
  opt.has_beta = cfg.at("has_beta");
  opt.betas = cfg.at("betas");
  opt.scale_beta = cfg.at("scale_beta");
  opt.k = cfg.at("k");
  opt.n = cfg.at("n");
  opt.seed = cfg.at("seed");
  opt.samples = cfg.at("samples");
  opt.burn_in = cfg.at("burn_in");
  opt.thinning = cfg.at("thinning");
  opt.shell_eps = cfg.at("shell_eps");
  opt.step_scale = cfg.at("step_scale");
  opt.chains = cfg.at("chains");
  opt.threads = cfg.at("threads");
  opt.unitaries = cfg.at("unitaries");
  opt.estimator = cfg.at("estimator");
  opt.spectrum = cfg.at("spectrum");
  opt.p3 = cfg.at("p3");
  opt.p4 = cfg.at("p4");
  opt.ns = cfg.at("ns");
  opt.format = cfg.at("format");
  opt.inject_fault = cfg.at("inject_fault");

  const auto& outputs = manifest.at("outputs");
  if (outputs.empty()) throw ValidationError("manifest lists no outputs");
  const fs::path original = outputs[0].at("path").get<std::string>();
  const std::string recorded = outputs[0].at("sha256");
  opt.out = parsed.opt.out.empty() ? original.string() + ".replay" + original.extension().string() : parsed.opt.out;

  std::vector<std::string> args{manifest["command"].get<std::string>()};
  const auto flags = opt.to_args();
  args.insert(args.end(), flags.begin(), flags.end());
  args.insert(args.end(), {"--out", opt.out});

  Parsed rerun{manifest["command"], opt, true};
  const int code = execute(rerun, args, out, err);
  if (code != kOk) return code;

  const std::string replayed = sha256_file(opt.out);
  if (replayed != recorded) {
    err << "replay: checksum mismatch for " << original.string() << "\n  recorded " << recorded << "\n  replayed "
        << replayed << " (" << opt.out << ")\n";
    return kCrossCheckFailure;
  }
  err << "replay: output identical to " << original.string() << " (sha256 " << replayed << ")\n";
  return kOk;
}

int execute(const Parsed& parsed, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (parsed.command == "replay") return replay(parsed, out, err);

  const auto start = std::chrono::steady_clock::now();
  Context ctx{parsed.command, parsed.opt, err};
  const Format format = parse_format(parsed.opt.format);
  Result result;
  if (parsed.command == "exact") result = cmd_exact(ctx);
  else if (parsed.command == "mc") result = cmd_mc(ctx);
  else if (parsed.command == "sweep-beta") result = cmd_sweep_beta(ctx);
  else if (parsed.command == "scaling") result = cmd_scaling(ctx);
  else if (parsed.command == "selftest") result = cmd_selftest(ctx);
  else if (parsed.command == "chartable") result = cmd_chartable(ctx);
  else if (parsed.command == "poly") result = cmd_poly(ctx);
  else throw ValidationError("unknown command " + parsed.command);

  if (result.table) result.table->meta("version", PURITY_VERSION);
  else if (result.document) (*result.document)["version"] = PURITY_VERSION;
  const std::string bytes = render(result, result.table ? format : Format::Jsonl);

  fs::path target;
  if (!parsed.opt.out.empty()) {
    target = parsed.opt.out;
  } else if (const char* dir = std::getenv("PURITY_OUT_DIR"); dir != nullptr && *dir != '\0') {
    target = fs::path(dir) / (parsed.command + (result.table ? extension(format) : std::string(".json")));
  }

  if (target.empty()) {
    out << bytes;
    if (!parsed.seed_given) err << "seed: " << parsed.opt.seed << "\n";
    return result.code;
  }

  write_file(target, bytes);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::ordered_json manifest{
      {"schema", "purity.manifest.v1"},
      {"version", PURITY_VERSION},
      {"command", parsed.command},
      {"argv", args},
      {"config", parsed.opt.to_json()},
      {"seeds", {parsed.opt.seed}},
      {"seed_generated", !parsed.seed_given},
      {"wall_time_s", wall},
      {"exit_code", result.code},
      {"outputs", {{{"path", target.string()}, {"sha256", sha256_hex(bytes)}}}}};
  write_file(manifest_path_for(target), manifest.dump(2) + "\n");
  err << "wrote " << target.string() << " and " << manifest_path_for(target).string() << "\n";
  return result.code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moments of the local purity of bipartite quantum states", "purity"};
  app.set_version_flag("--version", PURITY_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<ConfigFile>());
  app.set_config("--config", "", "TOML or JSON file mirroring the flags");

  Parsed parsed;
  Options& o = parsed.opt;
  app.add_option("--na", o.na, "dimension of subsystem A")->capture_default_str();
  app.add_option("--nb", o.nb, "dimension of subsystem B (N_A <= N_B)")->capture_default_str();
  app.add_option("--x", o.x, "global purity: rational, decimal, 1/N (or minmix), pure")->capture_default_str();
  auto* beta = app.add_option("--beta", o.beta, "inverse temperature");
  app.add_option("--betas", o.betas, "comma-separated beta grid for sweep-beta")->capture_default_str();
  app.add_flag("--scale-beta", o.scale_beta, "multiply the beta grid by N^(3/2)");
  app.add_option("--k", o.k, "moment order")->capture_default_str();
  app.add_option("--n", o.n, "symmetric group degree for chartable")->capture_default_str();
  auto* seed = app.add_option("--seed", o.seed, "64-bit seed (generated and recorded when absent)");
  app.add_option("--samples", o.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--burn-in", o.burn_in, "Markov chain burn-in steps")->capture_default_str();
  app.add_option("--thinning", o.thinning, "chain steps per recorded sample")->capture_default_str();
  app.add_option("--shell-eps", o.shell_eps, "half-width of the purity shell")->capture_default_str();
  app.add_option("--step-scale", o.step_scale, "initial proposal step")->capture_default_str();
  app.add_option("--chains", o.chains, "independent chains")->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads for exact sums")->capture_default_str();
  app.add_option("--unitaries", o.unitaries, "Haar draws per spectrum (shell-average)")->capture_default_str();
  app.add_option("--estimator", o.estimator, "canonical, fixed-spectrum, power-sums, induced, shell-average")
      ->capture_default_str();
  app.add_option("--spectrum", o.spectrum, "comma-separated eigenvalues for fixed-spectrum");
  app.add_option("--p3", o.p3, "ensemble average <Tr L^3>_x");
  app.add_option("--p4", o.p4, "ensemble average <Tr L^4>_x");
  app.add_option("--ns", o.ns, "comma-separated balanced dimensions for scaling")->capture_default_str();
  app.add_option("--out", o.out, "output file (default: stdout, or $PURITY_OUT_DIR/<command>.<ext>)");
  app.add_option("--format", o.format, "csv or jsonl")->capture_default_str();
  app.add_option("--manifest", o.manifest, "manifest to replay");
  app.add_option("--inject-fault", o.inject_fault)->group("");

  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"exact", "closed-form moments, cumulant and high-temperature correction"},
           {"mc", "Monte Carlo estimates"},
           {"sweep-beta", "first moment against beta with the first-order prediction"},
           {"scaling", "moments over balanced N against ((1+x)/sqrt N)^k"},
           {"selftest", "exact identities and a Monte Carlo smoke suite"},
           {"chartable", "character table of S_n as JSON"},
           {"poly", "moment polynomial in power sums as JSON"},
           {"replay", "re-run a manifest and compare output checksums"}}) {
    app.add_subcommand(name, help)->callback([&parsed, name = name] { parsed.command = name; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidation;
  }

  o.has_beta = beta->count() > 0;
  parsed.seed_given = seed->count() > 0;
  if (!parsed.seed_given) o.seed = fresh_seed();

  try {
    return execute(parsed, args, out, err);
  } catch (const SamplerDiagnostic& e) {
    err << "sampler diagnostic: " << e.what() << "\n";
    return kSamplerDiagnostic;
  } catch (const DegenerateDimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kUnexpected;
  }
}

}  // namespace purity::cli
