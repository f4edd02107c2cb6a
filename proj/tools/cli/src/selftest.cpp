#include <chrono>
#include <cmath>
#include <functional>

#include "commands.hpp"
#include "purity/ensembles.hpp"
#include "purity/errors.hpp"
#include "purity/symcore.hpp"
#include "purity/twirl.hpp"

namespace purity::cli {

namespace {

/// Thrown by a check to report a named mismatch.
struct CheckFailure {
  std::string detail;
};

void expect(bool ok, const std::string& detail) {
  if (!ok) throw CheckFailure{detail};
}

/// Coefficient table used by the exact checks, with an optional injected fault.
wg::WeingartenTable table_for(int n, int n_dim, const std::string& fault) {
  auto table = wg::WeingartenTable::build(n, n_dim);
  if (fault == "s4-coefficient" && n == 4) table.coeffs[sym::Partition({4})] += Rational(1, 1000);
  return table;
}

bool within(double value, double target, double std_error, double sigmas) {
  return std::abs(value - target) <= sigmas * std_error + 1e-12;
}

}  // namespace

Result cmd_selftest(Context& ctx) {
  const Options& opt = ctx.opt;
  if (!opt.inject_fault.empty() && opt.inject_fault != "s4-coefficient") {
    throw ValidationError("unknown fault '" + opt.inject_fault + "'");
  }
  Table t("selftest", {"check", "status", "seconds", "detail"});
  t.meta("command", ctx.command);
  t.meta("seed", std::to_string(opt.seed));
  bool all_ok = true;

  auto run = [&](const std::string& name, const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string status = "PASS";
    std::string detail;
    try {
      detail = body();
    } catch (const CheckFailure& f) {
      status = "FAIL";
      detail = f.detail;
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = std::string("error: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_ok = all_ok && status == "PASS";
    ctx.err << status << " " << name << (detail.empty() ? "" : ": " + detail) << "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", seconds);
    t.row({name, status, std::string(buf), detail});
  };

  run("S2 coefficients", [&] {
    for (int n_dim = 2; n_dim <= 12; ++n_dim) {
      const auto table = table_for(2, n_dim, opt.inject_fault);
      for (const auto& [cls, value] : table.coeffs) {
        expect(value == wg::closed_form_coefficient(cls, n_dim),
               "S2 coefficient mismatch (class " + cls.to_string() + ", N=" + std::to_string(n_dim) + ")");
      }
    }
    return std::string();
  });

  run("S4 coefficients", [&] {
    for (int n_dim = 4; n_dim <= 12; ++n_dim) {
      const auto table = table_for(4, n_dim, opt.inject_fault);
      for (const auto& [cls, value] : table.coeffs) {
        expect(value == wg::closed_form_coefficient(cls, n_dim),
               "S4 coefficient mismatch (class " + cls.to_string() + ", N=" + std::to_string(n_dim) + ")");
      }
    }
    return std::string();
  });

  run("first moment polynomial", [&] {
    for (int a = 2; a <= 6; ++a) {
      for (int b = a; b <= 6; ++b) {
        const BipartitionDims dims(a, b);
        const auto table = table_for(2, dims.n(), opt.inject_fault);
        wg::MomentOptions mo;
        mo.table = &table;
        const auto poly = wg::moment_polynomial(1, dims, mo);
        const Rational n2m1 = Rational(dims.n()) * dims.n() - 1;
        wg::PowerSumPolynomial expected(dims);
        expected.add({}, Rational(a) * (b * b - 1) / n2m1);
        expected.add({2}, Rational(b) * (a * a - 1) / n2m1);
        expect(poly == expected, "M1 polynomial mismatch at (" + std::to_string(a) + "," + std::to_string(b) + ")");
        expect(poly.evaluate_pure() == Rational(a + b, a * b + 1), "pure-state M1 mismatch");
      }
    }
    return std::string();
  });

  run("second moment polynomial", [&] {
    for (int a = 2; a <= 6; ++a) {
      for (int b = a; b <= 6; ++b) {
        const BipartitionDims dims(a, b);
        const auto table = table_for(4, dims.n(), opt.inject_fault);
        wg::MomentOptions mo;
        mo.table = &table;
        mo.threads = opt.threads;
        const auto diff = wg::moment_polynomial(2, dims, mo) - wg::closed_m2_polynomial(dims);
        expect(diff.is_zero(), "M2 polynomial mismatch at (" + std::to_string(a) + "," + std::to_string(b) + ")");
      }
    }
    return std::string();
  });

  run("maximally mixed moments", [&] {
    for (const auto& [a, b] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}}) {
      const BipartitionDims dims(a, b);
      for (int k = 1; k <= 2; ++k) {
        const auto table = table_for(2 * k, dims.n(), opt.inject_fault);
        wg::MomentOptions mo;
        mo.table = &table;
        const Rational value = wg::moment_polynomial(k, dims, mo).evaluate_maximally_mixed();
        expect(value == 1 / rpow(Rational(a), static_cast<unsigned>(k)),
               "M" + std::to_string(k) + " at I/N is " + to_string(value));
      }
    }
    return std::string();
  });

  run("twirl vs closed form", [&] {
    int points = 0;
    for (int a = 1; a <= 5; ++a) {
      for (int b = a; b <= 5; ++b) {
        const BipartitionDims dims(a, b);
        for (int i = 0; i <= 6; ++i) {
          const Rational lo(1, dims.n());
          const Rational p2 = lo + (1 - lo) * Rational(i, 6);
          expect(twirl::m1_mixed_via_twirl(dims, p2) == wg::closed_m1(dims, p2), "twirl M1 mismatch");
          ++points;
        }
        expect(twirl::m1_pure_via_twirl(dims) == wg::closed_m1(dims, 1), "pure twirl M1 mismatch");
      }
    }
    return std::to_string(points) + " points";
  });

  run("cumulant identities", [&] {
    for (const auto& [a, b] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 4}}) {
      const BipartitionDims dims(a, b);
      const Rational n = dims.n();
      const Rational m1 = wg::closed_m1(dims, 1);
      expect(wg::cumulant2(dims, Rational(1), Rational(1), Rational(1)) ==
                 wg::closed_m2_spectrum(dims, 1, 1, 1) - m1 * m1,
             "K2 at x=1 differs from M2 - M1^2");
      expect(wg::cumulant2(dims, 1 / n, 1 / (n * n), 1 / (n * n * n)) == 0, "K2 at x=1/N is not zero");
    }
    return std::string();
  });

  run("mc fixed spectrum", [&] {
    const BipartitionDims dims(2, 2);
    const ens::Spectrum spectrum({0.4, 0.3, 0.2, 0.1});
    ens::McConfig mc;
    mc.n_samples = 20000;
    ens::RandomStream stream(opt.seed, 0);
    const auto e = ens::mc_moment_fixed_spectrum(spectrum, dims, 1, mc, stream);
    expect(within(e.mean, 0.52, e.std_error, 4.0),
           "mean " + fmt_mc(e.mean, e.std_error) + " +/- " + fmt_error(e.std_error) + " vs 0.52");
    return "mean " + fmt_mc(e.mean, e.std_error) + " +/- " + fmt_error(e.std_error);
  });

  run("mc maximally mixed", [&] {
    for (const double beta : {-5.0, 0.0, 5.0}) {
      ens::EnsembleConfig cfg;
      cfg.dims = BipartitionDims(2, 3);
      cfg.x = 1.0 / 6.0;
      cfg.beta = beta;
      cfg.seed = opt.seed;
      cfg.mc.burn_in = 10;
      cfg.mc.n_samples = 200;
      const auto e = ens::mc_moment_canonical(cfg, 1);
      expect(e.mean == 0.5 && e.std_error == 0.0, "pi_A = " + fmt_exact(e.mean) + " at beta " + fmt_exact(beta));
    }
    return std::string();
  });

  run("mc pure canonical", [&] {
    ens::EnsembleConfig cfg;
    cfg.dims = BipartitionDims(2, 2);
    cfg.x = 1.0;
    cfg.seed = opt.seed;
    cfg.mc.burn_in = 200;
    cfg.mc.n_samples = 20000;
    const auto e = ens::mc_moment_canonical(cfg, 1);
    expect(within(e.mean, 0.8, e.std_error, 4.0),
           "mean " + fmt_mc(e.mean, e.std_error) + " +/- " + fmt_error(e.std_error) + " vs 0.8");
    return "mean " + fmt_mc(e.mean, e.std_error) + " +/- " + fmt_error(e.std_error);
  });

  return {std::move(t), std::nullopt, all_ok ? 0 : 4};
}

}  // namespace purity::cli
