// Command-line front end: run, converge, verify.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration
// error, 3 numerical blow-up, 4 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sherk/error.hpp"
#include "sherk/io.hpp"
#include "sherk/scenario.hpp"

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kBlowUp = 3, kIo = 4 };

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw sherk::IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Options shared by run and converge; unset ones keep the config/preset value.
struct ScenarioFlags {
  std::string config;
  std::string scenario;
  std::string preset;
  std::string scheme;
  std::string kappa;
  std::optional<double> length, epsilon, beta, tau, final_time, c1, imex_gamma;
  std::optional<int> n;
  std::optional<std::int64_t> snapshot_every, trace_every;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string initial_file;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "JSON configuration file");
    app->add_option("--scenario", scenario, "convergence|energy_stability|polycrystal|custom");
    app->add_option("--preset", preset, "desk|paper");
    app->add_option("--scheme", scheme, "erk22|erk_general|etd1|etdrk2|imex1|imexrk22");
    app->add_option("--kappa", kappa, "stabilization constant or 'auto'");
    app->add_option("--L", length, "domain side length");
    app->add_option("--N", n, "grid points per direction");
    app->add_option("--epsilon", epsilon, "undercooling parameter");
    app->add_option("--beta", beta, "l-inf bound used by kappa=auto");
    app->add_option("--tau", tau, "time step");
    app->add_option("--T", final_time, "final time");
    app->add_option("--c1", c1, "first stage node of erk_general");
    app->add_option("--imex-gamma", imex_gamma, "diagonal coefficient of imexrk22");
    app->add_option("--snapshot-every", snapshot_every, "snapshot cadence in steps (0: first and last)");
    app->add_option("--trace-every", trace_every, "energy sample cadence in steps");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--out", out, "output directory");
    app->add_option("--initial-file", initial_file, "SHF1 initial condition (custom scenario)");
  }

  sherk::ScenarioConfig resolve(sherk::ScenarioId fallback) const {
    sherk::ScenarioConfig c;
    if (!config.empty()) {
      c = sherk::ScenarioConfig::from_json(read_file(config));
      if (!scenario.empty() || !preset.empty()) {
        throw sherk::ConfigError("--scenario/--preset cannot be combined with --config");
      }
    } else {
      const auto id = scenario.empty() ? fallback : sherk::parse_scenario(scenario);
      const auto p = preset.empty() ? sherk::Preset::Desk : sherk::parse_preset(preset);
      c = sherk::preset_config(id, p);
    }
    if (!scheme.empty()) c.scheme = sherk::parse_scheme(scheme);
    if (!kappa.empty()) {
      if (kappa == "auto") {
        c.kappa.reset();
      } else {
        try {
          c.kappa = std::stod(kappa);
        } catch (const std::exception&) {
          throw sherk::ConfigError("--kappa must be a number or 'auto'");
        }
      }
    }
    if (length) c.length = *length;
    if (n) c.n = *n;
    if (epsilon) c.epsilon = *epsilon;
    if (beta) c.beta = *beta;
    if (tau) c.tau = *tau;
    if (final_time) c.final_time = *final_time;
    if (c1) c.c1 = *c1;
    if (imex_gamma) c.imex_gamma = *imex_gamma;
    if (snapshot_every) c.snapshot_every = *snapshot_every;
    if (trace_every) c.trace_every = *trace_every;
    if (seed) c.seed = *seed;
    if (!out.empty()) c.output_dir = out;
    if (!initial_file.empty()) c.initial_file = initial_file;
    c.validate();
    return c;
  }
};

template <class T>
void require_nonempty(const std::vector<T>& v, const char* name) {
  if (v.empty()) throw sherk::ConfigError(std::string(name) + " must not be empty");
}

int do_run(const ScenarioFlags& flags) {
  const auto cfg = flags.resolve(sherk::ScenarioId::EnergyStability);
  const auto art = sherk::run_scenario(cfg);
  const auto& s = art.trace.samples();
  std::printf("%s: %lld steps, E %.10g -> %.10g, max|u| over stages %.6g\n",
              std::string(sherk::to_string(cfg.scenario)).c_str(), static_cast<long long>(art.steps),
              s.front().energy, s.back().energy, art.trace.stage_linf_max());
  const auto mono = sherk::check_monotone(art.trace, 1e-10);
  if (!mono.dissipative()) {
    std::printf("warning: energy increased at %zu samples\n", mono.violations.size());
  }
  std::printf("wrote %s\n", cfg.output_dir.c_str());
  return kOk;
}

int do_converge(const ScenarioFlags& flags, const std::vector<double>& taus, double ref_tau,
                const std::vector<std::string>& schemes, bool taus_given, bool schemes_given) {
  sherk::ConvergeOptions opt;
  opt.scenario = flags.resolve(sherk::ScenarioId::Convergence);
  if (taus_given) {
    require_nonempty(taus, "--taus");
    opt.taus = taus;
  }
  opt.reference_tau = ref_tau;
  if (schemes_given) {
    require_nonempty(schemes, "--schemes");
    opt.schemes.clear();
    for (const auto& s : schemes) opt.schemes.push_back(sherk::parse_scheme(s));
  }
  const auto reports = sherk::run_converge(opt);
  bool ok = true;
  for (const auto& r : reports) {
    const int p = sherk::scheme_order(r.scheme);
    const bool in_band = r.slope >= p - 0.2 && r.slope <= p + 0.2;
    ok = ok && in_band;
    std::printf("%-9s slope %.4f (nominal %d) %s\n", std::string(sherk::to_string(r.scheme)).c_str(),
                r.slope, p, in_band ? "ok" : "OUT OF BAND");
  }
  return ok ? kOk : kFailed;
}

int do_verify(sherk::VerifyOptions opt, bool sizes_given, bool kappas_given, bool taus_given) {
  if (sizes_given) require_nonempty(opt.sweep.grid_sizes, "--sizes");
  if (kappas_given) require_nonempty(opt.sweep.kappas, "--kappas");
  if (taus_given) require_nonempty(opt.sweep.taus, "--taus");
  try {
    opt.sweep.validate();
  } catch (const sherk::InvalidArgumentError& e) {
    throw sherk::ConfigError(e.what());
  }
  for (double k : opt.sweep.kappas) {
    if (k < 1.0) throw sherk::ConfigError("verify requires every kappa >= 1");
  }
  const auto result = sherk::run_verify(opt);
  for (const auto& r : result.reports) std::printf("%s\n", r.summary().c_str());
  std::printf("sobolev constant estimate %.6g\n", result.sobolev.c_hat);
  std::printf("%s\n", result.passed() ? "PASS" : "FAIL");
  return result.passed() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized exponential Runge-Kutta solver for the Swift-Hohenberg equation"};
  app.require_subcommand(1);

  ScenarioFlags run_flags;
  auto* run = app.add_subcommand("run", "run a scenario and write trace, snapshots, manifest");
  run_flags.add_to(run);

  ScenarioFlags conv_flags;
  std::vector<double> conv_taus;
  double conv_ref = 0.0;
  std::vector<std::string> conv_schemes;
  auto* conv = app.add_subcommand("converge", "time-step sweep and order fit");
  conv_flags.add_to(conv);
  auto* conv_taus_opt = conv->add_option("--taus", conv_taus, "time steps (halving sequence)");
  conv->add_option("--reference-tau", conv_ref, "reference time step");
  auto* conv_schemes_opt = conv->add_option("--schemes", conv_schemes, "schemes to compare");

  sherk::VerifyOptions vopt;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "operator inequality suite");
  auto* sizes_opt = verify->add_option("--sizes", vopt.sweep.grid_sizes, "grid sizes");
  auto* kappas_opt = verify->add_option("--kappas", vopt.sweep.kappas, "stabilization constants");
  auto* vtaus_opt = verify->add_option("--taus", vopt.sweep.taus, "time steps");
  verify->add_option("--fields", vopt.sweep.fields_per_cell, "random fields per sweep cell");
  verify->add_option("--seed", vopt.sweep.seed, "random seed");
  verify->add_option("--pairs", vopt.lipschitz_pairs, "field pairs for the Lipschitz check");
  verify->add_option("--out", verify_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return do_run(run_flags);
    if (*conv) {
      return do_converge(conv_flags, conv_taus, conv_ref, conv_schemes, conv_taus_opt->count() > 0,
                         conv_schemes_opt->count() > 0);
    }
    if (!verify_out.empty()) vopt.output_dir = verify_out;
    return do_verify(vopt, sizes_opt->count() > 0, kappas_opt->count() > 0, vtaus_opt->count() > 0);
  } catch (const sherk::BlowUpError& e) {
    std::fprintf(stderr, "blow-up: %s\n", e.what());
    return kBlowUp;
  } catch (const sherk::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const sherk::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kUsage;
  } catch (const sherk::InvalidArgumentError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kUsage;
  } catch (const sherk::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
}
