#include "sherk/scenario.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "sherk/error.hpp"
#include "sherk/io.hpp"
#include "sherk/random.hpp"
#include "sherk/version.hpp"

namespace sherk {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::Convergence: return "convergence";
    case ScenarioId::EnergyStability: return "energy_stability";
    case ScenarioId::Polycrystal: return "polycrystal";
    case ScenarioId::Custom: return "custom";
  }
  return "?";
}

std::string_view to_string(Preset p) { return p == Preset::Desk ? "desk" : "paper"; }

ScenarioId parse_scenario(std::string_view name) {
  for (auto id : {ScenarioId::Convergence, ScenarioId::EnergyStability, ScenarioId::Polycrystal,
                  ScenarioId::Custom}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

Preset parse_preset(std::string_view name) {
  if (name == "desk") return Preset::Desk;
  if (name == "paper") return Preset::Paper;
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected desk or paper)");
}

ScenarioConfig preset_config(ScenarioId id, Preset preset) {
  ScenarioConfig c;
  c.scenario = id;
  c.preset = preset;
  c.epsilon = 0.25;
  c.kappa = 2.0;
  c.scheme = Scheme::ERK22;
  const bool full = preset == Preset::Paper;
  switch (id) {
    case ScenarioId::Convergence:
      c.length = 32.0;
      c.n = full ? 256 : 64;
      c.tau = 0.03125;
      c.final_time = 5.0;
      break;
    case ScenarioId::EnergyStability:
      c.length = 100.0;
      c.n = full ? 256 : 128;
      c.tau = 0.1;
      c.final_time = full ? 100.0 : 20.0;
      c.snapshot_every = full ? 100 : 50;
      break;
    case ScenarioId::Polycrystal:
      c.length = 500.0;
      c.n = full ? 512 : 256;
      c.tau = 0.5;
      c.final_time = full ? 160.0 : 40.0;
      c.snapshot_every = 16;  // every 8 time units
      c.trace_every = 2;
      break;
    case ScenarioId::Custom:
      c.length = 32.0;
      c.n = full ? 128 : 64;
      c.tau = 0.1;
      c.final_time = 10.0;
      break;
  }
  c.output_dir = "out/" + std::string(to_string(id));
  return c;
}

double ScenarioConfig::resolved_kappa() const {
  return kappa ? *kappa : kappa_rule(beta, epsilon);
}

SchemeConfig ScenarioConfig::scheme_config() const {
  SchemeConfig s;
  s.scheme = scheme;
  s.kappa = resolved_kappa();
  s.epsilon = epsilon;
  s.tau = tau;
  s.c1 = c1;
  s.imex_gamma = imex_gamma;
  return s;
}

void ScenarioConfig::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("L must be positive");
  if (n < 4) throw ConfigError("N must be at least 4");
  if (!(final_time >= 0.0) || !std::isfinite(final_time)) throw ConfigError("T must be >= 0");
  if (trace_every < 1) throw ConfigError("trace_every must be >= 1");
  if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
  if (!kappa && !(beta >= 0.0)) throw ConfigError("beta must be >= 0 for kappa = auto");
  try {
    scheme_config().validate();
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(e.what());
  }
  if (output_dir.empty()) throw ConfigError("output directory must not be empty");
}

namespace {

json config_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = std::string(to_string(c.scenario));
  j["preset"] = std::string(to_string(c.preset));
  j["L"] = c.length;
  j["N"] = c.n;
  j["epsilon"] = c.epsilon;
  if (c.kappa) {
    j["kappa"] = *c.kappa;
  } else {
    j["kappa"] = "auto";
  }
  j["beta"] = c.beta;
  j["scheme"] = std::string(to_string(c.scheme));
  j["c1"] = c.c1;
  j["imex_gamma"] = c.imex_gamma;
  j["tau"] = c.tau;
  j["T"] = c.final_time;
  j["snapshot_every"] = c.snapshot_every;
  j["trace_every"] = c.trace_every;
  j["seed"] = c.seed;
  j["out"] = c.output_dir;
  j["initial_file"] = c.initial_file;
  j["custom_mean"] = c.custom_mean;
  j["custom_amplitude"] = c.custom_amplitude;
  return j;
}

}  // namespace

std::string ScenarioConfig::to_json() const { return config_json(*this).dump(2); }

ScenarioConfig ScenarioConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    const ScenarioId id = parse_scenario(j.value("scenario", std::string("energy_stability")));
    const Preset preset = parse_preset(j.value("preset", std::string("desk")));
    ScenarioConfig c = preset_config(id, preset);
    for (const auto& [key, v] : j.items()) {
      if (key == "scenario" || key == "preset") continue;
      if (key == "L") c.length = v.get<double>();
      else if (key == "N") c.n = v.get<int>();
      else if (key == "epsilon") c.epsilon = v.get<double>();
      else if (key == "kappa") {
        if (v.is_string()) {
          if (v.get<std::string>() != "auto") throw ConfigError("kappa must be a number or \"auto\"");
          c.kappa.reset();
        } else {
          c.kappa = v.get<double>();
        }
      } else if (key == "beta") c.beta = v.get<double>();
      else if (key == "scheme") c.scheme = parse_scheme(v.get<std::string>());
      else if (key == "c1") c.c1 = v.get<double>();
      else if (key == "imex_gamma") c.imex_gamma = v.get<double>();
      else if (key == "tau") c.tau = v.get<double>();
      else if (key == "T") c.final_time = v.get<double>();
      else if (key == "snapshot_every") c.snapshot_every = v.get<std::int64_t>();
      else if (key == "trace_every") c.trace_every = v.get<std::int64_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "out") c.output_dir = v.get<std::string>();
      else if (key == "initial_file") c.initial_file = v.get<std::string>();
      else if (key == "custom_mean") c.custom_mean = v.get<double>();
      else if (key == "custom_amplitude") c.custom_amplitude = v.get<double>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kInitialStream = 0x5EED0F1E1DULL;

RealField perturbed_constant(const Grid& grid, std::uint64_t seed, double mean, double amplitude) {
  const CounterRng rng(seed, kInitialStream);
  RealField u = RealField::constant(grid, mean);
  auto v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += amplitude * rng.symmetric(i);
  return u;
}

}  // namespace

RealField initial_data(ScenarioId id, const Grid& grid, std::uint64_t seed) {
  using std::numbers::pi;
  switch (id) {
    case ScenarioId::Convergence:
      return RealField::sample(grid, [](double x, double y) {
        return 0.01 * (std::cos(pi * x) + std::cos(pi * y) + std::cos(0.25 * pi * x) +
                       std::cos(0.25 * pi * y));
      });
    case ScenarioId::EnergyStability:
      return RealField::sample(grid, [](double x, double y) {
        return 0.1 + 0.02 * std::cos(pi * x / 100.0) * std::sin(pi * y / 100.0) +
               0.05 * std::sin(pi * x / 20.0) * std::cos(pi * y / 20.0);
      });
    case ScenarioId::Polycrystal: {
      const CounterRng rng(seed, kInitialStream);
      RealField u = RealField::constant(grid, kPolycrystalBackground);
      const int n = grid->size();
      const double half = 0.5 * kNucleusSide;
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          const double x = grid->coordinate(p);
          const double y = grid->coordinate(q);
          for (const auto& nuc : kPolycrystalNuclei) {
            if (x >= nuc.cx - half && x < nuc.cx + half && y >= nuc.cy - half && y < nuc.cy + half) {
              u(p, q) = kPolycrystalBackground + nuc.alpha * rng.symmetric(grid->flat(p, q));
              break;
            }
          }
        }
      }
      return u;
    }
    case ScenarioId::Custom:
      return perturbed_constant(grid, seed, 0.0, 0.1);
  }
  throw ConfigError("unknown scenario");
}

RealField initial_data(const ScenarioConfig& config, const Grid& grid) {
  if (config.scenario != ScenarioId::Custom) return initial_data(config.scenario, grid, config.seed);
  if (config.initial_file.empty()) {
    return perturbed_constant(grid, config.seed, config.custom_mean, config.custom_amplitude);
  }
  Shf1Snapshot snap = read_shf1(config.initial_file);
  if (snap.u.grid().size() != grid->size() || snap.u.grid().length() != grid->length()) {
    throw ConfigError("initial file '" + config.initial_file + "' does not match the configured grid");
  }
  return RealField(grid, std::vector<double>(snap.u.values().begin(), snap.u.values().end()));
}

// ---------------------------------------------------------------------------

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << text;
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

json manifest_base(const ScenarioConfig& c, std::int64_t steps) {
  json m;
  m["format"] = "sherk-manifest-1";
  m["sherk_version"] = kVersion;
  m["fftw_version"] = std::string(fftw_version);
  m["rng"] = "SplitMix64 counter generator; rand(x,y) = draw at flat index p*N+q";
  m["snapshot_layout"] = "SHF1, flat index p*N+q with p along x, little-endian float64";
  m["config"] = config_json(c);
  m["resolved"] = {{"kappa", c.resolved_kappa()}, {"steps", steps}, {"h", c.length / c.n}};
  return m;
}

}  // namespace

RunArtifacts run_scenario(const ScenarioConfig& config) {
  config.validate();
  const fs::path out = config.output_dir;
  ensure_dir(out);
  ensure_dir(out / "snapshots");

  const Grid grid = make_grid(config.length, config.n);
  const RealField u0 = initial_data(config, grid);
  const SchemeConfig scheme = config.scheme_config();
  const std::int64_t steps = step_count(config.final_time, config.tau);

  RunArtifacts art;
  art.trace_csv = out / "trace.csv";
  art.manifest = out / "manifest.json";
  art.steps = steps;

  json manifest = manifest_base(config, steps);
  manifest["status"] = "running";
  write_text(art.manifest, manifest.dump(2) + "\n");

  std::ofstream trace_os(art.trace_csv, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!trace_os) throw IoError("cannot open '" + art.trace_csv.string() + "' for writing");
  trace_os << "step,t,E,Ec,Ee,l2,linf\n";

  RunOptions opts;
  opts.final_time = config.final_time;
  opts.trace_every = config.trace_every;
  opts.snapshot_every = config.snapshot_every > 0 ? config.snapshot_every : std::max<std::int64_t>(steps, 1);
  opts.on_sample = [&](const EnergySample& s) {
    EnergyTrace one;
    one.append(s);
    std::ostringstream row;
    write_trace_csv(row, one);
    const std::string text = row.str();
    trace_os << text.substr(text.find('\n') + 1);
    if (!trace_os) throw IoError("write to '" + art.trace_csv.string() + "' failed");
  };
  opts.on_snapshot = [&](const Snapshot& snap) {
    char name[48];
    std::snprintf(name, sizeof name, "u_%08lld.shf1", static_cast<long long>(snap.step));
    const fs::path p = out / "snapshots" / name;
    write_shf1(p, snap.u, snap.t);
    art.snapshots.push_back(p);
  };

  auto snapshot_names = [&]() {
    json names = json::array();
    for (const auto& p : art.snapshots) names.push_back("snapshots/" + p.filename().string());
    return names;
  };

  try {
    RunResult result = run(u0, scheme, opts);
    art.trace = std::move(result.trace);
  } catch (const BlowUpError& e) {
    trace_os.flush();
    manifest["status"] = "blow-up";
    manifest["blow_up_step"] = e.step();
    manifest["outputs"] = {{"trace", "trace.csv"}, {"snapshots", snapshot_names()}};
    write_text(art.manifest, manifest.dump(2) + "\n");
    throw;
  }
  trace_os.flush();
  if (!trace_os) throw IoError("write to '" + art.trace_csv.string() + "' failed");

  manifest["status"] = "complete";
  manifest["stage_linf_max"] = art.trace.stage_linf_max();
  manifest["outputs"] = {{"trace", "trace.csv"}, {"snapshots", snapshot_names()}};
  write_text(art.manifest, manifest.dump(2) + "\n");
  return art;
}

// ---------------------------------------------------------------------------

bool VerifyResult::passed() const {
  for (const auto& r : reports) {
    if (!r.passed()) return false;
  }
  return true;
}

VerifyResult run_verify(const VerifyOptions& options) {
  options.sweep.validate();
  VerifyResult result;
  result.reports.push_back(check_g_half_contraction(options.sweep));
  result.reports.push_back(check_g_star_lower_bound(options.sweep));
  result.reports.push_back(check_semigroup_inequalities(options.sweep));
  result.reports.push_back(check_lipschitz(options.sweep, options.lipschitz_beta,
                                           options.lipschitz_epsilon, options.lipschitz_pairs));
  result.reports.push_back(check_lambda_bound(options.sweep));
  result.reports.push_back(check_h_functions(options.sweep, options.h_points));
  result.sobolev = estimate_sobolev_constant(options.sweep);

  const fs::path out = options.output_dir;
  ensure_dir(out);
  write_check_csv(out / "verify_report.csv", result.reports);
  std::ostringstream s;
  for (const auto& r : result.reports) s << r.summary() << '\n';
  s << "sobolev constant estimate: " << result.sobolev.c_hat << " (per N:";
  for (const auto& [n, v] : result.sobolev.per_size) s << ' ' << n << '=' << v;
  s << ")\n";
  s << (result.passed() ? "PASS" : "FAIL") << '\n';
  write_text(out / "verify_summary.txt", s.str());
  return result;
}

std::vector<OrderReport> run_converge(const ConvergeOptions& options) {
  const ScenarioConfig& sc = options.scenario;
  sc.validate();
  std::vector<double> taus = options.taus;
  if (taus.empty()) {
    for (int k = 2; k <= 7; ++k) taus.push_back(std::ldexp(1.0, -k));
  }
  const double ref_tau = options.reference_tau > 0.0 ? options.reference_tau : std::ldexp(1.0, -10);
  if (options.schemes.empty()) throw ConfigError("no schemes selected");

  const Grid grid = make_grid(sc.length, sc.n);
  OrderStudy study{initial_data(sc, grid), sc.scheme_config(), sc.final_time, taus, ref_tau,
                   Scheme::ERK22};
  try {
    study.validate();
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(e.what());
  }
  const ReferenceSolution ref = compute_reference(study);
  std::vector<OrderReport> reports;
  for (Scheme s : options.schemes) reports.push_back(measure_order(s, study, ref));

  const fs::path out = sc.output_dir;
  ensure_dir(out);
  write_order_csv(out / "convergence.csv", reports);
  std::ostringstream txt;
  txt << "reference: erk22 tau=" << ref_tau << " estimated error " << ref.error_estimate << '\n';
  for (const auto& r : reports) txt << to_string(r.scheme) << " slope " << r.slope << '\n';
  write_text(out / "convergence_summary.txt", txt.str());
  return reports;
}

}  // namespace sherk
