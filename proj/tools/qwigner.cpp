// Copyright 2026 The qwigner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qwigner: command-line front end. Every run writes its outputs plus one
// manifest.json into the output directory.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qwigner/campaign.hpp"
#include "qwigner/errors.hpp"
#include "qwigner/estimation.hpp"
#include "qwigner/io.hpp"
#include "qwigner/selftest.hpp"
#include "qwigner/wigner.hpp"

namespace fs = std::filesystem;
using namespace qwigner;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSelftest = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  std::string out_dir;
  std::string format = "csv";
  bool gnuplot = false;
};

std::size_t thread_count(const Globals& g) {
  if (g.threads > 0) return g.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Collects the files of one run and writes the manifest last.
class RunOutputs {
 public:
  RunOutputs(fs::path dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
    files_.push_back({{"name", name}, {"bytes", content.size()}, {"fnv1a", fnv1a_hex(content)}});
  }

  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void finish(const std::string& config_hash, std::uint64_t seed, double seconds, const json& extra = json::object()) {
    json m{{"tool", "qwigner"},
           {"version", kVersion},
           {"command", command_},
           {"config_hash", config_hash},
           {"seed", seed},
           {"wall_clock_s", seconds},
           {"started_utc", started_utc_},
           {"files", files_}};
    for (const auto& [k, v] : extra.items()) m[k] = v;
    const fs::path path = dir_ / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << m.dump(2) << "\n";
    if (!out) throw IoError("failed writing '" + path.string() + "'");
  }

  const fs::path& dir() const { return dir_; }

 private:
  static std::string now_utc() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
  }

  fs::path dir_;
  std::string command_;
  std::string started_utc_ = now_utc();
  json files_ = json::array();
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

fs::path output_dir(const Globals& g, const std::optional<std::string>& from_config = std::nullopt) {
  if (!g.out_dir.empty()) return g.out_dir;
  if (from_config) return *from_config;
  return "qwigner-out";
}

// "theta=pi/2,phi=0,r=1"; missing keys keep the defaults.
BlochStated parse_state_spec(const std::string& spec) {
  BlochStated s{std::numbers::pi / 2, 0.0, 1.0};
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("--state: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const double v = parse_angle(item.substr(eq + 1));
    if (key == "theta")
      s.theta = v;
    else if (key == "phi")
      s.phi = v;
    else if (key == "r")
      s.r = v;
    else
      throw DomainError("--state: unknown key '" + key + "' (use theta, phi, r)");
  }
  s.validate();
  return s;
}

// "xi=0:2pi"
std::pair<std::string, Spand> parse_span_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  const auto colon = spec.find(':', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || colon == std::string::npos)
    throw DomainError("--span: expected axis=lo:hi, got '" + spec + "'");
  const std::string axis = spec.substr(0, eq);
  if (axis != "xi" && axis != "chi") throw DomainError("--span: axis must be xi or chi");
  Spand s{parse_angle(spec.substr(eq + 1, colon - eq - 1)), parse_angle(spec.substr(colon + 1))};
  s.validate(axis.c_str());
  return {axis, s};
}


// grid ----------------------------------------------------------------------

struct GridArgs {
  std::string state = "theta=pi/2,phi=0,r=1";
  std::string state_file;
  std::size_t resolution = 201;
  std::vector<std::string> spans;
};

int cmd_grid(const Globals& g, const GridArgs& a) {
  Stopwatch clock;
  const DensityMatrixd rho =
      a.state_file.empty() ? density_from_bloch(parse_state_spec(a.state)) : state_from_json(read_json_file(a.state_file));
  Spand xi{0.0, std::numbers::pi};
  Spand chi{0.0, 2 * std::numbers::pi};
  for (const auto& s : a.spans) {
    const auto [axis, span] = parse_span_spec(s);
    (axis == "xi" ? xi : chi) = span;
  }
  const auto grid = wigner_grid(rho, a.resolution, a.resolution, xi, chi);

  Eigen::Index i = 0, j = 0;
  const double w_min = grid.values.minCoeff(&i, &j);
  const auto bloch = bloch_from_density(rho);
  json summary{{"state", {{"matrix", to_json(rho)}, {"bloch", to_json(bloch)}}},
               {"resolution", a.resolution},
               {"xi_span", {xi.lo, xi.hi}},
               {"chi_span", {chi.lo, chi.hi}},
               {"grid_min", w_min},
               {"grid_argmin", {{"xi", grid.xi_axis[i]}, {"chi", grid.chi_axis[j]}}},
               {"grid_max", grid.values.maxCoeff()},
               {"w_min_analytic", wigner_min_analytic(bloch.r)}};
  try {
    summary["integral"] = integrate_wigner(grid);
  } catch (const DomainError&) {
    summary["integral"] = nullptr;  // only defined on the canonical domain
  }

  RunOutputs out(output_dir(g), "grid");
  if (g.format == "json") {
    out.write_json("grid.json", grid_to_json(grid, summary));
  } else {
    std::ostringstream os;
    write_grid_csv(os, grid);
    out.write("grid.csv", os.str());
  }
  out.write_json("summary.json", summary);
  if (g.gnuplot && g.format == "csv") {
    out.write("grid.gp",
              "set datafile separator ','\n"
              "set xlabel 'xi'\nset ylabel 'chi'\nset cblabel 'W'\n"
              "set view map\n"
              "plot 'grid.csv' every ::1 using 1:2:3 with image notitle\n");
  }
  out.finish(fnv1a_hex(summary.dump()), g.seed.value_or(0), clock.seconds());
  std::cout << fmt::format("grid {}x{}: min {:.6f} at (xi={:.4f}, chi={:.4f}) -> {}\n", a.resolution, a.resolution,
                           w_min, grid.xi_axis[i], grid.chi_axis[j], out.dir().string());
  return kExitOk;
}

// wmin ----------------------------------------------------------------------

struct WminArgs {
  double r_min = 0.0;
  double r_max = 1.0;
  std::size_t steps = 101;
};

int cmd_wmin(const Globals& g, const WminArgs& a) {
  Stopwatch clock;
  if (!(a.r_min >= 0.0 && a.r_min < a.r_max && a.r_max <= 1.0))
    throw DomainError("wmin: need 0 <= r-min < r-max <= 1");
  if (a.steps < 2) throw DomainError("wmin: --steps must be at least 2");
  const auto r = linspace(Spand{a.r_min, a.r_max}, a.steps);
  std::vector<double> w(a.steps);
  for (std::size_t k = 0; k < a.steps; ++k) w[k] = wigner_min_analytic(r[static_cast<Eigen::Index>(k)]);

  json summary{{"r_min", a.r_min}, {"r_max", a.r_max}, {"steps", a.steps}, {"r_threshold_exact", 1.0 / std::sqrt(3.0)}};
  summary["zero_crossing"] = nullptr;
  for (std::size_t k = 0; k + 1 < a.steps; ++k) {
    if ((w[k] > 0) != (w[k + 1] > 0) || w[k] == 0.0) {
      const double r0 = r[static_cast<Eigen::Index>(k)], r1 = r[static_cast<Eigen::Index>(k + 1)];
      summary["zero_crossing"] = w[k] == 0.0 ? r0 : r0 + (r1 - r0) * w[k] / (w[k] - w[k + 1]);
      summary["bracket"] = {r0, r1};
      break;
    }
  }

  RunOutputs out(output_dir(g), "wmin");
  if (g.format == "json") {
    json rows = json::array();
    for (std::size_t k = 0; k < a.steps; ++k) rows.push_back({{"r", r[static_cast<Eigen::Index>(k)]}, {"w_min", w[k]}});
    out.write_json("wmin.json", json{{"rows", rows}});
  } else {
    std::ostringstream os;
    os << "r,purity,w_min\n";
    for (std::size_t k = 0; k < a.steps; ++k) {
      const double rk = r[static_cast<Eigen::Index>(k)];
      os << format_number(rk) << ',' << format_number((1 + rk * rk) / 2) << ',' << format_number(w[k]) << '\n';
    }
    out.write("wmin.csv", os.str());
    if (g.gnuplot)
      out.write("wmin.gp",
                "set datafile separator ','\nset xlabel 'r'\nset ylabel 'W_min'\n"
                "plot 'wmin.csv' every ::1 using 1:3 with lines notitle, 0 notitle dt 2\n");
  }
  out.write_json("summary.json", summary);
  out.finish(fnv1a_hex(summary.dump()), g.seed.value_or(0), clock.seconds());
  std::cout << "wmin: zero crossing " << summary["zero_crossing"].dump() << " -> " << out.dir().string() << "\n";
  return kExitOk;
}

// simulate / ramsey ----------------------------------------------------------

ExperimentConfig load_with_overrides(const std::string& path, const Globals& g) {
  ExperimentConfig cfg = load_experiment(path);
  if (g.seed) {
    cfg.seed = *g.seed;
    if (cfg.campaign) cfg.campaign->seed = *g.seed;
    if (cfg.ramsey) cfg.ramsey->seed = *g.seed;
  }
  return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(cfg.raw.dump()); }

void emit_ramsey(RunOutputs& out, const Globals& g, const RamseyConfig& rc) {
  const auto result = run_ramsey(rc, thread_count(g));
  if (g.format == "json") {
    json rows = json::array();
    for (std::size_t k = 0; k < result.points.size(); ++k) {
      const auto& p = result.points[k];
      rows.push_back({{"t_ms", p.t_ms},
                      {"n_retained", p.n_retained},
                      {"n_lost", p.n_lost},
                      {"p_hat", p.p_hat},
                      {"p_stderr", p.std_error},
                      {"p_expected", result.expectation[k]}});
    }
    out.write_json("ramsey.json", json{{"rows", rows}});
  } else {
    std::ostringstream os;
    write_ramsey_csv(os, result);
    out.write("ramsey.csv", os.str());
    if (g.gnuplot)
      out.write("ramsey.gp",
                "set datafile separator ','\nset xlabel 't (ms)'\nset ylabel 'survival'\n"
                "plot 'ramsey.csv' every ::1 using 1:4:5 with yerrorbars title 'measured', "
                "'' every ::1 using 1:6 with lines title 'expected'\n");
  }
  json fit{{"model", "A exp(-t/T) cos(Delta t + phi0) + c"}};
  if (result.fit) {
    fit["fit"] = to_json(*result.fit);
    const auto& T = result.fit->parameter("T");
    fit["T_ms"] = T.value;
    fit["T_stderr_ms"] = T.std_error;
    std::cout << fmt::format("ramsey: T = {:.2f} +/- {:.2f} ms\n", T.value, T.std_error);
  } else {
    fit["fit"] = nullptr;
    fit["error"] = result.fit_error;
    std::cerr << "warning: Ramsey fit failed: " << result.fit_error << "\n";
  }
  out.write_json("ramsey_fit.json", fit);
}

void emit_campaign(RunOutputs& out, const Globals& g, const CampaignConfig& cc) {
  const auto result = run_campaign(cc, thread_count(g));
  if (g.format == "json") {
    json rows = json::array();
    for (const auto& r : result.rows)
      rows.push_back({{"t_ms", r.t_ms},
                      {"repeat", r.repeat},
                      {"xi", r.estimate.tally.point.xi},
                      {"chi", r.estimate.tally.point.chi},
                      {"n_retained", r.estimate.tally.n_retained},
                      {"n_lost", r.estimate.tally.n_lost},
                      {"w_est", r.estimate.value},
                      {"w_stderr", r.estimate.std_error},
                      {"w_theory", r.w_theory}});
    out.write_json("campaign.json", json{{"rows", rows}});
  } else {
    std::ostringstream os;
    write_campaign_csv(os, result);
    out.write("campaign.csv", os.str());
    if (g.gnuplot)
      out.write("campaign.gp",
                "set datafile separator ','\nset xlabel 'chi'\nset ylabel 'W'\n"
                "plot 'campaign.csv' every ::1 using 4:7:8 with yerrorbars title 'estimate', "
                "'' every ::1 using 4:9 with points pt 7 ps 0.5 title 'theory'\n");
  }
  const json summary = campaign_summary_json(result);
  out.write_json("summary.json", summary);
  for (const auto& s : result.summaries)
    std::cout << fmt::format("t = {:g} ms: r = {:.4f}, W_min = {:.5f} +/- {:.5f}\n", s.t_ms,
                             s.r_tomography_mean.value_or(s.r_model), s.w_min_mean, s.w_min_error);
  if (result.wmin_fit)
    std::cout << fmt::format("W_min line crosses zero at r = {:.4f} +/- {:.4f}\n",
                             result.wmin_fit->value("crossing"), result.wmin_fit->std_error("crossing"));
}

int cmd_simulate(const Globals& g, const std::string& config_path, bool ramsey_only) {
  Stopwatch clock;
  const ExperimentConfig cfg = load_with_overrides(config_path, g);
  if (ramsey_only && !cfg.ramsey) throw ConfigError("config.ramsey: required by the ramsey command");
  if (!cfg.campaign && !cfg.ramsey) throw ConfigError("config: nothing to simulate (add 'scan' or 'ramsey')");
  RunOutputs out(output_dir(g, cfg.output_dir), ramsey_only ? "ramsey" : "simulate");
  if (cfg.campaign && !ramsey_only) emit_campaign(out, g, *cfg.campaign);
  if (cfg.ramsey) emit_ramsey(out, g, *cfg.ramsey);
  out.finish(config_hash(cfg), cfg.seed, clock.seconds(), json{{"config", fs::absolute(config_path).string()}});
  return kExitOk;
}

// tomography ------------------------------------------------------------------

int cmd_tomography(const Globals& g, const std::string& config_path) {
  Stopwatch clock;
  const ExperimentConfig cfg = load_with_overrides(config_path, g);
  if (!cfg.tomography) throw ConfigError("config.tomography: required by the tomography command");
  const TomographyPlan& plan = *cfg.tomography;
  const ContrastMode mode = cfg.campaign ? cfg.campaign->contrast_mode : ContrastMode::Off;

  std::vector<std::pair<double, TomographyResult>> rows;
  if (plan.import_path) {
    std::ifstream in(*plan.import_path);
    if (!in) throw IoError("cannot open '" + plan.import_path->string() + "'");
    for (const auto& [t, tallies] : group_pauli_tallies(read_tally_csv(in)))
      rows.emplace_back(t, tomography_linear_inversion(tallies));
  } else {
    const DensityMatrixd start = prepared_state(cfg.state, cfg.detection);
    for (std::size_t k = 0; k < plan.times_ms.size(); ++k) {
      const auto rho = dephase(start, plan.times_ms[k], cfg.channel);
      if (plan.noiseless) {
        rows.emplace_back(plan.times_ms[k], tomography_from_expectations(rho.bloch_vector()));
      } else {
        RandomStream rng = RandomStream::derive(cfg.seed, {3, k});
        const auto tallies = simulate_tomography(rho, plan.shots_per_basis, cfg.detection, rng, mode);
        rows.emplace_back(plan.times_ms[k], tomography_linear_inversion(tallies));
      }
    }
  }

  json results = json::array();
  for (const auto& [t, r] : rows) {
    json item{{"t_ms", t}};
    const json body = to_json(r);
    for (const auto& [k, v] : body.items()) item[k] = v;
    results.push_back(item);
  }
  RunOutputs out(output_dir(g, cfg.output_dir), "tomography");
  out.write_json("tomography.json", json{{"results", results}});
  if (g.format == "csv") {
    std::ostringstream os;
    os << "t_ms,rho11,rho22,re12,im12,rho11_err,rho22_err,re12_err,im12_err,purity,r\n";
    for (const auto& [t, r] : rows) {
      const auto& e = r.entry_errors;
      os << format_number(t) << ',' << format_number(r.rho(0, 0).real()) << ',' << format_number(r.rho(1, 1).real())
         << ',' << format_number(r.rho(0, 1).real()) << ',' << format_number(r.rho(0, 1).imag()) << ','
         << format_number(e.rho11) << ',' << format_number(e.rho22) << ',' << format_number(e.re12) << ','
         << format_number(e.im12) << ',' << format_number(r.purity) << ',' << format_number(r.bloch.r) << '\n';
    }
    out.write("tomography.csv", os.str());
  }
  for (const auto& [t, r] : rows)
    std::cout << fmt::format("t = {:g} ms: purity {:.3f}, r {:.3f}\n", t, r.purity, r.bloch.r);
  out.finish(config_hash(cfg), cfg.seed, clock.seconds(), json{{"config", fs::absolute(config_path).string()}});
  return kExitOk;
}

// selftest ------------------------------------------------------------------

int cmd_selftest(const Globals& g, const std::string& inject) {
  Stopwatch clock;
  SelftestOptions opts;
  if (inject == "kernel-sign") {
    opts.kernel = [](const PhasePointd& p) {
      const auto r = euler_rotation(p.xi, p.chi, 0.0);
      return ((identity2<double>() + std::sqrt(3.0) * r.conjugate(pauli_z<double>())) / 2.0).eval();
    };
  } else if (!inject.empty()) {
    throw DomainError("--inject: unknown fault '" + inject + "'");
  }
  const auto checks = run_selftest(opts);
  bool ok = true;
  json report = json::array();
  for (const auto& c : checks) {
    std::cout << fmt::format("[{}] {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    ok = ok && c.passed;
    report.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  std::cout << (ok ? "selftest passed\n" : "selftest FAILED\n");
  RunOutputs out(output_dir(g), "selftest");
  out.write_json("selftest.json", json{{"passed", ok}, {"checks", report}});
  out.finish(fnv1a_hex(inject), 0, clock.seconds());
  return ok ? kExitOk : kExitSelftest;
}

void print_error(const std::string& what) { std::cerr << "error: " << what << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qwigner: continuous Wigner functions of a qubit, simulated and reconstructed"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Root seed for all random streams (overrides the config)");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores); results do not depend on it");
  app.add_option("--out-dir", g.out_dir, "Output directory (default: config output_dir, else qwigner-out)");
  app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--gnuplot", g.gnuplot, "Also write a gnuplot script next to CSV tables");

  GridArgs grid_args;
  auto* grid = app.add_subcommand("grid", "Tabulate W(xi, chi) of a state on a regular grid");
  grid->add_option("--state", grid_args.state, "Bloch state as theta=..,phi=..,r=.. (angles accept pi literals)")
      ->capture_default_str();
  grid->add_option("--state-file", grid_args.state_file, "JSON state file ({\"bloch\":...} or {\"matrix\":...})")
      ->check(CLI::ExistingFile)
      ->excludes(grid->get_option("--state"));
  grid->add_option("--resolution", grid_args.resolution, "Samples per axis (>= 2)")->capture_default_str();
  grid->add_option("--span", grid_args.spans, "Axis range, e.g. xi=0:2pi or chi=0:pi (repeatable)");

  WminArgs wmin_args;
  auto* wmin = app.add_subcommand("wmin", "Tabulate the phase-space minimum W_min against the Bloch radius r");
  wmin->add_option("--r-min", wmin_args.r_min, "Smallest r")->capture_default_str();
  wmin->add_option("--r-max", wmin_args.r_max, "Largest r")->capture_default_str();
  wmin->add_option("--steps", wmin_args.steps, "Number of r values (>= 2)")->capture_default_str();

  std::string sim_config;
  auto* simulate = app.add_subcommand("simulate", "Run the campaign and/or Ramsey scan described by a config");
  simulate->add_option("config", sim_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

  std::string ramsey_config;
  auto* ramsey = app.add_subcommand("ramsey", "Run only the Ramsey block of a config (same as simulate)");
  ramsey->add_option("config", ramsey_config, "Experiment config (JSON) with a ramsey block")
      ->required()
      ->check(CLI::ExistingFile);

  std::string tomo_config;
  auto* tomo = app.add_subcommand("tomography", "Reconstruct states by Pauli-basis tomography");
  tomo->add_option("config", tomo_config, "Experiment config (JSON) with a tomography block")
      ->required()
      ->check(CLI::ExistingFile);

  std::string inject;
  auto* selftest = app.add_subcommand("selftest", "Run the fast invariant suite");
  selftest->add_option("--inject", inject)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*grid) return cmd_grid(g, grid_args);
    if (*wmin) return cmd_wmin(g, wmin_args);
    if (*simulate) return cmd_simulate(g, sim_config, false);
    if (*ramsey) return cmd_simulate(g, ramsey_config, true);
    if (*tomo) return cmd_tomography(g, tomo_config);
    if (*selftest) return cmd_selftest(g, inject);
  } catch (const ConfigError& e) {
    for (const auto& issue : e.issues()) print_error(issue);
    return kExitConfig;
  } catch (const DomainError& e) {
    print_error(e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    print_error(e.what());
    return kExitNumerical;
  } catch (const IoError& e) {
    print_error(e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    print_error(e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
