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

#include "qwigner/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "qwigner/errors.hpp"

namespace qwigner {

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_plain(const std::string& s, const std::string& whole) {
  if (s.empty()) throw DomainError("malformed angle '" + whole + "'");
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("malformed angle '" + whole + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw DomainError("malformed angle '" + whole + "'");
  return v;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto at = s.find("pi");
  if (at == std::string::npos) return parse_plain(s, text);
  if (s.find("pi", at + 2) != std::string::npos) throw DomainError("malformed angle '" + text + "'");

  std::string coef = s.substr(0, at);
  std::string rest = s.substr(at + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double factor = 1.0;
  if (coef == "-")
    factor = -1.0;
  else if (coef == "+" || coef.empty())
    factor = 1.0;
  else
    factor = parse_plain(coef, text);
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw DomainError("malformed angle '" + text + "'");
    divisor = parse_plain(rest.substr(1), text);
    if (divisor == 0.0) throw DomainError("angle '" + text + "' divides by zero");
  }
  return factor * std::numbers::pi / divisor;
}

double angle_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_angle(j.get<std::string>());
  throw DomainError("expected a number or an angle string");
}

json to_json(const DensityMatrixd& rho) {
  const auto& m = rho.matrix();
  return json{{"re", {{m(0, 0).real(), m(0, 1).real()}, {m(1, 0).real(), m(1, 1).real()}}},
              {"im", {{m(0, 0).imag(), m(0, 1).imag()}, {m(1, 0).imag(), m(1, 1).imag()}}}};
}

json to_json(const BlochStated& s) { return json{{"theta", s.theta}, {"phi", s.phi}, {"r", s.r}}; }

json to_json(const ChannelParams& c) {
  json j{{"kernel", to_string(c.kernel)}, {"r0", c.r0}};
  if (c.kernel == DecayKernel::Table) {
    json pts = json::array();
    for (const auto& [t, f] : c.table) pts.push_back({t, f});
    j["points"] = pts;
  } else {
    j["t2_ms"] = c.t2_ms;
  }
  return j;
}

namespace {
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
}  // namespace

json to_json(const FitResult& fit) {
  json params = json::array();
  for (const auto& p : fit.parameters)
    params.push_back({{"name", p.name}, {"value", p.value}, {"std_error", finite_or_null(p.std_error)}});
  json cov = json::array();
  for (Eigen::Index i = 0; i < fit.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < fit.covariance.cols(); ++k) row.push_back(finite_or_null(fit.covariance(i, k)));
    cov.push_back(row);
  }
  return json{{"converged", fit.converged},
              {"parameters", params},
              {"covariance", cov},
              {"residual_norm", fit.residual_norm},
              {"degrees_of_freedom", fit.degrees_of_freedom},
              {"iterations", fit.iterations}};
}

json to_json(const TomographyResult& t) {
  return json{{"rho", to_json(t.rho)},
              {"bloch", to_json(t.bloch)},
              {"purity", t.purity},
              {"r", t.bloch.r},
              {"raw_r", t.raw_r},
              {"clamped", t.clamped},
              {"expectations", {t.expectations.x(), t.expectations.y(), t.expectations.z()}},
              {"entry_errors",
               {{"rho11", t.entry_errors.rho11},
                {"rho22", t.entry_errors.rho22},
                {"re12", t.entry_errors.re12},
                {"im12", t.entry_errors.im12}}}};
}

DensityMatrixd density_from_json(const json& j, double tol) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im"))
    throw DomainError("density matrix needs 're' and 'im' 2x2 arrays");
  for (const auto& [k, v] : j.items())
    if (k != "re" && k != "im") throw DomainError("unknown field '" + k + "' in density matrix");
  ComplexMatrix2d m;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto& re = j.at("re");
      const auto& im = j.at("im");
      if (!re.is_array() || re.size() != 2 || !re[a].is_array() || re[a].size() != 2 || !im.is_array() ||
          im.size() != 2 || !im[a].is_array() || im[a].size() != 2)
        throw DomainError("density matrix 're'/'im' must be 2x2 arrays");
      m(a, b) = {re[a][b].get<double>(), im[a][b].get<double>()};
    }
  return DensityMatrixd::from_matrix(m, tol);
}

BlochStated bloch_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("Bloch state must be an object");
  for (const auto& [k, v] : j.items())
    if (k != "theta" && k != "phi" && k != "r") throw DomainError("unknown field '" + k + "' in Bloch state");
  BlochStated s;
  s.theta = j.contains("theta") ? angle_from_json(j.at("theta")) : 0.0;
  s.phi = j.contains("phi") ? angle_from_json(j.at("phi")) : 0.0;
  if (!j.contains("r")) throw DomainError("Bloch state needs 'r'");
  s.r = j.at("r").get<double>();
  s.validate();
  return s;
}

DensityMatrixd state_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("state must be an object");
  if (j.contains("bloch") || j.contains("matrix")) {
    if (j.size() != 1) throw DomainError("state takes exactly one of 'bloch' or 'matrix'");
    if (j.contains("bloch")) return density_from_bloch(bloch_from_json(j.at("bloch")));
    return density_from_json(j.at("matrix"));
  }
  if (j.contains("re")) return density_from_json(j);
  return density_from_bloch(bloch_from_json(j));
}

ChannelParams channel_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("channel must be an object");
  ChannelParams c;
  c.kernel = decay_kernel_from_string(j.value("kernel", std::string("exponential")));
  c.r0 = j.value("r0", 1.0);
  if (c.kernel == DecayKernel::Table) {
    if (!j.contains("points") || !j.at("points").is_array()) throw DomainError("table kernel needs 'points'");
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw DomainError("table points are [t_ms, factor] pairs");
      c.table.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  } else {
    c.t2_ms = j.value("t2_ms", 17.2);
  }
  c.validate();
  return c;
}

std::vector<double> axis_from_json(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(angle_from_json(v));
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k != "from" && k != "to" && k != "n" && k != "endpoint")
        throw DomainError("unknown field '" + k + "' in " + path);
    if (!j.contains("from") || !j.contains("to") || !j.contains("n"))
      throw DomainError(path + " range needs 'from', 'to' and 'n'");
    const double lo = angle_from_json(j.at("from"));
    const double hi = angle_from_json(j.at("to"));
    const auto n = j.at("n").get<std::int64_t>();
    const bool endpoint = j.value("endpoint", true);
    if (n < 1) throw DomainError(path + ".n must be at least 1");
    if (n == 1) return {lo};
    const double denom = endpoint ? static_cast<double>(n - 1) : static_cast<double>(n);
    for (std::int64_t k = 0; k < n; ++k)
      out.push_back(endpoint && k == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(k) / denom);
  } else {
    throw DomainError(path + " must be an array or a {from, to, n} range");
  }
  if (out.empty()) throw DomainError(path + " is empty");
  return out;
}

namespace {

// Accumulates field-level problems instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> issues;

  void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) {
      issues.push_back(path + ": must be an object");
      return;
    }
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
      if (!ok.count(k)) issues.push_back(path + "." + k + ": unknown field");
  }

  template <typename F>
  void field(const std::string& path, F&& f) {
    try {
      f();
    } catch (const DomainError& e) {
      issues.push_back(path + ": " + e.what());
    } catch (const ConfigError& e) {
      for (const auto& i : e.issues()) issues.push_back(path + ": " + i);
    } catch (const json::exception& e) {
      issues.push_back(path + ": wrong type (" + std::string(e.what()) + ")");
    }
  }

  double number(const json& obj, const char* key, const std::string& path, double fallback, bool angle = false) {
    double out = fallback;
    if (!obj.is_object() || !obj.contains(key)) return out;
    field(path + "." + key, [&] {
      const auto& v = obj.at(key);
      if (angle) {
        out = angle_from_json(v);
      } else {
        if (!v.is_number()) throw DomainError("expected a number");
        out = v.get<double>();
      }
    });
    return out;
  }

  std::uint64_t count(const json& obj, const char* key, const std::string& path, std::uint64_t fallback) {
    std::uint64_t out = fallback;
    if (!obj.is_object() || !obj.contains(key)) return out;
    field(path + "." + key, [&] {
      const auto& v = obj.at(key);
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw DomainError("expected a non-negative integer");
      out = v.get<std::uint64_t>();
    });
    return out;
  }

  bool flag(const json& obj, const char* key, const std::string& path, bool fallback) {
    bool out = fallback;
    if (!obj.is_object() || !obj.contains(key)) return out;
    field(path + "." + key, [&] {
      if (!obj.at(key).is_boolean()) throw DomainError("expected true or false");
      out = obj.at(key).get<bool>();
    });
    return out;
  }

  std::string text(const json& obj, const char* key, const std::string& path, std::string fallback,
                   std::initializer_list<const char*> choices) {
    std::string out = std::move(fallback);
    if (!obj.is_object() || !obj.contains(key)) return out;
    field(path + "." + key, [&] {
      if (!obj.at(key).is_string()) throw DomainError("expected a string");
      out = obj.at(key).get<std::string>();
      if (choices.size() > 0 && std::find(choices.begin(), choices.end(), out) == choices.end()) {
        std::string list;
        for (const char* c : choices) list += std::string(list.empty() ? "" : ", ") + c;
        throw DomainError("'" + out + "' is not one of " + list);
      }
    });
    return out;
  }
};

ChannelParams read_channel(Reader& rd, const json& j, EvolutionMode& evolution) {
  ChannelParams c;
  rd.allow(j, "channel", {"kernel", "t2_ms", "r0", "points", "evolution"});
  const std::string ev = rd.text(j, "evolution", "channel", "ensemble", {"ensemble", "jitter_per_shot", "jitter_per_point"});
  evolution = ev == "jitter_per_shot"    ? EvolutionMode::JitterPerShot
              : ev == "jitter_per_point" ? EvolutionMode::JitterPerPoint
                                         : EvolutionMode::Ensemble;
  rd.field("channel", [&] {
    json copy = j;
    copy.erase("evolution");
    c = channel_from_json(copy);
  });
  return c;
}

PulseParams read_pulses(Reader& rd, const json& j) {
  PulseParams p;
  rd.allow(j, "pulses", {"rabi_freq", "detuning", "z_rotation_overhead", "dephase_during_rotation"});
  p.rabi_freq = rd.number(j, "rabi_freq", "pulses", p.rabi_freq, true);
  p.detuning = rd.number(j, "detuning", "pulses", p.detuning, true);
  p.z_rotation_overhead = rd.number(j, "z_rotation_overhead", "pulses", p.z_rotation_overhead);
  p.dephase_during_rotation = rd.flag(j, "dephase_during_rotation", "pulses", p.dephase_during_rotation);
  rd.field("pulses", [&] { p.validate(); });
  return p;
}

DetectionModel read_detection(Reader& rd, const json& j, ContrastMode& mode) {
  DetectionModel d;
  rd.allow(j, "detection", {"contrast", "eps0", "eps1", "prep_fidelity", "contrast_mode"});
  d.contrast = rd.number(j, "contrast", "detection", d.contrast);
  d.eps0 = rd.number(j, "eps0", "detection", d.eps0);
  d.eps1 = rd.number(j, "eps1", "detection", d.eps1);
  d.prep_fidelity = rd.number(j, "prep_fidelity", "detection", d.prep_fidelity);
  mode = rd.text(j, "contrast_mode", "detection", "off", {"on", "off"}) == "on" ? ContrastMode::On : ContrastMode::Off;
  rd.field("detection", [&] { d.validate(); });
  return d;
}

}  // namespace

ExperimentConfig parse_experiment(const json& doc, const std::filesystem::path& base_dir) {
  Reader rd;
  ExperimentConfig cfg;
  cfg.raw = doc;
  if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");
  rd.allow(doc, "config",
           {"schema", "description", "seed", "output_dir", "state", "channel", "pulses", "detection", "scan", "shots",
            "tomography", "fit_wmin", "ramsey"});

  if (!doc.contains("schema")) {
    rd.issues.emplace_back("config.schema: required (current version is 1)");
  } else {
    rd.field("config.schema", [&] {
      if (!doc.at("schema").is_number_integer() || doc.at("schema").get<int>() != kSchemaVersion)
        throw DomainError("unsupported schema version (expected 1)");
    });
  }
  rd.text(doc, "description", "config", "", {});
  cfg.seed = rd.count(doc, "seed", "config", 0);
  if (doc.contains("output_dir")) cfg.output_dir = rd.text(doc, "output_dir", "config", "", {});

  if (doc.contains("state"))
    rd.field("config.state", [&] { cfg.state = state_from_json(doc.at("state")); });
  else if (doc.contains("scan") ||
           (doc.contains("tomography") && !(doc.at("tomography").is_object() && doc.at("tomography").contains("import"))))
    rd.issues.emplace_back("config.state: required");

  EvolutionMode evolution = EvolutionMode::Ensemble;
  ContrastMode contrast_mode = ContrastMode::Off;
  cfg.channel = read_channel(rd, doc.value("channel", json::object()), evolution);
  const PulseParams pulses = read_pulses(rd, doc.value("pulses", json::object()));
  cfg.detection = read_detection(rd, doc.value("detection", json::object()), contrast_mode);
  const std::uint64_t shots = rd.count(doc, "shots", "config", 300);
  if (doc.contains("shots") && shots == 0) rd.issues.emplace_back("config.shots: must be at least 1");

  if (doc.contains("scan")) {
    const json& s = doc.at("scan");
    rd.allow(s, "scan", {"times_ms", "points", "grid", "repeats"});
    CampaignConfig cc;
    cc.initial = cfg.state;
    cc.channel = cfg.channel;
    cc.evolution = evolution;
    cc.pulses = pulses;
    cc.detection = cfg.detection;
    cc.contrast_mode = contrast_mode;
    cc.shots = shots;
    cc.seed = cfg.seed;
    cc.scan.repeats = rd.count(s, "repeats", "scan", 1);
    if (s.is_object() && s.contains("times_ms")) {
      rd.field("scan.times_ms", [&] {
        cc.scan.times_ms.clear();
        for (const auto& t : s.at("times_ms")) cc.scan.times_ms.push_back(t.get<double>());
      });
    }
    const bool has_points = s.is_object() && s.contains("points");
    const bool has_grid = s.is_object() && s.contains("grid");
    if (has_points == has_grid) rd.issues.emplace_back("scan: give exactly one of 'points' or 'grid'");
    if (has_points) {
      rd.field("scan.points", [&] {
        for (const auto& p : s.at("points")) {
          if (!p.is_array() || p.size() != 2) throw DomainError("points are [xi, chi] pairs");
          cc.scan.points.push_back({angle_from_json(p[0]), angle_from_json(p[1])});
        }
      });
    }
    if (has_grid) {
      const json& g = s.at("grid");
      rd.allow(g, "scan.grid", {"xi", "chi"});
      std::vector<double> xs, cs;
      if (!g.contains("xi") || !g.contains("chi")) rd.issues.emplace_back("scan.grid: needs 'xi' and 'chi' axes");
      else {
        rd.field("scan.grid.xi", [&] { xs = axis_from_json(g.at("xi"), "scan.grid.xi"); });
        rd.field("scan.grid.chi", [&] { cs = axis_from_json(g.at("chi"), "scan.grid.chi"); });
      }
      for (double x : xs)
        for (double c : cs) cc.scan.points.push_back({x, c});
    }
    cc.fit_wmin = rd.flag(doc, "fit_wmin", "config", false);
    if (doc.contains("tomography")) {
      const json& t = doc.at("tomography");
      cc.tomography.enabled = true;
      cc.tomography.shots_per_basis = rd.count(t, "shots_per_basis", "tomography", 300);
    }
    if (rd.issues.empty()) rd.field("scan", [&] { cc.validate(); });
    cfg.campaign = cc;
  } else if (doc.contains("fit_wmin")) {
    rd.issues.emplace_back("config.fit_wmin: only meaningful together with 'scan'");
  }

  if (doc.contains("tomography")) {
    const json& t = doc.at("tomography");
    rd.allow(t, "tomography", {"times_ms", "shots_per_basis", "noiseless", "import"});
    TomographyPlan plan;
    if (t.is_object() && t.contains("times_ms")) {
      rd.field("tomography.times_ms", [&] {
        plan.times_ms.clear();
        for (const auto& v : t.at("times_ms")) {
          const double x = v.get<double>();
          if (!(x >= 0.0)) throw DomainError("times must be >= 0");
          plan.times_ms.push_back(x);
        }
        if (plan.times_ms.empty()) throw DomainError("at least one time required");
      });
    }
    plan.shots_per_basis = rd.count(t, "shots_per_basis", "tomography", 300);
    if (plan.shots_per_basis == 0) rd.issues.emplace_back("tomography.shots_per_basis: must be at least 1");
    plan.noiseless = rd.flag(t, "noiseless", "tomography", false);
    if (t.is_object() && t.contains("import")) {
      const std::string p = rd.text(t, "import", "tomography", "", {});
      std::filesystem::path path(p);
      plan.import_path = path.is_relative() ? base_dir / path : path;
    }
    cfg.tomography = plan;
  }

  if (doc.contains("ramsey")) {
    const json& r = doc.at("ramsey");
    rd.allow(r, "ramsey", {"delays_ms", "shots", "weighting", "detuning"});
    RamseyConfig rc;
    rc.pulses = pulses;
    rc.pulses.detuning = rd.number(r, "detuning", "ramsey", pulses.detuning, true);
    rc.channel = cfg.channel;
    rc.detection = cfg.detection;
    rc.seed = cfg.seed;
    rc.shots = rd.count(r, "shots", "ramsey", 100);
    rc.weighting = rd.text(r, "weighting", "ramsey", "inverse_variance", {"inverse_variance", "unweighted"}) ==
                           "unweighted"
                       ? Weighting::Unweighted
                       : Weighting::InverseVariance;
    if (r.is_object() && r.contains("delays_ms"))
      rd.field("ramsey.delays_ms", [&] { rc.delays_ms = axis_from_json(r.at("delays_ms"), "ramsey.delays_ms"); });
    else
      rd.issues.emplace_back("ramsey.delays_ms: required");
    if (rd.issues.empty()) rd.field("ramsey", [&] { rc.validate(); });
    cfg.ramsey = rc;
  }

  if (!rd.issues.empty()) throw ConfigError(rd.issues);
  return cfg;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return parse_experiment(read_json_file(path), path.parent_path());
}

void write_grid_csv(std::ostream& os, const WignerGridd& grid) {
  os << "xi,chi,w\n";
  for (Eigen::Index i = 0; i < grid.xi_axis.size(); ++i)
    for (Eigen::Index j = 0; j < grid.chi_axis.size(); ++j)
      os << format_number(grid.xi_axis[i]) << ',' << format_number(grid.chi_axis[j]) << ','
         << format_number(grid.values(i, j)) << '\n';
}

json grid_to_json(const WignerGridd& grid, const json& metadata) {
  json xi = json::array(), chi = json::array(), values = json::array();
  for (Eigen::Index i = 0; i < grid.xi_axis.size(); ++i) xi.push_back(grid.xi_axis[i]);
  for (Eigen::Index j = 0; j < grid.chi_axis.size(); ++j) chi.push_back(grid.chi_axis[j]);
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) row.push_back(grid.values(i, j));
    values.push_back(row);
  }
  return json{{"metadata", metadata}, {"xi_axis", xi}, {"chi_axis", chi}, {"values", values}};
}

void write_campaign_csv(std::ostream& os, const CampaignResult& result) {
  os << "t_ms,repeat,xi,chi,n_retained,n_lost,w_est,w_stderr,w_theory\n";
  for (const auto& row : result.rows) {
    const auto& e = row.estimate;
    os << format_number(row.t_ms) << ',' << row.repeat << ',' << format_number(e.tally.point.xi) << ','
       << format_number(e.tally.point.chi) << ',' << e.tally.n_retained << ',' << e.tally.n_lost << ','
       << format_number(e.value) << ',' << format_number(e.std_error) << ',' << format_number(row.w_theory) << '\n';
  }
}

json campaign_summary_json(const CampaignResult& result) {
  json times = json::array();
  for (const auto& s : result.summaries) {
    json t{{"t_ms", s.t_ms},
           {"r_model", s.r_model},
           {"w_min_analytic", s.w_min_analytic},
           {"w_min_theory_scan", s.w_min_theory_scan},
           {"w_min_mean", s.w_min_mean},
           {"w_min_error", s.w_min_error},
           {"argmin", {{"xi", s.argmin.xi}, {"chi", s.argmin.chi}}},
           {"w_min_per_repeat", s.w_min_per_repeat}};
    if (s.r_tomography_mean) {
      t["r_tomography"] = s.r_tomography;
      t["r_tomography_mean"] = *s.r_tomography_mean;
    }
    times.push_back(t);
  }
  json out{{"times", times}};
  if (result.wmin_fit) out["wmin_fit"] = to_json(*result.wmin_fit);
  return out;
}

void write_ramsey_csv(std::ostream& os, const RamseyResult& result) {
  os << "t_ms,n_retained,n_lost,p_hat,p_stderr,p_expected\n";
  for (std::size_t k = 0; k < result.points.size(); ++k) {
    const auto& p = result.points[k];
    os << format_number(p.t_ms) << ',' << p.n_retained << ',' << p.n_lost << ',' << format_number(p.p_hat) << ','
       << format_number(p.std_error) << ',' << format_number(result.expectation[k]) << '\n';
  }
}

std::vector<TallyRecord> read_tally_csv(std::istream& is) {
  std::vector<TallyRecord> out;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  auto fail = [&](const std::string& why) {
    throw ConfigError("tally CSV line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!header_seen) {
      if (line != "basis,t_ms,xi,chi,n_retained,n_lost") fail("expected header basis,t_ms,xi,chi,n_retained,n_lost");
      header_seen = true;
      continue;
    }
    if (cells.size() != 6) fail("expected 6 fields");
    TallyRecord r;
    if (cells[0].size() != 1 || std::string("xyzw").find(cells[0][0]) == std::string::npos)
      fail("basis must be x, y, z or w");
    r.basis = cells[0][0];
    try {
      r.t_ms = parse_plain(cells[1], cells[1]);
      r.xi = parse_angle(cells[2]);
      r.chi = parse_angle(cells[3]);
    } catch (const DomainError& e) {
      fail(e.what());
    }
    auto parse_count = [&](const std::string& s) -> std::uint64_t {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
        fail("counts must be non-negative integers");
      return std::stoull(s);
    };
    r.n_retained = parse_count(cells[4]);
    r.n_lost = parse_count(cells[5]);
    if (r.n_retained + r.n_lost == 0) fail("a record needs at least one shot");
    if (r.t_ms < 0.0) fail("t_ms must be >= 0");
    out.push_back(r);
  }
  if (!header_seen) throw ConfigError("tally CSV: missing header");
  return out;
}

std::vector<std::pair<double, PauliTallies>> group_pauli_tallies(const std::vector<TallyRecord>& records) {
  std::map<double, std::array<std::optional<BasisTally>, 3>> by_time;
  for (const auto& r : records) {
    if (r.basis == 'w') continue;
    auto& slot = by_time[r.t_ms][static_cast<std::size_t>(r.basis - 'x')];
    if (!slot) slot = BasisTally{};
    slot->n_plus += r.n_retained;
    slot->n_minus += r.n_lost;
  }
  std::vector<std::pair<double, PauliTallies>> out;
  for (const auto& [t, slots] : by_time) {
    if (!slots[0] || !slots[1] || !slots[2])
      throw ConfigError("tally CSV: time " + format_number(t) + " lacks one of the x, y, z bases");
    out.push_back({t, PauliTallies{*slots[0], *slots[1], *slots[2]}});
  }
  return out;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace qwigner
