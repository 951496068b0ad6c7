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

/**
 * @file io.hpp
 * File formats: JSON for states, channels, configs and results; CSV for
 * grids, campaign rows, Ramsey scans and imported tallies. Numbers in CSV
 * are printed with 17 significant digits so they round-trip exactly.
 */

#ifndef QWIGNER_IO_HPP
#define QWIGNER_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwigner/campaign.hpp"
#include "qwigner/dephasing.hpp"
#include "qwigner/estimation.hpp"
#include "qwigner/fitting.hpp"
#include "qwigner/qubit.hpp"
#include "qwigner/wigner.hpp"

namespace qwigner {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Current ExperimentConfig schema version.
inline constexpr int kSchemaVersion = 1;

/// "%.17g"
std::string format_number(double x);

/// Angle literal: a plain number, or a multiple/fraction of pi such as
/// "pi", "-pi/2", "0.509pi", "3pi/4", "2*pi". Throws DomainError.
double parse_angle(const std::string& text);
/// Number or angle string.
double angle_from_json(const json& j);

json to_json(const DensityMatrixd& rho);
json to_json(const BlochStated& s);
json to_json(const ChannelParams& c);
json to_json(const FitResult& fit);
json to_json(const TomographyResult& t);

/// {"re": [[..,..],[..,..]], "im": [[..,..],[..,..]]}, validated strictly
/// up to `tol` (published matrices carry three decimals).
DensityMatrixd density_from_json(const json& j, double tol = 1e-9);
BlochStated bloch_from_json(const json& j);

/// Accepts {"bloch": {...}}, {"matrix": {...}}, or either form inline.
DensityMatrixd state_from_json(const json& j);

/// {"t2_ms": 17.2, "kernel": "exponential", "r0": 0.981} or
/// {"kernel": "table", "points": [[0, 1.0], [2, 0.794], ...]}.
ChannelParams channel_from_json(const json& j);

/// Axis: array of angles, or {"from", "to", "n", "endpoint"}.
std::vector<double> axis_from_json(const json& j, const std::string& path);

struct TomographyPlan {
  std::vector<double> times_ms{0.0};
  std::uint64_t shots_per_basis = 300;
  bool noiseless = false;
  std::optional<std::filesystem::path> import_path;
};

/// Parsed and validated experiment document.
struct ExperimentConfig {
  int schema = kSchemaVersion;
  std::uint64_t seed = 0;
  std::optional<std::string> output_dir;
  DensityMatrixd state = DensityMatrixd::maximally_mixed();
  json raw;  ///< the document as read, for hashing

  std::optional<CampaignConfig> campaign;  ///< present when "scan" is
  std::optional<RamseyConfig> ramsey;      ///< present when "ramsey" is
  std::optional<TomographyPlan> tomography;
  ChannelParams channel;
  DetectionModel detection;
};

/// Validates everything, collecting one message per offending field, and
/// throws ConfigError if any were found. Unknown fields are errors.
/// Relative import paths resolve against `base_dir`.
ExperimentConfig parse_experiment(const json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment(const std::filesystem::path& path);

json read_json_file(const std::filesystem::path& path);

// CSV writers -------------------------------------------------------------

/// Header `xi,chi,w`, rows row-major over xi then chi.
void write_grid_csv(std::ostream& os, const WignerGridd& grid);
/// Axes, values and caller-supplied metadata.
json grid_to_json(const WignerGridd& grid, const json& metadata);

/// Header `t_ms,repeat,xi,chi,n_retained,n_lost,w_est,w_stderr,w_theory`.
void write_campaign_csv(std::ostream& os, const CampaignResult& result);
json campaign_summary_json(const CampaignResult& result);

/// Header `t_ms,n_retained,n_lost,p_hat,p_stderr,p_expected`.
void write_ramsey_csv(std::ostream& os, const RamseyResult& result);

// Imported tallies ----------------------------------------------------------

/// One row of `basis,t_ms,xi,chi,n_retained,n_lost`. basis is x, y, z for
/// tomography rows and w for Wigner-point rows.
struct TallyRecord {
  char basis = 'z';
  double t_ms = 0.0;
  double xi = 0.0;
  double chi = 0.0;
  std::uint64_t n_retained = 0;
  std::uint64_t n_lost = 0;
};

/// Throws ConfigError naming the line of the first malformed record.
std::vector<TallyRecord> read_tally_csv(std::istream& is);

/// Groups x/y/z records by time. Throws ConfigError if a time lacks a basis.
std::vector<std::pair<double, PauliTallies>> group_pauli_tallies(const std::vector<TallyRecord>& records);

/// FNV-1a, 64-bit, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace qwigner

#endif  // QWIGNER_IO_HPP
