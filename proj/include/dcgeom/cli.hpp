// Copyright 2026 The dcgeom Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dcgeom/design.hpp"

namespace dcgeom::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kConvergenceFailure = 2,
  kNumericalDegeneracy = 3,
};

struct GridSpec {
  std::optional<int> steps;
  double max_step_product = 0.02;

  TimeGrid make(const IsingModel& model, const Pulse& pulse) const;
};

struct VerifySpec {
  std::vector<double> epsilons = log_spaced(1e-4, 1e-1, 12);
  double fit_min = 1e-4;
  double fit_max = 1e-2;
};

struct TraceSpec {
  /// 1-based axis triples.
  std::vector<std::array<int, 3>> projections{{1, 2, 3}, {4, 5, 6}};
  /// Axes refer to the Frenet frame at t = 0 instead of the operator basis.
  bool frenet_axes = false;
};

struct RunConfig {
  IsingModel model;
  std::optional<Pulse> pulse;
  /// A pulse of zero length was requested (only `trace` accepts it).
  bool zero_duration = false;
  GridSpec grid;
  DesignProblem design;
  VerifySpec verify;
  TraceSpec trace;
  std::string output_dir;
  std::uint64_t seed = 20260101;
  int threads = 1;
  /// Exact bytes the config was parsed from (hashed into the manifest).
  std::string source_text;
};

/// Parses a JSON config. Unknown keys and malformed values throw
/// ValidationError. Relative file references resolve against base_dir.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

/// Pulse from a JSON object (same schema as the config's "pulse" entry, or a
/// design manifest / pulse file holding one under "pulse").
Pulse parse_pulse_json(const std::string& text, const std::filesystem::path& base_dir = ".");
std::string pulse_to_json(const Pulse& pulse, int indent = 2);

/// Two-column CSV (t, omega) with a header row; linear interpolation.
WaveformPulse read_waveform_csv(const std::filesystem::path& path);

/// .csv -> waveform, anything else -> JSON.
Pulse load_pulse_file(const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::filesystem::path> pulse_file;
};

/// Output directory: --out, then $DCGEOM_OUTPUT_DIR, then the config value,
/// then "dcgeom_out".
std::filesystem::path resolve_output_dir(const RunConfig& config, const RunOptions& options);

int cmd_curvatures(RunConfig config, const RunOptions& options, std::ostream& log);
int cmd_trace(RunConfig config, const RunOptions& options, std::ostream& log);
int cmd_design(RunConfig config, const RunOptions& options, std::ostream& log);
int cmd_verify(RunConfig config, const RunOptions& options, std::ostream& log);

/// Dispatches by name and maps exceptions to exit codes, printing the message.
int run(const std::string& command, const std::filesystem::path& config_path, const RunOptions& options,
        std::ostream& log, std::ostream& err);

std::string sha256_hex(const std::string& bytes);

}  // namespace dcgeom::cli
