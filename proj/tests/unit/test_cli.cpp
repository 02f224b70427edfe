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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "dcgeom/cli.hpp"
#include "dcgeom/errors.hpp"

using namespace dcgeom;
using namespace dcgeom::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dcgeom_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

nlohmann::json manifest(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  return nlohmann::json::parse(in);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  REQUIRE(it != header.end());
  return static_cast<std::size_t>(it - header.begin());
}

int run_text(const std::string& command, const std::string& config, const fs::path& dir, RunOptions o = {}) {
  write(dir / "config.json", config);
  o.out = dir / "out";
  std::ostringstream log, err;
  return run(command, dir / "config.json", o, log, err);
}

}  // namespace

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_config(R"({"colour": 1})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"E1": 1, "E3": 2}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"verify": {"epsilons": []}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"pulse": {"type": "triangle"}})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"design": {"n_sym": 3, "k": 3}})"), ValidationError);
  CHECK_THROWS_AS(parse_config("{not json"), ValidationError);
  const auto c = parse_config(R"({"pulse": {"type": "constant", "omega": 1.0, "duration": 0}})");
  CHECK(c.zero_duration);
}

TEST_CASE("pulse json round trip") {
  const Pulse p = SmoothPulse{0.3, {{1.0, 2.0, 0.5}, {-0.4, 1.0, 1.5}}, 4.0, 3};
  const Pulse q = parse_pulse_json(pulse_to_json(p));
  const auto& s = std::get<SmoothPulse>(q);
  CHECK(s.c0 == 0.3);
  CHECK(s.terms.size() == 2);
  CHECK(s.terms[1].phi == 1.5);
  CHECK(s.n_sym == 3);
  const Pulse sq = SquarePulseSequence{{{1.0, 0.5}, {-1.0, 0.25}}, 2};
  CHECK(std::get<SquarePulseSequence>(parse_pulse_json(pulse_to_json(sq))).segments[1].omega == -1.0);
}

TEST_CASE("waveform csv reader") {
  const auto dir = scratch("waveform");
  write(dir / "good.csv", "t,omega\n0,0\n0.5,1\n1.0,0.5\n");
  const auto w = read_waveform_csv(dir / "good.csv");
  CHECK(w.times.size() == 3);
  CHECK(w.omegas[1] == 1.0);
  write(dir / "bad.csv", "t,omega\n0,0\n0.5\n");
  CHECK_THROWS_AS(read_waveform_csv(dir / "bad.csv"), ValidationError);
  write(dir / "text.csv", "t,omega\n0,0\n0.5,abc\n");
  CHECK_THROWS_AS(read_waveform_csv(dir / "text.csv"), ValidationError);
  CHECK_THROWS_AS(read_waveform_csv(dir / "missing.csv"), ValidationError);
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("output directory precedence") {
  RunConfig c;
  c.output_dir = "from_config";
  RunOptions o;
  CHECK(resolve_output_dir(RunConfig{}, o) == "dcgeom_out");
  CHECK(resolve_output_dir(c, o) == "from_config");
  o.out = "from_flag";
  CHECK(resolve_output_dir(c, o) == "from_flag");
}

TEST_CASE("trace of a zero-length pulse writes a single origin row") {
  const auto dir = scratch("zero");
  const int rc = run_text("trace", R"({"pulse": {"type": "constant", "omega": 1.0, "duration": 0}})", dir);
  REQUIRE(rc == kOk);
  const auto rows = read_csv(dir / "out" / "curve.csv");
  REQUIRE(rows.size() == 2);
  for (const auto& cell : rows[1]) CHECK(std::stod(cell) == 0.0);
  const auto m = manifest(dir / "out");
  CHECK(m["status"] == "ok");
  CHECK(m["metrics"]["closure_residual"] == 0.0);
}

TEST_CASE("trace files and manifest entries agree") {
  const auto dir = scratch("trace");
  const int rc = run_text("trace", R"({"pulse": {"type": "smooth", "c0": 0.4, "terms": [{"c": 1.1, "a": 1.7, "phi": 0.3}], "period": 3.0, "n_sym": 1}})", dir);
  REQUIRE(rc == kOk);
  const auto m = manifest(dir / "out");
  REQUIRE(m["files"].size() >= 4);
  for (const auto& f : m["files"]) {
    const auto rows = read_csv(dir / "out" / f["name"].get<std::string>());
    REQUIRE(!rows.empty());
    CHECK(rows.size() - 1 == f["rows"].get<std::size_t>());
    CHECK(rows[0] == f["columns"].get<std::vector<std::string>>());
  }
  CHECK(m["metrics"]["speed_deviation"].get<double>() < 1e-5);
  CHECK(m["config_sha256"].get<std::string>().size() == 64);
}

TEST_CASE("curvature columns for a constant drive and for equal splittings") {
  {
    const auto dir = scratch("const");
    REQUIRE(run_text("curvatures", R"({"pulse": {"type": "constant", "omega": 1.0, "duration": 4.0}})", dir) == kOk);
    const auto rows = read_csv(dir / "out" / "curvatures.csv");
    const auto k5 = column(rows[0], "kappa5_numeric");
    for (std::size_t r = 1; r < rows.size(); ++r) CHECK(std::abs(std::stod(rows[r][k5])) < 1e-6);
  }
  {
    const auto dir = scratch("equal");
    REQUIRE(run_text("curvatures",
                     R"({"model": {"E1": 0.8, "E2": 0.8}, "pulse": {"type": "smooth", "c0": 0.4, "terms": [{"c": 1.1, "a": 1.7, "phi": 0.3}], "period": 3.0}})",
                     dir) == kOk);
    const auto rows = read_csv(dir / "out" / "curvatures.csv");
    const auto k3 = column(rows[0], "kappa3_numeric");
    const auto k3a = column(rows[0], "kappa3_analytic");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      CHECK(std::stod(rows[r][k3]) == 0.0);
      CHECK(std::stod(rows[r][k3a]) == 0.0);
    }
    CHECK(manifest(dir / "out")["metrics"]["effective_dimension"] == 3);
  }
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  CHECK(run_text("trace", R"({"pulse": {"type": "constant", "omega": 1.0, "duration": 1.0}, "extra": 1})", dir) ==
        kValidationFailure);
  CHECK(run_text("curvatures", R"({"seed": 1})", dir) == kValidationFailure);
  CHECK(run_text("launch", R"({})", dir) == kValidationFailure);
  const std::string stuck = R"({"design": {"ansatz": "square", "bounds": [[0.1, 0.2], [0.2, 0.3], [0.1, 0.2], [0.2, 0.3]],
      "optimizer": {"starts": 1, "max_iterations": 20, "polish_evaluations": 20}},
      "verify": {"epsilons": [1e-3, 1e-2]}})";
  CHECK(run_text("design", stuck, dir) == kConvergenceFailure);
  CHECK(manifest(dir / "out")["status"] == "convergence_failure");
}

TEST_CASE("verify reports linear scaling for an uncorrected pulse") {
  const auto dir = scratch("verify");
  write(dir / "pulse.json", R"({"type": "constant", "omega": 1.0, "duration": 5.0})");
  RunOptions o;
  o.pulse_file = dir / "pulse.json";
  REQUIRE(run_text("verify", R"({"verify": {"epsilons": [1e-4, 1e-3, 1e-2]}})", dir, o) == kOk);
  const auto m = manifest(dir / "out");
  CHECK(m["metrics"]["scaling_slope"].get<double>() == doctest::Approx(1.0).epsilon(0.1));
  CHECK(read_csv(dir / "out" / "sweep.csv").size() == 4);
}
