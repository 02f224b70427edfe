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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dcgeom/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Design and verify dynamically corrected gates via error-curve geometry"};
  app.set_version_flag("--version", std::string(DCGEOM_VERSION));
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string pulse;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Random seed (overrides the config)");
    sub->add_option("--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);
  };
  add_common(app.add_subcommand("curvatures", "Analytic and numeric curvatures along a pulse"));
  add_common(app.add_subcommand("trace", "Error curve, block curves and 3D projections"));
  add_common(app.add_subcommand("design", "Search for an n-fold symmetric corrected pulse"));
  auto* verify = app.add_subcommand("verify", "Infidelity sweep and scaling fit for a pulse");
  add_common(verify);
  verify->add_option("--pulse", pulse, "Pulse file: waveform CSV (t,omega) or pulse JSON")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dcgeom::cli::kValidationFailure;
  }

  dcgeom::cli::RunOptions opts;
  if (!out.empty()) opts.out = out;
  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--threads")) opts.threads = threads;
    if (sub->get_name() == "verify" && sub->count("--pulse")) opts.pulse_file = pulse;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return dcgeom::cli::run(command, config, opts, std::cout, std::cerr);
}
