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

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dcgeom/cli.hpp"
#include "dcgeom/errors.hpp"
#include "json.hpp"

namespace dcgeom::cli {
namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError("missing '" + key + "' in " + where);
  const auto& v = j.at(key);
  if (!v.is_number()) throw ValidationError("'" + key + "' in " + where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError("'" + key + "' in " + where + " must be finite");
  return x;
}

double number_or(const json& j, const std::string& key, const std::string& where, double fallback) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

int int_or(const json& j, const std::string& key, const std::string& where, int fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError("'" + key + "' in " + where + " must be an integer");
  return v.get<int>();
}

std::string string_or(const json& j, const std::string& key, const std::string& where, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ValidationError("'" + key + "' in " + where + " must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ValidationError(where + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + " is not valid JSON: " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Pulse pulse_from(const json& j, const std::filesystem::path& base, bool* zero_duration) {
  if (!j.is_object()) throw ValidationError("pulse must be a JSON object");
  const std::string type = string_or(j, "type", "pulse", "");
  Pulse out;
  if (type == "smooth") {
    require_keys(j, "pulse", {"type", "c0", "terms", "period", "n_sym"});
    SmoothPulse s;
    s.c0 = number_or(j, "c0", "pulse", 0.0);
    if (j.contains("terms")) {
      if (!j.at("terms").is_array()) throw ValidationError("pulse.terms must be an array");
      for (const auto& t : j.at("terms")) {
        require_keys(t, "pulse.terms[]", {"c", "a", "phi"});
        s.terms.push_back(Lorentzian{get_number(t, "c", "pulse.terms[]"), number_or(t, "a", "pulse.terms[]", 0.0),
                                     number_or(t, "phi", "pulse.terms[]", 0.0)});
      }
    }
    s.period = get_number(j, "period", "pulse");
    s.n_sym = int_or(j, "n_sym", "pulse", 1);
    out = s;
  } else if (type == "square") {
    require_keys(j, "pulse", {"type", "segments", "n_sym"});
    SquarePulseSequence s;
    if (!j.contains("segments") || !j.at("segments").is_array()) throw ValidationError("pulse.segments must be an array");
    for (const auto& seg : j.at("segments")) {
      require_keys(seg, "pulse.segments[]", {"omega", "duration"});
      s.segments.push_back(SquareSegment{get_number(seg, "omega", "pulse.segments[]"),
                                         get_number(seg, "duration", "pulse.segments[]")});
    }
    s.n_sym = int_or(j, "n_sym", "pulse", 1);
    out = s;
  } else if (type == "constant") {
    require_keys(j, "pulse", {"type", "omega", "duration"});
    const double omega = get_number(j, "omega", "pulse");
    const double dur = get_number(j, "duration", "pulse");
    if (dur < 0.0) throw ValidationError("pulse.duration must be >= 0");
    if (dur == 0.0) {
      if (!zero_duration) throw ValidationError("pulse has zero duration");
      *zero_duration = true;
      return SquarePulseSequence{{{omega, 1.0}}, 1};
    }
    out = SquarePulseSequence{{{omega, dur}}, 1};
  } else if (type == "waveform") {
    require_keys(j, "pulse", {"type", "file", "times", "omegas"});
    if (j.contains("file")) {
      if (j.contains("times") || j.contains("omegas")) throw ValidationError("waveform takes either file or times/omegas");
      std::filesystem::path f = string_or(j, "file", "pulse", "");
      if (f.is_relative()) f = base / f;
      out = read_waveform_csv(f);
    } else {
      if (!j.contains("times") || !j.contains("omegas")) throw ValidationError("waveform needs times and omegas");
      out = WaveformPulse{number_list(j.at("times"), "pulse.times"), number_list(j.at("omegas"), "pulse.omegas")};
    }
  } else {
    throw ValidationError("pulse.type must be one of smooth, square, constant, waveform");
  }
  validate(out);
  return out;
}

void parse_design(const json& j, RunConfig& c) {
  require_keys(j, "design",
               {"ansatz", "n_sym", "k", "target_gate", "third_lorentzian", "square_segments", "bounds", "grid_product",
                "search_grid_product", "optimizer"});
  auto& d = c.design;
  d.ansatz = ansatz_from_string(string_or(j, "ansatz", "design", "smooth"));
  d.n_sym = int_or(j, "n_sym", "design", 3);
  d.k = int_or(j, "k", "design", 1);
  d.target_gate = string_or(j, "target_gate", "design", "ZI");
  if (j.contains("third_lorentzian")) {
    if (!j.at("third_lorentzian").is_boolean()) throw ValidationError("design.third_lorentzian must be a boolean");
    d.lorentzians = j.at("third_lorentzian").get<bool>() ? 3 : 2;
  }
  d.square_segments = int_or(j, "square_segments", "design", 2);
  d.grid_product = number_or(j, "grid_product", "design", d.grid_product);
  d.search_grid_product = number_or(j, "search_grid_product", "design", d.search_grid_product);
  if (j.contains("bounds")) {
    if (!j.at("bounds").is_array()) throw ValidationError("design.bounds must be an array of [lower, upper]");
    for (const auto& b : j.at("bounds")) {
      const auto v = number_list(b, "design.bounds[]");
      if (v.size() != 2) throw ValidationError("design.bounds entries must be [lower, upper]");
      d.bounds.emplace_back(v[0], v[1]);
    }
  }
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    require_keys(o, "design.optimizer", {"starts", "max_iterations", "polish_evaluations", "tolerance"});
    d.optimizer.starts = int_or(o, "starts", "design.optimizer", d.optimizer.starts);
    d.optimizer.max_iterations = int_or(o, "max_iterations", "design.optimizer", d.optimizer.max_iterations);
    d.optimizer.polish_evaluations = int_or(o, "polish_evaluations", "design.optimizer", d.optimizer.polish_evaluations);
    d.optimizer.tolerance = number_or(o, "tolerance", "design.optimizer", d.optimizer.tolerance);
  }
}

void parse_verify(const json& j, VerifySpec& v) {
  require_keys(j, "verify", {"epsilons", "epsilon_min", "epsilon_max", "points", "fit_min", "fit_max"});
  const bool range = j.contains("epsilon_min") || j.contains("epsilon_max") || j.contains("points");
  if (j.contains("epsilons")) {
    if (range) throw ValidationError("verify takes either epsilons or epsilon_min/epsilon_max/points");
    v.epsilons = number_list(j.at("epsilons"), "verify.epsilons");
  } else if (range) {
    const double lo = number_or(j, "epsilon_min", "verify", 1e-4);
    const double hi = number_or(j, "epsilon_max", "verify", 1e-1);
    const int n = int_or(j, "points", "verify", 12);
    if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw ValidationError("verify range needs 0 < epsilon_min <= epsilon_max, points >= 1");
    v.epsilons = log_spaced(lo, hi, n);
  }
  v.fit_min = number_or(j, "fit_min", "verify", v.fit_min);
  v.fit_max = number_or(j, "fit_max", "verify", v.fit_max);
  if (v.epsilons.empty()) throw ValidationError("verify.epsilons is empty");
  for (double e : v.epsilons)
    if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError("verify.epsilons must be positive");
  if (!(v.fit_min < v.fit_max)) throw ValidationError("verify.fit_min must be below fit_max");
}

}  // namespace

TimeGrid GridSpec::make(const IsingModel& model, const Pulse& pulse) const {
  if (steps) return TimeGrid(duration(pulse), *steps);
  return model.grid_for(pulse, max_step_product);
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  const json j = parse_json(text, "config");
  require_keys(j, "config", {"model", "pulse", "grid", "design", "verify", "trace", "output_dir", "seed", "threads"});
  RunConfig c;
  c.source_text = text;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    require_keys(m, "model", {"E1", "E2", "noise"});
    c.model.e1 = number_or(m, "E1", "model", c.model.e1);
    c.model.e2 = number_or(m, "E2", "model", c.model.e2);
    c.model.noise = PauliString::parse(string_or(m, "noise", "model", "IZ"));
    c.model.noise_operator();
  }
  if (c.model.e1 == 0.0 && c.model.e2 == 0.0) throw ValidationError("model needs E1 and E2 not both zero");
  if (j.contains("pulse")) c.pulse = pulse_from(j.at("pulse"), base_dir, &c.zero_duration);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    require_keys(g, "grid", {"steps", "max_step_product"});
    if (g.contains("steps") && g.contains("max_step_product")) throw ValidationError("grid takes steps or max_step_product, not both");
    if (g.contains("steps")) {
      c.grid.steps = int_or(g, "steps", "grid", 0);
      if (*c.grid.steps < 2) throw ValidationError("grid.steps must be >= 2");
    }
    c.grid.max_step_product = number_or(g, "max_step_product", "grid", c.grid.max_step_product);
    if (!(c.grid.max_step_product > 0.0)) throw ValidationError("grid.max_step_product must be positive");
  }
  if (j.contains("design")) parse_design(j.at("design"), c);
  if (j.contains("verify")) parse_verify(j.at("verify"), c.verify);
  if (j.contains("trace")) {
    const auto& t = j.at("trace");
    require_keys(t, "trace", {"projections", "axes"});
    if (t.contains("axes")) {
      const std::string axes = string_or(t, "axes", "trace", "basis");
      if (axes != "basis" && axes != "frenet") throw ValidationError("trace.axes must be basis or frenet");
      c.trace.frenet_axes = axes == "frenet";
    }
    if (t.contains("projections")) {
      if (!t.at("projections").is_array()) throw ValidationError("trace.projections must be an array of index triples");
      c.trace.projections.clear();
      for (const auto& p : t.at("projections")) {
        if (!p.is_array() || p.size() != 3) throw ValidationError("trace.projections entries must have three indices");
        std::array<int, 3> a{};
        for (std::size_t i = 0; i < 3; ++i) {
          if (!p[i].is_number_integer()) throw ValidationError("trace.projections indices must be integers");
          a[i] = p[i].get<int>();
        }
        c.trace.projections.push_back(a);
      }
    }
  }
  c.output_dir = string_or(j, "output_dir", "config", "");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ValidationError("seed must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.threads = int_or(j, "threads", "config", 1);
  if (c.threads < 1) throw ValidationError("threads must be >= 1");
  c.design.model = c.model;
  c.design.epsilons = c.verify.epsilons;
  c.design.fit_min = c.verify.fit_min;
  c.design.fit_max = c.verify.fit_max;
  c.design.optimizer.seed = c.seed;
  if (j.contains("design")) c.design.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

Pulse parse_pulse_json(const std::string& text, const std::filesystem::path& base_dir) {
  const json j = parse_json(text, "pulse file");
  if (j.is_object() && j.contains("pulse")) return pulse_from(j.at("pulse"), base_dir, nullptr);
  return pulse_from(j, base_dir, nullptr);
}

std::string pulse_to_json(const Pulse& pulse, int indent) {
  json j;
  if (const auto* s = std::get_if<SmoothPulse>(&pulse)) {
    j["type"] = "smooth";
    j["c0"] = s->c0;
    j["terms"] = json::array();
    for (const auto& t : s->terms) j["terms"].push_back({{"c", t.c}, {"a", t.a}, {"phi", t.phi}});
    j["period"] = s->period;
    j["n_sym"] = s->n_sym;
  } else if (const auto* q = std::get_if<SquarePulseSequence>(&pulse)) {
    j["type"] = "square";
    j["segments"] = json::array();
    for (const auto& seg : q->segments) j["segments"].push_back({{"omega", seg.omega}, {"duration", seg.duration}});
    j["n_sym"] = q->n_sym;
  } else {
    const auto& w = std::get<WaveformPulse>(pulse);
    j["type"] = "waveform";
    j["times"] = w.times;
    j["omegas"] = w.omegas;
  }
  return j.dump(indent);
}

WaveformPulse read_waveform_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read waveform file " + path.string());
  WaveformPulse w;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string a, b, extra;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || std::getline(ss, extra, ','))
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected two columns t,omega");
    try {
      std::size_t ia = 0, ib = 0;
      const double t = std::stod(a, &ia);
      const double o = std::stod(b, &ib);
      if (a.find_first_not_of(" \t", ia) != std::string::npos || b.find_first_not_of(" \t", ib) != std::string::npos)
        throw std::invalid_argument("trailing characters");
      if (!std::isfinite(t) || !std::isfinite(o)) throw std::invalid_argument("not finite");
      w.times.push_back(t);
      w.omegas.push_back(o);
    } catch (const std::exception&) {
      if (!header_seen && w.times.empty()) {
        header_seen = true;
        continue;
      }
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  validate(Pulse(w));
  return w;
}

Pulse load_pulse_file(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_waveform_csv(path);
  return parse_pulse_json(read_file(path), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

std::filesystem::path resolve_output_dir(const RunConfig& config, const RunOptions& options) {
  if (options.out) return *options.out;
  if (const char* env = std::getenv("DCGEOM_OUTPUT_DIR"); env && *env) return env;
  if (!config.output_dir.empty()) return config.output_dir;
  return "dcgeom_out";
}

}  // namespace dcgeom::cli
