// Copyright 2026 The qvlasov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file config.hpp
 * @brief Flat `key = value` experiment configuration.
 *
 * Blank lines and `#` comments are ignored. Unknown or repeated keys are
 * errors, so a typo can never silently fall back to a default.
 */

#pragma once

#include "qvlasov/error.hpp"
#include "qvlasov/io.hpp"
#include "qvlasov/pipeline.hpp"
#include "qvlasov/rational.hpp"

#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qvlasov {

inline const std::set<std::string>& known_experiments() {
  static const std::set<std::string> names{"free-stream",     "jeans",
                                           "landau",          "postselect-prob",
                                           "tomography-bench", "gatecount-bench"};
  return names;
}

enum class FitUnit { cycles, inverse_gamma };

struct ExperimentConfig {
  std::string experiment = "jeans";

  // grid and physics
  unsigned n_x = 6;
  unsigned n_v = 6;
  Rational V{1};
  std::optional<double> G;  ///< derived from k_over_kJ when absent
  double rho_ref = 1.0;
  double sigma = 0.11;
  double A = 0.1;
  long long mode_index = 2;
  double k_over_kJ = 0.5;

  // run length: `steps` wins over `cycles`; cycles_from_fit runs to the end
  // of the fit window
  std::int64_t cycles = 3;
  bool cycles_from_fit = false;
  std::optional<std::int64_t> steps;

  // algorithm
  std::size_t S = 8;
  ExtractionMode mode = ExtractionMode::exact;
  std::uint64_t shots = 1000000;
  std::uint64_t rng_seed = 1;
  EpochPolicy policy = EpochPolicy::restart;
  bool strict_wrap = true;
  double wrap_threshold = 1e-12;
  bool compare_oracle = true;
  bool write_schedule = false;

  // growth-rate fit window
  FitUnit fit_unit = FitUnit::cycles;
  double fit_start = 0.5;
  double fit_end = 2.0;

  // free-stream box, as fractions of the x and v index ranges
  double box_x_lo = 0.375;
  double box_x_hi = 0.625;
  double box_v_lo = 0.25;
  double box_v_hi = 0.75;

  // tomography-bench
  unsigned tomo_qubits = 3;
  unsigned tomo_trials = 100;
  std::vector<std::uint64_t> tomo_shots{1000, 10000, 100000, 1000000};

  // gatecount-bench
  unsigned bench_max_qubits = 8;

  std::string output_dir = "out";
};

namespace detail {

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::int64_t parse_int64(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size()) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

inline std::uint64_t parse_uint64(const std::string& key, const std::string& v) {
  const auto x = parse_int64(key, v);
  if (x < 0) throw ConfigError("key '" + key + "' must be non-negative");
  return static_cast<std::uint64_t>(x);
}

inline double parse_real(const std::string& key, const std::string& v) {
  try {
    return io::parse_double(v);
  } catch (const std::invalid_argument&) {
    throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "' expects true/false, got '" + v + "'");
}

struct KeySpec {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

inline const std::map<std::string, KeySpec>& config_keys() {
  using C = ExperimentConfig;
  using S = const std::string&;
  auto real = [](double C::*field) {
    return KeySpec{[field](C& c, S k, S v) { c.*field = parse_real(k, v); },
                   [field](const C& c) { return io::fmt(c.*field); }};
  };
  auto uns = [](unsigned C::*field) {
    return KeySpec{[field](C& c, S k, S v) { c.*field = static_cast<unsigned>(parse_uint64(k, v)); },
                   [field](const C& c) { return std::to_string(c.*field); }};
  };
  auto u64 = [](std::uint64_t C::*field) {
    return KeySpec{[field](C& c, S k, S v) { c.*field = parse_uint64(k, v); },
                   [field](const C& c) { return std::to_string(c.*field); }};
  };
  auto flag = [](bool C::*field) {
    return KeySpec{[field](C& c, S k, S v) { c.*field = parse_bool(k, v); },
                   [field](const C& c) { return std::string(c.*field ? "true" : "false"); }};
  };

  static const std::map<std::string, KeySpec> keys{
      {"experiment",
       {[](C& c, S, S v) {
          if (!known_experiments().count(v)) throw ConfigError("unknown experiment '" + v + "'");
          c.experiment = v;
        },
        [](const C& c) { return c.experiment; }}},
      {"n_x", uns(&C::n_x)},
      {"n_v", uns(&C::n_v)},
      {"V",
       {[](C& c, S k, S v) {
          try {
            c.V = parse_rational(v);
          } catch (const std::invalid_argument&) {
            throw ConfigError("key '" + k + "' expects a rational, got '" + v + "'");
          }
        },
        [](const C& c) { return to_string(c.V); }}},
      {"G",
       {[](C& c, S k, S v) {
          if (v == "auto") c.G.reset();
          else c.G = parse_real(k, v);
        },
        [](const C& c) { return c.G ? io::fmt(*c.G) : std::string("auto"); }}},
      {"rho_ref", real(&C::rho_ref)},
      {"sigma", real(&C::sigma)},
      {"A", real(&C::A)},
      {"mode_index",
       {[](C& c, S k, S v) { c.mode_index = parse_int64(k, v); },
        [](const C& c) { return std::to_string(c.mode_index); }}},
      {"k_over_kJ", real(&C::k_over_kJ)},
      {"cycles",
       {[](C& c, S k, S v) {
          if (v == "fit") {
            c.cycles_from_fit = true;
          } else {
            c.cycles = parse_int64(k, v);
            c.cycles_from_fit = false;
          }
        },
        [](const C& c) { return c.cycles_from_fit ? std::string("fit") : std::to_string(c.cycles); }}},
      {"steps",
       {[](C& c, S k, S v) {
          if (v == "auto") c.steps.reset();
          else c.steps = parse_int64(k, v);
        },
        [](const C& c) { return c.steps ? std::to_string(*c.steps) : std::string("auto"); }}},
      {"S",
       {[](C& c, S k, S v) { c.S = static_cast<std::size_t>(parse_uint64(k, v)); },
        [](const C& c) { return std::to_string(c.S); }}},
      {"mode",
       {[](C& c, S, S v) {
          if (v == "exact") c.mode = ExtractionMode::exact;
          else if (v == "shots") c.mode = ExtractionMode::shots;
          else throw ConfigError("mode must be exact or shots, got '" + v + "'");
        },
        [](const C& c) { return std::string(c.mode == ExtractionMode::exact ? "exact" : "shots"); }}},
      {"shots", u64(&C::shots)},
      {"rng_seed", u64(&C::rng_seed)},
      {"epoch_policy",
       {[](C& c, S, S v) {
          if (v == "restart") c.policy = EpochPolicy::restart;
          else if (v == "continue") c.policy = EpochPolicy::continue_run;
          else throw ConfigError("epoch_policy must be restart or continue, got '" + v + "'");
        },
        [](const C& c) {
          return std::string(c.policy == EpochPolicy::restart ? "restart" : "continue");
        }}},
      {"strict_wrap", flag(&C::strict_wrap)},
      {"wrap_threshold", real(&C::wrap_threshold)},
      {"compare_oracle", flag(&C::compare_oracle)},
      {"write_schedule", flag(&C::write_schedule)},
      {"fit_unit",
       {[](C& c, S, S v) {
          if (v == "cycles") c.fit_unit = FitUnit::cycles;
          else if (v == "inverse_gamma") c.fit_unit = FitUnit::inverse_gamma;
          else throw ConfigError("fit_unit must be cycles or inverse_gamma, got '" + v + "'");
        },
        [](const C& c) {
          return std::string(c.fit_unit == FitUnit::cycles ? "cycles" : "inverse_gamma");
        }}},
      {"fit_start", real(&C::fit_start)},
      {"fit_end", real(&C::fit_end)},
      {"box_x_lo", real(&C::box_x_lo)},
      {"box_x_hi", real(&C::box_x_hi)},
      {"box_v_lo", real(&C::box_v_lo)},
      {"box_v_hi", real(&C::box_v_hi)},
      {"tomo_qubits", uns(&C::tomo_qubits)},
      {"tomo_trials", uns(&C::tomo_trials)},
      {"tomo_shots",
       {[](C& c, S k, S v) {
          c.tomo_shots.clear();
          for (const auto& item : io::split(v, ',')) c.tomo_shots.push_back(parse_uint64(k, trim(item)));
        },
        [](const C& c) {
          std::string out;
          for (std::size_t i = 0; i < c.tomo_shots.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(c.tomo_shots[i]);
          }
          return out;
        }}},
      {"bench_max_qubits", uns(&C::bench_max_qubits)},
      {"output_dir",
       {[](C& c, S, S v) { c.output_dir = v; }, [](const C& c) { return c.output_dir; }}},
  };
  return keys;
}

}  // namespace detail

/// Checks ranges that do not depend on which experiment runs.
inline void validate(const ExperimentConfig& c) {
  if (c.n_x < 2) throw ConfigError("n_x must be >= 2");
  if (c.n_v < 1) throw ConfigError("n_v must be >= 1");
  if (c.n_x + c.n_v > 24) throw ConfigError("n_x + n_v must be <= 24");
  if (c.V <= 0) throw ConfigError("V must be positive");
  if (c.G && !(*c.G >= 0.0)) throw ConfigError("G must be >= 0");
  if (!(c.rho_ref > 0.0)) throw ConfigError("rho_ref must be positive");
  if (!(c.sigma > 0.0)) throw ConfigError("sigma must be positive");
  if (c.A < 0.0 || c.A >= 1.0) throw ConfigError("A must lie in [0, 1)");
  if (!(c.k_over_kJ > 0.0) || c.k_over_kJ == 1.0) {
    throw ConfigError("k_over_kJ must be positive and different from 1");
  }
  if (c.S < 2 || (c.S & (c.S - 1)) != 0 || c.S > (std::size_t{1} << c.n_x)) {
    throw ConfigError("S must be a power of two in [2, N_x]");
  }
  if (!c.cycles_from_fit && c.cycles < 1) throw ConfigError("cycles must be >= 1");
  if (c.steps && *c.steps < 0) throw ConfigError("steps must be >= 0");
  if (c.shots == 0) throw ConfigError("shots must be >= 1");
  if (!(c.fit_start < c.fit_end)) throw ConfigError("fit_start must be < fit_end");
  if (!(c.wrap_threshold >= 0.0)) throw ConfigError("wrap_threshold must be >= 0");
  if (c.tomo_qubits < 1 || c.tomo_qubits > 8) throw ConfigError("tomo_qubits must be in 1..8");
  if (c.tomo_trials < 1) throw ConfigError("tomo_trials must be >= 1");
  if (c.tomo_shots.empty()) throw ConfigError("tomo_shots must list at least one value");
  for (auto s : c.tomo_shots) {
    if (s == 0) throw ConfigError("tomo_shots values must be >= 1");
  }
  if (c.bench_max_qubits < 1 || c.bench_max_qubits > 12) {
    throw ConfigError("bench_max_qubits must be in 1..12");
  }
  auto fraction_pair = [](double lo, double hi, const char* name) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
      throw ConfigError(std::string(name) + " box fractions must satisfy 0 <= lo < hi <= 1");
    }
  };
  fraction_pair(c.box_x_lo, c.box_x_hi, "x");
  fraction_pair(c.box_v_lo, c.box_v_hi, "v");
}

inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const auto& keys = detail::config_keys();
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(number) + ": empty value for '" + key + "'");
    }
    it->second.set(cfg, key, value);
  }
  if (!seen.count("experiment")) throw ConfigError("config must set 'experiment'");
  validate(cfg);
  return cfg;
}

/// Canonical text form: every key, sorted, one per line.
inline std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, spec] : detail::config_keys()) {
    out += key + " = " + spec.get(cfg) + "\n";
  }
  return out;
}

}  // namespace qvlasov
