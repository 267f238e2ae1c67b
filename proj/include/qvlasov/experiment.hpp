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
 * @file experiment.hpp
 * @brief End-to-end experiment runs and their artifact bundles.
 *
 * A run collects every artifact in memory and the caller flushes the bundle
 * to disk. Rows are appended while the run progresses, so when a step fails
 * the caller can still flush everything produced before the failure.
 *
 * Phase-space experiments (free-stream, jeans, landau, postselect-prob) run
 * the quantum pipeline and, in lockstep, the classical oracle. In exact mode
 * the two must agree cell by cell to 1e-10 and on the extracted A_m to 1e-8;
 * a mismatch is a PhysicsError.
 */

#pragma once

#include "json.hpp"

#include "qvlasov/analysis.hpp"
#include "qvlasov/circuits.hpp"
#include "qvlasov/config.hpp"
#include "qvlasov/error.hpp"
#include "qvlasov/grid.hpp"
#include "qvlasov/io.hpp"
#include "qvlasov/linear_theory.hpp"
#include "qvlasov/oracle.hpp"
#include "qvlasov/pipeline.hpp"
#include "qvlasov/schedule.hpp"
#include "qvlasov/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace qvlasov {

using Json = nlohmann::json;

/// Cell-wise agreement required between M * amplitude and the oracle.
inline constexpr double kStateTolerance = 1e-10;
/// Agreement required between extracted and oracle A_m.
inline constexpr double kAmplitudeTolerance = 1e-8;

class ArtifactBundle {
 public:
  void put(const std::string& path, std::string content) { files_[path] = std::move(content); }
  void append(const std::string& path, const std::string& content) { files_[path] += content; }
  bool has(const std::string& path) const { return files_.count(path) != 0; }
  const std::string& get(const std::string& path) const { return files_.at(path); }
  const std::map<std::string, std::string>& files() const { return files_; }

  void flush(const std::filesystem::path& dir) const {
    for (const auto& [path, content] : files_) {
      const auto target = dir / path;
      std::filesystem::create_directories(target.parent_path());
      io::write_file(target.string(), content);
    }
  }

 private:
  std::map<std::string, std::string> files_;
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json to_json(const GateCounter::Tally& t) {
  Json j;
  j["X"] = t.count(GateKind::X);
  j["H"] = t.count(GateKind::H);
  j["Sdg"] = t.count(GateKind::Sdg);
  j["CPhase"] = t.count(GateKind::CPhase);
  j["Swap"] = t.count(GateKind::Swap);
  j["mcx_by_controls"] = t.mcx_by_controls;
  j["mcx_total"] = t.mcx_total();
  j["mcx_weighted"] = t.mcx_weighted();
  std::uint64_t gates = t.mcx_total();
  for (auto c : t.simple) gates += c;
  j["gates_total"] = gates;
  j["increment_circuits"] = t.increment_circuits;
  j["increment_bound_violations"] = t.increment_bound_violations;
  return j;
}

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// Unit box in the fractional x and v ranges of the config, zero elsewhere.
inline DistributionFunction box_distribution(const ExperimentConfig& cfg, const GridConfig& grid) {
  auto index = [](double fraction, std::size_t n) {
    return static_cast<std::size_t>(std::lround(fraction * static_cast<double>(n)));
  };
  const std::size_t j0 = index(cfg.box_x_lo, grid.N_x()), j1 = index(cfg.box_x_hi, grid.N_x());
  const std::size_t k0 = index(cfg.box_v_lo, grid.N_v()), k1 = index(cfg.box_v_hi, grid.N_v());
  if (j0 >= j1 || k0 >= k1) throw ConfigError("the box covers no cells on this grid");
  DistributionFunction f(grid);
  for (std::size_t k = k0; k < k1; ++k) {
    for (std::size_t j = j0; j < j1; ++j) f(k, j) = 1.0;
  }
  return f;
}

inline double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

struct SeriesStats {
  double first = 0.0;
  double min = 0.0;
  double max = 0.0;

  void add(double x, bool is_first) {
    if (is_first) {
      first = min = max = x;
    } else {
      min = std::min(min, x);
      max = std::max(max, x);
    }
  }
  /// Largest factor by which the series strays from its first value.
  double max_factor() const {
    if (first <= 0.0) return std::numeric_limits<double>::infinity();
    return std::max(max / first, first / min);
  }
  Json to_json() const {
    return Json{{"initial", first}, {"min", min}, {"max", max}, {"max_factor_from_initial", max_factor()}};
  }
};

inline const std::vector<double>& rate_table_grid() {
  static const std::vector<double> grid{0.3, 0.5, 0.8, 1.2, 1.5, 2.0};
  return grid;
}

}  // namespace detail

/// Scaling report for the gate counts of a finished run.
///
/// Each section is compared against its asymptotic form per epoch T:
/// configuration advection against N_v n_x, velocity advection against
/// (columns shifted) n_v, extraction against n_v + n_x^2 total gates. The
/// constant c is the median of count / form over epochs with a non-zero
/// form, and an epoch is flagged when it is more than 2x away from c * form.
inline Json report_complexity(const Json& gatecounts, const ExperimentConfig& cfg) {
  const double nx = cfg.n_x;
  const double nv = cfg.n_v;
  const double Nv = std::ldexp(1.0, static_cast<int>(cfg.n_v));
  const Json& epochs = gatecounts.at("epochs");

  struct Section {
    const char* name;
    const char* form;
    const char* metric;
  };
  const Section sections[] = {{"configuration", "N_v * n_x", "mcx_total"},
                              {"velocity", "column_shifts * n_v", "mcx_total"},
                              {"extraction", "n_v + n_x^2", "gates_total"}};

  Json report;
  bool all_within = true;
  for (const auto& sec : sections) {
    std::vector<double> count, form;
    std::vector<std::int64_t> steps;
    for (const auto& e : epochs) {
      steps.push_back(e.at("step").get<std::int64_t>());
      count.push_back(e.at(sec.name).at(sec.metric).get<double>());
      const std::string name = sec.name;
      if (name == "configuration") {
        form.push_back(Nv * nx);
      } else if (name == "velocity") {
        form.push_back(e.at("column_shifts").get<double>() * nv);
      } else {
        form.push_back(nv + nx * nx);
      }
    }
    std::vector<double> ratios;
    for (std::size_t i = 0; i < count.size(); ++i) {
      if (form[i] > 0.0) ratios.push_back(count[i] / form[i]);
    }
    const double c = detail::median(ratios);
    Json flagged = Json::array();
    double worst = 1.0;
    double total = 0.0;
    for (std::size_t i = 0; i < count.size(); ++i) {
      total += count[i];
      if (form[i] == 0.0) {
        if (count[i] > 0.0) flagged.push_back(steps[i]);
        continue;
      }
      const double predicted = c * form[i];
      const double factor = predicted > 0.0 && count[i] > 0.0
                                ? std::max(count[i] / predicted, predicted / count[i])
                                : (count[i] == predicted ? 1.0 : std::numeric_limits<double>::infinity());
      worst = std::max(worst, factor);
      if (factor > 2.0) flagged.push_back(steps[i]);
    }
    const bool within = flagged.empty();
    all_within = all_within && within;
    report["sections"][sec.name] = Json{{"form", sec.form},
                                        {"metric", sec.metric},
                                        {"c_fit", ratios.empty() ? Json(nullptr) : Json(c)},
                                        {"epochs", count.size()},
                                        {"total", total},
                                        {"max_factor_from_fit", ratios.empty() ? Json(nullptr) : Json(worst)},
                                        {"flagged_steps", flagged},
                                        {"within_2x", within}};
  }
  report["all_within_2x"] = all_within;

  const Json& total = gatecounts.at("total");
  const auto violations = total.at("increment_bound_violations").get<std::uint64_t>();
  report["increment_bound"] = Json{{"circuits", total.at("increment_circuits")},
                                   {"violations", violations},
                                   {"satisfied", violations == 0}};
  report["velocity_shift_mcx"] = gatecounts.at("sections").contains("velocity")
                                     ? gatecounts["sections"]["velocity"]["mcx_total"]
                                     : Json(0);

  const auto N_v = std::size_t{1} << cfg.n_v;
  const double per_T = static_cast<double>(events_per_cycle(N_v)) / static_cast<double>(N_v - 1);
  const double per_T_doubled =
      static_cast<double>(events_per_cycle(2 * N_v)) / static_cast<double>(2 * N_v - 1);
  report["schedule"] = Json{{"events_per_cycle", events_per_cycle(N_v)},
                            {"events_per_T", per_T},
                            {"events_per_T_at_double_N_v", per_T_doubled},
                            {"doubling_ratio", per_T_doubled / per_T}};
  return report;
}

namespace detail {

inline void run_phase_space(const ExperimentConfig& cfg, ArtifactBundle& out) {
  const bool gravity = cfg.experiment != "free-stream";
  GridConfig grid(cfg.n_x, cfg.n_v, cfg.V);
  const EquilibriumSpec eq{cfg.rho_ref, cfg.sigma, cfg.A, cfg.mode_index};

  std::optional<DispersionSolution> theory;
  double G = 0.0;
  if (gravity) {
    G = cfg.G ? *cfg.G
              : gravitational_constant_for(cfg.k_over_kJ, eq.wavenumber(grid), cfg.sigma, cfg.rho_ref);
    grid = grid.with_G(G);
    if (G > 0.0) {
      const double kr = eq.wavenumber(grid) / jeans_wavenumber(cfg.rho_ref, cfg.sigma, G);
      theory = solve_dispersion(kr, cfg.rho_ref, G);
    }
  }

  const double T = to_double(grid.characteristic_time());
  const double cycle = to_double(grid.cycle_time());
  double fit_lo = cfg.fit_start * cycle;
  double fit_hi = cfg.fit_end * cycle;
  if (cfg.fit_unit == FitUnit::inverse_gamma) {
    if (!theory) throw ConfigError("fit_unit = inverse_gamma needs a gravitating run");
    fit_lo = cfg.fit_start / theory->gamma;
    fit_hi = cfg.fit_end / theory->gamma;
  }
  const auto L = static_cast<std::int64_t>(grid.N_v()) - 1;
  std::int64_t steps = cfg.cycles * L;
  if (cfg.steps) {
    steps = *cfg.steps;
  } else if (cfg.cycles_from_fit) {
    steps = static_cast<std::int64_t>(std::ceil(fit_hi / T - 1e-9));
  }

  const DistributionFunction f0 = gravity ? build_initial_condition(eq, grid) : box_distribution(cfg, grid);
  const Normalization M = normalization_of(f0);
  const EventSchedule schedule = build_schedule_steps(grid, steps);
  if (cfg.write_schedule) out.put("schedule.csv", to_csv(schedule));

  PipelineOptions options;
  options.S = cfg.S;
  options.self_gravity = gravity;
  options.policy = cfg.policy;
  options.mode = cfg.mode;
  options.shots = cfg.shots;
  options.rng_seed = cfg.rng_seed;
  options.rho_ref = cfg.rho_ref;
  options.tracked_modes = {cfg.mode_index};
  options.advection.strict_wrap = cfg.strict_wrap;
  options.advection.wrap_threshold = cfg.wrap_threshold;

  OracleConfig ocfg;
  ocfg.gravity = gravity ? GravityMode::self : GravityMode::none;
  ocfg.window = cfg.S;
  ocfg.rho_ref = cfg.rho_ref;
  ocfg.tracked_modes = {cfg.mode_index};
  ocfg.strict_wrap = cfg.strict_wrap;
  ocfg.wrap_threshold = cfg.wrap_threshold;
  ocfg.keep_distributions = false;
  std::optional<OracleStepper> oracle;
  if (cfg.compare_oracle) oracle.emplace(f0, schedule, ocfg);
  const bool check = cfg.compare_oracle && cfg.mode == ExtractionMode::exact;

  std::set<std::int64_t> snapshot_steps;
  for (std::int64_t l = 0; l <= steps; l += L) snapshot_steps.insert(l);
  snapshot_steps.insert(steps);

  // Free streaming is a pure shear: row k moves by its accumulated event count.
  const QuantumState initial_state = encode_distribution(f0);
  std::vector<Complex> sorted_initial(initial_state.amplitudes().begin(),
                                      initial_state.amplitudes().end());
  auto by_value = [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  std::sort(sorted_initial.begin(), sorted_initial.end(), by_value);
  std::vector<long long> row_shift(grid.N_v(), 0);
  double shear_error = 0.0;
  bool multiset_exact = true;

  std::map<std::int64_t, std::map<long long, Complex>> oracle_A;
  double max_state_diff = 0.0;
  double max_amplitude_diff = 0.0;

  auto observe = [&](std::int64_t l, const QuantumState& state) {
    const auto scaled = scaled_amplitudes(state, grid, M.M);
    if (oracle) {
      const auto snap = oracle->advance();
      oracle_A[l] = snap.A;
      if (check) {
        const double diff = max_abs_difference(scaled, oracle->f().values());
        max_state_diff = std::max(max_state_diff, diff);
        if (diff > kStateTolerance) {
          throw PhysicsError("quantum and oracle distributions differ by " + io::fmt(diff) +
                             " at step " + std::to_string(l));
        }
      }
      if (snapshot_steps.count(l)) {
        out.put("snapshots/oracle_step_" + std::to_string(l) + ".csv", to_csv(oracle->f()));
      }
    }
    if (snapshot_steps.count(l)) {
      out.put("snapshots/quantum_step_" + std::to_string(l) + ".csv",
              to_csv(DistributionFunction(grid, scaled)));
    }
    if (!gravity) {
      const auto [first, last] = schedule.window(l - 1, l);
      for (std::size_t i = first; i < last; ++i) {
        for (std::size_t k : schedule[i].rows) row_shift[k] += grid.velocity(k) > 0 ? 1 : -1;
      }
      const auto N = static_cast<long long>(grid.N_x());
      for (std::size_t k = 0; k < grid.N_v(); ++k) {
        for (std::size_t j = 0; j < grid.N_x(); ++j) {
          const auto src = static_cast<std::size_t>(((static_cast<long long>(j) - row_shift[k]) % N + N) % N);
          // Increments only move amplitudes, so the comparison is exact.
          const Complex moved = state[j * grid.N_v() + k];
          const Complex original = initial_state[src * grid.N_v() + k];
          shear_error = std::max(shear_error, std::abs(moved - original) * M.M);
        }
      }
      std::vector<Complex> now(state.amplitudes().begin(), state.amplitudes().end());
      std::sort(now.begin(), now.end(), by_value);
      multiset_exact = multiset_exact && now == sorted_initial;
    }
  };

  out.put("modes.csv", "step,cycle,m,re,im,abs\n");
  out.put("amplitudes.csv", "step,cycle,time,m,abs_A,abs_A_window,abs_A_oracle\n");
  out.put("postselection.csv", "step,cycle,p_v,p_x\n");
  std::vector<double> times, abs_A;
  SeriesStats p_v, p_x;
  Json epochs = Json::array();
  std::uint64_t unresolved = 0;
  double max_force = 0.0;

  auto on_record = [&](const StepRecord& rec) {
    const double c = static_cast<double>(rec.step) / static_cast<double>(L);
    const double t = to_double(rec.time);
    const std::string prefix = std::to_string(rec.step) + "," + io::fmt(c) + ",";
    std::string rows = modes_csv_rows(c, rec.modes);
    std::string prefixed;
    for (std::size_t pos = 0; pos < rows.size();) {
      const auto end = rows.find('\n', pos);
      prefixed += std::to_string(rec.step) + "," + rows.substr(pos, end - pos + 1);
      pos = end + 1;
    }
    out.append("modes.csv", prefixed);

    const long long m = cfg.mode_index;
    const double a = std::abs(rec.A.at(m));
    std::string line = prefix + io::fmt(t) + "," + std::to_string(m) + "," + io::fmt(a) + ",";
    if (auto it = rec.A_window.find(m); it != rec.A_window.end()) line += io::fmt(std::abs(it->second));
    line += ",";
    if (auto it = oracle_A.find(rec.step); it != oracle_A.end()) {
      line += io::fmt(std::abs(it->second.at(m)));
      if (check && rec.A_window.count(m)) {
        const double diff = std::abs(rec.A_window.at(m) - it->second.at(m));
        max_amplitude_diff = std::max(max_amplitude_diff, diff);
        if (diff > kAmplitudeTolerance) {
          throw PhysicsError("extracted and oracle A_" + std::to_string(m) + " differ by " +
                             io::fmt(diff) + " at step " + std::to_string(rec.step));
        }
      }
    }
    out.append("amplitudes.csv", line + "\n");
    out.append("postselection.csv",
               prefix + io::fmt(rec.modes.p_v) + "," + io::fmt(rec.modes.p_x) + "\n");

    times.push_back(t);
    abs_A.push_back(a);
    p_v.add(rec.modes.p_v, rec.step == 0);
    p_x.add(rec.modes.p_x, rec.step == 0);
    if (!rec.resolution.resolved) ++unresolved;
    max_force = std::max(max_force, rec.resolution.max_force);
    epochs.push_back(Json{{"step", rec.step},
                          {"velocity", to_json(rec.cost.velocity)},
                          {"configuration", to_json(rec.cost.configuration)},
                          {"extraction", to_json(rec.cost.extraction)},
                          {"row_shifts", rec.cost.row_shifts},
                          {"column_shifts", rec.cost.column_shifts}});
  };

  const PipelineResult result = run_quantum_pipeline(f0, schedule, options, steps, observe, on_record);

  Json gatecounts;
  for (const auto& [name, tally] : result.counter.sections()) {
    if (!name.empty()) gatecounts["sections"][name] = to_json(tally);
  }
  if (!gatecounts.contains("sections")) gatecounts["sections"] = Json::object();
  gatecounts["total"] = to_json(result.counter.total());
  gatecounts["epochs"] = epochs;
  gatecounts["epoch_policy"] = cfg.policy == EpochPolicy::restart ? "restart" : "continue";
  out.put("gatecounts.json", dump(gatecounts));
  const Json complexity = report_complexity(gatecounts, cfg);
  out.put("complexity.json", dump(complexity));

  Json summary;
  summary["experiment"] = cfg.experiment;
  summary["grid"] = Json{{"n_x", cfg.n_x},
                         {"n_v", cfg.n_v},
                         {"V", to_string(cfg.V)},
                         {"G", G},
                         {"T", T},
                         {"cycle_time", cycle}};
  summary["steps"] = steps;
  summary["S"] = cfg.S;
  summary["mode"] = cfg.mode == ExtractionMode::exact ? "exact" : "shots";
  summary["total_mass"] = f0.total_mass();
  summary["oracle"] = Json{{"compared", check},
                           {"max_state_difference", max_state_diff},
                           {"max_amplitude_difference", max_amplitude_diff}};
  summary["postselection"] = Json{{"p_v", p_v.to_json()}, {"p_x", p_x.to_json()}};
  summary["resolution"] = Json{{"max_force", max_force}, {"unresolved_steps", unresolved}};
  summary["increment_bound_satisfied"] = complexity["increment_bound"]["satisfied"];
  Json warnings = Json::array();
  if (gravity) {
    const double loss = maxwellian_mass_loss(eq, grid);
    summary["maxwellian_mass_loss"] = loss;
    if (loss > 0.01) warnings.push_back("Maxwellian truncation loses " + io::fmt(loss) + " of the mass");
  }
  if (unresolved > 0) {
    warnings.push_back(std::to_string(unresolved) +
                       " steps have N_v < V^2 / F_s (velocity grid does not resolve the force)");
  }
  summary["warnings"] = warnings;
  if (!gravity) {
    summary["shear"] = Json{{"max_error", shear_error}, {"multiset_exact", multiset_exact}};
  }

  if (theory) {
    std::vector<DispersionSolution> table;
    for (double kr : rate_table_grid()) table.push_back(solve_dispersion(kr, cfg.rho_ref, G));
    table.push_back(*theory);
    out.put("rates.csv", rate_table_csv(table));

    Json fit_json{{"t_lo", fit_lo}, {"t_hi", fit_hi}, {"gamma_theory", theory->gamma},
                  {"regime", to_string(theory->regime)}, {"k_over_kJ", theory->k_over_kJ}};
    std::string comparison =
        "experiment,n_x,n_v,S,k_over_kJ,regime,gamma_theory,gamma_fit,ratio,t_lo,t_hi,points\n";
    if (cfg.experiment != "postselect-prob") {
      const auto fit = fit_exponential_rate(times, abs_A, fit_lo, fit_hi);
      const double measured = theory->regime == Regime::growing ? fit.slope : -fit.slope;
      const double ratio = measured / theory->gamma;
      fit_json["gamma_fit"] = measured;
      fit_json["ratio"] = ratio;
      fit_json["points"] = fit.points;
      comparison += cfg.experiment + "," + std::to_string(cfg.n_x) + "," + std::to_string(cfg.n_v) +
                    "," + std::to_string(cfg.S) + "," + io::fmt(theory->k_over_kJ) + "," +
                    to_string(theory->regime) + "," + io::fmt(theory->gamma) + "," +
                    io::fmt(measured) + "," + io::fmt(ratio) + "," + io::fmt(fit_lo) + "," +
                    io::fmt(fit_hi) + "," + std::to_string(fit.points) + "\n";
      out.put("comparison.csv", comparison);
    }
    summary["linear_theory"] = fit_json;
  }
  out.put("summary.json", dump(summary));
}

inline void run_tomography_bench(const ExperimentConfig& cfg, ArtifactBundle& out) {
  const std::size_t d = std::size_t{1} << cfg.tomo_qubits;
  out.put("tomography.csv", "shots,trial,fidelity,error\n");
  std::map<std::uint64_t, double> error_sum;
  std::map<std::uint64_t, std::uint64_t> high_fidelity;
  for (unsigned trial = 0; trial < cfg.tomo_trials; ++trial) {
    std::mt19937_64 rng(mix_seed(cfg.rng_seed, trial));
    std::normal_distribution<double> normal;
    std::vector<Complex> psi(d);
    for (auto& a : psi) a = Complex(normal(rng), normal(rng));
    const QuantumState state = QuantumState::normalized(psi);
    for (std::size_t i = 0; i < cfg.tomo_shots.size(); ++i) {
      const auto shots = cfg.tomo_shots[i];
      const TomographyPlan plan{cfg.tomo_qubits, shots};
      const auto counts = collect(state, plan, rng());
      ReconstructionOptions ro;
      ro.restart_seed = rng();
      const auto est = reconstruct(counts, ro);
      const double F = fidelity(est.amplitudes, state.amplitudes());
      const double err = std::sqrt(std::max(0.0, 1.0 - F));
      error_sum[shots] += err;
      if (F >= 0.99) ++high_fidelity[shots];
      out.append("tomography.csv", std::to_string(shots) + "," + std::to_string(trial) + "," +
                                       io::fmt(F) + "," + io::fmt(err) + "\n");
    }
  }

  Json per_shots = Json::array();
  std::vector<double> log_shots, log_error;
  for (const auto& [shots, sum] : error_sum) {
    const double mean = sum / cfg.tomo_trials;
    const double frac = static_cast<double>(high_fidelity[shots]) / cfg.tomo_trials;
    per_shots.push_back(Json{{"shots", shots}, {"mean_error", mean}, {"fraction_fidelity_ge_0.99", frac}});
    if (mean > 0.0) {
      log_shots.push_back(std::log(static_cast<double>(shots)));
      log_error.push_back(std::log(mean));
    }
  }
  Json summary{{"experiment", cfg.experiment},
               {"qubits", cfg.tomo_qubits},
               {"dimension", d},
               {"trials", cfg.tomo_trials},
               {"per_shots", per_shots}};
  summary["error_slope"] = log_shots.size() >= 2 ? Json(fit_line(log_shots, log_error).slope) : Json(nullptr);
  out.put("summary.json", dump(summary));
}

inline void run_gatecount_bench(const ExperimentConfig& cfg, ArtifactBundle& out) {
  out.put("gatecount_bench.csv", "n,p,mcx,bound,permutation_ok\n");
  std::uint64_t circuits = 0, violations = 0, broken = 0;
  double worst_ratio = 0.0;
  for (unsigned n = 1; n <= cfg.bench_max_qubits; ++n) {
    const auto N = static_cast<long long>(1) << n;
    std::vector<Complex> base(static_cast<std::size_t>(N));
    for (long long i = 0; i < N; ++i) base[static_cast<std::size_t>(i)] = Complex(static_cast<double>(i + 1), 0.0);
    const QuantumState start = QuantumState::normalized(base);
    const RegisterSlice reg{"R", 0, n};
    for (long long p = -(N - 1); p <= N - 1; ++p) {
      if (p == 0) continue;
      QuantumState s = start;
      const auto mcx = apply_increment(s, reg, p);
      const auto bound = increment_mcx_bound(n, p);
      bool ok = true;
      for (long long i = 0; i < N; ++i) {
        const auto dest = static_cast<std::size_t>(((i + p) % N + N) % N);
        ok = ok && s[dest] == start[static_cast<std::size_t>(i)];
      }
      ++circuits;
      if (mcx > bound) ++violations;
      if (!ok) ++broken;
      worst_ratio = std::max(worst_ratio, static_cast<double>(mcx) / static_cast<double>(bound));
      out.append("gatecount_bench.csv", std::to_string(n) + "," + std::to_string(p) + "," +
                                            std::to_string(mcx) + "," + std::to_string(bound) + "," +
                                            (ok ? "true" : "false") + "\n");
    }
  }

  std::string scaling = "n_v,N_v,events_per_cycle,events_per_T,row_shifts_per_cycle,row_shifts_per_T\n";
  for (unsigned nv = 1; nv <= cfg.bench_max_qubits; ++nv) {
    const std::size_t N_v = std::size_t{1} << nv;
    const double L = static_cast<double>(N_v - 1);
    const auto events = events_per_cycle(N_v);
    const auto shifts = row_shifts_per_cycle(N_v);
    scaling += std::to_string(nv) + "," + std::to_string(N_v) + "," + std::to_string(events) + "," +
               io::fmt(static_cast<double>(events) / L) + "," + std::to_string(shifts) + "," +
               io::fmt(static_cast<double>(shifts) / L) + "\n";
  }
  out.put("schedule_scaling.csv", scaling);

  out.put("summary.json", dump(Json{{"experiment", cfg.experiment},
                                    {"max_qubits", cfg.bench_max_qubits},
                                    {"circuits", circuits},
                                    {"bound_violations", violations},
                                    {"permutation_failures", broken},
                                    {"max_mcx_over_bound", worst_ratio}}));
}

}  // namespace detail

/// Runs one experiment into `out`. Throws on any failure; whatever was
/// produced up to that point stays in the bundle.
inline void run_experiment(const ExperimentConfig& cfg, ArtifactBundle& out) {
  validate(cfg);
  out.put("config.txt", to_text(cfg));
  if (cfg.experiment == "tomography-bench") {
    detail::run_tomography_bench(cfg, out);
  } else if (cfg.experiment == "gatecount-bench") {
    detail::run_gatecount_bench(cfg, out);
  } else {
    detail::run_phase_space(cfg, out);
  }
}

/// Recomputes the complexity report of a run directory from its
/// config.txt and gatecounts.json.
inline Json report_run_directory(const std::filesystem::path& dir) {
  const auto cfg = parse_config(io::read_file((dir / "config.txt").string()));
  const auto gatecounts = Json::parse(io::read_file((dir / "gatecounts.json").string()));
  return report_complexity(gatecounts, cfg);
}

}  // namespace qvlasov
