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
 * @file pipeline.hpp
 * @brief The measurement loop of the algorithm: advect, extract S modes,
 *        refresh the force store, repeat once per characteristic time T.
 *
 * Force lag: the velocity step at l T uses the force extracted at (l-1) T,
 * and the step at t = 0 uses F = 0, because the force store is only filled
 * by an extraction.
 *
 * With EpochPolicy::restart every measurement l rebuilds |f0> and replays
 * all epochs 0..l with the stored forces, which is what a device has to do
 * because extraction destroys the state. EpochPolicy::continue_run keeps
 * one state alive and only advances it; since each epoch is deterministic
 * given the stored forces, both policies produce the same amplitudes and
 * differ only in cost.
 */

#pragma once

#include "qvlasov/advection.hpp"
#include "qvlasov/error.hpp"
#include "qvlasov/extraction.hpp"
#include "qvlasov/gravity.hpp"
#include "qvlasov/grid.hpp"
#include "qvlasov/modes.hpp"
#include "qvlasov/schedule.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace qvlasov {

enum class EpochPolicy { restart, continue_run };
enum class ExtractionMode { exact, shots };

struct PipelineOptions {
  std::size_t S = 8;
  bool self_gravity = true;
  EpochPolicy policy = EpochPolicy::restart;
  ExtractionMode mode = ExtractionMode::exact;
  std::uint64_t shots = 1000000;
  std::uint64_t rng_seed = 1;
  double rho_ref = 1.0;
  std::vector<long long> tracked_modes{2};
  AdvectionOptions advection;
};

/// Gate tallies of one epoch, i.e. the cost of advancing from (l-1)T to lT.
struct EpochCost {
  GateCounter::Tally velocity;
  GateCounter::Tally configuration;
  GateCounter::Tally extraction;
  std::uint64_t row_shifts = 0;     ///< configuration increments
  std::uint64_t column_shifts = 0;  ///< velocity increments
};

struct StepRecord {
  std::int64_t step = 0;
  Rational time;
  FourierDensity modes;
  ForceField force;                        ///< extracted at this step, used at the next
  std::vector<double> rho;                 ///< from the full exact state
  std::map<long long, Complex> A;          ///< from rho
  std::map<long long, Complex> A_window;   ///< from the extracted modes, when in range
  ResolutionCheck resolution;
  EpochCost cost;
};

struct PipelineResult {
  std::vector<StepRecord> steps;
  GateCounter counter;  ///< everything executed, including restart replays
};

/// Called with (step, state after the epoch) before extraction.
using StateObserver = std::function<void(std::int64_t, const QuantumState&)>;

/// Called with each finished record, so callers can stream results and keep
/// them if a later step fails.
using RecordObserver = std::function<void(const StepRecord&)>;

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t step) {
  // splitmix64 finalizer, so neighbouring steps get unrelated streams
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (step + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

inline PipelineResult run_quantum_pipeline(const DistributionFunction& f0,
                                           const EventSchedule& schedule,
                                           const PipelineOptions& options, std::int64_t steps,
                                           const StateObserver& observer = {},
                                           const RecordObserver& on_record = {}) {
  const auto& grid = schedule.grid();
  if (steps < 0 || steps > schedule.horizon_steps()) {
    throw std::out_of_range("pipeline steps exceed the schedule horizon");
  }
  const Normalization M = normalization_of(f0);
  const double total_mass = f0.total_mass();
  const QuantumState initial = encode_distribution(f0);

  PipelineResult result;
  std::vector<ForceField> forces;  // forces[l] extracted at step l
  const ForceField zero(grid.N_x());
  QuantumState state = initial;
  CflVelocityCounters D(grid.N_x());

  for (std::int64_t l = 0; l <= steps; ++l) {
    const bool fresh = l == 0 || options.policy == EpochPolicy::restart;
    if (fresh) {
      state = initial;
      D = CflVelocityCounters(grid.N_x());
      // Replay everything before the final epoch.
      if (l > 0) run_epoch(state, schedule, D, zero, -1, 0, options.advection);
      for (std::int64_t i = 1; i < l; ++i) {
        run_epoch(state, schedule, D, forces[static_cast<std::size_t>(i - 1)], i - 1, i,
                  options.advection);
      }
    }

    // The newest epoch runs on a fresh counter so its cost can be reported.
    GateCounter carried = std::move(state.counter());
    state.counter() = GateCounter{};
    const ForceField& F = l == 0 ? zero : forces[static_cast<std::size_t>(l - 1)];
    run_epoch(state, schedule, D, F, l - 1, l, options.advection);
    StepRecord rec;
    rec.step = l;
    rec.time = Rational(l) * grid.characteristic_time();
    rec.cost.velocity = state.counter().tally("velocity");
    rec.cost.configuration = state.counter().tally("configuration");
    rec.cost.column_shifts = rec.cost.velocity.increment_circuits;
    rec.cost.row_shifts = rec.cost.configuration.increment_circuits;
    carried.merge(state.counter());
    state.counter() = std::move(carried);

    if (observer) observer(l, state);

    GateCounter extraction;
    if (options.mode == ExtractionMode::exact) {
      rec.modes = extract_modes_exact(state, grid, options.S, M, &extraction);
    } else {
      rec.modes = extract_modes_shots(state, grid, options.S, total_mass, options.shots,
                                      detail::mix_seed(options.rng_seed, static_cast<std::uint64_t>(l)),
                                      &extraction);
    }
    rec.cost.extraction = extraction.tally("extraction");

    rec.force = options.self_gravity ? force_from_modes(rec.modes, grid) : zero;
    rec.resolution = check_resolution(grid, rec.force);
    forces.push_back(rec.force);

    rec.rho = density_of(DistributionFunction(grid, [&] {
      auto v = scaled_amplitudes(state, grid, M.M);
      for (double& x : v) x = std::max(x, 0.0);  // rounding can leave -1e-17
      return v;
    }()));
    rec.A = perturbation_amplitudes(rec.rho, options.rho_ref, options.tracked_modes);
    for (long long m : options.tracked_modes) {
      if (rec.modes.contains(-m)) rec.A_window[m] = perturbation_amplitude(rec.modes, m);
    }

    if (options.policy == EpochPolicy::restart) {
      result.counter.merge(state.counter());
      state.counter() = GateCounter{};
    }
    result.counter.merge(extraction);
    if (on_record) on_record(rec);
    result.steps.push_back(std::move(rec));
  }
  if (options.policy == EpochPolicy::continue_run) result.counter.merge(state.counter());
  return result;
}

}  // namespace qvlasov
