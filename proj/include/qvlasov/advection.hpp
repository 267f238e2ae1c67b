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
 * @file advection.hpp
 * @brief Reservoir-method advection on the statevector.
 *
 * Configuration advection moves row k of f by one cell whenever the
 * schedule says so; velocity advection moves column j by the integer part
 * of its accumulated counter D_j. Both are register-controlled increments,
 * so every step permutes amplitudes and never changes their values.
 */

#pragma once

#include "qvlasov/circuits.hpp"
#include "qvlasov/error.hpp"
#include "qvlasov/grid.hpp"
#include "qvlasov/schedule.hpp"
#include "qvlasov/statevector.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qvlasov {

struct CflVelocityCounters {
  std::vector<double> D;

  explicit CflVelocityCounters(std::size_t n_x = 0) : D(n_x, 0.0) {}
};

/// Acceleration per unit mass at each x_j.
struct ForceField {
  std::vector<double> F;

  ForceField() = default;
  explicit ForceField(std::size_t n_x) : F(n_x, 0.0) {}
  explicit ForceField(std::vector<double> values) : F(std::move(values)) {}
  double max_abs() const {
    double m = 0.0;
    for (double f : F) m = std::max(m, std::abs(f));
    return m;
  }
  bool operator==(const ForceField&) const = default;
};

inline RegisterSlice position_register(const GridConfig& grid) {
  return RegisterSlice{"R_x", 0, grid.n_x()};
}

inline RegisterSlice velocity_register(const GridConfig& grid) {
  return RegisterSlice{"R_v", grid.n_x(), grid.n_v()};
}

/// Direct amplitude load of f / M: the state the QRAM would prepare.
inline QuantumState encode_distribution(const DistributionFunction& f) {
  const auto& grid = f.grid();
  const double M = normalization_of(f).M;
  std::vector<Complex> amps(grid.N_x() * grid.N_v());
  for (std::size_t k = 0; k < grid.N_v(); ++k) {
    for (std::size_t j = 0; j < grid.N_x(); ++j) {
      amps[j * grid.N_v() + k] = f(k, j) / M;
    }
  }
  return QuantumState::normalized(std::move(amps));
}

/// M * Re(amplitude), laid out like DistributionFunction::values().
inline std::vector<double> scaled_amplitudes(const QuantumState& s, const GridConfig& grid,
                                             double M) {
  if (s.num_qubits() != grid.num_qubits()) {
    throw std::invalid_argument("state does not match grid");
  }
  std::vector<double> out(grid.N_x() * grid.N_v());
  for (std::size_t k = 0; k < grid.N_v(); ++k) {
    for (std::size_t j = 0; j < grid.N_x(); ++j) {
      out[k * grid.N_x() + j] = M * s[j * grid.N_v() + k].real();
    }
  }
  return out;
}

struct AdvectionOptions {
  bool strict_wrap = true;
  double wrap_threshold = 1e-12;
};

/// Counter increment per unit force per velocity step: T / dv.
inline double velocity_counter_gain(const GridConfig& grid) {
  return to_double(grid.characteristic_time()) / grid.delta_v();
}

/// Integer shift realized from counter d (floor for d > 0, ceil for d < 0).
inline long long velocity_shift_of(double d) {
  if (d > 0.0) return static_cast<long long>(std::floor(d));
  if (d < 0.0) return static_cast<long long>(std::ceil(d));
  return 0;
}

namespace detail {

inline void check_velocity_wrap(const QuantumState& s, const GridConfig& grid,
                                std::size_t j, long long shift, double threshold) {
  const auto nv = static_cast<long long>(grid.N_v());
  const long long first = shift > 0 ? std::max(0LL, nv - shift) : 0;
  const long long last = shift > 0 ? nv : std::min(nv, -shift);
  for (long long k = first; k < last; ++k) {
    if (std::abs(s[j * grid.N_v() + static_cast<std::size_t>(k)]) > threshold) {
      throw WrapViolation(j, shift);
    }
  }
}

}  // namespace detail

/// One velocity-advection step: D_j += F_j T / dv, then column j moves by
/// the integer part of D_j. Returns the shift applied to each column.
inline std::vector<long long> velocity_advection_step(QuantumState& s, CflVelocityCounters& D,
                                                      const ForceField& F,
                                                      const GridConfig& grid,
                                                      const AdvectionOptions& options = {}) {
  const std::size_t nx = grid.N_x();
  if (D.D.size() != nx || F.F.size() != nx) {
    throw std::invalid_argument("counter and force sizes must equal N_x");
  }
  GateCounter::Scope scope(s.counter(), "velocity");
  const double gain = velocity_counter_gain(grid);
  const auto rx = position_register(grid);
  const auto rv = velocity_register(grid);
  std::vector<long long> shifts(nx, 0);
  for (std::size_t j = 0; j < nx; ++j) {
    if (!std::isfinite(F.F[j])) throw PhysicsError("non-finite force at j=" + std::to_string(j));
    D.D[j] += F.F[j] * gain;
    const long long shift = velocity_shift_of(D.D[j]);
    if (shift != 0) {
      if (options.strict_wrap) {
        detail::check_velocity_wrap(s, grid, j, shift, options.wrap_threshold);
      }
      apply_controlled_increment(s, rx, j, rv, shift);
      D.D[j] -= static_cast<double>(shift);
    }
    if (!(std::abs(D.D[j]) < 1.0)) {
      throw PhysicsError("CFL counter D_" + std::to_string(j) + " left (-1, 1)");
    }
    shifts[j] = shift;
  }
  return shifts;
}

/// Moves every row of `event` one cell along x, in the direction of v_k.
inline void configuration_advection_step(QuantumState& s, const ScheduleEvent& event,
                                         const GridConfig& grid) {
  GateCounter::Scope scope(s.counter(), "configuration");
  const auto rx = position_register(grid);
  const auto rv = velocity_register(grid);
  for (std::size_t k : event.rows) {
    const long long direction = grid.velocity(k) > 0 ? 1 : -1;
    apply_controlled_increment(s, rv, k, rx, direction);
  }
}

/// Hook called after each velocity step with (step index, applied shifts).
using VelocityStepObserver = std::function<void(std::int64_t, const std::vector<long long>&)>;

/// Runs the events with from_step*T < t <= to_step*T under a fixed force.
/// At a velocity-step event the velocity shift precedes the row shifts.
inline void run_epoch(QuantumState& s, const EventSchedule& schedule, CflVelocityCounters& D,
                      const ForceField& F, std::int64_t from_step, std::int64_t to_step,
                      const AdvectionOptions& options = {},
                      const VelocityStepObserver& observer = {}) {
  if (to_step > schedule.horizon_steps()) {
    throw std::out_of_range("epoch ends after the schedule horizon");
  }
  const auto& grid = schedule.grid();
  const auto [first, last] = schedule.window(from_step, to_step);
  for (std::size_t i = first; i < last; ++i) {
    const auto& event = schedule[i];
    if (event.velocity_step) {
      const auto shifts = velocity_advection_step(s, D, F, grid, options);
      if (observer) observer(event.step_index, shifts);
    }
    configuration_advection_step(s, event, grid);
  }
}

struct ResolutionCheck {
  double max_force = 0.0;   ///< F_s
  double required_N_v = 0.0;
  bool resolved = true;
};

/// N_v >= V^2 / (F_s dx): the velocity grid must be fine enough for the
/// force to move content at all within the run.
inline ResolutionCheck check_resolution(const GridConfig& grid, const ForceField& F) {
  ResolutionCheck r;
  r.max_force = F.max_abs();
  if (r.max_force == 0.0) return r;
  const double V = to_double(grid.V());
  r.required_N_v = V * V / (r.max_force * GridConfig::delta_x());
  r.resolved = static_cast<double>(grid.N_v()) >= r.required_N_v;
  return r;
}

}  // namespace qvlasov
