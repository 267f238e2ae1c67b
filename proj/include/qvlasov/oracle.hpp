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
 * @file oracle.hpp
 * @brief Classical reservoir method on a plain N_v x N_x array.
 *
 * Same permutation semantics as the quantum pipeline, but executed with
 * std::rotate on rows and columns. It consumes the shared EventSchedule so
 * event timing can never be the reason the two disagree.
 */

#pragma once

#include "qvlasov/advection.hpp"
#include "qvlasov/error.hpp"
#include "qvlasov/gravity.hpp"
#include "qvlasov/grid.hpp"
#include "qvlasov/modes.hpp"
#include "qvlasov/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qvlasov {

/// Rotates each listed row one cell along x in the direction of v_k.
inline void oracle_config_shift(DistributionFunction& f, const std::vector<std::size_t>& rows) {
  const auto& grid = f.grid();
  const std::size_t nx = grid.N_x();
  auto& values = f.values();
  for (std::size_t k : rows) {
    auto first = values.begin() + static_cast<std::ptrdiff_t>(k * nx);
    auto last = first + static_cast<std::ptrdiff_t>(nx);
    if (grid.velocity(k) > 0) {
      std::rotate(first, last - 1, last);  // f_{k;j} <- f_{k;j-1}
    } else {
      std::rotate(first, first + 1, last);
    }
  }
}

/// Accumulates D_j and moves column j along v by the integer part. Content
/// above `wrap_tolerance` pushed past either velocity edge raises
/// WrapViolation when `strict` is set; otherwise the column wraps, which is
/// what the modular quantum increment does.
inline std::vector<long long> oracle_velocity_shift(DistributionFunction& f, CflVelocityCounters& D,
                                                    const ForceField& F, bool strict = true,
                                                    double wrap_tolerance = 0.0) {
  const auto& grid = f.grid();
  const std::size_t nx = grid.N_x();
  const auto nv = static_cast<long long>(grid.N_v());
  const double gain = velocity_counter_gain(grid);
  std::vector<long long> shifts(nx, 0);
  std::vector<double> column(grid.N_v());
  for (std::size_t j = 0; j < nx; ++j) {
    D.D[j] += F.F[j] * gain;
    long long p = 0;
    if (D.D[j] > 0.0) p = static_cast<long long>(std::floor(D.D[j]));
    if (D.D[j] < 0.0) p = static_cast<long long>(std::ceil(D.D[j]));
    if (p == 0) continue;
    for (long long k = 0; k < nv; ++k) column[k] = f(static_cast<std::size_t>(k), j);
    for (long long k = 0; k < nv; ++k) {
      const long long dest = k + p;
      if ((dest < 0 || dest >= nv) && strict && column[k] > wrap_tolerance) {
        throw WrapViolation(j, p);
      }
      f(static_cast<std::size_t>(((dest % nv) + nv) % nv), j) = column[k];
    }
    D.D[j] -= static_cast<double>(p);
    shifts[j] = p;
  }
  return shifts;
}

enum class GravityMode { none, fixed, self };

struct OracleConfig {
  GravityMode gravity = GravityMode::none;
  ForceField fixed_force;          ///< used when gravity == fixed
  std::size_t window = 0;          ///< modes kept for the force; 0 = all
  double rho_ref = 0.0;            ///< background subtracted from A_m
  std::vector<long long> tracked_modes{2};
  bool strict_wrap = true;
  double wrap_threshold = 1e-12;   ///< relative to M, like the amplitudes
  bool keep_distributions = true;  ///< large grids may skip full snapshots
};

struct OracleSnapshot {
  std::int64_t step = 0;
  Rational time;
  std::optional<DistributionFunction> f;  ///< absent unless keep_distributions
  std::vector<double> rho;
  std::map<long long, Complex> A;
  ForceField force;                ///< force computed from this snapshot
};

/// Force the oracle applies for a given density under `cfg`.
inline ForceField oracle_force(const std::vector<double>& rho, const GridConfig& grid,
                               const OracleConfig& cfg) {
  switch (cfg.gravity) {
    case GravityMode::none:
      return ForceField(grid.N_x());
    case GravityMode::fixed:
      return cfg.fixed_force;
    case GravityMode::self:
      if (cfg.window == 0 || cfg.window == grid.N_x()) return force_full_density(rho, grid);
      return force_from_modes(modes_of_density(rho, cfg.window), grid);
  }
  throw std::logic_error("unknown gravity mode");
}

/// Steps f through the schedule one velocity-step event at a time. The
/// force used at step l is the one computed from the snapshot at step l - 1
/// (zero at l = 0).
class OracleStepper {
 public:
  OracleStepper(const DistributionFunction& f0, const EventSchedule& schedule, OracleConfig cfg)
      : schedule_(schedule),
        cfg_(std::move(cfg)),
        f_(f0),
        tolerance_(cfg_.wrap_threshold * normalization_of(f0).M),
        D_(schedule.grid().N_x()),
        F_(schedule.grid().N_x()) {
    if (cfg_.gravity == GravityMode::fixed && cfg_.fixed_force.F.size() != f0.N_x()) {
      throw std::invalid_argument("fixed force must have N_x entries");
    }
  }

  /// Step index of the next snapshot.
  std::int64_t next_step() const { return next_step_; }
  const DistributionFunction& f() const { return f_; }

  /// Runs every event up to and including the next velocity step.
  OracleSnapshot advance() {
    if (next_step_ > schedule_.horizon_steps()) {
      throw std::out_of_range("oracle run extends past the schedule horizon");
    }
    const auto [first, last] = schedule_.window(next_step_ - 1, next_step_);
    for (std::size_t i = first; i < last; ++i) {
      const auto& event = schedule_[i];
      if (event.velocity_step) oracle_velocity_shift(f_, D_, F_, cfg_.strict_wrap, tolerance_);
      oracle_config_shift(f_, event.rows);
    }
    OracleSnapshot snap{next_step_, Rational(next_step_) * schedule_.grid().characteristic_time(),
                        std::nullopt, density_of(f_), {}, {}};
    if (cfg_.keep_distributions) snap.f = f_;
    snap.A = perturbation_amplitudes(snap.rho, cfg_.rho_ref, cfg_.tracked_modes);
    F_ = oracle_force(snap.rho, schedule_.grid(), cfg_);
    snap.force = F_;
    ++next_step_;
    return snap;
  }

 private:
  const EventSchedule& schedule_;
  OracleConfig cfg_;
  DistributionFunction f_;
  double tolerance_;
  CflVelocityCounters D_;
  ForceField F_;
  std::int64_t next_step_ = 0;
};

/// Snapshots after each velocity-step event for steps 0..steps.
inline std::vector<OracleSnapshot> oracle_run(const DistributionFunction& f0,
                                              const EventSchedule& schedule,
                                              const OracleConfig& cfg, std::int64_t steps) {
  if (steps > schedule.horizon_steps()) {
    throw std::out_of_range("oracle run extends past the schedule horizon");
  }
  OracleStepper stepper(f0, schedule, cfg);
  std::vector<OracleSnapshot> out;
  for (std::int64_t l = 0; l <= steps; ++l) out.push_back(stepper.advance());
  return out;
}

}  // namespace qvlasov
