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
 * @file schedule.hpp
 * @brief Exact event timeline replacing the per-row CFL counters C_k.
 *
 * Row k moves one cell every 1/|v_k|. Writing |v_k| = o_k V / N_v with
 * o_k = |2k + 1 - N_v| (always odd), the events of row k sit at i / o_k
 * cycles, and velocity steps sit at multiples of T = 1/(N_v - 1) cycles.
 * Everything is kept in reduced fractions of a cycle, so coincidences such
 * as "row k fires exactly at a velocity step" are decided exactly.
 */

#pragma once

#include "qvlasov/grid.hpp"
#include "qvlasov/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

struct ScheduleEvent {
  Rational time;                    ///< physical time
  Rational steps;                   ///< time / T
  std::vector<std::size_t> rows;    ///< velocity indices advected by one cell
  bool velocity_step = false;
  std::int64_t step_index = -1;     ///< l with time = l T, or -1

  bool operator==(const ScheduleEvent&) const = default;
};

class EventSchedule {
 public:
  EventSchedule(GridConfig grid, std::int64_t horizon_steps, std::vector<ScheduleEvent> events)
      : grid_(std::move(grid)), horizon_steps_(horizon_steps), events_(std::move(events)) {}

  const GridConfig& grid() const { return grid_; }
  std::int64_t horizon_steps() const { return horizon_steps_; }
  const std::vector<ScheduleEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  const ScheduleEvent& operator[](std::size_t i) const { return events_[i]; }

  /// Index range [first, last) of events with from_step*T < t <= to_step*T.
  /// A from_step of -1 includes the t = 0 event.
  std::pair<std::size_t, std::size_t> window(std::int64_t from_step,
                                             std::int64_t to_step) const {
    const Rational lo(from_step);
    const Rational hi(to_step);
    auto first = std::partition_point(events_.begin(), events_.end(),
                                      [&](const ScheduleEvent& e) { return e.steps <= lo; });
    auto last = std::partition_point(events_.begin(), events_.end(),
                                     [&](const ScheduleEvent& e) { return e.steps <= hi; });
    return {static_cast<std::size_t>(first - events_.begin()),
            static_cast<std::size_t>(last - events_.begin())};
  }

 private:
  GridConfig grid_;
  std::int64_t horizon_steps_;
  std::vector<ScheduleEvent> events_;
};

namespace detail {

// Events with t <= horizon, horizon given as a reduced fraction of a cycle.
inline EventSchedule schedule_until(const GridConfig& grid, std::int64_t h_num,
                                    std::int64_t h_den, std::int64_t horizon_steps) {
  const auto nv = static_cast<std::int64_t>(grid.N_v());
  const std::int64_t L = nv - 1;

  struct Hit {
    std::int64_t num;
    std::int64_t den;
    std::size_t row;
  };
  std::vector<Hit> hits;
  for (std::size_t k = 0; k < grid.N_v(); ++k) {
    const std::int64_t o = std::abs(2 * static_cast<std::int64_t>(k) + 1 - nv);
    // i / o <= h_num / h_den
    const std::int64_t last = (h_num * o) / h_den;
    for (std::int64_t i = 0; i <= last; ++i) {
      const std::int64_t g = std::gcd(i, o);
      hits.push_back({i / g, o / g, k});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    const auto lhs = a.num * b.den;
    const auto rhs = b.num * a.den;
    return lhs != rhs ? lhs < rhs : a.row < b.row;
  });

  const Rational cycle = grid.cycle_time();
  std::vector<ScheduleEvent> events;
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    ScheduleEvent e;
    while (j < hits.size() && hits[j].num == hits[i].num && hits[j].den == hits[i].den) {
      e.rows.push_back(hits[j].row);
      ++j;
    }
    const Rational in_cycles(hits[i].num, hits[i].den);
    e.time = in_cycles * cycle;
    e.steps = in_cycles * L;
    e.velocity_step = e.steps.denominator() == 1;
    e.step_index = e.velocity_step ? e.steps.numerator() : -1;
    events.push_back(std::move(e));
    i = j;
  }
  return EventSchedule(grid, horizon_steps, std::move(events));
}

}  // namespace detail

/// All events with t <= horizon_cycles cycles (one cycle is 2 dx / dv).
inline EventSchedule build_schedule(const GridConfig& grid, std::int64_t horizon_cycles) {
  if (horizon_cycles < 1) throw std::invalid_argument("horizon must be >= 1 cycle");
  const auto L = static_cast<std::int64_t>(grid.N_v()) - 1;
  return detail::schedule_until(grid, horizon_cycles, 1, horizon_cycles * L);
}

/// All events with t <= horizon_steps * T. Useful when only a fraction of
/// a cycle is needed, as for fine velocity grids.
inline EventSchedule build_schedule_steps(const GridConfig& grid, std::int64_t horizon_steps) {
  if (horizon_steps < 0) throw std::invalid_argument("horizon must be >= 0 steps");
  const auto L = static_cast<std::int64_t>(grid.N_v()) - 1;
  const auto g = std::gcd(horizon_steps, L);
  return detail::schedule_until(grid, horizon_steps / g, L / g, horizon_steps);
}

/// Number of distinct event times in (0, 1] cycle. Row k fires at i / o_k
/// with odd o_k, so the count is the number of reduced fractions in (0, 1]
/// whose denominator is odd and at most N_v - 1, i.e. a sum of Euler
/// totients over the odd denominators.
inline std::uint64_t events_per_cycle(std::size_t N_v) {
  if (N_v < 2) throw std::invalid_argument("N_v must be >= 2");
  const std::size_t L = N_v - 1;
  std::vector<std::uint64_t> phi(L + 1);
  for (std::size_t i = 0; i <= L; ++i) phi[i] = i;
  for (std::size_t p = 2; p <= L; ++p) {
    if (phi[p] != p) continue;
    for (std::size_t q = p; q <= L; q += p) phi[q] -= phi[q] / p;
  }
  std::uint64_t total = 0;
  for (std::size_t d = 1; d <= L; d += 2) total += phi[d];
  return total;
}

/// Row shifts in one cycle: row k moves o_k = |2k + 1 - N_v| cells.
inline std::uint64_t row_shifts_per_cycle(std::size_t N_v) {
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < N_v; ++k) {
    const auto o = static_cast<long long>(2 * k + 1) - static_cast<long long>(N_v);
    total += static_cast<std::uint64_t>(o < 0 ? -o : o);
  }
  return total;
}

/// CSV with header `t_num,t_den,k_list,velocity_step`; k_list is
/// space-separated.
inline std::string to_csv(const EventSchedule& schedule) {
  std::string out = "t_num,t_den,k_list,velocity_step\n";
  for (const auto& e : schedule.events()) {
    out += std::to_string(e.time.numerator());
    out += ',';
    out += std::to_string(e.time.denominator());
    out += ',';
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(e.rows[i]);
    }
    out += ',';
    out += e.velocity_step ? "1" : "0";
    out += '\n';
  }
  return out;
}

}  // namespace qvlasov
