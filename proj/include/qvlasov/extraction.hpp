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
 * @file extraction.hpp
 * @brief Recovery of the S lowest density modes from |f>.
 *
 * Circuit: H on every R_v qubit, keep R_v = |0...0> (probability p_v), QFT
 * on R_x, add S/2 to R_x, keep the first n_x - s qubits of R_x at |0>
 * (probability p_x). The surviving s-qubit amplitude a_u holds mode
 * m = u - S/2 up to the factor dv sqrt(N_v) M sqrt(p_v p_x).
 *
 * R_v is measured before the QFT is applied. The two act on disjoint
 * registers, so this reordering leaves both the outcome statistics and the
 * conditional state unchanged, and the QFT then runs on n_x qubits only.
 */

#pragma once

#include "qvlasov/advection.hpp"
#include "qvlasov/circuits.hpp"
#include "qvlasov/error.hpp"
#include "qvlasov/grid.hpp"
#include "qvlasov/measurement.hpp"
#include "qvlasov/modes.hpp"
#include "qvlasov/tomography.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

struct PostselectionProbabilities {
  double p_v = 0.0;
  double p_x = 0.0;
};

namespace detail {

inline std::size_t log2_exact(std::size_t S) {
  std::size_t s = 0;
  while ((std::size_t{1} << s) < S) ++s;
  return s;
}

inline void validate_window(const GridConfig& grid, std::size_t S) {
  if (S < 2 || (S & (S - 1)) != 0) throw std::invalid_argument("S must be a power of two >= 2");
  // s <= n_x - 1 leaves at least one qubit to postselect; S = N_x is also
  // accepted and simply skips the second postselection.
  if (S > grid.N_x()) throw std::invalid_argument("S must not exceed N_x");
}

struct ExtractionPipeline {
  QuantumState window;
  PostselectionProbabilities p;
};

inline ExtractionPipeline run_extraction_circuit(const QuantumState& state, const GridConfig& grid,
                                                 std::size_t S, GateCounter* counter) {
  validate_window(grid, S);
  if (state.num_qubits() != grid.num_qubits()) {
    throw std::invalid_argument("state does not match grid");
  }
  QuantumState work = state;
  work.set_trace(nullptr);
  work.counter() = GateCounter{};
  work.counter().set_section("extraction");

  const auto rv = velocity_register(grid);
  for (std::size_t i = 0; i < rv.size; ++i) apply_h(work, rv.qubit(i));
  std::vector<Qubit> rv_qubits;
  for (std::size_t i = 0; i < rv.size; ++i) rv_qubits.push_back(rv.qubit(i));
  auto after_v = postselect_and_discard(work, rv_qubits, std::vector<bool>(rv.size, false));

  const RegisterSlice rx{"R_x", 0, grid.n_x()};
  apply_qft(after_v.state, rx);
  apply_increment(after_v.state, rx, static_cast<long long>(S / 2));

  const std::size_t s = log2_exact(S);
  std::vector<Qubit> high;
  for (std::size_t i = 0; i + s < grid.n_x(); ++i) high.push_back(i);
  ExtractionPipeline out{after_v.state, {after_v.probability, 1.0}};
  if (!high.empty()) {
    auto after_x =
        postselect_and_discard(after_v.state, high, std::vector<bool>(high.size(), false));
    out.window = std::move(after_x.state);
    out.p.p_x = after_x.probability;
  }
  if (counter != nullptr) counter->merge(out.window.counter());
  return out;
}

}  // namespace detail

/// Exact postselection probabilities of the extraction circuit.
inline PostselectionProbabilities postselection_probabilities(const QuantumState& state,
                                                              const GridConfig& grid,
                                                              std::size_t S) {
  return detail::run_extraction_circuit(state, grid, S, nullptr).p;
}

/// Modes from the exact postselected amplitudes. Extraction gates are added
/// to `counter` when one is given.
inline FourierDensity extract_modes_exact(const QuantumState& state, const GridConfig& grid,
                                          std::size_t S, Normalization M,
                                          GateCounter* counter = nullptr) {
  auto run = detail::run_extraction_circuit(state, grid, S, counter);
  const double scale = grid.delta_v() * std::sqrt(static_cast<double>(grid.N_v())) * M.M *
                       std::sqrt(run.p.p_v * run.p.p_x);
  FourierDensity out;
  out.S = S;
  out.N_x = grid.N_x();
  out.provenance = Provenance::exact;
  out.p_v = run.p.p_v;
  out.p_x = run.p.p_x;
  out.values.resize(S);
  for (std::size_t u = 0; u < S; ++u) out.values[u] = run.window[u] * scale;
  return out;
}

/// Modes from simulated measurements.
///
/// The acceptance probabilities are estimated from `shots` runs of the
/// circuit: the R_v outcome is binomial in p_v, and among the accepted runs
/// the R_x outcome is binomial in p_x. The postselected state is then
/// reconstructed by four-basis tomography with `shots` accepted shots per
/// basis. Tomography only yields the state up to scale and phase; both are
/// fixed by the conserved zero mode rho~_0 = total_mass / sqrt(N_x).
inline FourierDensity extract_modes_shots(const QuantumState& state, const GridConfig& grid,
                                          std::size_t S, double total_mass, std::uint64_t shots,
                                          std::uint64_t rng_seed,
                                          GateCounter* counter = nullptr) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  auto run = detail::run_extraction_circuit(state, grid, S, counter);

  std::mt19937_64 rng(rng_seed);
  std::binomial_distribution<std::uint64_t> v_draw(shots, std::min(1.0, run.p.p_v));
  const auto accepted_v = v_draw(rng);
  if (accepted_v == 0) throw PostselectionError("no shot passed the R_v postselection");
  std::binomial_distribution<std::uint64_t> x_draw(accepted_v, std::min(1.0, run.p.p_x));
  const auto accepted = x_draw(rng);
  if (accepted == 0) throw PostselectionError("no shot passed the R_x postselection");

  const TomographyPlan plan{run.window.num_qubits(), shots};
  const auto counts = collect(run.window, plan, rng());
  const auto est = reconstruct(counts);

  const Complex anchor = est.amplitudes[S / 2];
  if (std::abs(anchor) < 1e-12) {
    throw PhysicsError("reconstructed zero mode vanishes; cannot fix the scale");
  }
  const double rho0 = total_mass / std::sqrt(static_cast<double>(grid.N_x()));
  const Complex factor = rho0 / anchor;

  FourierDensity out;
  out.S = S;
  out.N_x = grid.N_x();
  out.provenance = Provenance::shots;
  out.p_v = static_cast<double>(accepted_v) / static_cast<double>(shots);
  out.p_x = static_cast<double>(accepted) / static_cast<double>(accepted_v);
  out.values.resize(S);
  for (std::size_t u = 0; u < S; ++u) out.values[u] = est.amplitudes[u] * factor;
  return out;
}

}  // namespace qvlasov
