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

#pragma once

#include "qvlasov/error.hpp"
#include "qvlasov/statevector.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

struct PostselectResult {
  QuantumState state;
  double probability;
};

namespace detail {

inline void outcome_pattern(const QuantumState& s, std::span<const Qubit> qubits,
                            const std::vector<bool>& outcome, std::uint64_t& mask,
                            std::uint64_t& value) {
  if (qubits.size() != outcome.size()) {
    throw std::invalid_argument("outcome length does not match qubit list");
  }
  mask = 0;
  value = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto m = s.mask(qubits[i]);
    if (mask & m) throw std::invalid_argument("duplicate qubit in postselection");
    mask |= m;
    if (outcome[i]) value |= m;
  }
}

}  // namespace detail

/// Conditions on `qubits` reading `outcome` and renormalizes. The returned
/// state keeps every qubit; the probability is the exact Born weight.
inline PostselectResult postselect(const QuantumState& s, std::span<const Qubit> qubits,
                                   const std::vector<bool>& outcome) {
  std::uint64_t mask = 0;
  std::uint64_t value = 0;
  detail::outcome_pattern(s, qubits, outcome, mask, value);

  std::vector<Complex> kept(s.dimension(), Complex{});
  double p = 0.0;
  const auto amps = s.amplitudes();
  detail::for_each_matching(s.dimension(), mask, value, [&](std::uint64_t i) {
    kept[i] = amps[i];
    p += std::norm(amps[i]);
  });
  if (p == 0.0) throw PostselectionError("postselected outcome has zero probability");
  const double scale = 1.0 / std::sqrt(p);
  for (auto& a : kept) a *= scale;
  PostselectResult result{QuantumState::from_amplitudes(std::move(kept), 1e-9), p};
  result.state.counter() = s.counter();
  result.state.set_trace(s.trace());
  return result;
}

/// Postselects `qubits` on `outcome` and removes them, leaving a state on
/// the remaining qubits in their original relative order.
inline PostselectResult postselect_and_discard(const QuantumState& s,
                                               std::span<const Qubit> qubits,
                                               const std::vector<bool>& outcome) {
  std::uint64_t mask = 0;
  std::uint64_t value = 0;
  detail::outcome_pattern(s, qubits, outcome, mask, value);

  const std::size_t remaining = s.num_qubits() - qubits.size();
  std::vector<Complex> kept(std::size_t{1} << remaining);
  double p = 0.0;
  const auto amps = s.amplitudes();
  std::size_t out = 0;
  // Matching indices are visited in increasing order, which is exactly the
  // order of the compacted index over the surviving bits.
  detail::for_each_matching(s.dimension(), mask, value, [&](std::uint64_t i) {
    kept[out++] = amps[i];
    p += std::norm(amps[i]);
  });
  if (p == 0.0) throw PostselectionError("postselected outcome has zero probability");
  const double scale = 1.0 / std::sqrt(p);
  for (auto& a : kept) a *= scale;
  PostselectResult result{QuantumState::from_amplitudes(std::move(kept), 1e-9), p};
  result.state.counter() = s.counter();
  return result;
}

inline std::vector<double> probabilities(const QuantumState& s) {
  std::vector<double> p(s.dimension());
  const auto amps = s.amplitudes();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amps[i]);
  return p;
}

/// Multinomial draw of `shots` outcomes from `probs` (which need not be
/// exactly normalized), using sequential conditional binomials.
inline std::vector<std::uint64_t> sample_multinomial(const std::vector<double>& probs,
                                                     std::uint64_t shots,
                                                     std::mt19937_64& rng) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  double mass_left = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
    mass_left += p;
  }
  std::uint64_t left = shots;
  for (std::size_t i = 0; i < probs.size() && left > 0; ++i) {
    if (i + 1 == probs.size() || probs[i] >= mass_left) {
      counts[i] = left;
      left = 0;
      break;
    }
    if (probs[i] > 0.0) {
      std::binomial_distribution<std::uint64_t> draw(left, probs[i] / mass_left);
      counts[i] = draw(rng);
      left -= counts[i];
    }
    mass_left -= probs[i];
  }
  return counts;
}

/// Histogram of `shots` computational-basis measurements; index = basis index.
inline std::vector<std::uint64_t> sample_counts(const QuantumState& s, std::uint64_t shots,
                                                std::uint64_t rng_seed) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  std::mt19937_64 rng(rng_seed);
  return sample_multinomial(probabilities(s), shots, rng);
}

/// Bitstring of basis index i, qubit 0 first.
inline std::string bitstring(std::uint64_t i, std::size_t num_qubits) {
  std::string out(num_qubits, '0');
  for (std::size_t q = 0; q < num_qubits; ++q) {
    if ((i >> (num_qubits - 1 - q)) & 1U) out[q] = '1';
  }
  return out;
}

}  // namespace qvlasov
