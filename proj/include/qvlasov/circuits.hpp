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
 * @file circuits.hpp
 * @brief Register-level circuits: MX conjugation, modular increment and
 *        decrement by p, register-controlled increments and the QFT.
 */

#pragma once

#include "qvlasov/statevector.hpp"

#include <bit>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

/// MX(N): X on every register qubit whose bit of N is 0 (qubit 0 of the
/// register reads the most significant bit). Self-inverse.
inline void apply_mx(QuantumState& s, const RegisterSlice& reg, std::uint64_t N) {
  if (N >= reg.capacity()) {
    throw std::out_of_range("MX value " + std::to_string(N) + " does not fit " +
                            std::to_string(reg.size) + " qubits");
  }
  for (std::size_t i = 0; i < reg.size; ++i) {
    const bool bit = (N >> (reg.size - 1 - i)) & 1U;
    if (!bit) apply_x(s, reg.qubit(i));
  }
}

/// Upper bound on the MCX count of an increment-by-p circuit on n qubits.
inline std::uint64_t increment_mcx_bound(std::size_t n, long long p) {
  if (p == 0) return 0;
  const auto magnitude = static_cast<std::uint64_t>(p < 0 ? -p : p);
  return n * static_cast<std::uint64_t>(std::bit_width(magnitude));
}

namespace detail {

// Emits the triangle for +-2^m on `reg`: target qubit t (counted from the
// MSB) flips when all lower qubits of the active block are 1 (increment) or
// 0 (decrement). The block shrinks to the top n - m qubits, since adding 2^m
// leaves the m least significant bits alone. `extra` controls are prepended
// with their real polarity; `logged_extra` is what the trace shows for them.
inline std::uint64_t emit_power_of_two(QuantumState& s, const RegisterSlice& reg,
                                       std::size_t m, bool decrement,
                                       const std::vector<Control>& extra,
                                       const std::vector<Control>& logged_extra) {
  const std::size_t active = reg.size - m;
  std::uint64_t emitted = 0;
  std::vector<Control> controls;
  std::vector<Control> logged;
  for (std::size_t t = 0; t < active; ++t) {
    controls.assign(extra.begin(), extra.end());
    logged.assign(logged_extra.begin(), logged_extra.end());
    for (std::size_t c = t + 1; c < active; ++c) {
      controls.push_back({reg.qubit(c), !decrement});
      logged.push_back({reg.qubit(c), !decrement});
    }
    validate_distinct(s, controls, reg.qubit(t));
    mcx_kernel(s, controls, reg.qubit(t));
    s.counter().record_mcx(controls.size());
    log_gate(s, mcx_line(logged, reg.qubit(t)));
    ++emitted;
  }
  return emitted;
}

inline std::uint64_t emit_increment(QuantumState& s, const RegisterSlice& reg,
                                    long long p, const std::vector<Control>& extra,
                                    const std::vector<Control>& logged_extra) {
  if (reg.size == 0) throw std::invalid_argument("increment needs a non-empty register");
  if (p == 0) return 0;
  const bool decrement = p < 0;
  const std::uint64_t magnitude =
      static_cast<std::uint64_t>(decrement ? -p : p) & (reg.capacity() - 1);
  std::uint64_t emitted = 0;
  for (std::size_t m = 0; m < reg.size; ++m) {
    if ((magnitude >> m) & 1U) {
      emitted += emit_power_of_two(s, reg, m, decrement, extra, logged_extra);
    }
  }
  s.counter().record_increment(emitted <= increment_mcx_bound(reg.size, p));
  return emitted;
}

}  // namespace detail

/// |i> -> |i + p mod 2^n> on `reg`. Negative p runs the open-control
/// decrement triangles rather than a two's-complement increment. Returns
/// the number of MCX gates emitted.
inline std::uint64_t apply_increment(QuantumState& s, const RegisterSlice& reg,
                                     long long p) {
  return detail::emit_increment(s, reg, p, {}, {});
}

/// Increment by p on `target` only where `control` holds `control_value`.
///
/// Logically this is MX(value), an increment with every control qubit of
/// `control` closed, then MX(value) again; the counter and trace record all
/// of those gates. The simulator folds the MX layers into control
/// polarities so the X gates never touch the amplitude array.
inline std::uint64_t apply_controlled_increment(QuantumState& s,
                                                const RegisterSlice& control,
                                                std::uint64_t control_value,
                                                const RegisterSlice& target,
                                                long long p) {
  if (control.overlaps(target)) {
    throw std::invalid_argument("control and target registers overlap");
  }
  if (control_value >= control.capacity()) {
    throw std::out_of_range("control value " + std::to_string(control_value) +
                            " does not fit register " + control.name);
  }
  if (p == 0) return 0;

  std::vector<Control> actual;
  std::vector<Control> logged;
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < control.size; ++i) {
    const bool bit = (control_value >> (control.size - 1 - i)) & 1U;
    actual.push_back({control.qubit(i), bit});
    logged.push_back({control.qubit(i), true});
    if (!bit) ++zeros;
  }

  auto log_mx = [&] {
    if (s.trace() == nullptr) return;
    for (std::size_t i = 0; i < control.size; ++i) {
      if (!actual[i].polarity) detail::log_gate(s, "X;" + std::to_string(control.qubit(i)) + ";");
    }
  };
  s.counter().record(GateKind::X, zeros);
  log_mx();
  const auto emitted = detail::emit_increment(s, target, p, actual, logged);
  s.counter().record(GateKind::X, zeros);
  log_mx();
  return emitted;
}

/// QFT with kernel e^{+2 pi i j k / N} / sqrt(N) on `reg`.
inline void apply_qft(QuantumState& s, const RegisterSlice& reg) {
  const std::size_t n = reg.size;
  for (std::size_t i = 0; i < n; ++i) {
    apply_h(s, reg.qubit(i));
    for (std::size_t m = i + 1; m < n; ++m) {
      const double theta = 2.0 * std::numbers::pi / static_cast<double>(1ULL << (m - i + 1));
      apply_cphase(s, reg.qubit(m), reg.qubit(i), theta);
    }
  }
  for (std::size_t i = 0; i < n / 2; ++i) apply_swap(s, reg.qubit(i), reg.qubit(n - 1 - i));
}

/// Exact inverse of apply_qft: the same gates reversed with negated phases.
inline void apply_iqft(QuantumState& s, const RegisterSlice& reg) {
  const std::size_t n = reg.size;
  for (std::size_t i = n / 2; i-- > 0;) apply_swap(s, reg.qubit(i), reg.qubit(n - 1 - i));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t m = n; m-- > i + 1;) {
      const double theta = 2.0 * std::numbers::pi / static_cast<double>(1ULL << (m - i + 1));
      apply_cphase(s, reg.qubit(m), reg.qubit(i), -theta);
    }
    apply_h(s, reg.qubit(i));
  }
}

/// Replays a trace produced by this engine onto `s`.
inline void replay(QuantumState& s, const CircuitTrace& trace) {
  for (const auto& line : trace.lines) {
    const auto parts = io::split(line, ';');
    if (parts.size() != 3) throw std::invalid_argument("bad trace line: " + line);
    std::vector<Qubit> qubits;
    if (!parts[1].empty()) {
      for (const auto& q : io::split(parts[1], ',')) qubits.push_back(std::stoul(q));
    }
    const auto& gate = parts[0];
    auto need = [&](std::size_t count) {
      if (qubits.size() != count) throw std::invalid_argument("bad arity: " + line);
    };
    if (gate == "X") {
      need(1);
      apply_x(s, qubits[0]);
    } else if (gate == "H") {
      need(1);
      apply_h(s, qubits[0]);
    } else if (gate == "SDG") {
      need(1);
      apply_sdg(s, qubits[0]);
    } else if (gate == "CPHASE") {
      need(2);
      apply_cphase(s, qubits[0], qubits[1], io::parse_double(parts[2]));
    } else if (gate == "SWAP") {
      need(2);
      apply_swap(s, qubits[0], qubits[1]);
    } else if (gate == "MCX") {
      if (qubits.empty() || parts[2].size() != qubits.size() - 1) {
        throw std::invalid_argument("bad MCX line: " + line);
      }
      std::vector<Control> controls;
      for (std::size_t i = 0; i + 1 < qubits.size(); ++i) {
        controls.push_back({qubits[i], parts[2][i] == '1'});
      }
      apply_mcx(s, controls, qubits.back());
    } else {
      throw std::invalid_argument("unknown gate in trace: " + line);
    }
  }
}

}  // namespace qvlasov
