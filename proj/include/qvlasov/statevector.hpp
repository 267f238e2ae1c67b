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
 * @file statevector.hpp
 * @brief Instrumented statevector engine with exactly the gates the
 *        advection and extraction circuits need.
 *
 * Bit order: qubit 0 is the MOST significant bit of the basis index. With
 * R_x on qubits 0..n_x-1 and R_v on n_x..n_x+n_v-1 the basis index of
 * |j>|k> is j * N_v + k, and circuit diagrams read top to bottom in qubit
 * order. Porting code from simulators that use little-endian qubit order is
 * the usual source of off-by-reversal bugs here.
 *
 * Multi-controlled NOTs are applied directly (no Toffoli decomposition) and
 * are tallied by control count in GateCounter, which is the unit the
 * complexity estimates are expressed in.
 */

#pragma once

#include "qvlasov/io.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qvlasov {

using Complex = std::complex<double>;
using Qubit = std::size_t;

/// A control qubit; polarity false is an open (|0>-activated) control.
struct Control {
  Qubit qubit;
  bool polarity = true;
};

/// Contiguous block of qubits interpreted as an unsigned integer register,
/// first qubit most significant.
struct RegisterSlice {
  std::string name;
  Qubit first = 0;
  std::size_t size = 0;

  Qubit qubit(std::size_t i) const { return first + i; }
  std::uint64_t capacity() const { return std::uint64_t{1} << size; }
  bool overlaps(const RegisterSlice& other) const {
    return first < other.first + other.size && other.first < first + size;
  }
};

enum class GateKind : std::size_t { X = 0, H, Sdg, CPhase, Swap };
inline constexpr std::array<std::string_view, 5> kGateNames{"x", "h", "sdg",
                                                           "cphase", "swap"};

/// Gate tallies, optionally split into named sections ("velocity",
/// "configuration", "extraction", ...). Counts only ever grow.
class GateCounter {
 public:
  struct Tally {
    std::array<std::uint64_t, 5> simple{};
    std::vector<std::uint64_t> mcx_by_controls;
    std::uint64_t increment_circuits = 0;
    std::uint64_t increment_bound_violations = 0;

    std::uint64_t mcx_total() const {
      std::uint64_t total = 0;
      for (auto c : mcx_by_controls) total += c;
      return total;
    }
    /// Sum over MCX gates of (controls + 1): the O(n)-per-gate cost model.
    std::uint64_t mcx_weighted() const {
      std::uint64_t total = 0;
      for (std::size_t c = 0; c < mcx_by_controls.size(); ++c)
        total += mcx_by_controls[c] * (c + 1);
      return total;
    }
    std::uint64_t mcx(std::size_t controls) const {
      return controls < mcx_by_controls.size() ? mcx_by_controls[controls] : 0;
    }
    std::uint64_t count(GateKind kind) const {
      return simple[static_cast<std::size_t>(kind)];
    }
    Tally& operator+=(const Tally& other) {
      for (std::size_t i = 0; i < simple.size(); ++i) simple[i] += other.simple[i];
      if (mcx_by_controls.size() < other.mcx_by_controls.size())
        mcx_by_controls.resize(other.mcx_by_controls.size(), 0);
      for (std::size_t i = 0; i < other.mcx_by_controls.size(); ++i)
        mcx_by_controls[i] += other.mcx_by_controls[i];
      increment_circuits += other.increment_circuits;
      increment_bound_violations += other.increment_bound_violations;
      return *this;
    }
  };

  GateCounter() { current_ = &sections_[""]; }
  GateCounter(const GateCounter& other)
      : sections_(other.sections_), section_(other.section_) {
    current_ = &sections_[section_];
  }
  GateCounter& operator=(const GateCounter& other) {
    if (this != &other) {
      sections_ = other.sections_;
      section_ = other.section_;
      current_ = &sections_[section_];
    }
    return *this;
  }
  GateCounter(GateCounter&& other) noexcept
      : sections_(std::move(other.sections_)), section_(std::move(other.section_)) {
    current_ = &sections_[section_];
    other.current_ = &other.sections_[other.section_];
  }
  GateCounter& operator=(GateCounter&& other) noexcept {
    if (this != &other) {
      sections_ = std::move(other.sections_);
      section_ = std::move(other.section_);
      current_ = &sections_[section_];
      other.current_ = &other.sections_[other.section_];
    }
    return *this;
  }

  const std::string& section() const { return section_; }
  void set_section(std::string name) {
    section_ = std::move(name);
    current_ = &sections_[section_];
  }

  void record(GateKind kind, std::uint64_t n = 1) {
    current_->simple[static_cast<std::size_t>(kind)] += n;
  }
  void record_mcx(std::size_t controls) {
    auto& v = current_->mcx_by_controls;
    if (v.size() <= controls) v.resize(controls + 1, 0);
    ++v[controls];
  }
  void record_increment(bool within_bound) {
    ++current_->increment_circuits;
    if (!within_bound) ++current_->increment_bound_violations;
  }

  const std::map<std::string, Tally>& sections() const { return sections_; }
  Tally tally(const std::string& name) const {
    auto it = sections_.find(name);
    return it == sections_.end() ? Tally{} : it->second;
  }
  Tally total() const {
    Tally sum;
    for (const auto& [name, t] : sections_) sum += t;
    return sum;
  }

  /// Adds every section of `other` into the matching section here.
  void merge(const GateCounter& other) {
    for (const auto& [name, t] : other.sections_) sections_[name] += t;
    current_ = &sections_[section_];
  }

  /// Restores the previous section on scope exit.
  class Scope {
   public:
    Scope(GateCounter& counter, std::string name)
        : counter_(counter), previous_(counter.section()) {
      counter_.set_section(std::move(name));
    }
    ~Scope() { counter_.set_section(previous_); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    GateCounter& counter_;
    std::string previous_;
  };

 private:
  std::map<std::string, Tally> sections_;
  std::string section_;
  Tally* current_ = nullptr;
};

/// Gate log, one line per gate: `GATE;qubits;params`.
struct CircuitTrace {
  std::vector<std::string> lines;

  std::string text() const {
    std::string out;
    for (const auto& l : lines) {
      out += l;
      out += '\n';
    }
    return out;
  }
};

class QuantumState {
 public:
  explicit QuantumState(std::size_t num_qubits)
      : num_qubits_(num_qubits), amplitudes_(dimension_for(num_qubits)) {
    amplitudes_[0] = 1.0;
  }

  static QuantumState basis(std::size_t num_qubits, std::uint64_t index) {
    QuantumState s(num_qubits);
    if (index >= s.dimension()) throw std::out_of_range("basis index out of range");
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[index] = 1.0;
    return s;
  }

  /// Adopts the amplitudes; they must already have unit norm.
  static QuantumState from_amplitudes(std::vector<Complex> amplitudes,
                                      double tolerance = 1e-10) {
    const std::size_t n = qubits_for(amplitudes.size());
    QuantumState s(n);
    s.amplitudes_ = std::move(amplitudes);
    if (std::abs(s.norm_squared() - 1.0) > tolerance) {
      throw std::invalid_argument("amplitudes are not normalized");
    }
    return s;
  }

  /// Adopts and rescales to unit norm.
  static QuantumState normalized(std::vector<Complex> amplitudes) {
    const std::size_t n = qubits_for(amplitudes.size());
    QuantumState s(n);
    s.amplitudes_ = std::move(amplitudes);
    const double norm = std::sqrt(s.norm_squared());
    if (norm == 0.0) throw std::invalid_argument("zero vector cannot be normalized");
    for (auto& a : s.amplitudes_) a /= norm;
    return s;
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  Complex& operator[](std::size_t i) { return amplitudes_[i]; }

  /// Index mask of qubit q (qubit 0 is the most significant bit).
  std::uint64_t mask(Qubit q) const {
    check_qubit(q);
    return std::uint64_t{1} << (num_qubits_ - 1 - q);
  }
  void check_qubit(Qubit q) const {
    if (q >= num_qubits_) {
      throw std::out_of_range("qubit " + std::to_string(q) + " out of range for " +
                              std::to_string(num_qubits_) + "-qubit state");
    }
  }

  double norm_squared() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return sum;
  }

  GateCounter& counter() { return counter_; }
  const GateCounter& counter() const { return counter_; }

  /// Non-owning; copies of the state share the sink.
  void set_trace(CircuitTrace* trace) { trace_ = trace; }
  CircuitTrace* trace() const { return trace_; }

 private:
  static std::size_t dimension_for(std::size_t n) {
    if (n > 30) throw std::invalid_argument("at most 30 qubits are supported");
    return std::size_t{1} << n;
  }
  static std::size_t qubits_for(std::size_t dim) {
    if (dim == 0 || (dim & (dim - 1)) != 0) {
      throw std::invalid_argument("amplitude vector length must be a power of two");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    return n;
  }

  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
  GateCounter counter_;
  CircuitTrace* trace_ = nullptr;
};

namespace detail {

inline void log_gate(const QuantumState& s, std::string line) {
  if (s.trace() != nullptr) s.trace()->lines.push_back(std::move(line));
}

// Visits every basis index whose `fixed_mask` bits equal `fixed_value`,
// in increasing order. Cost is proportional to the number of visited indices.
template <typename Fn>
void for_each_matching(std::uint64_t dim, std::uint64_t fixed_mask,
                       std::uint64_t fixed_value, Fn&& fn) {
  const std::uint64_t free = (dim - 1) & ~fixed_mask;
  std::uint64_t sub = 0;
  do {
    fn(sub | fixed_value);
    sub = (sub - free) & free;
  } while (sub != 0);
}

}  // namespace detail

inline void apply_x(QuantumState& s, Qubit q) {
  const auto bit = s.mask(q);
  auto amps = s.amplitudes();
  detail::for_each_matching(s.dimension(), bit, 0,
                            [&](std::uint64_t i) { std::swap(amps[i], amps[i | bit]); });
  s.counter().record(GateKind::X);
  detail::log_gate(s, "X;" + std::to_string(q) + ";");
}

inline void apply_h(QuantumState& s, Qubit q) {
  const auto bit = s.mask(q);
  auto amps = s.amplitudes();
  constexpr double r = 1.0 / std::numbers::sqrt2;
  detail::for_each_matching(s.dimension(), bit, 0, [&](std::uint64_t i) {
    const Complex a = amps[i];
    const Complex b = amps[i | bit];
    amps[i] = (a + b) * r;
    amps[i | bit] = (a - b) * r;
  });
  s.counter().record(GateKind::H);
  detail::log_gate(s, "H;" + std::to_string(q) + ";");
}

/// S^dagger = diag(1, -i).
inline void apply_sdg(QuantumState& s, Qubit q) {
  const auto bit = s.mask(q);
  auto amps = s.amplitudes();
  detail::for_each_matching(s.dimension(), bit, bit, [&](std::uint64_t i) {
    amps[i] = Complex(amps[i].imag(), -amps[i].real());
  });
  s.counter().record(GateKind::Sdg);
  detail::log_gate(s, "SDG;" + std::to_string(q) + ";");
}

/// diag(1, 1, 1, e^{i theta}) on (control, target).
inline void apply_cphase(QuantumState& s, Qubit control, Qubit target, double theta) {
  if (control == target) throw std::invalid_argument("cphase needs two distinct qubits");
  const auto both = s.mask(control) | s.mask(target);
  const Complex phase = std::polar(1.0, theta);
  auto amps = s.amplitudes();
  detail::for_each_matching(s.dimension(), both, both,
                            [&](std::uint64_t i) { amps[i] *= phase; });
  s.counter().record(GateKind::CPhase);
  detail::log_gate(s, "CPHASE;" + std::to_string(control) + "," +
                          std::to_string(target) + ";" + io::fmt(theta));
}

inline void apply_swap(QuantumState& s, Qubit a, Qubit b) {
  if (a == b) throw std::invalid_argument("swap needs two distinct qubits");
  const auto ma = s.mask(a);
  const auto mb = s.mask(b);
  auto amps = s.amplitudes();
  detail::for_each_matching(s.dimension(), ma | mb, ma,
                            [&](std::uint64_t i) { std::swap(amps[i], amps[i ^ ma ^ mb]); });
  s.counter().record(GateKind::Swap);
  detail::log_gate(s, "SWAP;" + std::to_string(a) + "," + std::to_string(b) + ";");
}

namespace detail {

inline void validate_distinct(const QuantumState& s, std::span<const Control> controls,
                              Qubit target) {
  std::uint64_t seen = s.mask(target);
  for (const auto& c : controls) {
    const auto m = s.mask(c.qubit);
    if (seen & m) {
      throw std::invalid_argument("duplicate qubit " + std::to_string(c.qubit) +
                                  " in multi-controlled NOT");
    }
    seen |= m;
  }
}

inline std::string mcx_line(std::span<const Control> controls, Qubit target) {
  std::string qubits;
  std::string polarity;
  for (const auto& c : controls) {
    qubits += std::to_string(c.qubit);
    qubits += ',';
    polarity += c.polarity ? '1' : '0';
  }
  qubits += std::to_string(target);
  return "MCX;" + qubits + ";" + polarity;
}

// Flips `target` on the subspace where every control matches its polarity.
// Touches only 2^(n - controls) amplitudes, so high-control gates are cheap.
inline void mcx_kernel(QuantumState& s, std::span<const Control> controls, Qubit target) {
  std::uint64_t cmask = 0;
  std::uint64_t cval = 0;
  for (const auto& c : controls) {
    const auto m = s.mask(c.qubit);
    cmask |= m;
    if (c.polarity) cval |= m;
  }
  const auto tbit = s.mask(target);
  auto amps = s.amplitudes();
  for_each_matching(s.dimension(), cmask | tbit, cval,
                    [&](std::uint64_t i) { std::swap(amps[i], amps[i | tbit]); });
}

}  // namespace detail

/// Multi-controlled NOT. An empty control list is a plain X, tallied as a
/// zero-control MCX.
inline void apply_mcx(QuantumState& s, std::span<const Control> controls, Qubit target) {
  detail::validate_distinct(s, controls, target);
  detail::mcx_kernel(s, controls, target);
  s.counter().record_mcx(controls.size());
  detail::log_gate(s, detail::mcx_line(controls, target));
}

inline void apply_mcx(QuantumState& s, std::initializer_list<Control> controls,
                      Qubit target) {
  apply_mcx(s, std::span<const Control>(controls.begin(), controls.size()), target);
}

}  // namespace qvlasov
