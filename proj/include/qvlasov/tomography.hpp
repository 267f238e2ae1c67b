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
 * @file tomography.hpp
 * @brief Four-basis pure-state tomography with maximum-likelihood
 *        reconstruction.
 *
 * Bases: B1 computational; B2 H on every qubit; B3 S^dagger then H on every
 * qubit; B4 S^dagger on the even-indexed qubits then H on every qubit.
 *
 * Reconstruction maximizes sum_b sum_o n_bo log |<o|U_b|psi>|^2 over unit
 * vectors. The gradient direction is R psi with
 * R = (1/N) sum_b U_b^dagger diag(n_b / p_b) U_b, and at a stationary point
 * R psi = psi. Each iteration moves psi toward R psi with a step that grows
 * while the likelihood improves and halves when it does not.
 */

#pragma once

#include "qvlasov/error.hpp"
#include "qvlasov/measurement.hpp"
#include "qvlasov/statevector.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

inline constexpr std::size_t kTomographyBases = 4;

struct TomographyPlan {
  std::size_t num_qubits = 1;
  std::uint64_t shots_per_basis = 1;

  std::size_t dimension() const { return std::size_t{1} << num_qubits; }
};

/// Rotates `s` so that a computational measurement samples basis b.
inline void apply_tomography_basis(QuantumState& s, std::size_t basis) {
  const std::size_t n = s.num_qubits();
  switch (basis) {
    case 0:
      return;
    case 1:
      for (std::size_t q = 0; q < n; ++q) apply_h(s, q);
      return;
    case 2:
      for (std::size_t q = 0; q < n; ++q) apply_sdg(s, q);
      for (std::size_t q = 0; q < n; ++q) apply_h(s, q);
      return;
    case 3:
      for (std::size_t q = 0; q < n; q += 2) apply_sdg(s, q);
      for (std::size_t q = 0; q < n; ++q) apply_h(s, q);
      return;
    default:
      throw std::out_of_range("tomography basis index must be 0..3");
  }
}

struct TomographyCounts {
  std::size_t num_qubits = 0;
  std::array<std::vector<std::uint64_t>, kTomographyBases> counts;

  std::uint64_t shots(std::size_t basis) const {
    std::uint64_t total = 0;
    for (auto c : counts[basis]) total += c;
    return total;
  }
};

/// Counts from exact outcome probabilities scaled by `weight`; lets the
/// reconstruction be exercised without sampling noise.
inline TomographyCounts expected_counts(const QuantumState& s, double weight) {
  TomographyCounts out;
  out.num_qubits = s.num_qubits();
  for (std::size_t b = 0; b < kTomographyBases; ++b) {
    QuantumState rotated = s;
    rotated.set_trace(nullptr);
    apply_tomography_basis(rotated, b);
    const auto p = probabilities(rotated);
    out.counts[b].resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      out.counts[b][i] = static_cast<std::uint64_t>(std::llround(p[i] * weight));
    }
  }
  return out;
}

inline TomographyCounts collect(const QuantumState& s, const TomographyPlan& plan,
                                std::uint64_t rng_seed) {
  if (plan.num_qubits != s.num_qubits()) {
    throw std::invalid_argument("tomography plan does not match the state size");
  }
  if (plan.shots_per_basis == 0) throw std::invalid_argument("shots per basis must be >= 1");
  std::mt19937_64 rng(rng_seed);
  TomographyCounts out;
  out.num_qubits = s.num_qubits();
  for (std::size_t b = 0; b < kTomographyBases; ++b) {
    QuantumState rotated = s;
    rotated.set_trace(nullptr);
    apply_tomography_basis(rotated, b);
    out.counts[b] = sample_multinomial(probabilities(rotated), plan.shots_per_basis, rng);
  }
  return out;
}

struct PureStateEstimate {
  std::vector<Complex> amplitudes;
  double log_likelihood = 0.0;  ///< per shot
  std::size_t iterations = 0;
  bool converged = false;
};

/// Squared overlap |<a|b>|^2 of two unit vectors.
inline double fidelity(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity of mismatched vectors");
  Complex overlap{};
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

/// Multiplies by a global phase so the largest-magnitude entry is real and
/// non-negative.
inline void fix_global_phase(std::vector<Complex>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best]) + 1e-15) best = i;
  }
  if (std::abs(v[best]) == 0.0) return;
  const Complex phase = std::conj(v[best]) / std::abs(v[best]);
  for (auto& a : v) a *= phase;
}

struct ReconstructionOptions {
  std::size_t max_iterations = 10000;
  double tolerance = 1e-10;      ///< per-shot log-likelihood improvement
  std::size_t restarts = 32;     ///< extra random-phase starting points
  std::uint64_t restart_seed = 0x5eed;
};

namespace detail {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline std::array<Matrix, kTomographyBases> basis_unitaries(std::size_t n) {
  const std::size_t d = std::size_t{1} << n;
  std::array<Matrix, kTomographyBases> out;
  for (std::size_t b = 0; b < kTomographyBases; ++b) {
    out[b] = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t col = 0; col < d; ++col) {
      auto s = QuantumState::basis(n, col);
      apply_tomography_basis(s, b);
      for (std::size_t row = 0; row < d; ++row) {
        out[b](static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = s[row];
      }
    }
  }
  return out;
}

class Likelihood {
 public:
  Likelihood(const TomographyCounts& counts)
      : unitaries_(basis_unitaries(counts.num_qubits)) {
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << counts.num_qubits);
    for (std::size_t b = 0; b < kTomographyBases; ++b) {
      if (counts.counts[b].size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("counts do not match the qubit count");
      }
      const auto shots = counts.shots(b);
      if (shots == 0) throw std::invalid_argument("every basis needs at least one shot");
      total_ += static_cast<double>(shots);
      n_[b] = Eigen::VectorXd(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        n_[b](i) = static_cast<double>(counts.counts[b][static_cast<std::size_t>(i)]);
      }
    }
  }

  // Per-shot log-likelihood of a unit vector psi.
  double value(const Vector& psi) const {
    double ll = 0.0;
    for (std::size_t b = 0; b < kTomographyBases; ++b) {
      const Vector amp = unitaries_[b] * psi;
      for (Eigen::Index i = 0; i < amp.size(); ++i) {
        if (n_[b](i) == 0.0) continue;
        ll += n_[b](i) * std::log(std::max(std::norm(amp(i)), kFloor));
      }
    }
    return ll / total_;
  }

  // R psi, with R as in the file comment.
  Vector ascent_direction(const Vector& psi) const {
    Vector out = Vector::Zero(psi.size());
    for (std::size_t b = 0; b < kTomographyBases; ++b) {
      Vector amp = unitaries_[b] * psi;
      for (Eigen::Index i = 0; i < amp.size(); ++i) {
        amp(i) *= n_[b](i) / std::max(std::norm(amp(i)), kFloor);
      }
      out += unitaries_[b].adjoint() * amp;
    }
    return out / total_;
  }

  Vector b1_start() const {
    Vector psi(n_[0].size());
    const double shots = n_[0].sum();
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = std::sqrt(n_[0](i) / shots);
    return psi;
  }

 private:
  static constexpr double kFloor = 1e-300;
  std::array<Matrix, kTomographyBases> unitaries_;
  std::array<Eigen::VectorXd, kTomographyBases> n_;
  double total_ = 0.0;
};

inline PureStateEstimate ascend(const Likelihood& L, Vector psi,
                                const ReconstructionOptions& options) {
  psi.normalize();
  double current = L.value(psi);
  double step = 1.0;
  PureStateEstimate est;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    est.iterations = it;
    const Vector direction = L.ascent_direction(psi) - psi;
    bool accepted = false;
    while (step > 1e-12) {
      Vector candidate = psi + step * direction;
      candidate.normalize();
      const double next = L.value(candidate);
      if (next >= current) {
        const double gain = next - current;
        psi = candidate;
        current = next;
        accepted = true;
        step = std::min(step * 1.5, 8.0);
        if (gain < options.tolerance) est.converged = true;
        break;
      }
      step *= 0.5;
    }
    // No uphill step exists along the direction: a stationary point.
    if (!accepted) est.converged = true;
    if (est.converged) break;
  }
  est.amplitudes.assign(psi.data(), psi.data() + psi.size());
  est.log_likelihood = current;
  return est;
}

}  // namespace detail

/// Maximum-likelihood pure state for four-basis counts. Starts from the B1
/// amplitudes with zero phases plus `restarts` random-phase variants; the
/// best likelihood wins. Throws PhysicsError if no start converges.
inline PureStateEstimate reconstruct(const TomographyCounts& counts,
                                     const ReconstructionOptions& options = {}) {
  const detail::Likelihood L(counts);
  const detail::Vector base = L.b1_start();
  std::mt19937_64 rng(options.restart_seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

  PureStateEstimate best;
  best.log_likelihood = -std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (std::size_t r = 0; r <= options.restarts; ++r) {
    detail::Vector start = base;
    if (r > 0) {
      for (Eigen::Index i = 0; i < start.size(); ++i) {
        // Keep a small floor so empty B1 outcomes can still acquire weight.
        const double magnitude = std::max(std::abs(start(i)), 1e-3);
        start(i) = std::polar(magnitude, angle(rng));
      }
    }
    auto est = detail::ascend(L, start, options);
    any_converged = any_converged || est.converged;
    if (est.log_likelihood > best.log_likelihood) best = std::move(est);
  }
  if (!any_converged) {
    std::ostringstream msg;
    msg << "tomography did not converge in " << options.max_iterations
        << " iterations; best per-shot log-likelihood " << best.log_likelihood;
    throw PhysicsError(msg.str());
  }
  fix_global_phase(best.amplitudes);
  return best;
}

/// Counts CSV `basis,outcome,count`; basis is 1..4, outcome a bitstring.
inline std::string to_csv(const TomographyCounts& counts) {
  std::string out = "basis,outcome,count\n";
  for (std::size_t b = 0; b < kTomographyBases; ++b) {
    for (std::size_t i = 0; i < counts.counts[b].size(); ++i) {
      out += std::to_string(b + 1) + "," + bitstring(i, counts.num_qubits) + "," +
             std::to_string(counts.counts[b][i]) + "\n";
    }
  }
  return out;
}

}  // namespace qvlasov
