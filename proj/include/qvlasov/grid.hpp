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
 * @file grid.hpp
 * @brief Phase-space discretization shared by the quantum and classical paths.
 *
 * Position cells are x_j = j (the cell width is fixed to 1), velocity cells
 * are centred at v_k = (2k+1) V / N_v - V, so the grid is symmetric and never
 * contains v = 0. Velocities are exact rationals: the event schedule relies on
 * testing t * v_k for integrality.
 */

#pragma once

#include "qvlasov/io.hpp"
#include "qvlasov/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

class GridConfig {
 public:
  GridConfig(unsigned n_x, unsigned n_v, Rational max_velocity,
             double gravitational_constant = 0.0)
      : n_x_(n_x), n_v_(n_v), V_(max_velocity), G_(gravitational_constant) {
    if (n_x < 2) throw std::invalid_argument("n_x must be >= 2");
    if (n_v < 1) throw std::invalid_argument("n_v must be >= 1");
    if (n_x + n_v > 30) throw std::invalid_argument("n_x + n_v must be <= 30");
    if (max_velocity <= 0) throw std::invalid_argument("V must be positive");
  }

  unsigned n_x() const { return n_x_; }
  unsigned n_v() const { return n_v_; }
  std::size_t N_x() const { return std::size_t{1} << n_x_; }
  std::size_t N_v() const { return std::size_t{1} << n_v_; }
  unsigned num_qubits() const { return n_x_ + n_v_; }

  const Rational& V() const { return V_; }
  double G() const { return G_; }
  static constexpr double delta_x() { return 1.0; }
  Rational delta_v_exact() const {
    return Rational(2) * V_ / static_cast<std::int64_t>(N_v());
  }
  double delta_v() const { return to_double(delta_v_exact()); }

  /// v_k = (2k+1) V / N_v - V.
  Rational velocity(std::size_t k) const {
    if (k >= N_v()) {
      throw std::out_of_range("velocity index " + std::to_string(k) +
                              " out of range");
    }
    const auto nv = static_cast<std::int64_t>(N_v());
    return Rational(2 * static_cast<std::int64_t>(k) + 1, nv) * V_ - V_;
  }

  /// max_k |v_k| = V (N_v - 1) / N_v.
  Rational max_speed() const {
    const auto nv = static_cast<std::int64_t>(N_v());
    return V_ * Rational(nv - 1, nv);
  }

  /// T = dx / max|v_k|: cadence of velocity advection and force refresh.
  Rational characteristic_time() const { return Rational(1) / max_speed(); }

  /// One cycle is 2 dx / dv = N_v / V.
  Rational cycle_time() const { return Rational(2) / delta_v_exact(); }

  GridConfig with_G(double G) const {
    GridConfig copy = *this;
    copy.G_ = G;
    return copy;
  }

  friend bool operator==(const GridConfig&, const GridConfig&) = default;

 private:
  unsigned n_x_;
  unsigned n_v_;
  Rational V_;
  double G_;
};

inline Rational velocity_of(const GridConfig& grid, std::size_t k) {
  return grid.velocity(k);
}

/// Classical N_v x N_x grid of f_{k;j}, stored row-major by velocity index.
class DistributionFunction {
 public:
  explicit DistributionFunction(const GridConfig& grid)
      : grid_(grid), values_(grid.N_v() * grid.N_x(), 0.0) {}

  DistributionFunction(const GridConfig& grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid.N_v() * grid.N_x()) {
      throw std::invalid_argument("distribution size does not match grid");
    }
    for (double v : values_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("distribution values must be finite and >= 0");
      }
    }
  }

  const GridConfig& grid() const { return grid_; }
  std::size_t N_x() const { return grid_.N_x(); }
  std::size_t N_v() const { return grid_.N_v(); }

  double operator()(std::size_t k, std::size_t j) const {
    return values_[k * grid_.N_x() + j];
  }
  double& operator()(std::size_t k, std::size_t j) {
    return values_[k * grid_.N_x() + j];
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double total_mass() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return GridConfig::delta_x() * grid_.delta_v() * sum;
  }

  friend bool operator==(const DistributionFunction&,
                         const DistributionFunction&) = default;

 private:
  GridConfig grid_;
  std::vector<double> values_;
};

/// M with M^2 = sum f^2: the amplitude-encoding normalization.
struct Normalization {
  double M;
};

/// rho_j = dv * sum_k f_{k;j}.
inline std::vector<double> density_of(const DistributionFunction& f) {
  const auto nx = f.N_x();
  const auto nv = f.N_v();
  std::vector<double> rho(nx, 0.0);
  for (std::size_t k = 0; k < nv; ++k) {
    for (std::size_t j = 0; j < nx; ++j) rho[j] += f(k, j);
  }
  const double dv = f.grid().delta_v();
  for (double& r : rho) r *= dv;
  return rho;
}

inline Normalization normalization_of(const DistributionFunction& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v * v;
  if (sum == 0.0) {
    throw std::invalid_argument("cannot normalize an all-zero distribution");
  }
  return Normalization{std::sqrt(sum)};
}

/// Snapshot CSV: header `j,k,f`, k outer, j inner.
inline std::string to_csv(const DistributionFunction& f) {
  std::string out = "j,k,f\n";
  for (std::size_t k = 0; k < f.N_v(); ++k) {
    for (std::size_t j = 0; j < f.N_x(); ++j) {
      out += std::to_string(j);
      out += ',';
      out += std::to_string(k);
      out += ',';
      out += io::fmt(f(k, j));
      out += '\n';
    }
  }
  return out;
}

inline DistributionFunction distribution_from_csv(const GridConfig& grid,
                                                  const std::string& text) {
  DistributionFunction f(grid);
  std::vector<bool> seen(grid.N_x() * grid.N_v(), false);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "j,k,f") {
    throw std::invalid_argument("snapshot CSV must start with 'j,k,f'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = io::split(line, ',');
    if (cells.size() != 3) throw std::invalid_argument("bad snapshot row: " + line);
    const auto j = std::stoul(cells[0]);
    const auto k = std::stoul(cells[1]);
    if (j >= grid.N_x() || k >= grid.N_v()) {
      throw std::out_of_range("snapshot cell out of range: " + line);
    }
    const double value = io::parse_double(cells[2]);
    if (!(value >= 0.0)) throw std::invalid_argument("negative f in snapshot");
    f(k, j) = value;
    seen[k * grid.N_x() + j] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw std::invalid_argument("snapshot CSV does not cover every cell");
  }
  return f;
}

}  // namespace qvlasov
