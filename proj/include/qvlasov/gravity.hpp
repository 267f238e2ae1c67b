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
 * @file gravity.hpp
 * @brief Periodic Poisson solve with the Green's function of the
 *        central-difference Laplacian.
 *
 * Because G~(m) = -pi G / sin^2(pi m / N) inverts the three-point Laplacian
 * exactly, phi_{j+1} - 2 phi_j + phi_{j-1} = 4 pi G (rho_j - mean rho)
 * holds to rounding, and the central-difference force is consistent with
 * it. The zero mode is dropped (the homogeneous background exerts no force).
 */

#pragma once

#include "qvlasov/advection.hpp"
#include "qvlasov/grid.hpp"
#include "qvlasov/modes.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

struct PotentialField {
  std::vector<double> phi;
};

inline double greens_1d(long long k, std::size_t N_x, double G) {
  const auto n = static_cast<long long>(N_x);
  if (((k % n) + n) % n == 0) {
    throw std::domain_error("Green's function is singular at the zero mode");
  }
  const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(N_x));
  return -std::numbers::pi * G / (s * s);
}

inline double greens_3d(long long kx, long long ky, long long kz, std::size_t N_x, double G) {
  const auto n = static_cast<long long>(N_x);
  auto wrapped = [n](long long k) { return ((k % n) + n) % n; };
  if (wrapped(kx) == 0 && wrapped(ky) == 0 && wrapped(kz) == 0) {
    throw std::domain_error("Green's function is singular at the zero mode");
  }
  auto s2 = [N_x](long long k) {
    const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(N_x));
    return s * s;
  };
  return -std::numbers::pi * G / (s2(kx) + s2(ky) + s2(kz));
}

namespace detail {

inline PotentialField potential_from_spectrum(std::vector<Complex> rho_modes, double G) {
  const std::size_t n = rho_modes.size();
  rho_modes[0] = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    rho_modes[m] *= greens_1d(static_cast<long long>(m), n, G);
  }
  const auto phi = inverse_dft(rho_modes);
  PotentialField out;
  out.phi.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.phi[j] = phi[j].real();
  return out;
}

}  // namespace detail

/// F_j = -(phi_{j+1} - phi_{j-1}) / (2 dx), periodic.
inline ForceField force_from_potential(const PotentialField& p) {
  const std::size_t n = p.phi.size();
  ForceField F(n);
  for (std::size_t j = 0; j < n; ++j) {
    F.F[j] = -(p.phi[(j + 1) % n] - p.phi[(j + n - 1) % n]) / (2.0 * GridConfig::delta_x());
  }
  return F;
}

inline PotentialField potential_full_density(const std::vector<double>& rho, const GridConfig& grid) {
  if (rho.size() != grid.N_x()) throw std::invalid_argument("density length must equal N_x");
  return detail::potential_from_spectrum(forward_dft(rho), grid.G());
}

/// Untruncated force: every mode 1..N_x-1.
inline ForceField force_full_density(const std::vector<double>& rho, const GridConfig& grid) {
  return force_from_potential(potential_full_density(rho, grid));
}

/// Potential from an extracted window. The window -S/2..S/2-1 is completed
/// with m = +S/2 = conj(rho~_{-S/2}) when S < N_x so the result is real and
/// symmetric in +-m; with S = N_x the -N_x/2 entry already covers it.
inline PotentialField potential_from_modes(const FourierDensity& modes, const GridConfig& grid) {
  const std::size_t n = grid.N_x();
  if (modes.N_x != n) throw std::invalid_argument("modes were extracted on another grid");
  std::vector<Complex> spectrum(n, Complex{});
  const auto N = static_cast<long long>(n);
  for (long long m = modes.min_m(); m <= modes.max_m(); ++m) {
    if (m == 0) continue;
    spectrum[static_cast<std::size_t>((m + N) % N)] = modes.mode(m);
  }
  if (modes.S < n) {
    const long long half = static_cast<long long>(modes.S / 2);
    spectrum[static_cast<std::size_t>(half)] = std::conj(modes.mode(-half));
  }
  return detail::potential_from_spectrum(std::move(spectrum), grid.G());
}

inline ForceField force_from_modes(const FourierDensity& modes, const GridConfig& grid) {
  return force_from_potential(potential_from_modes(modes, grid));
}

}  // namespace qvlasov
