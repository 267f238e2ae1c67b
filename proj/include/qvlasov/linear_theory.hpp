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
 * @file linear_theory.hpp
 * @brief Maxwellian equilibria and the linear Jeans dispersion relation
 *        (k/k_J)^2 = 1 + w Z(w) along the imaginary w axis.
 */

#pragma once

#include "qvlasov/grid.hpp"
#include "qvlasov/io.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

struct EquilibriumSpec {
  double rho_ref = 1.0;
  double sigma = 0.11;
  double A = 0.1;
  long long m = 2;  ///< perturbation mode index; k = 2 pi m / N_x

  double wavenumber(const GridConfig& grid) const {
    return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(grid.N_x());
  }
};

inline double jeans_wavenumber(double rho_ref, double sigma, double G) {
  if (!(rho_ref > 0.0) || !(sigma > 0.0) || !(G > 0.0)) {
    throw std::invalid_argument("jeans_wavenumber needs positive inputs");
  }
  return std::sqrt(4.0 * std::numbers::pi * G * rho_ref) / sigma;
}

/// G that places on-grid wavenumber k at the requested k/k_J.
inline double gravitational_constant_for(double k_over_kJ, double k, double sigma, double rho_ref) {
  if (!(k_over_kJ > 0.0)) throw std::invalid_argument("k/k_J must be positive");
  const double kJ = k / k_over_kJ;
  return kJ * kJ * sigma * sigma / (4.0 * std::numbers::pi * rho_ref);
}

namespace detail {

inline constexpr double kZCutoff = 12.0;

// (exp(-s^2) - exp(-w^2)) / (s - w), entire in s. Near s = w the Hermite
// generating function exp(-(w+h)^2) = exp(-w^2) sum_n H_n(w) (-h)^n / n!
// avoids the cancellation.
inline std::complex<double> regularized_integrand(double s, std::complex<double> w,
                                                  std::complex<double> ew2) {
  const std::complex<double> h = s - w;
  if (std::abs(h) > 0.1) return (std::complex<double>(std::exp(-s * s), 0.0) - ew2) / h;
  // sum_{n>=1} H_n(w) c_n with c_n = (-1)^n h^{n-1} / n!
  std::complex<double> sum = 0.0;
  std::complex<double> hermite_prev = 1.0;     // H_0
  std::complex<double> hermite = 2.0 * w;      // H_1
  std::complex<double> c = -1.0;               // c_1
  for (int n = 1; n <= 30; ++n) {
    sum += hermite * c;
    const std::complex<double> next = 2.0 * w * hermite - 2.0 * static_cast<double>(n) * hermite_prev;
    hermite_prev = hermite;
    hermite = next;
    c *= -h / static_cast<double>(n + 1);
  }
  return ew2 * sum;
}

template <typename F>
double integrate_real(F&& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-15);
}

}  // namespace detail

/// Plasma dispersion function Z(w) = pi^{-1/2} int exp(-s^2) / (s - w) ds,
/// continued analytically into Im w < 0 (Landau prescription). Real w is
/// rejected.
inline std::complex<double> plasma_Z(std::complex<double> w) {
  using namespace std::complex_literals;
  if (w.imag() == 0.0) throw std::domain_error("plasma_Z is not evaluated on the real axis");
  const double L = detail::kZCutoff;
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  std::complex<double> integral;

  // Split at Re w so the peak of the integrand sits on a panel boundary.
  const double split = std::clamp(w.real(), -L, L);
  auto integrate = [&](auto&& g) {
    auto re = [&](double s) { return g(s).real(); };
    auto im = [&](double s) { return g(s).imag(); };
    return std::complex<double>(
        detail::integrate_real(re, -L, split) + detail::integrate_real(re, split, L),
        detail::integrate_real(im, -L, split) + detail::integrate_real(im, split, L));
  };

  if (std::abs(w.imag()) >= 1.0) {
    integral = integrate([w](double s) { return std::exp(-s * s) / (s - w); });
  } else {
    const std::complex<double> ew2 = std::exp(-w * w);
    integral = integrate([w, ew2](double s) { return detail::regularized_integrand(s, w, ew2); });
    integral += ew2 * (std::log(L - w) - std::log(-L - w));
  }
  std::complex<double> Z = inv_sqrt_pi * integral;
  if (w.imag() < 0.0) Z += 2.0i * std::sqrt(std::numbers::pi) * std::exp(-w * w);
  return Z;
}

enum class Regime { growing, damped };

inline const char* to_string(Regime r) { return r == Regime::growing ? "growing" : "damped"; }

struct DispersionSolution {
  double k_over_kJ = 0.0;
  double gamma = 0.0;
  Regime regime = Regime::growing;
  std::complex<double> w;
  double residual = 0.0;
};

/// |(k/k_J)^2 - 1 - w Z(w)|.
inline double dispersion_residual(double k_over_kJ, std::complex<double> w) {
  return std::abs(k_over_kJ * k_over_kJ - 1.0 - w * plasma_Z(w));
}

namespace detail {

// exp(y^2) erfc(y) for y >= 0. Past y = 8 the product heads for overflow,
// so the asymptotic series (1/(y sqrt pi)) sum_n (-1)^n (2n-1)!! / (2y^2)^n
// takes over; its terms are still shrinking after 60 of them.
inline double scaled_erfc(double y) {
  if (y < 8.0) return std::exp(y * y) * boost::math::erfc(y);
  const double x = 1.0 / (2.0 * y * y);
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 60; ++n) {
    const double next = -term * (2.0 * n - 1.0) * x;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
  }
  return sum / (y * std::sqrt(std::numbers::pi));
}

// 1 + wZ(w) at w = +iy (growing) or w = -iy (continued sheet), in closed
// form through erfc; used to bracket and bisect. The returned root is then
// checked against the quadrature Z above.
inline double one_plus_wZ(double y, Regime regime) {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  if (regime == Regime::growing) return 1.0 - sqrt_pi * y * scaled_erfc(y);
  return 1.0 + sqrt_pi * y * std::exp(y * y) * (2.0 - boost::math::erfc(y));
}

}  // namespace detail

/// Purely imaginary root of (k/k_J)^2 = 1 + w Z(w). Growing modes use
/// w = +i y, damped ones the continued sheet w = -i y; in both cases
/// gamma = y sqrt(8 pi G rho_ref) (k/k_J).
inline DispersionSolution solve_dispersion(double k_over_kJ, double rho_ref, double G) {
  if (!(k_over_kJ > 0.0) || k_over_kJ == 1.0) {
    throw std::invalid_argument("k/k_J must be positive and different from 1");
  }
  if (!(rho_ref > 0.0) || !(G > 0.0)) {
    throw std::invalid_argument("rho_ref and G must be positive");
  }
  const Regime regime = k_over_kJ < 1.0 ? Regime::growing : Regime::damped;
  const double target = k_over_kJ * k_over_kJ;
  auto f = [&](double y) { return detail::one_plus_wZ(y, regime) - target; };

  double lo = 0.0;
  double hi = 1e-3;
  std::vector<std::pair<double, double>> scanned{{lo, f(lo)}};
  while (f(lo) * f(hi) > 0.0) {
    scanned.emplace_back(hi, f(hi));
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) {
      std::ostringstream msg;
      msg << "no dispersion root bracketed for k/k_J=" << k_over_kJ << "; scanned (y, residual):";
      for (const auto& [y, r] : scanned) msg << " (" << y << ", " << r << ")";
      throw std::runtime_error(msg.str());
    }
  }
  auto [a, b] = boost::math::tools::bisect(
      f, lo, hi, [](double x, double y) { return std::abs(y - x) <= 4e-16 * std::max(1.0, x); });
  const double y = 0.5 * (a + b);

  DispersionSolution sol;
  sol.k_over_kJ = k_over_kJ;
  sol.regime = regime;
  sol.w = std::complex<double>(0.0, regime == Regime::growing ? y : -y);
  sol.gamma = y * std::sqrt(8.0 * std::numbers::pi * G * rho_ref) * k_over_kJ;
  sol.residual = dispersion_residual(k_over_kJ, sol.w);
  return sol;
}

/// f_M(v) (1 + A cos k x_j) sampled at cell centres, with
/// f_M = rho_ref / sqrt(2 pi sigma^2) exp(-v^2 / (2 sigma^2)).
inline DistributionFunction build_initial_condition(const EquilibriumSpec& spec,
                                                    const GridConfig& grid) {
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (spec.A < 0.0 || spec.A >= 1.0) throw std::invalid_argument("A must lie in [0, 1)");
  if (!(spec.rho_ref > 0.0)) throw std::invalid_argument("rho_ref must be positive");
  DistributionFunction f(grid);
  const double k = spec.wavenumber(grid);
  const double norm = spec.rho_ref / std::sqrt(2.0 * std::numbers::pi * spec.sigma * spec.sigma);
  for (std::size_t kv = 0; kv < grid.N_v(); ++kv) {
    const double v = to_double(grid.velocity(kv));
    const double fm = norm * std::exp(-v * v / (2.0 * spec.sigma * spec.sigma));
    for (std::size_t j = 0; j < grid.N_x(); ++j) {
      f(kv, j) = fm * (1.0 + spec.A * std::cos(k * static_cast<double>(j)));
    }
  }
  return f;
}

/// Fraction of the Maxwellian's mass missing from the discrete velocity
/// grid, 1 - dv sum_k f_M(v_k) / rho_ref. Above 1% the grid is too narrow.
inline double maxwellian_mass_loss(const EquilibriumSpec& spec, const GridConfig& grid) {
  double sum = 0.0;
  for (std::size_t kv = 0; kv < grid.N_v(); ++kv) {
    const double v = to_double(grid.velocity(kv));
    sum += std::exp(-v * v / (2.0 * spec.sigma * spec.sigma));
  }
  const double captured =
      grid.delta_v() * sum / std::sqrt(2.0 * std::numbers::pi * spec.sigma * spec.sigma);
  return 1.0 - captured;
}

/// Rate table CSV `k_over_kJ,gamma,regime`.
inline std::string rate_table_csv(const std::vector<DispersionSolution>& rows) {
  std::string out = "k_over_kJ,gamma,regime\n";
  for (const auto& r : rows) {
    out += io::fmt(r.k_over_kJ) + "," + io::fmt(r.gamma) + "," + to_string(r.regime) + "\n";
  }
  return out;
}

}  // namespace qvlasov
