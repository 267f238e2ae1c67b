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


#include "qvlasov/linear_theory.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace qvlasov {
namespace {

using namespace std::complex_literals;
using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;

// Composite Simpson rule for (1/sqrt(pi)) int_{-12}^{12} exp(-s^2)/(s - w) ds.
cplx brute_force_Z(cplx w, int panels = 1000000) {
  const double a = -12.0, b = 12.0;
  const double h = (b - a) / panels;
  cplx sum = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double s = a + i * h;
    const double weight = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * std::exp(-s * s) / (s - w);
  }
  return sum * h / 3.0 / std::sqrt(kPi);
}

// Growing-sheet root of 1 - sqrt(pi) y exp(y^2) erfc(y) = target by plain bisection.
double growing_root(double target) {
  auto f = [target](double y) {
    return 1.0 - std::sqrt(kPi) * y * std::exp(y * y) * std::erfc(y) - target;
  };
  double lo = 0.0, hi = 20.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(JeansWavenumber, UnitCase) {
  EXPECT_NEAR(jeans_wavenumber(1.0, 1.0, 1.0 / (4.0 * kPi)), 1.0, 1e-15);
  EXPECT_NEAR(jeans_wavenumber(4.0, 1.0, 1.0 / (4.0 * kPi)), 2.0, 1e-15);
  EXPECT_NEAR(jeans_wavenumber(1.0, 0.5, 1.0 / (4.0 * kPi)), 2.0, 1e-15);
  EXPECT_THROW(jeans_wavenumber(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST(JeansWavenumber, GravitationalConstantPlacesTheMode) {
  const double k = 2.0 * kPi * 2.0 / 64.0;
  for (double ratio : {0.3, 0.5, 1.5}) {
    const double G = gravitational_constant_for(ratio, k, 0.11, 1.0);
    EXPECT_NEAR(k / jeans_wavenumber(1.0, 0.11, G), ratio, 1e-14);
  }
}

TEST(PlasmaZ, MatchesBruteForceQuadrature) {
  for (cplx w : {1i, cplx(0.5, 0.5), cplx(-1.3, 0.8), cplx(2.0, 2.0)}) {
    const cplx expected = brute_force_Z(w);
    EXPECT_NEAR(std::abs(plasma_Z(w) - expected), 0.0, 1e-10) << w;
  }
  // Z(i) = i sqrt(pi) e erfc(1)
  EXPECT_NEAR(std::abs(plasma_Z(1i) - 1i * std::sqrt(kPi) * std::exp(1.0) * std::erfc(1.0)), 0.0,
              1e-12);
}

TEST(PlasmaZ, LargeArgumentAsymptote) {
  const cplx w = 50i;
  const cplx z = plasma_Z(w);
  // two terms of -1/w - 1/(2w^3) - 3/(4w^5); the third is 2.4e-9 here
  EXPECT_NEAR(std::abs(z - (-1.0 / w - 1.0 / (2.0 * w * w * w))), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(z + 1.0 / w), 1.0 / (2.0 * 50.0 * 50.0 * 50.0), 1e-8);
}

TEST(PlasmaZ, SatisfiesItsDifferentialEquation) {
  const double h = 1e-3;
  for (cplx w : {cplx(0.3, 0.7), cplx(-0.4, 1.5), cplx(0.2, -0.3), cplx(1.0, -0.6), 2i}) {
    const cplx derivative = (-plasma_Z(w + 2.0 * h) + 8.0 * plasma_Z(w + h) -
                             8.0 * plasma_Z(w - h) + plasma_Z(w - 2.0 * h)) /
                            (12.0 * h);
    EXPECT_NEAR(std::abs(derivative + 2.0 * (1.0 + w * plasma_Z(w))), 0.0, 1e-8) << w;
  }
}

TEST(PlasmaZ, ContinuousAcrossTheRealAxis) {
  for (double x : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    const cplx above = plasma_Z(cplx(x, 1e-6));
    const cplx below = plasma_Z(cplx(x, -1e-6));
    EXPECT_LT(std::abs(above - below), 1e-5) << x;
  }
  EXPECT_THROW(plasma_Z(cplx(1.0, 0.0)), std::domain_error);
}

TEST(PlasmaZ, ReflectionSymmetry) {
  for (cplx w : {cplx(0.4, 0.9), cplx(1.1, -0.5)}) {
    const cplx reflected = plasma_Z(-std::conj(w));
    EXPECT_NEAR(std::abs(reflected + std::conj(plasma_Z(w))), 0.0, 1e-11) << w;
  }
}

TEST(Dispersion, ResidualsVanishAtTheRoots) {
  for (double ratio : {0.1, 0.3, 0.5, 0.8, 0.95, 1.05, 1.2, 1.5, 2.0, 3.0}) {
    const auto sol = solve_dispersion(ratio, 1.0, 0.5);
    EXPECT_LE(sol.residual, 1e-10) << ratio;
    EXPECT_LE(dispersion_residual(ratio, sol.w), 1e-10) << ratio;
    EXPECT_GT(sol.gamma, 0.0);
    EXPECT_EQ(sol.regime, ratio < 1.0 ? Regime::growing : Regime::damped);
  }
}

TEST(Dispersion, StronglyUnstableRootsStayFinite) {
  // k << k_J puts the root far up the imaginary axis, where exp(y^2) alone
  // would overflow.
  for (double ratio : {0.05, 0.02, 0.01}) {
    const auto sol = solve_dispersion(ratio, 1.0, 1.0);
    EXPECT_TRUE(std::isfinite(sol.gamma));
    EXPECT_LE(sol.residual, 1e-10) << ratio;
  }
  EXPECT_NEAR(detail::scaled_erfc(8.0 - 1e-12) / detail::scaled_erfc(8.0), 1.0, 1e-12);
}

TEST(Dispersion, GrowthRateMatchesIndependentBisection) {
  const double G = 0.3, rho = 2.0;
  for (double ratio : {0.3, 0.5, 0.8}) {
    const double y = growing_root(ratio * ratio);
    const auto sol = solve_dispersion(ratio, rho, G);
    EXPECT_NEAR(sol.gamma, y * std::sqrt(8.0 * kPi * G * rho) * ratio, 1e-10) << ratio;
  }
}

TEST(Dispersion, RatesVanishAtMarginalStability) {
  std::vector<double> growing;
  for (double ratio : {0.3, 0.5, 0.8, 0.9, 0.99, 0.999}) {
    growing.push_back(solve_dispersion(ratio, 1.0, 1.0).gamma);
  }
  for (std::size_t i = 1; i < growing.size(); ++i) EXPECT_LT(growing[i], growing[i - 1]);
  std::vector<double> damped;
  for (double ratio : {1.001, 1.01, 1.1, 1.2, 1.5, 2.0}) {
    damped.push_back(solve_dispersion(ratio, 1.0, 1.0).gamma);
  }
  for (std::size_t i = 1; i < damped.size(); ++i) EXPECT_GT(damped[i], damped[i - 1]);
  EXPECT_LT(growing.back(), 0.01 * growing.front());
  EXPECT_LT(damped.front(), 0.01 * damped.back());
  EXPECT_THROW(solve_dispersion(1.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(solve_dispersion(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST(Dispersion, RateTableCsv) {
  const std::string csv =
      rate_table_csv({solve_dispersion(0.5, 1.0, 1.0), solve_dispersion(1.5, 1.0, 1.0)});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k_over_kJ,gamma,regime");
  EXPECT_NE(csv.find(",growing\n"), std::string::npos);
  EXPECT_NE(csv.find(",damped\n"), std::string::npos);
}

TEST(InitialCondition, UnperturbedIsUniformInX) {
  const GridConfig g(4, 4, Rational(1));
  const auto f = build_initial_condition(EquilibriumSpec{1.0, 0.2, 0.0, 1}, g);
  for (std::size_t k = 0; k < g.N_v(); ++k)
    for (std::size_t j = 1; j < g.N_x(); ++j) EXPECT_EQ(f(k, j), f(k, 0));
}

TEST(InitialCondition, SymmetricInVelocity) {
  const GridConfig g(4, 5, Rational(1));
  const auto f = build_initial_condition(EquilibriumSpec{1.0, 0.11, 0.1, 2}, g);
  for (std::size_t k = 0; k < g.N_v(); ++k)
    for (std::size_t j = 0; j < g.N_x(); ++j)
      EXPECT_NEAR(f(k, j), f(g.N_v() - 1 - k, j), 1e-14);
}

TEST(InitialCondition, PerturbationProfile) {
  const GridConfig g(6, 6, Rational(1));
  const EquilibriumSpec spec{1.0, 0.11, 0.1, 2};
  const auto rho = density_of(build_initial_condition(spec, g));
  const double captured = 1.0 - maxwellian_mass_loss(spec, g);
  for (std::size_t j = 0; j < g.N_x(); ++j) {
    const double expected = captured * (1.0 + 0.1 * std::cos(spec.wavenumber(g) * j));
    EXPECT_NEAR(rho[j], expected, 1e-12);
  }
  EXPECT_LT(std::abs(maxwellian_mass_loss(spec, g)), 1e-8);
}

TEST(InitialCondition, MassLossOfAWideMaxwellian) {
  // sigma = 0.5 on V = 1 loses the tails beyond 2 sigma: 1 - erf(sqrt 2).
  const GridConfig g(2, 8, Rational(1));
  const EquilibriumSpec spec{1.0, 0.5, 0.0, 1};
  EXPECT_NEAR(maxwellian_mass_loss(spec, g), 1.0 - std::erf(std::sqrt(2.0)), 1e-4);
}

TEST(InitialCondition, RejectsBadParameters) {
  const GridConfig g(3, 3, Rational(1));
  EXPECT_THROW(build_initial_condition(EquilibriumSpec{1.0, 0.0, 0.1, 1}, g),
               std::invalid_argument);
  EXPECT_THROW(build_initial_condition(EquilibriumSpec{1.0, 0.1, 1.0, 1}, g),
               std::invalid_argument);
  EXPECT_THROW(build_initial_condition(EquilibriumSpec{-1.0, 0.1, 0.1, 1}, g),
               std::invalid_argument);
}

}  // namespace
}  // namespace qvlasov
