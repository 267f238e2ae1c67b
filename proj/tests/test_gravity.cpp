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


#include "qvlasov/gravity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace qvlasov {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_density(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<double> rho(n);
  for (double& r : rho) r = u(rng);
  return rho;
}

double poisson_residual(const std::vector<double>& rho, const PotentialField& p, double G) {
  const std::size_t n = rho.size();
  double mean = 0.0;
  for (double r : rho) mean += r;
  mean /= static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lap = p.phi[(j + 1) % n] - 2.0 * p.phi[j] + p.phi[(j + n - 1) % n];
    worst = std::max(worst, std::abs(lap - 4.0 * kPi * G * (rho[j] - mean)));
  }
  return worst;
}

TEST(Greens1d, NyquistAndSymmetry) {
  EXPECT_NEAR(greens_1d(32, 64, 0.7), -kPi * 0.7, 1e-14);
  for (long long k = 1; k < 64; ++k) {
    EXPECT_NEAR(greens_1d(k, 64, 1.0) / greens_1d(64 - k, 64, 1.0), 1.0, 1e-13);
    EXPECT_LT(greens_1d(k, 64, 1.0), 0.0);
  }
  EXPECT_THROW(greens_1d(0, 64, 1.0), std::domain_error);
  EXPECT_THROW(greens_1d(128, 64, 1.0), std::domain_error);
}

TEST(Greens1d, InvertsTheDiscreteLaplacian) {
  // Apply the three-point stencil to a plane wave and read off its eigenvalue.
  const std::size_t n = 64;
  const double G = 0.3;
  for (long long k : {1LL, 5LL, 17LL, 63LL}) {
    std::vector<Complex> wave(n);
    for (std::size_t j = 0; j < n; ++j) wave[j] = std::polar(1.0, -2.0 * kPi * k * j / n);
    const Complex eigenvalue = (wave[1] - 2.0 * wave[0] + wave[n - 1]) / wave[0];
    EXPECT_NEAR(eigenvalue.imag(), 0.0, 1e-12);
    EXPECT_NEAR(greens_1d(k, n, G), 4.0 * kPi * G / eigenvalue.real(), 1e-9);
  }
}

TEST(Greens3d, ReducesAndPermutes) {
  EXPECT_NEAR(greens_3d(8, 8, 8, 16, 1.0), -kPi / 3.0, 1e-14);
  EXPECT_DOUBLE_EQ(greens_3d(1, 0, 0, 64, 2.0), greens_1d(1, 64, 2.0));
  EXPECT_NEAR(greens_3d(1, 2, 3, 16, 1.0), greens_3d(3, 1, 2, 16, 1.0), 1e-13);
  EXPECT_NEAR(greens_3d(1, 2, 3, 16, 1.0), greens_3d(2, 3, 1, 16, 1.0), 1e-13);
  EXPECT_THROW(greens_3d(0, 16, -16, 16, 1.0), std::domain_error);
}

TEST(Force, HomogeneousDensityExertsNoForce) {
  const GridConfig g(5, 1, Rational(1), 1.0);
  const auto F = force_full_density(std::vector<double>(32, 3.0), g);
  for (double f : F.F) EXPECT_NEAR(f, 0.0, 1e-13);
  const auto Fm = force_from_modes(modes_of_density(std::vector<double>(32, 3.0), 8), g);
  for (double f : Fm.F) EXPECT_NEAR(f, 0.0, 1e-13);
}

TEST(Force, SingleCosineMode) {
  // rho = r (1 + A cos(theta j)) gives phi_j = r A G~(m) cos(theta j) and
  // F_j = r A G~(m) sin(theta) sin(theta j).
  const std::size_t n = 32;
  const double G = 0.4, r = 1.5, A = 0.2;
  const GridConfig g(5, 1, Rational(1), G);
  for (long long m : {1LL, 3LL, 7LL}) {
    const double theta = 2.0 * kPi * m / n;
    std::vector<double> rho(n);
    for (std::size_t j = 0; j < n; ++j) rho[j] = r * (1.0 + A * std::cos(theta * j));
    const double amp = r * A * (-kPi * G / std::pow(std::sin(kPi * m / n), 2));
    const auto F = force_from_modes(modes_of_density(rho, 16), g);
    const auto phi = potential_full_density(rho, g);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(phi.phi[j], amp * std::cos(theta * j), 1e-12);
      EXPECT_NEAR(F.F[j], amp * std::sin(theta) * std::sin(theta * j), 1e-12);
    }
  }
}

TEST(Force, PoissonIdentityForRandomDensities) {
  const GridConfig g(6, 1, Rational(1), 0.9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = random_density(64, seed);
    EXPECT_LE(poisson_residual(rho, potential_full_density(rho, g), g.G()), 1e-10);
    // S = N_x keeps every mode, so the identity holds for the window too.
    EXPECT_LE(poisson_residual(rho, potential_from_modes(modes_of_density(rho, 64), g), g.G()),
              1e-10);
  }
}

TEST(Force, HasNoNetSelfForce) {
  const GridConfig g(6, 1, Rational(1), 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rho = random_density(64, 50 + seed);
    for (std::size_t S : {4u, 16u, 64u}) {
      const auto F = force_from_modes(modes_of_density(rho, S), g);
      double momentum = 0.0;
      for (std::size_t j = 0; j < 64; ++j) momentum += F.F[j] * rho[j];
      EXPECT_NEAR(momentum, 0.0, 1e-8) << "S=" << S;
    }
  }
}

TEST(Force, FullWindowEqualsUntruncated) {
  const GridConfig g(4, 1, Rational(1), 1.0);
  const auto rho = random_density(16, 7);
  const auto a = force_from_modes(modes_of_density(rho, 16), g);
  const auto b = force_full_density(rho, g);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_NEAR(a.F[j], b.F[j], 1e-12);
}

TEST(Force, WindowEqualsBandLimitedDensity) {
  // The window S uses every |m| <= S/2; filtering rho to that band by hand
  // and solving in full must give the same force.
  const std::size_t n = 32;
  const GridConfig g(5, 1, Rational(1), 1.0);
  const auto rho = random_density(n, 8);
  for (std::size_t S : {2u, 4u, 8u, 16u}) {
    auto spectrum = forward_dft(rho);
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t dist = std::min(m, n - m);
      if (dist > S / 2) spectrum[m] = 0.0;
    }
    std::vector<double> filtered(n);
    const auto back = inverse_dft(spectrum);
    for (std::size_t j = 0; j < n; ++j) filtered[j] = back[j].real();
    const auto a = force_from_modes(modes_of_density(rho, S), g);
    const auto b = force_full_density(filtered, g);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(a.F[j], b.F[j], 1e-12) << "S=" << S;
  }
}

TEST(Force, PointMassPullsInward) {
  const std::size_t n = 16;
  const GridConfig g(4, 1, Rational(1), 1.0);
  std::vector<double> rho(n, 0.0);
  rho[5] = 1.0;
  const auto F = force_full_density(rho, g);
  EXPECT_NEAR(F.F[5], 0.0, 1e-13);
  for (std::size_t d = 1; d < n / 2; ++d) {
    EXPECT_NEAR(F.F[(5 + d) % n], -F.F[(5 + n - d) % n], 1e-12);
  }
  EXPECT_LT(F.F[6], 0.0);  // attraction toward the source
  EXPECT_GT(F.F[4], 0.0);
}

TEST(Force, RejectsMismatchedGrids) {
  const GridConfig g(4, 1, Rational(1), 1.0);
  EXPECT_THROW(force_full_density(std::vector<double>(8, 1.0), g), std::invalid_argument);
  EXPECT_THROW(force_from_modes(modes_of_density(std::vector<double>(8, 1.0), 4), g),
               std::invalid_argument);
}

}  // namespace
}  // namespace qvlasov
