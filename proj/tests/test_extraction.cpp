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


#include "qvlasov/advection.hpp"
#include "qvlasov/analysis.hpp"
#include "qvlasov/extraction.hpp"
#include "qvlasov/linear_theory.hpp"
#include "qvlasov/modes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace qvlasov {
namespace {

DistributionFunction random_distribution(const GridConfig& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DistributionFunction f(g);
  for (double& v : f.values()) v = u(rng);
  return f;
}

FourierDensity exact_modes(const DistributionFunction& f, std::size_t S) {
  return extract_modes_exact(encode_distribution(f), f.grid(), S, normalization_of(f));
}

double relative_l2(const FourierDensity& a, const FourierDensity& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t u = 0; u < a.values.size(); ++u) {
    num += std::norm(a.values[u] - b.values[u]);
    den += std::norm(b.values[u]);
  }
  return std::sqrt(num / den);
}

TEST(Modes, UniformDensityHasOnlyTheZeroMode) {
  const GridConfig g(2, 2, Rational(1));
  const DistributionFunction f(g, std::vector<double>(16, 1.0));
  const auto m = exact_modes(f, 2);
  EXPECT_NEAR(std::abs(m.mode(0) - f.total_mass() / 2.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(m.mode(-1)), 0.0, 1e-12);
  EXPECT_EQ(m.provenance, Provenance::exact);
}

TEST(Modes, CosinePerturbationAmplitude) {
  const GridConfig g(6, 6, Rational(1));
  const EquilibriumSpec eq{1.0, 0.11, 0.1, 2};
  const auto f = build_initial_condition(eq, g);
  const auto m = exact_modes(f, 8);
  const double expected = 0.1 * 1.0 * std::sqrt(64.0) / 2.0;
  EXPECT_NEAR(std::abs(m.mode(2)), expected, 1e-6);
  EXPECT_NEAR(std::abs(m.mode(-2)), expected, 1e-6);
  EXPECT_NEAR(std::abs(perturbation_amplitude(m, 2)), 0.1, 1e-6);
}

class ExtractionWindow : public ::testing::TestWithParam<std::size_t> {};

TEST_P(ExtractionWindow, MatchesDirectDftOfTheDensity) {
  const std::size_t S = GetParam();
  const GridConfig g(4, 3, Rational(1));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto f = random_distribution(g, seed);
    const auto quantum = exact_modes(f, S);
    const auto direct = modes_of_density(density_of(f), S);
    ASSERT_EQ(quantum.values.size(), S);
    for (long long m = quantum.min_m(); m <= quantum.max_m(); ++m) {
      EXPECT_NEAR(std::abs(quantum.mode(m) - direct.mode(m)), 0.0, 1e-10) << "m=" << m;
    }
    // the density is real
    for (long long m = 1; m < static_cast<long long>(S / 2); ++m) {
      EXPECT_NEAR(std::abs(quantum.mode(-m) - std::conj(quantum.mode(m))), 0.0, 1e-10);
    }
    EXPECT_NEAR(std::abs(quantum.mode(0) - f.total_mass() / 4.0), 0.0, 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, ExtractionWindow, ::testing::Values(2, 4, 8, 16));

TEST(Modes, LargerWindowsAgreeOnTheCommonModes) {
  const GridConfig g(5, 3, Rational(1));
  const auto f = random_distribution(g, 9);
  const auto small = exact_modes(f, 4);
  const auto large = exact_modes(f, 16);
  for (long long m = small.min_m(); m <= small.max_m(); ++m) {
    EXPECT_NEAR(std::abs(small.mode(m) - large.mode(m)), 0.0, 1e-12);
  }
}

TEST(Modes, RejectsInvalidWindows) {
  const GridConfig g(3, 2, Rational(1));
  const auto s = encode_distribution(random_distribution(g, 1));
  EXPECT_THROW(extract_modes_exact(s, g, 3, Normalization{1.0}), std::invalid_argument);
  EXPECT_THROW(extract_modes_exact(s, g, 16, Normalization{1.0}), std::invalid_argument);
  EXPECT_THROW(exact_modes(random_distribution(g, 1), 8).mode(4), std::out_of_range);
}

TEST(Postselection, ClosedFormForPv) {
  const GridConfig g(3, 3, Rational(1));
  const auto f = random_distribution(g, 2);
  const auto rho = density_of(f);
  double sum = 0.0;
  for (double r : rho) sum += r * r;
  const double M = normalization_of(f).M;
  const double dv = g.delta_v();
  const double expected = sum / (dv * dv * static_cast<double>(g.N_v()) * M * M);
  const auto p = postselection_probabilities(encode_distribution(f), g, 4);
  EXPECT_NEAR(p.p_v, expected, 1e-12);
}

TEST(Postselection, PointMassSpreadsUniformly) {
  const GridConfig g(3, 4, Rational(1));
  DistributionFunction f(g);
  f(5, 2) = 1.0;
  const auto p = postselection_probabilities(encode_distribution(f), g, 8);
  EXPECT_NEAR(p.p_v, 1.0 / 16.0, 1e-14);
  EXPECT_NEAR(p.p_x, 1.0, 1e-14);  // S = N_x keeps everything
}

TEST(Postselection, ProbabilitiesAgreeWithModeWeights) {
  // p_x is the fraction of |rho~|^2 that falls inside the window.
  const GridConfig g(4, 2, Rational(1));
  const auto f = random_distribution(g, 3);
  const auto full = forward_dft(density_of(f));
  const auto window = modes_of_density(density_of(f), 4);
  double inside = 0.0, total = 0.0;
  for (const auto& v : full) total += std::norm(v);
  for (const auto& v : window.values) inside += std::norm(v);
  const auto p = postselection_probabilities(encode_distribution(f), g, 4);
  EXPECT_NEAR(p.p_x, inside / total, 1e-12);
}

TEST(Extraction, CountsItsGates) {
  const GridConfig g(4, 3, Rational(1));
  GateCounter counter;
  extract_modes_exact(encode_distribution(random_distribution(g, 4)), g, 4, Normalization{1.0},
                      &counter);
  const auto t = counter.tally("extraction");
  EXPECT_EQ(t.count(GateKind::H), 3u + 4u);  // H on R_v, then one per QFT qubit
  EXPECT_GT(t.count(GateKind::CPhase), 0u);
  EXPECT_EQ(t.increment_circuits, 1u);
}

TEST(ShotMode, HomogeneousDensityIsAnchoredExactly) {
  const GridConfig g(3, 2, Rational(1));
  const DistributionFunction f(g, std::vector<double>(32, 2.0));
  const auto m = extract_modes_shots(encode_distribution(f), g, 4, f.total_mass(), 100000, 5);
  EXPECT_NEAR(std::abs(m.mode(0) - f.total_mass() / std::sqrt(8.0)), 0.0, 1e-12);
  for (long long k : {-2LL, -1LL, 1LL}) EXPECT_LT(std::abs(m.mode(k)), 0.05 * std::abs(m.mode(0)));
  EXPECT_EQ(m.provenance, Provenance::shots);
}

TEST(ShotMode, JeansModesWithinTwoPercentOfExact) {
  const GridConfig g(6, 6, Rational(1));
  const EquilibriumSpec eq{1.0, 0.11, 0.1, 2};
  const auto f = build_initial_condition(eq, g);
  const auto state = encode_distribution(f);
  const auto exact = extract_modes_exact(state, g, 8, normalization_of(f));
  const auto shots = extract_modes_shots(state, g, 8, f.total_mass(), 1000000, 17);
  EXPECT_LT(relative_l2(shots, exact), 0.02);
  // acceptance estimate within 3 binomial sigma of the exact probability
  const double sigma = std::sqrt(exact.p_v * (1.0 - exact.p_v) / 1e6);
  EXPECT_LE(std::abs(shots.p_v - exact.p_v), 3.0 * sigma);
}

TEST(ShotMode, ErrorShrinksLikeInverseSquareRootOfShots) {
  const GridConfig g(5, 4, Rational(1));
  const EquilibriumSpec eq{1.0, 0.15, 0.3, 1};
  const auto f = build_initial_condition(eq, g);
  const auto state = encode_distribution(f);
  const auto exact = extract_modes_exact(state, g, 4, normalization_of(f));
  std::vector<double> log_n, log_err;
  for (std::uint64_t n : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
    double sum = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      sum += relative_l2(extract_modes_shots(state, g, 4, f.total_mass(), n, 1000 + t), exact);
    }
    log_n.push_back(std::log(static_cast<double>(n)));
    log_err.push_back(std::log(sum / trials));
  }
  EXPECT_NEAR(fit_line(log_n, log_err).slope, -0.5, 0.1);
}

TEST(ShotMode, DeterministicForAFixedSeed) {
  const GridConfig g(3, 2, Rational(1));
  const auto f = random_distribution(g, 6);
  const auto s = encode_distribution(f);
  const auto a = extract_modes_shots(s, g, 4, f.total_mass(), 5000, 3);
  const auto b = extract_modes_shots(s, g, 4, f.total_mass(), 5000, 3);
  EXPECT_EQ(a.values, b.values);
}

}  // namespace
}  // namespace qvlasov
