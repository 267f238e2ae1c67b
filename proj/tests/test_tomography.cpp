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


#include "qvlasov/tomography.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace qvlasov {
namespace {

QuantumState random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> a(std::size_t{1} << n);
  for (auto& x : a) x = {g(rng), g(rng)};
  return QuantumState::normalized(std::move(a));
}

// Kronecker product of per-qubit 2x2 unitaries, qubit 0 most significant.
Eigen::MatrixXcd basis_matrix(std::size_t n, std::size_t basis) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd H;
  H << r, r, r, -r;
  Eigen::Matrix2cd Sdg = Eigen::Matrix2cd::Identity();
  Sdg(1, 1) = Complex(0.0, -1.0);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    if (basis == 1) u = H;
    if (basis == 2) u = H * Sdg;
    if (basis == 3) u = (q % 2 == 0) ? Eigen::Matrix2cd(H * Sdg) : H;
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index a = 0; a < out.rows(); ++a)
      for (Eigen::Index b = 0; b < out.cols(); ++b) next.block(2 * a, 2 * b, 2, 2) = out(a, b) * u;
    out = next;
  }
  return out;
}

std::vector<Complex> to_vector(const QuantumState& s) {
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

TEST(TomographyBases, MatchKroneckerProducts) {
  const auto s = random_state(3, 1);
  Eigen::VectorXcd psi(8);
  for (int i = 0; i < 8; ++i) psi(i) = s[i];
  for (std::size_t b = 0; b < kTomographyBases; ++b) {
    QuantumState rotated = s;
    apply_tomography_basis(rotated, b);
    const Eigen::VectorXcd expected = basis_matrix(3, b) * psi;
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(std::abs(rotated[i] - expected(i)), 0.0, 1e-12);
  }
  QuantumState t = s;
  EXPECT_THROW(apply_tomography_basis(t, 4), std::out_of_range);
}

TEST(Collect, ZeroStateInComputationalAndHadamardBases) {
  const QuantumState zero(3);
  const std::uint64_t shots = 80000;
  const auto counts = collect(zero, TomographyPlan{3, shots}, 2);
  EXPECT_EQ(counts.counts[0][0], shots);
  // B2 is uniform: each outcome is binomial(shots, 1/8).
  const double mean = shots / 8.0;
  const double sigma = std::sqrt(shots * (1.0 / 8.0) * (7.0 / 8.0));
  for (auto c : counts.counts[1]) EXPECT_LE(std::abs(static_cast<double>(c) - mean), 5.0 * sigma);
  for (std::size_t b = 0; b < kTomographyBases; ++b) EXPECT_EQ(counts.shots(b), shots);
}

TEST(Collect, FrequenciesStayInsideTheDkwBand) {
  const auto s = random_state(3, 3);
  const std::uint64_t shots = 50000;
  const auto counts = collect(s, TomographyPlan{3, shots}, 4);
  // 1 - 1e-6 confidence per basis
  const double eps = std::sqrt(std::log(2.0 / 1e-6) / (2.0 * shots));
  for (std::size_t b = 0; b < kTomographyBases; ++b) {
    const Eigen::VectorXcd rotated = basis_matrix(3, b) * Eigen::Map<const Eigen::VectorXcd>(
                                                              s.amplitudes().data(), 8);
    double cdf = 0.0, emp = 0.0;
    for (int i = 0; i < 8; ++i) {
      cdf += std::norm(rotated(i));
      emp += static_cast<double>(counts.counts[b][i]) / shots;
      EXPECT_LE(std::abs(cdf - emp), eps) << "basis " << b << " outcome " << i;
    }
  }
}

TEST(Collect, RejectsMismatchedPlans) {
  const QuantumState s(2);
  EXPECT_THROW(collect(s, TomographyPlan{3, 10}, 0), std::invalid_argument);
  EXPECT_THROW(collect(s, TomographyPlan{2, 0}, 0), std::invalid_argument);
}

TEST(Collect, SameSeedSameCounts) {
  const auto s = random_state(2, 5);
  const auto a = collect(s, TomographyPlan{2, 1000}, 9);
  const auto b = collect(s, TomographyPlan{2, 1000}, 9);
  EXPECT_EQ(a.counts, b.counts);
}

TEST(Reconstruct, ZeroStateIsRecoveredExactly) {
  // Noise-free counts: 10^4 in B1, uniform 1250 per outcome elsewhere.
  const QuantumState zero(3);
  const auto est = reconstruct(expected_counts(zero, 1e4));
  EXPECT_NEAR(fidelity(est.amplitudes, to_vector(zero)), 1.0, 1e-6);
}

TEST(Reconstruct, SampledZeroStateErrorIsShotLimited) {
  const QuantumState zero(3);
  const auto est = reconstruct(collect(zero, TomographyPlan{3, 10000}, 1));
  EXPECT_GE(fidelity(est.amplitudes, to_vector(zero)), 1.0 - 1e-3);
}

TEST(Reconstruct, ExactProbabilitiesGiveNearUnitFidelity) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto s = random_state(n, 100 * n + seed);
      const auto est = reconstruct(expected_counts(s, 1e12));
      EXPECT_GE(fidelity(est.amplitudes, to_vector(s)), 1.0 - 1e-8) << "n=" << n << " seed=" << seed;
    }
  }
}

TEST(Reconstruct, RandomEightDimensionalStateAtOneMillionShots) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = random_state(3, 200 + seed);
    const auto est = reconstruct(collect(s, TomographyPlan{3, 1000000}, seed));
    EXPECT_GE(fidelity(est.amplitudes, to_vector(s)), 0.99) << "seed=" << seed;
  }
}

TEST(Reconstruct, EstimateIsUnitNormAndPhaseFixed) {
  const auto s = random_state(2, 7);
  const auto est = reconstruct(collect(s, TomographyPlan{2, 20000}, 3));
  double norm = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < est.amplitudes.size(); ++i) {
    norm += std::norm(est.amplitudes[i]);
    if (std::abs(est.amplitudes[i]) > std::abs(est.amplitudes[largest])) largest = i;
  }
  EXPECT_NEAR(norm, 1.0, 1e-10);
  EXPECT_NEAR(est.amplitudes[largest].imag(), 0.0, 1e-12);
  EXPECT_GT(est.amplitudes[largest].real(), 0.0);
}

TEST(Fidelity, IgnoresGlobalPhase) {
  const auto s = random_state(3, 8);
  auto rotated = to_vector(s);
  for (auto& a : rotated) a *= std::polar(1.0, 1.234);
  EXPECT_NEAR(fidelity(to_vector(s), rotated), 1.0, 1e-12);
  fix_global_phase(rotated);
  auto reference = to_vector(s);
  fix_global_phase(reference);
  for (std::size_t i = 0; i < rotated.size(); ++i) {
    EXPECT_NEAR(std::abs(rotated[i] - reference[i]), 0.0, 1e-12);
  }
}

TEST(CountsCsv, ListsEveryBasisAndOutcome) {
  const auto counts = collect(QuantumState(1), TomographyPlan{1, 4}, 0);
  const std::string csv = to_csv(counts);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "basis,outcome,count");
  EXPECT_NE(csv.find("\n1,0,4\n"), std::string::npos);
  EXPECT_NE(csv.find("\n1,1,0\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

}  // namespace
}  // namespace qvlasov
