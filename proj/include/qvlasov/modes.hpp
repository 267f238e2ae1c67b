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
 * @file modes.hpp
 * @brief Fourier density modes and the transform convention they use.
 *
 * rho~_m = N_x^{-1/2} sum_j rho_j exp(+2 pi i m j / N_x), which is exactly
 * what the QFT in the extraction circuit produces. The inverse carries the
 * minus sign. Wavenumbers are stored as signed integers m; the physical
 * wavenumber is 2 pi m / N_x.
 */

#pragma once

#include "qvlasov/io.hpp"
#include "qvlasov/statevector.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvlasov {

enum class Provenance { exact, shots };

inline const char* to_string(Provenance p) { return p == Provenance::exact ? "exact" : "shots"; }

/// The S lowest density modes, m = -S/2 .. S/2 - 1.
struct FourierDensity {
  std::size_t S = 0;
  std::size_t N_x = 0;
  std::vector<Complex> values;  ///< values[u] is mode m = u - S/2
  Provenance provenance = Provenance::exact;
  double p_v = 1.0;
  double p_x = 1.0;

  long long min_m() const { return -static_cast<long long>(S / 2); }
  long long max_m() const { return static_cast<long long>(S / 2) - 1; }
  bool contains(long long m) const { return m >= min_m() && m <= max_m(); }
  Complex mode(long long m) const {
    if (!contains(m)) {
      throw std::out_of_range("mode " + std::to_string(m) + " outside the extracted window");
    }
    return values[static_cast<std::size_t>(m - min_m())];
  }
};

/// Full transform of a real vector in the convention above, indexed by
/// m mod N.
inline std::vector<Complex> forward_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t m = 0; m < n; ++m) {
    Complex sum{};
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((m * j) % n) /
                           static_cast<double>(n);
      sum += x[j] * std::polar(1.0, angle);
    }
    out[m] = sum * norm;
  }
  return out;
}

/// Inverse of forward_dft (input indexed by m mod N), complex output.
inline std::vector<Complex> inverse_dft(const std::vector<Complex>& modes) {
  const std::size_t n = modes.size();
  std::vector<Complex> out(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    Complex sum{};
    for (std::size_t m = 0; m < n; ++m) {
      if (modes[m] == Complex{}) continue;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((m * j) % n) /
                           static_cast<double>(n);
      sum += modes[m] * std::polar(1.0, angle);
    }
    out[j] = sum * norm;
  }
  return out;
}

/// Window of the full transform of rho, in the FourierDensity layout.
inline FourierDensity modes_of_density(const std::vector<double>& rho, std::size_t S) {
  const std::size_t n = rho.size();
  if (S == 0 || S > n || (S & (S - 1)) != 0) {
    throw std::invalid_argument("S must be a power of two not exceeding N_x");
  }
  const auto full = forward_dft(rho);
  FourierDensity out;
  out.S = S;
  out.N_x = n;
  out.values.resize(S);
  for (std::size_t u = 0; u < S; ++u) {
    const long long m = static_cast<long long>(u) - static_cast<long long>(S / 2);
    out.values[u] = full[static_cast<std::size_t>((m + static_cast<long long>(n)) %
                                                  static_cast<long long>(n))];
  }
  return out;
}

/// A_m of the perturbation delta_j = sum_m A_m exp(2 pi i m j / N_x),
/// counting the +-m pair together: A_m = 2 rho~_{-m} / sqrt(N_x) for m != 0.
inline Complex perturbation_amplitude(const FourierDensity& modes, long long m) {
  return 2.0 * modes.mode(-m) / std::sqrt(static_cast<double>(modes.N_x));
}

/// A_m of delta_j = rho_j - rho_ref for each requested m, from the full
/// density: A_m = (2 / N) sum_j delta_j exp(-2 pi i m j / N).
inline std::map<long long, Complex> perturbation_amplitudes(const std::vector<double>& rho,
                                                            double rho_ref,
                                                            const std::vector<long long>& modes) {
  const std::size_t n = rho.size();
  const auto N = static_cast<long long>(n);
  std::map<long long, Complex> out;
  for (long long m : modes) {
    const long long wrapped = ((m % N) + N) % N;
    Complex sum{};
    for (std::size_t j = 0; j < n; ++j) {
      const auto phase = (wrapped * static_cast<long long>(j)) % N;
      sum += (rho[j] - rho_ref) *
             std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(phase) /
                                 static_cast<double>(n));
    }
    out[m] = 2.0 * sum / static_cast<double>(n);
  }
  return out;
}

/// Mode time-series CSV rows `cycle,m,re,im,abs` (no header).
inline std::string modes_csv_rows(double cycle, const FourierDensity& modes) {
  std::string out;
  for (long long m = modes.min_m(); m <= modes.max_m(); ++m) {
    const auto v = modes.mode(m);
    out += io::fmt(cycle) + "," + std::to_string(m) + "," + io::fmt(v.real()) + "," +
           io::fmt(v.imag()) + "," + io::fmt(std::abs(v)) + "\n";
  }
  return out;
}

}  // namespace qvlasov
