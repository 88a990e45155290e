// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Frequency selection by the vanishing period-averaged dissipation, loop
// actions over a period, and the resulting oscillator energy ladder.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/errors.hpp"

namespace bouncewalk {

struct DissipationResult {
  double value = 0.0;  // (1/tau) \int dF / kT0
  double tau = 0.0;
  double omega = 0.0;  // drive frequency tested, 0 when unknown
};

/// (1/tau) \int_0^tau dF / kT0 as the telescoping sum of sample increments.
/// `t` must be a uniform grid from 0 to tau.
inline DissipationResult dissipation_integral(std::span<const double> t,
                                              std::span<const double> F, double kT0,
                                              double omega = 0.0) {
  require(t.size() == F.size() && t.size() >= 2, ErrorKind::InsufficientData,
          "need at least two paired samples");
  require(kT0 > 0.0, ErrorKind::InvalidArgument, "kT0 must be > 0");
  const double tau = t.back() - t.front();
  require(tau > 0.0, ErrorKind::NonUniformGrid, "sample times must increase");
  const double h = tau / static_cast<double>(t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i) {
    require(std::abs((t[i] - t[i - 1]) - h) <= 1e-9 * h, ErrorKind::NonUniformGrid,
            "force samples are not on a uniform time grid");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < F.size(); ++i) total += F[i] - F[i - 1];
  return {total / (kT0 * tau), tau, omega};
}

/// Samples F0 cos(omega t) on `intervals` + 1 uniform points over [0, tau].
struct SampledForce {
  std::vector<double> t;
  std::vector<double> F;
};

inline SampledForce sample_cosine_force(double F0, double omega, double tau, int intervals) {
  require(intervals >= 1, ErrorKind::InvalidArgument, "need at least one interval");
  SampledForce s;
  for (int i = 0; i <= intervals; ++i) {
    const double t = tau * static_cast<double>(i) / intervals;
    s.t.push_back(t);
    s.F.push_back(F0 * std::cos(omega * t));
  }
  return s;
}

/// omega_n = n omega0 for n = 1..n_max.
inline std::vector<double> admissible_frequencies(double omega0, int n_max) {
  require(omega0 > 0.0, ErrorKind::InvalidArgument, "omega0 must be > 0");
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) out.push_back(n * omega0);
  return out;
}

struct ScanPoint {
  double omega_ratio = 0.0;
  double value = 0.0;
};

/// Dissipation integral of F0 cos(ratio omega0 t) over tau = 2 pi / omega0
/// for every ratio in `ratios`.
inline std::vector<ScanPoint> admissibility_scan(std::span<const double> ratios, double omega0,
                                                 double F0, double kT0, int intervals = 1000) {
  require(omega0 > 0.0, ErrorKind::InvalidArgument, "omega0 must be > 0");
  const double tau = kTwoPi / omega0;
  std::vector<ScanPoint> out;
  out.reserve(ratios.size());
  for (double ratio : ratios) {
    const double omega = ratio * omega0;
    const SampledForce f = sample_cosine_force(F0, omega, tau, intervals);
    out.push_back({ratio, dissipation_integral(f.t, f.F, kT0, omega).value});
  }
  return out;
}

/// \oint dS over a period for the n-th admissible frequency: quadrature of
/// the constant rate hbar omega_n over [0, tau] (composite Simpson).
inline double action_over_period(int n, double hbar, double omega0, int quadrature_steps = 64) {
  require(n >= 1, ErrorKind::InvalidArgument, "n must be >= 1");
  require(quadrature_steps >= 16, ErrorKind::InvalidArgument, "quadrature_steps must be >= 16");
  require(omega0 > 0.0, ErrorKind::InvalidArgument, "omega0 must be > 0");
  const int steps = quadrature_steps % 2 == 0 ? quadrature_steps : quadrature_steps + 1;
  const double tau = kTwoPi / omega0;
  const double omega_n = n * omega0;
  const double h = tau / steps;
  const auto rate = [&](double) { return hbar * omega_n; };
  double sum = rate(0.0) + rate(tau);
  for (int i = 1; i < steps; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * rate(i * h);
  return sum * h / 3.0;
}

struct SpectrumRow {
  int n = 0;
  double E = 0.0;       // (n + 1/2) hbar omega0
  double S_loop = 0.0;  // 2 pi n hbar; hbar / 2 for the ground state
};

using SpectrumTable = std::vector<SpectrumRow>;

inline SpectrumTable energy_spectrum(int n_max, double hbar, double omega0) {
  require(n_max >= 0, ErrorKind::InvalidArgument, "n_max must be >= 0");
  require(hbar > 0.0 && omega0 > 0.0, ErrorKind::InvalidArgument, "hbar and omega0 must be > 0");
  SpectrumTable table;
  for (int n = 0; n <= n_max; ++n) {
    SpectrumRow row;
    row.n = n;
    row.E = (n + 0.5) * hbar * omega0;
    row.S_loop = n == 0 ? 0.5 * hbar : action_over_period(n, hbar, omega0);
    table.push_back(row);
  }
  return table;
}

}  // namespace bouncewalk
