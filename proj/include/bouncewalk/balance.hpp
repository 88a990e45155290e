// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Coupling of the bouncer and walker pictures: n W_bouncer = W_walker, the
// implied bath energy, and the per-period heat bookkeeping of the resonant
// oscillator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/bouncer.hpp"
#include "bouncewalk/errors.hpp"
#include "bouncewalk/walker.hpp"

namespace bouncewalk {

inline constexpr int kDefaultBalancePeriods = 50;
inline constexpr int kMinRecommendedBalancePeriods = 10;

struct BalanceReport {
  int n = 0;
  double W_bouncer_measured = 0.0;  // per period
  double W_walker_measured = 0.0;   // over n periods
  double W_walker_std_error = 0.0;
  double ratio = 0.0;               // W_walker / (n W_bouncer)
  double implied_kT0 = 0.0;         // kT0 solving n W_bouncer = n (N 2pi/w0) zeta kT0
  double implied_E_tot = 0.0;       // N implied_kT0
  double expected_E_tot = 0.0;      // (gamma / zeta) hbar w0
  double hbar_omega0 = 0.0;
  double gamma_over_zeta = 0.0;
  bool low_n_warning = false;       // n below the recommended minimum
};

namespace detail {

inline BalanceReport make_balance(double W_bouncer, double W_walker, double W_walker_se, int n,
                                  const OscillatorParams& p, const BathParams& b) {
  require(n >= 1, ErrorKind::InvalidArgument, "n must be >= 1");
  require(W_bouncer > 0.0, ErrorKind::InvalidArgument, "bouncer work must be > 0");
  BalanceReport r;
  r.n = n;
  r.W_bouncer_measured = W_bouncer;
  r.W_walker_measured = W_walker;
  r.W_walker_std_error = W_walker_se;
  r.ratio = W_walker / (n * W_bouncer);
  r.implied_kT0 = W_bouncer * p.omega0 / (kTwoPi * p.dims * b.zeta);
  r.implied_E_tot = p.dims * r.implied_kT0;
  r.hbar_omega0 = hbar_invariant(p) * p.omega0;
  r.expected_E_tot = stationary_energy(p, b);
  r.gamma_over_zeta = p.gamma / b.zeta;
  r.low_n_warning = n < kMinRecommendedBalancePeriods;
  return r;
}

}  // namespace detail

/// Balance from measured works. The bouncer must be driven at omega0 and the
/// walker window must span exactly n periods 2 pi / omega0.
inline BalanceReport balance_report(const WorkMeasurement& bouncer, double bouncer_drive_omega,
                                    const WalkerWork& walker, int n, const OscillatorParams& p,
                                    const BathParams& b) {
  p.validate();
  b.validate();
  require(n >= 1, ErrorKind::InvalidArgument, "n must be >= 1");
  const double tau = kTwoPi / p.omega0;
  require(std::abs(bouncer_drive_omega - p.omega0) <= 1e-12 * p.omega0,
          ErrorKind::DurationMismatch, "bouncer period differs from 2 pi / omega0");
  const double span = walker.t_end - walker.t_start;
  require(std::abs(span - n * tau) <= 1e-9 * n * tau, ErrorKind::DurationMismatch,
          "walker window " + std::to_string(span) + " differs from n tau = " +
              std::to_string(n * tau));
  return detail::make_balance(bouncer.W_drive, walker.value, walker.std_error, n, p, b);
}

/// Balance from the closed forms alone.
inline BalanceReport analytic_balance_report(int n, const OscillatorParams& p,
                                             const BathParams& b) {
  return detail::make_balance(bouncer_work_per_period(p), walker_work(n, p, b), 0.0, n, p, b);
}

struct EntropicCycleReport {
  double E_kin_min = 0.0;
  double E_kin_max = 0.0;
  double E_kin_mean = 0.0;
  double quantum = 0.0;           // mean heat exchanged per absorb/emit event
  int absorb_events = 0;          // kinetic-energy minima per period
  int emit_events = 0;            // kinetic-energy maxima per period
  double Q_absorbed = 0.0;
  double Q_emitted = 0.0;
  double E_throughput = 0.0;      // Q_absorbed + Q_emitted
  double throughput_from_mean = 0.0;  // 2 * (2 <E_kin>)
  double entropy_change = 0.0;    // E_throughput / kT0, in units of k
};

namespace detail {

// Vertex of the parabola through three equally spaced samples.
inline double parabolic_extremum(double y0, double y1, double y2) {
  const double curv = y0 - 2.0 * y1 + y2;
  if (curv == 0.0) return y1;
  return y1 - (y0 - y2) * (y0 - y2) / (8.0 * curv);
}

}  // namespace detail

/// Heat bookkeeping over one period of a sampled kinetic-energy waveform.
/// `e_kin` holds one period on a uniform grid without the repeated endpoint.
inline EntropicCycleReport entropic_cycle_from_waveform(std::span<const double> e_kin,
                                                        double kT0) {
  const std::size_t n = e_kin.size();
  require(n >= 8, ErrorKind::InsufficientData, "need at least 8 samples per period");
  require(kT0 > 0.0, ErrorKind::InvalidArgument, "kT0 must be > 0");
  EntropicCycleReport r;
  double sum = 0.0;
  for (double e : e_kin) sum += e;
  r.E_kin_mean = sum / static_cast<double>(n);  // trapezoid on a periodic grid

  r.E_kin_min = e_kin[0];
  r.E_kin_max = e_kin[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = e_kin[(i + n - 1) % n];
    const double cur = e_kin[i];
    const double next = e_kin[(i + 1) % n];
    if (cur < prev && cur <= next) {
      const double lo = detail::parabolic_extremum(prev, cur, next);
      r.Q_absorbed += r.E_kin_mean - lo;
      ++r.absorb_events;
      r.E_kin_min = std::min(r.E_kin_min, lo);
    } else if (cur > prev && cur >= next) {
      const double hi = detail::parabolic_extremum(prev, cur, next);
      r.Q_emitted += hi - r.E_kin_mean;
      ++r.emit_events;
      r.E_kin_max = std::max(r.E_kin_max, hi);
    }
  }
  require(r.absorb_events > 0 && r.emit_events > 0, ErrorKind::NotSteadyState,
          "kinetic energy does not oscillate");
  r.quantum = (r.Q_absorbed + r.Q_emitted) / (r.absorb_events + r.emit_events);
  r.E_throughput = r.Q_absorbed + r.Q_emitted;
  r.throughput_from_mean = 4.0 * r.E_kin_mean;
  r.entropy_change = r.E_throughput / kT0;
  return r;
}

/// Drives a single axis at omega0 into its steady state and books the heat
/// exchanged over one period of the kinetic energy 1/2 m x'^2.
/// kT0 defaults to the balanced value hbar omega0 (one degree of freedom).
inline EntropicCycleReport entropic_cycle(const OscillatorParams& params, double kT0 = 0.0,
                                          int samples_per_period = 1000) {
  params.validate();
  require(params.F0 > 0.0 && params.gamma > 0.0, ErrorKind::NotSteadyState,
          "a steady state needs both drive (F0 > 0) and friction (gamma > 0)");
  require(samples_per_period >= 16, ErrorKind::InvalidArgument,
          "samples_per_period must be >= 16");
  OscillatorParams p = params;
  p.dims = 1;
  if (kT0 <= 0.0) kT0 = hbar_invariant(p) * p.omega0;

  const Drive d = Drive::linear(p, p.omega0);
  const double period = kTwoPi / p.omega0;
  const double dt = period / samples_per_period;
  const double settle = 2.5 * steady_state_start(p);
  const long long settle_steps =
      static_cast<long long>(std::ceil(settle / period)) * samples_per_period;
  const BouncerState start = advance_bouncer(p, d, BouncerState::at_rest(1), dt, settle_steps);
  const Trajectory traj = integrate_bouncer(p, d, start, dt, 2LL * samples_per_period);

  std::vector<double> first, second;
  for (int k = 0; k < samples_per_period; ++k) {
    const double v1 = traj.samples[k].v[0];
    const double v2 = traj.samples[k + samples_per_period].v[0];
    first.push_back(0.5 * p.m * v1 * v1);
    second.push_back(0.5 * p.m * v2 * v2);
  }
  const auto peak = [](const std::vector<double>& w) { return *std::max_element(w.begin(), w.end()); };
  require(std::abs(peak(first) - peak(second)) <= 1e-6 * peak(second),
          ErrorKind::NotSteadyState, "kinetic-energy waveform still drifting");
  return entropic_cycle_from_waveform(second, kT0);
}

/// Energy throughput 2 |s| omega0 carried by a spin of length |s|.
inline double spin_throughput(double s_magnitude, double omega0) {
  require(s_magnitude >= 0.0, ErrorKind::InvalidArgument, "spin length must be >= 0");
  return 2.0 * s_magnitude * omega0;
}

}  // namespace bouncewalk
