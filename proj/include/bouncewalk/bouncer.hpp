// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic integration of the driven damped oscillator in N dimensions,
// plus steady-state fitting, work quadrature and angular-momentum diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/errors.hpp"

namespace bouncewalk {

struct BouncerState {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> v;

  static BouncerState at_rest(int dims, double t0 = 0.0) {
    return {t0, std::vector<double>(dims, 0.0), std::vector<double>(dims, 0.0)};
  }
};

/// Per-axis sinusoidal force F0[i] cos(omega t + phase[i]).
struct Drive {
  double omega = 1.0;
  std::vector<double> F0;
  std::vector<double> phase;

  int dims() const { return static_cast<int>(F0.size()); }

  double force(int axis, double t) const { return F0[axis] * std::cos(omega * t + phase[axis]); }

  /// Same amplitude p.F0 and zero phase on every axis.
  static Drive uniform(const OscillatorParams& p, double omega) {
    return {omega, std::vector<double>(p.dims, p.F0), std::vector<double>(p.dims, 0.0)};
  }

  /// Drive on axis 0 only.
  static Drive linear(const OscillatorParams& p, double omega) {
    Drive d{omega, std::vector<double>(p.dims, 0.0), std::vector<double>(p.dims, 0.0)};
    d.F0[0] = p.F0;
    return d;
  }

  /// Equal drives on axes 0 and 1 with axis 1 lagging by pi/2, which yields a
  /// circular steady-state orbit in that plane.
  static Drive circular(const OscillatorParams& p, double omega) {
    require(p.dims >= 2, ErrorKind::DimensionMismatch, "circular drive needs dims >= 2");
    Drive d{omega, std::vector<double>(p.dims, 0.0), std::vector<double>(p.dims, 0.0)};
    d.F0[0] = p.F0;
    d.F0[1] = p.F0;
    d.phase[1] = -0.5 * std::numbers::pi;
    return d;
  }
};

struct Trajectory {
  double dt = 0.0;  // spacing between stored samples
  std::vector<BouncerState> samples;

  int dims() const { return samples.empty() ? 0 : static_cast<int>(samples.front().x.size()); }
  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
};

struct SteadyStateFit {
  std::vector<double> A;
  std::vector<double> phi;            // in (-pi, pi]
  std::vector<bool> phase_defined;    // false where the axis does not move
  double residual = 0.0;              // RMS over all fitted samples and axes
  bool transient_warning = false;     // residual above 1% of the largest amplitude
};

struct WorkMeasurement {
  double W_drive = 0.0;     // per period, summed over axes
  double W_friction = 0.0;  // per period, summed over axes
  std::vector<double> drive_per_axis;
  std::vector<double> friction_per_axis;
  int periods = 0;
};

namespace detail {

inline void check_drive(const OscillatorParams& p, const Drive& d) {
  require(d.dims() == p.dims && static_cast<int>(d.phase.size()) == p.dims,
          ErrorKind::DimensionMismatch, "drive must have one amplitude and phase per axis");
  require(std::isfinite(d.omega) && d.omega >= 0.0, ErrorKind::InvalidArgument,
          "drive frequency must be >= 0");
}

// One classical Runge-Kutta step of x' = v, v' = -w0^2 x - 2 gamma v + F(t)/m.
inline void rk4_step(const OscillatorParams& p, const Drive& d, BouncerState& s, double dt) {
  const double w2 = p.omega0 * p.omega0;
  const double c = 2.0 * p.gamma;
  const double inv_m = 1.0 / p.m;
  const double t = s.t;
  for (int i = 0; i < p.dims; ++i) {
    const double x = s.x[i];
    const double v = s.v[i];
    const auto accel = [&](double tt, double xx, double vv) {
      return -w2 * xx - c * vv + d.force(i, tt) * inv_m;
    };
    const double k1x = v;
    const double k1v = accel(t, x, v);
    const double k2x = v + 0.5 * dt * k1v;
    const double k2v = accel(t + 0.5 * dt, x + 0.5 * dt * k1x, k2x);
    const double k3x = v + 0.5 * dt * k2v;
    const double k3v = accel(t + 0.5 * dt, x + 0.5 * dt * k2x, k3x);
    const double k4x = v + dt * k3v;
    const double k4v = accel(t + dt, x + dt * k3x, k4x);
    s.x[i] = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    s.v[i] = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.v[i])) {
      throw Error(ErrorKind::NonFiniteState,
                  "bouncer state became non-finite on axis " + std::to_string(i) +
                      " near t = " + std::to_string(t));
    }
  }
}

inline void check_start(const OscillatorParams& p, const Drive& d, const BouncerState& ic,
                        double dt) {
  p.validate();
  check_drive(p, d);
  require(static_cast<int>(ic.x.size()) == p.dims && static_cast<int>(ic.v.size()) == p.dims,
          ErrorKind::DimensionMismatch, "initial state must have dims components");
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::InvalidArgument, "dt must be > 0");
}

}  // namespace detail

/// Advances `ic` by `steps` steps of size dt without storing samples.
inline BouncerState advance_bouncer(const OscillatorParams& p, const Drive& d, BouncerState ic,
                                    double dt, long long steps) {
  detail::check_start(p, d, ic, dt);
  require(steps >= 0, ErrorKind::InvalidArgument, "steps must be >= 0");
  const double t0 = ic.t;
  for (long long k = 0; k < steps; ++k) {
    detail::rk4_step(p, d, ic, dt);
    ic.t = t0 + static_cast<double>(k + 1) * dt;  // no accumulated drift in t
  }
  return ic;
}

/// Integrates `steps` RK4 steps from `ic`, storing every `stride`-th state
/// (the initial state is always stored).
inline Trajectory integrate_bouncer(const OscillatorParams& p, const Drive& d,
                                    const BouncerState& ic, double dt, long long steps,
                                    long long stride = 1) {
  detail::check_start(p, d, ic, dt);
  require(steps >= 1, ErrorKind::InvalidArgument, "steps must be >= 1");
  require(stride >= 1 && steps % stride == 0, ErrorKind::InvalidArgument,
          "stride must be >= 1 and divide steps");
  Trajectory traj;
  traj.dt = dt * static_cast<double>(stride);
  traj.samples.reserve(static_cast<std::size_t>(steps / stride + 1));
  traj.samples.push_back(ic);
  BouncerState s = ic;
  const double t0 = ic.t;
  for (long long k = 0; k < steps; ++k) {
    detail::rk4_step(p, d, s, dt);
    s.t = t0 + static_cast<double>(k + 1) * dt;
    if ((k + 1) % stride == 0) traj.samples.push_back(s);
  }
  return traj;
}

/// Slowest decay rate of the free motion: gamma when underdamped,
/// gamma - sqrt(gamma^2 - omega0^2) when overdamped.
inline double transient_decay_rate(const OscillatorParams& p) {
  require(p.gamma > 0.0, ErrorKind::ZeroFriction, "no steady state without friction");
  if (p.gamma <= p.omega0) return p.gamma;
  return p.omega0 * p.omega0 / (p.gamma + std::sqrt(p.gamma * p.gamma - p.omega0 * p.omega0));
}

/// Start of the steady-state regime, ten decay times.
inline double steady_state_start(const OscillatorParams& p) {
  return 10.0 / transient_decay_rate(p);
}

/// Least-squares fit of x_i(t) = A_i cos(omega t + phi_i) over the trailing
/// `periods_used` drive periods. Samples before `transient_cutoff` must not be
/// needed for the window.
inline SteadyStateFit fit_steady_state(const Trajectory& traj, double omega, int periods_used,
                                       double transient_cutoff = 0.0) {
  require(omega > 0.0, ErrorKind::InvalidArgument, "fit frequency must be > 0");
  require(periods_used >= 1, ErrorKind::InvalidArgument, "periods_used must be >= 1");
  require(traj.samples.size() >= 2, ErrorKind::InsufficientData, "trajectory too short");
  const double period = kTwoPi / omega;
  const double window = periods_used * period;
  const double t_stop = traj.t_end();
  const double t_start = t_stop - window;
  const double slack = 1e-9 * std::max(1.0, std::abs(t_stop));
  require(t_start >= std::max(traj.t_begin(), transient_cutoff) - slack,
          ErrorKind::InsufficientData,
          "trajectory does not cover " + std::to_string(periods_used) +
              " periods after the transient cutoff");
  require(period >= 4.0 * traj.dt, ErrorKind::InsufficientData,
          "fewer than four samples per period");

  const int dims = traj.dims();
  SteadyStateFit fit;
  fit.A.assign(dims, 0.0);
  fit.phi.assign(dims, 0.0);
  fit.phase_defined.assign(dims, false);

  // Normal equations for the (cos, sin) basis are shared by every axis.
  double cc = 0.0, cs = 0.0, ss = 0.0;
  std::vector<double> xc(dims, 0.0), xs(dims, 0.0);
  std::vector<double> max_abs(dims, 0.0);
  std::size_t used = 0;
  for (const auto& s : traj.samples) {
    if (s.t < t_start - slack) continue;
    const double c = std::cos(omega * s.t);
    const double sn = std::sin(omega * s.t);
    cc += c * c;
    cs += c * sn;
    ss += sn * sn;
    for (int i = 0; i < dims; ++i) {
      xc[i] += s.x[i] * c;
      xs[i] += s.x[i] * sn;
      max_abs[i] = std::max(max_abs[i], std::abs(s.x[i]));
    }
    ++used;
  }
  const double det = cc * ss - cs * cs;
  require(used >= 4 && det > 1e-12 * cc * ss, ErrorKind::InsufficientData,
          "fit window is degenerate");

  std::vector<double> a(dims), b(dims);
  double largest = 0.0;
  for (int i = 0; i < dims; ++i) {
    a[i] = (ss * xc[i] - cs * xs[i]) / det;
    b[i] = (cc * xs[i] - cs * xc[i]) / det;
    // A cos(wt + phi) = A cos(phi) cos(wt) - A sin(phi) sin(wt)
    fit.A[i] = std::hypot(a[i], b[i]);
    fit.phase_defined[i] = fit.A[i] > 1e-12 * max_abs[i] && max_abs[i] > 0.0;
    if (fit.phase_defined[i]) {
      double phi = std::atan2(-b[i], a[i]);
      if (phi <= -std::numbers::pi) phi = std::numbers::pi;
      fit.phi[i] = phi;
    }
    largest = std::max(largest, fit.A[i]);
  }

  double sq = 0.0;
  for (const auto& s : traj.samples) {
    if (s.t < t_start - slack) continue;
    const double c = std::cos(omega * s.t);
    const double sn = std::sin(omega * s.t);
    for (int i = 0; i < dims; ++i) {
      const double e = s.x[i] - (a[i] * c + b[i] * sn);
      sq += e * e;
    }
  }
  fit.residual = std::sqrt(sq / static_cast<double>(used * dims));
  fit.transient_warning = fit.residual > 0.01 * largest;
  return fit;
}

/// Work done by the drive and lost to friction per drive period, by
/// trapezoidal quadrature over the trailing `periods` drive periods.
/// The window must land on stored samples.
inline WorkMeasurement measure_work_per_period(const Trajectory& traj, const OscillatorParams& p,
                                               const Drive& d, int periods = 1) {
  detail::check_drive(p, d);
  require(traj.dims() == p.dims, ErrorKind::DimensionMismatch, "trajectory dims differ");
  require(periods >= 1, ErrorKind::InvalidArgument, "periods must be >= 1");
  require(d.omega > 0.0, ErrorKind::WindowNotAligned, "a static drive has no period");
  const double window = periods * kTwoPi / d.omega;
  const double intervals = window / traj.dt;
  const long long k = std::llround(intervals);
  require(std::abs(intervals - static_cast<double>(k)) < 1e-6 && k >= 1,
          ErrorKind::WindowNotAligned,
          "window of " + std::to_string(periods) +
              " periods is not a whole number of sample intervals");
  require(static_cast<std::size_t>(k) < traj.samples.size(), ErrorKind::WindowExceedsData,
          "trajectory shorter than the work window");

  WorkMeasurement w;
  w.periods = periods;
  w.drive_per_axis.assign(p.dims, 0.0);
  w.friction_per_axis.assign(p.dims, 0.0);
  const std::size_t first = traj.samples.size() - 1 - static_cast<std::size_t>(k);
  for (std::size_t j = first; j < traj.samples.size(); ++j) {
    const auto& s = traj.samples[j];
    const double weight = (j == first || j + 1 == traj.samples.size()) ? 0.5 : 1.0;
    for (int i = 0; i < p.dims; ++i) {
      w.drive_per_axis[i] += weight * d.force(i, s.t) * s.v[i];
      w.friction_per_axis[i] += weight * 2.0 * p.gamma * p.m * s.v[i] * s.v[i];
    }
  }
  for (int i = 0; i < p.dims; ++i) {
    w.drive_per_axis[i] *= traj.dt / periods;
    w.friction_per_axis[i] *= traj.dt / periods;
    w.W_drive += w.drive_per_axis[i];
    w.W_friction += w.friction_per_axis[i];
  }
  return w;
}

/// L(t) = m (x_a v_b - x_b v_a) for the plane spanned by two axes.
inline std::vector<double> angular_momentum_series(const Trajectory& traj, double m,
                                                   int axis_a = 0, int axis_b = 1) {
  const int dims = traj.dims();
  require(dims >= 2, ErrorKind::DimensionMismatch, "angular momentum needs dims >= 2");
  require(axis_a >= 0 && axis_b >= 0 && axis_a < dims && axis_b < dims && axis_a != axis_b,
          ErrorKind::DimensionMismatch, "angular momentum axes out of range");
  std::vector<double> L;
  L.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    L.push_back(m * (s.x[axis_a] * s.v[axis_b] - s.x[axis_b] * s.v[axis_a]));
  }
  return L;
}

/// Mechanical energy 1/2 m v^2 + 1/2 m w0^2 x^2 summed over axes.
inline std::vector<double> hamiltonian_series(const Trajectory& traj, const OscillatorParams& p) {
  std::vector<double> H;
  H.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      e += 0.5 * p.m * (s.v[i] * s.v[i] + p.omega0 * p.omega0 * s.x[i] * s.x[i]);
    }
    H.push_back(e);
  }
  return H;
}

/// Angular frequency of an axis estimated from upward zero crossings at or
/// after `t_from` (linear interpolation between samples).
inline double response_frequency(const Trajectory& traj, int axis, double t_from = 0.0) {
  require(axis >= 0 && axis < traj.dims(), ErrorKind::DimensionMismatch, "axis out of range");
  std::vector<double> crossings;
  for (std::size_t j = 1; j < traj.samples.size(); ++j) {
    const auto& a = traj.samples[j - 1];
    const auto& b = traj.samples[j];
    if (a.t < t_from) continue;
    if (a.x[axis] < 0.0 && b.x[axis] >= 0.0) {
      const double frac = a.x[axis] / (a.x[axis] - b.x[axis]);
      crossings.push_back(a.t + frac * (b.t - a.t));
    }
  }
  require(crossings.size() >= 2, ErrorKind::InsufficientData,
          "need at least two zero crossings to estimate a frequency");
  const double cycles = static_cast<double>(crossings.size() - 1);
  return kTwoPi * cycles / (crossings.back() - crossings.front());
}

}  // namespace bouncewalk
