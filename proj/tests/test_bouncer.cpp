// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/bouncer.hpp"

namespace bw = bouncewalk;
using std::numbers::pi;

namespace {

// Settles from rest for `settle` time units, then records `periods` drive
// periods at `per_period` samples each.
bw::Trajectory settled(const bw::OscillatorParams& p, const bw::Drive& d, double settle,
                       int periods, int per_period = 400) {
  const double T = 2 * pi / d.omega;
  const double dt = T / per_period;
  const long long settle_steps = static_cast<long long>(std::ceil(settle / T)) * per_period;
  const auto start = bw::advance_bouncer(p, d, bw::BouncerState::at_rest(p.dims), dt, settle_steps);
  return bw::integrate_bouncer(p, d, start, dt, static_cast<long long>(periods) * per_period);
}

// Exact steady-state solution for a uniform drive, per axis.
bw::BouncerState steady_state(const bw::OscillatorParams& p, double omega, double t) {
  const double A = bw::amplitude_response(p, omega);
  const double phi = bw::phase_response(p, omega);
  bw::BouncerState s = bw::BouncerState::at_rest(p.dims, t);
  for (int i = 0; i < p.dims; ++i) {
    s.x[i] = A * std::cos(omega * t + phi);
    s.v[i] = -A * omega * std::sin(omega * t + phi);
  }
  return s;
}

}  // namespace

TEST(Integrator, FreeOscillatorConservesEnergy) {
  const bw::OscillatorParams p{1.0, 1.0, 0.0, 0.0, 1};
  const auto d = bw::Drive::uniform(p, 1.0);
  bw::BouncerState ic = bw::BouncerState::at_rest(1);
  ic.x[0] = 1.0;
  const double dt = 2 * pi / 1000;
  const auto traj = bw::integrate_bouncer(p, d, ic, dt, 100 * 1000, 100);
  const auto H = bw::hamiltonian_series(traj, p);
  for (double h : H) EXPECT_NEAR(h, 0.5, 1e-10);
}

TEST(Integrator, FourthOrderConvergence) {
  const bw::OscillatorParams p{1.0, 1.0, 0.1, 1.0, 1};
  const double omega = 1.3;
  const auto d = bw::Drive::uniform(p, omega);
  const auto max_err = [&](int per_period) {
    const double dt = 2 * pi / omega / per_period;
    const auto traj = bw::integrate_bouncer(p, d, steady_state(p, omega, 0.0), dt, 20 * per_period);
    double e = 0.0;
    for (const auto& s : traj.samples) {
      e = std::max(e, std::abs(s.x[0] - steady_state(p, omega, s.t).x[0]));
    }
    return e;
  };
  const double coarse = max_err(50);
  const double fine = max_err(100);
  EXPECT_GE(coarse / fine, 14.0) << coarse << " vs " << fine;
}

TEST(Integrator, NonFiniteStateAborts) {
  const bw::OscillatorParams p{1.0, 1.0, 0.1, 1.0, 1};
  const auto d = bw::Drive::uniform(p, 1.0);
  bw::BouncerState ic = bw::BouncerState::at_rest(1);
  ic.x[0] = 1e300;
  try {
    bw::integrate_bouncer(p, d, ic, 1e5, 10);
    FAIL();
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.kind(), bw::ErrorKind::NonFiniteState);
  }
}

TEST(Integrator, RejectsBadInput) {
  const bw::OscillatorParams p{1.0, 1.0, 0.1, 1.0, 2};
  const auto d = bw::Drive::uniform(p, 1.0);
  EXPECT_THROW(bw::integrate_bouncer(p, d, bw::BouncerState::at_rest(1), 0.01, 10), bw::Error);
  EXPECT_THROW(bw::integrate_bouncer(p, d, bw::BouncerState::at_rest(2), -0.01, 10), bw::Error);
  EXPECT_THROW(bw::integrate_bouncer(p, d, bw::BouncerState::at_rest(2), 0.01, 0), bw::Error);
  EXPECT_THROW(bw::integrate_bouncer(p, d, bw::BouncerState::at_rest(2), 0.01, 10, 3), bw::Error);
}

TEST(SteadyState, ResonantAmplitude) {
  const bw::OscillatorParams p{1.0, 1.0, 0.1, 1.0, 1};
  const auto d = bw::Drive::uniform(p, 1.0);
  const auto traj = settled(p, d, 20.0 / p.gamma, 10);
  const auto fit = bw::fit_steady_state(traj, 1.0, 10, bw::steady_state_start(p));
  EXPECT_NEAR(fit.A[0], 5.0, 5.0 * 1e-3);
  EXPECT_NEAR(fit.phi[0], -pi / 2, 1e-3);
  EXPECT_FALSE(fit.transient_warning);
}

TEST(SteadyState, PhaseAboveResonance) {
  const bw::OscillatorParams p{1.0, 1.0, 0.1, 1.0, 1};
  const auto d = bw::Drive::uniform(p, 2.0);
  const auto traj = settled(p, d, 20.0 / p.gamma, 10);
  const auto fit = bw::fit_steady_state(traj, 2.0, 10, bw::steady_state_start(p));
  EXPECT_NEAR(fit.phi[0], -3.0090411212931194, 1e-3);
  EXPECT_NEAR(fit.A[0], 0.33040930022752435, 0.33 * 1e-3);
}

TEST(SteadyState, ExactModelRecovery) {
  bw::Trajectory traj;
  traj.dt = 0.01;
  for (int k = 0; k <= 2000; ++k) {
    bw::BouncerState s = bw::BouncerState::at_rest(1, k * 0.01);
    s.x[0] = 3.0 * std::cos(2.0 * s.t - 0.7);
    traj.samples.push_back(s);
  }
  const auto fit = bw::fit_steady_state(traj, 2.0, 5);
  EXPECT_NEAR(fit.A[0], 3.0, 1e-12);
  EXPECT_NEAR(fit.phi[0], -0.7, 1e-12);
  EXPECT_LT(fit.residual, 1e-12);
  EXPECT_TRUE(fit.phase_defined[0]);
}

TEST(SteadyState, ZeroTrajectoryHasUndefinedPhase) {
  bw::Trajectory traj;
  traj.dt = 0.01;
  for (int k = 0; k <= 1000; ++k) traj.samples.push_back(bw::BouncerState::at_rest(1, k * 0.01));
  const auto fit = bw::fit_steady_state(traj, 2.0, 2);
  EXPECT_EQ(fit.A[0], 0.0);
  EXPECT_FALSE(fit.phase_defined[0]);
}

TEST(SteadyState, InsufficientData) {
  bw::Trajectory traj;
  traj.dt = 0.1;
  for (int k = 0; k <= 20; ++k) traj.samples.push_back(bw::BouncerState::at_rest(1, k * 0.1));
  try {
    bw::fit_steady_state(traj, 1.0, 5);
    FAIL();
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.kind(), bw::ErrorKind::InsufficientData);
  }
  // Enough span but the window would reach into the transient.
  EXPECT_THROW(bw::fit_steady_state(traj, 2 * pi / 0.5, 1, 1.9), bw::Error);
}

TEST(SteadyState, TransientWarning) {
  const bw::OscillatorParams p{1.0, 1.0, 0.1, 1.0, 1};
  const auto d = bw::Drive::uniform(p, 2.0);
  // No settling: the free transient at omega0 is still large.
  const auto traj = bw::integrate_bouncer(p, d, bw::BouncerState::at_rest(1), pi / 200, 2000);
  const auto fit = bw::fit_steady_state(traj, 2.0, 4);
  EXPECT_TRUE(fit.transient_warning);
}

TEST(SteadyState, ResponseLocksToDriveFrequency) {
  const bw::OscillatorParams p{1.0, 1.0, 0.2, 1.0, 1};
  for (double w : {0.5, 1.0, 2.5}) {
    const auto traj = settled(p, bw::Drive::uniform(p, w), 20.0 / p.gamma, 20);
    EXPECT_NEAR(bw::response_frequency(traj, 0), w, 1e-6 * w);
  }
}

TEST(SteadyState, HamiltonianConstantAtResonance) {
  const bw::OscillatorParams p{1.0, 1.0, 0.5, 1.0, 1};
  const auto traj = settled(p, bw::Drive::uniform(p, 1.0), 40.0, 3);
  const auto H = bw::hamiltonian_series(traj, p);
  const auto [lo, hi] = std::minmax_element(H.begin(), H.end());
  EXPECT_LT((*hi - *lo) / *hi, 1e-3);
  const auto fit = bw::fit_steady_state(traj, 1.0, 3);
  const double hbar = p.m * fit.A[0] * fit.A[0] * p.omega0;
  EXPECT_NEAR(H.front(), 0.5 * hbar * p.omega0, 1e-3 * H.front());
}

TEST(Work, ResonantWorkEqualsClosedForm) {
  const bw::OscillatorParams p{1.0, 1.0, 0.5, 1.0, 1};
  const auto d = bw::Drive::uniform(p, 1.0);
  const auto traj = settled(p, d, 40.0, 2);
  const auto w = bw::measure_work_per_period(traj, p, d);
  EXPECT_NEAR(w.W_drive, pi, 0.005 * pi);
  EXPECT_NEAR(w.W_friction, pi, 0.005 * pi);
  EXPECT_LT(std::abs(w.W_drive - w.W_friction) / w.W_drive, 1e-3);
}

TEST(Work, NoDriveNoFriction) {
  const bw::OscillatorParams p{1.0, 1.0, 0.0, 0.0, 1};
  const auto d = bw::Drive::uniform(p, 1.0);
  bw::BouncerState ic = bw::BouncerState::at_rest(1);
  ic.x[0] = 1.0;
  const auto traj = bw::integrate_bouncer(p, d, ic, 2 * pi / 100, 100);
  const auto w = bw::measure_work_per_period(traj, p, d);
  EXPECT_EQ(w.W_drive, 0.0);
  EXPECT_EQ(w.W_friction, 0.0);
}

TEST(Work, AdditiveOverDimensions) {
  const bw::OscillatorParams p1{1.0, 1.0, 0.5, 1.0, 1};
  bw::OscillatorParams p3 = p1;
  p3.dims = 3;
  const auto w1 = bw::measure_work_per_period(settled(p1, bw::Drive::uniform(p1, 1.0), 40.0, 1),
                                              p1, bw::Drive::uniform(p1, 1.0));
  const auto w3 = bw::measure_work_per_period(settled(p3, bw::Drive::uniform(p3, 1.0), 40.0, 1),
                                              p3, bw::Drive::uniform(p3, 1.0));
  EXPECT_NEAR(w3.W_drive, 3.0 * w1.W_drive, 1e-12 * w3.W_drive);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(w3.drive_per_axis[i], w1.W_drive, 1e-12);
  // Each axis equals gamma m w^2 A^2 tau.
  EXPECT_NEAR(w3.W_friction, 3.0 * p1.gamma * 1.0 * 1.0 * 2 * pi, 0.005 * w3.W_friction);
}

TEST(Work, WindowMustBeWholePeriods) {
  const bw::OscillatorParams p{1.0, 1.0, 0.5, 1.0, 1};
  const auto d = bw::Drive::uniform(p, 1.0);
  const auto traj = bw::integrate_bouncer(p, d, bw::BouncerState::at_rest(1), 0.3, 100);
  try {
    bw::measure_work_per_period(traj, p, d);
    FAIL();
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.kind(), bw::ErrorKind::WindowNotAligned);
  }
  const auto short_traj =
      bw::integrate_bouncer(p, d, bw::BouncerState::at_rest(1), 2 * pi / 100, 50);
  try {
    bw::measure_work_per_period(short_traj, p, d);
    FAIL();
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.kind(), bw::ErrorKind::WindowExceedsData);
  }
}

TEST(AngularMomentum, CircularOrbit) {
  // Exact circular samples: x = r (cos wt, sin wt).
  for (auto [r, w] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}}) {
    bw::Trajectory traj;
    traj.dt = 0.01;
    for (int k = 0; k < 1000; ++k) {
      const double t = k * 0.01;
      bw::BouncerState s = bw::BouncerState::at_rest(2, t);
      s.x = {r * std::cos(w * t), r * std::sin(w * t)};
      s.v = {-r * w * std::sin(w * t), r * w * std::cos(w * t)};
      traj.samples.push_back(s);
    }
    for (double L : bw::angular_momentum_series(traj, 1.0)) EXPECT_NEAR(L, r * r * w, 1e-8);
  }
}

TEST(AngularMomentum, LinearOscillationHasNone) {
  const bw::OscillatorParams p{1.0, 1.0, 0.5, 1.0, 2};
  const auto traj = settled(p, bw::Drive::linear(p, 1.0), 40.0, 2);
  double mean = 0.0;
  const auto L = bw::angular_momentum_series(traj, p.m);
  for (double l : L) mean += l / L.size();
  EXPECT_NEAR(mean, 0.0, 1e-12);
}

TEST(AngularMomentum, SimulatedCircularPresetGivesHbar) {
  const bw::OscillatorParams p{1.0, 1.0, 0.5, 1.0, 2};
  const auto traj = settled(p, bw::Drive::circular(p, 1.0), 25.0 / p.gamma, 3, 1000);
  const double hbar = bw::hbar_invariant(p);
  for (double L : bw::angular_momentum_series(traj, p.m)) EXPECT_NEAR(L, hbar, 1e-8 * hbar);
}

TEST(AngularMomentum, NeedsTwoDimensions) {
  bw::Trajectory traj;
  traj.dt = 1.0;
  traj.samples = {bw::BouncerState::at_rest(1), bw::BouncerState::at_rest(1, 1.0)};
  try {
    bw::angular_momentum_series(traj, 1.0);
    FAIL();
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.kind(), bw::ErrorKind::DimensionMismatch);
  }
}

TEST(Settling, DecayRate) {
  bw::OscillatorParams p;
  p.omega0 = 1.0;
  p.gamma = 0.3;
  EXPECT_EQ(bw::transient_decay_rate(p), 0.3);
  EXPECT_DOUBLE_EQ(bw::steady_state_start(p), 10.0 / 0.3);
  p.gamma = 2.0;
  EXPECT_NEAR(bw::transient_decay_rate(p), 2.0 - std::sqrt(3.0), 1e-15);
  p.gamma = 0.0;
  EXPECT_THROW(bw::transient_decay_rate(p), bw::Error);
}
