// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/walker.hpp"

namespace bw = bouncewalk;
using std::numbers::pi;

namespace {

bw::WalkerConfig base_config(std::size_t paths, double dt, long long steps, long long stride = 1) {
  bw::WalkerConfig c;
  c.bath = {1.0, 1.0};
  c.paths = paths;
  c.dt = dt;
  c.steps = steps;
  c.record_stride = stride;
  c.root_seed = 20260501;
  return c;
}

std::size_t record_at(const bw::WalkerEnsemble& e, double t) {
  for (std::size_t j = 0; j < e.records(); ++j) {
    if (std::abs(e.times[j] - t) < 1e-9 * std::max(1.0, t)) return j;
  }
  ADD_FAILURE() << "no record at t = " << t;
  return 0;
}

// Shared M = 1e4 run with the step size and length from the reference case.
const bw::WalkerEnsemble& reference_ensemble() {
  static const bw::WalkerEnsemble e = [] {
    auto c = base_config(10000, 1e-2, 10000, 100);
    return bw::run_ensemble(c);
  }();
  return e;
}

}  // namespace

TEST(Step, ZeroNoiseZeroVelocityStaysPut) {
  auto c = base_config(16, 0.1, 50);
  c.bath.kT0 = 0.0;
  c.u0_policy = bw::InitialVelocity::Fixed;
  c.keep_samples = true;
  const auto e = bw::run_ensemble(c);
  for (double x : e.x_samples) EXPECT_EQ(x, 0.0);
  for (double u : e.u_samples) EXPECT_EQ(u, 0.0);
  for (const auto& s : e.msd) EXPECT_EQ(s.mean(), 0.0);
}

TEST(Step, ExactOuSingleStepMoments) {
  const bw::BathParams b{1.0, 1.0};
  const double dt = 0.1;
  const auto noise = bw::NoiseModel::from_bath(b, 1.0);
  bw::RunningStat u_stat, x_stat;
  for (std::uint64_t i = 0; i < 1000000; ++i) {
    const bw::PathStream stream(99, i);
    const auto s = bw::step_walker({{0.0}, {1.0}}, b, 1.0, noise, dt, stream, 0);
    u_stat.push(s.u[0]);
    x_stat.push(s.x[0]);
  }
  const double decay = std::exp(-0.1);
  EXPECT_NEAR(u_stat.mean(), decay, 4 * u_stat.std_error_mean());
  EXPECT_NEAR(u_stat.mean(), 0.904837, 2e-3);
  // variance (kT0/m)(1 - e^{-2 zeta dt}); stderr of a Gaussian variance is var sqrt(2/M)
  const double var_u = 1.0 - std::exp(-0.2);
  EXPECT_NEAR(u_stat.variance(), var_u, 4 * var_u * std::sqrt(2.0 / 1e6));
  EXPECT_NEAR(x_stat.mean(), 1.0 - decay, 4 * x_stat.std_error_mean());
  const double var_x = 2 * 0.1 - 3 + 4 * std::exp(-0.1) - std::exp(-0.2);
  EXPECT_NEAR(x_stat.variance(), var_x, 4 * var_x * std::sqrt(2.0 / 1e6));
}

TEST(Step, EulerMaruyamaUpdate) {
  const bw::BathParams b{1.0, 2.0};
  const bw::NoiseModel noise{0.0, bw::NoiseScheme::EulerMaruyama};
  const bw::PathStream stream(1, 0);
  const auto s = bw::step_walker({{0.5}, {1.0}}, b, 1.0, noise, 0.01, stream, 0);
  EXPECT_DOUBLE_EQ(s.u[0], 1.0 * (1 - 2.0 * 0.01));
  EXPECT_DOUBLE_EQ(s.x[0], 0.5 + 0.01);
}

TEST(Step, CoefficientsContinuousAcrossSeriesSwitch) {
  const auto lo = bw::exact_ou_coefficients(1.0, 1.0, 0.05 - 1e-12);
  const auto hi = bw::exact_ou_coefficients(1.0, 1.0, 0.05 + 1e-12);
  EXPECT_NEAR(lo.sd_x / hi.sd_x, 1.0, 1e-9);
  // small-step limit: var_x ~ 2 a^3 / 3 (for unit zeta and kT0/m)
  const auto tiny = bw::exact_ou_coefficients(1.0, 1.0, 1e-6);
  const double var_x = tiny.x_from_u * tiny.x_from_u + tiny.sd_x * tiny.sd_x;
  EXPECT_NEAR(var_x / (2e-18 / 3.0), 1.0, 1e-5);
  EXPECT_NEAR(tiny.sd_u * tiny.sd_u / 2e-6, 1.0, 1e-5);
}

TEST(Ensemble, InitialStatesOnly) {
  auto c = base_config(1, 0.1, 0);
  c.keep_samples = true;
  const auto e = bw::run_ensemble(c);
  ASSERT_EQ(e.records(), 1u);
  EXPECT_EQ(e.times[0], 0.0);
  EXPECT_EQ(e.msd[0].mean(), 0.0);
  EXPECT_EQ(e.x_samples.size(), 1u);
}

TEST(Ensemble, BitIdenticalAcrossRunsAndThreadCounts) {
  auto c = base_config(1000, 0.05, 40, 4);
  c.dims = 2;
  c.keep_samples = true;
  c.threads = 1;
  const auto a = bw::run_ensemble(c);
  for (unsigned threads : {1u, 2u, 3u, 8u}) {
    c.threads = threads;
    const auto b = bw::run_ensemble(c);
    EXPECT_EQ(a.x_samples, b.x_samples);
    EXPECT_EQ(a.u_samples, b.u_samples);
    for (std::size_t j = 0; j < a.records(); ++j) {
      EXPECT_EQ(a.msd[j].mean(), b.msd[j].mean());
      EXPECT_EQ(a.msd[j].variance(), b.msd[j].variance());
      EXPECT_EQ(a.u2_integral[j].mean(), b.u2_integral[j].mean());
    }
  }
  c.root_seed += 1;
  EXPECT_NE(bw::run_ensemble(c).x_samples, a.x_samples);
}

TEST(Ensemble, PathStreamsDoNotDependOnEnsembleSize) {
  auto c = base_config(300, 0.05, 10);
  c.keep_samples = true;
  const auto big = bw::run_ensemble(c);
  c.paths = 7;
  const auto small = bw::run_ensemble(c);
  for (std::size_t i = 0; i < small.x_samples.size(); ++i) {
    EXPECT_EQ(small.x_samples[i], big.x_samples[i]);
  }
}

TEST(Ensemble, ResourceLimit) {
  auto c = base_config(100000, 0.01, 1000);
  c.keep_samples = true;
  c.memory_budget_bytes = 1 << 20;
  try {
    bw::run_ensemble(c);
    FAIL();
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.kind(), bw::ErrorKind::ResourceLimit);
  }
}

TEST(Ensemble, RejectsBadConfig) {
  auto c = base_config(10, 0.01, 100, 3);
  EXPECT_THROW(bw::run_ensemble(c), bw::Error);
  c = base_config(0, 0.01, 100);
  EXPECT_THROW(bw::run_ensemble(c), bw::Error);
  c = base_config(10, -0.01, 100);
  EXPECT_THROW(bw::run_ensemble(c), bw::Error);
  c = base_config(10, 0.01, 100);
  c.bath.zeta = 0.0;
  EXPECT_THROW(bw::run_ensemble(c), bw::Error);
  c = base_config(10, 0.01, 100);
  c.record_times = {1.0, 0.5};
  EXPECT_THROW(bw::run_ensemble(c), bw::Error);
  c.record_times = {0.5, 1.0};
  c.scheme = bw::NoiseScheme::EulerMaruyama;
  EXPECT_THROW(bw::run_ensemble(c), bw::Error);
}

TEST(Msd, ReferenceValues) {
  const auto& e = reference_ensemble();
  const auto msd = bw::ensemble_msd(e);
  EXPECT_EQ(msd.mean[0], 0.0);
  const std::size_t j1 = record_at(e, 1.0);
  EXPECT_NEAR(msd.mean[j1], 0.7357588823428847, 3 * msd.std_error[j1]);
  const std::size_t j100 = record_at(e, 100.0);
  EXPECT_NEAR(msd.mean[j100], 198.0, 3 * msd.std_error[j100]);
}

TEST(Msd, StationaryVelocityAtReferenceEnsemble) {
  const auto& e = reference_ensemble();
  const auto v = bw::ensemble_velocity_variance(e);
  for (std::size_t j = 0; j < e.records(); j += 10) {
    EXPECT_NEAR(v.mean[j], 1.0, 4 * v.std_error[j]) << "t = " << v.t[j];
  }
}

TEST(Msd, ThreeDimensionsIsThreeTimesOne) {
  bw::WalkerConfig c;
  c.bath = {0.5, 2.0};
  c.dims = 3;
  c.paths = 10000;
  c.record_times = {0.01, 0.3, 2.0, 30.0};
  c.root_seed = 5;
  const auto e = bw::run_ensemble(c);
  const auto msd = bw::ensemble_msd(e);
  for (std::size_t j = 1; j < e.records(); ++j) {
    EXPECT_NEAR(msd.mean[j], 3 * bw::ou_msd(c.bath, 1.0, e.times[j]), 4 * msd.std_error[j]);
  }
}

TEST(VelocityVariance, FixedStart) {
  auto c = base_config(10000, 0.05, 20);
  c.u0_policy = bw::InitialVelocity::Fixed;
  c.u0 = 0.0;
  const auto e = bw::run_ensemble(c);
  const auto v = bw::ensemble_velocity_variance(e);
  EXPECT_EQ(v.mean[0], 0.0);
  const std::size_t j = record_at(e, 0.5);
  EXPECT_NEAR(v.mean[j], 0.6321205588285577, 3 * v.std_error[j]);

  c.u0 = 3.0;
  c.paths = 10;
  const auto e3 = bw::run_ensemble(c);
  EXPECT_EQ(bw::ensemble_velocity_variance(e3).mean[0], 9.0);
}

TEST(VelocityVariance, ThreeDimensionalStationaryTotal) {
  auto c = base_config(10000, 0.1, 10, 10);
  c.dims = 3;
  const auto e = bw::run_ensemble(c);
  const auto v = bw::ensemble_velocity_variance(e);
  EXPECT_NEAR(v.mean.back(), 3.0, 3 * v.std_error.back());
  for (int axis = 0; axis < 3; ++axis) {
    const auto va = bw::ensemble_velocity_variance(e, axis);
    EXPECT_NEAR(va.mean.back(), 1.0, 3 * va.std_error.back());
  }
  EXPECT_THROW(bw::ensemble_velocity_variance(e, 3), bw::Error);
}

TEST(Stationarity, NoDriftInVelocityVariance) {
  // Per-path least-squares slope of u^2(t) over 100 / zeta; the mean slope
  // over independent paths must be consistent with zero.
  auto c = base_config(2000, 0.1, 1000);
  c.keep_samples = true;
  const auto e = bw::run_ensemble(c);
  const std::size_t R = e.records();
  double tbar = 0.0;
  for (double t : e.times) tbar += t / R;
  double sxx = 0.0;
  for (double t : e.times) sxx += (t - tbar) * (t - tbar);
  bw::RunningStat slope;
  for (std::size_t p = 0; p < c.paths; ++p) {
    double sxy = 0.0;
    for (std::size_t j = 0; j < R; ++j) {
      const double u = e.u_samples[p * R + j];
      sxy += (e.times[j] - tbar) * u * u;
    }
    slope.push(sxy / sxx);
  }
  EXPECT_LT(std::abs(slope.mean()), 3 * slope.std_error_mean());
}

TEST(Schemes, EulerMaruyamaAgreesWithExactOu) {
  auto c = base_config(10000, 1e-3, 2000, 500);
  c.scheme = bw::NoiseScheme::EulerMaruyama;
  c.root_seed = 1;
  const auto em = bw::run_ensemble(c);
  c.scheme = bw::NoiseScheme::ExactOU;
  c.root_seed = 2;
  const auto ex = bw::run_ensemble(c);
  const auto m1 = bw::ensemble_msd(em), m2 = bw::ensemble_msd(ex);
  const auto v1 = bw::ensemble_velocity_variance(em), v2 = bw::ensemble_velocity_variance(ex);
  for (std::size_t j = 1; j < em.records(); ++j) {
    EXPECT_NEAR(m1.mean[j], m2.mean[j], 3 * std::hypot(m1.std_error[j], m2.std_error[j]));
    EXPECT_NEAR(v1.mean[j], v2.mean[j], 3 * std::hypot(v1.std_error[j], v2.std_error[j]));
  }
}

TEST(Equipartition, StationaryThreeDimensions) {
  auto c = base_config(10000, 0.1, 10, 10);
  c.dims = 3;
  c.bath.kT0 = 2.0;
  const auto r = bw::equipartition_check(bw::run_ensemble(c));
  EXPECT_EQ(r.expected, 1.0);
  ASSERT_EQ(r.axes.size(), 3u);
  for (const auto& a : r.axes) EXPECT_NEAR(a.energy, 1.0, 3 * a.std_error);
  EXPECT_FALSE(r.anisotropic);
}

TEST(Equipartition, ZeroTemperatureIsAllZeros) {
  auto c = base_config(50, 0.1, 10);
  c.bath.kT0 = 0.0;
  c.dims = 2;
  const auto r = bw::equipartition_check(bw::run_ensemble(c));
  for (const auto& a : r.axes) {
    EXPECT_EQ(a.energy, 0.0);
    EXPECT_FALSE(a.deviates);
  }
  EXPECT_FALSE(r.anisotropic);
}

TEST(Equipartition, FlagsInjectedAnisotropy) {
  std::vector<bw::RunningStat> axes(3);
  for (int i = 0; i < 4000; ++i) {
    const double z = std::sin(0.37 * i) * std::sqrt(2.0);  // mean square 1
    axes[0].push(z * z);
    axes[1].push(z * z);
    axes[2].push(1.5 * z * z);
  }
  const auto r = bw::equipartition_check(axes, 1.0, 1.0);
  EXPECT_FALSE(r.axes[0].deviates);
  EXPECT_FALSE(r.axes[1].deviates);
  EXPECT_TRUE(r.axes[2].deviates);
  EXPECT_TRUE(r.anisotropic);
}

TEST(Work, OnePeriodOneAndThreeDimensions) {
  const double tau = 2 * pi;
  auto c = base_config(10000, tau / 200, 200);
  const auto w1 = bw::measure_walker_work(bw::run_ensemble(c), 1, tau);
  EXPECT_NEAR(w1.value, 2 * pi, 0.02 * 2 * pi);
  c.dims = 3;
  const auto w3 = bw::measure_walker_work(bw::run_ensemble(c), 1, tau);
  EXPECT_NEAR(w3.value, 6 * pi, 0.02 * 6 * pi);
  c.bath.kT0 = 0.0;
  c.u0_policy = bw::InitialVelocity::Fixed;
  EXPECT_EQ(bw::measure_walker_work(bw::run_ensemble(c), 1, tau).value, 0.0);
}

TEST(Work, StandardErrorShrinksAsOneOverRootM) {
  const double tau = 2 * pi;
  auto c = base_config(1000, tau / 100, 100);
  const double se1 = bw::measure_walker_work(bw::run_ensemble(c), 1, tau).std_error;
  c.paths = 4000;
  const double se4 = bw::measure_walker_work(bw::run_ensemble(c), 1, tau).std_error;
  EXPECT_NEAR(se1 / se4, 2.0, 0.3);
}

TEST(Work, WindowErrors) {
  const double tau = 2 * pi;
  auto c = base_config(10, tau / 100, 100);
  const auto e = bw::run_ensemble(c);
  try {
    bw::measure_walker_work(e, 2, tau);
    FAIL();
  } catch (const bw::Error& err) {
    EXPECT_EQ(err.kind(), bw::ErrorKind::WindowExceedsData);
  }
  try {
    bw::measure_walker_work(e, 1, 0.9 * tau, 0.0123);
    FAIL();
  } catch (const bw::Error& err) {
    EXPECT_EQ(err.kind(), bw::ErrorKind::WindowNotAligned);
  }
  EXPECT_THROW(bw::measure_walker_work(e, 0, tau), bw::Error);
}

TEST(Diffusion, FittedConstantMatchesEinstein) {
  bw::WalkerConfig c;
  c.bath = {1.0, 2.0};
  c.m = 0.5;
  c.paths = 10000;
  for (int k = 1; k <= 10; ++k) c.record_times.push_back(50.0 * k);
  c.root_seed = 3;
  const double D = bw::fitted_diffusion_constant(bw::run_ensemble(c), 50.0);
  EXPECT_NEAR(D / (1.0 / (2.0 * 0.5)), 1.0, 0.05);
}
