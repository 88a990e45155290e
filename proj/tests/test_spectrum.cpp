// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bouncewalk/spectrum.hpp"

namespace bw = bouncewalk;
using std::numbers::pi;

TEST(Dissipation, Examples) {
  const double tau = 2 * pi;
  const auto at = [&](double omega) {
    const auto f = bw::sample_cosine_force(1.0, omega, tau, 1000);
    return bw::dissipation_integral(f.t, f.F, 1.0, omega);
  };
  EXPECT_NEAR(at(1.0).value, 0.0, 1e-12);
  EXPECT_NEAR(at(1.5).value, -0.3183098861837907, 1e-12);
  EXPECT_NEAR(at(3.0).value, 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(at(1.5).tau, tau);
  EXPECT_EQ(at(1.5).omega, 1.5);
}

TEST(Dissipation, ArbitraryPeriodicForce) {
  // Any tau-periodic sampled force integrates to zero.
  const double tau = 3.0;
  std::vector<double> t, F;
  for (int i = 0; i <= 600; ++i) {
    t.push_back(tau * i / 600.0);
    const double s = 2 * pi * t.back() / tau;
    F.push_back(0.3 + std::sin(s) + 0.2 * std::cos(3 * s) * std::sin(s));
  }
  EXPECT_NEAR(bw::dissipation_integral(t, F, 2.0).value, 0.0, 1e-12);
  // kT0 scales the result
  F.back() += 1.0;
  EXPECT_NEAR(bw::dissipation_integral(t, F, 2.0).value, 1.0 / (2.0 * tau), 1e-12);
}

TEST(Dissipation, GridErrors) {
  const std::vector<double> t{0.0, 0.1, 0.3};
  const std::vector<double> F{1.0, 2.0, 3.0};
  try {
    bw::dissipation_integral(t, F, 1.0);
    FAIL();
  } catch (const bw::Error& e) {
    EXPECT_EQ(e.kind(), bw::ErrorKind::NonUniformGrid);
  }
  const std::vector<double> t1{0.0};
  const std::vector<double> F1{1.0};
  EXPECT_THROW(bw::dissipation_integral(t1, F1, 1.0), bw::Error);
  const std::vector<double> t2{0.0, 0.1, 0.2};
  EXPECT_THROW(bw::dissipation_integral(t2, F, 0.0), bw::Error);
}

TEST(Admissible, Frequencies) {
  EXPECT_EQ(bw::admissible_frequencies(1.0, 3), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(bw::admissible_frequencies(2.5, 2), (std::vector<double>{2.5, 5.0}));
  EXPECT_TRUE(bw::admissible_frequencies(1.0, 0).empty());
  for (double w : bw::admissible_frequencies(1.7, 6)) {
    const auto f = bw::sample_cosine_force(1.0, w, 2 * pi / 1.7, 500);
    EXPECT_LT(std::abs(bw::dissipation_integral(f.t, f.F, 1.0).value), 1e-10);
  }
}

TEST(Admissible, ScanSelectsIntegerRatios) {
  std::vector<double> ratios;
  for (int k = 10; k <= 101; ++k) ratios.push_back(k / 20.0);
  for (double w0 : {1.0, 0.37, 4.2}) {
    for (const auto& pt : bw::admissibility_scan(ratios, w0, 1.0, 1.0)) {
      const bool integer = std::abs(pt.omega_ratio - std::round(pt.omega_ratio)) < 1e-12;
      if (integer) {
        EXPECT_LT(std::abs(pt.value), 1e-10) << pt.omega_ratio;
      } else {
        EXPECT_GT(std::abs(pt.value), 1e-3) << pt.omega_ratio;
      }
    }
  }
}

TEST(Action, Examples) {
  EXPECT_NEAR(bw::action_over_period(1, 1.0, 1.0), 2 * pi, 2 * pi * 1e-10);
  EXPECT_NEAR(bw::action_over_period(2, 1.0, 1.0), 12.566370614359172, 1e-9);
  EXPECT_NEAR(bw::action_over_period(1, 0.5, 7.0), pi, pi * 1e-10);
  EXPECT_NEAR(bw::action_over_period(1, 1.0, 1.0, 17), 2 * pi, 2 * pi * 1e-10);
  EXPECT_THROW(bw::action_over_period(0, 1.0, 1.0), bw::Error);
  EXPECT_THROW(bw::action_over_period(1, 1.0, 1.0, 8), bw::Error);
}

TEST(Action, LinearInN) {
  for (int n = 1; n <= 20; ++n) {
    EXPECT_NEAR(bw::action_over_period(n, 1.3, 0.9) / n, 2 * pi * 1.3, 1e-10 * 2 * pi * 1.3);
  }
}

TEST(Spectrum, Examples) {
  const auto t = bw::energy_spectrum(2, 1.0, 1.0);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_DOUBLE_EQ(t[0].E, 0.5);
  EXPECT_DOUBLE_EQ(t[1].E, 1.5);
  EXPECT_DOUBLE_EQ(t[2].E, 2.5);
  EXPECT_DOUBLE_EQ(t[0].S_loop, 0.5);
  EXPECT_NEAR(t[1].S_loop, 2 * pi, 1e-12);
  EXPECT_DOUBLE_EQ(bw::energy_spectrum(3, 2.0, 0.5)[3].E, 3.5);
  EXPECT_EQ(bw::energy_spectrum(0, 1.0, 1.0).size(), 1u);
  EXPECT_THROW(bw::energy_spectrum(-1, 1.0, 1.0), bw::Error);
}

TEST(Spectrum, UniformSpacing) {
  const double hbar = 0.731, w0 = 2.9;
  const auto t = bw::energy_spectrum(100, hbar, w0);
  for (std::size_t n = 1; n < t.size(); ++n) {
    EXPECT_NEAR(t[n].E - t[n - 1].E, hbar * w0, 1e-12 * t[n].E);
    EXPECT_NEAR(t[n].S_loop, 2 * pi * n * hbar, 1e-10 * t[n].S_loop);
  }
}
