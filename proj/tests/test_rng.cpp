// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bouncewalk/rng.hpp"
#include "bouncewalk/stats.hpp"

namespace bw = bouncewalk;

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(bw::philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (bw::PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(bw::philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              {0xffffffff, 0xffffffff}),
            (bw::PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(bw::philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              {0xa4093822, 0x299f31d0}),
            (bw::PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(PathStream, AddressingIsStateless) {
  const bw::PathStream a(42, 7);
  const bw::PathStream b(42, 7);
  EXPECT_EQ(a.normal_pair(100, 2), b.normal_pair(100, 2));
  EXPECT_NE(a.normal_pair(100, 2), a.normal_pair(101, 2));
  EXPECT_NE(a.normal_pair(100, 2), a.normal_pair(100, 1));
  EXPECT_NE(a.normal_pair(100, 2), bw::PathStream(42, 8).normal_pair(100, 2));
  EXPECT_NE(a.normal_pair(100, 2), bw::PathStream(43, 7).normal_pair(100, 2));
  EXPECT_NE(a.normal_pair(0, 0, bw::StreamLane::Step),
            a.normal_pair(0, 0, bw::StreamLane::InitialVelocity));
}

TEST(PathStream, HighPathBitsMatter) {
  std::set<std::pair<double, double>> seen;
  for (std::uint64_t hi = 0; hi < 4; ++hi) {
    seen.insert(bw::PathStream(1, hi << 32).normal_pair(0, 0));
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST(PathStream, NormalMoments) {
  bw::RunningStat m1, m2, m4, corr;
  const bw::PathStream s(2026, 0);
  for (std::uint32_t k = 0; k < 200000; ++k) {
    const auto [z1, z2] = s.normal_pair(k, 0);
    for (double z : {z1, z2}) {
      m1.push(z);
      m2.push(z * z);
      m4.push(z * z * z * z);
    }
    corr.push(z1 * z2);
  }
  // 400k samples: standard errors are about 1.6e-3 (mean), 2.2e-3 (second
  // moment), 0.015 (fourth moment); bounds are 5 standard errors.
  EXPECT_NEAR(m1.mean(), 0.0, 5 * m1.std_error_mean());
  EXPECT_NEAR(m2.mean(), 1.0, 5 * m2.std_error_mean());
  EXPECT_NEAR(m4.mean(), 3.0, 5 * m4.std_error_mean());
  EXPECT_NEAR(corr.mean(), 0.0, 5 * corr.std_error_mean());
}

TEST(RunningStat, MergeMatchesSequential) {
  bw::RunningStat all, a, b;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i * 0.37) * 3.0 + i * 0.01;
    all.push(x);
    (i < 37 ? a : b).push(x);
  }
  a.merge(b);
  EXPECT_EQ(a.count(), all.count());
  EXPECT_NEAR(a.mean(), all.mean(), 1e-14);
  EXPECT_NEAR(a.variance(), all.variance(), 1e-13);
  bw::RunningStat empty;
  empty.merge(all);
  EXPECT_EQ(empty.mean(), all.mean());
}
