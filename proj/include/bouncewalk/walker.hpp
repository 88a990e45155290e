// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Langevin walker m u' = -m zeta u + f(t) with white noise of strength
// lambda, simulated as an ensemble of independent paths.
//
// Paths are grouped into fixed-size blocks. Each block reduces its paths in
// index order and blocks are merged in block order, so results are
// bit-identical for any number of worker threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/errors.hpp"
#include "bouncewalk/rng.hpp"
#include "bouncewalk/stats.hpp"

namespace bouncewalk {

enum class NoiseScheme { ExactOU, EulerMaruyama };

inline const char* to_string(NoiseScheme s) {
  return s == NoiseScheme::ExactOU ? "exact-ou" : "euler-maruyama";
}

struct NoiseModel {
  double lambda = 0.0;  // <f(t) f(t')> = lambda delta(t - t')
  NoiseScheme scheme = NoiseScheme::ExactOU;

  /// Einstein relation lambda = 2 zeta m kT0.
  static NoiseModel from_bath(const BathParams& b, double m,
                              NoiseScheme scheme = NoiseScheme::ExactOU) {
    return {2.0 * b.zeta * m * b.kT0, scheme};
  }
};

struct WalkerState {
  std::vector<double> x;
  std::vector<double> u;
};

enum class InitialVelocity { Fixed, Stationary };

struct WalkerConfig {
  BathParams bath;  // kT0 may be 0 here for noise-free runs
  double m = 1.0;
  int dims = 1;
  NoiseScheme scheme = NoiseScheme::ExactOU;
  InitialVelocity u0_policy = InitialVelocity::Stationary;
  double u0 = 0.0;  // per-axis start velocity for InitialVelocity::Fixed
  std::size_t paths = 1000;
  double dt = 0.01;
  long long steps = 100;
  long long record_stride = 1;
  // When non-empty, exact-ou paths jump directly between these strictly
  // increasing positive times (t = 0 is always recorded first); dt, steps
  // and record_stride are then ignored.
  std::vector<double> record_times;
  std::uint64_t root_seed = 0;
  bool keep_samples = false;
  std::size_t memory_budget_bytes = std::size_t{512} << 20;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Ensemble output: recorded times, index-ordered statistics and, if
/// requested, the raw per-path samples laid out as [path][record][axis].
struct WalkerEnsemble {
  WalkerConfig config;
  std::vector<double> times;
  std::vector<RunningStat> msd;         // |x(t) - x(0)|^2 summed over axes
  std::vector<RunningStat> vvar;        // |u(t)|^2 summed over axes
  std::vector<RunningStat> vvar_axis;   // [record][axis] u_i(t)^2
  std::vector<RunningStat> u2_integral; // trapezoid of |u|^2 from t = 0 on the record grid
  std::vector<double> x_samples;
  std::vector<double> u_samples;

  std::size_t records() const { return times.size(); }
  int dims() const { return config.dims; }
};

struct StepCoefficients {
  double decay = 1.0;       // e^{-zeta dt}
  double drift = 0.0;       // (1 - e^{-zeta dt}) / zeta
  double sd_u = 0.0;        // Cholesky factor of the (u, x) increment covariance
  double x_from_u = 0.0;
  double sd_x = 0.0;
};

namespace detail {

// 2a - 3 + 4 e^{-a} - e^{-2a}, accurate for small a.
inline double ou_position_shape(double a) {
  if (a < 0.05) {
    double term = a * a * a / 6.0;  // a^k / k! for k = 3
    double sum = 0.0;
    double sign = -1.0;              // (-1)^k
    double pow2 = 8.0;               // 2^k
    for (int k = 3; k < 30; ++k) {
      sum += (4.0 * sign - sign * pow2) * term;
      term *= a / (k + 1);
      sign = -sign;
      pow2 *= 2.0;
    }
    return sum;
  }
  return 2.0 * a - 3.0 + 4.0 * std::exp(-a) - std::exp(-2.0 * a);
}

}  // namespace detail

/// Coefficients of one exact OU step of length dt for thermal velocity
/// variance kT/m = `thermal_var`.
inline StepCoefficients exact_ou_coefficients(double zeta, double thermal_var, double dt) {
  StepCoefficients c;
  const double a = zeta * dt;
  const double one_minus_e = -std::expm1(-a);
  c.decay = 1.0 - one_minus_e;
  c.drift = one_minus_e / zeta;
  if (thermal_var <= 0.0) return c;
  const double var_u = thermal_var * (-std::expm1(-2.0 * a));
  const double cov = thermal_var / zeta * one_minus_e * one_minus_e;
  const double var_x = thermal_var / (zeta * zeta) * detail::ou_position_shape(a);
  c.sd_u = std::sqrt(var_u);
  c.x_from_u = cov / c.sd_u;
  // var_x - cov^2 / var_u, written to avoid the leading-order cancellation
  const double cond = var_x - thermal_var / (zeta * zeta) * one_minus_e * one_minus_e *
                                  one_minus_e / (2.0 - one_minus_e);
  c.sd_x = std::sqrt(std::max(0.0, cond));
  return c;
}

namespace detail {

inline void apply_step(const StepCoefficients& c, NoiseScheme scheme, double zeta, double em_sd,
                       double dt, WalkerState& s, const PathStream& stream, std::uint32_t step) {
  const int dims = static_cast<int>(s.x.size());
  for (int i = 0; i < dims; ++i) {
    const auto [z1, z2] = stream.normal_pair(step, static_cast<std::uint32_t>(i));
    const double u = s.u[i];
    if (scheme == NoiseScheme::ExactOU) {
      s.u[i] = u * c.decay + c.sd_u * z1;
      s.x[i] += u * c.drift + c.x_from_u * z1 + c.sd_x * z2;
    } else {
      s.u[i] = u * (1.0 - zeta * dt) + em_sd * z1;
      s.x[i] += u * dt;
    }
  }
}

}  // namespace detail

/// One step of the walker. `step_index` addresses the noise for this step in
/// the path's stream.
inline WalkerState step_walker(WalkerState state, const BathParams& b, double m,
                               const NoiseModel& noise, double dt, const PathStream& stream,
                               std::uint32_t step_index) {
  require(dt > 0.0, ErrorKind::InvalidArgument, "dt must be > 0");
  require(state.x.size() == state.u.size(), ErrorKind::DimensionMismatch,
          "walker state x and u must have equal length");
  const double thermal_var = noise.lambda / (2.0 * b.zeta * m * m);
  const StepCoefficients c = noise.scheme == NoiseScheme::ExactOU
                                 ? exact_ou_coefficients(b.zeta, thermal_var, dt)
                                 : StepCoefficients{};
  const double em_sd = std::sqrt(noise.lambda / (m * m) * dt);
  detail::apply_step(c, noise.scheme, b.zeta, em_sd, dt, state, stream, step_index);
  return state;
}

namespace detail {

inline constexpr std::size_t kBlockPaths = 256;

inline void validate(const WalkerConfig& c) {
  require(std::isfinite(c.bath.kT0) && c.bath.kT0 >= 0.0, ErrorKind::InvalidArgument,
          "kT0 must be >= 0");
  require(std::isfinite(c.bath.zeta) && c.bath.zeta > 0.0, ErrorKind::InvalidArgument,
          "zeta must be > 0");
  require(c.m > 0.0, ErrorKind::InvalidArgument, "m must be > 0");
  require(c.dims >= 1, ErrorKind::InvalidArgument, "dims must be >= 1");
  require(c.paths >= 1, ErrorKind::InvalidArgument, "ensemble needs at least one path");
  require(std::isfinite(c.u0), ErrorKind::InvalidArgument, "u0 must be finite");
  if (c.record_times.empty()) {
    require(c.dt > 0.0, ErrorKind::InvalidArgument, "dt must be > 0");
    require(c.steps >= 0, ErrorKind::InvalidArgument, "steps must be >= 0");
    require(c.record_stride >= 1, ErrorKind::InvalidArgument, "record_stride must be >= 1");
    require(c.steps % c.record_stride == 0, ErrorKind::InvalidArgument,
            "record_stride must divide steps");
    require(c.steps < (1LL << 32), ErrorKind::InvalidArgument, "steps exceed the counter range");
  } else {
    require(c.scheme == NoiseScheme::ExactOU, ErrorKind::InvalidArgument,
            "explicit record times need the exact-ou scheme");
    double prev = 0.0;
    for (double t : c.record_times) {
      require(std::isfinite(t) && t > prev, ErrorKind::InvalidArgument,
              "record times must be positive and strictly increasing");
      prev = t;
    }
  }
}

struct BlockResult {
  std::vector<RunningStat> msd, vvar, vvar_axis, u2_integral;
};

}  // namespace detail

/// Bytes the ensemble will hold for a given configuration.
inline std::size_t ensemble_memory_bytes(const WalkerConfig& c) {
  const std::size_t records = c.record_times.empty()
                                  ? static_cast<std::size_t>(c.steps / c.record_stride) + 1
                                  : c.record_times.size() + 1;
  const std::size_t dims = static_cast<std::size_t>(c.dims);
  const std::size_t blocks = (c.paths + detail::kBlockPaths - 1) / detail::kBlockPaths;
  const std::size_t stats = (blocks + 1) * records * (3 + dims) * sizeof(RunningStat);
  const std::size_t samples = c.keep_samples ? c.paths * records * dims * 2 * sizeof(double) : 0;
  return stats + samples;
}

inline WalkerEnsemble run_ensemble(const WalkerConfig& cfg) {
  detail::validate(cfg);
  require(ensemble_memory_bytes(cfg) <= cfg.memory_budget_bytes, ErrorKind::ResourceLimit,
          "ensemble needs " + std::to_string(ensemble_memory_bytes(cfg)) +
              " bytes, over the budget of " + std::to_string(cfg.memory_budget_bytes));

  WalkerEnsemble e;
  e.config = cfg;
  const bool explicit_times = !cfg.record_times.empty();
  if (explicit_times) {
    e.times.push_back(0.0);
    e.times.insert(e.times.end(), cfg.record_times.begin(), cfg.record_times.end());
  } else {
    const long long n = cfg.steps / cfg.record_stride;
    for (long long j = 0; j <= n; ++j) {
      e.times.push_back(static_cast<double>(j * cfg.record_stride) * cfg.dt);
    }
  }
  const std::size_t R = e.times.size();
  const int dims = cfg.dims;
  const double thermal_var = cfg.bath.kT0 / cfg.m;
  const double zeta = cfg.bath.zeta;
  const NoiseModel noise = NoiseModel::from_bath(cfg.bath, cfg.m, cfg.scheme);
  const double em_sd = std::sqrt(noise.lambda / (cfg.m * cfg.m) * cfg.dt);
  const StepCoefficients uniform_coeffs =
      explicit_times ? StepCoefficients{} : exact_ou_coefficients(zeta, thermal_var, cfg.dt);
  std::vector<StepCoefficients> jump_coeffs;
  if (explicit_times) {
    for (std::size_t j = 1; j < R; ++j) {
      jump_coeffs.push_back(exact_ou_coefficients(zeta, thermal_var, e.times[j] - e.times[j - 1]));
    }
  }

  if (cfg.keep_samples) {
    e.x_samples.assign(cfg.paths * R * dims, 0.0);
    e.u_samples.assign(cfg.paths * R * dims, 0.0);
  }

  const std::size_t blocks = (cfg.paths + detail::kBlockPaths - 1) / detail::kBlockPaths;
  std::vector<detail::BlockResult> partial(blocks);

  const auto run_block = [&](std::size_t block) {
    detail::BlockResult& out = partial[block];
    out.msd.assign(R, {});
    out.vvar.assign(R, {});
    out.vvar_axis.assign(R * dims, {});
    out.u2_integral.assign(R, {});
    const std::size_t first = block * detail::kBlockPaths;
    const std::size_t last = std::min(cfg.paths, first + detail::kBlockPaths);
    WalkerState s{std::vector<double>(dims), std::vector<double>(dims)};
    for (std::size_t path = first; path < last; ++path) {
      const PathStream stream(cfg.root_seed, path);
      for (int i = 0; i < dims; ++i) {
        s.x[i] = 0.0;
        if (cfg.u0_policy == InitialVelocity::Fixed) {
          s.u[i] = cfg.u0;
        } else {
          const auto z = stream.normal_pair(0, static_cast<std::uint32_t>(i),
                                            StreamLane::InitialVelocity);
          s.u[i] = std::sqrt(thermal_var) * z.first;
        }
      }
      double integral = 0.0;
      double prev_u2 = 0.0;
      std::uint32_t step = 0;
      for (std::size_t j = 0; j < R; ++j) {
        if (j > 0) {
          if (explicit_times) {
            detail::apply_step(jump_coeffs[j - 1], NoiseScheme::ExactOU, zeta, 0.0, 0.0, s,
                               stream, step++);
          } else {
            for (long long k = 0; k < cfg.record_stride; ++k) {
              detail::apply_step(uniform_coeffs, cfg.scheme, zeta, em_sd, cfg.dt, s, stream,
                                 step++);
            }
          }
        }
        double r2 = 0.0;
        double u2 = 0.0;
        for (int i = 0; i < dims; ++i) {
          r2 += s.x[i] * s.x[i];
          const double ui2 = s.u[i] * s.u[i];
          u2 += ui2;
          out.vvar_axis[j * dims + i].push(ui2);
        }
        if (j > 0) integral += 0.5 * (prev_u2 + u2) * (e.times[j] - e.times[j - 1]);
        prev_u2 = u2;
        out.msd[j].push(r2);
        out.vvar[j].push(u2);
        out.u2_integral[j].push(integral);
        if (cfg.keep_samples) {
          const std::size_t base = (path * R + j) * dims;
          std::copy(s.x.begin(), s.x.end(), e.x_samples.begin() + base);
          std::copy(s.u.begin(), s.u.end(), e.u_samples.begin() + base);
        }
      }
    }
  };

  unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : cfg.threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }

  e.msd.assign(R, {});
  e.vvar.assign(R, {});
  e.vvar_axis.assign(R * dims, {});
  e.u2_integral.assign(R, {});
  for (const auto& part : partial) {
    for (std::size_t j = 0; j < R; ++j) {
      e.msd[j].merge(part.msd[j]);
      e.vvar[j].merge(part.vvar[j]);
      e.u2_integral[j].merge(part.u2_integral[j]);
    }
    for (std::size_t k = 0; k < R * dims; ++k) e.vvar_axis[k].merge(part.vvar_axis[k]);
  }
  return e;
}

inline SeriesWithError ensemble_msd(const WalkerEnsemble& e) {
  SeriesWithError s;
  for (std::size_t j = 0; j < e.records(); ++j) s.push_back(e.times[j], e.msd[j]);
  return s;
}

/// <|u|^2> summed over axes.
inline SeriesWithError ensemble_velocity_variance(const WalkerEnsemble& e) {
  SeriesWithError s;
  for (std::size_t j = 0; j < e.records(); ++j) s.push_back(e.times[j], e.vvar[j]);
  return s;
}

/// <u_axis^2> for one axis.
inline SeriesWithError ensemble_velocity_variance(const WalkerEnsemble& e, int axis) {
  require(axis >= 0 && axis < e.dims(), ErrorKind::DimensionMismatch, "axis out of range");
  SeriesWithError s;
  for (std::size_t j = 0; j < e.records(); ++j) {
    s.push_back(e.times[j], e.vvar_axis[j * e.dims() + axis]);
  }
  return s;
}

/// Cumulative work integrand m zeta \int_0^t <|u|^2> dt' on the record grid.
inline SeriesWithError ensemble_work_integral(const WalkerEnsemble& e) {
  const double scale = e.config.m * e.config.bath.zeta;
  SeriesWithError s;
  for (std::size_t j = 0; j < e.records(); ++j) {
    s.t.push_back(e.times[j]);
    s.mean.push_back(scale * e.u2_integral[j].mean());
    s.std_error.push_back(scale * e.u2_integral[j].std_error_mean());
  }
  return s;
}

struct WalkerWork {
  double value = 0.0;
  double std_error = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
};

/// W = m zeta \int <|u|^2> dt over [t_start, t_start + n tau]. Both window
/// ends must fall on recorded times. For t_start > 0 the standard error
/// ignores the correlation between the two ends and is an upper bound.
inline WalkerWork measure_walker_work(const WalkerEnsemble& e, int n, double tau,
                                      double t_start = 0.0) {
  require(n >= 1, ErrorKind::InvalidArgument, "n must be >= 1");
  require(tau > 0.0, ErrorKind::InvalidArgument, "tau must be > 0");
  require(t_start >= 0.0, ErrorKind::InvalidArgument, "window start must be >= 0");
  const double t_end = t_start + n * tau;
  const double tol = 1e-9 * std::max(1.0, t_end);
  require(t_end <= e.times.back() + tol, ErrorKind::WindowExceedsData,
          "work window ends at t = " + std::to_string(t_end) + " beyond the last record t = " +
              std::to_string(e.times.back()));
  const auto locate = [&](double t) {
    const auto it = std::lower_bound(e.times.begin(), e.times.end(), t - tol);
    require(it != e.times.end() && std::abs(*it - t) <= tol, ErrorKind::WindowNotAligned,
            "work window edge t = " + std::to_string(t) + " is not a recorded time");
    return static_cast<std::size_t>(it - e.times.begin());
  };
  const std::size_t j0 = locate(t_start);
  const std::size_t j1 = locate(t_end);
  const double scale = e.config.m * e.config.bath.zeta;
  WalkerWork w;
  w.t_start = t_start;
  w.t_end = t_end;
  w.value = scale * (e.u2_integral[j1].mean() - e.u2_integral[j0].mean());
  const double se1 = e.u2_integral[j1].std_error_mean();
  const double se0 = j0 == 0 ? 0.0 : e.u2_integral[j0].std_error_mean();
  w.std_error = scale * std::sqrt(se1 * se1 + se0 * se0);
  return w;
}

struct AxisEnergy {
  double energy = 0.0;  // 1/2 m <u_i^2>
  double std_error = 0.0;
  bool deviates = false;  // more than 4 standard errors from kT0 / 2
};

struct EquipartitionReport {
  std::vector<AxisEnergy> axes;
  double expected = 0.0;  // kT0 / 2
  bool anisotropic = false;
};

/// Checks 1/2 m <u_i^2> against kT0 / 2 axis by axis.
inline EquipartitionReport equipartition_check(const std::vector<RunningStat>& u2_per_axis,
                                               double m, double kT0) {
  EquipartitionReport r;
  r.expected = 0.5 * kT0;
  for (const auto& s : u2_per_axis) {
    AxisEnergy a;
    a.energy = 0.5 * m * s.mean();
    a.std_error = 0.5 * m * s.std_error_mean();
    a.deviates = std::abs(a.energy - r.expected) > 4.0 * a.std_error &&
                 std::abs(a.energy - r.expected) > 1e-12 * std::max(1.0, r.expected);
    r.anisotropic = r.anisotropic || a.deviates;
    r.axes.push_back(a);
  }
  return r;
}

/// Equipartition at the last recorded time of the ensemble.
inline EquipartitionReport equipartition_check(const WalkerEnsemble& e) {
  const std::size_t j = e.records() - 1;
  std::vector<RunningStat> last(e.vvar_axis.begin() + j * e.dims(),
                                e.vvar_axis.begin() + (j + 1) * e.dims());
  return equipartition_check(last, e.config.m, e.config.bath.kT0);
}

/// Long-time diffusion constant: half the least-squares slope of the MSD per
/// axis over records with t >= t_min.
inline double fitted_diffusion_constant(const WalkerEnsemble& e, double t_min) {
  std::vector<double> t, y;
  for (std::size_t j = 0; j < e.records(); ++j) {
    if (e.times[j] >= t_min) {
      t.push_back(e.times[j]);
      y.push_back(e.msd[j].mean() / e.dims());
    }
  }
  return 0.5 * fit_line(t, y).slope;
}

}  // namespace bouncewalk
