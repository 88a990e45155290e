// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Closed-form results for the driven oscillator ("bouncer"), the Langevin
// walker and their energy balance. Everything here is a pure function and
// serves as the oracle the simulation modules are checked against.

#include <cmath>
#include <numbers>
#include <string>

#include "bouncewalk/errors.hpp"

namespace bouncewalk {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Driven damped oscillator m x'' = -m w0^2 x - 2 gamma m x' + F0 cos(w t),
/// applied independently along each of `dims` axes.
struct OscillatorParams {
  double m = 1.0;
  double omega0 = 1.0;
  double gamma = 0.1;
  double F0 = 1.0;
  int dims = 1;

  void validate() const {
    require(std::isfinite(m) && m > 0.0, ErrorKind::InvalidArgument, "m must be > 0");
    require(std::isfinite(omega0) && omega0 > 0.0, ErrorKind::InvalidArgument,
            "omega0 must be > 0");
    require(std::isfinite(gamma) && gamma >= 0.0, ErrorKind::InvalidArgument,
            "gamma must be >= 0");
    require(std::isfinite(F0) && F0 >= 0.0, ErrorKind::InvalidArgument, "F0 must be >= 0");
    require(dims >= 1, ErrorKind::InvalidArgument, "dims must be >= 1");
  }

  bool operator==(const OscillatorParams&) const = default;
};

/// Thermal bath seen by the walker: thermal energy kT0 and friction zeta.
struct BathParams {
  double kT0 = 1.0;
  double zeta = 1.0;

  void validate() const {
    require(std::isfinite(kT0) && kT0 > 0.0, ErrorKind::InvalidArgument, "kT0 must be > 0");
    require(std::isfinite(zeta) && zeta > 0.0, ErrorKind::InvalidArgument, "zeta must be > 0");
  }

  bool operator==(const BathParams&) const = default;
};

struct DerivedConstants {
  double r = 0.0;       // steady-state amplitude at resonance
  double tau = 0.0;     // period 2 pi / omega0
  double hbar = 0.0;    // angular-momentum invariant m r^2 omega0
  double lambda = 0.0;  // noise strength 2 zeta m kT0
  double D = 0.0;       // diffusion constant kT0 / (zeta m)
};

/// Steady-state response amplitude A(omega).
inline double amplitude_response(const OscillatorParams& p, double omega) {
  p.validate();
  require(std::isfinite(omega) && omega >= 0.0, ErrorKind::InvalidArgument,
          "drive frequency must be >= 0");
  const double detune = p.omega0 * p.omega0 - omega * omega;
  const double damp = 2.0 * p.gamma * omega;
  const double denom = std::hypot(detune, damp);
  if (denom == 0.0) {
    throw Error(ErrorKind::UndampedResonance,
                "gamma = 0 driven exactly at omega0 has unbounded response");
  }
  return (p.F0 / p.m) / denom;
}

/// Phase lag phi of x = A cos(omega t + phi) behind the drive, in (-pi, 0].
///
/// tan(phi) = -2 gamma omega / (omega0^2 - omega^2) only fixes phi modulo pi;
/// the lag branch is the one continuous in omega starting from 0 at omega = 0.
/// For gamma = 0 at omega = omega0 the continuity value -pi/2 is returned.
inline double phase_response(const OscillatorParams& p, double omega) {
  p.validate();
  require(std::isfinite(omega) && omega >= 0.0, ErrorKind::InvalidArgument,
          "drive frequency must be >= 0");
  const double detune = p.omega0 * p.omega0 - omega * omega;
  const double damp = 2.0 * p.gamma * omega;
  if (damp == 0.0) {
    if (detune > 0.0) return 0.0;
    if (detune < 0.0) return -std::numbers::pi;
    return -0.5 * std::numbers::pi;
  }
  return std::atan2(-damp, detune);
}

inline DerivedConstants derived_constants(const OscillatorParams& p, const BathParams& b) {
  p.validate();
  b.validate();
  require(p.gamma > 0.0, ErrorKind::ZeroFriction, "resonant amplitude needs gamma > 0");
  DerivedConstants c;
  c.r = p.F0 / (2.0 * p.gamma * p.m * p.omega0);
  c.tau = kTwoPi / p.omega0;
  c.hbar = p.m * c.r * c.r * p.omega0;
  c.lambda = 2.0 * b.zeta * p.m * b.kT0;
  c.D = b.kT0 / (b.zeta * p.m);
  return c;
}

/// Resonant amplitude r = F0 / (2 gamma m omega0).
inline double resonant_amplitude(const OscillatorParams& p) {
  p.validate();
  require(p.gamma > 0.0, ErrorKind::ZeroFriction, "resonant amplitude needs gamma > 0");
  return p.F0 / (2.0 * p.gamma * p.m * p.omega0);
}

/// hbar = m r^2 omega0 for the resonant steady state.
inline double hbar_invariant(const OscillatorParams& p) {
  const double r = resonant_amplitude(p);
  return p.m * r * r * p.omega0;
}

/// Mean squared displacement of a stationary Ornstein-Uhlenbeck walker (one axis).
inline double ou_msd(const BathParams& b, double m, double t) {
  b.validate();
  require(m > 0.0, ErrorKind::InvalidArgument, "m must be > 0");
  const double a = b.zeta * std::abs(t);
  // a - 1 + exp(-a) loses all digits for small a; expm1 keeps them.
  const double shape = a + std::expm1(-a);
  return 2.0 * b.kT0 / (b.zeta * b.zeta * m) * shape;
}

/// <u^2>(t) for a walker started with velocity u0 (one axis).
inline double ou_velocity_variance(const BathParams& b, double m, double u0, double t) {
  b.validate();
  require(m > 0.0, ErrorKind::InvalidArgument, "m must be > 0");
  require(t >= 0.0, ErrorKind::InvalidArgument, "t must be >= 0");
  const double lambda = 2.0 * b.zeta * m * b.kT0;
  const double decay = std::exp(-2.0 * b.zeta * t);
  return lambda / (2.0 * b.zeta * m * m) * (-std::expm1(-2.0 * b.zeta * t)) + u0 * u0 * decay;
}

/// Work taken up by the bouncer over one period, 2 pi gamma hbar.
inline double bouncer_work_per_period(const OscillatorParams& p) {
  require(p.gamma > 0.0, ErrorKind::ZeroFriction, "bouncer work needs gamma > 0");
  return kTwoPi * p.gamma * hbar_invariant(p);
}

/// The same work written as gamma m omega0^2 r^2 tau; kept as an independent route.
inline double bouncer_work_per_period_direct(const OscillatorParams& p) {
  const double r = resonant_amplitude(p);
  const double tau = kTwoPi / p.omega0;
  return p.gamma * p.m * p.omega0 * p.omega0 * r * r * tau;
}

/// Walker work over n periods tau = 2 pi / omega0 in N = p.dims dimensions.
inline double walker_work(int n, const OscillatorParams& p, const BathParams& b) {
  p.validate();
  b.validate();
  require(n >= 1, ErrorKind::InvalidArgument, "number of periods n must be >= 1");
  return n * (p.dims * kTwoPi / p.omega0) * b.zeta * b.kT0;
}

/// Total energy N kT0 = (gamma / zeta) hbar omega0 of the coupled steady state.
inline double stationary_energy(const OscillatorParams& p, const BathParams& b) {
  b.validate();
  return p.gamma / b.zeta * hbar_invariant(p) * p.omega0;
}

/// Bath energy kT0 that balances bouncer and walker work: N kT0 = (gamma/zeta) hbar omega0.
inline double balanced_kT0(const OscillatorParams& p, double zeta) {
  require(zeta > 0.0, ErrorKind::InvalidArgument, "zeta must be > 0");
  return p.gamma / zeta * hbar_invariant(p) * p.omega0 / p.dims;
}

/// Friction that makes osmotic momentum and heat gradient consistent: 2 omega0.
inline double friction_from_omega(double omega0) {
  require(omega0 > 0.0, ErrorKind::InvalidArgument, "omega0 must be > 0");
  return 2.0 * omega0;
}

inline double zero_point_energy(const OscillatorParams& p) {
  return 0.5 * hbar_invariant(p) * p.omega0;
}

/// S0 = E0 / omega0 = hbar / 2.
inline double zero_point_action(const OscillatorParams& p) {
  return zero_point_energy(p) / p.omega0;
}

}  // namespace bouncewalk
