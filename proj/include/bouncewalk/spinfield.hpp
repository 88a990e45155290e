// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Velocity fields derived from a density P and an action field S, the spin
// vector built from their directions, the spin-extended probability current
// J = P (v + u~ x s) and the identities it satisfies on a grid.
//
// Inputs and outputs never alias; every function returns fresh fields.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "bouncewalk/errors.hpp"
#include "bouncewalk/field.hpp"

namespace bouncewalk {

inline constexpr double kDensityFloor = 1e-300;

/// v = grad S / m.
inline VectorField convective_velocity(const ScalarField& S, double m) {
  require(m > 0.0, ErrorKind::InvalidArgument, "m must be > 0");
  VectorField v = gradient(S);
  for (auto& x : v.values) x = (1.0 / m) * x;
  return v;
}

inline void require_positive_density(const ScalarField& P) {
  for (double p : P.values) {
    require(std::isfinite(p) && p >= kDensityFloor, ErrorKind::NonPositiveDensity,
            "density must be finite and >= 1e-300 everywhere on the grid");
  }
}

/// grad P / P by finite differences.
inline VectorField log_density_gradient(const ScalarField& P) {
  require_positive_density(P);
  VectorField g = gradient(P);
  for (std::size_t i = 0; i < g.values.size(); ++i) g[i] = (1.0 / P[i]) * g[i];
  return g;
}

struct OsmoticVelocity {
  VectorField u;        // -(hbar / 2m) grad P / P
  VectorField u_tilde;  // (1 / m) grad P / P
};

/// Osmotic velocities from a sampled grad P / P (analytic or numerical).
inline OsmoticVelocity osmotic_from_log_gradient(const VectorField& grad_log_p, double m,
                                                 double hbar) {
  require(m > 0.0 && hbar > 0.0, ErrorKind::InvalidArgument, "m and hbar must be > 0");
  OsmoticVelocity out{VectorField(grad_log_p.grid), VectorField(grad_log_p.grid)};
  for (std::size_t i = 0; i < grad_log_p.values.size(); ++i) {
    out.u[i] = (-hbar / (2.0 * m)) * grad_log_p[i];
    out.u_tilde[i] = (1.0 / m) * grad_log_p[i];
  }
  return out;
}

inline OsmoticVelocity osmotic_velocity(const ScalarField& P, double m, double hbar) {
  return osmotic_from_log_gradient(log_density_gradient(P), m, hbar);
}

struct SpinVector {
  Vec3 s{0.0, 0.0, 0.0};     // sign * (hbar / 2) * direction
  Vec3 direction{0.0, 0.0, 0.0};
  int sign = 1;
};

/// s = sign (hbar/2) s^ with s^ = e_u x (e_v x e_u) normalised: orthogonal
/// to e_u and in the plane of e_u and e_v.
inline SpinVector spin_vector(const Vec3& e_u, const Vec3& e_v, double hbar, int sign = 1) {
  require(std::abs(norm(e_u) - 1.0) < 1e-10 && std::abs(norm(e_v) - 1.0) < 1e-10,
          ErrorKind::InvalidArgument, "spin directions must be unit vectors");
  require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "spin sign must be +1 or -1");
  require(hbar >= 0.0, ErrorKind::InvalidArgument, "hbar must be >= 0");
  // |e_u x e_v| = sin(angle); below 1e-8 rad the plane is undefined
  require(norm(cross(e_u, e_v)) > std::sin(1e-8), ErrorKind::ParallelVectors,
          "e_u and e_v are parallel, spin direction undefined");
  Vec3 dir = cross(e_u, cross(e_v, e_u));
  dir = (1.0 / norm(dir)) * dir;
  dir = dir - dot(dir, e_u) * e_u;  // one Gram-Schmidt pass against round-off
  dir = (1.0 / norm(dir)) * dir;
  SpinVector out;
  out.direction = dir;
  out.sign = sign;
  out.s = (sign * 0.5 * hbar) * dir;
  return out;
}

/// J = P (v + u~ x s) for a spatially constant spin.
inline VectorField pauli_current(const ScalarField& P, const VectorField& v,
                                 const VectorField& u_tilde, const SpinVector& s) {
  require_same_grid(P.grid, v.grid);
  require_same_grid(P.grid, u_tilde.grid);
  VectorField J(P.grid);
  for (std::size_t i = 0; i < J.values.size(); ++i) {
    J[i] = P[i] * (v[i] + cross(u_tilde[i], s.s));
  }
  return J;
}

/// max over the interior of |dP/dt + div J|.
inline double continuity_residual(const VectorField& J, const ScalarField& dPdt, int margin = 1) {
  require_same_grid(J.grid, dPdt.grid);
  ScalarField r = divergence(J);
  for (std::size_t i = 0; i < r.values.size(); ++i) r[i] += dPdt[i];
  return max_abs_interior(r, margin);
}

/// Both forms of the kinetic Hamiltonian density for one point:
/// (m/2)|v + u~ x s|^2 and (m/2)(v^2 + u~^2 s^2).
inline std::pair<double, double> hamiltonian_pointwise(const Vec3& v, const Vec3& u_tilde,
                                                       const Vec3& s, double m) {
  const Vec3 w = v + cross(u_tilde, s);
  return {0.5 * m * dot(w, w), 0.5 * m * (dot(v, v) + dot(u_tilde, u_tilde) * dot(s, s))};
}

struct HamiltonianDensity {
  ScalarField combined;   // (m/2)|v + u~ x s|^2 + V
  ScalarField separated;  // (m/2)(v^2 + u~^2 s^2) + V
};

inline HamiltonianDensity hamiltonian_density(const VectorField& v, const VectorField& u_tilde,
                                              const SpinVector& s, double m,
                                              const ScalarField* potential = nullptr) {
  require_same_grid(v.grid, u_tilde.grid);
  if (potential != nullptr) require_same_grid(v.grid, potential->grid);
  HamiltonianDensity h{ScalarField(v.grid), ScalarField(v.grid)};
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    const auto [a, b] = hamiltonian_pointwise(v[i], u_tilde[i], s.s, m);
    const double V = potential != nullptr ? (*potential)[i] : 0.0;
    h.combined[i] = a + V;
    h.separated[i] = b + V;
  }
  return h;
}

/// grad Q = -kT0 grad P / P for P = P0 exp(-Q / kT0).
inline VectorField heat_gradient_from_log_gradient(const VectorField& grad_log_p, double kT0) {
  VectorField out(grad_log_p.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) out[i] = (-kT0) * grad_log_p[i];
  return out;
}

inline VectorField heat_gradient(const ScalarField& P, double kT0) {
  return heat_gradient_from_log_gradient(log_density_gradient(P), kT0);
}

struct FrictionReport {
  std::optional<double> fitted_zeta;  // least-squares zeta in m zeta u = grad Q; empty if u == 0
  double expected_zeta = 0.0;         // 2 omega0
  double inconsistency = 0.0;         // fitted / expected; kT0 / (hbar omega0) in theory
  double momentum_residual = 0.0;     // max |m u - grad Q / (2 omega0)| over the interior
};

/// Checks m u = grad Q / (2 omega0) and fits zeta from m zeta u = grad Q.
inline FrictionReport verify_friction_relation(const VectorField& grad_log_p, double m,
                                               double hbar, double omega0, double kT0,
                                               int margin = 1) {
  require(m > 0.0 && hbar > 0.0 && omega0 > 0.0 && kT0 > 0.0, ErrorKind::InvalidArgument,
          "m, hbar, omega0 and kT0 must be > 0");
  const OsmoticVelocity vel = osmotic_from_log_gradient(grad_log_p, m, hbar);
  const VectorField gq = heat_gradient_from_log_gradient(grad_log_p, kT0);
  FrictionReport r;
  r.expected_zeta = 2.0 * omega0;
  double num = 0.0;
  double den = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < gq.values.size(); ++i) {
    if (!gq.grid.interior(i, margin)) continue;
    const Vec3& u = vel.u[i];
    num += dot(gq[i], u);
    den += m * dot(u, u);
    scale = std::max(scale, norm(gq[i]));
    r.momentum_residual =
        std::max(r.momentum_residual, norm(m * u - (0.5 / omega0) * gq[i]));
  }
  if (den > 0.0 && scale > 0.0) {
    r.fitted_zeta = num / den;
    r.inconsistency = *r.fitted_zeta / r.expected_zeta;
  }
  return r;
}

inline FrictionReport verify_friction_relation(const ScalarField& P, double m, double hbar,
                                               double omega0, double kT0) {
  return verify_friction_relation(log_density_gradient(P), m, hbar, omega0, kT0);
}

/// Trapezoid weights times the cell volume.
inline double trapezoid_weight(const Grid& g, std::size_t idx) {
  const auto ijk = g.unravel(idx);
  double w = g.cell_volume();
  for (int a = 0; a < g.dims; ++a) {
    if (ijk[a] == 0 || ijk[a] == g.shape[a] - 1) w *= 0.5;
  }
  return w;
}

inline double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) sum += trapezoid_weight(f.grid, i) * f[i];
  return sum;
}

/// <U> = (m/2) \int P |u|^2 for a density normalised on the grid.
inline double quantum_potential_average(const VectorField& u, const ScalarField& P, double m) {
  require_same_grid(u.grid, P.grid);
  const double mass = integrate(P);
  require(std::abs(mass - 1.0) <= 1e-6, ErrorKind::Unnormalized,
          "density integrates to " + format_double(mass) + ", not 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < P.values.size(); ++i) {
    sum += trapezoid_weight(P.grid, i) * P[i] * dot(u[i], u[i]);
  }
  return 0.5 * m * sum;
}

/// Isotropic Gaussian density with standard deviation sigma along each
/// active axis, normalised over all space, centred at `center`.
inline ScalarField gaussian_density(const Grid& g, double sigma, const Vec3& center = {0, 0, 0}) {
  require(sigma > 0.0, ErrorKind::InvalidArgument, "sigma must be > 0");
  const double norm1 = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  return sample_scalar(g, [&](const Vec3& x) {
    double r2 = 0.0;
    for (int a = 0; a < g.dims; ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
    return std::pow(norm1, g.dims) * std::exp(-0.5 * r2 / (sigma * sigma));
  });
}

/// Closed-form grad P / P = -(x - center) / sigma^2 of the Gaussian above.
inline VectorField gaussian_log_gradient(const Grid& g, double sigma,
                                         const Vec3& center = {0, 0, 0}) {
  return sample_vector(g, [&](const Vec3& x) {
    Vec3 out{0.0, 0.0, 0.0};
    for (int a = 0; a < g.dims; ++a) out[a] = -(x[a] - center[a]) / (sigma * sigma);
    return out;
  });
}

}  // namespace bouncewalk
