// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bouncewalk {

enum class ErrorKind {
  InvalidArgument,     // a precondition on an input value failed
  UndampedResonance,   // gamma == 0 with omega == omega0
  ZeroFriction,        // formula divides by gamma
  NonFiniteState,      // integrator produced NaN/Inf
  InsufficientData,    // not enough samples / periods for an estimate
  WindowNotAligned,    // integration window is not a whole number of periods/samples
  WindowExceedsData,   // requested window extends beyond the recorded data
  ResourceLimit,       // memory budget exceeded
  DimensionMismatch,   // vector lengths / grid shapes disagree
  GridTooSmall,        // fewer grid points than the stencil needs
  NotSteadyState,      // operation needs a driven steady state
  NonUniformGrid,      // sample grid spacing is not uniform
  NonPositiveDensity,  // probability field has values <= 0 (or below the floor)
  Unnormalized,        // probability field does not integrate to one
  ParallelVectors,     // spin direction undefined
  DurationMismatch,    // bouncer and walker windows differ
  Config,              // configuration / schema violation
  Io,                  // filesystem failure
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::UndampedResonance: return "undamped-resonance";
    case ErrorKind::ZeroFriction: return "zero-friction";
    case ErrorKind::NonFiniteState: return "non-finite-state";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::WindowNotAligned: return "window-not-aligned";
    case ErrorKind::WindowExceedsData: return "window-exceeds-data";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::GridTooSmall: return "grid-too-small";
    case ErrorKind::NotSteadyState: return "not-steady-state";
    case ErrorKind::NonUniformGrid: return "non-uniform-grid";
    case ErrorKind::NonPositiveDensity: return "nonpositive-density";
    case ErrorKind::Unnormalized: return "unnormalized-density";
    case ErrorKind::ParallelVectors: return "parallel-vectors";
    case ErrorKind::DurationMismatch: return "duration-mismatch";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Exception thrown by every library routine; `kind()` lets callers branch
/// without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace bouncewalk
