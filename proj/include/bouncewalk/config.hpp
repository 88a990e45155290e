// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Experiment configuration: a strict JSON schema (unknown keys rejected),
// documented defaults, and an echo that parses back to an equal config.
//
// {
//   "experiment": "bouncer" | "walker" | "balance" | "spectrum" | "spinfield",
//   "oscillator": {"m", "omega0", "gamma", "F0", "dims"},
//   "bath": {"kT0", "zeta"},
//   "numerics": {...},   // see NumericsConfig
//   "root_seed": 0, "output_dir": "out", "threads": "auto" | N
// }

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/balance.hpp"
#include "bouncewalk/errors.hpp"
#include "bouncewalk/walker.hpp"

namespace bouncewalk {

enum class ExperimentKind { Bouncer, Walker, Balance, Spectrum, Spinfield };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Bouncer: return "bouncer";
    case ExperimentKind::Walker: return "walker";
    case ExperimentKind::Balance: return "balance";
    case ExperimentKind::Spectrum: return "spectrum";
    case ExperimentKind::Spinfield: return "spinfield";
  }
  return "unknown";
}

inline const char* to_string(InitialVelocity v) {
  return v == InitialVelocity::Fixed ? "fixed" : "stationary";
}

enum class DriveShape { Uniform, Linear, Circular };

inline const char* to_string(DriveShape d) {
  switch (d) {
    case DriveShape::Uniform: return "uniform";
    case DriveShape::Linear: return "linear";
    case DriveShape::Circular: return "circular";
  }
  return "unknown";
}

struct NumericsConfig {
  // bouncer
  double omega_ratio = 1.0;        // drive frequency / omega0
  DriveShape drive = DriveShape::Uniform;
  int samples_per_period = 200;    // bouncer step; walker step in the balance run
  int periods = 10;                // recorded steady-state periods
  double settle_time = 0.0;        // time before recording; 0 means twenty slowest decay times
  // walker
  std::size_t paths = 10000;
  double dt = 0.01;
  long long steps = 10000;
  long long record_stride = 100;
  NoiseScheme scheme = NoiseScheme::ExactOU;
  InitialVelocity u0_policy = InitialVelocity::Stationary;
  double u0 = 0.0;
  // balance
  int n_periods = kDefaultBalancePeriods;
  // spectrum
  int n_max = 5;
  double scan_min = 0.5;
  double scan_max = 5.05;
  double scan_step = 0.05;
  int intervals = 1000;
  // spinfield
  int grid_dims = 2;
  int grid_points = 161;
  double grid_extent = 4.0;        // grid covers [-extent, extent] per axis
  double sigma = 1.0;              // Gaussian density width
  double p0 = 0.4;                 // S = p0 x + alpha (x^2 - y^2) / 2
  double alpha = 0.3;
  std::array<double, 3> spin_u{1.0, 0.0, 0.0};
  std::array<double, 3> spin_v{0.0, 0.0, 1.0};
  int spin_sign = 1;

  bool operator==(const NumericsConfig&) const = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Bouncer;
  OscillatorParams oscillator;
  BathParams bath;
  NumericsConfig numerics;
  std::uint64_t root_seed = 0;
  std::string output_dir = "out";
  unsigned threads = 0;  // 0 = auto

  bool operator==(const ExperimentConfig&) const = default;
};

/// Thrown by parse_config with every problem found, one per entry.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : Error(ErrorKind::Config, join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = std::to_string(v.size()) + " problem(s)";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> issues_;
};

namespace detail {

inline std::string normalize_key(std::string_view key) {
  std::string s;
  for (char c : key) {
    if (c == '_' || c == '-') continue;
    s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (std::size_t pos; (pos = s.find("zero")) != std::string::npos;) s.replace(pos, 4, "0");
  return s;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace detail

/// Closest known key to `key`, or "" when nothing is close.
inline std::string suggest_key(std::string_view key, const std::vector<std::string>& known) {
  const std::string nk = detail::normalize_key(key);
  std::string best;
  std::size_t best_d = 3;
  for (const auto& k : known) {
    const std::size_t d = detail::edit_distance(nk, detail::normalize_key(k));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

namespace detail {

using nlohmann::json;

// Collects schema violations as "path: message" while reading fields.
class Reader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back(path + ": " + msg); }

  // Rejects keys of `obj` not in `known`.
  void check_keys(const json& obj, const std::string& path, const std::vector<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) != known.end()) continue;
      const std::string hint = suggest_key(key, known);
      fail(join(path, key), "unknown key" + (hint.empty() ? std::string() : "; did you mean '" + hint + "'?"));
    }
  }

  // Object-valued section; absent sections read as empty.
  const json* section(const json& obj, const std::string& key, const std::string& path) {
    static const json empty = json::object();
    if (!obj.contains(key)) return &empty;
    const json& s = obj.at(key);
    if (!s.is_object()) {
      fail(join(path, key), "must be an object");
      return &empty;
    }
    return &s;
  }

  template <typename Pred>
  void number(const json& obj, const std::string& path, const char* key, double& out, Pred ok,
              const char* rule) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) return fail(join(path, key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d) || !ok(d)) return fail(join(path, key), std::string("must be ") + rule);
    out = d;
  }

  template <typename Int, typename Pred>
  void integer(const json& obj, const std::string& path, const char* key, Int& out, Pred ok,
               const char* rule) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) return fail(join(path, key), "must be an integer");
    if (v.is_number_unsigned()) {
      const auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()) ||
          !ok(static_cast<long double>(u))) {
        return fail(join(path, key), std::string("must be ") + rule);
      }
      out = static_cast<Int>(u);
      return;
    }
    const auto s = v.get<std::int64_t>();
    if (s < static_cast<std::int64_t>(std::numeric_limits<Int>::min()) ||
        !ok(static_cast<long double>(s))) {
      return fail(join(path, key), std::string("must be ") + rule);
    }
    out = static_cast<Int>(s);
  }

  template <typename Enum, std::size_t N>
  void choice(const json& obj, const std::string& path, const char* key, Enum& out,
              const std::array<Enum, N>& options) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    std::string allowed;
    for (Enum e : options) allowed += std::string(allowed.empty() ? "" : ", ") + to_string(e);
    if (v.is_string()) {
      for (Enum e : options) {
        if (v.get<std::string>() == to_string(e)) {
          out = e;
          return;
        }
      }
    }
    fail(join(path, key), "must be one of: " + allowed);
  }

  void unit_vector(const json& obj, const std::string& path, const char* key,
                   std::array<double, 3>& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 ||
        !std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); })) {
      return fail(join(path, key), "must be an array of three numbers");
    }
    std::array<double, 3> a{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    const double n = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    if (!(std::abs(n - 1.0) < 1e-10)) return fail(join(path, key), "must have unit length");
    out = a;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

inline const std::vector<std::string>& top_keys() {
  static const std::vector<std::string> k{"experiment", "oscillator", "bath", "numerics",
                                          "root_seed",  "output_dir", "threads"};
  return k;
}

inline const std::vector<std::string>& numerics_keys() {
  static const std::vector<std::string> k{
      "omega_ratio", "drive",     "samples_per_period", "periods",   "settle_time",
      "paths",       "dt",        "steps",              "record_stride", "scheme",
      "u0_policy",   "u0",        "n_periods",          "n_max",     "scan_min",
      "scan_max",    "scan_step", "intervals",          "grid_dims", "grid_points",
      "grid_extent", "sigma",     "p0",                 "alpha",     "spin_u",
      "spin_v",      "spin_sign"};
  return k;
}

}  // namespace detail

/// Parses and validates a configuration document. Throws ConfigError listing
/// every violation; JSON syntax errors carry line and column.
inline ExperimentConfig parse_config(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError({"line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                       what});
  }

  detail::Reader rd;
  ExperimentConfig c;
  if (!doc.is_object()) throw ConfigError({"(root): config must be a JSON object"});
  rd.check_keys(doc, "", detail::top_keys());

  if (!doc.contains("experiment")) {
    rd.fail("experiment", "is required");
  } else {
    rd.choice(doc, "", "experiment", c.experiment,
              std::array{ExperimentKind::Bouncer, ExperimentKind::Walker, ExperimentKind::Balance,
                         ExperimentKind::Spectrum, ExperimentKind::Spinfield});
  }

  const auto pos = [](double x) { return x > 0; };
  const auto nonneg = [](double x) { return x >= 0; };
  const auto pos_i = [](long double x) { return x >= 1; };
  const auto nonneg_i = [](long double x) { return x >= 0; };
  const auto any_i = [](long double) { return true; };

  const json& o = *rd.section(doc, "oscillator", "");
  rd.check_keys(o, "oscillator", {"m", "omega0", "gamma", "F0", "dims"});
  rd.number(o, "oscillator", "m", c.oscillator.m, pos, "> 0");
  rd.number(o, "oscillator", "omega0", c.oscillator.omega0, pos, "> 0");
  rd.number(o, "oscillator", "gamma", c.oscillator.gamma, nonneg, ">= 0");
  rd.number(o, "oscillator", "F0", c.oscillator.F0, nonneg, ">= 0");
  rd.integer(o, "oscillator", "dims", c.oscillator.dims, pos_i, ">= 1");

  const json& b = *rd.section(doc, "bath", "");
  rd.check_keys(b, "bath", {"kT0", "zeta"});
  rd.number(b, "bath", "kT0", c.bath.kT0, pos, "> 0");
  rd.number(b, "bath", "zeta", c.bath.zeta, pos, "> 0");

  NumericsConfig& n = c.numerics;
  const json& nm = *rd.section(doc, "numerics", "");
  const std::string np = "numerics";
  rd.check_keys(nm, np, detail::numerics_keys());
  rd.number(nm, np, "omega_ratio", n.omega_ratio, nonneg, ">= 0");
  rd.choice(nm, np, "drive", n.drive,
            std::array{DriveShape::Uniform, DriveShape::Linear, DriveShape::Circular});
  rd.integer(nm, np, "samples_per_period", n.samples_per_period,
             [](long double x) { return x >= 16; }, ">= 16");
  rd.integer(nm, np, "periods", n.periods, pos_i, ">= 1");
  rd.number(nm, np, "settle_time", n.settle_time, nonneg, ">= 0");
  rd.integer(nm, np, "paths", n.paths, pos_i, ">= 1");
  rd.number(nm, np, "dt", n.dt, pos, "> 0");
  rd.integer(nm, np, "steps", n.steps, nonneg_i, ">= 0");
  rd.integer(nm, np, "record_stride", n.record_stride, pos_i, ">= 1");
  rd.choice(nm, np, "scheme", n.scheme,
            std::array{NoiseScheme::ExactOU, NoiseScheme::EulerMaruyama});
  rd.choice(nm, np, "u0_policy", n.u0_policy,
            std::array{InitialVelocity::Fixed, InitialVelocity::Stationary});
  rd.number(nm, np, "u0", n.u0, [](double) { return true; }, "finite");
  rd.integer(nm, np, "n_periods", n.n_periods, pos_i, ">= 1");
  rd.integer(nm, np, "n_max", n.n_max, nonneg_i, ">= 0");
  rd.number(nm, np, "scan_min", n.scan_min, nonneg, ">= 0");
  rd.number(nm, np, "scan_max", n.scan_max, nonneg, ">= 0");
  rd.number(nm, np, "scan_step", n.scan_step, pos, "> 0");
  rd.integer(nm, np, "intervals", n.intervals, pos_i, ">= 1");
  rd.integer(nm, np, "grid_dims", n.grid_dims, [](long double x) { return x == 2 || x == 3; },
             "2 or 3");
  rd.integer(nm, np, "grid_points", n.grid_points, [](long double x) { return x >= 5; }, ">= 5");
  rd.number(nm, np, "grid_extent", n.grid_extent, pos, "> 0");
  rd.number(nm, np, "sigma", n.sigma, pos, "> 0");
  rd.number(nm, np, "p0", n.p0, [](double) { return true; }, "finite");
  rd.number(nm, np, "alpha", n.alpha, [](double) { return true; }, "finite");
  rd.unit_vector(nm, np, "spin_u", n.spin_u);
  rd.unit_vector(nm, np, "spin_v", n.spin_v);
  rd.integer(nm, np, "spin_sign", n.spin_sign, [](long double x) { return x == 1 || x == -1; },
             "+1 or -1");

  rd.integer(doc, "", "root_seed", c.root_seed, any_i, "a 64-bit unsigned integer");
  if (doc.contains("output_dir")) {
    const json& v = doc.at("output_dir");
    if (!v.is_string() || v.get<std::string>().empty()) {
      rd.fail("output_dir", "must be a non-empty string");
    } else {
      c.output_dir = v.get<std::string>();
    }
  }
  if (doc.contains("threads")) {
    const json& v = doc.at("threads");
    if (v.is_string() && v.get<std::string>() == "auto") {
      c.threads = 0;
    } else {
      rd.integer(doc, "", "threads", c.threads, [](long double x) { return x >= 1 && x <= 4096; },
                 "\"auto\" or an integer in [1, 4096]");
    }
  }

  // Cross-field rules.
  if (n.scan_max < n.scan_min) rd.fail("numerics.scan_max", "must be >= numerics.scan_min");
  if (n.steps % n.record_stride != 0) {
    rd.fail("numerics.record_stride", "must divide numerics.steps");
  }
  if (n.drive == DriveShape::Circular && c.oscillator.dims < 2) {
    rd.fail("numerics.drive", "circular drive needs oscillator.dims >= 2");
  }
  if (c.experiment == ExperimentKind::Balance || c.experiment == ExperimentKind::Spectrum ||
      c.experiment == ExperimentKind::Spinfield) {
    if (c.oscillator.gamma <= 0.0 || c.oscillator.F0 <= 0.0) {
      rd.fail("oscillator.gamma", std::string("the ") + to_string(c.experiment) +
                                      " experiment needs gamma > 0 and F0 > 0 (hbar = m r^2 omega0)");
    }
  }
  if (c.experiment == ExperimentKind::Bouncer && n.omega_ratio == 0.0) {
    rd.fail("numerics.omega_ratio", "must be > 0 for the bouncer experiment");
  }
  if (c.experiment == ExperimentKind::Bouncer && c.oscillator.gamma == 0.0 &&
      n.settle_time == 0.0) {
    rd.fail("numerics.settle_time", "must be given explicitly when gamma = 0");
  }

  if (!rd.issues.empty()) throw ConfigError(std::move(rd.issues));
  return c;
}

/// Every field of the config, defaults included, except the runtime-only
/// `output_dir` and `threads`.
inline nlohmann::json config_echo(const ExperimentConfig& c) {
  using nlohmann::json;
  const NumericsConfig& n = c.numerics;
  json num = {{"omega_ratio", n.omega_ratio},
              {"drive", to_string(n.drive)},
              {"samples_per_period", n.samples_per_period},
              {"periods", n.periods},
              {"settle_time", n.settle_time},
              {"paths", n.paths},
              {"dt", n.dt},
              {"steps", n.steps},
              {"record_stride", n.record_stride},
              {"scheme", to_string(n.scheme)},
              {"u0_policy", to_string(n.u0_policy)},
              {"u0", n.u0},
              {"n_periods", n.n_periods},
              {"n_max", n.n_max},
              {"scan_min", n.scan_min},
              {"scan_max", n.scan_max},
              {"scan_step", n.scan_step},
              {"intervals", n.intervals},
              {"grid_dims", n.grid_dims},
              {"grid_points", n.grid_points},
              {"grid_extent", n.grid_extent},
              {"sigma", n.sigma},
              {"p0", n.p0},
              {"alpha", n.alpha},
              {"spin_u", n.spin_u},
              {"spin_v", n.spin_v},
              {"spin_sign", n.spin_sign}};
  return {{"experiment", to_string(c.experiment)},
          {"oscillator",
           {{"m", c.oscillator.m},
            {"omega0", c.oscillator.omega0},
            {"gamma", c.oscillator.gamma},
            {"F0", c.oscillator.F0},
            {"dims", c.oscillator.dims}}},
          {"bath", {{"kT0", c.bath.kT0}, {"zeta", c.bath.zeta}}},
          {"numerics", num},
          {"root_seed", c.root_seed}};
}

}  // namespace bouncewalk
