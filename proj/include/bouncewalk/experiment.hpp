// Copyright 2026 The bouncewalk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Runs one configured experiment, writes its CSV / field artifacts and a
// summary.json into an output directory.
//
// Artifacts are staged in a sibling directory and moved into place only when
// the run succeeds, so a failed run leaves no partial files behind. Every
// field of summary.json except the "runtime" block is a pure function of the
// config (thread count included).

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <string>
#include <vector>

#include <json.hpp>

#include "bouncewalk/analytic.hpp"
#include "bouncewalk/balance.hpp"
#include "bouncewalk/bouncer.hpp"
#include "bouncewalk/config.hpp"
#include "bouncewalk/errors.hpp"
#include "bouncewalk/field.hpp"
#include "bouncewalk/format.hpp"
#include "bouncewalk/rng.hpp"
#include "bouncewalk/spectrum.hpp"
#include "bouncewalk/spinfield.hpp"
#include "bouncewalk/walker.hpp"

namespace bouncewalk {

inline constexpr int kSummarySchemaVersion = 1;

/// Writes artifact files into a staging directory and publishes them.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path out_dir)
      : out_(std::move(out_dir)), staging_(out_.string() + ".partial") {
    std::error_code ec;
    std::filesystem::remove_all(staging_, ec);
    std::filesystem::create_directories(staging_, ec);
    require(!ec, ErrorKind::Io, "cannot create " + staging_.string() + ": " + ec.message());
  }

  ArtifactWriter(const ArtifactWriter&) = delete;
  ArtifactWriter& operator=(const ArtifactWriter&) = delete;

  ~ArtifactWriter() {
    std::error_code ec;
    std::filesystem::remove_all(staging_, ec);
  }

  std::ofstream open(const std::string& name) {
    std::ofstream os(staging_ / name, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::Io, "cannot write " + (staging_ / name).string());
    os.imbue(std::locale::classic());
    names_.push_back(name);
    return os;
  }

  /// Moves every staged file into the output directory.
  void publish() {
    std::error_code ec;
    std::filesystem::create_directories(out_, ec);
    require(!ec, ErrorKind::Io, "cannot create " + out_.string() + ": " + ec.message());
    for (const auto& n : names_) {
      std::filesystem::rename(staging_ / n, out_ / n, ec);
      require(!ec, ErrorKind::Io, "cannot move " + n + " into " + out_.string());
    }
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path out_;
  std::filesystem::path staging_;
  std::vector<std::string> names_;
};

namespace detail {

using nlohmann::json;

inline void write_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_double(v);
    first = false;
  }
  os << '\n';
}

inline json derived_block(const ExperimentConfig& c) {
  json d = {{"tau", kTwoPi / c.oscillator.omega0},
            {"lambda", 2.0 * c.bath.zeta * c.oscillator.m * c.bath.kT0},
            {"D", c.bath.kT0 / (c.bath.zeta * c.oscillator.m)},
            {"r", nullptr},
            {"hbar", nullptr}};
  if (c.oscillator.gamma > 0.0) {
    const DerivedConstants k = derived_constants(c.oscillator, c.bath);
    d["r"] = k.r;
    d["hbar"] = k.hbar;
  }
  return d;
}

inline Drive make_drive(const OscillatorParams& p, DriveShape shape, double omega) {
  switch (shape) {
    case DriveShape::Linear: return Drive::linear(p, omega);
    case DriveShape::Circular: return Drive::circular(p, omega);
    case DriveShape::Uniform: break;
  }
  return Drive::uniform(p, omega);
}

inline void write_ensemble_stats(ArtifactWriter& w, const WalkerEnsemble& e) {
  auto os = w.open("ensemble_stats.csv");
  os << "t,msd_mean,msd_stderr,vvar_mean,vvar_stderr\n";
  for (std::size_t j = 0; j < e.records(); ++j) {
    write_row(os, {e.times[j], e.msd[j].mean(), e.msd[j].std_error_mean(), e.vvar[j].mean(),
                   e.vvar[j].std_error_mean()});
  }
}

inline json run_bouncer(const ExperimentConfig& c, ArtifactWriter& w) {
  const OscillatorParams& p = c.oscillator;
  const NumericsConfig& n = c.numerics;
  const double omega = n.omega_ratio * p.omega0;
  require(omega > 0.0, ErrorKind::InvalidArgument, "bouncer drive needs omega_ratio > 0");
  const Drive d = make_drive(p, n.drive, omega);
  const double period = kTwoPi / omega;
  const double dt = period / n.samples_per_period;
  const double settle = n.settle_time > 0.0 ? n.settle_time : 2.0 * steady_state_start(p);
  const auto settle_steps = static_cast<long long>(std::ceil(settle / period)) * n.samples_per_period;
  const BouncerState start = advance_bouncer(p, d, BouncerState::at_rest(p.dims), dt, settle_steps);
  const Trajectory traj =
      integrate_bouncer(p, d, start, dt, static_cast<long long>(n.periods) * n.samples_per_period);

  {
    auto os = w.open("trajectory.csv");
    os << 't';
    for (int i = 1; i <= p.dims; ++i) os << ",x" << i;
    for (int i = 1; i <= p.dims; ++i) os << ",v" << i;
    os << '\n';
    for (const auto& s : traj.samples) {
      os << format_double(s.t);
      for (double x : s.x) os << ',' << format_double(x);
      for (double v : s.v) os << ',' << format_double(v);
      os << '\n';
    }
  }

  const SteadyStateFit fit = fit_steady_state(traj, omega, n.periods);
  const WorkMeasurement work = measure_work_per_period(traj, p, d, n.periods);
  json axes = json::array();
  double w_theory = 0.0;
  for (int i = 0; i < p.dims; ++i) {
    const double scale = p.F0 > 0.0 ? d.F0[i] / p.F0 : 0.0;
    json a = {{"A_fit", fit.A[i]},
              {"phi_fit", fit.phase_defined[i] ? json(fit.phi[i]) : json(nullptr)},
              {"drive_amplitude", d.F0[i]},
              {"A_theory", nullptr},
              {"phi_theory", nullptr}};
    if (p.gamma > 0.0 || omega != p.omega0) {
      const double A = scale * amplitude_response(p, omega);
      a["A_theory"] = A;
      if (d.F0[i] > 0.0) {
        double phi = phase_response(p, omega) + d.phase[i];
        if (phi <= -kTwoPi / 2) phi += kTwoPi;
        a["phi_theory"] = phi;
      }
      w_theory += kTwoPi * p.gamma * p.m * omega * A * A;
    }
    axes.push_back(a);
  }
  json r = {{"drive", to_string(n.drive)},
            {"omega", omega},
            {"settle_time", settle_steps * dt},
            {"axes", axes},
            {"fit_residual", fit.residual},
            {"transient_warning", fit.transient_warning},
            {"W_drive_per_period", work.W_drive},
            {"W_friction_per_period", work.W_friction},
            {"W_theory_per_period", w_theory},
            {"work_periods", work.periods}};
  if (d.F0[0] > 0.0) r["response_frequency"] = response_frequency(traj, 0);
  if (p.dims >= 2) {
    const auto L = angular_momentum_series(traj, p.m);
    double lo = L.front(), hi = L.front(), mean = 0.0;
    for (double l : L) {
      lo = std::min(lo, l);
      hi = std::max(hi, l);
      mean += l / static_cast<double>(L.size());
    }
    r["angular_momentum"] = {{"mean", mean}, {"min", lo}, {"max", hi}};
  }
  return r;
}

inline WalkerConfig walker_config(const ExperimentConfig& c) {
  WalkerConfig wc;
  wc.bath = c.bath;
  wc.m = c.oscillator.m;
  wc.dims = c.oscillator.dims;
  wc.scheme = c.numerics.scheme;
  wc.u0_policy = c.numerics.u0_policy;
  wc.u0 = c.numerics.u0;
  wc.paths = c.numerics.paths;
  wc.dt = c.numerics.dt;
  wc.steps = c.numerics.steps;
  wc.record_stride = c.numerics.record_stride;
  wc.root_seed = c.root_seed;
  wc.threads = c.threads;
  return wc;
}

inline json run_walker(const ExperimentConfig& c, ArtifactWriter& w) {
  const WalkerConfig wc = walker_config(c);
  const WalkerEnsemble e = run_ensemble(wc);
  write_ensemble_stats(w, e);
  const std::size_t last = e.records() - 1;
  const double t = e.times[last];
  const double u0_sq = wc.u0_policy == InitialVelocity::Fixed ? wc.u0 * wc.u0 : c.bath.kT0 / wc.m;
  const double vvar_theory =
      wc.dims * (wc.u0_policy == InitialVelocity::Fixed
                     ? ou_velocity_variance(c.bath, wc.m, wc.u0, t)
                     : u0_sq);
  json r = {{"scheme", to_string(wc.scheme)},
            {"paths", wc.paths},
            {"t_end", t},
            {"msd_mean", e.msd[last].mean()},
            {"msd_stderr", e.msd[last].std_error_mean()},
            {"vvar_mean", e.vvar[last].mean()},
            {"vvar_stderr", e.vvar[last].std_error_mean()},
            {"vvar_theory", vvar_theory},
            {"msd_theory", nullptr},
            {"D_fit", nullptr},
            {"D_theory", c.bath.kT0 / (c.bath.zeta * wc.m)}};
  if (wc.u0_policy == InitialVelocity::Stationary) r["msd_theory"] = wc.dims * ou_msd(c.bath, wc.m, t);
  const double t_min = std::max(10.0 / c.bath.zeta, 0.5 * t);
  std::size_t usable = 0;
  for (double tj : e.times) usable += tj >= t_min ? 1 : 0;
  if (usable >= 2) r["D_fit"] = fitted_diffusion_constant(e, t_min);
  const EquipartitionReport eq = equipartition_check(e);
  json axes = json::array();
  for (const auto& a : eq.axes) {
    axes.push_back({{"energy", a.energy}, {"stderr", a.std_error}, {"deviates", a.deviates}});
  }
  r["equipartition"] = {{"expected", eq.expected}, {"axes", axes}, {"anisotropic", eq.anisotropic}};
  return r;
}

inline json balance_json(const BalanceReport& b) {
  return {{"n", b.n},
          {"W_bouncer", b.W_bouncer_measured},
          {"W_walker", b.W_walker_measured},
          {"W_walker_stderr", b.W_walker_std_error},
          {"ratio", b.ratio},
          {"implied_kT0", b.implied_kT0},
          {"implied_E_tot", b.implied_E_tot},
          {"expected_E_tot", b.expected_E_tot},
          {"hbar_omega0", b.hbar_omega0},
          {"gamma_over_zeta", b.gamma_over_zeta},
          {"low_n_warning", b.low_n_warning}};
}

inline json run_balance(const ExperimentConfig& c, ArtifactWriter& w) {
  const OscillatorParams& p = c.oscillator;
  const NumericsConfig& n = c.numerics;
  const double tau = kTwoPi / p.omega0;
  const int spp = n.samples_per_period;

  // One bouncer, driven along axis 0 at resonance.
  const Drive d = Drive::linear(p, p.omega0);
  const double dt_b = tau / spp;
  const double settle = n.settle_time > 0.0 ? n.settle_time : 2.0 * steady_state_start(p);
  const auto settle_steps = static_cast<long long>(std::ceil(settle / tau)) * spp;
  const BouncerState start = advance_bouncer(p, d, BouncerState::at_rest(p.dims), dt_b, settle_steps);
  const WorkMeasurement wb = measure_work_per_period(integrate_bouncer(p, d, start, dt_b, spp), p, d);

  WalkerConfig wc = walker_config(c);
  wc.dt = tau / spp;
  wc.steps = static_cast<long long>(n.n_periods) * spp;
  wc.record_stride = spp;
  const WalkerEnsemble e = run_ensemble(wc);
  write_ensemble_stats(w, e);
  const WalkerWork ww = measure_walker_work(e, n.n_periods, tau);

  const BalanceReport rep = balance_report(wb, p.omega0, ww, n.n_periods, p, c.bath);
  const EntropicCycleReport cyc = entropic_cycle(p, c.bath.kT0);
  json r = balance_json(rep);
  r["analytic"] = balance_json(analytic_balance_report(n.n_periods, p, c.bath));
  r["entropic_cycle"] = {{"E_kin_min", cyc.E_kin_min},
                         {"E_kin_max", cyc.E_kin_max},
                         {"E_kin_mean", cyc.E_kin_mean},
                         {"quantum", cyc.quantum},
                         {"absorb_events", cyc.absorb_events},
                         {"emit_events", cyc.emit_events},
                         {"Q_absorbed", cyc.Q_absorbed},
                         {"Q_emitted", cyc.Q_emitted},
                         {"E_throughput", cyc.E_throughput},
                         {"entropy_change", cyc.entropy_change}};
  r["spin_throughput"] = spin_throughput(0.5 * hbar_invariant(p), p.omega0);
  return r;
}

inline json run_spectrum(const ExperimentConfig& c, ArtifactWriter& w) {
  const OscillatorParams& p = c.oscillator;
  const NumericsConfig& n = c.numerics;
  const double hbar = hbar_invariant(p);
  const SpectrumTable table = energy_spectrum(n.n_max, hbar, p.omega0);
  json rows = json::array();
  {
    auto os = w.open("spectrum.csv");
    os << "n,E,S_loop\n";
    for (const auto& row : table) {
      os << row.n << ',' << format_double(row.E) << ',' << format_double(row.S_loop) << '\n';
      rows.push_back({{"n", row.n}, {"E", row.E}, {"S_loop", row.S_loop}});
    }
  }

  std::vector<double> ratios;
  const double span = (n.scan_max - n.scan_min) / n.scan_step;
  const auto count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
  for (long long k = 0; k < count; ++k) {
    double r = n.scan_min + static_cast<double>(k) * n.scan_step;
    if (std::abs(r - std::round(r)) < 1e-9) r = std::round(r);
    ratios.push_back(r);
  }
  const auto scan = admissibility_scan(ratios, p.omega0, p.F0, c.bath.kT0, n.intervals);
  double worst_integer = 0.0;
  double best_off = std::numeric_limits<double>::infinity();
  {
    auto os = w.open("scan.csv");
    os << "omega_ratio,dissipation_value\n";
    for (const auto& pt : scan) {
      write_row(os, {pt.omega_ratio, pt.value});
      if (pt.omega_ratio == std::round(pt.omega_ratio)) {
        worst_integer = std::max(worst_integer, std::abs(pt.value));
      } else {
        best_off = std::min(best_off, std::abs(pt.value));
      }
    }
  }
  return {{"hbar", hbar},
          {"rows", rows},
          {"admissible_frequencies", admissible_frequencies(p.omega0, std::max(n.n_max, 1))},
          {"scan_points", scan.size()},
          {"max_abs_at_integer_ratio", worst_integer},
          {"min_abs_off_integer_ratio", std::isfinite(best_off) ? json(best_off) : json(nullptr)}};
}

inline void write_scalar(ArtifactWriter& w, const std::string& name, const ScalarField& f) {
  auto os = w.open(name);
  write_field(os, f);
}

inline void write_vector(ArtifactWriter& w, const std::string& name, const VectorField& f) {
  auto os = w.open(name);
  write_field(os, f);
}

inline json friction_json(const FrictionReport& f) {
  return {{"fitted_zeta", f.fitted_zeta ? json(*f.fitted_zeta) : json(nullptr)},
          {"expected_zeta", f.expected_zeta},
          {"inconsistency", f.inconsistency},
          {"momentum_residual", f.momentum_residual}};
}

inline json run_spinfield(const ExperimentConfig& c, ArtifactWriter& w) {
  const OscillatorParams& p = c.oscillator;
  const NumericsConfig& n = c.numerics;
  const double hbar = hbar_invariant(p);
  const double h = 2.0 * n.grid_extent / (n.grid_points - 1);
  const Grid g = Grid::centered(n.grid_dims, n.grid_points, h);

  const ScalarField P = gaussian_density(g, n.sigma);
  const ScalarField S = sample_scalar(g, [&](const Vec3& x) {
    return n.p0 * x[0] + 0.5 * n.alpha * (x[0] * x[0] - x[1] * x[1]);
  });
  write_scalar(w, "P.txt", P);
  write_scalar(w, "S.txt", S);
  const VectorField v = convective_velocity(S, p.m);
  const VectorField log_grad = gaussian_log_gradient(g, n.sigma);
  const OsmoticVelocity exact = osmotic_from_log_gradient(log_grad, p.m, hbar);
  const OsmoticVelocity fd = osmotic_velocity(P, p.m, hbar);
  const SpinVector s = spin_vector({n.spin_u}, {n.spin_v}, hbar, n.spin_sign);

  const VectorField J = pauli_current(P, v, exact.u_tilde, s);
  VectorField Pv(g);
  for (std::size_t i = 0; i < g.size(); ++i) Pv[i] = P[i] * v[i];
  const ScalarField divJ = divergence(J);
  const ScalarField divPv = divergence(Pv);
  ScalarField gap(g);
  for (std::size_t i = 0; i < g.size(); ++i) gap[i] = divJ[i] - divPv[i];

  const ScalarField divJ_fd = divergence(pauli_current(P, v, fd.u_tilde, s));
  ScalarField gap_fd(g);
  for (std::size_t i = 0; i < g.size(); ++i) gap_fd[i] = divJ_fd[i] - divPv[i];

  // Local spin from the directions of u and v at every interior point.
  double ham_worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double nu = norm(exact.u[i]), nv = norm(v[i]);
    if (!g.interior(i, 1) || nu == 0.0 || nv == 0.0) continue;
    const Vec3 eu = (1.0 / nu) * exact.u[i];
    const Vec3 ev = (1.0 / nv) * v[i];
    if (norm(cross(eu, ev)) <= std::sin(1e-8)) continue;
    const SpinVector local = spin_vector(eu, ev, hbar);
    const auto [a, b] = hamiltonian_pointwise(v[i], exact.u_tilde[i], local.s, p.m);
    if (b > 0.0) ham_worst = std::max(ham_worst, std::abs(a - b) / b);
  }

  ScalarField Pn = P;
  const double mass = integrate(P);
  for (auto& x : Pn.values) x /= mass;

  write_vector(w, "v.txt", v);
  write_vector(w, "u.txt", exact.u);
  write_vector(w, "J.txt", J);
  if (g.dims == 2) {
    auto os = w.open("J_slice.csv");
    write_slice_csv(os, J);
  }

  return {{"grid", {{"dims", g.dims}, {"points", n.grid_points}, {"spacing", h}}},
          {"hbar", hbar},
          {"spin", {{"s", s.s.c}, {"sign", s.sign}, {"length", norm(s.s)}}},
          {"div_J_minus_div_Pv", max_abs_interior(gap, 1)},
          {"div_J_minus_div_Pv_discrete_u", max_abs_interior(gap_fd, 1)},
          {"max_curl_v", max_norm_interior(curl(v), 1)},
          {"max_curl_u", max_norm_interior(curl(fd.u), 1)},
          {"hamiltonian_identity_max_rel", ham_worst},
          {"friction_analytic",
           friction_json(verify_friction_relation(log_grad, p.m, hbar, p.omega0, c.bath.kT0))},
          {"friction_finite_difference",
           friction_json(verify_friction_relation(P, p.m, hbar, p.omega0, c.bath.kT0))},
          {"grid_mass", mass},
          {"quantum_potential_average", quantum_potential_average(exact.u, Pn, p.m)}};
}

}  // namespace detail

struct RunResult {
  nlohmann::json summary;
  std::vector<std::string> artifacts;  // file names inside the output directory
};

/// Runs the experiment and publishes its artifacts to `out_dir`. On any
/// error nothing is written to `out_dir` and the exception propagates.
inline RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  ArtifactWriter w(out_dir);
  nlohmann::json results;
  switch (cfg.experiment) {
    case ExperimentKind::Bouncer: results = detail::run_bouncer(cfg, w); break;
    case ExperimentKind::Walker: results = detail::run_walker(cfg, w); break;
    case ExperimentKind::Balance: results = detail::run_balance(cfg, w); break;
    case ExperimentKind::Spectrum: results = detail::run_spectrum(cfg, w); break;
    case ExperimentKind::Spinfield: results = detail::run_spinfield(cfg, w); break;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  RunResult out;
  out.summary = {{"schema_version", kSummarySchemaVersion},
                 {"rng_family", kRngFamily},
                 {"experiment", to_string(cfg.experiment)},
                 {"config", config_echo(cfg)},
                 {"derived", detail::derived_block(cfg)},
                 {"results", results},
                 {"runtime",
                  {{"wall_clock_seconds", seconds},
                   {"threads", cfg.threads == 0 ? nlohmann::json("auto") : nlohmann::json(cfg.threads)},
                   {"output_dir", out_dir.string()}}}};
  {
    auto os = w.open("summary.json");
    os << out.summary.dump(2) << '\n';
  }
  w.publish();
  out.artifacts = w.names();
  return out;
}

}  // namespace bouncewalk
