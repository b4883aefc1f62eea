#include "dce/pipeline.hpp"

#include <Eigen/Dense>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dce/errors.hpp"
#include "dce/parallel.hpp"

namespace dce {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> uniform(double a, double b, std::size_t intervals) {
  std::vector<double> out(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    out[i] = i == intervals ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_number(v[i]);
  return s;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, const std::vector<std::string>& header)
      : out_(file) {
    if (!out_) throw Error("cannot write " + file.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string temperature_tag(double T) { return "T" + format_number(T); }

double sup_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::pair<double, double> run_window(const RunConfig& config, const TrajectoryPair& ref) {
  const double start = ref.motion_start();
  const double end = std::max(ref.motion_end(), start + ref.tau);
  const double t0 = config.numerics.t_start.value_or(start - (ref.R0 + ref.tau));
  const double t1 = config.numerics.t_end.value_or(end + 3.0 * ref.df());
  return {t0, t1};
}

ScenarioResult simulate(const RunConfig& config, const RunOptions& opt) {
  ScenarioResult r;
  r.config = config;
  r.reference = config.reference();
  const TrajectoryPair& ref = r.reference;
  const Numerics& num = config.numerics;

  try {
    r.exact = std::make_shared<ExactMoore>(ref, ExactOptions{num.moore_tol});
  } catch (const SuperluminalError& e) {
    r.reference_superluminal = true;
    r.notes.push_back(std::string("reference run skipped: ") + e.what());
  }
  r.adiabatic = std::make_shared<AdiabaticMoore>(AdiabaticMoore::build(ref));
  const AdiabaticMoore& am = *r.adiabatic;

  const EffectiveOptions eopt{0.0, num.effective_tol};
  r.eff_left = build_effective(am, Mirror::left, eopt);
  r.eff_right = build_effective(am, Mirror::right, eopt);
  r.max_speed_left = r.eff_left.max_speed();
  r.max_speed_right = r.eff_right.max_speed();
  r.superluminal = !(r.max_speed_left < 1.0 && r.max_speed_right < 1.0);
  if (r.eff_left.failures + r.eff_right.failures == 0) {
    r.effective = effective_pair(r.eff_left, r.eff_right);
  } else {
    r.notes.push_back("effective trajectory undefined: " +
                      (r.eff_left.failures ? r.eff_left.first_failure : r.eff_right.first_failure));
  }
  if (!r.eff_left.converged || !r.eff_right.converged) {
    r.notes.push_back("effective trajectory sampling did not meet its refinement tolerance");
  }
  r.effective_residual =
      std::max(effective_residual(am, r.eff_left), effective_residual(am, r.eff_right));

  std::tie(r.lim_left, r.lim_right) = limit_trajectory(ref.L0, ref.Lf, ref.R0, ref.Rf);
  r.v_lim = r.lim_right.velocity;
  r.R_c = r.lim_right.intercept;
  r.continuity = continuity_check(ref.L0, ref.Lf, ref.R0, ref.Rf);

  const auto [t0, t1] = run_window(config, ref);
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::round((t1 - t0) / num.time_step)));
  r.times = uniform(t0, t1, steps);

  // Residual samples: the output grid plus a dense grid over the motion.
  std::vector<double> probe = r.times;
  if (ref.tau > 0.0) {
    const auto dense = uniform(ref.motion_start(), ref.motion_start() + ref.tau, 4000);
    probe.insert(probe.end(), dense.begin(), dense.end());
  }
  if (r.exact) r.exact_residual = residuals(*r.exact, probe);
  r.adiabatic_residual = adiabatic_residual(am, ref, probe);

  if (num.cross_check && r.effective) {
    const ExactMoore on_eff(*r.effective, ExactOptions{num.moore_tol});
    const auto [z0, z1] = std::pair{t0 + ref.left.min_position(), t1 + ref.right.max_position()};
    const auto zs = uniform(z0, z1, static_cast<std::size_t>(num.moore_samples - 1));
    std::vector<double> dev(zs.size());
    parallel_for(zs.size(), opt.threads, [&](std::size_t i) {
      dev[i] = std::max(std::abs(on_eff.F(zs[i]).v - am.F(zs[i]).v),
                        std::abs(on_eff.G(zs[i]).v - am.G(zs[i]).v));
    });
    r.cross_residual = sup_abs(dev);
  }

  // Energy: one quadrature per time and solver, shared by all temperatures.
  const QuadratureOptions qopt{num.spatial_points, num.energy_tol};
  const std::size_t nt = r.times.size();
  std::vector<EnergyParts> ref_parts(nt), eff_parts(nt);
  std::vector<char> eff_ok(nt, 0);
  parallel_for(nt, opt.threads, [&](std::size_t i) {
    const double t = r.times[i];
    if (r.exact) ref_parts[i] = total_energy_parts(*r.exact, ref, t, qopt);
    if (r.effective) {
      try {
        eff_parts[i] = total_energy_parts(am, *r.effective, t, qopt);
        eff_ok[i] = 1;
      } catch (const DomainError&) {
      }
    }
  });

  EnergyRecord& rec = r.energy;
  rec.times = r.times;
  bool eff_converged = true;
  for (std::size_t i = 0; i < nt; ++i) {
    rec.converged = rec.converged && ref_parts[i].converged;
    eff_converged = eff_converged && (!eff_ok[i] || eff_parts[i].converged);
  }
  // Superluminal effective mirrors give near-singular densities; report, do not fail.
  if (!eff_converged) {
    if (r.superluminal) {
      r.notes.push_back("effective energy quadrature did not converge (superluminal effective mirrors)");
    } else {
      rec.converged = false;
    }
  }
  if (r.effective && std::count(eff_ok.begin(), eff_ok.end(), 0) > 0) {
    r.notes.push_back("effective energy undefined at some times (vanishing Moore slope)");
  }
  for (double TR0 : config.temperatures) {
    const ThermalState state = ThermalState::make(TR0 / ref.R0, ref.d0());
    rec.temperatures.push_back(TR0);
    std::vector<double> Er(nt), Ee(nt), Ea(nt), Qr(nt), Qe(nt);
    bool reported = false;
    for (std::size_t i = 0; i < nt; ++i) {
      Er[i] = r.exact ? ref_parts[i].combine(state) : kNaN;
      Ee[i] = eff_ok[i] ? eff_parts[i].combine(state) : kNaN;
      Ea[i] = adiabatic_energy(ref.length(r.times[i]), state);
      try {
        Qr[i] = adiabaticity(Er[i], Ea[i]);
        Qe[i] = adiabaticity(Ee[i], Ea[i]);
      } catch (const DomainError& e) {
        Qr[i] = Qe[i] = kNaN;
        if (!reported) r.notes.push_back("T R0 = " + format_number(TR0) + ": " + e.what());
        reported = true;
      }
    }
    rec.E_ref.push_back(std::move(Er));
    rec.E_eff.push_back(std::move(Ee));
    rec.E_ad.push_back(std::move(Ea));
    rec.Q_ref.push_back(std::move(Qr));
    rec.Q_eff.push_back(std::move(Qe));
  }

  if (num.critical_tau) {
    r.tau_c = critical_tau(config.geometry, num.critical_tau_lo, num.critical_tau_hi,
                           num.critical_tau_tol, eopt);
  }

  // Hard checks.
  if (!(r.exact_residual.max() < 1e-6)) r.failed_checks.push_back("exact_residual");
  if (!(r.effective_residual < 1e-9)) r.failed_checks.push_back("effective_residual");
  if (!rec.converged) r.failed_checks.push_back("energy_quadrature");
  if (r.cross_residual && !(*r.cross_residual < 1e-6)) r.failed_checks.push_back("cross_check");
  if (r.effective && !r.superluminal) {
    for (std::size_t k = 0; k < rec.temperatures.size(); ++k) {
      const double q = rec.Q_eff[k].back();
      if (!std::isnan(q) && !(std::abs(q - 1.0) < 1e-3)) {
        r.failed_checks.push_back("sta_endpoint");
        break;
      }
    }
  }
  if (r.superluminal && opt.strict) r.failed_checks.push_back("superluminal");
  if (r.reference_superluminal && opt.strict) r.failed_checks.push_back("reference_superluminal");
  return r;
}

void write_outputs(const ScenarioResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const RunConfig& c = r.config;
  const TrajectoryPair& ref = r.reference;

  if (c.outputs.trajectories) {
    CsvWriter csv(dir / "trajectories.csv", {"t", "L_ref", "R_ref", "L_eff", "R_eff", "L_lim", "R_lim"});
    for (double t : r.times) {
      csv.row({t, ref.left.eval(t), ref.right.eval(t), r.eff_left.eval(t), r.eff_right.eval(t),
               r.lim_left.eval(t), r.lim_right.eval(t)});
    }
  }
  if (c.outputs.moore) {
    const double z0 = r.times.front() + ref.left.min_position();
    const double z1 = r.times.back() + ref.right.max_position();
    CsvWriter csv(dir / "moore.csv", {"z", "F_ad", "G_ad", "F_exact", "G_exact"});
    for (double z : uniform(z0, z1, static_cast<std::size_t>(c.numerics.moore_samples - 1))) {
      const double F = r.exact ? r.exact->F(z).v : kNaN;
      const double G = r.exact ? r.exact->G(z).v : kNaN;
      csv.row({z, r.adiabatic->F(z).v, r.adiabatic->G(z).v, F, G});
    }
  }
  if (c.outputs.energy) {
    std::vector<std::string> header{"t"};
    for (double T : r.energy.temperatures) {
      for (const char* name : {"E_ref", "E_eff", "E_ad", "Q_ref", "Q_eff"}) {
        header.push_back(std::string(name) + "_" + temperature_tag(T));
      }
    }
    CsvWriter csv(dir / "energy.csv", header);
    const EnergyRecord& e = r.energy;
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      std::vector<double> row{e.times[i]};
      for (std::size_t k = 0; k < e.temperatures.size(); ++k) {
        for (const auto* col : {&e.E_ref, &e.E_eff, &e.E_ad, &e.Q_ref, &e.Q_eff}) {
          row.push_back((*col)[k][i]);
        }
      }
      csv.row(row);
    }
  }

  namespace pt = boost::property_tree;
  pt::ptree s;
  s.put("scenario.family", std::string(to_string(c.geometry.family)));
  s.put("scenario.tau", format_number(ref.tau));
  s.put("scenario.temperatures", join(c.temperatures));
  s.put("geometry.L0", format_number(ref.L0));
  s.put("geometry.Lf", format_number(ref.Lf));
  s.put("geometry.R0", format_number(ref.R0));
  s.put("geometry.Rf", format_number(ref.Rf));
  s.put("geometry.eps", format_number(c.geometry.eps));
  const Numerics& n = c.numerics;
  s.put("numerics.time_step", format_number(n.time_step));
  s.put("numerics.t_start", format_number(r.times.front()));
  s.put("numerics.t_end", format_number(r.times.back()));
  s.put("numerics.spatial_points", n.spatial_points);
  s.put("numerics.energy_tol", format_number(n.energy_tol));
  s.put("numerics.moore_tol", format_number(n.moore_tol));
  s.put("numerics.effective_tol", format_number(n.effective_tol));

  std::vector<double> q_ref, q_eff, e_eff, e_ad;
  for (std::size_t k = 0; k < r.energy.temperatures.size(); ++k) {
    q_ref.push_back(r.energy.Q_ref[k].back());
    q_eff.push_back(r.energy.Q_eff[k].back());
    e_eff.push_back(r.energy.E_eff[k].back());
    e_ad.push_back(r.energy.E_ad[k].back());
  }
  s.put("results.status", r.ok() ? "ok" : "failed");
  std::string failed;
  for (const auto& f : r.failed_checks) failed += (failed.empty() ? "" : " ") + f;
  s.put("results.failed_checks", failed);
  s.put("results.temperatures", join(r.energy.temperatures));
  s.put("results.Q_ref_final", join(q_ref));
  s.put("results.Q_eff_final", join(q_eff));
  s.put("results.E_eff_final", join(e_eff));
  s.put("results.E_ad_final", join(e_ad));
  s.put("results.max_speed_left_eff", format_number(r.max_speed_left));
  s.put("results.max_speed_right_eff", format_number(r.max_speed_right));
  s.put("results.superluminal", r.superluminal ? "true" : "false");
  s.put("results.reference_superluminal", r.reference_superluminal ? "true" : "false");
  s.put("results.effective_failures", r.eff_left.failures + r.eff_right.failures);
  s.put("results.exact_residual_left", format_number(r.exact_residual.left));
  s.put("results.exact_residual_right", format_number(r.exact_residual.right));
  s.put("results.adiabatic_residual", format_number(r.adiabatic_residual.max()));
  s.put("results.effective_residual", format_number(r.effective_residual));
  if (r.cross_residual) s.put("results.cross_residual", format_number(*r.cross_residual));
  s.put("results.continuity_check", r.continuity ? "true" : "false");
  s.put("results.v_lim", format_number(r.v_lim));
  s.put("results.R_c", format_number(r.R_c));
  if (r.tau_c) {
    switch (r.tau_c->outcome) {
      case CriticalTau::Outcome::found: s.put("results.tau_c", format_number(r.tau_c->tau)); break;
      case CriticalTau::Outcome::all_physical: s.put("results.tau_c", "below_range"); break;
      case CriticalTau::Outcome::none_physical: s.put("results.tau_c", "above_range"); break;
    }
  }
  for (std::size_t i = 0; i < r.notes.size(); ++i) {
    s.put("notes.note" + std::to_string(i + 1), r.notes[i]);
  }
  pt::write_ini((dir / "summary.ini").string(), s);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log(x[static_cast<std::size_t>(i)]);
    b[i] = std::log(y[static_cast<std::size_t>(i)]);
  }
  return A.colPivHouseholderQr().solve(b)[1];
}

SweepResult sweep_tau(const RunConfig& config, const RunOptions& opt) {
  const std::vector<double>& taus = config.sweep_taus;
  if (taus.size() < 3) throw ConfigError("a sweep needs at least three durations");
  if (!std::is_sorted(taus.begin(), taus.end()) ||
      std::adjacent_find(taus.begin(), taus.end()) != taus.end()) {
    throw ConfigError("sweep durations must be strictly ascending");
  }
  if (config.explicit_segments()) {
    throw ConfigError("duration sweeps need a blended reference, not explicit segments");
  }
  SweepResult out;
  out.rows.resize(taus.size());
  const EffectiveOptions eopt{0.0, config.numerics.effective_tol};
  parallel_for(taus.size(), opt.threads, [&](std::size_t i) {
    const double tau = taus[i];
    const TrajectoryPair ref = config.reference(tau);
    const AdiabaticMoore am = AdiabaticMoore::build(ref);
    const double reach = std::max({std::abs(ref.L0), std::abs(ref.R0), std::abs(ref.Lf), std::abs(ref.Rf)});
    const auto probe = uniform(ref.motion_start() - reach, ref.motion_end() + reach, 4000);
    SweepRow row;
    row.tau = tau;
    row.adiabatic_residual = adiabatic_residual(am, ref, probe).max();
    const EffectiveTrajectory left = build_effective(am, Mirror::left, eopt);
    const EffectiveTrajectory right = build_effective(am, Mirror::right, eopt);
    row.effective_failures = left.failures + right.failures;
    row.max_effective_speed = std::max(left.max_speed(), right.max_speed());
    const auto [lim_l, lim_r] = limit_trajectory(ref.L0, ref.Lf, ref.R0, ref.Rf);
    row.limit_distance_left = limit_distance(left, lim_l, tau);
    row.limit_distance_right = limit_distance(right, lim_r, tau);
    out.rows[i] = row;
  });
  std::vector<double> x, y;
  for (const SweepRow& row : out.rows) {
    x.push_back(row.tau);
    y.push_back(row.adiabatic_residual);
  }
  out.residual_slope = loglog_slope(x, y);
  return out;
}

void write_sweep(const SweepResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvWriter csv(dir / "sweep.csv", {"tau", "adiabatic_residual", "max_effective_speed",
                                      "limit_distance_left", "limit_distance_right",
                                      "effective_failures"});
    for (const SweepRow& row : result.rows) {
      csv.row({row.tau, row.adiabatic_residual, row.max_effective_speed, row.limit_distance_left,
               row.limit_distance_right, static_cast<double>(row.effective_failures)});
    }
  }
  boost::property_tree::ptree s;
  std::vector<double> taus;
  for (const SweepRow& row : result.rows) taus.push_back(row.tau);
  s.put("sweep.taus", join(taus));
  s.put("sweep.residual_slope", format_number(result.residual_slope));
  boost::property_tree::write_ini((dir / "sweep_summary.ini").string(), s);
}

}  // namespace dce
