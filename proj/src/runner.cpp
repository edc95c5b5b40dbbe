#include "routh/cli/runner.hpp"

#include "routh/systems.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

namespace routh::cli {

namespace fs = std::filesystem;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct Systems {
  SystemPtr full;
  ReducedPtr reduced;
};

Systems make_systems(const RunConfig& cfg) {
  if (cfg.system == "satellite") return {satellite_system(cfg.j2), satellite_reduced(cfg.j2)};
  return {dsp_system(cfg.dsp), dsp_reduced(cfg.dsp)};
}

std::string group_column(const MechanicalSystem& sys) { return sys.coord_names()[sys.group_indices().front()]; }

// Continuous initial state on T*Q. A full IC given together with mu for a reduced
// method is re-lifted to that momentum level.
CotangentState initial_state(const RunConfig& cfg, const Systems& s) {
  const auto& triv = s.full->trivialization();
  const int m = triv.group_dim();
  if (cfg.q) {
    if (cfg.mu && cfg.reduced_method()) {
      return state_from_reduced_velocity(*s.full, *s.reduced, triv.shape_of(*cfg.q), triv.shape_of(*cfg.qdot),
                                         MomentumValue::scalar(*cfg.mu), triv.group_of(*cfg.q));
    }
    if (!s.full->in_chart(*cfg.q)) throw SingularConfiguration("initial configuration is outside the chart");
    return state_from_velocity(*s.full, *cfg.q, *cfg.qdot);
  }
  if (!s.reduced->in_chart(*cfg.x)) throw SingularConfiguration("initial shape point is outside the chart");
  return state_from_reduced_velocity(*s.full, *s.reduced, *cfg.x, *cfg.xdot, MomentumValue::scalar(*cfg.mu),
                                     Vector::Zero(m));
}

Vector concat(const Vector& a, const Vector& b) {
  Vector v(a.size() + b.size());
  v << a, b;
  return v;
}

Vector wrap_shape(const ReducedSystem& red, Vector x) {
  const auto ang = red.angular_shape_coords();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (ang[i]) x[i] = wrap_angle(x[i]);
  }
  return x;
}

void full_columns(Simulation& sim, const MechanicalSystem& sys) {
  for (const auto& n : sys.coord_names()) sim.columns.push_back(n);
  for (const auto& n : sys.coord_names()) sim.columns.push_back("p_" + n);
}

void reduced_columns(Simulation& sim, const MechanicalSystem& sys, bool with_group) {
  for (const auto& n : sys.shape_coord_names()) sim.columns.push_back(n);
  for (const auto& n : sys.shape_coord_names()) sim.columns.push_back("s_" + n);
  if (with_group) sim.columns.push_back(group_column(sys));
}

void simulate_cotangent(Simulation& sim, const Systems& s, const CotangentTrajectory& traj) {
  const auto& triv = s.full->trivialization();
  full_columns(sim, *s.full);
  for (const auto& smp : traj.samples) {
    sim.steps.push_back(smp.step);
    sim.rows.push_back(concat(smp.state.q, smp.state.p));
    sim.shapes.push_back(triv.shape_of(smp.state.q));
    sim.energy.push_back({smp.step, smp.t, hamiltonian(*s.full, smp.state.q, smp.state.p)});
    sim.momentum.push_back({smp.step, smp.t, triv.group_covector(smp.state.p)[0]});
  }
  sim.failure = traj.failure;
}

void simulate_del(Simulation& sim, const Systems& s, const CotangentState& z) {
  const auto& triv = s.full->trivialization();
  const auto ld = midpoint_ld(s.full, sim.h);
  const DiscreteSeed seed = discrete_seed(*s.full, z, sim.h);
  const auto traj = run_del(*ld, seed.q0, seed.q1, sim.config.steps);
  full_columns(sim, *s.full);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& smp = traj.samples[k];
    Vector p;
    if (k == 0) {
      if (traj.size() < 2) break;
      p = legendre_transforms(*ld, traj[0], traj[1]).first;
    } else {
      p = legendre_transforms(*ld, traj[k - 1], traj[k]).second;
    }
    sim.steps.push_back(smp.step);
    sim.rows.push_back(concat(smp.state.coords, p));
    sim.shapes.push_back(triv.shape_of(smp.state.coords));
    sim.energy.push_back({smp.step, smp.t, hamiltonian(*s.full, smp.state.coords, p)});
    sim.momentum.push_back({smp.step, smp.t, triv.group_covector(p)[0]});
  }
  sim.failure = traj.failure;
}

void simulate_dr(Simulation& sim, const Systems& s, const CotangentState& z) {
  const auto& triv = s.full->trivialization();
  const auto ld = midpoint_ld(s.full, sim.h);
  const DiscreteSeed seed = discrete_seed(*s.full, z, sim.h);
  const MomentumValue mu =
      sim.config.mu ? MomentumValue::scalar(*sim.config.mu) : discrete_momentum(*ld, seed.q0, seed.q1, *s.full);
  const auto lhat = reduce_lagrangian(ld, mu);
  const ConnectionOneForm aform(lhat, s.reduced);
  const Vector x0 = triv.shape_of(seed.q0.coords);
  const Vector x1 = triv.shape_of(seed.q1.coords);
  const auto traj = run_dr(lhat, aform, ShapePoint(x0), ShapePoint(x1), sim.config.steps);

  // Reconstruction seeds on the momentum level set, at the initial group value.
  const LiftedPair lifted = lhat.lift(x0, x1);
  const Vector g0 = triv.group_of(z.q);
  const ConfigPoint r0(lifted.q0 + triv.group_basis() * g0);
  const ConfigPoint r1(lifted.q1 + triv.group_basis() * g0);
  const bool need_full = sim.config.emit.count("reconstruction") || sim.config.emit.count("momentum");
  std::optional<ConfigTrajectory> full;
  if (need_full && traj.size() >= 2) full = reconstruct(traj, r0, r1, *ld, *s.full, mu);

  const bool with_group = sim.config.emit.count("reconstruction") > 0;
  reduced_columns(sim, *s.full, with_group);
  std::size_t n = traj.size() < 2 ? 0 : traj.size();
  if (full) n = std::min(n, full->size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& smp = traj.samples[k];
    const Vector& x = smp.state.coords;
    const Vector sk = k == 0 ? reduced_legendre_minus(lhat, aform, traj[0].coords, traj[1].coords)
                             : reduced_legendre(lhat, aform, traj[k - 1].coords, x).s;
    Vector row = concat(wrap_shape(*s.reduced, x), sk);
    if (with_group) row = concat(row, full->group[k].value);
    sim.steps.push_back(smp.step);
    sim.rows.push_back(row);
    sim.shapes.push_back(x);
    sim.energy.push_back({smp.step, smp.t, reduced_energy(*s.reduced, x, sk, mu)});
    if (full) {
      // J_d of the reconstructed pair ending at k (starting at k for the first row).
      const std::size_t a = k == 0 ? 0 : k - 1;
      const double j = discrete_momentum(*ld, (*full)[a], (*full)[a + 1], *s.full).mu[0];
      sim.momentum.push_back({smp.step, smp.t, j});
    }
  }
  sim.failure = traj.failure;
  if (full && full->failure && !sim.failure) sim.failure = "reconstruction: " + *full->failure;
}

void simulate_rsprk(Simulation& sim, const Systems& s, const CotangentState& z) {
  const auto& triv = s.full->trivialization();
  const MomentumValue mu(triv.group_covector(z.p));
  const auto traj = run_rsprk(*s.reduced, gauss_tableau(sim.config.order / 2),
                              project_cotangent(*s.full, *s.reduced, z), sim.h, mu, sim.config.steps,
                              triv.group_of(z.q));
  const bool with_group = sim.config.emit.count("reconstruction") > 0;
  reduced_columns(sim, *s.full, with_group);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& smp = traj.samples[k];
    Vector row = concat(wrap_shape(*s.reduced, smp.state.x), smp.state.s);
    if (with_group) row = concat(row, traj.group[k].value);
    sim.steps.push_back(smp.step);
    sim.rows.push_back(row);
    sim.shapes.push_back(smp.state.x);
    sim.energy.push_back({smp.step, smp.t, reduced_energy(*s.reduced, smp.state.x, smp.state.s, mu)});
    // Momentum map of the reconstructed full state.
    const CotangentState full = lift_cotangent(*s.full, *s.reduced, smp.state, mu, traj.group[k].value);
    const Vector qdot = s.full->velocity(full.q, full.p);
    sim.momentum.push_back({smp.step, smp.t, s.full->momentum_map(full.q, qdot)[0]});
  }
  sim.failure = traj.failure;
}

void write_csv_header(std::ostream& os, const std::vector<std::string>& cols) {
  os << "step,t";
  for (const auto& c : cols) os << ',' << c;
  os << '\n';
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  return os;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace

Simulation simulate(const RunConfig& cfg) {
  validate(cfg);
  Simulation sim;
  sim.config = cfg;
  sim.h = cfg.step();
  Systems s;
  try {
    s = make_systems(cfg);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const CotangentState z = initial_state(cfg, s);
  if (cfg.method == "sprk") {
    simulate_cotangent(sim, s, run_sprk(*s.full, gauss_tableau(cfg.order / 2), z, sim.h, cfg.steps));
  } else if (cfg.method == "rk4") {
    simulate_cotangent(sim, s, run_rk4(*s.full, z, sim.h, cfg.steps));
  } else if (cfg.method == "del") {
    simulate_del(sim, s, z);
  } else if (cfg.method == "dr") {
    simulate_dr(sim, s, z);
  } else {
    simulate_rsprk(sim, s, z);
  }
  return sim;
}

void write_outputs(const Simulation& sim) {
  ensure_dir(sim.config.out);
  const fs::path dir(sim.config.out);
  const double h = sim.h;
  if (sim.config.emit.count("trajectory") || sim.config.emit.count("reconstruction")) {
    auto os = open_output(dir / "trajectory.csv");
    write_csv_header(os, sim.columns);
    for (std::size_t k = 0; k < sim.rows.size(); ++k) {
      os << sim.steps[k] << ',' << format_real(sim.steps[k] * h);
      for (double v : sim.rows[k]) os << ',' << format_real(v);
      os << '\n';
    }
  }
  if (sim.config.emit.count("energy")) {
    auto os = open_output(dir / "energy.csv");
    os << "step,t,energy,relative_drift\n";
    const DriftReport rep = relative_drift(sim.energy);
    for (std::size_t k = 0; k < sim.energy.size(); ++k) {
      os << sim.energy[k].step << ',' << format_real(sim.energy[k].t) << ',' << format_real(sim.energy[k].value)
         << ',' << format_real(rep.series[k].value) << '\n';
    }
  }
  if (sim.config.emit.count("momentum")) {
    auto os = open_output(dir / "momentum.csv");
    os << "step,t,momentum,deviation\n";
    const double m0 = sim.momentum.empty() ? 0.0 : sim.momentum.front().value;
    for (const auto& p : sim.momentum) {
      os << p.step << ',' << format_real(p.t) << ',' << format_real(p.value) << ',' << format_real(p.value - m0)
         << '\n';
    }
  }
}

int run(const RunConfig& cfg, std::ostream& log) {
  Simulation sim;
  try {
    sim = simulate(cfg);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  try {
    write_outputs(sim);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (sim.failure) {
    const long last = sim.steps.empty() ? -1 : sim.steps.back();
    log << "numerical failure after step " << last << ": " << *sim.failure << '\n';
    return kNumericalFailure;
  }
  log << cfg.method << " on " << cfg.system << ": " << sim.rows.size() << " rows written to " << cfg.out << '\n';
  return kSuccess;
}

int compare(const RunConfig& a, const RunConfig& b, const std::string& out, std::ostream& log) {
  Simulation sa, sb;
  try {
    if (a.system != b.system) throw ConfigError("compare: both runs must use the same system");
    const double ta = a.steps * a.step();
    const double tb = b.steps * b.step();
    if (std::abs(ta - tb) > 1e-9 * std::max(ta, tb)) throw ConfigError("compare: runs must share the final time");
    const double ratio = a.step() >= b.step() ? a.step() / b.step() : b.step() / a.step();
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      throw ConfigError("compare: one step size must be an integer multiple of the other");
    }
    sa = simulate(a);
    sb = simulate(b);
    ensure_dir(out);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }

  const bool a_coarse = sa.h >= sb.h;
  const Simulation& coarse = a_coarse ? sa : sb;
  const Simulation& fine = a_coarse ? sb : sa;
  const auto stride = static_cast<std::size_t>(std::lround(coarse.h / fine.h));
  const DriftReport ea = relative_drift(sa.energy);
  const DriftReport eb = relative_drift(sb.energy);
  const auto angular = make_systems(a).reduced->angular_shape_coords();

  // Energy series align with rows.
  auto row_of = [](const Simulation& sim, long step) -> std::optional<std::size_t> {
    const auto k = static_cast<std::size_t>(step);
    if (k < sim.steps.size() && sim.steps[k] == step) return k;
    for (std::size_t i = 0; i < sim.steps.size(); ++i) {
      if (sim.steps[i] == step) return i;
    }
    return std::nullopt;
  };

  auto os = open_output(fs::path(out) / "compare.csv");
  os << "step,t,energy_drift_a,energy_drift_b,shape_distance\n";
  double max_dist = 0.0;
  for (std::size_t k = 0; k < coarse.steps.size(); ++k) {
    const long cstep = coarse.steps[k];
    const long fstep = cstep * static_cast<long>(stride);
    const auto fk = row_of(fine, fstep);
    if (!fk) break;
    const long step_a = a_coarse ? cstep : fstep;
    const long step_b = a_coarse ? fstep : cstep;
    const auto ka = row_of(sa, step_a);
    const auto kb = row_of(sb, step_b);
    if (!ka || !kb || *ka >= ea.series.size() || *kb >= eb.series.size()) break;
    const double da = ea.series[*ka].value;
    const double db = eb.series[*kb].value;
    const double dist =
        periodic_difference(coarse.shapes[k], fine.shapes[*fk], angular).lpNorm<Eigen::Infinity>();
    max_dist = std::max(max_dist, dist);
    os << cstep << ',' << format_real(cstep * coarse.h) << ',' << format_real(da) << ',' << format_real(db) << ','
       << format_real(dist) << '\n';
  }

  auto sum = open_output(fs::path(out) / "compare_summary.csv");
  auto max_dev = [](const Simulation& sim) {
    double m = 0.0;
    for (const auto& p : sim.momentum) m = std::max(m, std::abs(p.value - sim.momentum.front().value));
    return m;
  };
  sum << "metric,a,b\n";
  sum << "method," << sa.config.method << ',' << sb.config.method << '\n';
  sum << "h," << format_real(sa.h) << ',' << format_real(sb.h) << '\n';
  sum << "steps," << sa.config.steps << ',' << sb.config.steps << '\n';
  sum << "max_abs_energy_drift," << format_real(ea.max_abs) << ',' << format_real(eb.max_abs) << '\n';
  sum << "energy_trend," << format_real(ea.linear_trend) << ',' << format_real(eb.linear_trend) << '\n';
  sum << "energy_trend_stderr," << format_real(ea.trend_stderr) << ',' << format_real(eb.trend_stderr) << '\n';
  sum << "max_momentum_deviation," << format_real(max_dev(sa)) << ',' << format_real(max_dev(sb)) << '\n';
  sum << "max_shape_distance," << format_real(max_dist) << ',' << format_real(max_dist) << '\n';

  log << "compare: energy trend a " << format_real(ea.linear_trend) << ", b " << format_real(eb.linear_trend)
      << ", max shape distance " << format_real(max_dist) << '\n';
  if (sa.failure || sb.failure) {
    log << "numerical failure: " << (sa.failure ? *sa.failure : *sb.failure) << '\n';
    return kNumericalFailure;
  }
  return kSuccess;
}

int order(const RunConfig& cfg, const std::vector<double>& h_list, double final_time, std::ostream& log) {
  try {
    validate(cfg);
    if (!(final_time > 0.0)) throw ConfigError("final time must be positive");
    if (cfg.method == "rk4") throw ConfigError("order: rk4 is not a supported method here");
    const Systems s = make_systems(cfg);
    const auto& triv = s.full->trivialization();
    const auto angular_q = s.full->angular_coords();
    const auto angular_x = s.reduced->angular_shape_coords();
    const CotangentState z = initial_state(cfg, s);
    const MomentumValue mu(triv.group_covector(z.p));

    auto reference = [&](long n, double h) {
      CotangentState w = z;
      const ButcherTableau tab = gauss_tableau(2);
      for (long k = 0; k < 10 * n; ++k) w = sprk_step(*s.full, tab, w, h / 10.0);
      return w;
    };
    auto error_at = [&](double h) -> double {
      const long n = std::max(1L, std::lround(final_time / h));
      const CotangentState ref = reference(n, h);
      if (cfg.method == "sprk") {
        const auto tr = run_sprk(*s.full, gauss_tableau(cfg.order / 2), z, h, n);
        if (tr.failure) throw StepRejected(*tr.failure);
        return std::max(periodic_difference(tr.back().q, ref.q, angular_q).lpNorm<Eigen::Infinity>(),
                        (tr.back().p - ref.p).lpNorm<Eigen::Infinity>());
      }
      if (cfg.method == "del") {
        const auto ld = midpoint_ld(s.full, h);
        const DiscreteSeed seed = discrete_seed(*s.full, z, h);
        const auto tr = run_del(*ld, seed.q0, seed.q1, n);
        if (tr.failure) throw StepRejected(*tr.failure);
        return periodic_difference(tr.back().coords, ref.q, angular_q).lpNorm<Eigen::Infinity>();
      }
      const ReducedCotangentState rref = project_cotangent(*s.full, *s.reduced, ref);
      if (cfg.method == "rsprk") {
        const auto tr = run_rsprk(*s.reduced, gauss_tableau(cfg.order / 2), project_cotangent(*s.full, *s.reduced, z),
                                  h, mu, n, triv.group_of(z.q));
        if (tr.failure) throw StepRejected(*tr.failure);
        return std::max(periodic_difference(tr.back().x, rref.x, angular_x).lpNorm<Eigen::Infinity>(),
                        (tr.back().s - rref.s).lpNorm<Eigen::Infinity>());
      }
      const auto ld = midpoint_ld(s.full, h);
      const DiscreteSeed seed = discrete_seed(*s.full, z, h);
      const auto lhat = reduce_lagrangian(ld, mu);
      const ConnectionOneForm aform(lhat, s.reduced);
      const auto tr = run_dr(lhat, aform, ShapePoint(triv.shape_of(seed.q0.coords)),
                             ShapePoint(triv.shape_of(seed.q1.coords)), n);
      if (tr.failure) throw StepRejected(*tr.failure);
      return periodic_difference(tr.back().coords, rref.x, angular_x).lpNorm<Eigen::Infinity>();
    };
    const OrderReport rep = convergence_order(error_at, h_list);
    ensure_dir(cfg.out);
    auto os = open_output(fs::path(cfg.out) / "order.csv");
    os << "h,error\n";
    for (std::size_t i = 0; i < rep.step_sizes.size(); ++i) {
      os << format_real(rep.step_sizes[i]) << ',' << format_real(rep.errors[i]) << '\n';
    }
    log << "order: " << cfg.method << " on " << cfg.system << ", slope " << format_real(rep.slope) << '\n';
    return kSuccess;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    log << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

int check(std::ostream& log) {
  bool all = true;
  auto report = [&](const std::string& name, double value, double tol) {
    const bool ok = std::isfinite(value) && value <= tol;
    all = all && ok;
    log << (ok ? "PASS " : "FAIL ") << name << " value=" << format_real(value) << " tol=" << format_real(tol)
        << '\n';
  };

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  DspParams params;
  const auto sat = satellite_system(0.05);
  const auto sat_red = satellite_reduced(0.05);
  const auto dsp = dsp_system(params);
  const auto dsp_red = dsp_reduced(params);

  auto random_state = [&](const MechanicalSystem& sys) {
    Vector q(sys.dim()), v(sys.dim());
    if (sys.name() == "satellite") {
      q << 1.0 + 0.5 * unit(rng), 3.0 * unit(rng), 0.5 * unit(rng);
    } else {
      q << 0.5 + 0.3 * unit(rng), 3.0 * unit(rng), 0.5 + 0.3 * unit(rng), 3.0 * unit(rng);
    }
    for (int i = 0; i < sys.dim(); ++i) v[i] = unit(rng);
    return std::pair<Vector, Vector>{q, v};
  };

  try {
    for (const SystemPtr& sys : {SystemPtr(sat), SystemPtr(dsp)}) {
      double inv = 0.0, deriv = 0.0;
      for (int k = 0; k < 20; ++k) {
        const auto [q, v] = random_state(*sys);
        const double l = sys->lagrangian(q, v);
        const Vector shift = sys->trivialization().group_basis() * Vector::Constant(1, 0.7);
        inv = std::max(inv, std::abs(sys->lagrangian(q + shift, v) - l) / (1.0 + std::abs(l)));
        const Vector gq = fd_gradient([&](const Vector& y) { return sys->lagrangian(y, v); }, q);
        const Vector gv = fd_gradient([&](const Vector& y) { return sys->lagrangian(q, y); }, v);
        deriv = std::max({deriv, (gq - sys->dL_dq(q, v)).lpNorm<Eigen::Infinity>(),
                          (gv - sys->dL_dqdot(q, v)).lpNorm<Eigen::Infinity>()});
      }
      report(sys->name() + " group invariance", inv, 1e-12);
      report(sys->name() + " Lagrangian derivatives", deriv, 1e-6);
    }

    {
      Vector q(3), v(3);
      q << 1.0, 0.0, 0.0;
      v << 0.0, std::cos(0.3), std::sin(0.3);
      const auto ld = midpoint_ld(sat, 0.3);
      const DiscreteSeed seed = discrete_seed(*sat, state_from_velocity(*sat, q, v), 0.3);
      const auto tr = run_del(*ld, seed.q0, seed.q1, 500);
      report("satellite DEL momentum drift (500 steps)", momentum_drift(tr, *ld, *sat).max_abs, 1e-10);
      const auto rep = commutation_check(sat, sat_red, state_from_velocity(*sat, q, v), 0.1, 200, MethodPair::DelDr);
      report("satellite DEL/DR commutation (200 steps)", rep.failure ? INFINITY : rep.max_distance, 1e-9);
    }

    Vector q(4), v(4);
    q << 0.5, 0.0, 0.5, 0.3;
    v << 0.1, 3.0, -0.1, 3.0;
    const CotangentState z = state_from_velocity(*dsp, q, v);
    {
      const auto rep = commutation_check(dsp, dsp_red, z, 0.01, 200, MethodPair::SprkRsprk);
      report("dsp SPRK/RSPRK commutation (200 steps)", rep.failure ? INFINITY : rep.max_distance, 1e-8);
    }
    {
      const MomentumValue mu(dsp->trivialization().group_covector(z.p));
      const ReducedCotangentState rz = project_cotangent(*dsp, *dsp_red, z);
      const ButcherTableau tab = gauss_tableau(2);
      auto step = [&](const Vector& w) -> Vector {
        const auto r = rsprk_step(*dsp_red, tab, {w.head(3), w.tail(3)}, 0.01, mu);
        return concat(r.x, r.s);
      };
      auto form = [&](const Vector& w) -> Matrix { return reduced_symplectic_matrix(*dsp_red, w.head(3), mu); };
      report("dsp RSPRK reduced symplecticity", symplectic_check(step, concat(rz.x, rz.s), form), 1e-6);
    }
    {
      double worst = 0.0;
      for (int k = 0; k < 20; ++k) {
        Vector x(3);
        x << 0.5 + 0.3 * unit(rng), 0.5 + 0.3 * unit(rng), 3.0 * unit(rng);
        const double mu = 0.5;
        const Matrix b = dsp_red->beta_mu(x, MomentumValue::scalar(mu));
        const Matrix grad = fd_jacobian(
            [&](const Vector& y) -> Vector { return mu * dsp_red->connection_A(y).transpose().col(0); }, x);
        // grad(k, l) = d(mu A_k)/dx_l
        const Matrix curl = grad.transpose() - grad;
        worst = std::max(worst, (b - curl).lpNorm<Eigen::Infinity>());
      }
      report("dsp beta_mu = d(mu A)", worst, 1e-6);
    }
    report("Gauss tableaux symplectic",
           check_symplecticity(gauss_tableau(1)) && check_symplecticity(gauss_tableau(2)) ? 0.0 : 1.0, 0.0);
  } catch (const Error& e) {
    log << "FAIL numerical error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return all ? kSuccess : kCheckFailed;
}

}  // namespace routh::cli
