#include "routh/diagnostics.hpp"

#include <cmath>

namespace routh {

double energy(const MechanicalSystem& system, const Vector& q, const Vector& qdot) {
  return qdot.dot(system.dL_dqdot(q, qdot)) - system.lagrangian(q, qdot);
}

double hamiltonian(const MechanicalSystem& system, const Vector& q, const Vector& p) {
  return energy(system, q, system.velocity(q, p));
}

double reduced_energy(const ReducedSystem& reduced, const Vector& x, const Vector& s, const MomentumValue& mu) {
  return 0.5 * s.dot(reduced.shape_velocity(x, s)) + reduced.amended_potential(x, mu);
}

DriftReport make_drift_report(std::vector<DriftPoint> series, bool relative) {
  DriftReport r;
  r.series = std::move(series);
  r.relative = relative;
  const auto n = static_cast<double>(r.series.size());
  if (r.series.empty()) return r;
  double mt = 0.0, mv = 0.0;
  for (const auto& p : r.series) {
    r.max_abs = std::max(r.max_abs, std::abs(p.value));
    mt += p.t;
    mv += p.value;
  }
  mt /= n;
  mv /= n;
  double stt = 0.0, stv = 0.0;
  for (const auto& p : r.series) {
    stt += (p.t - mt) * (p.t - mt);
    stv += (p.t - mt) * (p.value - mv);
  }
  if (stt > 0.0) {
    r.linear_trend = stv / stt;
    if (r.series.size() > 2) {
      double ssr = 0.0;
      for (const auto& p : r.series) {
        const double e = p.value - mv - r.linear_trend * (p.t - mt);
        ssr += e * e;
      }
      r.trend_stderr = std::sqrt(ssr / (n - 2.0) / stt);
    }
  }
  return r;
}

DriftReport relative_drift(const std::vector<DriftPoint>& values) {
  if (values.empty()) return make_drift_report({});
  const double v0 = values.front().value;
  const bool relative = v0 != 0.0;
  std::vector<DriftPoint> series;
  series.reserve(values.size());
  for (const auto& p : values) series.push_back({p.step, p.t, relative ? (p.value - v0) / v0 : p.value - v0});
  return make_drift_report(std::move(series), relative);
}

DriftReport momentum_drift(const ConfigTrajectory& traj, const DiscreteLagrangian& ld, const MechanicalSystem& system) {
  std::vector<DriftPoint> series;
  if (traj.size() < 2) return make_drift_report({}, false);
  const Vector j0 = discrete_momentum(ld, traj[0], traj[1], system).mu;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const Vector jk = discrete_momentum(ld, traj[k], traj[k + 1], system).mu;
    series.push_back({traj.samples[k].step, traj.samples[k].t, (jk - j0).lpNorm<Eigen::Infinity>()});
  }
  return make_drift_report(std::move(series), false);
}

DriftReport momentum_drift(const CotangentTrajectory& traj, const MechanicalSystem& system) {
  std::vector<DriftPoint> series;
  if (traj.empty()) return make_drift_report({}, false);
  const auto& triv = system.trivialization();
  const Vector j0 = triv.group_covector(traj[0].p);
  for (const auto& smp : traj.samples) {
    series.push_back({smp.step, smp.t, (triv.group_covector(smp.state.p) - j0).lpNorm<Eigen::Infinity>()});
  }
  return make_drift_report(std::move(series), false);
}

DriftReport energy_drift(const CotangentTrajectory& traj, const MechanicalSystem& system) {
  std::vector<DriftPoint> values;
  for (const auto& smp : traj.samples) values.push_back({smp.step, smp.t, hamiltonian(system, smp.state.q, smp.state.p)});
  return relative_drift(values);
}

DriftReport energy_drift(const ReducedTrajectory& traj, const ReducedSystem& reduced, const MomentumValue& mu) {
  std::vector<DriftPoint> values;
  for (const auto& smp : traj.samples) {
    values.push_back({smp.step, smp.t, reduced_energy(reduced, smp.state.x, smp.state.s, mu)});
  }
  return relative_drift(values);
}

DriftReport energy_drift(const ConfigTrajectory& traj, const DiscreteLagrangian& ld) {
  std::vector<DriftPoint> values;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const Vector p = ld.d2(traj[k - 1].coords, traj[k].coords);
    values.push_back({traj.samples[k].step, traj.samples[k].t, hamiltonian(ld.system(), traj[k].coords, p)});
  }
  return relative_drift(values);
}

Matrix canonical_form(int n) {
  Matrix j = Matrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Matrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return j;
}

double symplectic_check(const VectorFunction& step_map, const Vector& z, const MatrixFunction& form_at,
                        double fd_scale) {
  const Matrix dphi = fd_jacobian(step_map, z, fd_scale);
  const Vector z1 = step_map(z);
  return (dphi.transpose() * form_at(z1) * dphi - form_at(z)).lpNorm<Eigen::Infinity>();
}

CommutationReport commutation_check(const SystemPtr& sys, const ReducedPtr& reduced, const CotangentState& seed,
                                    double h, long steps, MethodPair pair, int stages) {
  const MechanicalSystem& system = *sys;
  CommutationReport rep;
  const auto angular = system.angular_shape_coords();
  if (steps <= 0) {
    rep.distance.push_back(0.0);
    return rep;
  }
  if (pair == MethodPair::DelDr) {
    const auto ld = midpoint_ld(sys, h);
    const DiscreteSeed s = discrete_seed(system, seed, h);
    const MomentumValue mu = discrete_momentum(*ld, s.q0, s.q1, system);
    const auto lhat = reduce_lagrangian(ld, mu);
    const ConnectionOneForm aform(lhat, reduced);
    const auto full = run_del(*ld, s.q0, s.q1, steps);
    const auto red = run_dr(lhat, aform, ShapePoint(shape_of(system, s.q0.coords)),
                            ShapePoint(shape_of(system, s.q1.coords)), steps);
    const std::size_t n = std::min(full.size(), red.size());
    for (std::size_t k = 0; k < n; ++k) {
      const Vector d = periodic_difference(shape_of(system, full[k].coords), red[k].coords, angular);
      rep.distance.push_back(d.lpNorm<Eigen::Infinity>());
    }
    if (full.failure) rep.failure = "del: " + *full.failure;
    if (red.failure) rep.failure = "dr: " + *red.failure;
  } else {
    const ButcherTableau tab = gauss_tableau(stages);
    const MomentumValue mu(system.trivialization().group_covector(seed.p));
    const auto full = run_sprk(system, tab, seed, h, steps);
    const auto red = run_rsprk(*reduced, tab, project_cotangent(system, *reduced, seed), h, mu, steps,
                               system.trivialization().group_of(seed.q));
    const std::size_t n = std::min(full.size(), red.size());
    for (std::size_t k = 0; k < n; ++k) {
      const auto pz = project_cotangent(system, *reduced, full[k]);
      const double dx = periodic_difference(pz.x, red[k].x, angular).lpNorm<Eigen::Infinity>();
      const double ds = (pz.s - red[k].s).lpNorm<Eigen::Infinity>();
      rep.distance.push_back(std::max(dx, ds));
    }
    if (full.failure) rep.failure = "sprk: " + *full.failure;
    if (red.failure) rep.failure = "rsprk: " + *red.failure;
  }
  for (double d : rep.distance) rep.max_distance = std::max(rep.max_distance, d);
  return rep;
}

OrderReport convergence_order(const std::function<double(double)>& error_at, const std::vector<double>& h_list) {
  if (h_list.size() < 2) throw Error("convergence_order needs at least two step sizes");
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] < h_list[i - 1])) throw Error("convergence_order: step sizes must be strictly decreasing");
  }
  OrderReport rep;
  rep.step_sizes = h_list;
  for (double h : h_list) {
    const double e = error_at(h);
    if (!(e > 0.0) || !std::isfinite(e)) throw Error("convergence_order: errors must be positive and finite");
    rep.errors.push_back(e);
  }
  const auto n = static_cast<double>(h_list.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    mx += std::log(h_list[i]);
    my += std::log(rep.errors[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    const double dx = std::log(h_list[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(rep.errors[i]) - my);
  }
  rep.slope = sxy / sxx;
  return rep;
}

CotangentState rk4_step(const MechanicalSystem& system, const CotangentState& state, double h) {
  auto rhs = [&](const Vector& q, const Vector& p) {
    const Vector v = system.velocity(q, p);
    return std::pair<Vector, Vector>{v, system.dL_dq(q, v)};
  };
  const auto [k1q, k1p] = rhs(state.q, state.p);
  const auto [k2q, k2p] = rhs(state.q + 0.5 * h * k1q, state.p + 0.5 * h * k1p);
  const auto [k3q, k3p] = rhs(state.q + 0.5 * h * k2q, state.p + 0.5 * h * k2p);
  const auto [k4q, k4p] = rhs(state.q + h * k3q, state.p + h * k3p);
  CotangentState out{state.q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
                     state.p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)};
  require_finite(out.q, "rk4_step");
  require_finite(out.p, "rk4_step");
  if (!system.in_chart(out.q)) throw StepRejected("rk4_step: configuration leaves the chart");
  return out;
}

CotangentTrajectory run_rk4(const MechanicalSystem& system, const CotangentState& start, double h, long steps) {
  CotangentTrajectory traj;
  traj.meta.system = system.name();
  traj.meta.method = "rk4";
  traj.meta.h = h;
  traj.push(0, start);
  for (long k = 1; k <= steps; ++k) {
    try {
      traj.push(k, rk4_step(system, traj.back(), h));
    } catch (const Error& e) {
      traj.failure = e.what();
      break;
    }
  }
  return traj;
}

}  // namespace routh
