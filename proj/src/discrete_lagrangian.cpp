#include "routh/discrete_lagrangian.hpp"

namespace routh {

DiscreteLagrangian::DiscreteLagrangian(SystemPtr system, double h) : system_(std::move(system)), h_(h) {
  if (!system_) throw Error("discrete Lagrangian requires a system");
  if (!(h > 0.0)) throw Error("discrete Lagrangian requires h > 0");
}

MidpointLagrangian::MidpointLagrangian(SystemPtr system, double h) : DiscreteLagrangian(std::move(system), h) {}

double MidpointLagrangian::eval(const Vector& q0, const Vector& q1) const {
  return h() * system().lagrangian(0.5 * (q0 + q1), (q1 - q0) / h());
}

std::pair<Vector, Vector> MidpointLagrangian::d12(const Vector& q0, const Vector& q1) const {
  const Vector qm = 0.5 * (q0 + q1);
  const Vector v = (q1 - q0) / h();
  const Vector lq = (0.5 * h()) * system().dL_dq(qm, v);
  const Vector lv = system().dL_dqdot(qm, v);
  return {lq - lv, lq + lv};
}

Vector MidpointLagrangian::d1(const Vector& q0, const Vector& q1) const { return d12(q0, q1).first; }

Vector MidpointLagrangian::d2(const Vector& q0, const Vector& q1) const { return d12(q0, q1).second; }

DiscreteLagrangianPtr midpoint_ld(SystemPtr system, double h) {
  return std::make_shared<const MidpointLagrangian>(std::move(system), h);
}

ConfigPoint del_step(const DiscreteLagrangian& ld, const ConfigPoint& q_prev, const ConfigPoint& q_cur,
                     const std::optional<ConfigPoint>& guess) {
  const Vector p_cur = ld.d2(q_prev.coords, q_cur.coords);
  require_finite(p_cur, "del_step");
  const Vector start = guess ? guess->coords : Vector(2.0 * q_cur.coords - q_prev.coords);
  auto residual = [&](const Vector& q_next) -> Vector { return p_cur + ld.d1(q_cur.coords, q_next); };
  Vector q_next = newton_iterate(residual, nullptr, start).x;
  if (!ld.system().in_chart(q_next)) throw StepRejected("del_step: next configuration leaves the chart");
  return ConfigPoint(std::move(q_next), q_cur.chart_id);
}

MomentumValue discrete_momentum(const DiscreteLagrangian& ld, const ConfigPoint& q0, const ConfigPoint& q1,
                                const MechanicalSystem& system) {
  return MomentumValue(system.trivialization().group_covector(ld.d2(q0.coords, q1.coords)));
}

std::pair<Vector, Vector> legendre_transforms(const DiscreteLagrangian& ld, const ConfigPoint& q0,
                                              const ConfigPoint& q1) {
  return {-ld.d1(q0.coords, q1.coords), ld.d2(q0.coords, q1.coords)};
}

ConfigPoint inverse_legendre(const DiscreteLagrangian& ld, const ConfigPoint& q0, const Vector& p0) {
  const auto& sys = ld.system();
  const Vector start = q0.coords + ld.h() * sys.velocity(q0.coords, p0);
  auto residual = [&](const Vector& q1) -> Vector { return p0 + ld.d1(q0.coords, q1); };
  Vector q1 = newton_iterate(residual, nullptr, start).x;
  if (!sys.in_chart(q1)) throw StepRejected("inverse_legendre: configuration leaves the chart");
  return ConfigPoint(std::move(q1), q0.chart_id);
}

ConfigTrajectory run_del(const DiscreteLagrangian& ld, const ConfigPoint& q0, const ConfigPoint& q1, long steps) {
  ConfigTrajectory traj;
  traj.meta.system = ld.system().name();
  traj.meta.method = "del";
  traj.meta.h = ld.h();
  traj.push(0, q0);
  if (steps < 1) return traj;
  traj.push(1, q1);
  for (long k = 2; k <= steps; ++k) {
    try {
      traj.push(k, del_step(ld, traj.samples[k - 2].state, traj.samples[k - 1].state));
    } catch (const Error& e) {
      traj.failure = e.what();
      break;
    }
  }
  return traj;
}

}  // namespace routh
