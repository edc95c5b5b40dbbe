#pragma once

#include "routh/mechanical_system.hpp"
#include "routh/trajectory.hpp"

#include <memory>
#include <optional>
#include <utility>

namespace routh {

/// A pair function L_d(q0, q1) approximating the action over one step of length h.
class DiscreteLagrangian {
 public:
  virtual ~DiscreteLagrangian() = default;

  virtual double eval(const Vector& q0, const Vector& q1) const = 0;
  /// Derivative with respect to the first slot.
  virtual Vector d1(const Vector& q0, const Vector& q1) const = 0;
  /// Derivative with respect to the second slot.
  virtual Vector d2(const Vector& q0, const Vector& q1) const = 0;

  double h() const { return h_; }
  const MechanicalSystem& system() const { return *system_; }
  const SystemPtr& system_ptr() const { return system_; }

 protected:
  DiscreteLagrangian(SystemPtr system, double h);

 private:
  SystemPtr system_;
  double h_;
};

using DiscreteLagrangianPtr = std::shared_ptr<const DiscreteLagrangian>;

/// L_d(q0, q1) = h L((q0 + q1) / 2, (q1 - q0) / h).
class MidpointLagrangian final : public DiscreteLagrangian {
 public:
  MidpointLagrangian(SystemPtr system, double h);

  double eval(const Vector& q0, const Vector& q1) const override;
  Vector d1(const Vector& q0, const Vector& q1) const override;
  Vector d2(const Vector& q0, const Vector& q1) const override;
  /// Both slot derivatives from one evaluation of the system partials.
  std::pair<Vector, Vector> d12(const Vector& q0, const Vector& q1) const;
};

DiscreteLagrangianPtr midpoint_ld(SystemPtr system, double h);

/// Solves D2 L_d(q_prev, q_cur) + D1 L_d(q_cur, q_next) = 0 for q_next.
/// Default guess is 2 q_cur - q_prev. Throws StepRejected if q_next leaves the chart.
ConfigPoint del_step(const DiscreteLagrangian& ld, const ConfigPoint& q_prev, const ConfigPoint& q_cur,
                     const std::optional<ConfigPoint>& guess = std::nullopt);

/// J_d(q0, q1) = D2 L_d(q0, q1) . xi_Q(q1), one component per group direction.
MomentumValue discrete_momentum(const DiscreteLagrangian& ld, const ConfigPoint& q0, const ConfigPoint& q1,
                                const MechanicalSystem& system);

/// (p0, p1) = (-D1 L_d(q0, q1), D2 L_d(q0, q1)).
std::pair<Vector, Vector> legendre_transforms(const DiscreteLagrangian& ld, const ConfigPoint& q0,
                                              const ConfigPoint& q1);

/// Given (q0, p0) solves p0 = -D1 L_d(q0, q1) for q1.
ConfigPoint inverse_legendre(const DiscreteLagrangian& ld, const ConfigPoint& q0, const Vector& p0);

/// q_0 .. q_steps from the seed pair. Stops early on a numerical failure.
ConfigTrajectory run_del(const DiscreteLagrangian& ld, const ConfigPoint& q0, const ConfigPoint& q1, long steps);

}  // namespace routh
