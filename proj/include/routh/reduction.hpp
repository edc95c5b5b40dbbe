#pragma once

#include "routh/discrete_lagrangian.hpp"
#include "routh/mechanical_system.hpp"
#include "routh/sprk.hpp"
#include "routh/trajectory.hpp"

#include <optional>

namespace routh {

/// Shape pair lifted to Q x Q on the momentum level set:
/// q0 = (x0, 0), q1 = (x1, dg) with J_d(q0, q1) = mu.
struct LiftedPair {
  Vector q0;
  Vector q1;
  Vector dg;
};

/// L^_d(x0, x1) = L_d((x0, g), (x1, g + dg(x0, x1))) at a fixed momentum value.
class ReducedDiscreteLagrangian {
 public:
  ReducedDiscreteLagrangian(DiscreteLagrangianPtr ld, MomentumValue mu);

  const DiscreteLagrangian& discrete_lagrangian() const { return *ld_; }
  const MechanicalSystem& system() const { return ld_->system(); }
  const MomentumValue& mu() const { return mu_; }
  double h() const { return ld_->h(); }

  /// Solves the momentum constraint for the group displacement by Newton.
  LiftedPair lift(const Vector& x0, const Vector& x1, const std::optional<Vector>& dg_guess = std::nullopt) const;
  Vector delta_g(const Vector& x0, const Vector& x1) const { return lift(x0, x1).dg; }

  double eval(const Vector& x0, const Vector& x1) const;
  /// Total derivatives of L^_d, including the dependence of dg on (x0, x1).
  Vector d1(const Vector& x0, const Vector& x1) const;
  Vector d2(const Vector& x0, const Vector& x1) const;

  /// Shape components of D1 L_d and D2 L_d at the lifted pair, with dg held fixed.
  Vector d1_fixed(const LiftedPair& pair) const;
  Vector d2_fixed(const LiftedPair& pair) const;

  /// d(dg)/dx0 and d(dg)/dx1 (each m x (n-m)), by the implicit function theorem.
  std::pair<Matrix, Matrix> delta_g_jacobians(const LiftedPair& pair) const;

 private:
  DiscreteLagrangianPtr ld_;
  MomentumValue mu_;
};

ReducedDiscreteLagrangian reduce_lagrangian(DiscreteLagrangianPtr ld, const MomentumValue& mu);

/// The one-form A^ = A^_1 dx0 + A^_2 dx1 on S x S: the pullback of
/// pi_2^* A_mu - pi_1^* A_mu along the level-set lift.
class ConnectionOneForm {
 public:
  ConnectionOneForm(ReducedDiscreteLagrangian lhat, ReducedPtr reduced);

  Vector A1(const Vector& x0, const Vector& x1) const;
  Vector A2(const Vector& x0, const Vector& x1) const;

  /// Parts coming from the local connection alone: -mu A(x0) and +mu A(x1).
  Vector horizontal1(const Vector& x0) const;
  Vector horizontal2(const Vector& x1) const;

  const ReducedSystem& reduced() const { return *reduced_; }

 private:
  ReducedDiscreteLagrangian lhat_;
  ReducedPtr reduced_;
};

/// Solves the DR equations
///   D2 L^_d(x_prev, x_cur) + D1 L^_d(x_cur, x_next) = A^_2(x_prev, x_cur) + A^_1(x_cur, x_next)
/// for x_next. The d(dg)/dx contributions appear identically on both sides and are
/// cancelled analytically before solving.
ShapePoint dr_step(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform, const ShapePoint& x_prev,
                   const ShapePoint& x_cur, const std::optional<ShapePoint>& guess = std::nullopt);

/// (x1, s1) with s1 = D2 L^_d(x0, x1) - A^_2(x0, x1).
ReducedCotangentState reduced_legendre(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform,
                                       const Vector& x0, const Vector& x1);

/// s0 = -(D1 L^_d(x0, x1) - A^_1(x0, x1)).
Vector reduced_legendre_minus(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform,
                              const Vector& x0, const Vector& x1);

/// Given (x0, s0) solves the minus transform for x1.
ShapePoint inverse_reduced_legendre(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform,
                                    const ReducedCotangentState& state);

struct RsprkResult {
  ReducedCotangentState state;
  /// Group displacement over the step, h sum_j b_j (I^-1 mu - A(X_j) Xdot_j).
  Vector delta_g;
};

/// Reduced symplectic partitioned RK step on T*S.
RsprkResult rsprk_step_full(const ReducedSystem& reduced, const ButcherTableau& tab,
                            const ReducedCotangentState& state, double h, const MomentumValue& mu);

ReducedCotangentState rsprk_step(const ReducedSystem& reduced, const ButcherTableau& tab,
                                 const ReducedCotangentState& state, double h, const MomentumValue& mu);

/// Symplectic form Omega_S - pi^* beta_mu at x as a matrix on (dx, ds).
Matrix reduced_symplectic_matrix(const ReducedSystem& reduced, const Vector& x, const MomentumValue& mu);

// Projection and lifting -----------------------------------------------------

/// Shape coordinates of q. Angular shape coordinates are left unwrapped.
Vector shape_of(const MechanicalSystem& system, const Vector& q);
/// Shape coordinates with angular components wrapped to (-pi, pi].
ShapePoint project_point(const MechanicalSystem& system, const ConfigPoint& q);

ShapeTrajectory project(const ConfigTrajectory& traj, const MechanicalSystem& system);

/// pi_mu(q, p) = (x, p_x - mu A(x)) with mu = p_g.
ReducedCotangentState project_cotangent(const MechanicalSystem& system, const ReducedSystem& reduced,
                                        const CotangentState& z);
ReducedTrajectory project(const CotangentTrajectory& traj, const MechanicalSystem& system,
                          const ReducedSystem& reduced);

/// Inverse of pi_mu at group value g.
CotangentState lift_cotangent(const MechanicalSystem& system, const ReducedSystem& reduced,
                              const ReducedCotangentState& z, const MomentumValue& mu, const Vector& g);

/// Full trajectory from a shape trajectory and a seed pair with J_d(q0, q1) = mu.
/// Throws MomentumMismatch when the seed violates the constraint beyond 1e-8.
ConfigTrajectory reconstruct(const ShapeTrajectory& shape_traj, const ConfigPoint& q0, const ConfigPoint& q1,
                             const DiscreteLagrangian& ld, const MechanicalSystem& system, const MomentumValue& mu);

// Seeding ----------------------------------------------------------------------

/// (q, p) with p = dL/dqdot(q, qdot).
CotangentState state_from_velocity(const MechanicalSystem& system, const Vector& q, const Vector& qdot);

/// Full state on the momentum level set mu over the shape state (x, xdot) at group value g:
/// gdot = I^-1 mu - A(x) xdot.
CotangentState state_from_reduced_velocity(const MechanicalSystem& system, const ReducedSystem& reduced,
                                           const Vector& x, const Vector& xdot, const MomentumValue& mu,
                                           const Vector& g);

/// Seed pair for the two-step methods: q0 from the state, q1 from one reference step.
struct DiscreteSeed {
  ConfigPoint q0;
  ConfigPoint q1;
};
DiscreteSeed discrete_seed(const MechanicalSystem& system, const CotangentState& state, double h);

// Drivers ----------------------------------------------------------------------

ShapeTrajectory run_dr(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform, const ShapePoint& x0,
                       const ShapePoint& x1, long steps);

/// RSPRK run; also accumulates the reconstructed group coordinate from g0.
ReducedTrajectory run_rsprk(const ReducedSystem& reduced, const ButcherTableau& tab,
                            const ReducedCotangentState& start, double h, const MomentumValue& mu, long steps,
                            const Vector& g0);

}  // namespace routh
