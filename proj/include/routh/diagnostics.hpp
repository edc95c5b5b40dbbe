#pragma once

#include "routh/discrete_lagrangian.hpp"
#include "routh/mechanical_system.hpp"
#include "routh/reduction.hpp"
#include "routh/sprk.hpp"
#include "routh/trajectory.hpp"

#include <functional>
#include <vector>

namespace routh {

// Energies -----------------------------------------------------------------------

/// E = qdot . dL/dqdot - L.
double energy(const MechanicalSystem& system, const Vector& q, const Vector& qdot);
/// Energy at a cotangent state.
double hamiltonian(const MechanicalSystem& system, const Vector& q, const Vector& p);
/// 1/2 s^T K(x)^-1 s + V_mu(x); equals the full energy on the level set.
double reduced_energy(const ReducedSystem& reduced, const Vector& x, const Vector& s, const MomentumValue& mu);

// Drift reports ------------------------------------------------------------------

struct DriftPoint {
  long step = 0;
  double t = 0.0;
  double value = 0.0;
};

struct DriftReport {
  std::vector<DriftPoint> series;
  double max_abs = 0.0;
  /// Least-squares slope of value against t, and its standard error.
  double linear_trend = 0.0;
  double trend_stderr = 0.0;
  /// False when the reference value was zero and the series is absolute.
  bool relative = true;
};

DriftReport make_drift_report(std::vector<DriftPoint> series, bool relative = true);

/// Relative drift (v_k - v_0) / v_0, or absolute drift if v_0 == 0.
DriftReport relative_drift(const std::vector<DriftPoint>& values);

/// Series of |J_d(q_k, q_k+1) - J_d(q_0, q_1)|_inf, one entry per pair.
DriftReport momentum_drift(const ConfigTrajectory& traj, const DiscreteLagrangian& ld, const MechanicalSystem& system);
/// Series of |p_g(k) - p_g(0)|_inf for a cotangent trajectory.
DriftReport momentum_drift(const CotangentTrajectory& traj, const MechanicalSystem& system);

DriftReport energy_drift(const CotangentTrajectory& traj, const MechanicalSystem& system);
DriftReport energy_drift(const ReducedTrajectory& traj, const ReducedSystem& reduced, const MomentumValue& mu);
/// Energy at q_k with p_k = D2 L_d(q_k-1, q_k), for k >= 1.
DriftReport energy_drift(const ConfigTrajectory& traj, const DiscreteLagrangian& ld);

// Symplecticity --------------------------------------------------------------------

/// Canonical matrix [[0, I], [-I, 0]] on (q, p).
Matrix canonical_form(int n);

/// |D phi^T Omega(phi(z)) D phi - Omega(z)|_inf with D phi by central differences,
/// step fd_scale (1 + |z_i|).
double symplectic_check(const VectorFunction& step_map, const Vector& z, const MatrixFunction& form_at,
                        double fd_scale = 1e-5);

// Commutation ---------------------------------------------------------------------

enum class MethodPair { DelDr, SprkRsprk };

struct CommutationReport {
  /// Distance between the projected unreduced run and the reduced run at each sample.
  std::vector<double> distance;
  double max_distance = 0.0;
  /// Present when either run stopped early.
  std::optional<std::string> failure;
};

/// Runs both sides of the pair from the same continuous state and compares them on
/// shape space (DEL/DR) or on T*S (SPRK/RSPRK). The DEL/DR seed is (q, one reference
/// step) with mu = J_d of the pair; SPRK/RSPRK uses pi_mu of the state.
CommutationReport commutation_check(const SystemPtr& system, const ReducedPtr& reduced, const CotangentState& seed,
                                    double h, long steps, MethodPair pair, int stages = 2);

// Convergence order ----------------------------------------------------------------

struct OrderReport {
  std::vector<double> step_sizes;
  std::vector<double> errors;
  double slope = 0.0;
};

/// Log-log least-squares slope of error_at(h) over h_list (strictly decreasing).
OrderReport convergence_order(const std::function<double(double)>& error_at, const std::vector<double>& h_list);

// Non-symplectic comparison method -------------------------------------------------

/// Classical explicit RK4 on qdot = v(q, p), pdot = dL/dq(q, v(q, p)).
CotangentState rk4_step(const MechanicalSystem& system, const CotangentState& state, double h);
CotangentTrajectory run_rk4(const MechanicalSystem& system, const CotangentState& start, double h, long steps);

}  // namespace routh
