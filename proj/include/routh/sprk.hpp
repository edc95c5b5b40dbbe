#pragma once

#include "routh/mechanical_system.hpp"
#include "routh/trajectory.hpp"

namespace routh {

/// Partitioned Runge-Kutta coefficients: (a, b) act on positions, (a_tilde, b_tilde) on momenta.
struct ButcherTableau {
  int s = 0;
  Matrix a;
  Vector b;
  Matrix a_tilde;
  Vector b_tilde;
  int order = 0;
};

/// s = 1: implicit midpoint (order 2). s = 2: two-stage Gauss-Legendre (order 4).
ButcherTableau gauss_tableau(int s);

/// Classical explicit RK4 coefficients, used for both partitions.
ButcherTableau classical_rk4_tableau();

/// b_i a~_ij + b~_j a_ji = b_i b~_j for all i, j, and b = b~, each to 1e-14.
bool check_symplecticity(const ButcherTableau& tab);

/// One step of the partitioned RK method applied to the Hamiltonian flow of the
/// system's Legendre-transformed Lagrangian. The stages are written in velocity
/// form, P_i = dL/dqdot(Q_i, V_i), and solved as one coupled Newton system.
CotangentState sprk_step(const MechanicalSystem& system, const ButcherTableau& tab, const CotangentState& state,
                         double h);

/// SPRK with the order-4 tableau over n substeps of h / n.
CotangentState reference_step(const MechanicalSystem& system, const CotangentState& state, double h,
                              int substeps = 16);

CotangentTrajectory run_sprk(const MechanicalSystem& system, const ButcherTableau& tab, const CotangentState& start,
                             double h, long steps);

}  // namespace routh
