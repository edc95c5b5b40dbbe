#pragma once

#include "routh/mechanical_system.hpp"

#include <memory>

namespace routh {

// ---------------------------------------------------------------------------
// Satellite about an oblate Earth, cylindrical coordinates (r, theta, z).
// Nondimensional: Earth radius 1, zero-altitude circular period 2 pi at J2 = 0.
// ---------------------------------------------------------------------------

class SatelliteJ2 final : public NaturalSystem {
 public:
  explicit SatelliteJ2(double j2);

  double j2() const { return j2_; }

  std::string name() const override { return "satellite"; }
  std::vector<bool> angular_coords() const override { return {false, true, false}; }
  std::vector<std::string> coord_names() const override { return {"r", "theta", "z"}; }
  std::vector<std::string> shape_coord_names() const override { return {"r", "z"}; }
  bool in_chart(const Vector& q) const override;

  Matrix mass_matrix(const Vector& q) const override;
  std::vector<Matrix> mass_matrix_derivatives(const Vector& q) const override;
  double potential(const Vector& q) const override;
  Vector potential_gradient(const Vector& q) const override;
  Vector velocity(const Vector& q, const Vector& p) const override;

  /// Attractive gravitational potential V(r, z) including the J2 term.
  double gravity(double r, double z) const;
  /// (dV/dr, dV/dz).
  Eigen::Vector2d gravity_gradient(double r, double z) const;

 private:
  double j2_;
};

class SatelliteReduced final : public ReducedSystem {
 public:
  explicit SatelliteReduced(double j2) : full_(j2) {}

  std::string name() const override { return "satellite"; }
  int shape_dim() const override { return 2; }
  int group_dim() const override { return 1; }
  bool in_chart(const Vector& x) const override { return x.size() == 2 && x.allFinite() && x[0] > 0.0; }

  double routhian_hat(const Vector& x, const Vector& xdot, const MomentumValue& mu) const override;
  Vector dR_dx(const Vector& x, const Vector& xdot, const MomentumValue& mu) const override;
  Vector dR_dxdot(const Vector& x, const Vector& xdot, const MomentumValue& mu) const override;
  Matrix reduced_metric(const Vector& x) const override;
  Matrix connection_A(const Vector& x) const override;
  std::vector<Matrix> connection_dA(const Vector& x) const override;
  Matrix beta_mu(const Vector& x, const MomentumValue& mu) const override;
  double amended_potential(const Vector& x, const MomentumValue& mu) const override;
  Matrix locked_inertia(const Vector& x) const override;

 private:
  SatelliteJ2 full_;
};

std::shared_ptr<const SatelliteJ2> satellite_system(double j2);
std::shared_ptr<const SatelliteReduced> satellite_reduced(double j2);

// ---------------------------------------------------------------------------
// Double spherical pendulum, coordinates (r1, theta1, r2, theta2) with the
// rod constraints substituted as z_i = sqrt(l_i^2 - r_i^2). The second bob is
// positioned relative to the first. Shape coordinates (r1, r2, phi),
// phi = theta2 - theta1; group coordinate theta1.
// ---------------------------------------------------------------------------

struct DspParams {
  double m1 = 1.0;
  double m2 = 1.0;
  double l1 = 1.0;
  double l2 = 1.0;
  double g = 9.8;

  void validate() const;
};

class DoubleSphericalPendulum final : public NaturalSystem {
 public:
  explicit DoubleSphericalPendulum(DspParams params);

  const DspParams& params() const { return p_; }

  std::string name() const override { return "dsp"; }
  std::vector<bool> angular_coords() const override { return {false, true, false, true}; }
  std::vector<bool> angular_shape_coords() const override { return {false, false, true}; }
  std::vector<std::string> coord_names() const override { return {"r1", "theta1", "r2", "theta2"}; }
  std::vector<std::string> shape_coord_names() const override { return {"r1", "r2", "phi"}; }
  bool in_chart(const Vector& q) const override;

  Matrix mass_matrix(const Vector& q) const override;
  std::vector<Matrix> mass_matrix_derivatives(const Vector& q) const override;
  double potential(const Vector& q) const override;
  Vector potential_gradient(const Vector& q) const override;

  /// Throws SingularConfiguration outside 0 < r_i < l_i.
  void check_radii(double r1, double r2) const;
  /// Heights below the pivots, z_i = sqrt(l_i^2 - r_i^2).
  double z1(double r1) const;
  double z2(double r2) const;

  /// Kinetic energy evaluated from the Cartesian bob velocities.
  double cartesian_kinetic_energy(const Vector& q, const Vector& qdot) const;

 private:
  DspParams p_;
};

class DspReduced final : public ReducedSystem {
 public:
  explicit DspReduced(DspParams params) : full_(params) {}

  const DoubleSphericalPendulum& full() const { return full_; }

  std::string name() const override { return "dsp"; }
  int shape_dim() const override { return 3; }
  int group_dim() const override { return 1; }
  std::vector<bool> angular_shape_coords() const override { return {false, false, true}; }
  bool in_chart(const Vector& x) const override;

  double routhian_hat(const Vector& x, const Vector& xdot, const MomentumValue& mu) const override;
  Vector dR_dx(const Vector& x, const Vector& xdot, const MomentumValue& mu) const override;
  Vector dR_dxdot(const Vector& x, const Vector& xdot, const MomentumValue& mu) const override;
  Matrix reduced_metric(const Vector& x) const override;
  Matrix connection_A(const Vector& x) const override;
  std::vector<Matrix> connection_dA(const Vector& x) const override;
  Matrix beta_mu(const Vector& x, const MomentumValue& mu) const override;
  double amended_potential(const Vector& x, const MomentumValue& mu) const override;
  Matrix locked_inertia(const Vector& x) const override;

  // Geometric data in closed form. Shape ordering is (r1, r2, phi).

  /// I = m1 r1^2 + m2 (r1^2 + r2^2 + 2 r1 r2 cos phi).
  double inertia(const Vector& x) const;
  /// Gradient of the locked inertia with respect to (r1, r2, phi).
  Eigen::Vector3d inertia_gradient(const Vector& x) const;
  /// Scalar c with beta_mu = c dphi ^ (r2 dr1 - r1 dr2); equals d(mu A).
  double beta_coefficient(const Vector& x, double mu) const;
  /// The coefficient as printed in the literature. It does not equal d(mu A);
  /// kept for reference and tested as such.
  double printed_beta_coefficient(const Vector& x, double mu) const;

  /// Mechanical connection evaluated on a velocity of (r1, theta1, r2, theta2).
  double connection(const Vector& q, const Vector& qdot) const;
  /// Momentum map J_L = I * connection.
  double momentum(const Vector& q, const Vector& qdot) const;
  /// mu-component alpha_mu as a covector on (r1, theta1, r2, theta2).
  Vector alpha_mu(const Vector& q, double mu) const;

  /// Kinetic metric on (r1, theta1, z1, r2, theta2, z2) velocities.
  Matrix kinetic_metric6(const Vector& q) const;
  /// The 6x6 metric as printed, which lacks the m2 zdot1 zdot2 cross term.
  Matrix printed_kinetic_metric6(const Vector& q) const;
  /// (rdot1, thetadot1, zdot1, rdot2, thetadot2, zdot2) from a 4-velocity.
  Vector embed_velocity6(const Vector& q, const Vector& qdot) const;
  /// Horizontal part of a 4-velocity: v - xi_Q(alpha(v)).
  Vector horizontal(const Vector& q, const Vector& qdot) const;

 private:
  // Horizontal lift of xdot at a representative configuration with theta1 = 0.
  Vector horizontal_lift(const Vector& x, const Vector& xdot) const;
  Vector representative(const Vector& x) const;

  DoubleSphericalPendulum full_;
};

std::shared_ptr<const DoubleSphericalPendulum> dsp_system(const DspParams& params);
std::shared_ptr<const DspReduced> dsp_reduced(const DspParams& params);

// ---------------------------------------------------------------------------
// Elementary systems without symmetry, used for checks.
// ---------------------------------------------------------------------------

class FreeParticle final : public NaturalSystem {
 public:
  explicit FreeParticle(int n);
  std::string name() const override { return "free_particle"; }
  bool in_chart(const Vector& q) const override { return q.allFinite(); }
  Matrix mass_matrix(const Vector& q) const override;
  std::vector<Matrix> mass_matrix_derivatives(const Vector& q) const override;
  double potential(const Vector&) const override { return 0.0; }
  Vector potential_gradient(const Vector& q) const override { return Vector::Zero(q.size()); }
};

/// L = 1/2 qdot^2 - 1/2 q^2 in one dimension.
class HarmonicOscillator final : public NaturalSystem {
 public:
  HarmonicOscillator();
  std::string name() const override { return "harmonic_oscillator"; }
  bool in_chart(const Vector& q) const override { return q.allFinite(); }
  Matrix mass_matrix(const Vector& q) const override;
  std::vector<Matrix> mass_matrix_derivatives(const Vector& q) const override;
  double potential(const Vector& q) const override { return 0.5 * q.squaredNorm(); }
  Vector potential_gradient(const Vector& q) const override { return q; }
};

}  // namespace routh
