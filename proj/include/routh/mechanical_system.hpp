#pragma once

#include "routh/core.hpp"

#include <memory>
#include <string>
#include <vector>

namespace routh {

/// Local trivialization Q ~ S x G in which the group acts by addition:
///   q = shape_basis * x + group_basis * g.
/// Both shipped systems are linear in these coordinates, so the split is a
/// constant change of basis.
class Trivialization {
 public:
  Trivialization() = default;
  Trivialization(Matrix shape_basis, Matrix group_basis);

  int config_dim() const { return static_cast<int>(shape_basis_.rows()); }
  int shape_dim() const { return static_cast<int>(shape_basis_.cols()); }
  int group_dim() const { return static_cast<int>(group_basis_.cols()); }

  /// Columns are dq/dx_i.
  const Matrix& shape_basis() const { return shape_basis_; }
  /// Columns are the infinitesimal generators xi_Q for unit Lie algebra elements.
  const Matrix& group_basis() const { return group_basis_; }

  Vector lift(const Vector& x, const Vector& g) const;
  Vector shape_of(const Vector& q) const;
  Vector group_of(const Vector& q) const;

  /// Cotangent vector at q split into (shape part, group part): p_x = E_x^T p, p_g = E_g^T p.
  Vector shape_covector(const Vector& p) const { return shape_basis_.transpose() * p; }
  Vector group_covector(const Vector& p) const { return group_basis_.transpose() * p; }
  /// Inverse of the split above.
  Vector assemble_covector(const Vector& p_x, const Vector& p_g) const;

 private:
  Matrix shape_basis_;
  Matrix group_basis_;
  Matrix shape_projector_;  // rows of [E_x E_g]^{-1}
  Matrix group_projector_;
};

/// A Lagrangian system L : TQ -> R written in one chart, with its symmetry data.
class MechanicalSystem {
 public:
  virtual ~MechanicalSystem() = default;

  virtual std::string name() const = 0;
  int dim() const { return triv_.config_dim(); }
  int group_dim() const { return triv_.group_dim(); }
  int shape_dim() const { return triv_.shape_dim(); }
  const Trivialization& trivialization() const { return triv_; }

  /// Indices of configuration coordinates moved by the group action.
  std::vector<int> group_indices() const;
  /// Configuration coordinates that are angles (compared modulo 2 pi).
  virtual std::vector<bool> angular_coords() const { return std::vector<bool>(dim(), false); }
  /// Shape coordinates that are angles; these are wrapped when reported.
  virtual std::vector<bool> angular_shape_coords() const { return std::vector<bool>(shape_dim(), false); }
  virtual std::vector<std::string> coord_names() const;
  virtual std::vector<std::string> shape_coord_names() const;

  /// Chart validity region (e.g. r > 0 in cylindrical coordinates).
  virtual bool in_chart(const Vector& q) const = 0;

  virtual double lagrangian(const Vector& q, const Vector& qdot) const = 0;
  virtual Vector dL_dq(const Vector& q, const Vector& qdot) const = 0;
  virtual Vector dL_dqdot(const Vector& q, const Vector& qdot) const = 0;
  /// d^2 L / d qdot^2.
  virtual Matrix mass_matrix(const Vector& q) const = 0;

  /// Inverse Legendre transform qdot(q, p).
  virtual Vector velocity(const Vector& q, const Vector& p) const;

  /// Continuous momentum map J_L(q, qdot) = FL(q, qdot) . xi_Q(q).
  Vector momentum_map(const Vector& q, const Vector& qdot) const;

 protected:
  explicit MechanicalSystem(Trivialization triv) : triv_(std::move(triv)) {}

 private:
  Trivialization triv_;
};

/// L = 1/2 qdot^T M(q) qdot - V(q). Supplies the Lagrangian partials from M, dM, V, dV.
class NaturalSystem : public MechanicalSystem {
 public:
  virtual double potential(const Vector& q) const = 0;
  virtual Vector potential_gradient(const Vector& q) const = 0;
  /// dM/dq_k for k = 0..n-1.
  virtual std::vector<Matrix> mass_matrix_derivatives(const Vector& q) const = 0;

  double lagrangian(const Vector& q, const Vector& qdot) const override;
  Vector dL_dq(const Vector& q, const Vector& qdot) const override;
  Vector dL_dqdot(const Vector& q, const Vector& qdot) const override;

 protected:
  using MechanicalSystem::MechanicalSystem;
};

/// The shape-space system obtained by Routh reduction at a fixed momentum.
/// Every method taking mu treats it as the fixed momentum level.
class ReducedSystem {
 public:
  virtual ~ReducedSystem() = default;

  virtual std::string name() const = 0;
  virtual int shape_dim() const = 0;
  virtual int group_dim() const = 0;
  virtual std::vector<bool> angular_shape_coords() const { return std::vector<bool>(shape_dim(), false); }
  virtual bool in_chart(const Vector& x) const = 0;

  /// Reduced Routhian R^mu(x, xdot).
  virtual double routhian_hat(const Vector& x, const Vector& xdot, const MomentumValue& mu) const = 0;
  virtual Vector dR_dx(const Vector& x, const Vector& xdot, const MomentumValue& mu) const = 0;
  virtual Vector dR_dxdot(const Vector& x, const Vector& xdot, const MomentumValue& mu) const = 0;
  /// d^2 R^mu / d xdot^2, used for the reduced Legendre inversion.
  virtual Matrix reduced_metric(const Vector& x) const = 0;

  /// Local connection: the mechanical connection reads dg + A(x) dx. Shape m x (n-m).
  virtual Matrix connection_A(const Vector& x) const = 0;
  /// dA/dx_i for i = 0..n-m-1, each m x (n-m).
  virtual std::vector<Matrix> connection_dA(const Vector& x) const = 0;
  /// Magnetic 2-form as an antisymmetric matrix B with beta(u, v) = u^T B v.
  virtual Matrix beta_mu(const Vector& x, const MomentumValue& mu) const = 0;
  virtual double amended_potential(const Vector& x, const MomentumValue& mu) const = 0;
  /// Locked inertia tensor, m x m.
  virtual Matrix locked_inertia(const Vector& x) const = 0;

  /// Reduced Legendre inversion xdot = K(x)^{-1} s.
  Vector shape_velocity(const Vector& x, const Vector& s) const;
  /// Group velocity on the momentum level set: gdot = I^{-1} mu - A(x) xdot.
  Vector group_velocity(const Vector& x, const Vector& xdot, const MomentumValue& mu) const;
  /// mu . A(x) as a shape covector.
  Vector mu_A(const Vector& x, const MomentumValue& mu) const;
  /// mu . (dA/dx . v): the covector with components sum_i v_i mu . dA_k/dx_i.
  Vector mu_dA_along(const Vector& x, const Vector& v, const MomentumValue& mu) const;
};

using SystemPtr = std::shared_ptr<const MechanicalSystem>;
using ReducedPtr = std::shared_ptr<const ReducedSystem>;

}  // namespace routh
