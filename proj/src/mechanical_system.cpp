#include "routh/mechanical_system.hpp"

#include <cassert>

namespace routh {

Trivialization::Trivialization(Matrix shape_basis, Matrix group_basis)
    : shape_basis_(std::move(shape_basis)), group_basis_(std::move(group_basis)) {
  const auto n = shape_basis_.rows();
  if (group_basis_.rows() != n || shape_basis_.cols() + group_basis_.cols() != n) {
    throw Error("trivialization bases do not span the configuration space");
  }
  Matrix full(n, n);
  full << shape_basis_, group_basis_;
  Eigen::FullPivLU<Matrix> lu(full);
  if (!lu.isInvertible()) throw Error("trivialization bases are linearly dependent");
  const Matrix inv = lu.inverse();
  shape_projector_ = inv.topRows(shape_basis_.cols());
  group_projector_ = inv.bottomRows(group_basis_.cols());
}

Vector Trivialization::lift(const Vector& x, const Vector& g) const {
  return shape_basis_ * x + group_basis_ * g;
}

Vector Trivialization::shape_of(const Vector& q) const { return shape_projector_ * q; }

Vector Trivialization::group_of(const Vector& q) const { return group_projector_ * q; }

Vector Trivialization::assemble_covector(const Vector& p_x, const Vector& p_g) const {
  // p = [E_x E_g]^{-T} (p_x, p_g)
  Vector stacked(p_x.size() + p_g.size());
  stacked << p_x, p_g;
  Matrix proj(shape_projector_.rows() + group_projector_.rows(), shape_projector_.cols());
  proj << shape_projector_, group_projector_;
  return proj.transpose() * stacked;
}

std::vector<int> MechanicalSystem::group_indices() const {
  std::vector<int> idx;
  const Matrix& eg = triv_.group_basis();
  for (int i = 0; i < dim(); ++i) {
    if (eg.row(i).cwiseAbs().maxCoeff() > 0.0) idx.push_back(i);
  }
  return idx;
}

std::vector<std::string> MechanicalSystem::coord_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < dim(); ++i) names.push_back("q" + std::to_string(i));
  return names;
}

std::vector<std::string> MechanicalSystem::shape_coord_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < shape_dim(); ++i) names.push_back("x" + std::to_string(i));
  return names;
}

Vector MechanicalSystem::velocity(const Vector& q, const Vector& p) const {
  return lu_solve(mass_matrix(q), p);
}

Vector MechanicalSystem::momentum_map(const Vector& q, const Vector& qdot) const {
  return triv_.group_basis().transpose() * dL_dqdot(q, qdot);
}

double NaturalSystem::lagrangian(const Vector& q, const Vector& qdot) const {
  return 0.5 * qdot.dot(mass_matrix(q) * qdot) - potential(q);
}

Vector NaturalSystem::dL_dq(const Vector& q, const Vector& qdot) const {
  const auto dm = mass_matrix_derivatives(q);
  Vector g = -potential_gradient(q);
  for (int k = 0; k < dim(); ++k) g[k] += 0.5 * qdot.dot(dm[k] * qdot);
  return g;
}

Vector NaturalSystem::dL_dqdot(const Vector& q, const Vector& qdot) const { return mass_matrix(q) * qdot; }

Vector ReducedSystem::shape_velocity(const Vector& x, const Vector& s) const {
  return lu_solve(reduced_metric(x), s);
}

Vector ReducedSystem::group_velocity(const Vector& x, const Vector& xdot, const MomentumValue& mu) const {
  return lu_solve(locked_inertia(x), mu.mu) - connection_A(x) * xdot;
}

Vector ReducedSystem::mu_A(const Vector& x, const MomentumValue& mu) const {
  return connection_A(x).transpose() * mu.mu;
}

Vector ReducedSystem::mu_dA_along(const Vector& x, const Vector& v, const MomentumValue& mu) const {
  const auto da = connection_dA(x);
  Vector out = Vector::Zero(shape_dim());
  for (int i = 0; i < shape_dim(); ++i) out += v[i] * (da[i].transpose() * mu.mu);
  return out;
}

}  // namespace routh
