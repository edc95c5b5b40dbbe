#include "routh/reduction.hpp"

#include <cmath>

namespace routh {

// ReducedDiscreteLagrangian ----------------------------------------------------

ReducedDiscreteLagrangian::ReducedDiscreteLagrangian(DiscreteLagrangianPtr ld, MomentumValue mu)
    : ld_(std::move(ld)), mu_(std::move(mu)) {
  if (!ld_) throw Error("reduced discrete Lagrangian requires a discrete Lagrangian");
  if (mu_.size() != ld_->system().group_dim()) throw Error("momentum value has the wrong dimension");
  require_finite(mu_.mu, "momentum value");
}

LiftedPair ReducedDiscreteLagrangian::lift(const Vector& x0, const Vector& x1,
                                           const std::optional<Vector>& dg_guess) const {
  const auto& triv = system().trivialization();
  const int m = triv.group_dim();
  LiftedPair pair;
  pair.q0 = triv.lift(x0, Vector::Zero(m));
  const Vector base1 = triv.lift(x1, Vector::Zero(m));
  auto residual = [&](const Vector& dg) -> Vector {
    return triv.group_covector(ld_->d2(pair.q0, base1 + triv.group_basis() * dg)) - mu_.mu;
  };
  pair.dg = newton_iterate(residual, nullptr, dg_guess ? *dg_guess : Vector(Vector::Zero(m))).x;
  pair.q1 = base1 + triv.group_basis() * pair.dg;
  return pair;
}

double ReducedDiscreteLagrangian::eval(const Vector& x0, const Vector& x1) const {
  const LiftedPair pair = lift(x0, x1);
  return ld_->eval(pair.q0, pair.q1);
}

Vector ReducedDiscreteLagrangian::d1_fixed(const LiftedPair& pair) const {
  return system().trivialization().shape_covector(ld_->d1(pair.q0, pair.q1));
}

Vector ReducedDiscreteLagrangian::d2_fixed(const LiftedPair& pair) const {
  return system().trivialization().shape_covector(ld_->d2(pair.q0, pair.q1));
}

std::pair<Matrix, Matrix> ReducedDiscreteLagrangian::delta_g_jacobians(const LiftedPair& pair) const {
  const auto& triv = system().trivialization();
  const Vector x0 = triv.shape_of(pair.q0);
  const Vector x1 = triv.shape_of(pair.q1);
  const int d = triv.shape_dim();
  const int m = triv.group_dim();
  // Phi(x0, x1, dg) = J_d((x0, 0), (x1, dg)) - mu
  auto phi = [&](const Vector& z) -> Vector {
    const Vector q0 = triv.lift(z.head(d), Vector::Zero(m));
    const Vector q1 = triv.lift(z.segment(d, d), z.tail(m));
    return triv.group_covector(ld_->d2(q0, q1));
  };
  Vector z(2 * d + m);
  z << x0, x1, pair.dg;
  const Matrix jac = fd_jacobian(phi, z);
  Eigen::PartialPivLU<Matrix> lu(jac.rightCols(m));
  if (!(lu.rcond() > 1e-15)) throw SingularJacobian("momentum constraint is not group-regular here");
  const Matrix d0 = -lu.solve(jac.leftCols(d));
  const Matrix d1 = -lu.solve(jac.middleCols(d, d));
  return {d0, d1};
}

Vector ReducedDiscreteLagrangian::d1(const Vector& x0, const Vector& x1) const {
  const LiftedPair pair = lift(x0, x1);
  return d1_fixed(pair) + delta_g_jacobians(pair).first.transpose() * mu_.mu;
}

Vector ReducedDiscreteLagrangian::d2(const Vector& x0, const Vector& x1) const {
  const LiftedPair pair = lift(x0, x1);
  return d2_fixed(pair) + delta_g_jacobians(pair).second.transpose() * mu_.mu;
}

ReducedDiscreteLagrangian reduce_lagrangian(DiscreteLagrangianPtr ld, const MomentumValue& mu) {
  return ReducedDiscreteLagrangian(std::move(ld), mu);
}

// ConnectionOneForm --------------------------------------------------------------

ConnectionOneForm::ConnectionOneForm(ReducedDiscreteLagrangian lhat, ReducedPtr reduced)
    : lhat_(std::move(lhat)), reduced_(std::move(reduced)) {
  if (!reduced_) throw Error("connection one-form requires a reduced system");
  if (reduced_->shape_dim() != lhat_.system().shape_dim()) throw Error("reduced system does not match the system");
}

Vector ConnectionOneForm::horizontal1(const Vector& x0) const { return -reduced_->mu_A(x0, lhat_.mu()); }

Vector ConnectionOneForm::horizontal2(const Vector& x1) const { return reduced_->mu_A(x1, lhat_.mu()); }

Vector ConnectionOneForm::A1(const Vector& x0, const Vector& x1) const {
  const auto jac = lhat_.delta_g_jacobians(lhat_.lift(x0, x1));
  return jac.first.transpose() * lhat_.mu().mu + horizontal1(x0);
}

Vector ConnectionOneForm::A2(const Vector& x0, const Vector& x1) const {
  const auto jac = lhat_.delta_g_jacobians(lhat_.lift(x0, x1));
  return jac.second.transpose() * lhat_.mu().mu + horizontal2(x1);
}

// Reduced Legendre transforms and the DR step -------------------------------------

namespace {

// D2 L^_d - A^_2 at a lifted pair (the d(dg) terms cancel).
Vector plus_transform(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform, const LiftedPair& pair,
                      const Vector& x1) {
  return lhat.d2_fixed(pair) - aform.horizontal2(x1);
}

// D1 L^_d - A^_1 at a lifted pair.
Vector minus_residual(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform, const LiftedPair& pair,
                      const Vector& x0) {
  return lhat.d1_fixed(pair) - aform.horizontal1(x0);
}

void check_shape_chart(const ReducedDiscreteLagrangian& lhat, const Vector& x, const char* who) {
  const auto& sys = lhat.system();
  const Vector q = sys.trivialization().lift(x, Vector::Zero(sys.group_dim()));
  if (!x.allFinite() || !sys.in_chart(q)) throw StepRejected(std::string(who) + ": shape point leaves the chart");
}

}  // namespace

ShapePoint dr_step(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform, const ShapePoint& x_prev,
                   const ShapePoint& x_cur, const std::optional<ShapePoint>& guess) {
  const Vector& xp = x_prev.coords;
  const Vector& xc = x_cur.coords;
  const LiftedPair back = lhat.lift(xp, xc);
  const Vector s_cur = plus_transform(lhat, aform, back, xc);
  require_finite(s_cur, "dr_step");
  const Vector start = guess ? guess->coords : Vector(2.0 * xc - xp);
  auto residual = [&](const Vector& xn) -> Vector {
    return s_cur + minus_residual(lhat, aform, lhat.lift(xc, xn, back.dg), xc);
  };
  Vector xn = newton_iterate(residual, nullptr, start).x;
  check_shape_chart(lhat, xn, "dr_step");
  return ShapePoint(std::move(xn));
}

ReducedCotangentState reduced_legendre(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform,
                                       const Vector& x0, const Vector& x1) {
  return {x1, plus_transform(lhat, aform, lhat.lift(x0, x1), x1)};
}

Vector reduced_legendre_minus(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform,
                              const Vector& x0, const Vector& x1) {
  return -minus_residual(lhat, aform, lhat.lift(x0, x1), x0);
}

ShapePoint inverse_reduced_legendre(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform,
                                    const ReducedCotangentState& state) {
  const Vector& x0 = state.x;
  const Vector start = x0 + lhat.h() * aform.reduced().shape_velocity(x0, state.s);
  auto residual = [&](const Vector& x1) -> Vector {
    return state.s + minus_residual(lhat, aform, lhat.lift(x0, x1), x0);
  };
  Vector x1 = newton_iterate(residual, nullptr, start).x;
  check_shape_chart(lhat, x1, "inverse_reduced_legendre");
  return ShapePoint(std::move(x1));
}

// RSPRK ----------------------------------------------------------------------------

RsprkResult rsprk_step_full(const ReducedSystem& reduced, const ButcherTableau& tab,
                            const ReducedCotangentState& state, double h, const MomentumValue& mu) {
  const int d = reduced.shape_dim();
  const int s = tab.s;
  const Vector& x0 = state.x;
  const Vector& s0 = state.s;
  const Vector mu_a0 = reduced.mu_A(x0, mu);

  auto stage_positions = [&](const Vector& xd) {
    Matrix xs(d, s);
    for (int i = 0; i < s; ++i) {
      Vector xi = x0;
      for (int j = 0; j < s; ++j) xi += h * tab.a(i, j) * xd.segment(j * d, d);
      xs.col(i) = xi;
    }
    return xs;
  };
  // Sdot_j + mu dA(X_j) Xdot_j with Sdot = dR/dx - i_Xdot beta.
  auto stage_forces = [&](const Matrix& xs, const Vector& xd) {
    Matrix fs(d, s);
    for (int j = 0; j < s; ++j) {
      const Vector xj = xs.col(j);
      const Vector vj = xd.segment(j * d, d);
      fs.col(j) = reduced.dR_dx(xj, vj, mu) - reduced.beta_mu(xj, mu).transpose() * vj +
                  reduced.mu_dA_along(xj, vj, mu);
    }
    return fs;
  };
  auto residual = [&](const Vector& xd) -> Vector {
    const Matrix xs = stage_positions(xd);
    const Matrix fs = stage_forces(xs, xd);
    Vector r(d * s);
    for (int i = 0; i < s; ++i) {
      const Vector xi = xs.col(i);
      Vector ri = reduced.dR_dxdot(xi, xd.segment(i * d, d), mu) - s0 + (reduced.mu_A(xi, mu) - mu_a0);
      for (int j = 0; j < s; ++j) ri -= h * tab.a_tilde(i, j) * fs.col(j);
      r.segment(i * d, d) = ri;
    }
    return r;
  };

  const Vector v0 = reduced.shape_velocity(x0, s0);
  require_finite(v0, "rsprk_step initial velocity");
  const Vector xd = newton_iterate(residual, nullptr, v0.replicate(s, 1)).x;

  const Matrix xs = stage_positions(xd);
  const Matrix fs = stage_forces(xs, xd);
  RsprkResult out{{x0, s0}, Vector::Zero(reduced.group_dim())};
  for (int j = 0; j < s; ++j) {
    const Vector xj = xs.col(j);
    const Vector vj = xd.segment(j * d, d);
    out.state.x += h * tab.b[j] * vj;
    out.state.s += h * tab.b_tilde[j] * fs.col(j);
    out.delta_g += h * tab.b[j] * reduced.group_velocity(xj, vj, mu);
  }
  if (!out.state.x.allFinite() || !reduced.in_chart(out.state.x)) {
    throw StepRejected("rsprk_step: shape point leaves the chart");
  }
  out.state.s -= reduced.mu_A(out.state.x, mu) - mu_a0;
  require_finite(out.state.s, "rsprk_step");
  return out;
}

ReducedCotangentState rsprk_step(const ReducedSystem& reduced, const ButcherTableau& tab,
                                 const ReducedCotangentState& state, double h, const MomentumValue& mu) {
  return rsprk_step_full(reduced, tab, state, h, mu).state;
}

Matrix reduced_symplectic_matrix(const ReducedSystem& reduced, const Vector& x, const MomentumValue& mu) {
  const int d = reduced.shape_dim();
  Matrix omega = Matrix::Zero(2 * d, 2 * d);
  omega.topLeftCorner(d, d) = -reduced.beta_mu(x, mu);
  omega.topRightCorner(d, d) = Matrix::Identity(d, d);
  omega.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
  return omega;
}

// Projection and lifting --------------------------------------------------------------

Vector shape_of(const MechanicalSystem& system, const Vector& q) { return system.trivialization().shape_of(q); }

namespace {

Vector wrap_shape(const std::vector<bool>& angular, Vector x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (angular[i]) x[i] = wrap_angle(x[i]);
  }
  return x;
}

}  // namespace

ShapePoint project_point(const MechanicalSystem& system, const ConfigPoint& q) {
  return ShapePoint(wrap_shape(system.angular_shape_coords(), shape_of(system, q.coords)));
}

ShapeTrajectory project(const ConfigTrajectory& traj, const MechanicalSystem& system) {
  ShapeTrajectory out;
  out.meta = traj.meta;
  out.failure = traj.failure;
  for (const auto& smp : traj.samples) out.samples.push_back({smp.step, smp.t, project_point(system, smp.state)});
  return out;
}

ReducedCotangentState project_cotangent(const MechanicalSystem& system, const ReducedSystem& reduced,
                                        const CotangentState& z) {
  const auto& triv = system.trivialization();
  const MomentumValue mu(triv.group_covector(z.p));
  const Vector x = wrap_shape(system.angular_shape_coords(), triv.shape_of(z.q));
  return {x, triv.shape_covector(z.p) - reduced.mu_A(x, mu)};
}

ReducedTrajectory project(const CotangentTrajectory& traj, const MechanicalSystem& system,
                          const ReducedSystem& reduced) {
  ReducedTrajectory out;
  out.meta = traj.meta;
  out.failure = traj.failure;
  for (const auto& smp : traj.samples) {
    out.samples.push_back({smp.step, smp.t, project_cotangent(system, reduced, smp.state)});
  }
  return out;
}

CotangentState lift_cotangent(const MechanicalSystem& system, const ReducedSystem& reduced,
                              const ReducedCotangentState& z, const MomentumValue& mu, const Vector& g) {
  const auto& triv = system.trivialization();
  return {triv.lift(z.x, g), triv.assemble_covector(z.s + reduced.mu_A(z.x, mu), mu.mu)};
}

ConfigTrajectory reconstruct(const ShapeTrajectory& shape_traj, const ConfigPoint& q0, const ConfigPoint& q1,
                             const DiscreteLagrangian& ld, const MechanicalSystem& system, const MomentumValue& mu) {
  const auto& triv = system.trivialization();
  const auto angular = system.angular_shape_coords();
  ConfigTrajectory out;
  out.meta = shape_traj.meta;
  out.meta.method = "reconstruct";
  out.failure = shape_traj.failure;
  if (shape_traj.empty()) return out;

  auto check_seed = [&](const ConfigPoint& q, const ShapePoint& x) {
    if (periodic_difference(triv.shape_of(q.coords), x.coords, angular).lpNorm<Eigen::Infinity>() > 1e-8) {
      throw MomentumMismatch("reconstruct: seed configuration does not project to the shape trajectory");
    }
  };
  check_seed(q0, shape_traj[0]);
  out.samples.push_back({shape_traj.samples[0].step, shape_traj.samples[0].t, q0});
  out.group.emplace_back(triv.group_of(q0.coords));
  if (shape_traj.size() < 2) return out;

  check_seed(q1, shape_traj[1]);
  const Vector j01 = discrete_momentum(ld, q0, q1, system).mu;
  if ((j01 - mu.mu).lpNorm<Eigen::Infinity>() > 1e-8) {
    throw MomentumMismatch("reconstruct: seed pair does not lie on the momentum level set");
  }
  out.samples.push_back({shape_traj.samples[1].step, shape_traj.samples[1].t, q1});
  out.group.emplace_back(triv.group_of(q1.coords));

  Vector q_prev = q1.coords;
  Vector x_prev = triv.shape_of(q1.coords);
  Vector g_prev = triv.group_of(q1.coords);
  Vector dg = g_prev - triv.group_of(q0.coords);
  for (std::size_t k = 2; k < shape_traj.size(); ++k) {
    const Vector x = x_prev + periodic_difference(shape_traj[k].coords, x_prev, angular);
    auto residual = [&](const Vector& step) -> Vector {
      return triv.group_covector(ld.d2(q_prev, triv.lift(x, g_prev + step))) - mu.mu;
    };
    try {
      NewtonOptions opts;
      opts.scale = q_prev.lpNorm<Eigen::Infinity>() + g_prev.lpNorm<Eigen::Infinity>();
      dg = newton_iterate(residual, nullptr, dg, opts).x;
    } catch (const Error& e) {
      out.failure = e.what();
      break;
    }
    g_prev += dg;
    q_prev = triv.lift(x, g_prev);
    x_prev = x;
    out.samples.push_back({shape_traj.samples[k].step, shape_traj.samples[k].t, ConfigPoint(q_prev, q0.chart_id)});
    out.group.emplace_back(g_prev);
  }
  return out;
}

// Seeding ---------------------------------------------------------------------------------

CotangentState state_from_velocity(const MechanicalSystem& system, const Vector& q, const Vector& qdot) {
  return {q, system.dL_dqdot(q, qdot)};
}

CotangentState state_from_reduced_velocity(const MechanicalSystem& system, const ReducedSystem& reduced,
                                           const Vector& x, const Vector& xdot, const MomentumValue& mu,
                                           const Vector& g) {
  const auto& triv = system.trivialization();
  const Vector q = triv.lift(x, g);
  const Vector qdot = triv.lift(xdot, reduced.group_velocity(x, xdot, mu));
  return state_from_velocity(system, q, qdot);
}

DiscreteSeed discrete_seed(const MechanicalSystem& system, const CotangentState& state, double h) {
  return {ConfigPoint(state.q), ConfigPoint(reference_step(system, state, h).q)};
}

// Drivers --------------------------------------------------------------------------------

ShapeTrajectory run_dr(const ReducedDiscreteLagrangian& lhat, const ConnectionOneForm& aform, const ShapePoint& x0,
                       const ShapePoint& x1, long steps) {
  ShapeTrajectory traj;
  traj.meta.system = lhat.system().name();
  traj.meta.method = "dr";
  traj.meta.h = lhat.h();
  traj.push(0, x0);
  if (steps < 1) return traj;
  traj.push(1, x1);
  for (long k = 2; k <= steps; ++k) {
    try {
      traj.push(k, dr_step(lhat, aform, traj.samples[k - 2].state, traj.samples[k - 1].state));
    } catch (const Error& e) {
      traj.failure = e.what();
      break;
    }
  }
  return traj;
}

ReducedTrajectory run_rsprk(const ReducedSystem& reduced, const ButcherTableau& tab,
                            const ReducedCotangentState& start, double h, const MomentumValue& mu, long steps,
                            const Vector& g0) {
  ReducedTrajectory traj;
  traj.meta.system = reduced.name();
  traj.meta.method = "rsprk";
  traj.meta.h = h;
  traj.push(0, start);
  traj.group.emplace_back(g0);
  Vector g = g0;
  for (long k = 1; k <= steps; ++k) {
    try {
      RsprkResult r = rsprk_step_full(reduced, tab, traj.back(), h, mu);
      g += r.delta_g;
      traj.push(k, std::move(r.state));
      traj.group.emplace_back(g);
    } catch (const Error& e) {
      traj.failure = e.what();
      break;
    }
  }
  return traj;
}

}  // namespace routh
