#include "routh/sprk.hpp"

#include <cmath>

namespace routh {

ButcherTableau gauss_tableau(int s) {
  ButcherTableau t;
  t.s = s;
  if (s == 1) {
    t.a = Matrix::Constant(1, 1, 0.5);
    t.b = Vector::Ones(1);
    t.order = 2;
  } else if (s == 2) {
    const double r = std::sqrt(3.0) / 6.0;
    t.a.resize(2, 2);
    t.a << 0.25, 0.25 - r,  //
        0.25 + r, 0.25;
    t.b = Vector::Constant(2, 0.5);
    t.order = 4;
  } else {
    throw UnsupportedStageCount("Gauss tableau available for s = 1 or 2 only, got " + std::to_string(s));
  }
  t.a_tilde = t.a;
  t.b_tilde = t.b;
  return t;
}

ButcherTableau classical_rk4_tableau() {
  ButcherTableau t;
  t.s = 4;
  t.a = Matrix::Zero(4, 4);
  t.a(1, 0) = 0.5;
  t.a(2, 1) = 0.5;
  t.a(3, 2) = 1.0;
  t.b.resize(4);
  t.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
  t.a_tilde = t.a;
  t.b_tilde = t.b;
  t.order = 4;
  return t;
}

bool check_symplecticity(const ButcherTableau& tab) {
  constexpr double tol = 1e-14;
  const int s = tab.s;
  if (tab.a.rows() != s || tab.a.cols() != s || tab.a_tilde.rows() != s || tab.a_tilde.cols() != s ||
      tab.b.size() != s || tab.b_tilde.size() != s) {
    return false;
  }
  if ((tab.b - tab.b_tilde).lpNorm<Eigen::Infinity>() > tol) return false;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double c = tab.b[i] * tab.a_tilde(i, j) + tab.b_tilde[j] * tab.a(j, i) - tab.b[i] * tab.b_tilde[j];
      if (std::abs(c) > tol) return false;
    }
  }
  return true;
}

CotangentState sprk_step(const MechanicalSystem& system, const ButcherTableau& tab, const CotangentState& state,
                         double h) {
  const int n = system.dim();
  const int s = tab.s;
  const Vector& q0 = state.q;
  const Vector& p0 = state.p;

  // Unknowns: stage velocities V_j stacked.
  auto stage_positions = [&](const Vector& v) {
    Matrix qs(n, s);
    for (int i = 0; i < s; ++i) {
      Vector qi = q0;
      for (int j = 0; j < s; ++j) qi += h * tab.a(i, j) * v.segment(j * n, n);
      qs.col(i) = qi;
    }
    return qs;
  };
  auto stage_forces = [&](const Matrix& qs, const Vector& v) {
    Matrix fs(n, s);
    for (int j = 0; j < s; ++j) fs.col(j) = system.dL_dq(qs.col(j), v.segment(j * n, n));
    return fs;
  };
  auto residual = [&](const Vector& v) -> Vector {
    const Matrix qs = stage_positions(v);
    const Matrix fs = stage_forces(qs, v);
    Vector r(n * s);
    for (int i = 0; i < s; ++i) {
      Vector pi = p0;
      for (int j = 0; j < s; ++j) pi += h * tab.a_tilde(i, j) * fs.col(j);
      r.segment(i * n, n) = system.dL_dqdot(qs.col(i), v.segment(i * n, n)) - pi;
    }
    return r;
  };

  const Vector v0 = system.velocity(q0, p0);
  require_finite(v0, "sprk_step initial velocity");
  const Vector v = newton_iterate(residual, nullptr, v0.replicate(s, 1)).x;

  const Matrix qs = stage_positions(v);
  const Matrix fs = stage_forces(qs, v);
  CotangentState out{q0, p0};
  for (int j = 0; j < s; ++j) {
    out.q += h * tab.b[j] * v.segment(j * n, n);
    out.p += h * tab.b_tilde[j] * fs.col(j);
  }
  require_finite(out.q, "sprk_step");
  require_finite(out.p, "sprk_step");
  if (!system.in_chart(out.q)) throw StepRejected("sprk_step: configuration leaves the chart");
  return out;
}

CotangentState reference_step(const MechanicalSystem& system, const CotangentState& state, double h, int substeps) {
  const ButcherTableau tab = gauss_tableau(2);
  CotangentState z = state;
  for (int k = 0; k < substeps; ++k) z = sprk_step(system, tab, z, h / substeps);
  return z;
}

CotangentTrajectory run_sprk(const MechanicalSystem& system, const ButcherTableau& tab, const CotangentState& start,
                             double h, long steps) {
  CotangentTrajectory traj;
  traj.meta.system = system.name();
  traj.meta.method = "sprk";
  traj.meta.h = h;
  traj.push(0, start);
  for (long k = 1; k <= steps; ++k) {
    try {
      traj.push(k, sprk_step(system, tab, traj.back(), h));
    } catch (const Error& e) {
      traj.failure = e.what();
      break;
    }
  }
  return traj;
}

}  // namespace routh
