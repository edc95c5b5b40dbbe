#include "doctest.h"

#include "routh/diagnostics.hpp"
#include "routh/reduction.hpp"
#include "routh/systems.hpp"

#include <cmath>
#include <random>

using namespace routh;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

struct Sampler {
  std::mt19937_64 rng{12345};
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  Vector dsp_q() { return vec({uniform(0.1, 0.9), uniform(-3, 3), uniform(0.1, 0.9), uniform(-3, 3)}); }
  Vector dsp_x() { return vec({uniform(0.1, 0.9), uniform(0.1, 0.9), uniform(-3, 3)}); }
  Vector sat_q() { return vec({uniform(0.5, 2), uniform(-3, 3), uniform(-1, 1)}); }
  Vector velocity(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(-1, 1);
    return v;
  }
};

const DspParams kUnit{};

}  // namespace

// Satellite -----------------------------------------------------------------

TEST_CASE("satellite Lagrangian facts") {
  const auto sat = satellite_system(0.0);
  CHECK(sat->dim() == 3);
  CHECK(sat->group_indices() == std::vector<int>{1});
  // r^2 thetadot
  CHECK(sat->momentum_map(vec({2, 0.3, 0}), vec({0, 0.5, 0}))[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(energy(*sat, vec({1, 0, 0}), vec({0, 1, 0})) == doctest::Approx(-0.5).epsilon(1e-14));
  // Centripetal balance: the circular orbit at r = 1 needs thetadot = 1.
  CHECK(sat->dL_dq(vec({1, 0, 0}), vec({0, 1, 0})).norm() <= 1e-14);
  CHECK_THROWS_AS(sat->lagrangian(vec({0, 0, 0}), vec({0, 1, 0})), SingularConfiguration);
  CHECK_THROWS_AS(satellite_system(-0.1), Error);
}

TEST_CASE("satellite J2 term") {
  const auto sat = satellite_system(0.05);
  const double r = 1.3, z = 0.4, rho = std::hypot(r, z);
  const double v = -(1 / rho + 0.05 / std::pow(rho, 3) * (1.5 * z * z / (rho * rho) - 0.5));
  CHECK(sat->potential(vec({r, 0.2, z})) == doctest::Approx(v).epsilon(1e-14));
}

TEST_CASE("satellite analytic derivatives") {
  Sampler s;
  for (double j2 : {0.0, 0.05}) {
    const auto sat = satellite_system(j2);
    for (int k = 0; k < 100; ++k) {
      const Vector q = s.sat_q(), v = s.velocity(3);
      const Vector gq = fd_gradient([&](const Vector& y) { return sat->lagrangian(y, v); }, q);
      const Vector gv = fd_gradient([&](const Vector& y) { return sat->lagrangian(q, y); }, v);
      CHECK((gq - sat->dL_dq(q, v)).lpNorm<Eigen::Infinity>() <= 1e-6);
      CHECK((gv - sat->dL_dqdot(q, v)).lpNorm<Eigen::Infinity>() <= 1e-6);
      CHECK(std::abs(sat->lagrangian(q + vec({0, 0.7, 0}), v) - sat->lagrangian(q, v)) <= 1e-14);
    }
  }
}

TEST_CASE("satellite reduced data") {
  Sampler s;
  const auto red = satellite_reduced(0.05);
  const auto sat = satellite_system(0.05);
  for (int k = 0; k < 50; ++k) {
    const Vector q = s.sat_q();
    const Vector x = vec({q[0], q[2]});
    const double mu = s.uniform(-2, 2);
    CHECK(red->connection_A(x).isZero(0.0));
    CHECK(red->beta_mu(x, MomentumValue::scalar(mu)).isZero(0.0));
    for (const Matrix& d : red->connection_dA(x)) CHECK(d.isZero(0.0));
    // Amended potential: V + mu^2 / (2 r^2).
    CHECK(red->amended_potential(x, MomentumValue::scalar(mu)) ==
          doctest::Approx(sat->potential(q) + mu * mu / (2 * q[0] * q[0])).epsilon(1e-14));
    const Vector xd = s.velocity(2);
    const auto R = [&](const Vector& a, const Vector& b) { return red->routhian_hat(a, b, MomentumValue::scalar(mu)); };
    CHECK((fd_gradient([&](const Vector& y) { return R(y, xd); }, x) - red->dR_dx(x, xd, MomentumValue::scalar(mu)))
              .lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK((fd_gradient([&](const Vector& y) { return R(x, y); }, xd) -
           red->dR_dxdot(x, xd, MomentumValue::scalar(mu)))
              .lpNorm<Eigen::Infinity>() <= 1e-6);
  }
}

TEST_CASE("satellite relative equilibrium is fixed by RSPRK") {
  const auto red = satellite_reduced(0.05);
  const MomentumValue mu = MomentumValue::scalar(1.1);
  // Solve dV_mu/dr = 0 at z = 0 by Newton on the finite-difference derivative.
  auto dv = [&](const Vector& r) -> Vector {
    return fd_gradient([&](const Vector& y) { return red->amended_potential(vec({y[0], 0.0}), mu); }, r, 1.0);
  };
  const Vector r = newton_solve(dv, std::nullopt, vec({1.2}), 1e-11);
  ReducedCotangentState z{vec({r[0], 0.0}), vec({0.0, 0.0})};
  const ReducedCotangentState z1 = rsprk_step(*red, gauss_tableau(2), z, 0.3, mu);
  // The equilibrium radius carries the finite-difference error of the root solve.
  CHECK((z1.x - z.x).lpNorm<Eigen::Infinity>() <= 1e-9);
  CHECK(z1.s.lpNorm<Eigen::Infinity>() <= 1e-9);
  // At the exact root of the analytic force the step is stationary to Newton tolerance.
  auto force = [&](const Vector& y) -> Vector { return red->dR_dx(vec({y[0], 0.0}), Vector::Zero(2), mu).head(1); };
  const Vector re = newton_solve(force, std::nullopt, r);
  z.x[0] = re[0];
  const ReducedCotangentState z2 = rsprk_step(*red, gauss_tableau(2), z, 0.3, mu);
  CHECK((z2.x - z.x).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(z2.s.lpNorm<Eigen::Infinity>() <= 1e-12);
}

// Double spherical pendulum ---------------------------------------------------

TEST_CASE("dsp spot values") {
  const auto dsp = dsp_system(kUnit);
  const auto red = dsp_reduced(kUnit);
  CHECK(red->inertia(vec({1, 1, 0})) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::abs(red->printed_beta_coefficient(vec({1, 1, M_PI / 2}), 1.0) - 4.0 / 9.0) <= 1e-12);
  CHECK(std::abs(red->beta_coefficient(vec({1, 1, M_PI / 2}), 1.0) - 2.0 / 9.0) <= 1e-12);

  // Momentum map with only the angular velocities nonzero.
  const Vector q = vec({0.5, 0.2, 0.5, 0.2});
  const Vector v = vec({0, 1, 0, 1});
  CHECK(dsp->momentum_map(q, v)[0] == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(red->momentum(q, v) == doctest::Approx(1.25).epsilon(1e-14));

  // At rest only the potential remains.
  const Vector r = vec({0.3, 0.1, 0.6, -0.4});
  const double z1 = std::sqrt(1 - 0.09), z2 = std::sqrt(1 - 0.36);
  CHECK(energy(*dsp, r, Vector::Zero(4)) == doctest::Approx(-9.8 * z1 - 9.8 * (z1 + z2)).epsilon(1e-14));
  CHECK(red->amended_potential(vec({0.3, 0.6, -0.5}), MomentumValue::scalar(0.0)) ==
        doctest::Approx(-9.8 * z1 - 9.8 * (z1 + z2)).epsilon(1e-14));
}

TEST_CASE("dsp chart guards") {
  const auto dsp = dsp_system(kUnit);
  CHECK_THROWS_AS(dsp->lagrangian(vec({1.0, 0, 0.5, 0}), Vector::Zero(4)), SingularConfiguration);
  CHECK_THROWS_AS(dsp->lagrangian(vec({0.5, 0, 0.0, 0}), Vector::Zero(4)), SingularConfiguration);
  CHECK_THROWS_AS(dsp->lagrangian(vec({-0.2, 0, 0.5, 0}), Vector::Zero(4)), SingularConfiguration);
  CHECK_FALSE(dsp->in_chart(vec({1.2, 0, 0.5, 0})));
  CHECK(dsp->in_chart(vec({0.5, 9, 0.5, -9})));
  DspParams bad;
  bad.m1 = -1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("dsp analytic derivatives and invariance") {
  Sampler s;
  const auto dsp = dsp_system(kUnit);
  for (int k = 0; k < 100; ++k) {
    const Vector q = s.dsp_q(), v = s.velocity(4);
    const Vector gq = fd_gradient([&](const Vector& y) { return dsp->lagrangian(y, v); }, q);
    const Vector gv = fd_gradient([&](const Vector& y) { return dsp->lagrangian(q, y); }, v);
    CHECK((gq - dsp->dL_dq(q, v)).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK((gv - dsp->dL_dqdot(q, v)).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK(std::abs(dsp->lagrangian(q + vec({0, 0.7, 0, 0.7}), v) - dsp->lagrangian(q, v)) <= 1e-12);
  }
}

TEST_CASE("dsp kinetic metric") {
  Sampler s;
  const auto dsp = dsp_system(kUnit);
  const auto red = dsp_reduced(kUnit);
  for (int k = 0; k < 100; ++k) {
    const Vector q = s.dsp_q(), v = s.velocity(4);
    const Vector w = red->embed_velocity6(q, v);
    const double t_metric = 0.5 * w.dot(red->kinetic_metric6(q) * w);
    CHECK(std::abs(t_metric - dsp->cartesian_kinetic_energy(q, v)) <= 1e-10);
    CHECK(std::abs(t_metric - 0.5 * v.dot(dsp->mass_matrix(q) * v)) <= 1e-10);
    // The printed metric misses exactly m2 zdot1 zdot2.
    const double t_printed = 0.5 * w.dot(red->printed_kinetic_metric6(q) * w);
    CHECK(std::abs(t_metric - t_printed - kUnit.m2 * w[2] * w[5]) <= 1e-12);
    // |hor v| is invariant under the group shift.
    const Vector qs = q + vec({0, 0.7, 0, 0.7});
    const Vector h0 = red->embed_velocity6(q, red->horizontal(q, v));
    const Vector h1 = red->embed_velocity6(qs, red->horizontal(qs, v));
    CHECK(std::abs(h0.dot(red->kinetic_metric6(q) * h0) - h1.dot(red->kinetic_metric6(qs) * h1)) <= 1e-12);
  }
}

TEST_CASE("dsp connection") {
  Sampler s;
  const auto dsp = dsp_system(kUnit);
  const auto red = dsp_reduced(kUnit);
  const Vector xi = vec({0, 1, 0, 1});
  for (int k = 0; k < 50; ++k) {
    const Vector q = s.dsp_q(), v = s.velocity(4);
    const Vector x = vec({q[0], q[2], q[3] - q[1]});
    // Connection axiom and horizontality.
    CHECK(std::abs(red->connection(q, xi) - 1.0) <= 1e-12);
    CHECK(std::abs(dsp->momentum_map(q, red->horizontal(q, v))[0]) <= 1e-12);
    CHECK(std::abs(red->momentum(q, v) - dsp->momentum_map(q, v)[0]) <= 1e-12);
    const double mu = s.uniform(-2, 2);
    CHECK(std::abs(red->alpha_mu(q, mu).dot(v) - mu * red->connection(q, v)) <= 1e-12);
    // Local A: connection = gdot + A xdot with gdot = thetadot1.
    const Vector xd = vec({v[0], v[2], v[3] - v[1]});
    CHECK(std::abs(red->connection(q, v) - (v[1] + (red->connection_A(x) * xd)(0))) <= 1e-12);
    // Printed local form (m2 / I)(-r2 sin phi, r1 sin phi, r2^2 + r1 r2 cos phi).
    const double I = red->inertia(x);
    const Vector a = kUnit.m2 / I *
                     vec({-x[1] * std::sin(x[2]), x[0] * std::sin(x[2]), x[1] * x[1] + x[0] * x[1] * std::cos(x[2])});
    CHECK((red->connection_A(x).row(0).transpose() - a).lpNorm<Eigen::Infinity>() <= 1e-14);
    // Inertia gradient and connection derivatives.
    CHECK((fd_gradient([&](const Vector& y) { return red->inertia(y); }, x) - Vector(red->inertia_gradient(x)))
              .lpNorm<Eigen::Infinity>() <= 1e-6);
    const auto dA = red->connection_dA(x);
    for (int i = 0; i < 3; ++i) {
      Vector e = Vector::Zero(3);
      e[i] = 1e-6;
      const Matrix fd = (red->connection_A(x + e) - red->connection_A(x - e)) / 2e-6;
      CHECK((fd - dA[i]).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
    CHECK(red->locked_inertia(x)(0, 0) == doctest::Approx(I));
  }
}

TEST_CASE("dsp magnetic term is d(mu A)") {
  Sampler s;
  const auto red = dsp_reduced(kUnit);
  double printed_gap = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Vector x = s.dsp_x();
    const double mu = s.uniform(-2, 2);
    const Matrix grad = fd_jacobian([&](const Vector& y) -> Vector { return mu * red->connection_A(y).row(0).transpose(); }, x);
    const Matrix curl = grad.transpose() - grad;
    const Matrix b = red->beta_mu(x, MomentumValue::scalar(mu));
    CHECK((b - curl).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK((b + b.transpose()).norm() == 0.0);
    CHECK(b(2, 0) == doctest::Approx(red->beta_coefficient(x, mu) * x[1]));
    printed_gap = std::max(printed_gap, std::abs(red->printed_beta_coefficient(x, mu) - red->beta_coefficient(x, mu)));
  }
  // The printed coefficient is not the exterior derivative.
  CHECK(printed_gap > 1e-3);
}

TEST_CASE("dsp reduced Routhian") {
  Sampler s;
  const auto dsp = dsp_system(kUnit);
  const auto red = dsp_reduced(kUnit);
  for (int k = 0; k < 50; ++k) {
    const Vector x = s.dsp_x(), xd = s.velocity(3);
    const MomentumValue mu = MomentumValue::scalar(s.uniform(-2, 2));
    const auto R = [&](const Vector& a, const Vector& b) { return red->routhian_hat(a, b, mu); };
    CHECK((fd_gradient([&](const Vector& y) { return R(y, xd); }, x) - red->dR_dx(x, xd, mu))
              .lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK((fd_gradient([&](const Vector& y) { return R(x, y); }, xd) - red->dR_dxdot(x, xd, mu))
              .lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK((red->reduced_metric(x) * xd - red->dR_dxdot(x, xd, mu)).lpNorm<Eigen::Infinity>() <= 1e-12);
    // Amended potential: V + mu^2 / (2 I), read off the energy of a relative equilibrium.
    const CotangentState z = state_from_reduced_velocity(*dsp, *red, x, Vector::Zero(3), mu, Vector::Zero(1));
    CHECK(hamiltonian(*dsp, z.q, z.p) == doctest::Approx(red->amended_potential(x, mu)).epsilon(1e-12));
    // Reduced energy equals the full energy on the level set.
    const CotangentState w = state_from_reduced_velocity(*dsp, *red, x, xd, mu, Vector::Zero(1));
    const ReducedCotangentState rz = project_cotangent(*dsp, *red, w);
    CHECK(reduced_energy(*red, rz.x, rz.s, mu) == doctest::Approx(hamiltonian(*dsp, w.q, w.p)).epsilon(1e-12));
  }
}
