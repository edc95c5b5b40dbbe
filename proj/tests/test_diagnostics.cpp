#include "doctest.h"

#include "routh/diagnostics.hpp"
#include "routh/systems.hpp"

#include <cmath>
#include <memory>

using namespace routh;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

const DspParams kUnit{};

}  // namespace

TEST_CASE("energy") {
  CHECK(energy(FreeParticle(3), vec({1, 2, 3}), vec({1, 0, 0})) == doctest::Approx(0.5));
  CHECK(energy(*satellite_system(0.0), vec({1, 0, 0}), vec({0, 1, 0})) == doctest::Approx(-0.5));
  const auto dsp = dsp_system(kUnit);
  const Vector q = vec({0.4, 0.2, 0.7, 1.0});
  CHECK(energy(*dsp, q, Vector::Zero(4)) == doctest::Approx(dsp->potential(q)));
  const Vector v = vec({0.1, 0.3, -0.2, 0.5});
  CHECK(hamiltonian(*dsp, q, dsp->dL_dqdot(q, v)) == doctest::Approx(energy(*dsp, q, v)).epsilon(1e-13));
}

TEST_CASE("drift reports") {
  std::vector<DriftPoint> line;
  for (long k = 0; k <= 10; ++k) line.push_back({k, 0.5 * k, 2.0 + 3.0 * (0.5 * k)});
  const DriftReport abs = make_drift_report(line, false);
  CHECK(abs.linear_trend == doctest::Approx(3.0));
  CHECK(abs.trend_stderr <= 1e-12);
  CHECK(abs.max_abs == doctest::Approx(17.0));

  const DriftReport rel = relative_drift(line);
  CHECK(rel.relative);
  CHECK(rel.series[0].value == 0.0);
  CHECK(rel.series[10].value == doctest::Approx(7.5));
  CHECK(rel.linear_trend == doctest::Approx(1.5));

  std::vector<DriftPoint> from_zero = {{0, 0.0, 0.0}, {1, 1.0, 0.25}};
  const DriftReport z = relative_drift(from_zero);
  CHECK_FALSE(z.relative);
  CHECK(z.series[1].value == 0.25);
}

TEST_CASE("momentum drift") {
  const auto sat = satellite_system(0.05);
  const auto ld = midpoint_ld(sat, 0.3);
  const auto tr = run_del(*ld, ConfigPoint(vec({1, 0, 0})), ConfigPoint(vec({1, 0.28, 0.09})), 1000);
  const DriftReport rep = momentum_drift(tr, *ld, *sat);
  CHECK(rep.series.size() == 1000);
  CHECK(rep.max_abs <= 1e-10);

  ConfigTrajectory pair;
  pair.meta.h = 0.3;
  pair.push(0, tr[0]);
  pair.push(1, tr[1]);
  const DriftReport one = momentum_drift(pair, *ld, *sat);
  REQUIRE(one.series.size() == 1);
  CHECK(one.series[0].value == 0.0);

  const CotangentState z = state_from_velocity(*sat, vec({1, 0, 0}), vec({0.1, 1.0, 0.3}));
  CHECK(momentum_drift(run_sprk(*sat, gauss_tableau(2), z, 0.3, 500), *sat).max_abs <= 1e-10);
}

TEST_CASE("energy drift") {
  SUBCASE("exact free-particle flow has none") {
    const FreeParticle fp(2);
    const auto tr = run_rk4(fp, {vec({0, 0}), vec({1, -2})}, 0.1, 20);
    const DriftReport rep = energy_drift(tr, fp);
    for (const auto& p : rep.series) CHECK(p.value == 0.0);
  }
  SUBCASE("symplectic versus RK4 on the pendulum") {
    const auto dsp = dsp_system(kUnit);
    const auto red = dsp_reduced(kUnit);
    const CotangentState z = state_from_velocity(*dsp, vec({0.5, 0, 0.5, 0.3}), vec({0.1, 3, -0.1, 3}));
    const MomentumValue mu(dsp->trivialization().group_covector(z.p));
    const auto rs = run_rsprk(*red, gauss_tableau(2), project_cotangent(*dsp, *red, z), 0.01, mu, 2000, vec({0.0}));
    const auto rk = run_rk4(*dsp, z, 0.0025, 8000);
    const DriftReport a = energy_drift(rs, *red, mu);
    const DriftReport b = energy_drift(rk, *dsp);
    CHECK(a.max_abs <= 1e-8);
    CHECK(std::abs(b.linear_trend) > 10 * std::abs(a.linear_trend));
    CHECK(std::abs(b.linear_trend) > 10 * b.trend_stderr);
  }
  SUBCASE("configuration trajectories use the discrete Legendre transform") {
    const auto sat = satellite_system(0.0);
    const auto ld = midpoint_ld(sat, 0.1);
    const auto tr = run_del(*ld, ConfigPoint(vec({1, 0, 0})), ConfigPoint(vec({1, 0.1, 0})), 100);
    const DriftReport rep = energy_drift(tr, *ld);
    CHECK(rep.series.size() == 100);
    CHECK(rep.max_abs <= 1e-3);
  }
}

TEST_CASE("symplecticity residual") {
  SUBCASE("SPRK on the satellite") {
    const auto sat = satellite_system(0.05);
    const CotangentState z = state_from_velocity(*sat, vec({1.1, 0.3, 0.2}), vec({0.1, 0.9, 0.2}));
    auto step = [&](const Vector& w) -> Vector {
      const CotangentState n = sprk_step(*sat, gauss_tableau(2), {w.head(3), w.tail(3)}, 0.3);
      Vector out(6);
      out << n.q, n.p;
      return out;
    };
    Vector w(6);
    w << z.q, z.p;
    CHECK(symplectic_check(step, w, [](const Vector&) { return canonical_form(3); }) <= 1e-6);
  }
  SUBCASE("RSPRK on the pendulum") {
    const auto red = dsp_reduced(kUnit);
    const MomentumValue mu = MomentumValue::scalar(0.6);
    auto step = [&](const Vector& w) -> Vector {
      const auto n = rsprk_step(*red, gauss_tableau(2), {w.head(3), w.tail(3)}, 0.01, mu);
      Vector out(6);
      out << n.x, n.s;
      return out;
    };
    auto form = [&](const Vector& w) { return reduced_symplectic_matrix(*red, w.head(3), mu); };
    CHECK(symplectic_check(step, vec({0.5, 0.45, 0.3, 0.05, -0.1, 0.2}), form) <= 1e-6);
  }
  SUBCASE("RK4 is not symplectic") {
    // The size of the defect depends on the state; this one is fast and far from rest.
    const auto dsp = dsp_system(kUnit);
    const CotangentState z = state_from_velocity(*dsp, vec({0.3, 0, 0.8, 2}), vec({1, 5, 0, -3}));
    auto step = [&](const Vector& w) -> Vector {
      const CotangentState n = rk4_step(*dsp, {w.head(4), w.tail(4)}, 0.05);
      Vector out(8);
      out << n.q, n.p;
      return out;
    };
    Vector w(8);
    w << z.q, z.p;
    CHECK(symplectic_check(step, w, [](const Vector&) { return canonical_form(4); }) >= 1e-3);
  }
}

TEST_CASE("commutation") {
  const auto sat = satellite_system(0.05);
  const auto sat_red = satellite_reduced(0.05);
  const CotangentState zs = state_from_velocity(*sat, vec({1, 0, 0}), vec({0, std::cos(0.3), std::sin(0.3)}));
  const auto a = commutation_check(sat, sat_red, zs, 0.1, 1000, MethodPair::DelDr);
  CHECK_FALSE(a.failure);
  CHECK(a.distance.size() == 1001);
  CHECK(a.max_distance <= 1e-9);

  const auto dsp = dsp_system(kUnit);
  const auto dsp_red = dsp_reduced(kUnit);
  const CotangentState zd = state_from_velocity(*dsp, vec({0.5, 0, 0.5, 0.3}), vec({0.1, 3, -0.1, 3}));
  const auto b = commutation_check(dsp, dsp_red, zd, 0.01, 1000, MethodPair::SprkRsprk);
  CHECK_FALSE(b.failure);
  CHECK(b.max_distance <= 1e-8);

  const auto c = commutation_check(dsp, dsp_red, zd, 0.01, 0, MethodPair::SprkRsprk);
  CHECK(c.max_distance == 0.0);
}

TEST_CASE("convergence order") {
  const auto synthetic = convergence_order([](double h) { return 3.0 * std::pow(h, 3); }, {0.1, 0.05, 0.025});
  CHECK(synthetic.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(synthetic.errors.size() == 3);
  CHECK_THROWS_AS(convergence_order([](double h) { return h; }, {0.1, 0.2}), Error);

  SUBCASE("midpoint DEL on the oscillator") {
    const auto ho = std::make_shared<HarmonicOscillator>();
    const double T = 2.0;
    auto err = [&](double h) {
      const long n = std::lround(T / h);
      // Exact seed pair from the solution q = cos t.
      const auto tr = run_del(*midpoint_ld(ho, h), ConfigPoint(vec({1.0})), ConfigPoint(vec({std::cos(h)})), n);
      return std::abs(tr.back().coords[0] - std::cos(n * h));
    };
    CHECK(convergence_order(err, {0.1, 0.05, 0.025, 0.0125}).slope == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("two-stage Gauss over one Kepler period") {
    const auto sat = satellite_system(0.0);
    const CotangentState z = state_from_velocity(*sat, vec({1, 0, 0}), vec({0.1, 1.1, 0.2}));
    const auto ref = [&](long n, double h) {
      CotangentState w = z;
      for (long k = 0; k < 10 * n; ++k) w = sprk_step(*sat, gauss_tableau(2), w, h / 10);
      return w;
    };
    auto err = [&](double h) {
      const long n = std::lround(2 * M_PI / h);
      const auto tr = run_sprk(*sat, gauss_tableau(2), z, h, n);
      return (tr.back().q - ref(n, h).q).lpNorm<Eigen::Infinity>();
    };
    CHECK(convergence_order(err, {0.2, 0.1, 0.05}).slope == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("rk4") {
  const double h = 0.1;
  const CotangentState z = rk4_step(HarmonicOscillator(), {vec({1}), vec({0})}, h);
  // Four stages iterated by hand for qdot = p, pdot = -q.
  CHECK(std::abs(z.q[0] - (1 - h * h / 2 + h * h * h * h / 24)) <= 1e-15);
  CHECK(std::abs(z.p[0] - (-h + h * h * h / 6)) <= 1e-15);
  CHECK(std::abs(z.q[0] - 0.9950041667) <= 1e-9);
  CHECK(std::abs(z.p[0] - -0.0998333333) <= 1e-9);
  // Against the exact flow the difference is the local error.
  CHECK(std::abs(z.p[0] + std::sin(h)) == doctest::Approx(std::pow(h, 5) / 120).epsilon(0.01));

  const CotangentState f = rk4_step(FreeParticle(2), {vec({1, 1}), vec({0.5, -1})}, h);
  CHECK((f.q - vec({1.05, 0.9})).norm() <= 1e-15);
  CHECK((f.p - vec({0.5, -1})).norm() == 0.0);
}
