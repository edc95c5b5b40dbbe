#include "doctest.h"

#include "routh/diagnostics.hpp"
#include "routh/discrete_lagrangian.hpp"
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

ConfigPoint pt(std::initializer_list<double> v) { return ConfigPoint(vec(v)); }

SystemPtr free_particle(int n) { return std::make_shared<FreeParticle>(n); }
SystemPtr oscillator() { return std::make_shared<HarmonicOscillator>(); }

}  // namespace

TEST_CASE("midpoint discrete Lagrangian values") {
  CHECK(midpoint_ld(free_particle(1), 0.1)->eval(vec({0}), vec({0.2})) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(midpoint_ld(oscillator(), 0.1)->eval(vec({1}), vec({1})) == doctest::Approx(-0.05).epsilon(1e-14));

  // Zero chord: L_d = h L(q, 0).
  const auto sat = satellite_system(0.05);
  const Vector q = vec({1.2, 0.4, -0.3});
  CHECK(midpoint_ld(sat, 0.3)->eval(q, q) == doctest::Approx(0.3 * sat->lagrangian(q, Vector::Zero(3))));
}

TEST_CASE("slot derivatives agree with finite differences") {
  const auto dsp = dsp_system({});
  const auto ld = midpoint_ld(dsp, 0.05);
  const Vector q0 = vec({0.5, 0.1, 0.4, 0.6});
  const Vector q1 = vec({0.51, 0.2, 0.38, 0.7});
  const Vector g1 = fd_gradient([&](const Vector& y) { return ld->eval(y, q1); }, q0);
  const Vector g2 = fd_gradient([&](const Vector& y) { return ld->eval(q0, y); }, q1);
  CHECK((g1 - ld->d1(q0, q1)).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK((g2 - ld->d2(q0, q1)).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("del_step") {
  SUBCASE("free particle moves on a line") {
    const auto ld = midpoint_ld(free_particle(3), 0.1);
    const ConfigPoint q2 = del_step(*ld, pt({0, 0, 0}), pt({0.1, 0, 0}));
    CHECK((q2.coords - vec({0.2, 0, 0})).norm() <= 1e-12);
  }
  SUBCASE("harmonic oscillator matches the midpoint recurrence") {
    const double h = 0.1;
    const auto ld = midpoint_ld(oscillator(), h);
    const double expected = ((2 - h * h / 2) * 1 - (1 + h * h / 4)) / (1 + h * h / 4);
    CHECK(expected == doctest::Approx(0.990025).epsilon(1e-6));
    CHECK(del_step(*ld, pt({1}), pt({1})).coords[0] == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("satellite conserves the discrete momentum over one step") {
    const auto sat = satellite_system(0.0);
    const auto ld = midpoint_ld(sat, 0.1);
    const ConfigPoint q0 = pt({1, 0, 0});
    const ConfigPoint q1 = pt({1, 0.1, 0});
    const ConfigPoint q2 = del_step(*ld, q0, q1);
    const double j01 = discrete_momentum(*ld, q0, q1, *sat).mu[0];
    const double j12 = discrete_momentum(*ld, q1, q2, *sat).mu[0];
    CHECK(std::abs(j12 - j01) <= 1e-12);
  }
  SUBCASE("chart exit is rejected") {
    const auto ld = midpoint_ld(dsp_system({}), 0.3);
    CHECK_THROWS_AS(del_step(*ld, pt({0.5, 0, 0.5, 0.3}), pt({0.95, 0.6, 0.1, 0.4})), Error);
  }
}

TEST_CASE("discrete momentum") {
  const auto sat = satellite_system(0.05);
  const auto ld = midpoint_ld(sat, 0.01);
  // r_m^2 (theta1 - theta0) / h
  CHECK(discrete_momentum(*ld, pt({1, 0, 0}), pt({1, 0.01, 0}), *sat).mu[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(discrete_momentum(*ld, pt({1.3, 0.2, 0.1}), pt({1.3, 0.2, 0.1}), *sat).mu[0] == 0.0);
}

TEST_CASE("discrete Legendre transforms") {
  {
    const auto ld = midpoint_ld(free_particle(1), 0.1);
    const auto [p0, p1] = legendre_transforms(*ld, pt({0}), pt({0.2}));
    CHECK(p0[0] == doctest::Approx(2.0));
    CHECK(p1[0] == doctest::Approx(2.0));
  }
  {
    const double h = 0.1;
    const auto ld = midpoint_ld(oscillator(), h);
    const auto p = legendre_transforms(*ld, pt({1}), pt({1}));
    // (q1 - q0) / h - (h / 4)(q0 + q1)
    CHECK(p.second[0] == doctest::Approx(-0.05).epsilon(1e-14));
    CHECK(p.first[0] == doctest::Approx(0.05).epsilon(1e-14));
  }
  {
    const auto ld = midpoint_ld(satellite_system(0.05), 0.3);
    const ConfigPoint q0 = pt({1.1, 0.3, 0.2});
    const ConfigPoint q1 = pt({1.05, 0.6, 0.25});
    const Vector p0 = legendre_transforms(*ld, q0, q1).first;
    CHECK((inverse_legendre(*ld, q0, p0).coords - q1.coords).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("run_del") {
  const auto sat = satellite_system(0.05);
  const auto ld = midpoint_ld(sat, 0.3);
  const auto tr = run_del(*ld, pt({1, 0, 0}), pt({1, 0.29, 0.08}), 200);
  REQUIRE(tr.size() == 201);
  CHECK_FALSE(tr.failure);
  CHECK(tr.samples.back().step == 200);
  CHECK(tr.samples.back().t == doctest::Approx(60.0));
  CHECK(momentum_drift(tr, *ld, *sat).max_abs <= 1e-10);

  SUBCASE("failure truncates the run") {
    const auto lf = midpoint_ld(dsp_system({}), 0.3);
    const auto bad = run_del(*lf, pt({0.5, 0, 0.5, 0.3}), pt({0.9, 0.6, 0.1, 0.4}), 50);
    CHECK(bad.failure);
    CHECK(bad.size() < 51);
    for (const auto& s : bad.samples) CHECK(s.state.coords.allFinite());
  }
}
