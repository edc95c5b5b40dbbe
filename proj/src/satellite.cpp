#include "routh/systems.hpp"

#include <cmath>

namespace routh {

namespace {

Trivialization satellite_trivialization() {
  Matrix ex(3, 2);
  ex << 1, 0,  //
      0, 0,    //
      0, 1;
  Matrix eg(3, 1);
  eg << 0, 1, 0;
  return Trivialization(ex, eg);
}

void check_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw SingularConfiguration("satellite: cylindrical chart requires r > 0");
}

}  // namespace

SatelliteJ2::SatelliteJ2(double j2) : NaturalSystem(satellite_trivialization()), j2_(j2) {
  if (!(j2 >= 0.0)) throw Error("satellite: J2 must be non-negative");
}

bool SatelliteJ2::in_chart(const Vector& q) const { return q.size() == 3 && q.allFinite() && q[0] > 0.0; }

double SatelliteJ2::gravity(double r, double z) const {
  const double rho2 = r * r + z * z;
  if (!(rho2 > 0.0)) throw SingularConfiguration("satellite: potential singular at the origin");
  const double rho = std::sqrt(rho2);
  const double rho3 = rho2 * rho;
  return -(1.0 / rho + j2_ / rho3 * (1.5 * z * z / rho2 - 0.5));
}

Eigen::Vector2d SatelliteJ2::gravity_gradient(double r, double z) const {
  const double rho2 = r * r + z * z;
  if (!(rho2 > 0.0)) throw SingularConfiguration("satellite: potential singular at the origin");
  const double rho = std::sqrt(rho2);
  const double rho3 = rho2 * rho;
  const double rho5 = rho3 * rho2;
  const double rho7 = rho5 * rho2;
  const double dv_dr = r / rho3 - 1.5 * j2_ * r / rho5 + 7.5 * j2_ * z * z * r / rho7;
  const double dv_dz = z / rho3 - 4.5 * j2_ * z / rho5 + 7.5 * j2_ * z * z * z / rho7;
  return {dv_dr, dv_dz};
}

Matrix SatelliteJ2::mass_matrix(const Vector& q) const {
  check_radius(q[0]);
  Matrix m = Matrix::Identity(3, 3);
  m(1, 1) = q[0] * q[0];
  return m;
}

std::vector<Matrix> SatelliteJ2::mass_matrix_derivatives(const Vector& q) const {
  check_radius(q[0]);
  std::vector<Matrix> dm(3, Matrix::Zero(3, 3));
  dm[0](1, 1) = 2.0 * q[0];
  return dm;
}

double SatelliteJ2::potential(const Vector& q) const {
  check_radius(q[0]);
  return gravity(q[0], q[2]);
}

Vector SatelliteJ2::potential_gradient(const Vector& q) const {
  check_radius(q[0]);
  const auto g = gravity_gradient(q[0], q[2]);
  Vector out(3);
  out << g[0], 0.0, g[1];
  return out;
}

Vector SatelliteJ2::velocity(const Vector& q, const Vector& p) const {
  check_radius(q[0]);
  Vector v = p;
  v[1] = p[1] / (q[0] * q[0]);
  return v;
}

// Reduced system ------------------------------------------------------------

double SatelliteReduced::amended_potential(const Vector& x, const MomentumValue& mu) const {
  check_radius(x[0]);
  const double m = mu.mu[0];
  return full_.gravity(x[0], x[1]) + 0.5 * m * m / (x[0] * x[0]);
}

double SatelliteReduced::routhian_hat(const Vector& x, const Vector& xdot, const MomentumValue& mu) const {
  return 0.5 * xdot.squaredNorm() - amended_potential(x, mu);
}

Vector SatelliteReduced::dR_dx(const Vector& x, const Vector& /*xdot*/, const MomentumValue& mu) const {
  check_radius(x[0]);
  const double m = mu.mu[0];
  const auto g = full_.gravity_gradient(x[0], x[1]);
  Vector out(2);
  out << -g[0] + m * m / (x[0] * x[0] * x[0]), -g[1];
  return out;
}

Vector SatelliteReduced::dR_dxdot(const Vector& x, const Vector& xdot, const MomentumValue&) const {
  check_radius(x[0]);
  return xdot;
}

Matrix SatelliteReduced::reduced_metric(const Vector& x) const {
  check_radius(x[0]);
  return Matrix::Identity(2, 2);
}

Matrix SatelliteReduced::connection_A(const Vector&) const { return Matrix::Zero(1, 2); }

std::vector<Matrix> SatelliteReduced::connection_dA(const Vector&) const {
  return std::vector<Matrix>(2, Matrix::Zero(1, 2));
}

Matrix SatelliteReduced::beta_mu(const Vector&, const MomentumValue&) const { return Matrix::Zero(2, 2); }

Matrix SatelliteReduced::locked_inertia(const Vector& x) const {
  check_radius(x[0]);
  return Matrix::Constant(1, 1, x[0] * x[0]);
}

std::shared_ptr<const SatelliteJ2> satellite_system(double j2) { return std::make_shared<const SatelliteJ2>(j2); }

std::shared_ptr<const SatelliteReduced> satellite_reduced(double j2) {
  return std::make_shared<const SatelliteReduced>(j2);
}

}  // namespace routh
