#include "routh/systems.hpp"

#include <cmath>

namespace routh {

namespace {

Trivialization dsp_trivialization() {
  // q = (r1, theta1, r2, theta2) = (r1, g, r2, g + phi), x = (r1, r2, phi).
  Matrix ex(4, 3);
  ex << 1, 0, 0,  //
      0, 0, 0,    //
      0, 1, 0,    //
      0, 0, 1;
  Matrix eg(4, 1);
  eg << 0, 1, 0, 1;
  return Trivialization(ex, eg);
}

}  // namespace

void DspParams::validate() const {
  if (!(m1 > 0 && m2 > 0 && l1 > 0 && l2 > 0 && g > 0)) {
    throw Error("double spherical pendulum: masses, lengths and g must be positive");
  }
}

DoubleSphericalPendulum::DoubleSphericalPendulum(DspParams params)
    : NaturalSystem(dsp_trivialization()), p_(params) {
  p_.validate();
}

void DoubleSphericalPendulum::check_radii(double r1, double r2) const {
  if (!(r1 > 0.0 && r1 < p_.l1 && r2 > 0.0 && r2 < p_.l2)) {
    throw SingularConfiguration("double spherical pendulum: chart requires 0 < r_i < l_i");
  }
}

bool DoubleSphericalPendulum::in_chart(const Vector& q) const {
  if (q.size() != 4 || !q.allFinite()) return false;
  const double e1 = 1e-9 * p_.l1;
  const double e2 = 1e-9 * p_.l2;
  return q[0] > e1 && q[0] < p_.l1 - e1 && q[2] > e2 && q[2] < p_.l2 - e2;
}

double DoubleSphericalPendulum::z1(double r1) const { return std::sqrt(p_.l1 * p_.l1 - r1 * r1); }
double DoubleSphericalPendulum::z2(double r2) const { return std::sqrt(p_.l2 * p_.l2 - r2 * r2); }

Matrix DoubleSphericalPendulum::mass_matrix(const Vector& q) const {
  const double r1 = q[0], r2 = q[2], phi = q[3] - q[1];
  check_radii(r1, r2);
  const double c1 = r1 / z1(r1), c2 = r2 / z2(r2);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double m1 = p_.m1, m2 = p_.m2;
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = (m1 + m2) * (1.0 + c1 * c1);
  m(1, 1) = (m1 + m2) * r1 * r1;
  m(2, 2) = m2 * (1.0 + c2 * c2);
  m(3, 3) = m2 * r2 * r2;
  m(0, 2) = m(2, 0) = m2 * (cp + c1 * c2);
  m(0, 3) = m(3, 0) = -m2 * r2 * sp;
  m(1, 2) = m(2, 1) = m2 * r1 * sp;
  m(1, 3) = m(3, 1) = m2 * r1 * r2 * cp;
  return m;
}

std::vector<Matrix> DoubleSphericalPendulum::mass_matrix_derivatives(const Vector& q) const {
  const double r1 = q[0], r2 = q[2], phi = q[3] - q[1];
  check_radii(r1, r2);
  const double z1v = z1(r1), z2v = z2(r2);
  const double c1 = r1 / z1v, c2 = r2 / z2v;
  // dc/dr = l^2 / z^3
  const double dc1 = p_.l1 * p_.l1 / (z1v * z1v * z1v);
  const double dc2 = p_.l2 * p_.l2 / (z2v * z2v * z2v);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double m1 = p_.m1, m2 = p_.m2;

  auto sym = [](Matrix& m, int i, int j, double v) { m(i, j) = m(j, i) = v; };

  Matrix d_r1 = Matrix::Zero(4, 4);
  d_r1(0, 0) = (m1 + m2) * 2.0 * c1 * dc1;
  d_r1(1, 1) = 2.0 * (m1 + m2) * r1;
  sym(d_r1, 0, 2, m2 * dc1 * c2);
  sym(d_r1, 1, 2, m2 * sp);
  sym(d_r1, 1, 3, m2 * r2 * cp);

  Matrix d_r2 = Matrix::Zero(4, 4);
  d_r2(2, 2) = m2 * 2.0 * c2 * dc2;
  d_r2(3, 3) = 2.0 * m2 * r2;
  sym(d_r2, 0, 2, m2 * c1 * dc2);
  sym(d_r2, 0, 3, -m2 * sp);
  sym(d_r2, 1, 3, m2 * r1 * cp);

  Matrix d_phi = Matrix::Zero(4, 4);
  sym(d_phi, 0, 2, -m2 * sp);
  sym(d_phi, 0, 3, -m2 * r2 * cp);
  sym(d_phi, 1, 2, m2 * r1 * cp);
  sym(d_phi, 1, 3, -m2 * r1 * r2 * sp);

  // phi = theta2 - theta1
  return {d_r1, -d_phi, d_r2, d_phi};
}

double DoubleSphericalPendulum::potential(const Vector& q) const {
  check_radii(q[0], q[2]);
  return -p_.g * ((p_.m1 + p_.m2) * z1(q[0]) + p_.m2 * z2(q[2]));
}

Vector DoubleSphericalPendulum::potential_gradient(const Vector& q) const {
  const double r1 = q[0], r2 = q[2];
  check_radii(r1, r2);
  Vector g = Vector::Zero(4);
  g[0] = p_.g * (p_.m1 + p_.m2) * r1 / z1(r1);
  g[2] = p_.g * p_.m2 * r2 / z2(r2);
  return g;
}

double DoubleSphericalPendulum::cartesian_kinetic_energy(const Vector& q, const Vector& qdot) const {
  const double r1 = q[0], t1 = q[1], r2 = q[2], t2 = q[3];
  check_radii(r1, r2);
  auto bob_velocity = [](double r, double t, double z, double rd, double td) {
    Eigen::Vector3d v;
    v << rd * std::cos(t) - r * std::sin(t) * td, rd * std::sin(t) + r * std::cos(t) * td, -r * rd / z;
    return v;
  };
  const Eigen::Vector3d v1 = bob_velocity(r1, t1, z1(r1), qdot[0], qdot[1]);
  const Eigen::Vector3d v2 = bob_velocity(r2, t2, z2(r2), qdot[2], qdot[3]);
  return 0.5 * p_.m1 * v1.squaredNorm() + 0.5 * p_.m2 * (v1 + v2).squaredNorm();
}

// Reduced system ------------------------------------------------------------

bool DspReduced::in_chart(const Vector& x) const {
  if (x.size() != 3 || !x.allFinite()) return false;
  Vector q(4);
  q << x[0], 0.0, x[1], x[2];
  return full_.in_chart(q);
}

Vector DspReduced::representative(const Vector& x) const {
  return full_.trivialization().lift(x, Vector::Zero(1));
}

double DspReduced::inertia(const Vector& x) const {
  const double r1 = x[0], r2 = x[1], phi = x[2];
  const auto& p = full_.params();
  return p.m1 * r1 * r1 + p.m2 * (r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * std::cos(phi));
}

Eigen::Vector3d DspReduced::inertia_gradient(const Vector& x) const {
  const double r1 = x[0], r2 = x[1], phi = x[2];
  const auto& p = full_.params();
  const double cp = std::cos(phi), sp = std::sin(phi);
  return {2.0 * p.m1 * r1 + p.m2 * (2.0 * r1 + 2.0 * r2 * cp), p.m2 * (2.0 * r2 + 2.0 * r1 * cp),
          -2.0 * p.m2 * r1 * r2 * sp};
}

Matrix DspReduced::locked_inertia(const Vector& x) const {
  full_.check_radii(x[0], x[1]);
  return Matrix::Constant(1, 1, inertia(x));
}

Matrix DspReduced::connection_A(const Vector& x) const {
  const double r1 = x[0], r2 = x[1], phi = x[2];
  full_.check_radii(r1, r2);
  const double m2 = full_.params().m2;
  const double k = m2 / inertia(x);
  Matrix a(1, 3);
  a << -r2 * std::sin(phi), r1 * std::sin(phi), r2 * r2 + r1 * r2 * std::cos(phi);
  return k * a;
}

std::vector<Matrix> DspReduced::connection_dA(const Vector& x) const {
  const double r1 = x[0], r2 = x[1], phi = x[2];
  full_.check_radii(r1, r2);
  const double m2 = full_.params().m2;
  const double in = inertia(x);
  const auto din = inertia_gradient(x);
  const double cp = std::cos(phi), sp = std::sin(phi);
  Eigen::RowVector3d a(-r2 * sp, r1 * sp, r2 * r2 + r1 * r2 * cp);
  const Eigen::RowVector3d da[3] = {
      {0.0, sp, r2 * cp},                       // d/dr1
      {-sp, 0.0, 2.0 * r2 + r1 * cp},           // d/dr2
      {-r2 * cp, r1 * cp, -r1 * r2 * sp},       // d/dphi
  };
  std::vector<Matrix> out;
  for (int i = 0; i < 3; ++i) {
    out.emplace_back(m2 * (da[i] / in - a * din[i] / (in * in)));
  }
  return out;
}

double DspReduced::beta_coefficient(const Vector& x, double mu) const {
  const auto& p = full_.params();
  const double in = inertia(x);
  return 2.0 * mu * p.m1 * p.m2 * x[0] * x[1] / (in * in);
}

double DspReduced::printed_beta_coefficient(const Vector& x, double mu) const {
  const double r1 = x[0], r2 = x[1], phi = x[2];
  const auto& p = full_.params();
  const double in = inertia(x);
  return mu * p.m2 * (2.0 * (p.m1 + p.m2) * r1 * r2 + (p.m1 * r1 * r1 + p.m2 * (r1 * r1 + r2 * r2)) * std::cos(phi)) /
         (in * in);
}

Matrix DspReduced::beta_mu(const Vector& x, const MomentumValue& mu) const {
  full_.check_radii(x[0], x[1]);
  const double c = beta_coefficient(x, mu.mu[0]);
  // c dphi ^ (r2 dr1 - r1 dr2), ordering (r1, r2, phi)
  Matrix b = Matrix::Zero(3, 3);
  b(2, 0) = c * x[1];
  b(0, 2) = -c * x[1];
  b(2, 1) = -c * x[0];
  b(1, 2) = c * x[0];
  return b;
}

double DspReduced::amended_potential(const Vector& x, const MomentumValue& mu) const {
  const double r1 = x[0], r2 = x[1];
  full_.check_radii(r1, r2);
  const auto& p = full_.params();
  const double s1 = std::sqrt(p.l1 * p.l1 - r1 * r1);
  const double s2 = std::sqrt(p.l2 * p.l2 - r2 * r2);
  const double m = mu.mu[0];
  return -p.m1 * p.g * s1 - p.m2 * p.g * (s1 + s2) + 0.5 * m * m / inertia(x);
}

double DspReduced::momentum(const Vector& q, const Vector& qdot) const {
  const double r1 = q[0], r2 = q[2], phi = q[3] - q[1];
  const double rd1 = qdot[0], td1 = qdot[1], rd2 = qdot[2], td2 = qdot[3];
  const auto& p = full_.params();
  return (p.m1 + p.m2) * r1 * r1 * td1 + p.m2 * r2 * r2 * td2 + p.m2 * r1 * r2 * (td1 + td2) * std::cos(phi) +
         p.m2 * (r1 * rd2 - r2 * rd1) * std::sin(phi);
}

double DspReduced::connection(const Vector& q, const Vector& qdot) const {
  Vector x(3);
  x << q[0], q[2], q[3] - q[1];
  return momentum(q, qdot) / inertia(x);
}

Vector DspReduced::alpha_mu(const Vector& q, double mu) const {
  const double r1 = q[0], r2 = q[2], phi = q[3] - q[1];
  const auto& p = full_.params();
  Vector x(3);
  x << r1, r2, phi;
  const double k = mu / inertia(x);
  const double cp = std::cos(phi), sp = std::sin(phi);
  Vector a(4);
  a << -k * p.m2 * r2 * sp, k * ((p.m1 + p.m2) * r1 * r1 + p.m2 * r1 * r2 * cp), k * p.m2 * r1 * sp,
      k * (p.m2 * r2 * r2 + p.m2 * r1 * r2 * cp);
  return a;
}

Matrix DspReduced::kinetic_metric6(const Vector& q) const {
  Matrix g = printed_kinetic_metric6(q);
  const double m2 = full_.params().m2;
  g(2, 5) = g(5, 2) = m2;
  return g;
}

Matrix DspReduced::printed_kinetic_metric6(const Vector& q) const {
  const double r1 = q[0], r2 = q[2], phi = q[3] - q[1];
  const auto& p = full_.params();
  const double m1 = p.m1, m2 = p.m2, cp = std::cos(phi), sp = std::sin(phi);
  Matrix g(6, 6);
  g << m1 + m2, 0, 0, m2 * cp, -m2 * r2 * sp, 0,            //
      0, (m1 + m2) * r1 * r1, 0, m2 * r1 * sp, m2 * r1 * r2 * cp, 0,  //
      0, 0, m1 + m2, 0, 0, 0,                                //
      m2 * cp, m2 * r1 * sp, 0, m2, 0, 0,                    //
      -m2 * r2 * sp, m2 * r1 * r2 * cp, 0, 0, m2 * r2 * r2, 0,  //
      0, 0, 0, 0, 0, m2;
  return g;
}

Vector DspReduced::embed_velocity6(const Vector& q, const Vector& qdot) const {
  const double r1 = q[0], r2 = q[2];
  full_.check_radii(r1, r2);
  Vector v(6);
  v << qdot[0], qdot[1], -r1 * qdot[0] / full_.z1(r1), qdot[2], qdot[3], -r2 * qdot[2] / full_.z2(r2);
  return v;
}

Vector DspReduced::horizontal(const Vector& q, const Vector& qdot) const {
  const double xi = connection(q, qdot);
  Vector h = qdot;
  h[1] -= xi;
  h[3] -= xi;
  return h;
}

Vector DspReduced::horizontal_lift(const Vector& x, const Vector& xdot) const {
  const Vector q = representative(x);
  return horizontal(q, full_.trivialization().shape_basis() * xdot);
}

double DspReduced::routhian_hat(const Vector& x, const Vector& xdot, const MomentumValue& mu) const {
  full_.check_radii(x[0], x[1]);
  const Vector q = representative(x);
  const Vector v6 = embed_velocity6(q, horizontal_lift(x, xdot));
  return 0.5 * v6.dot(kinetic_metric6(q) * v6) - amended_potential(x, mu);
}

Vector DspReduced::dR_dxdot(const Vector& x, const Vector& xdot, const MomentumValue&) const {
  full_.check_radii(x[0], x[1]);
  const Vector q = representative(x);
  // The group component of M v vanishes for horizontal v, so only the shape part remains.
  return full_.trivialization().shape_basis().transpose() * (full_.mass_matrix(q) * horizontal_lift(x, xdot));
}

Vector DspReduced::dR_dx(const Vector& x, const Vector& xdot, const MomentumValue& mu) const {
  full_.check_radii(x[0], x[1]);
  const Vector q = representative(x);
  const Vector v = horizontal_lift(x, xdot);
  const auto dm = full_.mass_matrix_derivatives(q);
  const Matrix& ex = full_.trivialization().shape_basis();
  const auto& p = full_.params();
  const double m = mu.mu[0];
  const double in = inertia(x);
  const auto din = inertia_gradient(x);

  Vector dvmu(3);
  dvmu << p.g * (p.m1 + p.m2) * x[0] / full_.z1(x[0]), p.g * p.m2 * x[1] / full_.z2(x[1]), 0.0;
  dvmu -= 0.5 * m * m / (in * in) * Vector(din);

  Vector out(3);
  for (int k = 0; k < 3; ++k) {
    Matrix dmk = Matrix::Zero(4, 4);
    for (int j = 0; j < 4; ++j) dmk += ex(j, k) * dm[j];
    out[k] = 0.5 * v.dot(dmk * v) - dvmu[k];
  }
  return out;
}

Matrix DspReduced::reduced_metric(const Vector& x) const {
  full_.check_radii(x[0], x[1]);
  const auto& triv = full_.trivialization();
  const Matrix c = triv.shape_basis() - triv.group_basis() * connection_A(x);
  return c.transpose() * full_.mass_matrix(representative(x)) * c;
}

std::shared_ptr<const DoubleSphericalPendulum> dsp_system(const DspParams& params) {
  return std::make_shared<const DoubleSphericalPendulum>(params);
}

std::shared_ptr<const DspReduced> dsp_reduced(const DspParams& params) {
  return std::make_shared<const DspReduced>(params);
}

}  // namespace routh
