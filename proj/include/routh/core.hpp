#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace routh {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton iteration exhausted its budget without reaching the tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

/// A step produced a point outside the chart's validity region.
class StepRejected : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at a configuration where the chart or model is singular.
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

class UnsupportedStageCount : public Error {
 public:
  using Error::Error;
};

class MomentumMismatch : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Domain values
// ---------------------------------------------------------------------------

/// A point of the configuration manifold in a named local chart.
struct ConfigPoint {
  Vector coords;
  int chart_id = 0;

  ConfigPoint() = default;
  explicit ConfigPoint(Vector c, int chart = 0) : coords(std::move(c)), chart_id(chart) {}
  Eigen::Index size() const { return coords.size(); }
};

/// A point of shape space S = Q/G.
struct ShapePoint {
  Vector coords;

  ShapePoint() = default;
  explicit ShapePoint(Vector c) : coords(std::move(c)) {}
  Eigen::Index size() const { return coords.size(); }
};

/// Abelian group element in additive coordinates.
struct GroupElement {
  Vector value;

  GroupElement() = default;
  explicit GroupElement(Vector v) : value(std::move(v)) {}

  /// Circle factors reported in (-pi, pi].
  GroupElement normalized(const std::vector<bool>& circle) const;
};

struct MomentumValue {
  Vector mu;

  MomentumValue() = default;
  explicit MomentumValue(Vector m) : mu(std::move(m)) {}
  static MomentumValue scalar(double m) { return MomentumValue(Vector::Constant(1, m)); }
  Eigen::Index size() const { return mu.size(); }
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Component-wise difference a - b, taking the short way round for periodic components.
Vector periodic_difference(const Vector& a, const Vector& b, const std::vector<bool>& periodic);

void require_finite(const Vector& v, const char* what);

// ---------------------------------------------------------------------------
// Root finding and finite differences
// ---------------------------------------------------------------------------

using VectorFunction = std::function<Vector(const Vector&)>;
using MatrixFunction = std::function<Matrix(const Vector&)>;
using ScalarFunction = std::function<double(const Vector&)>;

struct NewtonOptions {
  double tol = 1e-12;  // sup-norm of the residual
  int max_iter = 50;
  // After the tolerance is met, apply one more correction with the last Jacobian.
  // Drives the residual to roundoff, which the conservation checks rely on.
  bool polish = true;
  // Magnitude of the quantities the unknowns are added to. Iteration stops once the
  // Newton correction is below their round-off resolution.
  double scale = 0.0;
};

struct NewtonResult {
  Vector x;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Dense Newton iteration with step halving when a trial point cannot be evaluated.
/// Throws NoConvergence or SingularJacobian.
NewtonResult newton_iterate(const VectorFunction& residual, const MatrixFunction* jacobian,
                            const Vector& guess, const NewtonOptions& opts = {});

Vector newton_solve(const VectorFunction& residual, const std::optional<MatrixFunction>& jacobian,
                    const Vector& guess, double tol = 1e-12, int max_iter = 50);

/// Solves A x = b by LU with partial pivoting; throws SingularJacobian on failure.
Vector lu_solve(const Matrix& a, const Vector& b);

/// Central-difference Jacobian with step cbrt(eps) * max(1, |x_j|).
Matrix fd_jacobian(const VectorFunction& f, const Vector& x);

/// Central-difference Jacobian with an explicit per-component step h_j = step * (1 + |x_j|).
Matrix fd_jacobian(const VectorFunction& f, const Vector& x, double step);

/// Central-difference gradient, h = scale * sqrt(eps) * max(1, |x_i|).
/// Throws NonFiniteValue if f is not finite at a probe point.
Vector fd_gradient(const ScalarFunction& f, const Vector& x, double scale = 1.0);

}  // namespace routh
