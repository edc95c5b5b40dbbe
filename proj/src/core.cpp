#include "routh/core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace routh {

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * std::numbers::pi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
  return w;
}

GroupElement GroupElement::normalized(const std::vector<bool>& circle) const {
  GroupElement out = *this;
  for (Eigen::Index i = 0; i < out.value.size(); ++i) {
    if (static_cast<size_t>(i) < circle.size() && circle[i]) out.value[i] = wrap_angle(out.value[i]);
  }
  return out;
}

Vector periodic_difference(const Vector& a, const Vector& b, const std::vector<bool>& periodic) {
  Vector d = a - b;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (static_cast<size_t>(i) < periodic.size() && periodic[i]) d[i] = wrap_angle(d[i]);
  }
  return d;
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw NonFiniteValue(std::string("non-finite value in ") + what);
}

Vector lu_solve(const Matrix& a, const Vector& b) {
  Eigen::PartialPivLU<Matrix> lu(a);
  // PartialPivLU never reports rank deficiency itself.
  if (!(lu.rcond() > 1e-15)) {
    std::ostringstream os;
    os << "singular linear system (rcond " << lu.rcond() << ")";
    throw SingularJacobian(os.str());
  }
  Vector x = lu.solve(b);
  if (!x.allFinite()) throw SingularJacobian("linear solve produced non-finite values");
  return x;
}

Matrix fd_jacobian(const VectorFunction& f, const Vector& x) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Matrix jac;
  Vector xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = base * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    Vector fp = f(xp);
    xp[j] = x[j] - h;
    Vector fm = f(xp);
    xp[j] = x[j];
    if (j == 0) jac.resize(fp.size(), x.size());
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

Matrix fd_jacobian(const VectorFunction& f, const Vector& x, double step) {
  Matrix jac;
  Vector xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = step * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    Vector fp = f(xp);
    xp[j] = x[j] - h;
    Vector fm = f(xp);
    xp[j] = x[j];
    if (j == 0) jac.resize(fp.size(), x.size());
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

Vector fd_gradient(const ScalarFunction& f, const Vector& x, double scale) {
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = scale * root_eps * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    if (!std::isfinite(fp) || !std::isfinite(fm)) throw NonFiniteValue("fd_gradient: non-finite function value");
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

namespace {

// Residual evaluation that maps model failures at trial points to "no value".
std::optional<Vector> try_eval(const VectorFunction& residual, const Vector& x) {
  try {
    Vector r = residual(x);
    if (!r.allFinite()) return std::nullopt;
    return r;
  } catch (const SingularConfiguration&) {
    return std::nullopt;
  } catch (const NonFiniteValue&) {
    return std::nullopt;
  }
}

}  // namespace

NewtonResult newton_iterate(const VectorFunction& residual, const MatrixFunction* jacobian,
                            const Vector& guess, const NewtonOptions& opts) {
  NewtonResult res;
  res.x = guess;
  Vector r = residual(res.x);
  require_finite(r, "Newton residual at initial guess");
  res.residual_norm = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;

  Matrix jac;
  bool have_jac = false;
  while (res.residual_norm > opts.tol) {
    if (res.iterations >= opts.max_iter) {
      std::ostringstream os;
      os << "Newton failed to converge in " << opts.max_iter << " iterations (residual "
         << res.residual_norm << ")";
      throw NoConvergence(os.str());
    }
    jac = jacobian ? (*jacobian)(res.x) : fd_jacobian(residual, res.x);
    have_jac = true;
    Vector dx = lu_solve(jac, -r);
    // Residual at its round-off floor: the correction no longer moves x representably.
    const double floor = 64 * std::numeric_limits<double>::epsilon() * (1.0 + std::max(opts.scale, res.x.lpNorm<Eigen::Infinity>()));
    if (dx.lpNorm<Eigen::Infinity>() <= floor) break;

    double lambda = 1.0;
    std::optional<Vector> trial_r;
    Vector trial;
    for (int halvings = 0; halvings < 30; ++halvings) {
      trial = res.x + lambda * dx;
      trial_r = try_eval(residual, trial);
      if (trial_r && trial_r->lpNorm<Eigen::Infinity>() < res.residual_norm) break;
      lambda *= 0.5;
      trial_r.reset();
    }
    if (!trial_r) {
      std::ostringstream os;
      os << "Newton line search could not find an admissible step (residual " << res.residual_norm
         << ", step " << dx.lpNorm<Eigen::Infinity>() << ")";
      throw NoConvergence(os.str());
    }
    res.x = trial;
    r = *trial_r;
    res.residual_norm = r.lpNorm<Eigen::Infinity>();
    ++res.iterations;
  }

  if (opts.polish && have_jac && res.residual_norm > 0.0) {
    Vector dx = lu_solve(jac, -r);
    Vector trial = res.x + dx;
    if (auto tr = try_eval(residual, trial); tr && tr->lpNorm<Eigen::Infinity>() <= res.residual_norm) {
      res.x = trial;
      res.residual_norm = tr->lpNorm<Eigen::Infinity>();
    }
  }
  return res;
}

Vector newton_solve(const VectorFunction& residual, const std::optional<MatrixFunction>& jacobian,
                    const Vector& guess, double tol, int max_iter) {
  NewtonOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return newton_iterate(residual, jacobian ? &*jacobian : nullptr, guess, opts).x;
}

}  // namespace routh
