#include "lolog/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lolog/error.hpp"

namespace lolog {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string(what) + " has non-finite entries");
}

}  // namespace

Vector solve(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols()) throw InvalidArgument("solve needs a square matrix");
  if (a.rows() != b.size()) throw InvalidArgument("solve: dimension mismatch");
  require_finite(a, "system matrix");
  if (a.rows() == 0) return Vector(0);
  Eigen::FullPivLU<Matrix> lu(a);
  const auto& u = lu.matrixLU();
  double max_pivot = 0.0;
  double min_pivot = INFINITY;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    max_pivot = std::max(max_pivot, std::abs(u(i, i)));
    min_pivot = std::min(min_pivot, std::abs(u(i, i)));
  }
  if (max_pivot == 0.0 || min_pivot < 1e-12 * max_pivot) {
    throw NumericalError("singular system: relative pivot " +
                         std::to_string(max_pivot == 0.0 ? 0.0 : min_pivot / max_pivot) + " < 1e-12");
  }
  return lu.solve(b);
}

Matrix solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) throw InvalidArgument("solve needs a square matrix");
  if (a.rows() != b.rows()) throw InvalidArgument("solve: dimension mismatch");
  require_finite(a, "system matrix");
  if (a.rows() == 0) return Matrix(0, b.cols());
  Eigen::FullPivLU<Matrix> lu(a);
  const auto& u = lu.matrixLU();
  double max_pivot = 0.0;
  double min_pivot = INFINITY;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    max_pivot = std::max(max_pivot, std::abs(u(i, i)));
    min_pivot = std::min(min_pivot, std::abs(u(i, i)));
  }
  if (max_pivot == 0.0 || min_pivot < 1e-12 * max_pivot) {
    throw NumericalError("singular system: relative pivot " +
                         std::to_string(max_pivot == 0.0 ? 0.0 : min_pivot / max_pivot) + " < 1e-12");
  }
  return lu.solve(b);
}

Vector column_means(const Matrix& x) {
  if (x.rows() == 0) throw InvalidArgument("mean of zero rows");
  return x.colwise().mean().transpose();
}

Matrix cross_cov(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows()) throw InvalidArgument("cross_cov: row counts differ");
  if (x.rows() < 2) throw InvalidArgument("covariance needs at least two rows");
  const Matrix xc = x.rowwise() - x.colwise().mean();
  const Matrix yc = y.rowwise() - y.colwise().mean();
  return (xc.transpose() * yc) / static_cast<double>(x.rows() - 1);
}

Matrix sample_cov(const Matrix& x) {
  Matrix c = cross_cov(x, x);
  return 0.5 * (c + c.transpose());
}

RidgeInverse ridge_inverse(const Matrix& s) {
  if (s.rows() != s.cols()) throw InvalidArgument("ridge_inverse needs a square matrix");
  require_finite(s, "covariance matrix");
  const Eigen::Index p = s.rows();
  if (p == 0) return {Matrix(0, 0), 0.0, false};
  const double scale = s.diagonal().mean();
  if (!(scale > 0.0)) throw NumericalError("covariance matrix has no positive variance; cannot invert");
  const Matrix sym = 0.5 * (s + s.transpose());
  for (double lambda = 1e-8; lambda <= 1e8; lambda *= 10.0) {
    Matrix reg = sym;
    reg.diagonal().array() += lambda * scale;
    Eigen::LLT<Matrix> llt(reg);
    if (llt.info() == Eigen::Success) {
      return {llt.solve(Matrix::Identity(p, p)), lambda, lambda > 1e-4};
    }
  }
  throw NumericalError("covariance matrix stays indefinite after ridge escalation");
}

double hotelling_t2(const Vector& resid, const Matrix& cov) {
  if (!resid.allFinite()) throw NumericalError("residual vector has non-finite entries");
  if (resid.size() != cov.rows()) throw InvalidArgument("hotelling_t2: dimension mismatch");
  if (resid.isZero(0.0)) return 0.0;
  const auto inv = ridge_inverse(cov);
  return std::max(0.0, resid.dot(inv.inverse * resid));
}

double logistic(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

namespace {

// log(1 + e^x) without overflow.
double log1pexp(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double weighted_loglik(const Vector& eta, const Vector& y, const Vector& w) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += w(i) * (y(i) * eta(i) - log1pexp(eta(i)));
  return ll;
}

}  // namespace

LogisticFit irls_logistic(const Matrix& x, const Vector& y, const Vector& weights, const LogisticOptions& options) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (y.size() != n || weights.size() != n) throw InvalidArgument("irls_logistic: dimension mismatch");
  if (n == 0 || p == 0) throw InvalidArgument("irls_logistic: empty design");
  require_finite(x, "design matrix");
  for (Eigen::Index j = 0; j < p; ++j) {
    if (x.col(j).isZero(0.0)) {
      throw InvalidArgument("design column " + std::to_string(j) + " is identically zero");
    }
  }

  LogisticFit fit;
  fit.coef = Vector::Zero(p);
  Vector eta = Vector::Zero(n);
  double ll = weighted_loglik(eta, y, weights);
  fit.loglik_trace.push_back(ll);
  Matrix info(p, p);

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    Vector mu(n);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = logistic(eta(i));
      v(i) = weights(i) * mu(i) * (1.0 - mu(i));
    }
    const Vector score = x.transpose() * (weights.array() * (y - mu).array()).matrix();
    info.noalias() = x.transpose() * v.asDiagonal() * x;
    fit.iterations = iter - 1;
    if (score.cwiseAbs().maxCoeff() < options.score_tol) {
      fit.converged = true;
      break;
    }
    Vector step;
    Eigen::LDLT<Matrix> ldlt(info);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      step = ldlt.solve(score);
    }
    if (step.size() != p || !step.allFinite()) step = info.completeOrthogonalDecomposition().solve(score);

    // Step halving keeps the likelihood monotone.
    double t = 1.0;
    bool improved = false;
    for (int half = 0; half < 40; ++half, t *= 0.5) {
      const Vector trial = fit.coef + t * step;
      const Vector trial_eta = x * trial;
      const double trial_ll = weighted_loglik(trial_eta, y, weights);
      if (trial_ll >= ll) {
        const double gain = trial_ll - ll;
        fit.coef = trial;
        eta = trial_eta;
        ll = trial_ll;
        improved = gain > 0.0;
        break;
      }
    }
    fit.loglik_trace.push_back(ll);
    fit.iterations = iter;
    if (fit.coef.cwiseAbs().maxCoeff() > options.separation_bound) {
      fit.separation = true;
      break;
    }
    if (!improved) {
      // No representable improvement left: the score is at its rounding floor.
      fit.converged = score.cwiseAbs().maxCoeff() < options.score_tol * std::max(1.0, weights.sum());
      break;
    }
  }

  {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = logistic(eta(i));
      v(i) = weights(i) * m * (1.0 - m);
    }
    info.noalias() = x.transpose() * v.asDiagonal() * x;
  }
  Eigen::FullPivLU<Matrix> lu(info);
  if (lu.isInvertible()) {
    fit.covariance = lu.inverse();
    fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose());
  } else {
    fit.covariance = Matrix::Constant(p, p, std::numeric_limits<double>::infinity());
  }
  // Fitted probabilities numerically at 0 or 1 mean the data are separated.
  if (fit.coef.cwiseAbs().maxCoeff() > options.separation_bound || eta.cwiseAbs().maxCoeff() > options.separation_eta) {
    fit.separation = true;
  }
  return fit;
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double min_eigenvalue(const Matrix& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace lolog
