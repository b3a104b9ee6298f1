#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lolog {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Solves A x = b with a fully pivoted LU. Throws NumericalError when the
/// smallest pivot is below 1e-12 relative to the largest.
Vector solve(const Matrix& a, const Vector& b);
Matrix solve(const Matrix& a, const Matrix& b);

/// a^{-1} via solve().
inline Matrix inverse(const Matrix& a) { return solve(a, Matrix(Matrix::Identity(a.rows(), a.cols()))); }

/// Unbiased covariance (divisor r - 1) of the rows of x. Requires r >= 2.
Matrix sample_cov(const Matrix& x);

/// Unbiased cross-covariance: entry (k, j) is cov(x_k, y_j). Same row count.
Matrix cross_cov(const Matrix& x, const Matrix& y);

Vector column_means(const Matrix& x);

struct RidgeInverse {
  Matrix inverse;
  double ridge = 0.0;      // multiplier λ actually used
  bool warning = false;    // λ had to exceed 1e-4
};

/// Inverse of a symmetric PSD matrix after adding λ·mean(diag)·I, starting at
/// λ = 1e-8 and escalating ×10 until a Cholesky factorization succeeds.
RidgeInverse ridge_inverse(const Matrix& s);

/// resid' cov^{-1} resid, with the covariance ridge-regularized as above.
double hotelling_t2(const Vector& resid, const Matrix& cov);

struct LogisticFit {
  Vector coef;
  Matrix covariance;              // inverse weighted Fisher information
  std::vector<double> loglik_trace;
  int iterations = 0;
  bool converged = false;
  bool separation = false;        // some |coef| > 30
};

struct LogisticOptions {
  double score_tol = 1e-8;
  int max_iters = 100;
  double separation_bound = 30.0;
  double separation_eta = 20.0;
};

/// Weighted logistic regression by iteratively reweighted least squares with
/// step halving, so the log-likelihood never decreases.
LogisticFit irls_logistic(const Matrix& x, const Vector& y, const Vector& weights,
                          const LogisticOptions& options = {});

/// Numerically stable logistic function.
double logistic(double eta);

/// Two-sided normal tail probability 2·(1 - Φ(|z|)).
double normal_two_sided_p(double z);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& s);

}  // namespace lolog
