#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lolog/model.hpp"
#include "lolog/numerics.hpp"

namespace lolog {

enum class FitMethod { variational, mom, gmm };

std::string_view method_name(FitMethod method);

struct FitConfig {
  int r = 1000;                 // draws per iteration
  /// Stop when the Newton decrement of the moment objective falls below
  /// this. For MOM that is the Hotelling statistic m' cov(g)^{-1} m.
  double epsilon = 0.1;
  int max_iters = 100;
  double beta1 = 0.5;
  double beta2 = 1.2;
  double alpha0 = 1.0;
  std::uint64_t master_seed = 1;
  int variational_orders = 20;
  std::optional<Vector> theta0; // skip the variational start
  int threads = 0;

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;
  Vector theta;
  double objective = 0.0;           // m' W m with this iteration's W
  double objective_prev_weight = 0.0; // m' W m with the previous accepted W
  double criterion = 0.0;           // Newton decrement; NaN for rejected points
  double alpha = 0.0;               // step length used to reach this θ
  bool accepted = true;
};

struct FitResult {
  FitMethod method = FitMethod::variational;
  std::vector<std::string> labels;         // one per θ
  std::vector<std::string> moment_labels;  // one per residual
  Vector theta;
  Matrix covariance;
  Vector observed;    // g(y) for MOM, h(y) for GMM, empty for variational
  Vector residuals;   // observed - E(·) at θ̂; score for variational
  std::vector<IterationRecord> trace;
  std::vector<double> objective_trace;
  bool converged = false;
  int iterations = 0;
  double criterion = 0.0;
  std::vector<std::string> warnings;

  Vector standard_errors() const;
};

/// Moment information at θ: the mean of h, the Jacobian of the residual
/// m(θ) = h_obs - E h (entry (k, j) = ∂m_k/∂θ_j) and the covariance of h.
struct MomentEvaluation {
  Vector mean;
  Matrix jacobian;
  Matrix omega;
};

/// Evaluates the moments at θ for a given iteration index (MC sources seed
/// their batch from it; exact sources ignore it).
using MomentSource = std::function<MomentEvaluation(const Vector& theta, int iteration)>;

/// Damped Gauss–Newton search on m' W m with continuously updated
/// W = cov(h)^{-1}. A point whose objective under the previous W exceeds the
/// previous point's is rejected: α shrinks by β1 and the step is retaken from
/// the previous point. Accepted steps grow α by β2, capped at 1.
FitResult moment_search(const Vector& observed, const MomentSource& source, const Vector& theta0,
                        const FitConfig& config);

/// Monte Carlo moment source: r forward draws per evaluation.
MomentSource mc_moment_source(const Model& model, const std::vector<TermSpec>& moments, const Vector& observed,
                              const FitConfig& config);

/// Maximizes the Monte Carlo variational bound: the observed graph is
/// replayed along r sampled orderings and the pooled rows are fit by
/// weighted logistic regression.
FitResult variational_fit(const Graph& observed, const Model& model, int r, std::uint64_t seed);

/// Method of moments on g; every term must be order independent.
FitResult mom_fit(const Graph& observed, const Model& model, const FitConfig& config = {});

/// Generalized method of moments on order-independent statistics h.
FitResult gmm_fit(const Graph& observed, const Model& model, const std::vector<TermSpec>& moments,
                  const FitConfig& config = {});

/// Observed statistics. Uses the fixed entry sequence when the order spec
/// determines one (needed for log-order).
Vector observed_statistics(const Graph& observed, const Model& model, const std::vector<TermSpec>& stats);

struct GradientCheck {
  Matrix analytic;     // ∂E g_k/∂θ_j from the covariance identity
  Matrix numeric;      // central differences of exact E g
  double max_abs_discrepancy = 0.0;
};

/// Compares the covariance form of ∂E(g)/∂θ with finite differences, both
/// from exact enumeration. Tiny models only.
GradientCheck mom_gradient_check(const Model& model, const Vector& theta, double delta);

}  // namespace lolog
