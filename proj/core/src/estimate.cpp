#include "lolog/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lolog/error.hpp"
#include "lolog/oracle.hpp"
#include "lolog/rng.hpp"
#include "lolog/sampler.hpp"

namespace lolog {

namespace {

constexpr double kMinAlpha = 1e-10;

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

struct Accepted {
  Vector theta;
  Vector direction;
  Matrix weight;
  double objective = 0.0;
  double alpha = 0.0;  // step length last used from this point
};

std::vector<int> observed_entry_times(const Model& model) {
  if (model.order.mode != OrderMode::vertex_entry || !model.order.entry_observed()) return {};
  std::vector<int> entry(static_cast<std::size_t>(model.n));
  int t = 1;
  for (const auto& group : model.order.entry_groups) entry[static_cast<std::size_t>(group.front())] = t++;
  return entry;
}

}  // namespace

std::string_view method_name(FitMethod method) {
  switch (method) {
    case FitMethod::variational:
      return "variational";
    case FitMethod::mom:
      return "mom";
    case FitMethod::gmm:
      return "gmm";
  }
  return "unknown";
}

void FitConfig::validate() const {
  if (r < 2) throw InvalidArgument("fit: r must be at least 2");
  if (!(epsilon > 0.0)) throw InvalidArgument("fit: epsilon must be positive");
  if (max_iters < 1) throw InvalidArgument("fit: max_iters must be at least 1");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw InvalidArgument("fit: beta1 must lie in (0, 1)");
  if (!(beta2 > 1.0)) throw InvalidArgument("fit: beta2 must exceed 1");
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) throw InvalidArgument("fit: alpha0 must lie in (0, 1]");
  if (variational_orders < 1) throw InvalidArgument("fit: variational_orders must be at least 1");
}

Vector FitResult::standard_errors() const { return covariance.diagonal().cwiseMax(0.0).cwiseSqrt(); }

FitResult moment_search(const Vector& observed, const MomentSource& source, const Vector& theta0,
                        const FitConfig& config) {
  config.validate();
  FitResult out;
  out.observed = observed;
  Vector theta = theta0;
  double alpha = config.alpha0;
  std::optional<Accepted> prev;
  std::optional<IterationRecord> best;
  int evaluations = 0;

  while (evaluations < config.max_iters) {
    const MomentEvaluation ev = source(theta, evaluations);
    ++evaluations;
    const Vector m = observed - ev.mean;
    IterationRecord rec;
    rec.iteration = evaluations;
    rec.theta = theta;
    rec.alpha = prev ? prev->alpha : 0.0;

    const RidgeInverse w = ridge_inverse(ev.omega);
    const Matrix& j = ev.jacobian;
    const Matrix a = j.transpose() * w.inverse * j;
    const Vector score = j.transpose() * w.inverse * m;
    std::optional<Vector> direction;
    try {
      direction = -solve(a, score);
    } catch (const NumericalError&) {
      // Saturated point: the moments no longer respond to θ.
      if (!prev) throw;
    }

    if (prev) {
      rec.objective_prev_weight = m.dot(prev->weight * m);
      if (rec.objective_prev_weight > prev->objective || !direction) {
        // Worse than where we came from: shorten the step and retake it.
        rec.accepted = false;
        rec.objective = std::numeric_limits<double>::quiet_NaN();
        rec.criterion = std::numeric_limits<double>::quiet_NaN();
        out.trace.push_back(rec);
        prev->alpha *= config.beta1;
        if (prev->alpha < kMinAlpha) {
          out.warnings.push_back("step length underflow; stopping at the best point found");
          break;
        }
        alpha = prev->alpha;
        theta = prev->theta + alpha * prev->direction;
        continue;
      }
    }

    if (w.warning) out.warnings.push_back("moment covariance needed a ridge of " + std::to_string(w.ridge));
    rec.objective = m.dot(w.inverse * m);
    if (!prev) rec.objective_prev_weight = rec.objective;
    rec.criterion = -score.dot(*direction);
    out.trace.push_back(rec);
    out.objective_trace.push_back(rec.objective);
    if (!best || rec.criterion < best->criterion) best = rec;

    if (rec.criterion < config.epsilon) {
      out.converged = true;
      break;
    }
    prev = Accepted{theta, *direction, w.inverse, rec.objective, alpha};
    theta = theta + alpha * *direction;
    alpha = std::min(1.0, config.beta2 * alpha);
  }

  out.iterations = evaluations;
  if (!best) throw NumericalError("moment search made no accepted evaluation");
  out.theta = best->theta;
  out.criterion = best->criterion;
  if (!out.converged) out.warnings.push_back("did not converge within " + std::to_string(config.max_iters) + " iterations");

  // Covariance and residuals from a fresh evaluation at θ̂.
  const MomentEvaluation ev = source(out.theta, config.max_iters + 1);
  const RidgeInverse w = ridge_inverse(ev.omega);
  const Matrix& j = ev.jacobian;
  const Matrix bread = inverse(j.transpose() * w.inverse * j);
  const Matrix meat = j.transpose() * w.inverse * ev.omega * w.inverse * j;
  out.covariance = symmetrize(bread * meat * bread.transpose());
  out.residuals = observed - ev.mean;
  return out;
}

MomentSource mc_moment_source(const Model& model, const std::vector<TermSpec>& moments, const Vector& observed,
                              const FitConfig& config) {
  if (static_cast<std::size_t>(observed.size()) != moments.size()) {
    throw InvalidArgument("observed moment vector does not match the moment list");
  }
  // When the moments are the model's own terms, g already holds them.
  const bool use_g = moments.size() == model.terms.size() &&
                     std::equal(moments.begin(), moments.end(), model.terms.begin(), [](const TermSpec& a, const TermSpec& b) {
                       return a.label() == b.label();
                     });
  return [&model, moments, use_g, config](const Vector& theta, int iteration) {
    const std::vector<TermSpec> none;
    const auto stats = sample_batch_stats(model, theta, use_g ? none : moments, config.r,
                                          derive_seed(config.master_seed, static_cast<std::uint64_t>(iteration) + 1),
                                          config.threads);
    const Matrix& h = use_g ? stats.g : stats.h;
    MomentEvaluation ev;
    ev.mean = column_means(h);
    ev.jacobian = cross_cov(h, stats.G) - cross_cov(h, stats.g);
    ev.omega = sample_cov(h);
    return ev;
  };
}

Vector observed_statistics(const Graph& observed, const Model& model, const std::vector<TermSpec>& stats) {
  const auto entry = observed_entry_times(model);
  for (const auto& t : stats) {
    if (t.kind == TermKind::log_order && entry.empty()) {
      throw InvalidArgument("log-order has no observed value unless the entry sequence is fixed");
    }
  }
  const auto values = evaluate_statistics(stats, observed, model.attrs(), entry);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

FitResult variational_fit(const Graph& observed, const Model& model, int r, std::uint64_t seed) {
  model.validate();
  if (r < 1) throw InvalidArgument("variational fit needs at least one ordering");
  if (observed.size() != model.n || observed.directed() != model.directed) {
    throw InvalidArgument("observed graph does not match the model's vertex set");
  }
  // Every ordering yields the same rows when all terms are dyad independent.
  const int orders = model.dyad_independent() ? 1 : r;
  const auto nd = observed.dyad_count();
  const auto q = static_cast<Eigen::Index>(model.size());
  const Eigen::Index rows = nd * orders;
  Matrix x(rows, q);
  Vector y(rows);
  ChangeStatEngine engine(model);
  std::vector<double> c(model.size());
  Eigen::Index row = 0;
  for (int k = 0; k < orders; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const EdgeOrder order = sample_order(model.order, observed, rng);
    engine.reset();
    for (const Dyad& d : order.sequence) {
      engine.prepare(d, order.entry_times);
      engine.change_stats(d, c);
      for (Eigen::Index j = 0; j < q; ++j) x(row, j) = c[static_cast<std::size_t>(j)];
      const bool edge = observed.has_edge(d);
      y(row) = edge ? 1.0 : 0.0;
      if (edge) engine.commit_edge(d);
      ++row;
    }
  }
  const auto labels = model.labels();
  for (Eigen::Index j = 0; j < q; ++j) {
    if (x.col(j).cwiseAbs().maxCoeff() == 0.0) {
      throw InvalidArgument("term '" + labels[static_cast<std::size_t>(j)] +
                            "' has zero change statistics on the observed graph and is not identifiable");
    }
  }
  const Vector weights = Vector::Constant(rows, 1.0 / orders);
  const LogisticFit fit = irls_logistic(x, y, weights);

  FitResult out;
  out.method = FitMethod::variational;
  out.labels = labels;
  out.moment_labels = labels;
  out.theta = fit.coef;
  out.covariance = symmetrize(fit.covariance);
  Vector p(rows);
  for (Eigen::Index i = 0; i < rows; ++i) p(i) = logistic(x.row(i).dot(fit.coef));
  out.residuals = x.transpose() * ((y - p).cwiseProduct(weights));
  out.objective_trace = fit.loglik_trace;
  out.converged = fit.converged;
  out.iterations = fit.iterations;
  out.criterion = out.residuals.norm();
  if (fit.separation) out.warnings.push_back("separation: some coefficient diverges; estimates are unreliable");
  if (!fit.converged && !fit.separation) out.warnings.push_back("logistic regression did not converge");
  return out;
}

namespace {

Vector starting_point(const Graph& observed, const Model& model, const FitConfig& config, FitResult& into) {
  if (config.theta0) {
    if (static_cast<std::size_t>(config.theta0->size()) != model.size()) {
      throw InvalidArgument("theta0 has the wrong dimension");
    }
    return *config.theta0;
  }
  const FitResult start = variational_fit(observed, model, config.variational_orders, derive_seed(config.master_seed, 0));
  for (const auto& w : start.warnings) into.warnings.push_back("variational start: " + w);
  return start.theta;
}

}  // namespace

FitResult mom_fit(const Graph& observed, const Model& model, const FitConfig& config) {
  model.validate();
  config.validate();
  for (const auto& t : model.terms) {
    if (!model.term_order_independent(t)) {
      throw InvalidArgument("term '" + t.label() + "' depends on the ordering; use the gmm method");
    }
  }
  FitResult pre;
  const Vector theta0 = starting_point(observed, model, config, pre);
  const Vector g_obs = observed_statistics(observed, model, model.terms);
  FitResult out = moment_search(g_obs, mc_moment_source(model, model.terms, g_obs, config), theta0, config);
  out.method = FitMethod::mom;
  out.labels = model.labels();
  out.moment_labels = out.labels;
  out.warnings.insert(out.warnings.begin(), pre.warnings.begin(), pre.warnings.end());
  return out;
}

FitResult gmm_fit(const Graph& observed, const Model& model, const std::vector<TermSpec>& moments,
                  const FitConfig& config) {
  model.validate();
  config.validate();
  if (moments.size() < model.size()) {
    throw InvalidArgument("gmm needs at least as many moment statistics (" + std::to_string(moments.size()) +
                          ") as parameters (" + std::to_string(model.size()) + ")");
  }
  for (const auto& t : moments) {
    validate_term(t, model.attrs());
    if (!moment_only(t.kind) && !model.term_order_independent(t)) {
      throw InvalidArgument("moment statistic '" + t.label() + "' depends on the ordering");
    }
  }
  FitResult pre;
  const Vector theta0 = starting_point(observed, model, config, pre);
  const Vector h_obs = observed_statistics(observed, model, moments);
  FitResult out = moment_search(h_obs, mc_moment_source(model, moments, h_obs, config), theta0, config);
  out.method = FitMethod::gmm;
  out.labels = model.labels();
  for (const auto& t : moments) out.moment_labels.push_back(t.label());
  out.warnings.insert(out.warnings.begin(), pre.warnings.begin(), pre.warnings.end());
  return out;
}

GradientCheck mom_gradient_check(const Model& model, const Vector& theta, double delta) {
  if (model.n > 4) throw InvalidArgument("gradient check needs n <= 4");
  if (!(delta > 0.0)) throw InvalidArgument("gradient check needs a positive step");
  GradientCheck out;
  out.analytic = exact_law(model, theta).dmean_g;
  const auto q = static_cast<Eigen::Index>(model.size());
  out.numeric = Matrix(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    Vector up = theta;
    Vector down = theta;
    up(j) += delta;
    down(j) -= delta;
    out.numeric.col(j) = (exact_law(model, up).mean_g - exact_law(model, down).mean_g) / (2.0 * delta);
  }
  out.max_abs_discrepancy = (out.analytic - out.numeric).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace lolog
