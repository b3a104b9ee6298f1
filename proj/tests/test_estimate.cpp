#include <gtest/gtest.h>

#include <cmath>

#include "lolog/estimate.hpp"
#include "lolog/oracle.hpp"
#include "lolog/sampler.hpp"
#include "support.hpp"

using namespace lolog;
using lolog::test::make_model;
using lolog::test::random_graph;
using lolog::test::vec;

namespace {

MomentSource exact_source(const Model& model) {
  return [&model](const Vector& theta, int) {
    const auto law = exact_law(model, theta, model.terms);
    return MomentEvaluation{law.mean_h, -law.dmean_h, law.cov_h};
  };
}

Model nodematch_model(Vertex n) {
  auto attrs = std::make_shared<VertexAttributes>(static_cast<std::size_t>(n));
  std::vector<std::string> groups;
  for (Vertex v = 0; v < n; ++v) groups.push_back(std::string(1, static_cast<char>('a' + v % 3)));
  attrs->add_categorical("team", groups);
  Model m = make_model(n, {TermSpec::edges(), TermSpec::nodematch("team")});
  m.attributes = attrs;
  return m;
}

}  // namespace

TEST(Estimate, VariationalEqualsDirectLogisticMle) {
  const Model m = nodematch_model(60);
  const Graph g = sample_graph(m, vec({-2.0, 1.0}), 5).graph;
  const FitResult fit = variational_fit(g, m, 20, 1);
  // Direct design, built without the change-statistic machinery.
  const auto& team = m.attributes->at("team").codes;
  Matrix x(g.dyad_count(), 2);
  Vector y(g.dyad_count());
  Eigen::Index r = 0;
  for (Vertex i = 0; i < 60; ++i) {
    for (Vertex j = i + 1; j < 60; ++j, ++r) {
      x(r, 0) = 1.0;
      x(r, 1) = team[static_cast<std::size_t>(i)] == team[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
      y(r) = g.has_edge({i, j}) ? 1.0 : 0.0;
    }
  }
  const auto direct = irls_logistic(x, y, Vector::Ones(r));
  EXPECT_LT((fit.theta - direct.coef).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((fit.covariance - direct.covariance).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Estimate, VariationalFlagsSeparationAndZeroColumns) {
  const auto m = make_model(6, {TermSpec::edges()});
  const FitResult empty = variational_fit(Graph(6, false), m, 3, 1);
  EXPECT_FALSE(empty.warnings.empty());
  EXPECT_LT(empty.theta(0), -10.0);

  auto attrs = std::make_shared<VertexAttributes>(4);
  attrs->add_categorical("g", {"a", "b", "c", "d"});
  Model nm = make_model(4, {TermSpec::edges(), TermSpec::nodematch("g")});
  nm.attributes = attrs;
  EXPECT_THROW(variational_fit(random_graph(4, 0.5, 1), nm, 2, 1), InvalidArgument);
}

TEST(Estimate, VariationalOrderDependentRuns) {
  Model m = make_model(40, {TermSpec::edges(), TermSpec::pref_attach(1.0)}, OrderSpec::random_entry(40));
  const auto d = sample_graph(m, vec({0.0, 1.0}), 3);
  const FitResult fit = variational_fit(d.graph, m, 10, 2);
  EXPECT_TRUE(fit.converged);
  EXPECT_TRUE(fit.theta.allFinite());
  EXPECT_LT(fit.residuals.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Estimate, MomEdgesOnlyMatchesClosedForm) {
  const auto m = make_model(10, {TermSpec::edges()});
  Graph g(10, false);
  for (std::int64_t i = 0; i < 20; ++i) g.add_edge(g.dyad_at(2 * i + (i % 2)));
  ASSERT_EQ(g.edge_count(), 20);
  FitConfig cfg;
  cfg.r = 2000;
  cfg.epsilon = 0.005;
  cfg.master_seed = 3;
  const FitResult fit = mom_fit(g, m, cfg);
  ASSERT_TRUE(fit.converged);
  const double se = std::sqrt(fit.covariance(0, 0));
  EXPECT_NEAR(fit.theta(0), std::log(20.0 / 25.0), std::sqrt(cfg.epsilon) * se + 3 * se / std::sqrt(cfg.r));
  // Termination bounds every standardized residual by sqrt(ε).
  EXPECT_LT(fit.trace.back().objective, cfg.epsilon);
  EXPECT_NEAR(fit.covariance(0, 0), 1.0 / (45 * (20.0 / 45) * (25.0 / 45)), 0.1 * fit.covariance(0, 0));
}

TEST(Estimate, MomExpectationMatchesOracle) {
  const auto m = make_model(3, {TermSpec::edges(), TermSpec::of(TermKind::triangles)});
  const Vector truth = vec({-0.5, 0.3});
  const Vector target = exact_law(m, truth).mean_g;
  FitConfig cfg;
  cfg.r = 4000;
  cfg.epsilon = 0.01;
  cfg.master_seed = 8;
  const FitResult fit = moment_search(target, mc_moment_source(m, m.terms, target, cfg), vec({0, 0}), cfg);
  ASSERT_TRUE(fit.converged);
  const auto at = exact_law(m, fit.theta);
  const std::vector<TermSpec> none;
  const auto check = sample_batch_stats(m, fit.theta, none, 4000, 99);
  const Vector mc = column_means(check.g);
  const Vector sd = sample_cov(check.g).diagonal().cwiseSqrt();
  for (Eigen::Index k = 0; k < 2; ++k) EXPECT_LT(std::abs(mc(k) - at.mean_g(k)), 3 * sd(k) / std::sqrt(4000.0));
}

TEST(Estimate, ExactSourceConvergesAndNeverIncreases) {
  const auto m = make_model(3, {TermSpec::edges(), TermSpec::of(TermKind::triangles)});
  const Vector truth = vec({-0.5, 0.3});
  const Vector target = exact_law(m, truth, m.terms).mean_h;
  FitConfig cfg;
  cfg.epsilon = 1e-14;
  cfg.max_iters = 60;
  const FitResult fit = moment_search(target, exact_source(m), vec({2.0, -2.0}), cfg);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT((fit.theta - truth).cwiseAbs().maxCoeff(), 1e-6);
  double last = INFINITY;
  for (const auto& rec : fit.trace) {
    if (!rec.accepted) continue;
    EXPECT_LE(rec.objective_prev_weight, last + 1e-12);
    last = rec.objective;
  }
}

TEST(Estimate, MomFixedPoint) {
  const Model m = nodematch_model(40);
  const Graph g = sample_graph(m, vec({-1.5, 0.8}), 12).graph;
  FitConfig cfg;
  cfg.r = 1000;
  cfg.master_seed = 4;
  const FitResult first = mom_fit(g, m, cfg);
  ASSERT_TRUE(first.converged);
  cfg.theta0 = first.theta;
  cfg.master_seed = 5;
  const FitResult again = mom_fit(g, m, cfg);
  EXPECT_TRUE(again.converged);
  EXPECT_LE(again.iterations, 2);
}

TEST(Estimate, GmmWithHEqualGAgreesWithMom) {
  const Model m = nodematch_model(50);
  const Graph g = sample_graph(m, vec({-1.8, 0.9}), 21).graph;
  FitConfig cfg;
  cfg.master_seed = 6;
  const FitResult mom = mom_fit(g, m, cfg);
  cfg.master_seed = 7;
  const FitResult gmm = gmm_fit(g, m, m.terms, cfg);
  ASSERT_TRUE(mom.converged);
  ASSERT_TRUE(gmm.converged);
  for (Eigen::Index j = 0; j < 2; ++j) {
    const double combined = std::sqrt(mom.covariance(j, j) + gmm.covariance(j, j));
    EXPECT_LT(std::abs(mom.theta(j) - gmm.theta(j)), 3 * combined);
  }
}

TEST(Estimate, CovarianceIsSymmetricPsd) {
  const Model m = nodematch_model(30);
  const Graph g = sample_graph(m, vec({-1.0, 0.5}), 2).graph;
  FitConfig cfg;
  cfg.r = 500;
  const FitResult fit = gmm_fit(g, m, {TermSpec::edges(), TermSpec::nodematch("team"), TermSpec::of(TermKind::two_stars)}, cfg);
  EXPECT_TRUE(fit.covariance.isApprox(fit.covariance.transpose()));
  EXPECT_GE(min_eigenvalue(fit.covariance), -1e-10 * fit.covariance.trace());
}

TEST(Estimate, RejectsInvalidRequests) {
  Model pa = make_model(20, {TermSpec::edges(), TermSpec::pref_attach(1.0)}, OrderSpec::random_entry(20));
  const Graph g = sample_graph(pa, vec({0, 1}), 1).graph;
  EXPECT_THROW(mom_fit(g, pa), InvalidArgument);
  EXPECT_THROW(gmm_fit(g, pa, {TermSpec::edges()}), InvalidArgument);
  EXPECT_THROW(gmm_fit(g, pa, {TermSpec::edges(), TermSpec::pref_attach(1.0)}), InvalidArgument);
  FitConfig bad;
  bad.r = 1;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = FitConfig{};
  bad.beta1 = 1.5;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Estimate, NonConvergenceReturnsBestSoFar) {
  const Model m = nodematch_model(30);
  const Graph g = sample_graph(m, vec({-1.0, 0.5}), 2).graph;
  FitConfig cfg;
  cfg.r = 200;
  cfg.max_iters = 2;
  cfg.epsilon = 1e-12;
  cfg.theta0 = vec({1.0, -1.0});
  const FitResult fit = mom_fit(g, m, cfg);
  EXPECT_FALSE(fit.converged);
  EXPECT_EQ(fit.iterations, 2);
  EXPECT_TRUE(fit.theta.allFinite());
}

TEST(Estimate, GradientCheck) {
  const auto edges = make_model(3, {TermSpec::edges()});
  EXPECT_LT(mom_gradient_check(edges, vec({0.4}), 1e-4).max_abs_discrepancy, 1e-6);
  const auto tri = make_model(3, {TermSpec::edges(), TermSpec::of(TermKind::triangles)});
  EXPECT_LT(mom_gradient_check(tri, vec({0.2, -0.1}), 1e-4).max_abs_discrepancy, 1e-5);
  const auto zero = mom_gradient_check(edges, vec({0.0}), 1e-4);
  EXPECT_NEAR(zero.analytic(0, 0), 3.0 / 4.0, 1e-12);
  EXPECT_THROW(mom_gradient_check(make_model(5, {TermSpec::edges()}), vec({0}), 1e-4), InvalidArgument);
}
