#include <map>
#include <gtest/gtest.h>

#include <cmath>

#include "lolog/oracle.hpp"
#include "lolog/sampler.hpp"
#include "support.hpp"

using namespace lolog;
using lolog::test::make_model;
using lolog::test::vec;

namespace {

std::vector<Model> tiny_models() {
  auto attrs = std::make_shared<VertexAttributes>(4);
  attrs->add_categorical("g", {"a", "b", "a", "a"});
  std::vector<Model> out;
  out.push_back(make_model(3, {TermSpec::edges(), TermSpec::of(TermKind::triangles)}));
  out.push_back(make_model(3, {TermSpec::edges(), TermSpec::pref_attach(1.0), TermSpec::of(TermKind::shared_nbrs)},
                           OrderSpec::random_entry(3)));
  out.push_back(make_model(4, {TermSpec::edges(), TermSpec::of(TermKind::triangles), TermSpec::of(TermKind::shared_nbrs)}));
  out.push_back(make_model(4, {TermSpec::edges(), TermSpec::pref_attach(1.0), TermSpec::of(TermKind::log_order)},
                           OrderSpec::vertex_entry({{2, 0}, {1, 3}})));
  Model nm = make_model(4, {TermSpec::edges(), TermSpec::nodematch("g")});
  nm.attributes = attrs;
  out.push_back(nm);
  out.push_back(make_model(3, {TermSpec::edges(), TermSpec::of(TermKind::two_stars)}, OrderSpec::random_entry(3), true));
  return out;
}

}  // namespace

TEST(Oracle, OrderEnumerationIsAProbability) {
  for (const auto& m : tiny_models()) {
    const auto orders = enumerate_orders(m);
    const Graph layout = m.empty_graph();
    double total = 0.0;
    // Entry labelings that yield the same dyad sequence pool into p(s).
    std::map<std::vector<Dyad>, double> by_sequence;
    for (const auto& wo : orders) {
      EXPECT_NO_THROW(check_order(layout, wo.order));
      total += std::exp(wo.log_prob);
      by_sequence[wo.order.sequence] += std::exp(wo.log_prob);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (const auto& wo : orders) {
      EXPECT_NEAR(std::log(by_sequence[wo.order.sequence]), log_prob_order(m.order, layout, wo.order), 1e-12);
    }
  }
  EXPECT_EQ(enumerate_orders(make_model(4, {TermSpec::edges()})).size(), 720U);
}

TEST(Oracle, Normalization) {
  Rng rng(4);
  for (const auto& m : tiny_models()) {
    for (int k = 0; k < 5; ++k) {
      Vector theta(static_cast<Eigen::Index>(m.size()));
      for (Eigen::Index j = 0; j < theta.size(); ++j) theta(j) = 4.0 * uniform01(rng) - 2.0;
      const auto law = exact_law(m, theta);
      EXPECT_NEAR(law.total, 1.0, 1e-10);
      double sum = 0.0;
      for (double p : law.graph_prob) {
        EXPECT_GE(p, 0.0);
        sum += p;
      }
      EXPECT_NEAR(sum, 1.0, 1e-10);
      EXPECT_LT((law.mean_g - law.mean_G).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Oracle, ZeroThetaIsUniform) {
  for (const auto& m : tiny_models()) {
    const auto law = exact_law(m, Vector::Zero(static_cast<Eigen::Index>(m.size())));
    for (double p : law.graph_prob) EXPECT_NEAR(p, 1.0 / static_cast<double>(law.graph_prob.size()), 1e-14);
  }
}

TEST(Oracle, SingleDyad) {
  const auto m = make_model(2, {TermSpec::edges()});
  const auto law = exact_law(m, vec({0.8}));
  EXPECT_NEAR(law.graph_prob[1], logistic(0.8), 1e-15);
}

TEST(Oracle, ExtremeThetaStaysFinite) {
  const auto m = make_model(3, {TermSpec::edges(), TermSpec::of(TermKind::triangles)});
  const auto law = exact_law(m, vec({-40.0, 60.0}));
  EXPECT_NEAR(law.total, 1.0, 1e-10);
  EXPECT_TRUE(law.mean_g.allFinite());
}

TEST(Oracle, DyadIndependentLawAgrees) {
  auto attrs = std::make_shared<VertexAttributes>(3);
  attrs->add_categorical("g", {"a", "b", "a"});
  Model m = make_model(3, {TermSpec::edges(), TermSpec::nodematch("g")});
  m.attributes = attrs;
  const Vector theta = vec({-0.4, 1.3});
  const auto probs = exact_dyad_independent_law(m, theta);
  const auto law = exact_law(m, theta);
  for (std::uint64_t mask = 0; mask < 8; ++mask) EXPECT_NEAR(dyad_law_graph_prob(probs, mask), law.graph_prob[mask], 1e-12);

  const auto edges = exact_dyad_independent_law(make_model(30, {TermSpec::edges()}), vec({0.2}));
  for (double p : edges) EXPECT_DOUBLE_EQ(p, logistic(0.2));

  auto distinct = std::make_shared<VertexAttributes>(3);
  distinct->add_categorical("g", {"a", "b", "c"});
  m.attributes = distinct;
  for (double p : exact_dyad_independent_law(m, theta)) EXPECT_DOUBLE_EQ(p, logistic(-0.4));

  EXPECT_THROW(exact_dyad_independent_law(make_model(3, {TermSpec::of(TermKind::triangles)}), vec({1})), InvalidArgument);
}

TEST(Oracle, EdgesOnlyDerivative) {
  // dE(edges)/dθ at θ = 0 is n_d / 4.
  const auto law = exact_law(make_model(4, {TermSpec::edges()}), vec({0}));
  EXPECT_NEAR(law.dmean_g(0, 0), 6.0 / 4.0, 1e-12);
  EXPECT_NEAR(law.mean_g(0), 3.0, 1e-12);
}

TEST(Oracle, RejectsLargeModels) {
  EXPECT_THROW(exact_law(make_model(6, {TermSpec::edges()}), vec({0})), InvalidArgument);
}

TEST(Oracle, MaskRoundTrip) {
  for (std::uint64_t mask = 0; mask < 64; ++mask) EXPECT_EQ(mask_of(graph_from_mask(4, false, mask)), mask);
}
