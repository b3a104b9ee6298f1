#include <gtest/gtest.h>

#include <cmath>

#include "lolog/gof.hpp"
#include "lolog/sampler.hpp"
#include "support.hpp"

using namespace lolog;
using lolog::test::make_model;
using lolog::test::vec;

TEST(Gof, QuantilesInterpolate) {
  const std::vector<double> v{5, 1, 4, 2, 3};
  EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.05), 1.2);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.95), 4.8);
  EXPECT_DOUBLE_EQ(quantile(v, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(quantile({7.0}, 0.3), 7.0);
  EXPECT_THROW(quantile({}, 0.5), InvalidArgument);
}

TEST(Gof, LogBinsPreserveCounts) {
  const std::vector<double> counts{5, 3, 2, 1, 1, 0, 0, 4, 2};
  const auto b = log_bin(counts);
  EXPECT_EQ(b.counts, (std::vector<double>{5, 3, 3, 5, 2}));
  EXPECT_DOUBLE_EQ(b.labels[0], 0.0);
  EXPECT_DOUBLE_EQ(b.labels[1], 1.0);
  EXPECT_DOUBLE_EQ(b.labels[2], std::sqrt(6.0));
  EXPECT_DOUBLE_EQ(b.labels[3], std::sqrt(28.0));
  double a = 0.0;
  double c = 0.0;
  for (double x : counts) a += x;
  for (double x : b.counts) c += x;
  EXPECT_DOUBLE_EQ(a, c);
}

TEST(Gof, DegreeRowsSumToN) {
  const auto m = make_model(25, {TermSpec::edges(), TermSpec::of(TermKind::triangles)});
  FitResult fit;
  fit.theta = vec({-1.5, 0.1});
  const Graph observed = sample_graph(m, fit.theta, 1).graph;
  GofOptions opt;
  opt.r = 30;
  opt.stats = {GofStat::degree, GofStat::esp, GofStat::edges};
  const auto reports = gof_run(fit, m, observed, opt);
  ASSERT_EQ(reports.size(), 3U);
  for (const auto& row : reports[0].simulated) {
    double total = 0.0;
    for (double x : row) total += x;
    EXPECT_DOUBLE_EQ(total, 25.0);
  }
  for (std::size_t i = 0; i < reports[1].simulated.size(); ++i) {
    double total = 0.0;
    for (double x : reports[1].simulated[i]) total += x;
    EXPECT_DOUBLE_EQ(total, reports[2].simulated[i][0]);
  }
  for (const auto& rep : reports) {
    EXPECT_EQ(rep.simulated.size(), 30U);
    for (const auto& row : rep.simulated) EXPECT_EQ(row.size(), rep.bins.size());
    EXPECT_EQ(rep.observed.size(), rep.bins.size());
  }
}

TEST(Gof, CheckpointsNeedVertexEntry) {
  const auto m = make_model(10, {TermSpec::edges()});
  FitResult fit;
  fit.theta = vec({0.0});
  GofOptions opt;
  opt.growth_checkpoints = {5};
  EXPECT_THROW(gof_run(fit, m, Graph(10, false), opt), InvalidArgument);
}

TEST(Gof, PrefAttachMeanDegreeIsStableOverGrowth) {
  const auto m = make_model(2000, {TermSpec::edges(), TermSpec::pref_attach(1.0)}, OrderSpec::random_entry(2000));
  FitResult fit;
  fit.theta = vec({0.0, 1.0});
  const Graph observed = sample_graph(m, fit.theta, 3).graph;
  GofOptions opt;
  opt.r = 10;
  opt.stats = {GofStat::degree};
  opt.growth_checkpoints = {500, 1000, 2000};
  const auto reports = gof_run(fit, m, observed, opt);
  ASSERT_EQ(reports.size(), 4U);
  for (std::size_t k = 1; k < reports.size(); ++k) {
    double mean = 0.0;
    for (const auto& row : reports[k].simulated) {
      double sum = 0.0;
      double n = 0.0;
      for (std::size_t d = 0; d < row.size(); ++d) {
        sum += static_cast<double>(d) * row[d];
        n += row[d];
      }
      EXPECT_DOUBLE_EQ(n, reports[k].checkpoint);
      mean += sum / n;
    }
    mean /= static_cast<double>(reports[k].simulated.size());
    EXPECT_NEAR(mean, 2.0, 0.2) << "checkpoint " << reports[k].checkpoint;
  }
}

TEST(Gof, EdgeCountCalibration) {
  const auto m = make_model(30, {TermSpec::edges()});
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph observed = sample_graph(m, vec({-1.0}), derive_seed(404, seed)).graph;
    const FitResult fit = variational_fit(observed, m, 1, seed);
    GofOptions opt;
    opt.r = 100;
    opt.seed = seed;
    opt.stats = {GofStat::edges};
    const auto rep = gof_run(fit, m, observed, opt).front();
    inside += rep.observed[0] >= rep.summary[0].q05 && rep.observed[0] <= rep.summary[0].q95;
  }
  EXPECT_GE(inside, 18);
}

TEST(Gof, StatNames) {
  for (auto s : {GofStat::degree, GofStat::esp, GofStat::edges, GofStat::triangles, GofStat::two_stars,
                 GofStat::transitivity, GofStat::sv_transitivity}) {
    EXPECT_EQ(gof_stat_from_name(gof_stat_name(s)), s);
  }
}
