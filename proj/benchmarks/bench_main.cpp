#include <benchmark/benchmark.h>

#include "lolog/estimate.hpp"
#include "lolog/sampler.hpp"
#include "lolog/statistics.hpp"

using namespace lolog;

namespace {

Model growth_model(Vertex n) {
  Model m;
  m.n = n;
  m.terms = {TermSpec::edges(), TermSpec::pref_attach(1.0)};
  m.order = OrderSpec::random_entry(n);
  return m;
}

Vector theta2(double a, double b) {
  Vector t(2);
  t << a, b;
  return t;
}

void BM_GenericTriangleDraw(benchmark::State& state) {
  Model m;
  m.n = static_cast<Vertex>(state.range(0));
  m.terms = {TermSpec::edges(), TermSpec::of(TermKind::triangles)};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_graph(m, theta2(-5.0, 1.0), seed++).g);
  state.SetItemsProcessed(state.iterations() * (state.range(0) * (state.range(0) - 1) / 2));
}
BENCHMARK(BM_GenericTriangleDraw)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_GenericPrefAttachDraw(benchmark::State& state) {
  const Model m = growth_model(static_cast<Vertex>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_graph(m, theta2(0.0, 1.0), seed++).g);
  state.SetItemsProcessed(state.iterations() * (state.range(0) * (state.range(0) - 1) / 2));
}
BENCHMARK(BM_GenericPrefAttachDraw)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ThinnedPrefAttachDraw(benchmark::State& state) {
  const Model m = growth_model(static_cast<Vertex>(state.range(0)));
  SampleOptions opt;
  opt.record_order = false;
  opt.accumulate_expectations = false;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_graph(m, theta2(0.0, 1.0), seed++, opt).g);
}
BENCHMARK(BM_ThinnedPrefAttachDraw)->Arg(2000)->Arg(16000)->Unit(benchmark::kMillisecond);

void BM_VariationalFit(benchmark::State& state) {
  const Model m = growth_model(300);
  const Graph g = sample_graph(m, theta2(0.0, 1.0), 1).graph;
  for (auto _ : state) benchmark::DoNotOptimize(variational_fit(g, m, static_cast<int>(state.range(0)), 2).theta);
}
BENCHMARK(BM_VariationalFit)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SvTransitivity(benchmark::State& state) {
  const Model m = growth_model(static_cast<Vertex>(state.range(0)));
  SampleOptions opt;
  opt.record_order = false;
  opt.accumulate_expectations = false;
  const Graph g = sample_graph(m, theta2(0.0, 1.0), 3, opt).graph;
  for (auto _ : state) benchmark::DoNotOptimize(sv_transitivity(g));
}
BENCHMARK(BM_SvTransitivity)->Arg(2000)->Arg(16000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
