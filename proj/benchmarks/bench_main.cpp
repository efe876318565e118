#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "phl/birkhoff.hpp"
#include "phl/freemodel.hpp"
#include "phl/model_finder.hpp"
#include "phl/model_text.hpp"
#include "phl/morphology.hpp"
#include "phl/prover.hpp"
#include "phl/text.hpp"

using namespace phl;

namespace {

Theory load(const std::string& file) {
  std::ifstream in(std::string(PHL_DATA_DIR) + "/theories/" + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_theory(ss.str());
}

void BM_ChaseCategoryComposites(benchmark::State& state) {
  Theory cat = load("cat.phl");
  auto [ctx, phi] = parse_formula_in_context(cat.signature, "[f:mor, g:mor, h:mor] c(f) = d(g) /\\ c(g) = d(h)");
  for (auto _ : state) {
    auto p = representing_model(cat, ctx, phi, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(p.model.total_size());
  }
}
BENCHMARK(BM_ChaseCategoryComposites)->DenseRange(1, 4);

void BM_ChaseMonoidWords(benchmark::State& state) {
  Theory mon = load("mon.phl");
  auto [ctx, phi] = parse_formula_in_context(mon.signature, "[x:*, y:*] true");
  for (auto _ : state) {
    auto p = representing_model(mon, ctx, phi, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(p.model.total_size());
  }
}
BENCHMARK(BM_ChaseMonoidWords)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_ProveTransitivityChain(benchmark::State& state) {
  Theory pos = load("pos.phl");
  Sequent s = parse_sequent(pos.signature, "[x:*, y:*, z:*, w:*] leq(x,y) /\\ leq(y,z) /\\ leq(z,w) |- leq(x,w)");
  ProveOptions opts;
  opts.depth = 3;
  for (auto _ : state) benchmark::DoNotOptimize(prove(pos, s, opts).verdict);
}
BENCHMARK(BM_ProveTransitivityChain);

void BM_EnumeratePosets(benchmark::State& state) {
  Theory pos = load("pos.phl");
  for (auto _ : state) benchmark::DoNotOptimize(all_models(pos, static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_EnumeratePosets)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_EnumerateMonoids(benchmark::State& state) {
  Theory mon = load("mon.phl");
  for (auto _ : state) benchmark::DoNotOptimize(all_models(mon, static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_EnumerateMonoids)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_CountHomsBetweenChains(benchmark::State& state) {
  Theory pos = load("pos.phl");
  const int n = static_cast<int>(state.range(0));
  Structure c(share_signature(pos), "chain");
  c.add_elements(0, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) c.set_rel(0, {i, j});
  for (auto _ : state) benchmark::DoNotOptimize(count_homs(c, c));
}
BENCHMARK(BM_CountHomsBetweenChains)->DenseRange(3, 8);

void BM_FactorizeAllMonoidHoms(benchmark::State& state) {
  Theory mon = load("mon.phl");
  auto models = all_models(mon, 3);
  for (auto _ : state) {
    std::size_t n = 0;
    for (const auto& a : models)
      for (const auto& b : models)
        for (const auto& h : enumerate_homs(a, b)) n += factorize(a, b, h).mid.total_size();
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_FactorizeAllMonoidHoms)->Unit(benchmark::kMillisecond);

void BM_HspClosureOfChain(benchmark::State& state) {
  Theory pos = load("pos.phl");
  auto pool = all_models(pos, 4);
  Structure c2(share_signature(pos), "chain2");
  c2.add_elements(0, 2);
  c2.set_rel(0, {0, 0});
  c2.set_rel(0, {0, 1});
  c2.set_rel(0, {1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(hsp_closure(make_universe(pos, {c2}), pool).closure.size());
}
BENCHMARK(BM_HspClosureOfChain)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
