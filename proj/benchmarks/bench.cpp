#include <snapmem/cubing.hpp>
#include <snapmem/dba.hpp>
#include <snapmem/propagation.hpp>
#include <snapmem/snapshot.hpp>

#include <benchmark/benchmark.h>

using namespace snapmem;

namespace {

LiteralSet random_observation(const Sensorium& s, std::mt19937_64& rng) {
  LiteralSet o = s.empty_set();
  for (std::size_t i = 0; i < s.size(); ++i) o.set(rng() & 1 ? positive_literal(i) : negative_literal(i));
  return o;
}

void BM_EmpiricalUpdate(benchmark::State& state) {
  const Sensorium s = Sensorium::anonymous(static_cast<std::size_t>(state.range(0)));
  Snapshot snap = trivial(s, 1.0 / 8000);
  std::mt19937_64 rng(1);
  const LiteralSet o = random_observation(s, rng);
  for (auto _ : state) {
    snap.update(o);
    benchmark::DoNotOptimize(snap.state());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EmpiricalUpdate)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNSquared);

void BM_DiscountedUpdate(benchmark::State& state) {
  const Sensorium s = Sensorium::anonymous(static_cast<std::size_t>(state.range(0)));
  Snapshot snap = Snapshot::trivial(s, 0.01, SnapshotKind::kDiscounted, 1 - 1.0 / 64);
  std::mt19937_64 rng(2);
  const LiteralSet o = random_observation(s, rng);
  for (auto _ : state) {
    snap.update(o);
    benchmark::DoNotOptimize(snap.state());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DiscountedUpdate)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNSquared);

void BM_PropagatePath(benchmark::State& state) {
  const Environment env = make_path(static_cast<std::size_t>(state.range(0)));
  const SensorLayout l = build_sensorium(env, true);
  const PocGraph g = ground_truth_graph(env, l);
  const LiteralSet t = l.sensorium.make_set({positive_literal(l.loc.front())});
  for (auto _ : state) benchmark::DoNotOptimize(propagate(g, l.sensorium.empty_set(), t));
}
BENCHMARK(BM_PropagatePath)->Arg(5)->Arg(20)->Arg(50);

void BM_AgentCycle(benchmark::State& state) {
  Environment env = make_grid(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)),
                              {.with_wait = true});
  env.set_target(default_target(env));
  AgentConfig c;
  c.controller = ControllerKind::kExcitation;
  c.with_gradient = true;
  c.seed = 3;
  Agent a(env, c);
  for (auto _ : state) benchmark::DoNotOptimize(a.step(env));
}
BENCHMARK(BM_AgentCycle)->Arg(4)->Arg(10);

void BM_CubingBuild(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Relation> r;
  for (std::size_t i = 0; i + 2 < n; i += 2) r.emplace_back(positive_literal(i), positive_literal(i + 2));
  const WeakPocSet p = WeakPocSet::from_generators(Sensorium::anonymous(n), r);
  for (auto _ : state) benchmark::DoNotOptimize(Cubing::build(p).vertex_count());
}
BENCHMARK(BM_CubingBuild)->Arg(6)->Arg(10)->Arg(14);

} // namespace

BENCHMARK_MAIN();
