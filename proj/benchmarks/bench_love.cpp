#include <benchmark/benchmark.h>

#include "love/love.hpp"

namespace {

using namespace love;

const std::vector<AdsbObservation>& corpus() {
  static const auto obs = [] {
    SyntheticConfig cfg;
    cfg.sensor_count = 2'000;
    cfg.target_observations = 500'000;
    cfg.airway_count = 300;
    return generate_corpus(cfg, 42).observations();
  }();
  return obs;
}

// Half corpus points, half spoofs, so both lookup outcomes are exercised.
const std::vector<AdsbObservation>& queries() {
  static const auto q = [] {
    std::vector<AdsbObservation> out;
    const auto& obs = corpus();
    for (std::size_t i = 0; i < obs.size(); i += 5) out.push_back(obs[i]);
    for (auto& l : gen_spoofed(compute_envelopes(obs), out.size(), 42).observations) {
      out.push_back(std::move(l.obs));
    }
    return out;
  }();
  return q;
}

void BM_CellOf(benchmark::State& state) {
  const Resolution res(static_cast<int>(state.range(0)));
  const auto& q = queries();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cell_of(q[i].coord, res));
    if (++i == q.size()) i = 0;
  }
}
BENCHMARK(BM_CellOf)->DenseRange(2, 7);

void BM_Build(benchmark::State& state) {
  const Resolution res(static_cast<int>(state.range(0)));
  const auto threads = static_cast<unsigned>(state.range(1));
  const auto& obs = corpus();
  for (auto _ : state) benchmark::DoNotOptimize(build(obs, res, threads).pair_count());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(obs.size()));
}
BENCHMARK(BM_Build)->ArgsProduct({{2, 4, 7}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_VerifyBatch(benchmark::State& state) {
  const Resolution res(static_cast<int>(state.range(0)));
  const auto threads = static_cast<unsigned>(state.range(1));
  const auto table = build(corpus(), res, 4);
  const auto& q = queries();
  for (auto _ : state) benchmark::DoNotOptimize(verify_batch(table, q, {}, threads).errors);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(q.size()));
  state.counters["pairs"] = static_cast<double>(table.pair_count());
}
BENCHMARK(BM_VerifyBatch)->ArgsProduct({{2, 3, 4, 5, 6, 7}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_SnapshotRoundTrip(benchmark::State& state) {
  const auto table = build(corpus(), Resolution(4), 4);
  for (auto _ : state) benchmark::DoNotOptimize(deserialize(serialize(table)).pair_count());
}
BENCHMARK(BM_SnapshotRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
