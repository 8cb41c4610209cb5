#include <benchmark/benchmark.h>

#include <memory>

#include "rsd/attacks.hpp"
#include "rsd/classifiers.hpp"
#include "rsd/numerics.hpp"
#include "rsd/random.hpp"
#include "rsd/smoothing.hpp"

namespace {

const rsd::MlpClassifier& mlp(std::size_t d) {
  static const auto model = [d] {
    rsd::DatasetSpec spec;
    spec.generator = "concentric-spheres";
    spec.size = 200;
    spec.dimension = d;
    rsd::MlpTrainConfig cfg;
    cfg.hidden = 16;
    cfg.epochs = 50;
    return rsd::train_mlp(rsd::generate_dataset(spec, 3), cfg).model;
  }();
  return model;
}

void BM_Philox(benchmark::State& state) {
  rsd::PhiloxCounter ctr{0, 0, 0, 0};
  for (auto _ : state) {
    ctr = rsd::philox4x32(ctr, {0xa4093822u, 0x299f31d0u});
    benchmark::DoNotOptimize(ctr);
  }
}
BENCHMARK(BM_Philox);

void BM_ClopperPearson(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsd::clopper_pearson_lower(n * 9 / 10, n, rsd::Probability(0.001)));
  }
}
BENCHMARK(BM_ClopperPearson)->Arg(10)->Arg(1000)->Arg(100000);

void BM_MlpLogits(benchmark::State& state) {
  const auto& f = mlp(4);
  const rsd::Point x(4, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(f.logits(x));
}
BENCHMARK(BM_MlpLogits);

void BM_SmoothedDecide(benchmark::State& state) {
  const auto& f = mlp(4);
  const rsd::SmoothingConfig cfg(0.08, static_cast<std::uint64_t>(state.range(0)));
  const rsd::Point x(4, 0.4);
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rsd::smoothed_decide(f, cfg, x, rsd::DecisionStream(1, i++)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SmoothedDecide)->Arg(10)->Arg(200)->Arg(1000);

void BM_AttackLinear(benchmark::State& state) {
  const auto kind = static_cast<rsd::AttackKind>(state.range(0));
  auto f = std::make_shared<rsd::LinearClassifier>(std::vector<double>(16, 1.0), -8.0);
  const rsd::Point x(16, 0.4);
  for (auto _ : state) {
    rsd::DecisionOracle oracle(f);
    rsd::AttackConfig cfg;
    benchmark::DoNotOptimize(rsd::run_attack(kind, oracle, x, f->decide(x), cfg));
  }
  state.SetLabel(std::string(rsd::to_string(kind)));
}
BENCHMARK(BM_AttackLinear)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
