#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "taskgraph/postprocess.hpp"
#include "taskgraph/sequences.hpp"
#include "taskgraph/tgml.hpp"
#include "taskgraph/training.hpp"

using namespace taskgraph;

namespace {

Taxonomy taxonomy(std::size_t key_steps) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < key_steps; ++i) names.push_back("K" + std::to_string(i));
  return Taxonomy(names);
}

// A layered DAG: every step depends on a random earlier one.
TaskGraph layered(std::size_t key_steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Taxonomy tax = taxonomy(key_steps);
  EdgeMap edges;
  for (NodeId i = 1; i <= key_steps; ++i) {
    std::uniform_int_distribution<NodeId> pick(0, i - 1);
    edges.emplace(Edge{i, pick(rng)}, std::nullopt);
  }
  return postprocess(TaskGraph(tax, edges));
}

void BM_LossAndGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = sample_topological_sorts(layered(n, 1), 50, 2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Matrix values(static_cast<Eigen::Index>(n + 2), static_cast<Eigen::Index>(n + 2));
  for (auto& v : values.reshaped()) v = normal(rng);
  const ScoreMatrix scores(values, build_mask(ds.taxonomy));
  for (auto _ : state) benchmark::DoNotOptimize(tgml_loss_and_gradient(scores, ds, 0.005));
}
BENCHMARK(BM_LossAndGradient)->Arg(10)->Arg(20)->Arg(40);

void BM_TrainEpochs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = sample_topological_sorts(layered(n, 4), 50, 5);
  TrainConfig cfg;
  cfg.max_epochs = 50;
  for (auto _ : state) benchmark::DoNotOptimize(train_do(ds, cfg));
}
BENCHMARK(BM_TrainEpochs)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Postprocess(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Taxonomy tax = taxonomy(n);
  const Mask mask = build_mask(tax);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit;
  EdgeMap edges;
  for (NodeId i = 0; i < tax.size(); ++i)
    for (NodeId j = 0; j < tax.size(); ++j)
      if (!mask(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) && unit(rng) < 0.3)
        edges.emplace(Edge{i, j}, unit(rng));
  const TaskGraph g(tax, edges);
  for (auto _ : state) benchmark::DoNotOptimize(postprocess(g));
}
BENCHMARK(BM_Postprocess)->Arg(10)->Arg(30)->Arg(60);

}  // namespace

BENCHMARK_MAIN();
