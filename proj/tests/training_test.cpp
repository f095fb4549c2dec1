#include <doctest.h>

#include "support.hpp"
#include "taskgraph/error.hpp"
#include "taskgraph/evaluation.hpp"
#include "taskgraph/training.hpp"

using namespace taskgraph;
using namespace taskgraph::testing;

namespace {
constexpr NodeId S = 0, A = 1, B = 2, C = 3;
}

TEST_CASE("TrainConfig::validate") {
  CHECK_NOTHROW(TrainConfig{}.validate());
  auto bad = [](auto mutate) {
    TrainConfig cfg;
    mutate(cfg);
    return cfg;
  };
  CHECK_THROWS_AS(bad([](auto& c) { c.learning_rate = 0.0; }).validate(), InputError);
  CHECK_THROWS_AS(bad([](auto& c) { c.sa_target = 0.0; }).validate(), InputError);
  CHECK_THROWS_AS(bad([](auto& c) { c.sa_target = 1.5; }).validate(), InputError);
  CHECK_THROWS_AS(bad([](auto& c) { c.sa_patience = 0; }).validate(), InputError);
  CHECK_THROWS_AS(bad([](auto& c) { c.max_epochs = -1; }).validate(), InputError);
  CHECK_THROWS_AS(bad([](auto& c) { c.beta = -0.1; }).validate(), InputError);
}

TEST_CASE("sequence_accuracy") {
  const Taxonomy tax = letters("ABC");
  const NodeId E = tax.end();

  SUBCASE("half of the predicted preconditions seen") {
    // C waits on A and B; the stream is S, A, C, B, E.
    const auto g = graph_of(tax, {{A, S}, {C, A}, {C, B}, {E, C}});
    const SequenceDataset ds{tax, {wrap_terminals(tax, {A, C, B})}};
    // S: no preds, empty prefix -> 1. A: 1. C: 0.5. B: no preds, non-empty
    // prefix -> 0. E: 1.
    CHECK(sequence_accuracy(g, ds) == doctest::Approx((1 + 1 + 0.5 + 0 + 1) / 5.0));
  }
  SUBCASE("no predicted preconditions after a non-empty prefix scores 0") {
    const auto g = graph_of(tax, {});
    const SequenceDataset ds{tax, {wrap_terminals(tax, {A})}};
    CHECK(sequence_accuracy(g, ds) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("a graph scores 1 on its own sorts") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
      const auto g = random_task_graph(3 + trial % 5, 0.3, rng);
      CHECK(sequence_accuracy(g, sample_topological_sorts(g, 10, trial)) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("train_do recovers a chain") {
  const Taxonomy tax = make_taxonomy(5);
  EdgeMap edges;
  for (NodeId i = 1; i < tax.size(); ++i) edges.emplace(Edge{i, i - 1}, std::nullopt);
  const TaskGraph chain(tax, edges);
  const auto ds = sample_topological_sorts(chain, 20, 1);
  const auto report = train_do(ds, TrainConfig{});
  const auto pred = extract_task_graph(report.adjacency, tax);
  CHECK(edge_prf(pred, chain).f1 == 1.0);
  CHECK(report.stop_reason == StopReason::kSequenceAccuracy);
  CHECK(report.epochs.size() == static_cast<std::size_t>(report.stop_epoch));
}

TEST_CASE("zero epochs returns the initial matrix") {
  const Taxonomy tax = letters("AB");
  const SequenceDataset ds{tax, {wrap_terminals(tax, {A, B})}};
  TrainConfig cfg;
  cfg.max_epochs = 0;
  const auto report = train_do(ds, cfg);
  CHECK(report.epochs.empty());
  CHECK(report.stop_epoch == 0);
  CHECK(report.stop_reason == StopReason::kMaxEpochs);
  CHECK(report.scores.values().isZero());
  CHECK(report.adjacency.weights().isApprox(softmax_rows(ScoreMatrix::zeros(tax)).weights()));
  CHECK(to_string(report.stop_reason) == "max_epochs");
  CHECK(to_string(StopReason::kSequenceAccuracy) == "sa_target+patience");
}

TEST_CASE("training properties on sampled data") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    const auto g = random_task_graph(5 + trial, 0.3, rng);
    const Taxonomy& tax = g.taxonomy();
    const auto ds = sample_topological_sorts(g, 30, trial);
    TrainConfig cfg;
    cfg.max_epochs = 200;
    std::vector<EpochMetrics> streamed;
    const auto report = train_do(ds, cfg, [&](const EpochMetrics& m) { streamed.push_back(m); });

    CHECK(report.epochs.size() <= static_cast<std::size_t>(cfg.max_epochs));
    REQUIRE(streamed.size() == report.epochs.size());

    SUBCASE("deterministic") {
      const auto again = train_do(ds, cfg);
      REQUIRE(again.epochs.size() == report.epochs.size());
      for (std::size_t e = 0; e < again.epochs.size(); ++e) {
        CHECK(again.epochs[e].loss == report.epochs[e].loss);
        CHECK(again.epochs[e].sequence_accuracy == report.epochs[e].sequence_accuracy);
      }
      CHECK(again.scores.values() == report.scores.values());
    }
    SUBCASE("loss mostly non-increasing") {
      std::size_t ok = 0;
      for (std::size_t e = 1; e < report.epochs.size(); ++e)
        ok += report.epochs[e].loss <= report.epochs[e - 1].loss ? 1 : 0;
      CHECK(static_cast<double>(ok) >= 0.95 * static_cast<double>(report.epochs.size() - 1));
    }
    SUBCASE("masked scores untouched") {
      const Mask mask = build_mask(tax);
      for (Eigen::Index i = 0; i < mask.rows(); ++i)
        for (Eigen::Index j = 0; j < mask.cols(); ++j)
          if (mask(i, j)) CHECK(report.scores.values()(i, j) == 0.0);
    }
    SUBCASE("early stop only after the target") {
      if (report.stop_reason == StopReason::kSequenceAccuracy) {
        CHECK(report.epochs.back().sequence_accuracy >= cfg.sa_target);
        std::size_t above = 0;
        for (const auto& m : report.epochs) above += m.sequence_accuracy >= cfg.sa_target ? 1 : 0;
        CHECK(above >= static_cast<std::size_t>(cfg.sa_patience));
      }
    }
  }
}

TEST_CASE("an unreachable target never stops early") {
  // No weight can exceed a cutoff of 1, so the binarized graph stays empty
  // and only START scores.
  const Taxonomy tax = letters("AB");
  const SequenceDataset ds{tax, {wrap_terminals(tax, {A, B})}};
  TrainConfig cfg;
  cfg.max_epochs = 60;
  cfg.sa_target = 0.5;
  cfg.sa_patience = 1;
  cfg.threshold = 1.0;
  const auto report = train_do(ds, cfg);
  for (const auto& m : report.epochs) CHECK(m.sequence_accuracy == doctest::Approx(0.25));
  CHECK(report.stop_reason == StopReason::kMaxEpochs);
  CHECK(report.stop_epoch == 60);
}

TEST_CASE("train_do rejects repeated steps") {
  const Taxonomy tax = letters("ABC");
  const SequenceDataset ds{tax, {KeySequence{{S, A, C, A, tax.end()}, {}}}};
  CHECK_THROWS_AS(train_do(ds, TrainConfig{}), InputError);
}
