#include <doctest.h>

#include "support.hpp"
#include "taskgraph/error.hpp"
#include "taskgraph/mistakes.hpp"

using namespace taskgraph;
using namespace taskgraph::testing;

namespace {

constexpr auto C = StepLabel::kCorrect;
constexpr auto M = StepLabel::kMistake;

std::vector<StepLabel> labels_of(const std::vector<DetectionVerdict>& v) {
  std::vector<StepLabel> out;
  for (const auto& d : v) out.push_back(d.label);
  return out;
}

}  // namespace

TEST_CASE("detect_stream on a tent assembly") {
  const Taxonomy tax({"Spread Tent", "Pickup/Place Ventcover", "Pickup/Open Stakebag", "Stake Tent"});
  const NodeId spread = *tax.find("Spread Tent");
  const NodeId vent = *tax.find("Pickup/Place Ventcover");
  const NodeId bag = *tax.find("Pickup/Open Stakebag");
  const NodeId stake = *tax.find("Stake Tent");
  const auto g = graph_of(tax, {{spread, 0},
                                {vent, spread},
                                {bag, vent},
                                {stake, bag},
                                {tax.end(), stake}});

  const auto verdicts = detect_stream(g, wrap_terminals(tax, {spread, bag, vent, stake}));
  REQUIRE(verdicts.size() == 6);
  CHECK(labels_of(verdicts) == std::vector<StepLabel>{C, C, M, C, C, C});
  CHECK(verdicts[2].missing_preconditions == std::vector<NodeId>{vent});
  for (const auto& v : verdicts) CHECK(v.missing_preconditions.empty() == (v.label == C));
}

TEST_CASE("detect_stream basics") {
  const Taxonomy tax = letters("AB");
  constexpr NodeId S = 0, A = 1, B = 2, E = 3;
  const auto g = graph_of(tax, {{A, S}, {B, A}, {E, B}});

  SUBCASE("a step depending only on START is correct") {
    CHECK(detect_stream(g, wrap_terminals(tax, {A})).at(1).label == C);
  }
  SUBCASE("END is checked like any node") {
    const auto v = detect_stream(g, wrap_terminals(tax, {A}));
    CHECK(v.at(2).label == M);
    CHECK(v.at(2).missing_preconditions == std::vector<NodeId>{B});
  }
  SUBCASE("repeated steps are re-checked and flagged steps still count as observed") {
    const auto v = detect_stream(g, KeySequence{{S, B, A, B, E}, {}});
    CHECK(labels_of(v) == std::vector<StepLabel>{C, M, C, C, C});
  }
  SUBCASE("out-of-range step") {
    CHECK_THROWS_AS(detect_stream(g, KeySequence{{S, 9, E}, {}}), InputError);
  }
}

TEST_CASE("detect_stream agrees with the brute-force predicate") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_task_graph(2 + trial % 7, 0.4, rng);
    const Taxonomy& tax = g.taxonomy();
    const auto seq = random_sequence(tax, rng);
    const auto v = detect_stream(g, seq);
    REQUIRE(v.size() == seq.steps.size());
    for (std::size_t t = 0; t < seq.steps.size(); ++t) {
      CHECK((v[t].label == M) == is_mistake_bruteforce(g, seq.steps, t));
    }
    // Online: a truncated stream gives the same verdicts on its prefix.
    const std::size_t cut = 1 + trial % (seq.steps.size() - 1);
    KeySequence prefix{{seq.steps.begin(), seq.steps.begin() + static_cast<std::ptrdiff_t>(cut)}, {}};
    const auto pv = detect_stream(g, prefix);
    for (std::size_t t = 0; t < cut; ++t) CHECK(pv[t].label == v[t].label);
  }
}

TEST_CASE("adding an edge only adds mistakes") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_weighted_digraph(2 + trial % 6, 0.2, rng);
    const Taxonomy& tax = g.taxonomy();
    const Mask mask = build_mask(tax);
    std::uniform_int_distribution<NodeId> node(0, tax.size() - 1);
    NodeId i = node(rng), j = node(rng);
    if (mask(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) continue;
    EdgeMap edges = g.edges();
    edges.emplace(Edge{i, j}, std::nullopt);
    const TaskGraph bigger(tax, edges);
    const auto seq = random_sequence(tax, rng);
    const auto before = detect_stream(g, seq);
    const auto after = detect_stream(bigger, seq);
    for (std::size_t t = 0; t < seq.steps.size(); ++t)
      if (before[t].label == M) CHECK(after[t].label == M);
  }
}

TEST_CASE("a graph never flags its own sorts") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_task_graph(3 + trial % 8, 0.35, rng);
    for (const auto& seq : sample_topological_sorts(g, 20, trial).sequences)
      for (const auto& v : detect_stream(g, seq)) CHECK(v.label == C);
  }
}

TEST_CASE("omd_metrics") {
  SUBCASE("worked example") {
    const auto r = omd_metrics({C, C, M, C}, {C, M, M, C});
    CHECK(r.correct.f1 == doctest::Approx(0.8));
    CHECK(r.mistake.f1 == doctest::Approx(2.0 / 3.0));
    CHECK(r.average_f1 == doctest::Approx(11.0 / 15.0));
    CHECK(r.correct.precision == doctest::Approx(2.0 / 3.0));
    CHECK(r.mistake.recall == doctest::Approx(0.5));
  }
  SUBCASE("perfect") {
    const auto r = omd_metrics({C, M, C}, {C, M, C});
    CHECK(r.correct.f1 == 1.0);
    CHECK(r.mistake.f1 == 1.0);
    CHECK(r.average_f1 == 1.0);
  }
  SUBCASE("always correct") {
    const auto r = omd_metrics({C, C, C, C}, {C, M, C, M});
    CHECK(r.mistake.recall == 0.0);
    CHECK(r.mistake.f1 == 0.0);
    CHECK(r.average_f1 == doctest::Approx(r.correct.f1 / 2.0));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(omd_metrics({C}, {C, M}), InputError);
  }
}

TEST_CASE("label_with_graph and inject_order_mistakes") {
  std::mt19937_64 rng(16);
  const auto g = random_task_graph(8, 0.4, rng);
  const auto clean = sample_topological_sorts(g, 200, 1);

  const auto none = inject_order_mistakes(g, clean, 0.0, 3);
  for (const auto& seq : none.sequences) {
    CHECK(seq.labels == std::vector<StepLabel>(seq.steps.size(), C));
  }

  const auto noisy = inject_order_mistakes(g, clean, 1.0, 3);
  CHECK(noisy.has_labels());
  std::size_t flagged_sequences = 0;
  for (const auto& seq : noisy.sequences) {
    CHECK(seq.labels == label_with_graph(g, seq));
    CHECK(seq.labels.front() == C);
    CHECK(seq.labels.back() == C);
    flagged_sequences += std::count(seq.labels.begin(), seq.labels.end(), M) > 0 ? 1 : 0;
  }
  CHECK(flagged_sequences > 100);
  CHECK(evaluate_detection(g, noisy).average_f1 == 1.0);
}

TEST_CASE("perturbation_study") {
  std::mt19937_64 rng(17);
  const auto g = random_task_graph(8, 0.35, rng);
  const auto labelled = inject_order_mistakes(g, sample_topological_sorts(g, 300, 2), 0.5, 4);
  const auto rows = perturbation_study(g, labelled, {0.0, 0.2}, 5);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rate == 0.0);
  CHECK(rows[0].report.average_f1 == evaluate_detection(g, labelled).average_f1);
  CHECK(rows[1].report.average_f1 < rows[0].report.average_f1);
  CHECK_THROWS_AS(perturbation_study(g, labelled, {1.2}, 0), InputError);
}
