#pragma once

#include <cstdint>
#include <vector>

#include "taskgraph/evaluation.hpp"
#include "taskgraph/sequences.hpp"
#include "taskgraph/task_graph.hpp"

namespace taskgraph {

struct DetectionVerdict {
  StepLabel label = StepLabel::kCorrect;
  /// Direct preconditions of the step missing from the observed prefix.
  /// Non-empty exactly when label is kMistake.
  std::vector<NodeId> missing_preconditions;
};

/// Online precondition check. Step t is a mistake iff some direct
/// precondition of it other than START is absent from steps 0..t-1. Every
/// executed step joins the observed set, flagged or not, and repeated steps
/// are checked again. Returns one verdict per position, terminals included.
std::vector<DetectionVerdict> detect_stream(const TaskGraph& g, const KeySequence& seq);

struct OmdReport {
  PrfScores correct;
  PrfScores mistake;
  double average_f1 = 0.0;
};

/// Per-class precision/recall/F1 with each class taken in turn as positive.
/// Throws InputError on length mismatch.
OmdReport omd_metrics(const std::vector<StepLabel>& predicted,
                      const std::vector<StepLabel>& truth);

/// Runs detect_stream() over a labelled dataset and pools the real key-step
/// positions of every sequence into one OmdReport. Terminal positions are not
/// scored.
OmdReport evaluate_detection(const TaskGraph& g, const SequenceDataset& labelled);

struct PerturbationRow {
  double rate = 0.0;
  OmdReport report;
};

/// For each rate: perturb the labelled dataset (same seed every row), detect,
/// score.
std::vector<PerturbationRow> perturbation_study(const TaskGraph& g,
                                                const SequenceDataset& labelled,
                                                const std::vector<double>& rates,
                                                std::uint64_t seed);

/// Ground-truth labels for a stream under `g`: the same predicate as
/// detect_stream(), so a graph always agrees with its own labels. Terminal
/// positions are labelled correct.
std::vector<StepLabel> label_with_graph(const TaskGraph& g, const KeySequence& seq);

/// Builds a labelled mistake benchmark from clean sequences: with
/// probability `rate` per sequence, one adjacent pair (a, b) where a is a
/// direct precondition of b is swapped, so b runs before its precondition.
/// Every sequence is then labelled with label_with_graph().
SequenceDataset inject_order_mistakes(const TaskGraph& g, const SequenceDataset& clean,
                                      double rate, std::uint64_t seed);

}  // namespace taskgraph
