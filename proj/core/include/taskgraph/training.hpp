#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "taskgraph/matrix.hpp"
#include "taskgraph/sequences.hpp"
#include "taskgraph/task_graph.hpp"

namespace taskgraph {

struct TrainConfig {
  double learning_rate = 0.1;
  int max_epochs = 1000;
  double beta = 0.005;
  std::uint64_t seed = 0;
  double sa_target = 0.95;
  int sa_patience = 25;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  /// Binarization cutoff used for sequence accuracy; 1/N when unset.
  std::optional<double> threshold;

  /// Throws InputError on out-of-range fields.
  void validate() const;
};

enum class StopReason { kSequenceAccuracy, kMaxEpochs };

std::string_view to_string(StopReason reason);

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  double sequence_accuracy = 0.0;
};

struct TrainReport {
  std::vector<EpochMetrics> epochs;
  int stop_epoch = 0;
  StopReason stop_reason = StopReason::kMaxEpochs;
  ScoreMatrix scores;
  AdjacencyMatrix adjacency;
};

/// Mean over sequences of the mean over positions of the fraction of each
/// step's predicted preconditions already seen in the prefix. A step with
/// no predicted preconditions scores 1 only at position 0.
double sequence_accuracy(const TaskGraph& binarized, const SequenceDataset& ds);

/// Full-batch Adam on the TGML loss over a zero-initialized score matrix.
/// One epoch is one gradient step; after each step the adjacency matrix is
/// binarized and scored with sequence_accuracy(). Training stops once the
/// accuracy has reached `sa_target` and has not improved for `sa_patience`
/// epochs, or at `max_epochs`.
///
/// The dataset must be terminal-wrapped and repetition-free. `on_epoch`, if
/// given, sees every epoch as it completes. Throws NumericalError if the loss
/// stops being finite.
TrainReport train_do(const SequenceDataset& ds, const TrainConfig& cfg,
                     const std::function<void(const EpochMetrics&)>& on_epoch = {});

}  // namespace taskgraph
