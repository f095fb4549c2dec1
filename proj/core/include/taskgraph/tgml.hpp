#pragma once

#include <vector>

#include "taskgraph/matrix.hpp"
#include "taskgraph/sequences.hpp"
#include "taskgraph/task_graph.hpp"

namespace taskgraph {

/// One factor of the sequence likelihood.
///
/// numerator   = sum over observed j of Z(current, j), the feasibility of the
///               step that actually happened;
/// denominator = sum over unobserved h, observed j of Z(h, j), the total
///               feasibility of everything not yet seen. `current` is itself
///               unobserved, so the denominator includes the numerator.
struct StepTerm {
  double numerator = 0.0;
  double denominator = 0.0;

  double probability() const { return numerator / denominator; }
};

/// Throws NumericalError when the denominator is zero, which cannot happen
/// for a softmax-produced matrix.
StepTerm step_probability(const AdjacencyMatrix& z, const ObservationSplit& split);

struct SequenceLikelihood {
  double log_probability = 0.0;
  /// Terms for steps 1..m+1; START contributes probability 1 and is omitted.
  std::vector<StepTerm> terms;
};

/// Log-likelihood of a terminal-wrapped, repetition-free sequence.
/// Column sums over the observed set are updated incrementally, so the cost
/// is O(steps * nodes). Throws InputError on repeated steps.
SequenceLikelihood sequence_log_likelihood(const AdjacencyMatrix& z, const KeySequence& seq);

/// -sum_k sum_t [ log numerator_t - beta * log denominator_t ]. With beta = 1
/// this is the exact negative log-likelihood of the dataset.
double tgml_loss(const AdjacencyMatrix& z, const SequenceDataset& ds, double beta);

/// Gradient of tgml_loss with respect to the adjacency weights.
Matrix tgml_gradient_wrt_weights(const AdjacencyMatrix& z, const SequenceDataset& ds,
                                 double beta);

struct LossAndGradient {
  double loss = 0.0;
  Matrix gradient;
};

/// Loss of softmax_rows(scores) and its gradient with respect to the raw
/// scores, in one pass.
LossAndGradient tgml_loss_and_gradient(const ScoreMatrix& scores, const SequenceDataset& ds,
                                       double beta);

inline Matrix tgml_gradient(const ScoreMatrix& scores, const SequenceDataset& ds, double beta) {
  return tgml_loss_and_gradient(scores, ds, beta).gradient;
}

/// Probability of `seq` under the unweighted counting model: at each step,
/// 1 / (#unobserved nodes whose preconditions are all observed) if the step
/// taken is one of them, else 0.
double binary_sequence_probability(const TaskGraph& g, const KeySequence& seq);

}  // namespace taskgraph
