#include "taskgraph/tgml.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "taskgraph/error.hpp"

namespace taskgraph {
namespace {

// Positions of each node in a repetition-free sequence.
std::vector<std::optional<std::size_t>> positions(const KeySequence& seq, std::size_t n) {
  std::vector<std::optional<std::size_t>> pos(n);
  for (std::size_t t = 0; t < seq.steps.size(); ++t) {
    const NodeId id = seq.steps[t];
    if (id >= n) {
      throw InputError("step " + std::to_string(t) + " has id " + std::to_string(id) +
                       " outside the adjacency matrix");
    }
    if (pos[id]) {
      throw InputError("sequence repeats node " + std::to_string(id) +
                       "; expand repetitions first");
    }
    pos[id] = t;
  }
  return pos;
}

void throw_zero_denominator(std::size_t t) {
  throw NumericalError("zero feasibility denominator at step " + std::to_string(t) +
                       "; the adjacency matrix is degenerate");
}

// Per-sequence accumulation of the loss and of its gradient with respect to
// the adjacency weights.
double accumulate_sequence(const Matrix& z, const KeySequence& seq, double beta,
                           Matrix* grad) {
  const auto n = static_cast<std::size_t>(z.rows());
  const auto pos = positions(seq, n);
  const std::size_t last = seq.steps.size() - 1;

  // feas[h] = sum over observed j of z(h, j)
  std::vector<double> feas(n, 0.0);
  std::vector<bool> observed(n, false);
  auto observe = [&](NodeId x) {
    observed[x] = true;
    for (std::size_t h = 0; h < n; ++h) feas[h] += z(h, x);
  };

  double loss = 0.0;
  // inv_den[t] = beta / denominator_t
  std::vector<double> inv_den(last + 1, 0.0);
  observe(seq.steps[0]);
  for (std::size_t t = 1; t <= last; ++t) {
    const NodeId cur = seq.steps[t];
    double den = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
      if (!observed[h]) den += feas[h];
    }
    if (!(den > 0.0)) throw_zero_denominator(t);
    const double num = feas[cur];
    loss -= std::log(num) - beta * std::log(den);

    if (grad) {
      for (std::size_t s = 0; s < t; ++s) (*grad)(cur, seq.steps[s]) -= 1.0 / num;
      inv_den[t] = beta / den;
    }
    observe(cur);
  }

  if (grad) {
    // Contrastive part: (h, j) collects beta/den_t over every step t with j
    // observed and h not, i.e. pos(j) < t <= pos(h) (or <= last when h never
    // occurs). Prefix sums make each entry O(1).
    std::vector<double> prefix(last + 1, 0.0);
    for (std::size_t t = 1; t <= last; ++t) prefix[t] = prefix[t - 1] + inv_den[t];
    for (std::size_t j = 0; j < n; ++j) {
      if (!pos[j]) continue;
      const std::size_t from = *pos[j];
      for (std::size_t h = 0; h < n; ++h) {
        const std::size_t until = pos[h] ? std::min(*pos[h], last) : last;
        if (until > from) (*grad)(h, j) += prefix[until] - prefix[from];
      }
    }
  }
  return loss;
}

double accumulate_dataset(const Matrix& z, const SequenceDataset& ds, double beta,
                          Matrix* grad) {
  if (beta < 0.0) throw InputError("beta must be non-negative");
  double loss = 0.0;
  for (const auto& seq : ds.sequences) {
    if (seq.steps.size() < 2) throw InputError("sequence is missing its terminals");
    loss += accumulate_sequence(z, seq, beta, grad);
  }
  return loss;
}

}  // namespace

StepTerm step_probability(const AdjacencyMatrix& z, const ObservationSplit& split) {
  split.validate(static_cast<std::size_t>(z.size()));
  StepTerm term;
  for (NodeId j : split.observed) {
    term.numerator += z(split.current, j);
    for (NodeId h : split.unobserved) term.denominator += z(h, j);
  }
  if (!(term.denominator > 0.0)) {
    throw NumericalError("zero feasibility denominator; the adjacency matrix is degenerate");
  }
  return term;
}

SequenceLikelihood sequence_log_likelihood(const AdjacencyMatrix& z, const KeySequence& seq) {
  const Matrix& w = z.weights();
  const auto n = static_cast<std::size_t>(w.rows());
  positions(seq, n);
  if (seq.steps.empty()) throw InputError("empty sequence");

  SequenceLikelihood out;
  std::vector<double> feas(n, 0.0);
  std::vector<bool> observed(n, false);
  auto observe = [&](NodeId x) {
    observed[x] = true;
    for (std::size_t h = 0; h < n; ++h) feas[h] += w(h, x);
  };
  observe(seq.steps[0]);
  for (std::size_t t = 1; t < seq.steps.size(); ++t) {
    StepTerm term{feas[seq.steps[t]], 0.0};
    for (std::size_t h = 0; h < n; ++h) {
      if (!observed[h]) term.denominator += feas[h];
    }
    if (!(term.denominator > 0.0)) throw_zero_denominator(t);
    out.log_probability += std::log(term.numerator) - std::log(term.denominator);
    out.terms.push_back(term);
    observe(seq.steps[t]);
  }
  return out;
}

double tgml_loss(const AdjacencyMatrix& z, const SequenceDataset& ds, double beta) {
  return accumulate_dataset(z.weights(), ds, beta, nullptr);
}

Matrix tgml_gradient_wrt_weights(const AdjacencyMatrix& z, const SequenceDataset& ds,
                                 double beta) {
  Matrix grad = Matrix::Zero(z.size(), z.size());
  accumulate_dataset(z.weights(), ds, beta, &grad);
  return grad;
}

LossAndGradient tgml_loss_and_gradient(const ScoreMatrix& scores, const SequenceDataset& ds,
                                       double beta) {
  const AdjacencyMatrix z = softmax_rows(scores);
  Matrix grad_z = Matrix::Zero(z.size(), z.size());
  LossAndGradient out;
  out.loss = accumulate_dataset(z.weights(), ds, beta, &grad_z);
  out.gradient = softmax_rows_backward(z, scores.mask(), grad_z);
  return out;
}

double binary_sequence_probability(const TaskGraph& g, const KeySequence& seq) {
  const std::size_t n = g.num_nodes();
  positions(seq, n);
  std::vector<bool> observed(n, false);
  auto feasible = [&](NodeId x) {
    if (observed[x]) return false;
    for (NodeId p : g.preconditions(x)) {
      if (!observed[p]) return false;
    }
    return true;
  };
  double probability = 1.0;
  observed[seq.steps.front()] = true;
  for (std::size_t t = 1; t < seq.steps.size(); ++t) {
    const NodeId cur = seq.steps[t];
    if (!feasible(cur)) return 0.0;
    std::size_t possible = 0;
    for (NodeId h = 0; h < n; ++h) possible += feasible(h) ? 1 : 0;
    probability /= static_cast<double>(possible);
    observed[cur] = true;
  }
  return probability;
}

}  // namespace taskgraph
