#include "taskgraph/training.hpp"

#include <cmath>
#include <string>

#include "taskgraph/error.hpp"
#include "taskgraph/postprocess.hpp"
#include "taskgraph/tgml.hpp"

namespace taskgraph {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InputError("learning_rate must be positive");
  if (max_epochs < 0) throw InputError("max_epochs must be non-negative");
  if (!(beta >= 0.0)) throw InputError("beta must be non-negative");
  if (!(sa_target > 0.0 && sa_target <= 1.0)) throw InputError("sa_target must lie in (0, 1]");
  if (sa_patience < 1) throw InputError("sa_patience must be at least 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw InputError("Adam decay rates must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw InputError("adam_epsilon must be positive");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kSequenceAccuracy:
      return "sa_target+patience";
    case StopReason::kMaxEpochs:
      return "max_epochs";
  }
  return "unknown";
}

double sequence_accuracy(const TaskGraph& binarized, const SequenceDataset& ds) {
  if (ds.sequences.empty()) return 0.0;
  const std::size_t n = binarized.num_nodes();
  double total = 0.0;
  for (const auto& seq : ds.sequences) {
    if (seq.steps.empty()) continue;
    std::vector<bool> seen(n, false);
    double seq_total = 0.0;
    for (std::size_t i = 0; i < seq.steps.size(); ++i) {
      const auto& pred = binarized.preconditions(seq.steps[i]);
      if (i == 0 && pred.empty()) {
        seq_total += 1.0;
      } else if (i > 0 && !pred.empty()) {
        std::size_t hit = 0;
        for (NodeId p : pred) hit += seen[p] ? 1 : 0;
        seq_total += static_cast<double>(hit) / static_cast<double>(pred.size());
      }
      seen[seq.steps[i]] = true;
    }
    total += seq_total / static_cast<double>(seq.steps.size());
  }
  return total / static_cast<double>(ds.sequences.size());
}

TrainReport train_do(const SequenceDataset& ds, const TrainConfig& cfg,
                     const std::function<void(const EpochMetrics&)>& on_epoch) {
  cfg.validate();
  ds.validate();

  TrainReport report;
  report.scores = ScoreMatrix::zeros(ds.taxonomy);
  const Eigen::Index size = report.scores.size();
  Matrix first_moment = Matrix::Zero(size, size);
  Matrix second_moment = Matrix::Zero(size, size);
  double decay1 = 1.0;
  double decay2 = 1.0;

  std::optional<double> best_sa;
  int stale_epochs = 0;
  report.stop_reason = StopReason::kMaxEpochs;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const LossAndGradient step = tgml_loss_and_gradient(report.scores, ds, cfg.beta);
    if (!std::isfinite(step.loss) || !step.gradient.allFinite()) {
      throw NumericalError("non-finite TGML loss at epoch " + std::to_string(epoch) +
                           " (loss = " + std::to_string(step.loss) + ")");
    }

    const Matrix& g = step.gradient;
    first_moment = cfg.adam_beta1 * first_moment + (1.0 - cfg.adam_beta1) * g;
    second_moment = cfg.adam_beta2 * second_moment + (1.0 - cfg.adam_beta2) * g.cwiseAbs2();
    decay1 *= cfg.adam_beta1;
    decay2 *= cfg.adam_beta2;
    const Matrix m_hat = first_moment / (1.0 - decay1);
    const Matrix v_hat = second_moment / (1.0 - decay2);
    const Matrix delta =
        -cfg.learning_rate * m_hat.cwiseQuotient((v_hat.cwiseSqrt().array() + cfg.adam_epsilon).matrix());
    if (!(report.scores.values() + delta).allFinite()) {
      throw NumericalError("scores diverged at epoch " + std::to_string(epoch) +
                           "; try a smaller learning rate");
    }
    report.scores = report.scores.updated(delta);

    const AdjacencyMatrix z = softmax_rows(report.scores);
    const double sa = sequence_accuracy(binarize(z, ds.taxonomy, cfg.threshold), ds);
    const EpochMetrics metrics{epoch, step.loss, sa};
    report.epochs.push_back(metrics);
    report.stop_epoch = epoch;
    if (on_epoch) on_epoch(metrics);

    if (best_sa) {
      if (sa > *best_sa) {
        best_sa = sa;
        stale_epochs = 0;
      } else {
        ++stale_epochs;
      }
    } else if (sa >= cfg.sa_target) {
      best_sa = sa;
    }
    if (best_sa && sa >= cfg.sa_target && stale_epochs >= cfg.sa_patience) {
      report.stop_reason = StopReason::kSequenceAccuracy;
      break;
    }
  }

  report.adjacency = softmax_rows(report.scores);
  return report;
}

}  // namespace taskgraph
