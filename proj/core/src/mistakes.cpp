#include "taskgraph/mistakes.hpp"

#include <random>
#include <string>

#include "taskgraph/error.hpp"

namespace taskgraph {

std::vector<DetectionVerdict> detect_stream(const TaskGraph& g, const KeySequence& seq) {
  const Taxonomy& tax = g.taxonomy();
  std::vector<bool> observed(tax.size(), false);
  std::vector<DetectionVerdict> verdicts;
  verdicts.reserve(seq.steps.size());
  for (std::size_t t = 0; t < seq.steps.size(); ++t) {
    const NodeId step = seq.steps[t];
    if (!tax.contains(step)) {
      throw InputError("step " + std::to_string(t) + " has id " + std::to_string(step) +
                       " outside the taxonomy");
    }
    DetectionVerdict verdict;
    if (step != tax.start()) {
      for (NodeId p : g.preconditions(step)) {
        if (p != tax.start() && !observed[p]) verdict.missing_preconditions.push_back(p);
      }
    }
    if (!verdict.missing_preconditions.empty()) verdict.label = StepLabel::kMistake;
    verdicts.push_back(std::move(verdict));
    observed[step] = true;
  }
  return verdicts;
}

OmdReport omd_metrics(const std::vector<StepLabel>& predicted,
                      const std::vector<StepLabel>& truth) {
  if (predicted.size() != truth.size()) {
    throw InputError("got " + std::to_string(predicted.size()) + " verdicts for " +
                     std::to_string(truth.size()) + " labels");
  }
  // confusion[truth][predicted]
  std::size_t confusion[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++confusion[static_cast<int>(truth[i])][static_cast<int>(predicted[i])];
  }
  constexpr int kC = static_cast<int>(StepLabel::kCorrect);
  constexpr int kM = static_cast<int>(StepLabel::kMistake);
  OmdReport report;
  report.correct = PrfScores::from_counts(confusion[kC][kC], confusion[kM][kC], confusion[kC][kM]);
  report.mistake = PrfScores::from_counts(confusion[kM][kM], confusion[kC][kM], confusion[kM][kC]);
  report.average_f1 = 0.5 * (report.correct.f1 + report.mistake.f1);
  return report;
}

OmdReport evaluate_detection(const TaskGraph& g, const SequenceDataset& labelled) {
  std::vector<StepLabel> predicted;
  std::vector<StepLabel> truth;
  for (std::size_t k = 0; k < labelled.sequences.size(); ++k) {
    const auto& seq = labelled.sequences[k];
    if (seq.labels.size() != seq.steps.size()) {
      throw InputError("sequence " + std::to_string(k) + " has no aligned labels");
    }
    const auto verdicts = detect_stream(g, seq);
    for (std::size_t t = 1; t + 1 < seq.steps.size(); ++t) {
      predicted.push_back(verdicts[t].label);
      truth.push_back(seq.labels[t]);
    }
  }
  return omd_metrics(predicted, truth);
}

std::vector<PerturbationRow> perturbation_study(const TaskGraph& g,
                                                const SequenceDataset& labelled,
                                                const std::vector<double>& rates,
                                                std::uint64_t seed) {
  std::vector<PerturbationRow> rows;
  rows.reserve(rates.size());
  for (double rate : rates) {
    rows.push_back({rate, evaluate_detection(g, perturb(labelled, rate, seed))});
  }
  return rows;
}

std::vector<StepLabel> label_with_graph(const TaskGraph& g, const KeySequence& seq) {
  const auto verdicts = detect_stream(g, seq);
  std::vector<StepLabel> labels(seq.steps.size(), StepLabel::kCorrect);
  for (std::size_t t = 1; t + 1 < seq.steps.size(); ++t) labels[t] = verdicts[t].label;
  return labels;
}

SequenceDataset inject_order_mistakes(const TaskGraph& g, const SequenceDataset& clean,
                                      double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InputError("mistake rate must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution inject(rate);
  SequenceDataset out{clean.taxonomy, {}};
  out.sequences.reserve(clean.sequences.size());
  for (const auto& source : clean.sequences) {
    KeySequence seq{source.steps, {}};
    if (inject(rng)) {
      std::vector<std::size_t> swappable;
      for (std::size_t t = 1; t + 2 < seq.steps.size(); ++t) {
        if (g.has_edge(seq.steps[t + 1], seq.steps[t])) swappable.push_back(t);
      }
      if (!swappable.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, swappable.size() - 1);
        const std::size_t t = swappable[pick(rng)];
        std::swap(seq.steps[t], seq.steps[t + 1]);
      }
    }
    seq.labels = label_with_graph(g, seq);
    out.sequences.push_back(std::move(seq));
  }
  return out;
}

}  // namespace taskgraph
