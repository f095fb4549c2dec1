#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "taskgraph/task_graph.hpp"
#include "taskgraph/taxonomy.hpp"

namespace taskgraph {

enum class StepLabel { kCorrect, kMistake };

/// One demonstration, START-prefixed and END-suffixed. When labels are
/// present they align with `steps`; the terminal positions are always
/// labelled correct.
struct KeySequence {
  std::vector<NodeId> steps;
  std::vector<StepLabel> labels;

  bool has_labels() const { return !labels.empty(); }
  friend bool operator==(const KeySequence&, const KeySequence&) = default;
};

struct SequenceDataset {
  Taxonomy taxonomy;
  std::vector<KeySequence> sequences;

  bool has_labels() const;
  /// Throws InputError on an empty dataset, out-of-range ids, missing
  /// terminals, or misaligned labels.
  void validate() const;
};

/// The observed/unobserved partition of the taxonomy at one step of a
/// sequence. `current` is the step being predicted and is unobserved.
struct ObservationSplit {
  std::vector<NodeId> observed;
  std::vector<NodeId> unobserved;
  NodeId current = 0;

  /// Split before step `t` of `seq`: steps 0..t-1 observed, everything else
  /// in the taxonomy unobserved. Requires 1 <= t < seq.steps.size().
  static ObservationSplit at(const Taxonomy& taxonomy, const KeySequence& seq, std::size_t t);

  /// Throws InputError unless the two sets partition 0..node_count-1 and
  /// `current` is unobserved.
  void validate(std::size_t node_count) const;
};

/// Prepends START and appends END. Throws InputError if `raw` already
/// contains a terminal or an id outside the taxonomy.
KeySequence wrap_terminals(const Taxonomy& taxonomy, const std::vector<NodeId>& raw);

inline constexpr std::size_t kDefaultExpansionCap = 256;

/// All distinct repetition-free sequences that keep exactly one occurrence of
/// every symbol, in input order. Labels are dropped. Throws InputError when
/// more than `cap` choices would be enumerated.
std::vector<KeySequence> expand_repetitions(const KeySequence& seq,
                                            std::size_t cap = kDefaultExpansionCap);

/// Applies expand_repetitions() to every sequence of the dataset.
SequenceDataset expand_dataset(const SequenceDataset& ds,
                               std::size_t cap = kDefaultExpansionCap);

/// Draws `count` random linear extensions of `g`. At each step the next node
/// is chosen uniformly among unobserved nodes whose preconditions have all
/// been observed; END is held back until it is the only node left. Throws
/// InputError if some node can never be scheduled.
SequenceDataset sample_topological_sorts(const TaskGraph& g, std::size_t count,
                                         std::uint64_t seed);

struct PerturbKinds {
  bool insert = true;
  bool remove = true;
  bool replace = true;
};

struct PerturbStats {
  std::size_t steps_seen = 0;
  std::size_t inserted = 0;
  std::size_t removed = 0;
  std::size_t replaced = 0;

  std::size_t perturbed() const { return inserted + removed + replaced; }
};

/// Simulates recognition noise. Every real key-step is perturbed with
/// probability `rate` by one of the enabled kinds, chosen uniformly: insert
/// a random key-step after it, delete it, or replace it with a random
/// key-step. Inserted steps are not perturbed again. Replaced steps keep
/// their label, inserted steps are labelled correct.
SequenceDataset perturb(const SequenceDataset& ds, double rate, std::uint64_t seed,
                        PerturbKinds kinds = {}, PerturbStats* stats = nullptr);

}  // namespace taskgraph
