#include "taskgraph/sequences.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>

#include "taskgraph/error.hpp"

namespace taskgraph {
namespace {

std::string render(const KeySequence& seq) {
  std::string out = "[";
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(seq.steps[i]);
  }
  return out + "]";
}

}  // namespace

bool SequenceDataset::has_labels() const {
  return std::any_of(sequences.begin(), sequences.end(),
                     [](const KeySequence& s) { return s.has_labels(); });
}

void SequenceDataset::validate() const {
  if (sequences.empty()) throw InputError("dataset has no sequences");
  for (std::size_t k = 0; k < sequences.size(); ++k) {
    const auto& seq = sequences[k];
    const std::string where = "sequence " + std::to_string(k);
    if (seq.steps.size() < 2 || seq.steps.front() != taxonomy.start() ||
        seq.steps.back() != taxonomy.end()) {
      throw InputError(where + " is not wrapped in START/END");
    }
    for (std::size_t t = 0; t < seq.steps.size(); ++t) {
      const NodeId id = seq.steps[t];
      if (!taxonomy.contains(id)) {
        throw InputError(where + ", step " + std::to_string(t) + ": id " + std::to_string(id) +
                         " is outside the taxonomy");
      }
      if (taxonomy.is_terminal(id) && t != 0 && t + 1 != seq.steps.size()) {
        throw InputError(where + ", step " + std::to_string(t) + ": terminal inside sequence");
      }
    }
    if (seq.has_labels() && seq.labels.size() != seq.steps.size()) {
      throw InputError(where + " has " + std::to_string(seq.labels.size()) + " labels for " +
                       std::to_string(seq.steps.size()) + " steps");
    }
  }
}

ObservationSplit ObservationSplit::at(const Taxonomy& taxonomy, const KeySequence& seq,
                                      std::size_t t) {
  if (t == 0 || t >= seq.steps.size()) {
    throw InputError("observation split index out of range");
  }
  std::vector<bool> seen(taxonomy.size(), false);
  for (std::size_t s = 0; s < t; ++s) seen.at(seq.steps[s]) = true;
  ObservationSplit split;
  split.current = seq.steps[t];
  for (NodeId id = 0; id < taxonomy.size(); ++id) {
    (seen[id] ? split.observed : split.unobserved).push_back(id);
  }
  return split;
}

void ObservationSplit::validate(std::size_t node_count) const {
  std::vector<int> hits(node_count, 0);
  for (const auto* part : {&observed, &unobserved}) {
    for (NodeId id : *part) {
      if (id >= node_count) throw InputError("observation split id out of range");
      ++hits[id];
    }
  }
  if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) {
    throw InputError("observed and unobserved sets must partition the taxonomy");
  }
  if (std::find(unobserved.begin(), unobserved.end(), current) == unobserved.end()) {
    throw InputError("current step must be unobserved");
  }
}

KeySequence wrap_terminals(const Taxonomy& taxonomy, const std::vector<NodeId>& raw) {
  KeySequence seq;
  seq.steps.reserve(raw.size() + 2);
  seq.steps.push_back(taxonomy.start());
  for (NodeId id : raw) {
    if (!taxonomy.contains(id)) {
      throw InputError("key-step id " + std::to_string(id) + " is outside the taxonomy");
    }
    if (taxonomy.is_terminal(id)) {
      throw InputError("raw sequence already contains " + taxonomy.name(id));
    }
    seq.steps.push_back(id);
  }
  seq.steps.push_back(taxonomy.end());
  return seq;
}

std::vector<KeySequence> expand_repetitions(const KeySequence& seq, std::size_t cap) {
  // Occurrence positions per symbol, in first-appearance order.
  std::map<NodeId, std::size_t> slot_of;
  std::vector<std::vector<std::size_t>> occurrences;
  for (std::size_t pos = 0; pos < seq.steps.size(); ++pos) {
    auto [it, inserted] = slot_of.emplace(seq.steps[pos], occurrences.size());
    if (inserted) occurrences.emplace_back();
    occurrences[it->second].push_back(pos);
  }

  std::size_t choices = 1;
  for (const auto& occ : occurrences) {
    if (choices > cap / occ.size() + 1) {
      choices = cap + 1;
      break;
    }
    choices *= occ.size();
  }
  if (choices > cap) {
    throw InputError("sequence " + render(seq) + " expands to more than " + std::to_string(cap) +
                     " repetition-free variants");
  }

  std::vector<KeySequence> out;
  std::set<std::vector<NodeId>> seen;
  std::vector<std::size_t> pick(occurrences.size(), 0);
  std::vector<bool> keep(seq.steps.size());
  for (std::size_t c = 0; c < choices; ++c) {
    std::fill(keep.begin(), keep.end(), false);
    for (std::size_t s = 0; s < occurrences.size(); ++s) keep[occurrences[s][pick[s]]] = true;
    KeySequence variant;
    for (std::size_t pos = 0; pos < seq.steps.size(); ++pos) {
      if (keep[pos]) variant.steps.push_back(seq.steps[pos]);
    }
    if (seen.insert(variant.steps).second) out.push_back(std::move(variant));
    // Mixed-radix increment, last symbol fastest.
    for (std::size_t s = occurrences.size(); s-- > 0;) {
      if (++pick[s] < occurrences[s].size()) break;
      pick[s] = 0;
    }
  }
  return out;
}

SequenceDataset expand_dataset(const SequenceDataset& ds, std::size_t cap) {
  SequenceDataset out{ds.taxonomy, {}};
  for (const auto& seq : ds.sequences) {
    for (auto& variant : expand_repetitions(seq, cap)) out.sequences.push_back(std::move(variant));
  }
  return out;
}

SequenceDataset sample_topological_sorts(const TaskGraph& g, std::size_t count,
                                         std::uint64_t seed) {
  const Taxonomy& tax = g.taxonomy();
  const std::size_t n = tax.size();
  std::mt19937_64 rng(seed);
  SequenceDataset ds{tax, {}};
  ds.sequences.reserve(count);

  for (std::size_t k = 0; k < count; ++k) {
    std::vector<std::size_t> pending(n);
    for (NodeId x = 0; x < n; ++x) pending[x] = g.preconditions(x).size();
    std::vector<bool> observed(n, false);
    std::vector<NodeId> ready;  // unobserved, all preconditions observed
    KeySequence seq;

    auto observe = [&](NodeId x) {
      observed[x] = true;
      seq.steps.push_back(x);
      for (NodeId d : g.dependents(x)) {
        if (--pending[d] == 0 && !observed[d]) ready.push_back(d);
      }
    };

    if (pending[tax.start()] != 0) throw InputError("START cannot have preconditions");
    observe(tax.start());
    while (seq.steps.size() < n) {
      // END only goes last.
      std::vector<NodeId> candidates;
      for (NodeId x : ready) {
        if (x != tax.end() || seq.steps.size() + 1 == n) candidates.push_back(x);
      }
      if (candidates.empty()) {
        throw InputError("graph has key-steps whose preconditions can never be satisfied");
      }
      std::sort(candidates.begin(), candidates.end());
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      const NodeId next = candidates[pick(rng)];
      ready.erase(std::find(ready.begin(), ready.end(), next));
      observe(next);
    }
    ds.sequences.push_back(std::move(seq));
  }
  return ds;
}

SequenceDataset perturb(const SequenceDataset& ds, double rate, std::uint64_t seed,
                        PerturbKinds kinds, PerturbStats* stats) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InputError("perturbation rate must lie in [0, 1]");
  enum class Kind { kInsert, kRemove, kReplace };
  std::vector<Kind> enabled;
  if (kinds.insert) enabled.push_back(Kind::kInsert);
  if (kinds.remove) enabled.push_back(Kind::kRemove);
  if (kinds.replace) enabled.push_back(Kind::kReplace);
  if (enabled.empty()) throw InputError("no perturbation kind enabled");

  const Taxonomy& tax = ds.taxonomy;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution hit(rate);
  std::uniform_int_distribution<std::size_t> kind_of(0, enabled.size() - 1);
  std::uniform_int_distribution<NodeId> key_step(1, tax.num_key_steps());
  PerturbStats local;

  SequenceDataset out{tax, {}};
  out.sequences.reserve(ds.sequences.size());
  for (const auto& seq : ds.sequences) {
    const bool labelled = seq.has_labels();
    KeySequence next;
    auto emit = [&](NodeId id, StepLabel label) {
      next.steps.push_back(id);
      if (labelled) next.labels.push_back(label);
    };
    auto label_at = [&](std::size_t t) { return labelled ? seq.labels[t] : StepLabel::kCorrect; };

    const std::size_t last = seq.steps.size() - 1;
    emit(seq.steps.front(), StepLabel::kCorrect);
    for (std::size_t t = 1; t < last; ++t) {
      ++local.steps_seen;
      if (!hit(rng)) {
        emit(seq.steps[t], label_at(t));
        continue;
      }
      switch (enabled[kind_of(rng)]) {
        case Kind::kInsert:
          emit(seq.steps[t], label_at(t));
          emit(key_step(rng), StepLabel::kCorrect);
          ++local.inserted;
          break;
        case Kind::kRemove:
          ++local.removed;
          break;
        case Kind::kReplace:
          emit(key_step(rng), label_at(t));
          ++local.replaced;
          break;
      }
    }
    emit(seq.steps.back(), StepLabel::kCorrect);
    out.sequences.push_back(std::move(next));
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace taskgraph
