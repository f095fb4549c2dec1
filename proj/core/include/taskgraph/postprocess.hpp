#pragma once

#include <optional>

#include "taskgraph/matrix.hpp"
#include "taskgraph/task_graph.hpp"

namespace taskgraph {

/// Default binarization cutoff, 1/N with N the node count including START
/// and END.
double default_threshold(const Taxonomy& taxonomy);

/// Keeps edge (i, j) iff z(i, j) > threshold (strict). Scores are retained.
TaskGraph binarize(const AdjacencyMatrix& z, const Taxonomy& taxonomy,
                   std::optional<double> threshold = std::nullopt);

bool is_dag(const TaskGraph& g);

/// Repeatedly finds a cycle by depth-first search in node-index order and
/// drops its lowest-scoring edge (ties go to the lexicographically smallest
/// edge; unscored edges count as score 0). The result is acyclic.
TaskGraph break_cycles(const TaskGraph& g);

/// Drops every edge (i, j) shadowed by a path i -> ... -> j of length >= 2.
/// Throws InputError on cyclic input.
TaskGraph transitive_reduction(const TaskGraph& g);

/// Adds END -> x for every key-step x nobody depends on, and x -> START for
/// every key-step x without preconditions.
TaskGraph wire_terminals(const TaskGraph& g);

/// Pruning used for mistake detection on noisy data: a key-step whose
/// preconditions are exactly {START, other} loses the edge to `other`; the
/// graph is then transitively reduced. Throws InputError on cyclic input.
TaskGraph omd_prune(const TaskGraph& g);

enum class PostprocessMode { kStandard, kOmd };

/// break_cycles -> transitive_reduction (or omd_prune) -> wire_terminals,
/// followed by one more reduction pass, since wiring END to a sink can shadow
/// an older END edge. Idempotent in standard mode.
TaskGraph postprocess(const TaskGraph& g, PostprocessMode mode = PostprocessMode::kStandard);

/// binarize() followed by postprocess().
TaskGraph extract_task_graph(const AdjacencyMatrix& z, const Taxonomy& taxonomy,
                             PostprocessMode mode = PostprocessMode::kStandard,
                             std::optional<double> threshold = std::nullopt);

}  // namespace taskgraph
