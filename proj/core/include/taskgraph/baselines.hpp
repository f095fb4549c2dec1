#pragma once

#include "taskgraph/matrix.hpp"
#include "taskgraph/postprocess.hpp"
#include "taskgraph/sequences.hpp"

namespace taskgraph {

/// Pairwise ordering frequencies: entry (i, j) is the fraction of sequences
/// containing both i and j in which j occurs before i. Pairs that never
/// co-occur get 0.
Matrix order_frequencies(const SequenceDataset& ds);

/// Count-based graph: keeps i -> j iff order_frequencies(i, j) > threshold,
/// scored by that frequency, then runs the post-processing pipeline.
/// Expects repetition-free sequences.
TaskGraph count_based_graph(const SequenceDataset& ds, double threshold = 0.5,
                            PostprocessMode mode = PostprocessMode::kStandard);

}  // namespace taskgraph
