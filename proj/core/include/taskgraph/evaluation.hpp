#pragma once

#include <cstddef>

#include "taskgraph/task_graph.hpp"

namespace taskgraph {

/// Precision, recall and F1 from raw counts. Undefined ratios (0/0) are 0.
struct PrfScores {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PrfScores from_counts(std::size_t tp, std::size_t fp, std::size_t fn);
};

using EdgeEvalReport = PrfScores;

/// Edge-set comparison: TP = predicted & truth, FP = predicted - truth,
/// FN = truth - predicted. Edges touching START and END count like any
/// other. Throws InputError if the taxonomies differ.
EdgeEvalReport edge_prf(const TaskGraph& predicted, const TaskGraph& truth);

}  // namespace taskgraph
