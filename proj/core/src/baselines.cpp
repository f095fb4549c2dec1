#include "taskgraph/baselines.hpp"

#include <optional>

namespace taskgraph {

Matrix order_frequencies(const SequenceDataset& ds) {
  const auto n = static_cast<Eigen::Index>(ds.taxonomy.size());
  Matrix before = Matrix::Zero(n, n);  // (i, j): j seen before i
  Matrix both = Matrix::Zero(n, n);
  std::vector<std::optional<std::size_t>> first(static_cast<std::size_t>(n));
  for (const auto& seq : ds.sequences) {
    std::fill(first.begin(), first.end(), std::nullopt);
    for (std::size_t t = 0; t < seq.steps.size(); ++t) {
      if (!first[seq.steps[t]]) first[seq.steps[t]] = t;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!first[i]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j || !first[j]) continue;
        both(i, j) += 1.0;
        if (*first[j] < *first[i]) before(i, j) += 1.0;
      }
    }
  }
  return (both.array() > 0.0).select(before.array() / both.array().max(1.0), 0.0).matrix();
}

TaskGraph count_based_graph(const SequenceDataset& ds, double threshold, PostprocessMode mode) {
  const Matrix freq = order_frequencies(ds);
  const Mask mask = build_mask(ds.taxonomy);
  EdgeMap edges;
  for (Eigen::Index i = 0; i < freq.rows(); ++i) {
    for (Eigen::Index j = 0; j < freq.cols(); ++j) {
      if (!mask(i, j) && freq(i, j) > threshold) {
        edges.emplace(Edge{static_cast<NodeId>(i), static_cast<NodeId>(j)}, freq(i, j));
      }
    }
  }
  return postprocess(TaskGraph(ds.taxonomy, std::move(edges)), mode);
}

}  // namespace taskgraph
