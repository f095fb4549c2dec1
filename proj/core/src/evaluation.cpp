#include "taskgraph/evaluation.hpp"

#include "taskgraph/error.hpp"

namespace taskgraph {

PrfScores PrfScores::from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  PrfScores s{tp, fp, fn};
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  const double pr = s.precision + s.recall;
  s.f1 = pr == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / pr;
  return s;
}

EdgeEvalReport edge_prf(const TaskGraph& predicted, const TaskGraph& truth) {
  if (!(predicted.taxonomy() == truth.taxonomy())) {
    throw InputError("cannot compare graphs over different taxonomies");
  }
  std::size_t tp = 0;
  for (const auto& [edge, score] : predicted.edges()) tp += truth.edges().contains(edge) ? 1 : 0;
  return PrfScores::from_counts(tp, predicted.num_edges() - tp, truth.num_edges() - tp);
}

}  // namespace taskgraph
