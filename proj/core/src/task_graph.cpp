#include "taskgraph/task_graph.hpp"

#include <string>

#include "taskgraph/error.hpp"

namespace taskgraph {

TaskGraph::TaskGraph(Taxonomy taxonomy, EdgeMap edges)
    : taxonomy_(std::move(taxonomy)), edges_(std::move(edges)) {
  const std::size_t n = taxonomy_.size();
  preconditions_.assign(n, {});
  dependents_.assign(n, {});
  for (const auto& [edge, score] : edges_) {
    if (!taxonomy_.contains(edge.from) || !taxonomy_.contains(edge.to)) {
      throw InputError("edge (" + std::to_string(edge.from) + ", " + std::to_string(edge.to) +
                       ") is outside the taxonomy");
    }
    const std::string label = taxonomy_.name(edge.from) + " -> " + taxonomy_.name(edge.to);
    if (edge.from == edge.to) throw InputError("self-loop " + label);
    if (edge.from == taxonomy_.start()) throw InputError("START cannot have preconditions: " + label);
    if (edge.to == taxonomy_.end()) throw InputError("END cannot be a precondition: " + label);
    // EdgeMap iterates in (from, to) order, so both lists come out ascending.
    preconditions_[edge.from].push_back(edge.to);
    dependents_[edge.to].push_back(edge.from);
  }
}

std::optional<double> TaskGraph::score(NodeId from, NodeId to) const {
  auto it = edges_.find({from, to});
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::vector<bool>> TaskGraph::reachability() const {
  const std::size_t n = num_nodes();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (NodeId source = 0; source < n; ++source) {
    std::vector<NodeId> stack(preconditions_[source].begin(), preconditions_[source].end());
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      if (reach[source][v]) continue;
      reach[source][v] = true;
      for (NodeId w : preconditions_[v]) {
        if (!reach[source][w]) stack.push_back(w);
      }
    }
  }
  return reach;
}

}  // namespace taskgraph
