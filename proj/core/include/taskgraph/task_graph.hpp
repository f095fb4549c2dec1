#pragma once

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "taskgraph/taxonomy.hpp"

namespace taskgraph {

/// Directed edge `from -> to`: `to` is a precondition of `from`.
struct Edge {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Edge set keyed in lexicographic (from, to) order. Scores are carried over
/// from the adjacency matrix when the edge came out of binarization; edges
/// added structurally (terminal wiring, hand-written graphs) may have none.
using EdgeMap = std::map<Edge, std::optional<double>>;

/// A directed graph of preconditions over a taxonomy.
///
/// Construction rejects self-loops, edges leaving START and edges entering
/// END. Acyclicity is not enforced here since break_cycles() consumes cyclic
/// graphs; use is_dag() to check.
class TaskGraph {
 public:
  TaskGraph() = default;
  TaskGraph(Taxonomy taxonomy, EdgeMap edges);

  const Taxonomy& taxonomy() const { return taxonomy_; }
  const EdgeMap& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_nodes() const { return taxonomy_.size(); }

  bool has_edge(NodeId from, NodeId to) const { return edges_.contains({from, to}); }
  std::optional<double> score(NodeId from, NodeId to) const;

  /// Direct preconditions of `node` (targets of its outgoing edges), ascending.
  const std::vector<NodeId>& preconditions(NodeId node) const { return preconditions_.at(node); }
  /// Nodes that list `node` as a direct precondition, ascending.
  const std::vector<NodeId>& dependents(NodeId node) const { return dependents_.at(node); }

  /// Dense reachability: reach[i][j] iff a directed path of length >= 1
  /// leads from i to j.
  std::vector<std::vector<bool>> reachability() const;

  friend bool operator==(const TaskGraph& a, const TaskGraph& b) {
    return a.taxonomy_ == b.taxonomy_ && a.edges_ == b.edges_;
  }

 private:
  Taxonomy taxonomy_;
  EdgeMap edges_;
  std::vector<std::vector<NodeId>> preconditions_;
  std::vector<std::vector<NodeId>> dependents_;
};

}  // namespace taskgraph
