#include "taskgraph/postprocess.hpp"

#include <algorithm>
#include <limits>

#include "taskgraph/error.hpp"

namespace taskgraph {
namespace {

using Adjacency = std::vector<std::vector<NodeId>>;

Adjacency out_lists(const EdgeMap& edges, std::size_t n) {
  Adjacency out(n);
  for (const auto& [edge, score] : edges) out[edge.from].push_back(edge.to);
  return out;
}

// Depth-first search in node-index order; returns the edges of the first
// cycle closed by a back edge, or nothing if the graph is acyclic.
std::optional<std::vector<Edge>> find_cycle(const Adjacency& out) {
  enum class Color { kWhite, kGray, kBlack };
  const std::size_t n = out.size();
  std::vector<Color> color(n, Color::kWhite);
  std::vector<NodeId> path;

  struct Frame {
    NodeId node;
    std::size_t next;
  };
  for (NodeId root = 0; root < n; ++root) {
    if (color[root] != Color::kWhite) continue;
    std::vector<Frame> stack{{root, 0}};
    color[root] = Color::kGray;
    path.assign(1, root);
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == out[top.node].size()) {
        color[top.node] = Color::kBlack;
        stack.pop_back();
        path.pop_back();
        continue;
      }
      const NodeId v = out[top.node][top.next++];
      if (color[v] == Color::kGray) {
        std::vector<Edge> cycle;
        auto it = std::find(path.begin(), path.end(), v);
        for (; it + 1 != path.end(); ++it) cycle.push_back({*it, *(it + 1)});
        cycle.push_back({path.back(), v});
        return cycle;
      }
      if (color[v] == Color::kWhite) {
        color[v] = Color::kGray;
        path.push_back(v);
        stack.push_back({v, 0});
      }
    }
  }
  return std::nullopt;
}

void require_dag(const TaskGraph& g, const char* what) {
  if (!is_dag(g)) throw InputError(std::string(what) + " requires an acyclic graph");
}

}  // namespace

double default_threshold(const Taxonomy& taxonomy) {
  return 1.0 / static_cast<double>(taxonomy.size());
}

TaskGraph binarize(const AdjacencyMatrix& z, const Taxonomy& taxonomy,
                   std::optional<double> threshold) {
  if (static_cast<std::size_t>(z.size()) != taxonomy.size()) {
    throw InputError("adjacency matrix size does not match the taxonomy");
  }
  const double cutoff = threshold.value_or(default_threshold(taxonomy));
  const Mask mask = build_mask(taxonomy);
  EdgeMap edges;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      if (!mask(i, j) && z(i, j) > cutoff) {
        edges.emplace(Edge{static_cast<NodeId>(i), static_cast<NodeId>(j)}, z(i, j));
      }
    }
  }
  return {taxonomy, std::move(edges)};
}

bool is_dag(const TaskGraph& g) {
  return !find_cycle(out_lists(g.edges(), g.num_nodes())).has_value();
}

TaskGraph break_cycles(const TaskGraph& g) {
  EdgeMap edges = g.edges();
  while (auto cycle = find_cycle(out_lists(edges, g.num_nodes()))) {
    Edge weakest = cycle->front();
    double weakest_score = std::numeric_limits<double>::infinity();
    for (const Edge& e : *cycle) {
      const double s = edges.at(e).value_or(0.0);
      if (s < weakest_score || (s == weakest_score && e < weakest)) {
        weakest = e;
        weakest_score = s;
      }
    }
    edges.erase(weakest);
  }
  return {g.taxonomy(), std::move(edges)};
}

TaskGraph transitive_reduction(const TaskGraph& g) {
  require_dag(g, "transitive reduction");
  const auto reach = g.reachability();
  EdgeMap kept;
  for (const auto& [edge, score] : g.edges()) {
    bool shadowed = false;
    for (NodeId via : g.preconditions(edge.from)) {
      if (via != edge.to && reach[via][edge.to]) {
        shadowed = true;
        break;
      }
    }
    if (!shadowed) kept.emplace(edge, score);
  }
  return {g.taxonomy(), std::move(kept)};
}

TaskGraph wire_terminals(const TaskGraph& g) {
  const Taxonomy& tax = g.taxonomy();
  EdgeMap edges = g.edges();
  for (NodeId x = 0; x < tax.size(); ++x) {
    if (tax.is_terminal(x)) continue;
    if (g.dependents(x).empty()) edges.emplace(Edge{tax.end(), x}, std::nullopt);
    if (g.preconditions(x).empty()) edges.emplace(Edge{x, tax.start()}, std::nullopt);
  }
  return {tax, std::move(edges)};
}

TaskGraph omd_prune(const TaskGraph& g) {
  require_dag(g, "OMD pruning");
  const NodeId start = g.taxonomy().start();
  EdgeMap edges = g.edges();
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    const auto& pre = g.preconditions(x);
    if (pre.size() == 2 && (pre[0] == start || pre[1] == start)) {
      edges.erase(Edge{x, pre[0] == start ? pre[1] : pre[0]});
    }
  }
  return transitive_reduction(TaskGraph(g.taxonomy(), std::move(edges)));
}

TaskGraph postprocess(const TaskGraph& g, PostprocessMode mode) {
  TaskGraph acyclic = break_cycles(g);
  TaskGraph reduced = mode == PostprocessMode::kOmd ? omd_prune(acyclic)
                                                    : transitive_reduction(acyclic);
  return transitive_reduction(wire_terminals(reduced));
}

TaskGraph extract_task_graph(const AdjacencyMatrix& z, const Taxonomy& taxonomy,
                             PostprocessMode mode, std::optional<double> threshold) {
  return postprocess(binarize(z, taxonomy, threshold), mode);
}

}  // namespace taskgraph
