#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// code paths it is used to check.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "taskgraph/matrix.hpp"
#include "taskgraph/postprocess.hpp"
#include "taskgraph/sequences.hpp"
#include "taskgraph/task_graph.hpp"
#include "taskgraph/tgml.hpp"

namespace taskgraph::testing {

inline Taxonomy make_taxonomy(std::size_t key_steps) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < key_steps; ++i) names.push_back("K" + std::to_string(i + 1));
  return Taxonomy(names);
}

inline Taxonomy letters(std::string_view s) {
  std::vector<std::string> names;
  for (char c : s) names.emplace_back(1, c);
  return Taxonomy(names);
}

inline TaskGraph graph_of(const Taxonomy& tax, std::initializer_list<std::pair<NodeId, NodeId>> e) {
  EdgeMap edges;
  for (auto [a, b] : e) edges.emplace(Edge{a, b}, std::nullopt);
  return {tax, std::move(edges)};
}

inline std::set<std::pair<NodeId, NodeId>> edge_set(const TaskGraph& g) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const auto& [e, s] : g.edges()) out.emplace(e.from, e.to);
  return out;
}

// Ground-truth task graph: key-steps in a random order, each later step
// depends on each earlier one with probability `density`; then cleaned up to
// a reduced, terminal-wired DAG.
inline TaskGraph random_task_graph(std::size_t key_steps, double density, std::mt19937_64& rng) {
  const Taxonomy tax = make_taxonomy(key_steps);
  std::vector<NodeId> order(key_steps);
  std::iota(order.begin(), order.end(), NodeId{1});
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(density);
  EdgeMap edges;
  for (std::size_t a = 0; a < key_steps; ++a) {
    for (std::size_t b = a + 1; b < key_steps; ++b) {
      if (coin(rng)) edges.emplace(Edge{order[b], order[a]}, 1.0);
    }
  }
  return postprocess(TaskGraph(tax, std::move(edges)));
}

// Arbitrary weighted digraph respecting the structural mask, cycles allowed.
inline TaskGraph random_weighted_digraph(std::size_t key_steps, double density,
                                         std::mt19937_64& rng) {
  const Taxonomy tax = make_taxonomy(key_steps);
  const Mask mask = build_mask(tax);
  std::bernoulli_distribution coin(density);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  EdgeMap edges;
  for (NodeId i = 0; i < tax.size(); ++i) {
    for (NodeId j = 0; j < tax.size(); ++j) {
      if (!mask(i, j) && coin(rng)) edges.emplace(Edge{i, j}, score(rng));
    }
  }
  return {tax, std::move(edges)};
}

inline ScoreMatrix random_scores(const Taxonomy& tax, std::mt19937_64& rng, double spread = 2.0) {
  std::normal_distribution<double> normal(0.0, spread);
  const auto n = static_cast<Eigen::Index>(tax.size());
  Matrix values(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) values(i, j) = normal(rng);
  }
  return {values, build_mask(tax)};
}

// Random repetition-free wrapped sequence over a random subset of key-steps.
inline KeySequence random_sequence(const Taxonomy& tax, std::mt19937_64& rng) {
  std::vector<NodeId> ids(tax.num_key_steps());
  std::iota(ids.begin(), ids.end(), NodeId{1});
  std::shuffle(ids.begin(), ids.end(), rng);
  std::uniform_int_distribution<std::size_t> len(1, ids.size());
  ids.resize(len(rng));
  return wrap_terminals(tax, ids);
}

// Floyd-Warshall transitive closure over the edge set.
inline std::vector<std::vector<bool>> closure(const TaskGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (const auto& [e, s] : g.edges()) r[e.from][e.to] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

inline bool has_cycle_bruteforce(const TaskGraph& g) {
  const auto r = closure(g);
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i][i]) return true;
  return false;
}

// An edge (i, j) is shadowed if some other precondition k of i reaches j.
inline bool is_transitively_reduced(const TaskGraph& g) {
  const auto r = closure(g);
  for (const auto& [e, s] : g.edges()) {
    for (const auto& [f, t] : g.edges()) {
      if (f.from == e.from && f.to != e.to && r[f.to][e.to]) return false;
    }
  }
  return true;
}

// Direct evaluation of one sequence's likelihood: explicit observed and
// unobserved sets at every step, double sums, one product.
inline double likelihood_bruteforce(const Matrix& z, const std::vector<NodeId>& y) {
  const std::size_t n = static_cast<std::size_t>(z.rows());
  double product = 1.0;
  for (std::size_t t = 1; t < y.size(); ++t) {
    std::set<NodeId> observed(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(t));
    std::set<NodeId> unobserved;
    for (NodeId h = 0; h < n; ++h)
      if (!observed.contains(h)) unobserved.insert(h);
    double num = 0.0;
    for (NodeId j : observed) num += z(y[t], j);
    double den = 0.0;
    for (NodeId h : unobserved)
      for (NodeId j : observed) den += z(h, j);
    product *= num / den;
  }
  return product;
}

// Contrastive loss by explicit sets, used for finite differences.
inline double loss_bruteforce(const Matrix& z, const SequenceDataset& ds, double beta) {
  const std::size_t n = static_cast<std::size_t>(z.rows());
  double loss = 0.0;
  for (const auto& seq : ds.sequences) {
    const auto& y = seq.steps;
    for (std::size_t t = 1; t < y.size(); ++t) {
      std::vector<bool> seen(n, false);
      for (std::size_t s = 0; s < t; ++s) seen[y[s]] = true;
      double num = 0.0;
      double den = 0.0;
      for (NodeId j = 0; j < n; ++j) {
        if (!seen[j]) continue;
        num += z(y[t], j);
        for (NodeId h = 0; h < n; ++h)
          if (!seen[h]) den += z(h, j);
      }
      loss -= std::log(num) - beta * std::log(den);
    }
  }
  return loss;
}

// Softmax written out longhand, -inf style: masked cells contribute nothing.
inline Matrix softmax_bruteforce(const Matrix& a, const Mask& mask) {
  Matrix z = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double total = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!mask(i, j)) total += std::exp(a(i, j));
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!mask(i, j)) z(i, j) = std::exp(a(i, j)) / total;
  }
  return z;
}

// Central finite differences of the brute-force loss through the brute-force
// softmax, with respect to every unmasked score.
inline Matrix finite_difference_gradient(const ScoreMatrix& scores, const SequenceDataset& ds,
                                         double beta, double h = 1e-5) {
  const Matrix& a = scores.values();
  const Mask& mask = scores.mask();
  Matrix grad = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (mask(i, j)) continue;
      Matrix plus = a;
      Matrix minus = a;
      plus(i, j) += h;
      minus(i, j) -= h;
      grad(i, j) = (loss_bruteforce(softmax_bruteforce(plus, mask), ds, beta) -
                    loss_bruteforce(softmax_bruteforce(minus, mask), ds, beta)) /
                   (2.0 * h);
    }
  }
  return grad;
}

// Every subset of positions that keeps exactly one occurrence of each symbol.
inline std::set<std::vector<NodeId>> expansions_bruteforce(const std::vector<NodeId>& seq) {
  std::set<std::vector<NodeId>> out;
  const std::set<NodeId> symbol_set(seq.begin(), seq.end());
  const std::vector<NodeId> symbols(symbol_set.begin(), symbol_set.end());
  const std::size_t len = seq.size();
  std::vector<NodeId> sorted;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << len); ++subset) {
    if (static_cast<std::size_t>(std::popcount(subset)) != symbols.size()) continue;
    std::vector<NodeId> kept;
    for (std::size_t p = 0; p < len; ++p)
      if (subset >> p & 1U) kept.push_back(seq[p]);
    sorted = kept;
    std::sort(sorted.begin(), sorted.end());
    if (sorted == symbols) out.insert(kept);
  }
  return out;
}

// Mistake predicate, restated: some non-START direct precondition (edge
// from the step) never appears earlier in the stream.
inline bool is_mistake_bruteforce(const TaskGraph& g, const std::vector<NodeId>& y,
                                  std::size_t t) {
  if (y[t] == g.taxonomy().start()) return false;
  for (const auto& [e, s] : g.edges()) {
    if (e.from != y[t] || e.to == g.taxonomy().start()) continue;
    if (std::find(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(t), e.to) ==
        y.begin() + static_cast<std::ptrdiff_t>(t))
      return true;
  }
  return false;
}

}  // namespace taskgraph::testing
