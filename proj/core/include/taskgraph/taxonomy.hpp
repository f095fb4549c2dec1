#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taskgraph {

using NodeId = std::size_t;

/// The ordered key-step vocabulary of one procedure.
///
/// Node 0 is the START placeholder and node n+1 is END; the n real key-steps
/// sit in between in the order they were given. Names are unique and the
/// reserved labels "START" and "END" cannot be used for real key-steps.
class Taxonomy {
 public:
  static constexpr std::string_view kStartName = "START";
  static constexpr std::string_view kEndName = "END";

  Taxonomy() = default;
  explicit Taxonomy(std::vector<std::string> key_steps);

  /// Total node count including START and END (n + 2).
  std::size_t size() const { return names_.size(); }
  /// Number of real key-steps (n).
  std::size_t num_key_steps() const { return names_.size() - 2; }

  NodeId start() const { return 0; }
  NodeId end() const { return names_.size() - 1; }
  bool is_terminal(NodeId id) const { return id == start() || id == end(); }
  bool contains(NodeId id) const { return id < names_.size(); }

  const std::string& name(NodeId id) const { return names_.at(id); }
  /// All names, START first and END last.
  const std::vector<std::string>& names() const { return names_; }
  /// Real key-step names only.
  std::vector<std::string> key_step_names() const;

  std::optional<NodeId> find(std::string_view name) const;

  friend bool operator==(const Taxonomy& a, const Taxonomy& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

}  // namespace taskgraph
