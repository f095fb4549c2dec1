#include "taskgraph/taxonomy.hpp"

#include "taskgraph/error.hpp"

namespace taskgraph {

Taxonomy::Taxonomy(std::vector<std::string> key_steps) {
  if (key_steps.empty()) {
    throw InputError("taxonomy needs at least one key-step");
  }
  names_.reserve(key_steps.size() + 2);
  names_.emplace_back(kStartName);
  for (auto& name : key_steps) {
    if (name.empty()) {
      throw InputError("taxonomy contains an empty key-step name");
    }
    if (name == kStartName || name == kEndName) {
      throw InputError("key-step name '" + name + "' is reserved");
    }
    names_.push_back(std::move(name));
  }
  names_.emplace_back(kEndName);
  for (NodeId i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw InputError("duplicate key-step name '" + names_[i] + "'");
    }
  }
}

std::vector<std::string> Taxonomy::key_step_names() const {
  if (names_.size() < 2) return {};
  return {names_.begin() + 1, names_.end() - 1};
}

std::optional<NodeId> Taxonomy::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace taskgraph
