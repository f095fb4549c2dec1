#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "taskgraph/evaluation.hpp"
#include "taskgraph/mistakes.hpp"
#include "taskgraph/sequences.hpp"
#include "taskgraph/task_graph.hpp"
#include "taskgraph/training.hpp"

namespace taskgraph::io {

using Json = nlohmann::ordered_json;

// Graph documents:
//
//   {"taxonomy": ["A", "B"],
//    "edges": [{"from": "A", "to": "START", "score": 0.8}, ...],
//    "config": {...}}
//
// Dataset documents:
//
//   {"taxonomy": ["A", "B"],
//    "sequences": [["A", "B"], ...],
//    "labels": [["correct", "mistake"], ...],
//    "config": {...}}
//
// "taxonomy" lists the real key-steps only; START and END are implicit and
// can be referenced by those names. Node references may be names or integer
// indices (0 = START, n+1 = END). Sequences may omit or include the
// terminals; labels align with the real steps. "config" is optional, written
// verbatim and ignored on read.

Json graph_to_json(const TaskGraph& g, const Json& config = nullptr);
TaskGraph graph_from_json(const Json& doc);

Json dataset_to_json(const SequenceDataset& ds, const Json& config = nullptr);
/// Sequences come back terminal-wrapped.
SequenceDataset dataset_from_json(const Json& doc);

/// Throws InputError naming the file and, for syntax errors, line and column.
Json read_json_file(const std::filesystem::path& path);
/// Two-space indented, newline-terminated, byte-stable for equal documents.
void write_json_file(const std::filesystem::path& path, const Json& doc);

TaskGraph read_graph(const std::filesystem::path& path);
SequenceDataset read_dataset(const std::filesystem::path& path);

/// Graphviz export. Arrows run from precondition to dependent with
/// rankdir=BT, so START sits at the bottom and the graph reads upwards.
std::string to_dot(const TaskGraph& g);

Json to_json(const PrfScores& s);
Json to_json(const OmdReport& r);
Json to_json(const std::vector<DetectionVerdict>& verdicts, const KeySequence& seq,
             const Taxonomy& taxonomy);
Json to_json(const TrainConfig& cfg);

std::string_view to_string(StepLabel label);

}  // namespace taskgraph::io
