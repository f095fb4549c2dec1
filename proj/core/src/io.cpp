#include "taskgraph/io.hpp"

#include <fstream>
#include <sstream>

#include "taskgraph/error.hpp"

namespace taskgraph::io {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

Taxonomy taxonomy_from_json(const Json& doc) {
  if (!doc.is_object()) fail("/", "expected a JSON object");
  if (!doc.contains("taxonomy") || !doc["taxonomy"].is_array()) {
    fail("/taxonomy", "missing or not an array of key-step names");
  }
  std::vector<std::string> names;
  const auto& arr = doc["taxonomy"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) fail("/taxonomy/" + std::to_string(i), "expected a string");
    names.push_back(arr[i].get<std::string>());
  }
  try {
    return Taxonomy(std::move(names));
  } catch (const InputError& e) {
    fail("/taxonomy", e.what());
  }
}

NodeId resolve(const Taxonomy& tax, const Json& ref, const std::string& where) {
  if (ref.is_string()) {
    const auto name = ref.get<std::string>();
    if (auto id = tax.find(name)) return *id;
    fail(where, "unknown key-step '" + name + "'");
  }
  if (ref.is_number_integer()) {
    const auto id = ref.get<long long>();
    if (id < 0 || static_cast<std::size_t>(id) >= tax.size()) {
      fail(where, "index " + std::to_string(id) + " is outside the taxonomy");
    }
    return static_cast<NodeId>(id);
  }
  fail(where, "expected a key-step name or index");
}

StepLabel label_from_json(const Json& j, const std::string& where) {
  if (j == "correct") return StepLabel::kCorrect;
  if (j == "mistake") return StepLabel::kMistake;
  fail(where, "expected \"correct\" or \"mistake\"");
}

Json taxonomy_json(const Taxonomy& tax) {
  Json arr = Json::array();
  for (const auto& name : tax.key_step_names()) arr.push_back(name);
  return arr;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string_view to_string(StepLabel label) {
  return label == StepLabel::kMistake ? "mistake" : "correct";
}

Json graph_to_json(const TaskGraph& g, const Json& config) {
  const Taxonomy& tax = g.taxonomy();
  Json doc;
  doc["taxonomy"] = taxonomy_json(tax);
  Json edges = Json::array();
  for (const auto& [edge, score] : g.edges()) {
    Json e;
    e["from"] = tax.name(edge.from);
    e["to"] = tax.name(edge.to);
    e["score"] = score ? Json(*score) : Json(nullptr);
    edges.push_back(std::move(e));
  }
  doc["edges"] = std::move(edges);
  if (!config.is_null()) doc["config"] = config;
  return doc;
}

TaskGraph graph_from_json(const Json& doc) {
  Taxonomy tax = taxonomy_from_json(doc);
  if (!doc.contains("edges") || !doc["edges"].is_array()) fail("/edges", "missing or not an array");
  EdgeMap edges;
  const auto& arr = doc["edges"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "/edges/" + std::to_string(i);
    const auto& e = arr[i];
    if (!e.is_object() || !e.contains("from") || !e.contains("to")) {
      fail(where, "expected an object with \"from\" and \"to\"");
    }
    const Edge edge{resolve(tax, e["from"], where + "/from"), resolve(tax, e["to"], where + "/to")};
    std::optional<double> score;
    if (e.contains("score") && !e["score"].is_null()) {
      if (!e["score"].is_number()) fail(where + "/score", "expected a number or null");
      score = e["score"].get<double>();
    }
    if (!edges.emplace(edge, score).second) fail(where, "duplicate edge");
  }
  try {
    return TaskGraph(std::move(tax), std::move(edges));
  } catch (const InputError& e) {
    fail("/edges", e.what());
  }
}

Json dataset_to_json(const SequenceDataset& ds, const Json& config) {
  const Taxonomy& tax = ds.taxonomy;
  Json doc;
  doc["taxonomy"] = taxonomy_json(tax);
  Json sequences = Json::array();
  Json labels = Json::array();
  for (const auto& seq : ds.sequences) {
    Json steps = Json::array();
    Json seq_labels = Json::array();
    for (std::size_t t = 0; t < seq.steps.size(); ++t) {
      if (tax.is_terminal(seq.steps[t])) continue;
      steps.push_back(tax.name(seq.steps[t]));
      if (seq.has_labels()) seq_labels.push_back(to_string(seq.labels[t]));
    }
    sequences.push_back(std::move(steps));
    labels.push_back(std::move(seq_labels));
  }
  doc["sequences"] = std::move(sequences);
  if (ds.has_labels()) doc["labels"] = std::move(labels);
  if (!config.is_null()) doc["config"] = config;
  return doc;
}

SequenceDataset dataset_from_json(const Json& doc) {
  SequenceDataset ds{taxonomy_from_json(doc), {}};
  const Taxonomy& tax = ds.taxonomy;
  if (!doc.contains("sequences") || !doc["sequences"].is_array()) {
    fail("/sequences", "missing or not an array");
  }
  const auto& seqs = doc["sequences"];
  const Json* labels = nullptr;
  if (doc.contains("labels")) {
    labels = &doc["labels"];
    if (!labels->is_array() || labels->size() != seqs.size()) {
      fail("/labels", "expected one label list per sequence");
    }
  }
  for (std::size_t k = 0; k < seqs.size(); ++k) {
    const std::string where = "/sequences/" + std::to_string(k);
    if (!seqs[k].is_array()) fail(where, "expected an array of key-steps");
    std::vector<NodeId> raw;
    for (std::size_t t = 0; t < seqs[k].size(); ++t) {
      const NodeId id = resolve(tax, seqs[k][t], where + "/" + std::to_string(t));
      const bool leading_start = t == 0 && id == tax.start();
      const bool trailing_end = t + 1 == seqs[k].size() && id == tax.end();
      if (leading_start || trailing_end) continue;
      if (tax.is_terminal(id)) fail(where + "/" + std::to_string(t), "terminal inside sequence");
      raw.push_back(id);
    }
    KeySequence seq = wrap_terminals(tax, raw);
    if (labels) {
      const std::string lwhere = "/labels/" + std::to_string(k);
      const auto& l = (*labels)[k];
      if (!l.is_array() || l.size() != raw.size()) {
        fail(lwhere, "expected " + std::to_string(raw.size()) + " labels, one per key-step");
      }
      seq.labels.assign(seq.steps.size(), StepLabel::kCorrect);
      for (std::size_t t = 0; t < l.size(); ++t) {
        seq.labels[t + 1] = label_from_json(l[t], lwhere + "/" + std::to_string(t));
      }
    }
    ds.sequences.push_back(std::move(seq));
  }
  if (ds.sequences.empty()) fail("/sequences", "dataset has no sequences");
  return ds;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw InputError(path.string() + ": write failed");
}

TaskGraph read_graph(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  try {
    return graph_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(path.string() + ":" + e.what());
  }
}

SequenceDataset read_dataset(const std::filesystem::path& path) {
  const Json doc = read_json_file(path);
  try {
    return dataset_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(path.string() + ":" + e.what());
  }
}

std::string to_dot(const TaskGraph& g) {
  const Taxonomy& tax = g.taxonomy();
  std::ostringstream out;
  out << "digraph taskgraph {\n  rankdir=BT;\n  node [shape=box];\n";
  for (NodeId i = 0; i < tax.size(); ++i) {
    out << "  n" << i << " [label=\"" << dot_escape(tax.name(i)) << "\"";
    if (tax.is_terminal(i)) out << ", shape=ellipse";
    out << "];\n";
  }
  for (const auto& [edge, score] : g.edges()) {
    out << "  n" << edge.to << " -> n" << edge.from;
    if (score) out << " [label=\"" << Json(*score).dump() << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

Json to_json(const PrfScores& s) {
  Json j;
  j["tp"] = s.tp;
  j["fp"] = s.fp;
  j["fn"] = s.fn;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  return j;
}

Json to_json(const OmdReport& r) {
  Json j;
  j["average_f1"] = r.average_f1;
  j["correct"] = to_json(r.correct);
  j["mistake"] = to_json(r.mistake);
  return j;
}

Json to_json(const std::vector<DetectionVerdict>& verdicts, const KeySequence& seq,
             const Taxonomy& taxonomy) {
  Json arr = Json::array();
  for (std::size_t t = 0; t < verdicts.size(); ++t) {
    Json v;
    v["step"] = taxonomy.name(seq.steps[t]);
    v["label"] = to_string(verdicts[t].label);
    Json missing = Json::array();
    for (NodeId p : verdicts[t].missing_preconditions) missing.push_back(taxonomy.name(p));
    v["missing_preconditions"] = std::move(missing);
    arr.push_back(std::move(v));
  }
  return arr;
}

Json to_json(const TrainConfig& cfg) {
  Json j;
  j["learning_rate"] = cfg.learning_rate;
  j["max_epochs"] = cfg.max_epochs;
  j["beta"] = cfg.beta;
  j["seed"] = cfg.seed;
  j["sa_target"] = cfg.sa_target;
  j["sa_patience"] = cfg.sa_patience;
  j["adam_beta1"] = cfg.adam_beta1;
  j["adam_beta2"] = cfg.adam_beta2;
  j["adam_epsilon"] = cfg.adam_epsilon;
  j["threshold"] = cfg.threshold ? Json(*cfg.threshold) : Json(nullptr);
  return j;
}

}  // namespace taskgraph::io
