#include "taskgraph_cli/cli.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "taskgraph/baselines.hpp"
#include "taskgraph/error.hpp"
#include "taskgraph/evaluation.hpp"
#include "taskgraph/io.hpp"
#include "taskgraph/mistakes.hpp"
#include "taskgraph/postprocess.hpp"
#include "taskgraph/sequences.hpp"
#include "taskgraph/training.hpp"

namespace taskgraph::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

const std::map<std::string, PostprocessMode> kModes = {
    {"standard", PostprocessMode::kStandard},
    {"omd", PostprocessMode::kOmd},
};

std::string mode_name(PostprocessMode mode) {
  return mode == PostprocessMode::kOmd ? "omd" : "standard";
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw InputError(path.string() + ": write failed");
}

// CSV with the resolved configuration on a leading comment line.
std::string csv_with_config(const Json& config, const std::string& header,
                            const std::vector<std::string>& rows) {
  std::string text = "# " + config.dump() + "\n" + header + "\n";
  for (const auto& row : rows) text += row + "\n";
  return text;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- train ----------------------------------------------------------------

struct TrainOptions {
  std::vector<std::string> datasets;
  std::string output;
  std::string output_dir;
  std::string report;
  std::string metrics;
  std::string dot;
  std::string mode = "standard";
  std::optional<double> threshold;
  std::size_t expansion_cap = kDefaultExpansionCap;
  bool merge = false;
  unsigned jobs = 1;
  TrainConfig cfg;
};

struct TrainOutcome {
  std::string summary;
};

TrainOutcome train_one(const std::string& label, const SequenceDataset& raw,
                       const TrainOptions& opt, const fs::path& graph_path,
                       const fs::path& report_path, const fs::path& metrics_path,
                       const fs::path& dot_path, const Json& inputs) {
  const PostprocessMode mode = kModes.at(opt.mode);
  TrainConfig cfg = opt.cfg;
  cfg.threshold = opt.threshold;

  Json config;
  config["command"] = "train";
  config["inputs"] = inputs;
  config["train"] = io::to_json(cfg);
  config["postprocess"] = mode_name(mode);
  config["expansion_cap"] = opt.expansion_cap;

  const SequenceDataset ds = expand_dataset(raw, opt.expansion_cap);
  const TrainReport report = train_do(ds, cfg);
  const TaskGraph graph = extract_task_graph(report.adjacency, ds.taxonomy, mode, cfg.threshold);

  io::write_json_file(graph_path, io::graph_to_json(graph, config));
  if (!dot_path.empty()) write_text(dot_path, io::to_dot(graph));
  if (!metrics_path.empty()) {
    std::vector<std::string> rows;
    for (const auto& e : report.epochs) {
      rows.push_back(std::to_string(e.epoch) + "," + Json(e.loss).dump() + "," +
                     Json(e.sequence_accuracy).dump());
    }
    write_text(metrics_path, csv_with_config(config, "epoch,loss,sa", rows));
  }
  if (!report_path.empty()) {
    Json doc;
    doc["config"] = config;
    doc["sequences"] = ds.sequences.size();
    doc["stop_epoch"] = report.stop_epoch;
    doc["stop_reason"] = std::string(to_string(report.stop_reason));
    doc["final_loss"] = report.epochs.empty() ? Json(nullptr) : Json(report.epochs.back().loss);
    doc["final_sa"] =
        report.epochs.empty() ? Json(nullptr) : Json(report.epochs.back().sequence_accuracy);
    doc["edges"] = graph.num_edges();
    doc["score_matrix"] = matrix_json(report.scores.values());
    doc["adjacency_matrix"] = matrix_json(report.adjacency.weights());
    io::write_json_file(report_path, doc);
  }

  std::string summary = label + ": sequences=" + std::to_string(ds.sequences.size()) +
                        " epochs=" + std::to_string(report.stop_epoch) +
                        " stop=" + std::string(to_string(report.stop_reason)) +
                        " edges=" + std::to_string(graph.num_edges()) + " -> " +
                        graph_path.string();
  return {summary};
}

int cmd_train(const TrainOptions& opt, std::ostream& out) {
  if (!kModes.contains(opt.mode)) throw InputError("unknown --mode '" + opt.mode + "'");
  std::vector<SequenceDataset> datasets;
  for (const auto& path : opt.datasets) datasets.push_back(io::read_dataset(path));

  const bool single = datasets.size() == 1 || opt.merge;
  if (single) {
    if (opt.output.empty()) throw InputError("train: --output is required");
    SequenceDataset merged{datasets.front().taxonomy, {}};
    for (std::size_t i = 0; i < datasets.size(); ++i) {
      if (!(datasets[i].taxonomy == merged.taxonomy)) {
        throw InputError(opt.datasets[i] + ": --merge needs every dataset on the same taxonomy");
      }
      for (auto& s : datasets[i].sequences) merged.sequences.push_back(std::move(s));
    }
    Json inputs = opt.datasets;
    out << train_one("trained", merged, opt, opt.output, opt.report, opt.metrics, opt.dot, inputs)
               .summary
        << '\n';
    return kExitOk;
  }

  if (opt.output_dir.empty()) {
    throw InputError("train: several datasets without --merge need --output-dir");
  }
  if (!opt.output.empty() || !opt.report.empty() || !opt.metrics.empty() || !opt.dot.empty()) {
    throw InputError("train: per-file outputs go to --output-dir when training several datasets");
  }
  fs::create_directories(opt.output_dir);

  // Independent per-procedure sessions; results are printed in input order.
  std::vector<std::optional<TrainOutcome>> outcomes(datasets.size());
  std::vector<std::exception_ptr> errors(datasets.size());
  std::size_t next = 0;
  std::mutex next_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(next_mutex);
        if (next == datasets.size()) return;
        i = next++;
      }
      try {
        const fs::path dir = opt.output_dir;
        const std::string stem = fs::path(opt.datasets[i]).stem().string();
        outcomes[i] = train_one(stem, datasets[i], opt, dir / (stem + ".graph.json"),
                                dir / (stem + ".report.json"), dir / (stem + ".metrics.csv"),
                                dir / (stem + ".dot"), Json::array({opt.datasets[i]}));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned workers = std::max(1u, std::min<unsigned>(opt.jobs, datasets.size()));
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out << outcomes[i]->summary << '\n';
  }
  return kExitOk;
}

// --- the thin commands -------------------------------------------------------

int cmd_eval(const std::string& predicted_path, const std::string& truth_path,
             const std::string& output, std::ostream& out) {
  const TaskGraph predicted = io::read_graph(predicted_path);
  const TaskGraph truth = io::read_graph(truth_path);
  const EdgeEvalReport r = edge_prf(predicted, truth);
  out << "tp=" << r.tp << " fp=" << r.fp << " fn=" << r.fn << " precision=" << fixed(r.precision)
      << " recall=" << fixed(r.recall) << " f1=" << fixed(r.f1) << '\n';
  if (!output.empty()) {
    Json doc;
    doc["config"] = {{"command", "eval"}, {"predicted", predicted_path}, {"truth", truth_path}};
    doc["report"] = io::to_json(r);
    io::write_json_file(output, doc);
  }
  return kExitOk;
}

int cmd_detect(const std::string& graph_path, const std::string& dataset_path,
               const std::string& output, std::ostream& out) {
  const TaskGraph g = io::read_graph(graph_path);
  const SequenceDataset ds = io::read_dataset(dataset_path);
  if (!(ds.taxonomy == g.taxonomy())) throw InputError("detect: graph and dataset taxonomies differ");

  Json doc;
  doc["config"] = {{"command", "detect"}, {"graph", graph_path}, {"dataset", dataset_path}};
  Json streams = Json::array();
  std::size_t flagged = 0;
  std::size_t steps = 0;
  for (const auto& seq : ds.sequences) {
    const auto verdicts = detect_stream(g, seq);
    for (std::size_t t = 1; t + 1 < seq.steps.size(); ++t) {
      ++steps;
      flagged += verdicts[t].label == StepLabel::kMistake ? 1 : 0;
    }
    streams.push_back(io::to_json(verdicts, seq, ds.taxonomy));
  }
  doc["verdicts"] = std::move(streams);
  out << "flagged " << flagged << " of " << steps << " steps";
  if (ds.has_labels()) {
    const OmdReport r = evaluate_detection(g, ds);
    doc["report"] = io::to_json(r);
    out << " avg_f1=" << fixed(r.average_f1) << " correct_f1=" << fixed(r.correct.f1)
        << " mistake_f1=" << fixed(r.mistake.f1);
  }
  out << '\n';
  if (!output.empty()) io::write_json_file(output, doc);
  return kExitOk;
}

int cmd_generate(const std::string& graph_path, std::size_t count, std::uint64_t seed,
                 std::optional<double> mistake_rate, const std::string& output,
                 std::ostream& out) {
  const TaskGraph g = io::read_graph(graph_path);
  SequenceDataset ds = sample_topological_sorts(g, count, seed);
  if (mistake_rate) ds = inject_order_mistakes(g, ds, *mistake_rate, seed);
  Json config = {{"command", "generate"}, {"graph", graph_path}, {"count", count},
                 {"seed", seed},         {"mistake_rate", optional_json(mistake_rate)}};
  io::write_json_file(output, io::dataset_to_json(ds, config));
  out << "generated " << ds.sequences.size() << " sequences -> " << output << '\n';
  return kExitOk;
}

int cmd_perturb(const std::string& dataset_path, double rate, std::uint64_t seed,
                const std::string& output, std::ostream& out) {
  const SequenceDataset ds = io::read_dataset(dataset_path);
  PerturbStats stats;
  const SequenceDataset noisy = perturb(ds, rate, seed, {}, &stats);
  Json config = {{"command", "perturb"}, {"dataset", dataset_path}, {"rate", rate}, {"seed", seed}};
  io::write_json_file(output, io::dataset_to_json(noisy, config));
  out << "perturbed " << stats.perturbed() << " of " << stats.steps_seen
      << " steps (inserted=" << stats.inserted << " removed=" << stats.removed
      << " replaced=" << stats.replaced << ") -> " << output << '\n';
  return kExitOk;
}

int cmd_baseline(const std::string& dataset_path, double threshold, const std::string& mode,
                 std::size_t expansion_cap, const std::string& output, const std::string& dot,
                 std::ostream& out) {
  if (!kModes.contains(mode)) throw InputError("unknown --mode '" + mode + "'");
  const SequenceDataset ds = expand_dataset(io::read_dataset(dataset_path), expansion_cap);
  const TaskGraph g = count_based_graph(ds, threshold, kModes.at(mode));
  Json config = {{"command", "baseline"}, {"dataset", dataset_path}, {"threshold", threshold},
                 {"postprocess", mode},   {"expansion_cap", expansion_cap}};
  io::write_json_file(output, io::graph_to_json(g, config));
  if (!dot.empty()) write_text(dot, io::to_dot(g));
  out << "count-based graph: edges=" << g.num_edges() << " -> " << output << '\n';
  return kExitOk;
}

int cmd_study(const std::string& graph_path, const std::string& dataset_path,
              const std::vector<double>& rates, std::uint64_t seed, const std::string& output,
              std::ostream& out) {
  const TaskGraph g = io::read_graph(graph_path);
  const SequenceDataset ds = io::read_dataset(dataset_path);
  if (!(ds.taxonomy == g.taxonomy())) throw InputError("study: graph and dataset taxonomies differ");
  if (!ds.has_labels()) throw InputError(dataset_path + ": study needs a labelled dataset");
  for (double r : rates) {
    if (!(r >= 0.0 && r <= 1.0)) throw InputError("study: rates must lie in [0, 1]");
  }
  const auto rows = perturbation_study(g, ds, rates, seed);
  Json config = {{"command", "study"}, {"graph", graph_path}, {"dataset", dataset_path},
                 {"rates", rates},     {"seed", seed}};
  std::vector<std::string> lines;
  for (const auto& row : rows) {
    lines.push_back(Json(row.rate).dump() + "," + Json(row.report.average_f1).dump() + "," +
                    Json(row.report.correct.f1).dump() + "," + Json(row.report.mistake.f1).dump());
  }
  const std::string text = csv_with_config(config, "rate,avg_f1,correct_f1,mistake_f1", lines);
  if (output.empty()) {
    out << text;
  } else {
    write_text(output, text);
    out << "wrote " << rows.size() << " rows -> " << output << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn task graphs from key-step sequences and check streams against them",
               "taskgraph"};
  app.require_subcommand(1);

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Learn a task graph from a dataset");
  train_cmd->add_option("datasets", train.datasets, "Dataset file(s)")->required();
  train_cmd->add_option("-o,--output", train.output, "Graph file to write");
  train_cmd->add_option("--output-dir", train.output_dir,
                        "Directory for per-dataset outputs when training several datasets");
  train_cmd->add_option("--report", train.report, "Training report (JSON)");
  train_cmd->add_option("--metrics", train.metrics, "Per-epoch metrics (CSV: epoch,loss,sa)");
  train_cmd->add_option("--dot", train.dot, "Graphviz export of the learned graph");
  train_cmd->add_option("--learning-rate,--learning_rate", train.cfg.learning_rate)
      ->capture_default_str();
  train_cmd->add_option("--max-epochs,--max_epochs", train.cfg.max_epochs)->capture_default_str();
  train_cmd->add_option("--beta", train.cfg.beta)->capture_default_str();
  train_cmd->add_option("--seed", train.cfg.seed)->capture_default_str();
  train_cmd->add_option("--sa-target,--sa_target", train.cfg.sa_target)->capture_default_str();
  train_cmd->add_option("--sa-patience,--sa_patience", train.cfg.sa_patience)
      ->capture_default_str();
  train_cmd->add_option("--adam-beta1,--adam_beta1", train.cfg.adam_beta1)->capture_default_str();
  train_cmd->add_option("--adam-beta2,--adam_beta2", train.cfg.adam_beta2)->capture_default_str();
  train_cmd->add_option("--adam-epsilon,--adam_epsilon", train.cfg.adam_epsilon)
      ->capture_default_str();
  train_cmd->add_option("--threshold", train.threshold,
                        "Binarization cutoff (default 1/N, N counting START and END)");
  train_cmd->add_option("--mode", train.mode, "Post-processing: standard | omd")
      ->capture_default_str();
  train_cmd->add_option("--expansion-cap", train.expansion_cap)->capture_default_str();
  train_cmd->add_flag("--merge", train.merge, "Merge all datasets into one training set");
  train_cmd->add_option("-j,--jobs", train.jobs, "Parallel trainings for several datasets")
      ->capture_default_str();

  std::string predicted, truth, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Edge precision/recall/F1 of a graph");
  eval_cmd->add_option("predicted", predicted)->required();
  eval_cmd->add_option("truth", truth)->required();
  eval_cmd->add_option("-o,--output", eval_out, "Report file (JSON)");

  std::string detect_graph, detect_data, detect_out;
  auto* detect_cmd = app.add_subcommand("detect", "Online mistake detection over a dataset");
  detect_cmd->add_option("graph", detect_graph)->required();
  detect_cmd->add_option("dataset", detect_data)->required();
  detect_cmd->add_option("-o,--output", detect_out, "Verdicts and report (JSON)");

  std::string gen_graph, gen_out;
  std::size_t gen_count = 50;
  std::uint64_t gen_seed = 0;
  std::optional<double> gen_mistakes;
  auto* gen_cmd = app.add_subcommand("generate", "Sample topological sorts of a graph");
  gen_cmd->add_option("graph", gen_graph)->required();
  gen_cmd->add_option("-n,--count", gen_count)->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed)->capture_default_str();
  gen_cmd->add_option("--mistake-rate", gen_mistakes,
                      "Inject precondition-breaking swaps and label every step");
  gen_cmd->add_option("-o,--output", gen_out)->required();

  std::string pert_data, pert_out;
  double pert_rate = 0.0;
  std::uint64_t pert_seed = 0;
  auto* pert_cmd = app.add_subcommand("perturb", "Insert/delete/replace noise on a dataset");
  pert_cmd->add_option("dataset", pert_data)->required();
  pert_cmd->add_option("--rate", pert_rate)->required();
  pert_cmd->add_option("--seed", pert_seed)->capture_default_str();
  pert_cmd->add_option("-o,--output", pert_out)->required();

  std::string base_data, base_out, base_dot, base_mode = "standard";
  double base_threshold = 0.5;
  std::size_t base_cap = kDefaultExpansionCap;
  auto* base_cmd = app.add_subcommand("baseline", "Count-based graph from ordering frequencies");
  base_cmd->add_option("dataset", base_data)->required();
  base_cmd->add_option("--threshold", base_threshold)->capture_default_str();
  base_cmd->add_option("--mode", base_mode)->capture_default_str();
  base_cmd->add_option("--expansion-cap", base_cap)->capture_default_str();
  base_cmd->add_option("-o,--output", base_out)->required();
  base_cmd->add_option("--dot", base_dot);

  std::string study_graph, study_data, study_out;
  std::vector<double> study_rates = {0.0, 0.1, 0.2, 0.3};
  std::uint64_t study_seed = 0;
  auto* study_cmd = app.add_subcommand("study", "F1 versus perturbation rate");
  study_cmd->add_option("graph", study_graph)->required();
  study_cmd->add_option("dataset", study_data)->required();
  study_cmd->add_option("--rates", study_rates)->delimiter(',')->capture_default_str();
  study_cmd->add_option("--seed", study_seed)->capture_default_str();
  study_cmd->add_option("-o,--output", study_out, "CSV file (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*train_cmd) return cmd_train(train, out);
    if (*eval_cmd) return cmd_eval(predicted, truth, eval_out, out);
    if (*detect_cmd) return cmd_detect(detect_graph, detect_data, detect_out, out);
    if (*gen_cmd) return cmd_generate(gen_graph, gen_count, gen_seed, gen_mistakes, gen_out, out);
    if (*pert_cmd) return cmd_perturb(pert_data, pert_rate, pert_seed, pert_out, out);
    if (*base_cmd) {
      return cmd_baseline(base_data, base_threshold, base_mode, base_cap, base_out, base_dot, out);
    }
    if (*study_cmd) return cmd_study(study_graph, study_data, study_rates, study_seed, study_out, out);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericalError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace taskgraph::cli
