// advwalk: preprocess graphs, train embeddings and evaluate them.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>

#include "advwalk/config.hpp"
#include "advwalk/error.hpp"
#include "advwalk/eval/attack.hpp"
#include "advwalk/eval/link_prediction.hpp"
#include "advwalk/eval/node_classification.hpp"
#include "advwalk/eval/results.hpp"
#include "advwalk/graph.hpp"
#include "advwalk/model.hpp"
#include "advwalk/trainer.hpp"

namespace fs = std::filesystem;
using namespace advwalk;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config keys exposed as `--key value` on one subcommand.
struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;

  void attach(CLI::App* app, const std::vector<std::string>& keys) {
    app->add_option("--config", config_path, "key = value file; flags override it");
    for (const auto& key : keys) {
      if (key == "directed" || key == "weighted") {
        app->add_flag("--" + key, flags[key], key + " edge list");
      } else {
        app->add_option("--" + key, values[key]);
      }
    }
  }

  RunConfig resolve(CLI::App* app) const {
    RunConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    try {
      for (const auto& [key, value] : values)
        if (app->count("--" + key)) config.set(key, value);
      for (const auto& [key, value] : flags)
        if (app->count("--" + key)) config.set(key, value ? "true" : "false");
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (config.out_dir.empty()) {
      const char* env = std::getenv("ADVWALK_OUT_DIR");
      config.out_dir = env && *env ? env : "advwalk-out";
    }
    return config;
  }
};

void require(const std::string& value, const char* key) {
  if (value.empty()) throw UsageError(std::string("missing --") + key);
}

std::uint64_t run_seed(const RunConfig& config, int run) {
  return config.train.seed + static_cast<std::uint64_t>(run);
}

/// Rows of `table` reordered to follow `names`.
RowMatrix<double> align(const EmbeddingTable& table, const std::vector<std::string>& names,
                        const std::string& what) {
  std::unordered_map<std::string, Eigen::Index> row_of;
  for (std::size_t i = 0; i < table.names.size(); ++i)
    row_of.emplace(table.names[i], static_cast<Eigen::Index>(i));
  RowMatrix<double> out(static_cast<Eigen::Index>(names.size()), table.vectors.cols());
  for (std::size_t v = 0; v < names.size(); ++v) {
    const auto it = row_of.find(names[v]);
    if (it == row_of.end()) throw DataError(what + " has no row for node " + names[v]);
    out.row(static_cast<Eigen::Index>(v)) = table.vectors.row(it->second);
  }
  return out;
}

eval::LabeledNodes labeled(const RunConfig& config, const std::vector<std::string>& names) {
  require(config.labels, "labels");
  std::unordered_map<std::string, Eigen::Index> row_of;
  for (std::size_t i = 0; i < names.size(); ++i) row_of.emplace(names[i], static_cast<Eigen::Index>(i));
  auto nodes = eval::label_rows(load_labels(config.labels),
                                [&](const std::string& name) -> std::optional<Eigen::Index> {
                                  const auto it = row_of.find(name);
                                  if (it == row_of.end()) return std::nullopt;
                                  return it->second;
                                });
  if (nodes.skipped) std::cerr << "labels: " << nodes.skipped << " records without embedding\n";
  if (nodes.classes.size() < 2) throw DataError("labels cover fewer than two classes");
  return nodes;
}

void write_outputs(const RunConfig& config, const std::string& task,
                   const std::vector<eval::ResultRow>& rows) {
  const fs::path dir = config.out_dir;
  fs::create_directories(dir);
  eval::save_results(dir / (task + "_metrics.csv"), rows);
  eval::save_aggregate(dir / (task + "_summary.csv"), eval::aggregate(rows));
  save_config(dir / (task + ".cfg"), config);
  for (const auto& row : eval::aggregate(rows))
    std::cout << row.task << ' ' << row.ratio_or_eps << ' ' << row.metric << ' ' << row.mean
              << " +- " << row.std << " (" << row.runs << " runs)\n";
}

int cmd_preprocess(const std::string& input, const std::string& output, std::string node_map,
                   const EdgeListOptions& options) {
  const Graph graph = canonicalize(load_edge_list(input, options));
  save_edge_list(output, graph);
  if (node_map.empty()) node_map = output + ".nodes";
  save_node_map(node_map, graph);
  std::cout << "nodes " << graph.node_count() << " edges " << graph.edge_count() << '\n';
  return 0;
}

int cmd_train(RunConfig config) {
  require(config.graph, "graph");
  config.walk.validate();
  config.train.validate();
  const Graph graph = load_edge_list(config.graph, config.edges);
  const fs::path dir = config.out_dir;
  fs::create_directories(dir);

  const auto result = train(graph, config.walk, config.train, [](const EpochStats& s, const auto&) {
    std::cerr << "epoch " << s.epoch << " clean " << s.clean_loss << " reg " << s.reg_loss << '\n';
    return true;
  });
  config.embeddings = (dir / "embeddings.txt").string();
  config.context = (dir / "context.txt").string();
  save_embeddings(config.embeddings, result.model.target, graph.names());
  save_embeddings(config.context, result.model.context, graph.names());
  save_history((dir / "loss.csv").string(), result.history);
  save_config(dir / "train.cfg", config);
  return 0;
}

int cmd_split(RunConfig config) {
  require(config.graph, "graph");
  const Graph graph = load_edge_list(config.graph, config.edges);
  const auto split = eval::split_link_prediction(graph, config.keep_ratio, config.train.seed);
  config.split_dir = config.out_dir;
  eval::save_link_split(config.split_dir, split);
  save_config(fs::path(config.out_dir) / "split.cfg", config);
  std::cout << "test edges " << split.test_edges.size() << " negatives "
            << split.test_negatives.size() << '\n';
  return 0;
}

int cmd_eval_lp(const RunConfig& config) {
  require(config.split_dir, "split-dir");
  require(config.embeddings, "embeddings");
  const auto split = eval::load_link_split(config.split_dir);
  const auto embeddings =
      align(load_embeddings(config.embeddings), split.residual.names(), "embedding file");
  std::vector<eval::ResultRow> rows;
  for (int r = 0; r < config.runs; ++r) {
    const auto seed = run_seed(config, r);
    rows.push_back({config.dataset, std::string(to_string(config.train.method)), "lp",
                    split.keep_ratio, seed, "auc", eval::auc_link_prediction(embeddings, split, seed)});
  }
  write_outputs(config, "lp", rows);
  return 0;
}

int cmd_eval_nc(const RunConfig& config) {
  require(config.embeddings, "embeddings");
  const auto table = load_embeddings(config.embeddings);
  const auto nodes = labeled(config, table.names);
  std::vector<eval::ResultRow> rows;
  for (double ratio : config.ratios)
    for (int r = 0; r < config.runs; ++r) {
      const auto seed = run_seed(config, r);
      rows.push_back({config.dataset, std::string(to_string(config.train.method)), "nc", ratio, seed,
                      "accuracy", eval::node_classification(table.vectors, nodes, ratio, seed)});
    }
  write_outputs(config, "nc", rows);
  return 0;
}

int cmd_eval_attack(const RunConfig& config) {
  require(config.graph, "graph");
  require(config.embeddings, "embeddings");
  config.walk.validate();
  const Graph graph = load_edge_list(config.graph, config.edges);
  EmbeddingModel<double> model;
  model.target = align(load_embeddings(config.embeddings), graph.names(), "embedding file");
  if (config.context.empty()) {
    if (config.mode != "random") throw UsageError("missing --context for adversarial attack");
    model.context = RowMatrix<double>::Zero(model.target.rows(), model.target.cols());
  } else {
    model.context = align(load_embeddings(config.context), graph.names(), "context file");
  }
  const auto nodes = labeled(config, graph.names());

  std::vector<eval::AttackMode> modes;
  if (config.mode != "random") modes.push_back(eval::AttackMode::adversarial);
  if (config.mode != "adversarial") modes.push_back(eval::AttackMode::random);

  std::vector<eval::ResultRow> rows;
  for (const auto mode : modes)
    for (int r = 0; r < config.runs; ++r) {
      const auto seed = run_seed(config, r);
      const auto points = eval::attack(model, graph, nodes, config.eps_grid, mode,
                                       config.attack_ratio, seed, config.walk);
      for (const auto& p : points)
        rows.push_back({config.dataset, std::string(to_string(config.train.method)),
                        "attack-" + std::string(eval::to_string(mode)), p.eps, seed, "accuracy",
                        p.accuracy});
    }
  write_outputs(config, "attack", rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-walk node embeddings with adversarial regularization"};
  app.require_subcommand(1);

  const std::vector<std::string> train_keys = {
      "graph", "labels", "out-dir", "dataset", "directed", "weighted", "method", "epochs",
      "pretrain", "batch-size", "lr", "eps", "lambda", "neighbors", "dim", "ppmi-order",
      "ppmi-shift", "walks-per-node", "walk-length", "window", "negatives", "seed"};
  const std::vector<std::string> eval_common = {"out-dir", "dataset", "method", "seed", "runs"};
  auto with = [&](std::vector<std::string> extra) {
    extra.insert(extra.end(), eval_common.begin(), eval_common.end());
    return extra;
  };

  std::string pre_in, pre_out, pre_map;
  EdgeListOptions pre_options;
  auto* preprocess = app.add_subcommand("preprocess", "Clean an edge list and write it canonically");
  preprocess->add_option("input", pre_in, "raw edge list")->required();
  preprocess->add_option("output", pre_out, "canonical edge list")->required();
  preprocess->add_option("--node-map", pre_map, "id/name table (default: <output>.nodes)");
  preprocess->add_flag("--directed", pre_options.directed, "directed edge list");
  preprocess->add_flag("--weighted", pre_options.weighted, "read a weight column");

  Overrides train_args, split_args, lp_args, nc_args, attack_args;
  auto* train_cmd = app.add_subcommand("train", "Train embeddings");
  train_args.attach(train_cmd, train_keys);

  auto* split_cmd = app.add_subcommand("split-lp", "Hide edges for link prediction");
  split_args.attach(split_cmd, {"graph", "out-dir", "dataset", "weighted", "keep-ratio", "seed"});

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate embeddings");
  eval_cmd->require_subcommand(1);
  auto* lp_cmd = eval_cmd->add_subcommand("lp", "Link prediction AUC");
  lp_args.attach(lp_cmd, with({"split-dir", "embeddings"}));
  auto* nc_cmd = eval_cmd->add_subcommand("nc", "Node classification accuracy");
  nc_args.attach(nc_cmd, with({"labels", "embeddings", "ratios"}));
  auto* attack_cmd = eval_cmd->add_subcommand("attack", "Accuracy under embedding perturbations");
  attack_args.attach(attack_cmd,
                     with({"graph", "labels", "embeddings", "context", "directed", "weighted",
                           "eps-grid", "mode", "attack-ratio", "walks-per-node", "walk-length",
                           "window", "negatives"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*preprocess) return cmd_preprocess(pre_in, pre_out, pre_map, pre_options);
    if (*train_cmd) return cmd_train(train_args.resolve(train_cmd));
    if (*split_cmd) return cmd_split(split_args.resolve(split_cmd));
    if (*lp_cmd) return cmd_eval_lp(lp_args.resolve(lp_cmd));
    if (*nc_cmd) return cmd_eval_nc(nc_args.resolve(nc_cmd));
    if (*attack_cmd) return cmd_eval_attack(attack_args.resolve(attack_cmd));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
