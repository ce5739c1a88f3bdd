#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "advwalk/graph.hpp"
#include "advwalk/trainer.hpp"
#include "advwalk/walker.hpp"

namespace advwalk {

/// Everything one run needs: input paths, sampling, training and evaluation parameters.
struct RunConfig {
  std::string graph;
  std::string labels;
  std::string out_dir;
  std::string embeddings;
  std::string context;
  std::string split_dir;
  std::string dataset = "graph";

  EdgeListOptions edges;
  WalkConfig walk;
  TrainConfig train;

  std::vector<double> ratios{0.1, 0.5};
  std::vector<double> eps_grid{0.5, 1.0, 1.5, 2.0};
  std::string mode = "adversarial";  // adversarial, random or both
  double attack_ratio = 0.8;
  int runs = 1;
  double keep_ratio = 0.8;

  /// Sets one key from its textual value. Throws std::invalid_argument on unknown keys or
  /// malformed values.
  void set(std::string_view key, std::string_view value);

  /// All keys in a fixed order.
  static const std::vector<std::string>& keys();
  std::string get(std::string_view key) const;
};

/// `key = value` lines; blank lines and `#` comments are skipped. Throws ParseError with
/// the offending line.
void read_config(std::istream& in, RunConfig& config);
RunConfig load_config(const std::filesystem::path& path);

/// Writes every key so the file fully determines the run.
void write_config(std::ostream& out, const RunConfig& config);
void save_config(const std::filesystem::path& path, const RunConfig& config);

/// Comma-separated reals.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace advwalk
