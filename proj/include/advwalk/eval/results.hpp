#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace advwalk::eval {

/// One metric from one run.
struct ResultRow {
  std::string dataset;
  std::string method;
  std::string task;
  double ratio_or_eps = 0.0;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
};

/// Mean and sample standard deviation over the seeds of one cell.
struct AggregateRow {
  std::string dataset;
  std::string method;
  std::string task;
  double ratio_or_eps = 0.0;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  std::size_t runs = 0;
};

/// Groups by (dataset, method, task, ratio_or_eps, metric) in first-appearance order.
std::vector<AggregateRow> aggregate(std::span<const ResultRow> rows);

void write_results(std::ostream& out, std::span<const ResultRow> rows);
void write_aggregate(std::ostream& out, std::span<const AggregateRow> rows);
void save_results(const std::filesystem::path& path, std::span<const ResultRow> rows);
void save_aggregate(const std::filesystem::path& path, std::span<const AggregateRow> rows);

}  // namespace advwalk::eval
