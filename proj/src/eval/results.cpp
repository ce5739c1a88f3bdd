#include "advwalk/eval/results.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "advwalk/error.hpp"

namespace advwalk::eval {

std::vector<AggregateRow> aggregate(std::span<const ResultRow> rows) {
  std::vector<AggregateRow> out;
  std::vector<std::vector<double>> values;
  for (const ResultRow& r : rows) {
    std::size_t k = 0;
    for (; k < out.size(); ++k) {
      const AggregateRow& a = out[k];
      if (a.dataset == r.dataset && a.method == r.method && a.task == r.task &&
          a.ratio_or_eps == r.ratio_or_eps && a.metric == r.metric)
        break;
    }
    if (k == out.size()) {
      out.push_back({r.dataset, r.method, r.task, r.ratio_or_eps, r.metric, 0.0, 0.0, 0});
      values.emplace_back();
    }
    values[k].push_back(r.value);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& v = values[k];
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out[k].mean = mean;
    out[k].std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    out[k].runs = v.size();
  }
  return out;
}

void write_results(std::ostream& out, std::span<const ResultRow> rows) {
  out.precision(17);
  out << "dataset,method,task,ratio_or_eps,seed,metric,value\n";
  for (const auto& r : rows)
    out << r.dataset << ',' << r.method << ',' << r.task << ',' << r.ratio_or_eps << ','
        << r.seed << ',' << r.metric << ',' << r.value << '\n';
}

void write_aggregate(std::ostream& out, std::span<const AggregateRow> rows) {
  out.precision(17);
  out << "dataset,method,task,ratio_or_eps,metric,mean,std,runs\n";
  for (const auto& r : rows)
    out << r.dataset << ',' << r.method << ',' << r.task << ',' << r.ratio_or_eps << ','
        << r.metric << ',' << r.mean << ',' << r.std << ',' << r.runs << '\n';
}

void save_results(const std::filesystem::path& path, std::span<const ResultRow> rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_results(out, rows);
}

void save_aggregate(const std::filesystem::path& path, std::span<const AggregateRow> rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_aggregate(out, rows);
}

}  // namespace advwalk::eval
