#include "advwalk/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <string_view>

#include "advwalk/error.hpp"

namespace advwalk {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

std::string_view strip_line(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  return line;
}

bool is_blank_or_comment(std::string_view line) {
  const auto first = line.find_first_not_of(" \t");
  return first == std::string_view::npos || line[first] == '#';
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace

Graph Graph::from_arcs(std::vector<std::string> names, std::span<const Arc> arcs,
                       bool directed) {
  const auto n = static_cast<NodeId>(names.size());
  std::vector<Arc> all;
  all.reserve(directed ? arcs.size() : 2 * arcs.size());
  for (const Arc& a : arcs) {
    if (a.source < 0 || a.source >= n || a.target < 0 || a.target >= n)
      throw DataError("graph: arc endpoint out of range");
    if (a.source == a.target) throw DataError("graph: self-loop on node " + names[a.source]);
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw DataError("graph: arc weight must be positive and finite");
    all.push_back(a);
    if (!directed) all.push_back({a.target, a.source, a.weight});
  }
  std::sort(all.begin(), all.end(), [](const Arc& x, const Arc& y) {
    return x.source != y.source ? x.source < y.source : x.target < y.target;
  });

  Graph g;
  g.directed_ = directed;
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    double w = 0.0;
    for (; j < all.size() && all[j].source == all[i].source && all[j].target == all[i].target; ++j)
      w += all[j].weight;
    g.neighbors_.push_back(all[i].target);
    g.weights_.push_back(w);
    ++g.offsets_[all[i].source + 1];
    i = j;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

  g.samplers_.reserve(names.size());
  for (NodeId v = 0; v < n; ++v) {
    if (g.out_degree(v) == 0) throw DataError("graph: node " + names[v] + " has no outgoing arcs");
    g.samplers_.emplace_back(g.weights(v));
  }
  g.names_ = std::move(names);
  g.index_.reserve(g.names_.size());
  for (NodeId v = 0; v < n; ++v) {
    if (!g.index_.emplace(g.names_[v], v).second)
      throw DataError("graph: duplicate node name " + g.names_[v]);
  }
  return g;
}

double Graph::weight(NodeId u, NodeId v) const noexcept {
  const auto nbrs = neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return weights_[offsets_[u] + (it - nbrs.begin())];
}

std::optional<NodeId> Graph::find(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Graph parse_edge_list(std::istream& in, const EdgeListOptions& options) {
  std::unordered_map<std::string, NodeId> raw_ids;
  std::vector<std::string> raw_names;
  auto intern = [&](std::string_view name) {
    auto [it, inserted] = raw_ids.emplace(std::string(name), static_cast<NodeId>(raw_names.size()));
    if (inserted) raw_names.emplace_back(name);
    return it->second;
  };

  // Keyed by ordered (u, v) for directed input, (min, max) for undirected input.
  std::map<std::pair<NodeId, NodeId>, double> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = strip_line(line);
    if (is_blank_or_comment(text)) continue;
    const auto fields = split_fields(text);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError("edge list: expected 'src dst [weight]'", line_no);
    if (options.weighted && fields.size() != 3)
      throw ParseError("edge list: missing weight column", line_no);

    double w = 1.0;
    if (options.weighted) {
      const auto f = fields[2];
      const auto result = std::from_chars(f.data(), f.data() + f.size(), w);
      if (result.ec != std::errc() || result.ptr != f.data() + f.size() || !std::isfinite(w))
        throw ParseError("edge list: invalid weight '" + std::string(f) + "'", line_no);
      if (w < 0.0) throw ParseError("edge list: negative weight", line_no);
    }
    NodeId u = intern(fields[0]);
    NodeId v = intern(fields[1]);
    if (u == v || w == 0.0) continue;
    if (!options.directed && v < u) std::swap(u, v);
    auto [it, inserted] = edges.emplace(std::pair{u, v}, w);
    if (!inserted && options.weighted) it->second += w;
  }

  // Drop nodes without outgoing arcs until none remain.
  const std::size_t raw_n = raw_names.size();
  std::vector<std::vector<NodeId>> in_arcs(raw_n);
  std::vector<std::size_t> degree(raw_n, 0);
  for (const auto& [key, w] : edges) {
    ++degree[key.first];
    in_arcs[key.second].push_back(key.first);
    if (!options.directed) {
      ++degree[key.second];
      in_arcs[key.first].push_back(key.second);
    }
  }
  std::vector<bool> removed(raw_n, false);
  std::vector<NodeId> queue;
  for (NodeId v = 0; v < static_cast<NodeId>(raw_n); ++v)
    if (degree[v] == 0) queue.push_back(v);
  while (!queue.empty()) {
    const NodeId v = queue.back();
    queue.pop_back();
    if (removed[v]) continue;
    removed[v] = true;
    for (NodeId u : in_arcs[v]) {
      if (removed[u]) continue;
      if (--degree[u] == 0) queue.push_back(u);
    }
  }

  std::vector<NodeId> new_id(raw_n, -1);
  std::vector<std::string> names;
  for (NodeId v = 0; v < static_cast<NodeId>(raw_n); ++v) {
    if (removed[v]) continue;
    new_id[v] = static_cast<NodeId>(names.size());
    names.push_back(std::move(raw_names[v]));
  }
  if (names.empty()) throw DataError("edge list: empty graph after preprocessing");

  std::vector<Arc> arcs;
  arcs.reserve(edges.size());
  for (const auto& [key, w] : edges) {
    if (removed[key.first] || removed[key.second]) continue;
    arcs.push_back({new_id[key.first], new_id[key.second], w});
  }
  return Graph::from_arcs(std::move(names), arcs, options.directed);
}

Graph load_edge_list(const std::filesystem::path& path, const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list " + path.string());
  return parse_edge_list(in, options);
}

namespace {

struct CanonicalLine {
  NodeId source;
  NodeId target;
  double weight;
};

// Visits nodes in discovery order: a node's lines list already-discovered neighbors by rank,
// then new neighbors by id. Ranks equal first-appearance order in the emitted lines.
std::vector<CanonicalLine> canonical_lines(const Graph& g, std::vector<NodeId>& order) {
  const auto n = static_cast<NodeId>(g.node_count());
  std::vector<NodeId> rank(static_cast<std::size_t>(n), -1);
  order.clear();
  order.reserve(static_cast<std::size_t>(n));
  std::vector<CanonicalLine> lines;
  lines.reserve(g.edge_count());

  NodeId next_root = 0;
  std::size_t processed = 0;
  std::vector<std::pair<NodeId, double>> seen;
  std::vector<std::pair<NodeId, double>> fresh;
  while (processed < order.size() || static_cast<NodeId>(order.size()) < n) {
    if (processed == order.size()) {
      while (rank[next_root] != -1) ++next_root;
      rank[next_root] = static_cast<NodeId>(order.size());
      order.push_back(next_root);
    }
    const NodeId u = order[processed++];
    seen.clear();
    fresh.clear();
    const auto nbrs = g.neighbors(u);
    const auto ws = g.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const NodeId v = nbrs[k];
      if (rank[v] == -1) {
        fresh.emplace_back(v, ws[k]);
      } else if (g.directed() || rank[v] > rank[u]) {
        seen.emplace_back(v, ws[k]);
      }
    }
    std::sort(seen.begin(), seen.end(),
              [&](const auto& a, const auto& b) { return rank[a.first] < rank[b.first]; });
    for (const auto& [v, w] : seen) lines.push_back({u, v, w});
    for (const auto& [v, w] : fresh) {  // already sorted by id
      rank[v] = static_cast<NodeId>(order.size());
      order.push_back(v);
      lines.push_back({u, v, w});
    }
  }
  return lines;
}

}  // namespace

void write_edge_list(std::ostream& out, const Graph& graph) {
  std::vector<NodeId> order;
  const auto lines = canonical_lines(graph, order);
  out << "# nodes " << graph.node_count() << " edges " << graph.edge_count()
      << (graph.directed() ? " directed" : " undirected") << '\n';
  for (const auto& line : lines)
    out << graph.name(line.source) << '\t' << graph.name(line.target) << '\t'
        << format_double(line.weight) << '\n';
}

void save_edge_list(const std::filesystem::path& path, const Graph& graph) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_edge_list(out, graph);
}

void save_node_map(const std::filesystem::path& path, const Graph& graph) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (NodeId v = 0; v < static_cast<NodeId>(graph.node_count()); ++v)
    out << v << '\t' << graph.name(v) << '\n';
}

Graph canonicalize(const Graph& graph) {
  std::vector<NodeId> order;
  const auto lines = canonical_lines(graph, order);
  std::vector<NodeId> rank(order.size());
  std::vector<std::string> names(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank[order[r]] = static_cast<NodeId>(r);
    names[r] = graph.name(order[r]);
  }
  std::vector<Arc> arcs;
  arcs.reserve(lines.size());
  for (const auto& line : lines) arcs.push_back({rank[line.source], rank[line.target], line.weight});
  return Graph::from_arcs(std::move(names), arcs, graph.directed());
}

AliasTable negative_distribution(const Graph& graph) {
  std::vector<double> weights(graph.node_count());
  for (NodeId v = 0; v < static_cast<NodeId>(weights.size()); ++v)
    weights[v] = std::pow(static_cast<double>(graph.out_degree(v)), 0.75);
  return AliasTable(weights);
}

std::vector<LabelRecord> read_labels(std::istream& in) {
  std::vector<LabelRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = strip_line(line);
    if (is_blank_or_comment(text)) continue;
    const auto fields = split_fields(text);
    if (fields.size() != 2) throw ParseError("labels: expected 'node label'", line_no);
    records.push_back({std::string(fields[0]), std::string(fields[1])});
  }
  return records;
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file " + path.string());
  return read_labels(in);
}

}  // namespace advwalk
