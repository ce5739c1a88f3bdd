#include "advwalk/eval/link_prediction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "advwalk/error.hpp"
#include "advwalk/eval/linear_classifier.hpp"
#include "advwalk/eval/metrics.hpp"
#include "advwalk/random.hpp"

namespace advwalk::eval {
namespace {

constexpr std::uint64_t kSplitStream = 0x4C50;
constexpr std::uint64_t kNegativeStream = 0x4E45;
constexpr std::uint64_t kTrainNegativeStream = 0x544E;

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

std::vector<NodePair> undirected_edges(const Graph& g) {
  std::vector<NodePair> edges;
  edges.reserve(g.edge_count());
  for (NodeId u = 0; u < static_cast<NodeId>(g.node_count()); ++u)
    for (NodeId v : g.neighbors(u))
      if (u < v) edges.push_back({u, v});
  return edges;
}

// Uniform unordered non-adjacent pairs, distinct from each other and from `excluded`.
std::vector<NodePair> sample_non_edges(const LinkSplit& split, std::size_t count,
                                       std::unordered_set<std::uint64_t>& excluded, Rng& rng) {
  const auto n = static_cast<NodeId>(split.residual.node_count());
  std::vector<NodePair> out;
  out.reserve(count);
  const std::size_t limit = 100 * std::max<std::size_t>(count, 1) + 1000;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > limit) throw DataError("link prediction: cannot sample enough non-edges");
    const auto u = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n));
    const auto v = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(n));
    if (u == v || split.is_source_edge(u, v)) continue;
    if (!excluded.insert(pair_key(u, v)).second) continue;
    out.push_back({std::min(u, v), std::max(u, v)});
  }
  return out;
}

bool pair_less(const NodePair& a, const NodePair& b) {
  return a.first != b.first ? a.first < b.first : a.second < b.second;
}

void normalize_sorted(std::vector<NodePair>& pairs) {
  for (auto& p : pairs)
    if (p.first > p.second) std::swap(p.first, p.second);
  std::sort(pairs.begin(), pairs.end(), pair_less);
}

}  // namespace

bool LinkSplit::is_source_edge(NodeId u, NodeId v) const {
  if (residual.has_arc(u, v)) return true;
  const NodePair key{std::min(u, v), std::max(u, v)};
  return std::binary_search(test_edges.begin(), test_edges.end(), key, pair_less);
}

LinkSplit split_link_prediction(const Graph& graph, double keep_ratio, std::uint64_t seed) {
  if (graph.directed()) throw DataError("link prediction split needs an undirected graph");
  if (!(keep_ratio > 0.0 && keep_ratio <= 1.0))
    throw std::invalid_argument("keep_ratio must be in (0, 1]");

  std::vector<NodePair> kept = undirected_edges(graph);
  const std::size_t total = kept.size();
  const auto target = static_cast<std::size_t>(std::llround((1.0 - keep_ratio) * static_cast<double>(total)));
  std::vector<std::size_t> degree(graph.node_count());
  for (NodeId v = 0; v < static_cast<NodeId>(graph.node_count()); ++v) degree[v] = graph.out_degree(v);

  Rng rng(derive_seed(seed, {kSplitStream}));
  LinkSplit split;
  split.keep_ratio = keep_ratio;
  split.seed = seed;
  std::size_t rejections = 0;
  while (split.test_edges.size() < target) {
    if (kept.empty() || rejections > 100 * total)
      throw DataError("link prediction split infeasible: cannot hide enough edges");
    const std::size_t k = static_cast<std::size_t>(rng() % kept.size());
    const NodePair e = kept[k];
    if (degree[e.first] <= 1 || degree[e.second] <= 1) {
      ++rejections;
      continue;
    }
    --degree[e.first];
    --degree[e.second];
    split.test_edges.push_back(e);
    kept[k] = kept.back();
    kept.pop_back();
  }
  std::sort(kept.begin(), kept.end(), pair_less);
  normalize_sorted(split.test_edges);

  std::vector<Arc> arcs;
  arcs.reserve(kept.size());
  for (const auto& e : kept) arcs.push_back({e.first, e.second, graph.weight(e.first, e.second)});
  split.residual = Graph::from_arcs(graph.names(), arcs, false);

  std::unordered_set<std::uint64_t> used;
  Rng neg_rng(derive_seed(seed, {kNegativeStream}));
  split.test_negatives = sample_non_edges(split, 2 * split.test_edges.size(), used, neg_rng);
  return split;
}

void save_link_split(const std::filesystem::path& dir, const LinkSplit& split) {
  std::filesystem::create_directories(dir);
  save_edge_list(dir / "residual.edges", split.residual);
  std::ofstream out(dir / "test.tsv");
  if (!out) throw DataError("cannot write " + (dir / "test.tsv").string());
  out << "# keep_ratio " << split.keep_ratio << " seed " << split.seed << '\n';
  for (const auto& e : split.test_edges)
    out << split.residual.name(e.first) << '\t' << split.residual.name(e.second) << "\t1\n";
  for (const auto& e : split.test_negatives)
    out << split.residual.name(e.first) << '\t' << split.residual.name(e.second) << "\t0\n";
}

LinkSplit load_link_split(const std::filesystem::path& dir) {
  LinkSplit split;
  split.residual = load_edge_list(dir / "residual.edges", {.directed = false, .weighted = true});
  std::ifstream in(dir / "test.tsv");
  if (!in) throw DataError("cannot open " + (dir / "test.tsv").string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key;
      while (meta >> key) {
        if (key == "keep_ratio") meta >> split.keep_ratio;
        else if (key == "seed") meta >> split.seed;
      }
      continue;
    }
    std::istringstream row(line);
    std::string a, b;
    int label = -1;
    if (!(row >> a >> b >> label) || (label != 0 && label != 1))
      throw ParseError("test.tsv: expected 'u v label'", line_no);
    const auto u = split.residual.find(a);
    const auto v = split.residual.find(b);
    if (!u || !v) throw ParseError("test.tsv: unknown node", line_no);
    (label == 1 ? split.test_edges : split.test_negatives).push_back({*u, *v});
  }
  normalize_sorted(split.test_edges);
  return split;
}

Eigen::MatrixXd hadamard_features(const RowMatrix<double>& embeddings,
                                  std::span<const NodePair> pairs) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(pairs.size()), embeddings.cols());
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out.row(static_cast<Eigen::Index>(k)) =
        embeddings.row(pairs[k].first).cwiseProduct(embeddings.row(pairs[k].second));
  return out;
}

double auc_link_prediction(const RowMatrix<double>& embeddings, const LinkSplit& split,
                           std::uint64_t seed) {
  if (static_cast<std::size_t>(embeddings.rows()) != split.residual.node_count())
    throw std::invalid_argument("auc_link_prediction: embedding rows do not match the split");
  const std::vector<NodePair> positives = undirected_edges(split.residual);

  std::unordered_set<std::uint64_t> used;
  for (const auto& e : split.test_negatives) used.insert(pair_key(e.first, e.second));
  Rng rng(derive_seed(seed, {kTrainNegativeStream}));
  const std::vector<NodePair> negatives = sample_non_edges(split, positives.size(), used, rng);

  std::vector<NodePair> train_pairs = positives;
  train_pairs.insert(train_pairs.end(), negatives.begin(), negatives.end());
  std::vector<int> labels(positives.size(), 1);
  labels.resize(train_pairs.size(), 0);
  const auto classifier = LinearClassifier::fit(hadamard_features(embeddings, train_pairs), labels, 2);

  const Eigen::VectorXd pos = classifier.scores(hadamard_features(embeddings, split.test_edges)).col(1);
  const Eigen::VectorXd neg = classifier.scores(hadamard_features(embeddings, split.test_negatives)).col(1);
  return auc(std::span<const double>(pos.data(), static_cast<std::size_t>(pos.size())),
             std::span<const double>(neg.data(), static_cast<std::size_t>(neg.size())));
}

}  // namespace advwalk::eval
