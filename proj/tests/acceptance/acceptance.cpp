// Acceptance report: one line per criterion.
//
//   acceptance                 all criteria
//   acceptance --group core    criteria that need no external data
//   acceptance --group data    criteria on the citation datasets
//   acceptance --only 4 5      selected criteria
//
// Dataset criteria read ADVWALK_CORA_EDGES, ADVWALK_CORA_LABELS and ADVWALK_CITESEER_EDGES.
// Exit status: 0 all run criteria pass, 1 any failure, 77 nothing failed but something was
// skipped for missing data.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "advwalk/eval/attack.hpp"
#include "advwalk/eval/link_prediction.hpp"
#include "advwalk/eval/node_classification.hpp"
#include "advwalk/loss.hpp"
#include "advwalk/perturbation.hpp"
#include "advwalk/proximity.hpp"
#include "advwalk/trainer.hpp"
#include "contracts.hpp"
#include "gradient_check.hpp"
#include "test_support.hpp"

using namespace advwalk;

namespace {

// Tolerances and budgets.
constexpr double kGradientTolerance = 1e-4;
constexpr int kGradientInstances = 100;
constexpr double kPpmiTolerance = 1e-10;
constexpr int kPpmiGraphs = 50;
constexpr std::size_t kPpmiMaxNodes = 200;
constexpr double kSamplerTolerance = 0.005;
constexpr std::size_t kSamplerDraws = 1'000'000;
constexpr double kWalkTolerance = 0.01;
constexpr std::size_t kWalkSteps = 100'000;
constexpr std::size_t kContractCases = 10'000;
constexpr double kOneMinute = 60.0;

constexpr int kDominanceBatches = 200;
constexpr int kDominanceEpochs = 10;
constexpr double kAttackRatio = 0.8;
constexpr double kAttackEps = 2.0;
constexpr double kAttackFactor = 2.0;
constexpr int kSeeds = 10;
constexpr double kAucDwns = 0.609;
constexpr double kAucAdvt = 0.644;
constexpr double kAucTolerance = 0.04;
constexpr double kAucMargin = 0.015;
constexpr double kAccDwns10 = 0.7320, kAccAdvt10 = 0.7773;
constexpr double kAccDwns50 = 0.8227, kAccAdvt50 = 0.8363;
constexpr double kAccTolerance = 0.04;
constexpr double kAccMargin10 = 0.02, kAccMargin50 = 0.005;

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

struct Criterion {
  int id;
  const char* group;
  const char* title;
  double budget_seconds;  // <= 0: no budget
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }

// ---- core criteria ---------------------------------------------------------------------

Outcome gradient_oracle() {
  Rng rng(1001);
  double param = 0, pert = 0, weights = 0;
  for (int i = 0; i < kGradientInstances; ++i) {
    const auto g = testing::random_instance(rng);
    param = std::max(param, testing::parameter_gradient_error(g));
    pert = std::max(pert, testing::perturbation_gradient_error(g));
    weights = std::max(weights, testing::direction_weight_gradient_error(rng));
  }
  const double worst = std::max({param, pert, weights});
  return verdict(worst < kGradientTolerance,
                 fmt("worst relative error: parameters %.2e, perturbations %.2e, direction weights %.2e",
                     param, pert, weights));
}

Outcome ppmi_oracle() {
  Rng rng(1002);
  double worst = 0.0;
  for (int i = 0; i < kPpmiGraphs; ++i) {
    const std::size_t n = 2 + rng() % (kPpmiMaxNodes - 1);
    const double p = std::min(1.0, 4.0 / static_cast<double>(n));
    const Graph g = i % 4 == 0 ? testing::random_digraph(n, p, rng) : testing::random_graph(n, p, rng, i % 2);
    const double shift = 1.0 / static_cast<double>(g.node_count());
    const Eigen::MatrixXd sparse(shifted_ppmi(g, 2, shift));
    worst = std::max(worst, (sparse - testing::dense_ppmi(g, 2, shift)).cwiseAbs().maxCoeff());
  }
  return verdict(worst <= kPpmiTolerance, fmt("max elementwise gap %.2e", worst));
}

double max_frequency_gap(const AliasTable& table, std::span<const double> expected, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> counts(table.size(), 0.0);
  for (std::size_t i = 0; i < kSamplerDraws; ++i) counts[table.sample(rng)] += 1.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k)
    worst = std::max(worst, std::abs(counts[k] / static_cast<double>(kSamplerDraws) - expected[k]));
  return worst;
}

Outcome sampler_distributions() {
  Rng rng(1003);
  std::vector<double> w(40);
  for (auto& x : w) x = uniform01(rng) * 10.0;
  w[3] = 0.0;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> expected(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) expected[k] = w[k] / total;
  const double alias_gap = max_frequency_gap(AliasTable(w), expected, 1);

  const Graph g = testing::random_graph(60, 0.08, rng);
  std::vector<double> noise(g.node_count());
  for (NodeId v = 0; v < static_cast<NodeId>(noise.size()); ++v)
    noise[v] = std::pow(static_cast<double>(g.out_degree(v)), 0.75);
  const double noise_total = std::accumulate(noise.begin(), noise.end(), 0.0);
  for (auto& x : noise) x /= noise_total;
  const double noise_gap = max_frequency_gap(negative_distribution(g), noise, 2);

  // Weighted star: count transitions out of the center inside generated walks.
  const Graph star = testing::parse("c a 1\nc b 2\nc d 3\nc e 4\n", {.directed = false, .weighted = true});
  const NodeId c = *star.find("c");
  WalkConfig walk;
  walk.walk_length = 401;
  walk.window = 1;
  walk.walks_per_node = static_cast<int>(kWalkSteps / (star.node_count() * 200)) + 1;
  std::map<NodeId, double> next;
  std::size_t steps = 0;
  for (const auto& path : generate_walks(star, walk, 3))
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      if (path[i] == c) {
        next[path[i + 1]] += 1.0;
        ++steps;
      }
  double walk_gap = 0.0;
  for (const auto& [leaf, count] : next)
    walk_gap = std::max(walk_gap, std::abs(count / static_cast<double>(steps) - star.weight(c, leaf) / 10.0));

  const bool ok = alias_gap <= kSamplerTolerance && noise_gap <= kSamplerTolerance &&
                  walk_gap <= kWalkTolerance && steps >= kWalkSteps;
  return verdict(ok, fmt("alias gap %.4f, degree^0.75 gap %.4f over 1e6 draws; walk step gap %.4f over %.0f steps",
                         alias_gap, noise_gap, walk_gap, static_cast<double>(steps)));
}

bool same_run(const TrainResult& a, const TrainResult& b) {
  if (a.model.target != b.model.target || a.model.context != b.model.context) return false;
  if (a.history.size() != b.history.size()) return false;
  for (std::size_t e = 0; e < a.history.size(); ++e)
    if (a.history[e].clean_loss != b.history[e].clean_loss || a.history[e].reg_loss != b.history[e].reg_loss)
      return false;
  return true;
}

Outcome reduction_and_determinism() {
  Rng rng(1004);
  const Graph g = testing::random_graph(60, 0.08, rng, true);
  WalkConfig walk;
  walk.walk_length = 20;
  walk.seed = 8;
  TrainConfig cfg;
  cfg.epochs = 6;
  cfg.pretrain_epochs = 2;
  cfg.dim = 16;
  cfg.batch_size = 256;
  cfg.learning_rate = 0.01;
  cfg.seed = 8;

  // Per-epoch snapshots of both matrices.
  auto trajectory = [&](const TrainConfig& c) {
    std::vector<RowMatrix<double>> states;
    auto r = train(g, walk, c, [&](const EpochStats&, const EmbeddingModel<double>& m) {
      states.push_back(m.target);
      states.push_back(m.context);
      return true;
    });
    return std::make_pair(std::move(r), std::move(states));
  };

  cfg.method = Method::dwns;
  const auto [dwns, dwns_states] = trajectory(cfg);
  cfg.method = Method::rand;
  cfg.lambda = 0.0;
  const auto [rand, rand_states] = trajectory(cfg);
  const bool reduction = dwns_states == rand_states &&
                         std::equal(dwns.history.begin(), dwns.history.end(), rand.history.begin(),
                                    [](const EpochStats& a, const EpochStats& b) { return a.clean_loss == b.clean_loss; });

  bool deterministic = true;
  cfg.lambda = 1.0;
  for (Method m : {Method::dwns, Method::rand, Method::advt, Method::iadvt}) {
    cfg.method = m;
    deterministic = deterministic && same_run(train(g, walk, cfg), train(g, walk, cfg));
  }
  return verdict(reduction && deterministic,
                 std::string("rand(lambda=0) == dwns: ") + (reduction ? "yes" : "no") +
                     "; repeated runs identical for all methods: " + (deterministic ? "yes" : "no"));
}

Outcome norm_contracts() {
  const auto report = testing::run_norm_contracts(1005, kContractCases);
  std::string detail = std::to_string(report.cases) + " cases, " + std::to_string(report.checks) + " checks, " +
                       std::to_string(report.failures) + " failures";
  if (report.failures) detail += "; first: " + report.first_failure;
  return verdict(report.failures == 0 && report.cases == kContractCases, detail);
}

// ---- dataset criteria ------------------------------------------------------------------

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

Outcome missing(const char* what) {
  return {Status::skip, std::string("dataset not available (set ") + what + ")"};
}

struct Dataset {
  Graph graph;
  eval::LabeledNodes labels;
};

std::optional<Dataset> load_cora(bool need_labels) {
  const auto edges = env("ADVWALK_CORA_EDGES");
  const auto labels = env("ADVWALK_CORA_LABELS");
  if (!edges || (need_labels && !labels)) return std::nullopt;
  Dataset d;
  d.graph = load_edge_list(*edges, {});
  if (labels)
    d.labels = eval::label_rows(load_labels(*labels), [&](const std::string& name) -> std::optional<Eigen::Index> {
      const auto id = d.graph.find(name);
      if (!id) return std::nullopt;
      return static_cast<Eigen::Index>(*id);
    });
  return d;
}

TrainConfig default_training(Method method, std::uint64_t seed) {
  TrainConfig cfg;  // 100 epochs, 10 pretraining, d = 128, b = 1024, lr = 0.001, eps = 0.9, lambda = 1
  cfg.method = method;
  cfg.seed = seed;
  return cfg;
}

WalkConfig walk_defaults(std::uint64_t seed) {
  WalkConfig w;  // one walk of length 40 per node, window 5, five negatives
  w.seed = seed;
  return w;
}

Outcome perturbation_dominance() {
  const auto cora = load_cora(false);
  if (!cora) return missing("ADVWALK_CORA_EDGES");
  auto cfg = default_training(Method::dwns, 1);
  cfg.epochs = kDominanceEpochs;
  const auto walk = walk_defaults(1);
  const auto model = train(cora->graph, walk, cfg).model;

  const PairBatch corpus = epoch_corpus(cora->graph, walk, negative_distribution(cora->graph), cfg.epochs);
  const auto b = static_cast<std::size_t>(cfg.batch_size);
  const auto n = model.nodes();
  std::string detail;
  bool ok = true;
  for (double eps : {0.5, 1.0, 2.0}) {
    Rng rng(derive_seed(7, {static_cast<std::uint64_t>(eps * 10)}));
    double adv = 0.0, rnd = 0.0;
    int batches = 0;
    for (std::size_t begin = 0; begin < corpus.size() && batches < kDominanceBatches; begin += b, ++batches) {
      const PairBatch batch = corpus.slice(begin, std::min(corpus.size(), begin + b));
      const auto fast = fast_gradient_perturbations(model, batch, eps);
      const auto random = random_perturbations(batch, n, model.dim(), eps, rng);
      adv += batch_loss(model, batch, &fast);
      rnd += batch_loss(model, batch, &random);
    }
    adv /= batches;
    rnd /= batches;
    ok = ok && adv > rnd && batches == kDominanceBatches;
    detail += fmt("eps %.1f: adversarial %.2f vs random %.2f; ", eps, adv, rnd);
  }
  return verdict(ok, detail);
}

Outcome attack_reproduction() {
  const auto cora = load_cora(true);
  if (!cora) return missing("ADVWALK_CORA_EDGES and ADVWALK_CORA_LABELS");
  const auto model = train(cora->graph, walk_defaults(1), default_training(Method::dwns, 1)).model;
  const std::vector<double> grid{0.0, kAttackEps};
  const auto adv = eval::attack(model, cora->graph, cora->labels, grid, eval::AttackMode::adversarial,
                                kAttackRatio, 1, walk_defaults(1));
  const auto rnd = eval::attack(model, cora->graph, cora->labels, grid, eval::AttackMode::random,
                                kAttackRatio, 1, walk_defaults(1));
  const double clean = adv[0].accuracy;
  const double adv_drop = (clean - adv[1].accuracy) / clean;
  const double rnd_drop = (clean - rnd[1].accuracy) / clean;
  return verdict(adv_drop >= kAttackFactor * rnd_drop && adv_drop > 0.0,
                 fmt("clean %.4f; relative drop adversarial %.2f%%, random %.2f%%", clean, 100 * adv_drop,
                     100 * rnd_drop));
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

std::pair<double, double> lp_pair(const Graph& graph, std::uint64_t seed) {
  const auto split = eval::split_link_prediction(graph, 0.8, seed);
  const auto dwns = train(split.residual, walk_defaults(seed), default_training(Method::dwns, seed)).model;
  const auto advt = train(split.residual, walk_defaults(seed), default_training(Method::advt, seed)).model;
  return {eval::auc_link_prediction(dwns.target, split, seed), eval::auc_link_prediction(advt.target, split, seed)};
}

Outcome link_prediction_table() {
  const auto cora = load_cora(false);
  if (!cora) return missing("ADVWALK_CORA_EDGES");
  std::vector<double> dwns, advt;
  for (int s = 0; s < kSeeds; ++s) {
    const auto [d, a] = lp_pair(cora->graph, static_cast<std::uint64_t>(s));
    dwns.push_back(d);
    advt.push_back(a);
  }
  const double md = mean(dwns), ma = mean(advt);
  const bool ok = std::abs(md - kAucDwns) <= kAucTolerance && std::abs(ma - kAucAdvt) <= kAucTolerance &&
                  ma - md >= kAucMargin;
  return verdict(ok, fmt("mean AUC dwns %.4f, advt %.4f, margin %.4f", md, ma, ma - md));
}

Outcome classification_table() {
  const auto cora = load_cora(true);
  if (!cora) return missing("ADVWALK_CORA_EDGES and ADVWALK_CORA_LABELS");
  std::vector<double> d10, a10, d50, a50;
  for (int s = 0; s < kSeeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(s);
    const auto dwns = train(cora->graph, walk_defaults(seed), default_training(Method::dwns, seed)).model;
    const auto advt = train(cora->graph, walk_defaults(seed), default_training(Method::advt, seed)).model;
    d10.push_back(eval::node_classification(dwns.target, cora->labels, 0.1, seed));
    a10.push_back(eval::node_classification(advt.target, cora->labels, 0.1, seed));
    d50.push_back(eval::node_classification(dwns.target, cora->labels, 0.5, seed));
    a50.push_back(eval::node_classification(advt.target, cora->labels, 0.5, seed));
  }
  const double md10 = mean(d10), ma10 = mean(a10), md50 = mean(d50), ma50 = mean(a50);
  const bool ok = ma10 - md10 >= kAccMargin10 && ma50 - md50 >= kAccMargin50 &&
                  std::abs(md10 - kAccDwns10) <= kAccTolerance && std::abs(ma10 - kAccAdvt10) <= kAccTolerance &&
                  std::abs(md50 - kAccDwns50) <= kAccTolerance && std::abs(ma50 - kAccAdvt50) <= kAccTolerance;
  return verdict(ok, fmt("10%%: dwns %.4f advt %.4f; 50%%: dwns %.4f advt %.4f", md10, ma10, md50, ma50));
}

Outcome citeseer_smoke() {
  const auto edges = env("ADVWALK_CITESEER_EDGES");
  if (!edges) return missing("ADVWALK_CITESEER_EDGES");
  const auto [d, a] = lp_pair(load_edge_list(*edges, {}), 0);
  return verdict(a > d, fmt("single seed AUC dwns %.4f, advt %.4f", d, a));
}

const char* label(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::skip: return "SKIP";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance report"};
  std::string group = "all";
  std::vector<int> only;
  app.add_option("--group", group, "core, data or all")->check(CLI::IsMember({"core", "data", "all"}));
  app.add_option("--only", only, "criterion ids to run");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "core", "gradient oracle", kOneMinute, gradient_oracle},
      {2, "core", "ppmi oracle", kOneMinute, ppmi_oracle},
      {3, "core", "sampler distributions", 0, sampler_distributions},
      {4, "data", "perturbation dominance on cora", 5 * kOneMinute, perturbation_dominance},
      {5, "data", "attack drop on cora", 15 * kOneMinute, attack_reproduction},
      {6, "data", "link prediction auc on cora", 30 * kOneMinute, link_prediction_table},
      {7, "data", "node classification on cora", 30 * kOneMinute, classification_table},
      {8, "core", "reduction and determinism", 0, reduction_and_determinism},
      {9, "core", "norm contracts", kOneMinute, norm_contracts},
      {10, "data", "citeseer smoke run", 0, citeseer_smoke},
  };

  int failures = 0, skips = 0;
  for (const auto& c : criteria) {
    if (group != "all" && group != c.group) continue;
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {Status::fail, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.status != Status::skip && c.budget_seconds > 0 && seconds > c.budget_seconds) {
      out.status = Status::fail;
      out.detail += fmt("; over time budget of %.0f s", c.budget_seconds);
    }
    failures += out.status == Status::fail;
    skips += out.status == Status::skip;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", label(out.status), c.id, c.title, out.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  if (failures) return 1;
  return skips ? 77 : 0;
}
