#include <doctest.h>

#include <cmath>

#include "advwalk/proximity.hpp"
#include "test_support.hpp"

using namespace advwalk;
using testing::parse;

TEST_CASE("transition matrix") {
  SUBCASE("triangle") {
    const Eigen::MatrixXd p(transition_matrix(parse("a b\nb c\nc a\n")));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(p(i, j) == (i == j ? 0.0 : 0.5));
  }
  SUBCASE("weighted star") {
    const Graph g = parse("c x 1\nc y 3\n", {.directed = false, .weighted = true});
    const Eigen::MatrixXd p(transition_matrix(g));
    CHECK(p(*g.find("c"), *g.find("x")) == 0.25);
    CHECK(p(*g.find("c"), *g.find("y")) == 0.75);
  }
  SUBCASE("rows are stochastic") {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = trial % 2 ? testing::random_graph(40, 0.1, rng, true)
                                : testing::random_digraph(40, 0.1, rng);
      const Eigen::MatrixXd p(transition_matrix(g));
      for (Eigen::Index r = 0; r < p.rows(); ++r) CHECK(std::abs(p.row(r).sum() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("shifted ppmi: two nodes") {
  const Graph g = parse("a b\n");
  const Eigen::MatrixXd m(shifted_ppmi(g, 1, 0.5));
  CHECK(m(0, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(m(1, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(m(0, 0) == 0.0);
}

TEST_CASE("shifted ppmi: a large shift zeroes everything") {
  Rng rng(3);
  const Graph g = testing::random_graph(30, 0.1, rng);
  CHECK(shifted_ppmi(g, 2, 1.0).nonZeros() == 0);
  const ScaleMatrix s(shifted_ppmi(g, 2, 1.0), 2, 1.0);
  CHECK(s.max_ppmi() == 0.0);
  CHECK(s(0, 1) == 1.0);
}

TEST_CASE("shifted ppmi matches the dense oracle") {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = trial % 3 == 0 ? testing::random_digraph(20 + rng() % 60, 0.05, rng)
                                   : testing::random_graph(20 + rng() % 60, 0.05, rng, trial % 2);
    const int order = 1 + trial % 3;
    const double shift = 1.0 / static_cast<double>(g.node_count());
    const Eigen::MatrixXd sparse(shifted_ppmi(g, order, shift));
    const Eigen::MatrixXd dense = testing::dense_ppmi(g, order, shift);
    CHECK((sparse - dense).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(sparse.minCoeff() >= 0.0);
  }
}

TEST_CASE("shifted ppmi: argument checks") {
  const Graph g = parse("a b\n");
  CHECK_THROWS_AS(shifted_ppmi(g, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(shifted_ppmi(g, 2, 0.0), std::invalid_argument);
}

TEST_CASE("scale factors from given entries") {
  SparseMatrix m(3, 3);
  m.insert(0, 1) = 0.5;
  m.insert(1, 2) = 1.0;
  m.insert(2, 0) = 2.0;
  const ScaleMatrix s(m, 2, 0.1);
  CHECK(s(0, 1) == 0.75);
  CHECK(s(1, 2) == 0.5);
  CHECK(s(2, 0) == 0.0);
  CHECK(s(0, 2) == 1.0);
  CHECK(s(2, 2) == 1.0);
  CHECK(s.max_ppmi() == 2.0);
}

TEST_CASE("scale factors: range, monotonicity and extremes") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = testing::random_graph(50, 0.08, rng, trial % 2);
    const auto s = ScaleMatrix::from_graph(g);
    CHECK(s.shift() == doctest::Approx(1.0 / 50));
    REQUIRE(s.max_ppmi() > 0.0);
    const auto n = static_cast<NodeId>(g.node_count());
    std::vector<std::pair<double, double>> entries;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < n; ++j) {
        const double phi = s(i, j);
        CHECK(phi >= 0.0);
        CHECK(phi <= 1.0);
        const double m = s.ppmi(i, j);
        if (m == 0.0) CHECK(phi == 1.0);
        CHECK((phi == 0.0) == (m == s.max_ppmi()));
        entries.emplace_back(m, phi);
      }
    std::sort(entries.begin(), entries.end());
    for (std::size_t k = 1; k < entries.size(); ++k) CHECK(entries[k].second <= entries[k - 1].second);
  }
}

TEST_CASE("scale factors fill batches") {
  const Graph g = parse("a b\nb c\n");
  const auto s = ScaleMatrix::from_graph(g);
  PairBatch batch;
  batch.negatives_per_pair = 1;
  batch.targets = {0, 1, 0};
  batch.contexts = {1, 2, 0};
  batch.negatives = {2, 0, 1};
  batch.scale = {1, 1, 1};
  s.apply(batch);
  for (std::size_t p = 0; p < 3; ++p) CHECK(batch.scale[p] == s(batch.targets[p], batch.contexts[p]));
}

TEST_CASE("scale dump") {
  testing::TempDir dir("prox");
  const Graph g = parse("a b\n");
  const ScaleMatrix s(shifted_ppmi(g, 1, 0.5), 1, 0.5);
  s.save_tsv(dir / "phi.tsv", g);
  const std::string text = testing::read_file(dir / "phi.tsv");
  CHECK(text.find("a\tb\t") == 0);
  CHECK(text.find("\t0\n") != std::string::npos);
}
