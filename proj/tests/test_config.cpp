#include <doctest.h>

#include <sstream>

#include "advwalk/config.hpp"
#include "advwalk/error.hpp"
#include "test_support.hpp"

using namespace advwalk;

TEST_CASE("config round trip keeps every key") {
  RunConfig c;
  c.set("graph", "data/g.edges");
  c.set("method", "iadvt");
  c.set("eps", "0.35");
  c.set("lr", "1e-3");
  c.set("seed", "42");
  c.set("weighted", "true");
  c.set("ratios", "0.1, 0.3,0.9");
  c.set("mode", "both");
  c.set("runs", "3");
  CHECK(c.train.seed == 42);
  CHECK(c.walk.seed == 42);
  CHECK(c.ratios == std::vector<double>{0.1, 0.3, 0.9});

  std::stringstream text;
  write_config(text, c);
  RunConfig back;
  read_config(text, back);
  for (const auto& key : RunConfig::keys()) CHECK_MESSAGE(back.get(key) == c.get(key), key);
  CHECK(back.train.method == Method::iadvt);
  CHECK(back.train.eps == 0.35);
  CHECK(back.edges.weighted);
}

TEST_CASE("config file") {
  testing::TempDir dir("cfg");
  testing::write_file(dir / "a.cfg", "# comment\n\n  epochs = 7  \ndataset=cora\n");
  const auto c = load_config(dir / "a.cfg");
  CHECK(c.train.epochs == 7);
  CHECK(c.dataset == "cora");
  save_config(dir / "b.cfg", c);
  CHECK(load_config(dir / "b.cfg").get("epochs") == "7");
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), DataError);
}

TEST_CASE("config rejects bad input") {
  RunConfig c;
  CHECK_THROWS_AS(c.set("learning-rate", "1"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("epochs", "ten"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("epochs", "10x"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("directed", "yes"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("mode", "worst"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("method", "adam"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("ratios", ""), std::invalid_argument);
  CHECK_THROWS_AS(c.get("nope"), std::invalid_argument);

  std::istringstream bad("epochs = 3\nno equals sign\n");
  try {
    read_config(bad, c);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream unknown("foo = 1\n");
  CHECK_THROWS_AS(read_config(unknown, c), ParseError);
}

TEST_CASE("real lists") {
  CHECK(parse_real_list("0.5") == std::vector<double>{0.5});
  CHECK(parse_real_list("1,2.5") == std::vector<double>{1.0, 2.5});
  CHECK_THROWS_AS(parse_real_list("1,,2"), std::invalid_argument);
}
