#include "advwalk/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "advwalk/error.hpp"

namespace advwalk {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
}

std::string format_real(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field number(const char* key, T RunConfig::*outer) {
  return {key, [=](RunConfig& c, std::string_view v) { c.*outer = parse_number<T>(key, v); },
          [=](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_real(c.*outer);
            else return std::to_string(c.*outer);
          }};
}

template <class S, class T>
Field nested(const char* key, S RunConfig::*outer, T S::*inner) {
  return {key,
          [=](RunConfig& c, std::string_view v) {
            if constexpr (std::is_same_v<T, bool>) (c.*outer).*inner = parse_bool(key, v);
            else (c.*outer).*inner = parse_number<T>(key, v);
          },
          [=](const RunConfig& c) -> std::string {
            const T value = (c.*outer).*inner;
            if constexpr (std::is_same_v<T, bool>) return value ? "true" : "false";
            else if constexpr (std::is_floating_point_v<T>) return format_real(value);
            else return std::to_string(value);
          }};
}

Field text(const char* key, std::string RunConfig::*member) {
  return {key, [=](RunConfig& c, std::string_view v) { c.*member = std::string(v); },
          [=](const RunConfig& c) { return c.*member; }};
}

Field list(const char* key, std::vector<double> RunConfig::*member) {
  return {key, [=](RunConfig& c, std::string_view v) { c.*member = parse_real_list(v); },
          [=](const RunConfig& c) { return format_list(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      text("graph", &RunConfig::graph),
      text("labels", &RunConfig::labels),
      text("out-dir", &RunConfig::out_dir),
      text("embeddings", &RunConfig::embeddings),
      text("context", &RunConfig::context),
      text("split-dir", &RunConfig::split_dir),
      text("dataset", &RunConfig::dataset),
      nested("directed", &RunConfig::edges, &EdgeListOptions::directed),
      nested("weighted", &RunConfig::edges, &EdgeListOptions::weighted),
      {"method",
       [](RunConfig& c, std::string_view v) { c.train.method = parse_method(v); },
       [](const RunConfig& c) { return std::string(to_string(c.train.method)); }},
      nested("epochs", &RunConfig::train, &TrainConfig::epochs),
      nested("pretrain", &RunConfig::train, &TrainConfig::pretrain_epochs),
      nested("batch-size", &RunConfig::train, &TrainConfig::batch_size),
      nested("lr", &RunConfig::train, &TrainConfig::learning_rate),
      nested("eps", &RunConfig::train, &TrainConfig::eps),
      nested("lambda", &RunConfig::train, &TrainConfig::lambda),
      nested("neighbors", &RunConfig::train, &TrainConfig::neighbors),
      nested("dim", &RunConfig::train, &TrainConfig::dim),
      nested("ppmi-order", &RunConfig::train, &TrainConfig::ppmi_order),
      nested("ppmi-shift", &RunConfig::train, &TrainConfig::ppmi_shift),
      nested("walks-per-node", &RunConfig::walk, &WalkConfig::walks_per_node),
      nested("walk-length", &RunConfig::walk, &WalkConfig::walk_length),
      nested("window", &RunConfig::walk, &WalkConfig::window),
      nested("negatives", &RunConfig::walk, &WalkConfig::negatives),
      {"seed",
       [](RunConfig& c, std::string_view v) {
         c.train.seed = c.walk.seed = parse_number<std::uint64_t>("seed", v);
       },
       [](const RunConfig& c) { return std::to_string(c.train.seed); }},
      list("ratios", &RunConfig::ratios),
      list("eps-grid", &RunConfig::eps_grid),
      {"mode",
       [](RunConfig& c, std::string_view v) {
         if (v != "adversarial" && v != "random" && v != "both")
           throw std::invalid_argument("bad value for mode: '" + std::string(v) + "'");
         c.mode = std::string(v);
       },
       [](const RunConfig& c) { return c.mode; }},
      number("attack-ratio", &RunConfig::attack_ratio),
      number("runs", &RunConfig::runs),
      number("keep-ratio", &RunConfig::keep_ratio),
  };
  return table;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields())
    if (key == f.key) return f;
  throw std::invalid_argument("unknown config key: " + std::string(key));
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) { field(key).set(*this, trim(value)); }

std::string RunConfig::get(std::string_view key) const { return field(key).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.emplace_back(f.key);
    return out;
  }();
  return names;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<double>("list", trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

void read_config(std::istream& in, RunConfig& config) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", number);
    try {
      config.set(trim(content.substr(0, eq)), content.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), number);
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  RunConfig config;
  read_config(in, config);
  return config;
}

void write_config(std::ostream& out, const RunConfig& config) {
  for (const auto& f : fields()) out << f.key << " = " << f.get(config) << '\n';
}

void save_config(const std::filesystem::path& path, const RunConfig& config) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_config(out, config);
}

}  // namespace advwalk
