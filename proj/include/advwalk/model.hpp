#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "advwalk/error.hpp"
#include "advwalk/random.hpp"

namespace advwalk {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Target matrix U and context matrix U', one row per node.
template <typename Scalar>
struct EmbeddingModel {
  RowMatrix<Scalar> target;
  RowMatrix<Scalar> context;

  Eigen::Index nodes() const noexcept { return target.rows(); }
  Eigen::Index dim() const noexcept { return target.cols(); }
  bool all_finite() const { return target.allFinite() && context.allFinite(); }
};

/// Target entries uniform in [-0.5/d, 0.5/d], context entries zero.
template <typename Scalar>
EmbeddingModel<Scalar> init_model(Eigen::Index nodes, Eigen::Index dim, Rng& rng) {
  if (nodes < 2) throw std::invalid_argument("init_model: need at least 2 nodes");
  if (dim < 1) throw std::invalid_argument("init_model: dim must be >= 1");
  EmbeddingModel<Scalar> model;
  model.target.resize(nodes, dim);
  const double half_width = 0.5 / static_cast<double>(dim);
  for (Eigen::Index i = 0; i < nodes; ++i)
    for (Eigen::Index k = 0; k < dim; ++k)
      model.target(i, k) = static_cast<Scalar>((2.0 * uniform01(rng) - 1.0) * half_width);
  model.context = RowMatrix<Scalar>::Zero(nodes, dim);
  return model;
}

/// Embedding text format: `N d` header, then `name v_1 ... v_d` per row (shortest
/// round-trip decimal).
template <typename Derived>
void save_embeddings(const std::filesystem::path& path, const Eigen::MatrixBase<Derived>& rows,
                     const std::vector<std::string>& names) {
  if (static_cast<std::size_t>(rows.rows()) != names.size())
    throw std::invalid_argument("save_embeddings: name count does not match rows");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << rows.rows() << ' ' << rows.cols() << '\n';
  char buffer[64];
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out << names[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < rows.cols(); ++k) {
      const auto r = std::to_chars(buffer, buffer + sizeof(buffer), rows(i, k));
      out << ' ';
      out.write(buffer, r.ptr - buffer);
    }
    out << '\n';
  }
}

struct EmbeddingTable {
  std::vector<std::string> names;
  RowMatrix<double> vectors;
};

inline EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("embeddings: missing header", 1);
  std::istringstream header(line);
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  if (!(header >> n >> d) || n < 1 || d < 1) throw ParseError("embeddings: bad header", 1);

  EmbeddingTable table;
  table.names.reserve(static_cast<std::size_t>(n));
  table.vectors.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto line_no = static_cast<std::size_t>(i) + 2;
    if (!std::getline(in, line)) throw ParseError("embeddings: truncated file", line_no);
    std::istringstream row(line);
    std::string name;
    if (!(row >> name)) throw ParseError("embeddings: missing node name", line_no);
    table.names.push_back(name);
    for (Eigen::Index k = 0; k < d; ++k) {
      std::string token;
      if (!(row >> token)) throw ParseError("embeddings: too few values", line_no);
      double value = 0.0;
      const auto r = std::from_chars(token.data(), token.data() + token.size(), value);
      if (r.ec != std::errc() || r.ptr != token.data() + token.size())
        throw ParseError("embeddings: invalid value '" + token + "'", line_no);
      table.vectors(i, k) = value;
    }
    std::string extra;
    if (row >> extra) throw ParseError("embeddings: too many values", line_no);
  }
  return table;
}

}  // namespace advwalk
