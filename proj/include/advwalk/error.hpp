#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace advwalk {

/// Bad or inconsistent input data: unreadable files, empty graphs, invalid weights.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A text input could not be parsed. Carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Non-finite parameters detected during optimization.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int epoch, std::size_t batch)
      : std::runtime_error(what + " at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch)),
        epoch_(epoch),
        batch_(batch) {}

  int epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  int epoch_;
  std::size_t batch_;
};

}  // namespace advwalk
