#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcf {

// Base of every error the library throws. The CLI maps the two branches
// below onto exit codes 2 (bad input) and 3 (numeric failure).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericError {
 public:
  SingularMatrixError(std::string what, std::size_t pivot_row, std::string unknown,
                      std::vector<std::string> floating_nodes)
      : NumericError(std::move(what)),
        pivot_row_(pivot_row),
        unknown_(std::move(unknown)),
        floating_nodes_(std::move(floating_nodes)) {}

  std::size_t pivot_row() const noexcept { return pivot_row_; }
  const std::string& unknown() const noexcept { return unknown_; }
  const std::vector<std::string>& floating_nodes() const noexcept { return floating_nodes_; }

 private:
  std::size_t pivot_row_;
  std::string unknown_;
  std::vector<std::string> floating_nodes_;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(std::string what, int iterations)
      : NumericError(std::move(what)), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

// Negative stage resistance: the cross-coupled load has more positive
// feedback than its output conductance can absorb and the output latches.
class LatchError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace pcf
