#pragma once

#include <stdexcept>
#include <string>

namespace mmcmc {

// Values match mmcmc_status in the C API header.
enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  too_few_observations = 3,
  parse = 4,
  duplicate_cpg = 5,
  validation = 6,
  unknown_cpg = 7,
  out_of_range = 8,
  degenerate = 9,
  infeasible = 10,
  io = 11,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Raised when two matrices disagree on CpG identity or order. `row` is the
// 1-based data row of the first disagreement.
class MismatchError : public Error {
public:
  MismatchError(std::size_t row, const std::string &what)
      : Error(ErrorCode::validation, what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

} // namespace mmcmc
