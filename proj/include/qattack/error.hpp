#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qattack {

enum class ErrorCode {
  InvalidArgument,
  Config,
  Infeasible,
  Parse,
  Io,
  UndefinedMetric,
  Convergence,
  Checksum,
  Budget,
  Internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by plan validation; carries the index of the first bad gene.
class InfeasiblePlanError : public Error {
 public:
  InfeasiblePlanError(std::size_t gene, const std::string& what)
      : Error(ErrorCode::Infeasible, what), gene_(gene) {}
  std::size_t gene_index() const noexcept { return gene_; }

 private:
  std::size_t gene_;
};

}  // namespace qattack
