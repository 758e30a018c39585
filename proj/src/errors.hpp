#pragma once

#include <stdexcept>
#include <string>

namespace liokam {

// Numeric values are part of the C ABI (see include/liokam/liokam.h).
enum class ErrorCode : int {
  ok = 0,
  config = 1,
  domain = 2,
  precision = 3,
  conditioning = 4,
  precondition = 5,
  depth = 6,
  exhausted = 7,
  type = 8,
  internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ErrorCode::config, m) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorCode::domain, m) {}
};
struct ConditioningError : Error {
  explicit ConditioningError(const std::string& m) : Error(ErrorCode::conditioning, m) {}
};
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& m) : Error(ErrorCode::precondition, m) {}
};
struct DepthError : Error {
  explicit DepthError(const std::string& m) : Error(ErrorCode::depth, m) {}
};
struct ParameterExhausted : Error {
  explicit ParameterExhausted(const std::string& m) : Error(ErrorCode::exhausted, m) {}
};
struct TypeError : Error {
  explicit TypeError(const std::string& m) : Error(ErrorCode::type, m) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& m) : Error(ErrorCode::internal, m) {}
};

// Carries the last depth at which every partial quotient was certified.
class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(const std::string& m, int reliable_depth)
      : Error(ErrorCode::precision, m), reliable_depth_(reliable_depth) {}
  int reliable_depth() const noexcept { return reliable_depth_; }

 private:
  int reliable_depth_;
};

}  // namespace liokam
