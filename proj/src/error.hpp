#pragma once

#include <stdexcept>
#include <string>

namespace kgqa {

enum class ErrorCode {
  invalid_argument,
  io,
  parse,
  schema,
  network,
  missing_artifact,
  config,
  unknown_id,
  internal,
};

// Single exception type for the core; the C API maps code() onto its
// status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kgqa
