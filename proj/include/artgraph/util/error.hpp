#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace artgraph {

// Failure categories shared by the library, the CLI exit-code mapping and the
// HTTP error mapping.
enum class ErrorKind {
  kValidation,
  kNotFound,
  kSchema,
  kType,
  kShape,
  kIndex,
  kIo,
  kFormat,
  kLeakage,
  kUnavailable,
  kInternal,
};

std::string_view error_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view code() const { return error_code(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace artgraph
