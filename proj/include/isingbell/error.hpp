#pragma once

#include <stdexcept>
#include <string>

namespace isingbell {

enum class ErrorKind {
  invalid_argument,
  out_of_domain,
  numerical_failure,
  degenerate_point,
};

/// Single exception type for the library; the kind maps 1:1 onto the C API
/// error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace isingbell
