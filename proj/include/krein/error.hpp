#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace krein {

/// Failure categories raised by the library. The CLI maps `accuracy`,
/// `numeric`, `pole_proximity` and `indeterminate_ratio` to exit code 3 and
/// everything else to exit code 2.
enum class ErrorKind {
  construction,
  integrability,
  domain,
  resource,
  argument,
  representation,
  normalization,
  accuracy,
  precondition,
  indeterminate_ratio,
  pole_proximity,
  numeric,
  io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace krein
