#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holosens {

enum class ErrorKind {
  Io,
  MalformedHeader,
  SizeMismatch,
  InvalidArgument,
  DegenerateInput,
  VarianceZero,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. The kind is what callers switch on;
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace holosens
