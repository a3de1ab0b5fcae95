#pragma once

#include <stdexcept>
#include <string>

namespace asw {

enum class ErrorKind {
  invalid_input,   // malformed or out-of-domain arguments
  unsupported,     // valid request outside the supported regime (p = 2, n too large, ...)
  tolerance,       // a numerical or stabilization check did not meet its target
  internal
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorKind::invalid_input, msg);
}

}  // namespace asw
