#pragma once

#include <stdexcept>
#include <string>

namespace nonrecip {

enum class ErrorKind { config, solver, io, usage };

/// Exception carrying a stable machine-readable code such as
/// "dimension_mismatch" or "ambiguous_coupling".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void fail_usage(std::string code, const std::string& msg) {
  throw Error(ErrorKind::usage, std::move(code), msg);
}
[[noreturn]] inline void fail_solver(std::string code, const std::string& msg) {
  throw Error(ErrorKind::solver, std::move(code), msg);
}
[[noreturn]] inline void fail_config(std::string code, const std::string& msg) {
  throw Error(ErrorKind::config, std::move(code), msg);
}

}  // namespace nonrecip
