#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "widget/ast.hpp"

namespace widget {

/// Base of all diagnostics thrown by the toolchain.
class Error : public std::runtime_error {
 public:
  Error(Pos pos, const std::string& message)
      : std::runtime_error(message), pos_(pos) {}
  Pos pos() const { return pos_; }

 private:
  Pos pos_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(Pos pos, const std::string& message, std::vector<std::string> expected = {})
      : Error(pos, message), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// Raised when evaluation or performing hits a state that type checking
/// should have excluded.
class RuntimeFault : public Error {
 public:
  using Error::Error;
};

struct Diagnostic {
  Pos pos;
  std::string message;
};

/// `file:line:col: message`
std::string format_diagnostic(const std::string& file, const Diagnostic& d);

}  // namespace widget
