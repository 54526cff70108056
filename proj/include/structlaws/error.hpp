#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace structlaws {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        source_(source),
        line_(line) {}

  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

class ScopeError : public Error {
 public:
  using Error::Error;
};

class UnknownOp : public Error {
 public:
  using Error::Error;
};

class UnknownLaw : public Error {
 public:
  using Error::Error;
};

// Raised when an Aux node has no applicable clause although its law was
// accepted by the validator.
class StuckError : public Error {
 public:
  using Error::Error;
};

class AlgebraIncomplete : public Error {
 public:
  using Error::Error;
};

class EmptyClass : public Error {
 public:
  using Error::Error;
};

class OpenTermError : public Error {
 public:
  using Error::Error;
};

struct Diagnostic {
  std::string code;     // e.g. "DuplicateOp", "NonExhaustive"
  std::string subject;  // offending declaration
  std::string message;

  std::string str() const {
    std::string s = code + "(" + subject + ")";
    if (!message.empty()) s += ": " + message;
    return s;
  }
  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

class ValidationError : public Error {
 public:
  explicit ValidationError(Diagnostics diags)
      : Error(render(diags)), diags_(std::move(diags)) {}

  const Diagnostics& diagnostics() const { return diags_; }

 private:
  static std::string render(const Diagnostics& diags) {
    std::string out = "validation failed:";
    for (const auto& d : diags) out += "\n  " + d.str();
    return out;
  }
  Diagnostics diags_;
};

}  // namespace structlaws
