#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phl {

struct SourceSpan {
  int line = 0;    // 1-based; 0 means "no location"
  int column = 0;  // 1-based

  bool known() const { return line > 0; }
};

std::string to_string(const SourceSpan& span);

struct Diagnostic {
  SourceSpan span;
  std::string message;
};

std::string to_string(const Diagnostic& d);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the position of the offending token.
class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message);
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/// Input parsed but violates a typing / scoping side condition.
class WellFormednessError : public Error {
 public:
  explicit WellFormednessError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class SortError : public Error {
 public:
  using Error::Error;
};

/// A size or depth budget was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace phl
