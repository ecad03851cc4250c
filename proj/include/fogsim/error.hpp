#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogsim {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error report.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Invalid argument or override value.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error("parameter", what) {}
};

/// Unknown node, module or tuple type.
class LookupError : public Error {
 public:
  explicit LookupError(const std::string& what) : Error("lookup", what) {}
};

/// Host capacity exceeded by a placement.
class FeasibilityError : public Error {
 public:
  explicit FeasibilityError(const std::string& what) : Error("feasibility", what) {}
};

/// Inputs that are individually valid but cannot be combined (e.g. a loop
/// that no placement instance can serve).
class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what) : Error("configuration", what) {}
};

/// Declared structure referencing something that is not there.
class InconsistencyError : public Error {
 public:
  explicit InconsistencyError(const std::string& what) : Error("inconsistency", what) {}
};

/// A broken internal invariant (conservation, negative latency, ...).
class ConsistencyFailure : public Error {
 public:
  explicit ConsistencyFailure(const std::string& what) : Error("internal-consistency", what) {}
};

/// Malformed scenario document.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("syntax", what + " (line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed scenario document with invalid content.
class SemanticError : public Error {
 public:
  SemanticError(std::string field, const std::string& what)
      : Error("semantic", field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// One violated invariant found by a validator.
template <typename Kind>
struct Violation {
  Kind kind;
  std::string message;
};

template <typename Kind>
using ValidationReport = std::vector<Violation<Kind>>;

template <typename Kind>
bool has_violation(const ValidationReport<Kind>& report, Kind kind) {
  for (const auto& v : report) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace fogsim
