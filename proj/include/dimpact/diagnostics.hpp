#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dimpact {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Raised by the document parsers. The location points at the offending
/// token (syntax errors) or at the element that failed validation.
class ParseError : public Error {
public:
  ParseError(const std::string& message, SourceLocation where)
      : Error(std::to_string(where.line) + ":" + std::to_string(where.column) +
              ": " + message),
        location_(where), detail_(message) {}

  const SourceLocation& location() const noexcept { return location_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  SourceLocation location_;
  std::string detail_;
};

enum class ViolationKind {
  DuplicateId,
  DanglingReference,
  EmptyDataItems,
  BadGatewayType,
  DegenerateIao,
  EmptySupport,
  EmptyGuardedFlows,
  EmptyRelation,
  MissingPrimaryKey,
  DuplicateAttribute,
  UnknownIdentityRelation,
  UnresolvedBinding,
  DuplicateCaseId,
  UnknownActivity,
  BadKey,
  SharedIdentityAttribute,
  NarrowCardinalitySharing,
  UnexplainedTraceImpact,
};

std::string_view toString(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string element;  // id of the offending element, empty when global
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t size() const noexcept { return violations.size(); }
  void add(ViolationKind kind, std::string element, std::string message) {
    violations.push_back({kind, std::move(element), std::move(message)});
  }
  std::size_t count(ViolationKind kind) const noexcept {
    std::size_t n = 0;
    for (const auto& v : violations) n += v.kind == kind ? 1 : 0;
    return n;
  }
  std::string summary() const;
};

/// Thrown when an analysis is handed an input that does not validate.
class ValidationError : public Error {
public:
  explicit ValidationError(ValidationReport report)
      : Error(report.summary()), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

private:
  ValidationReport report_;
};

}  // namespace dimpact
