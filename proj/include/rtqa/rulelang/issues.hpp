#pragma once

#include <string>
#include <vector>

#include "rtqa/rulelang/ast.hpp"
#include "rtqa/value.hpp"

namespace rtqa::rulelang {

enum class Severity { Error, Warning };

enum class IssueKind {
  Syntax,
  UnknownConcept,
  UnitMismatch,
  DuplicateRule,
  ConflictingRule,
  DanglingRefines,
  UnboundVariable,
};

std::string_view to_string(Severity severity);
std::string_view to_string(IssueKind kind);

struct RuleIssue {
  Severity severity = Severity::Error;
  IssueKind kind = IssueKind::Syntax;
  std::string mlm_name;
  SourceLoc location;
  std::string detail;
  std::string file;

  friend bool operator==(const RuleIssue& a, const RuleIssue& b) {
    return a.severity == b.severity && a.kind == b.kind && a.mlm_name == b.mlm_name &&
           a.location.line == b.location.line && a.location.column == b.location.column &&
           a.detail == b.detail && a.file == b.file;
  }
};

// "file:line:col: error[ConflictingRule] name: detail"
std::string format_issue(const RuleIssue& issue);

bool has_errors(const std::vector<RuleIssue>& issues);

class RuleError : public Error {
 public:
  explicit RuleError(RuleIssue issue) : Error(format_issue(issue)), issue_(std::move(issue)) {}

  const RuleIssue& issue() const { return issue_; }

 private:
  RuleIssue issue_;
};

}  // namespace rtqa::rulelang
