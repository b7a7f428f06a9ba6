#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtqa/rulelang/ast.hpp"
#include "rtqa/rulelang/issues.hpp"

namespace rtqa::rulelang {

// Condition entry: T, F, or '-' (don't care).
enum class Entry { True, False, DontCare };

struct TableCondition {
  std::string label;
  ExprPtr expr;
};

struct TableAction {
  std::string label;
  Action action;
};

struct TableColumn {
  std::vector<Entry> conditions;
  std::vector<bool> actions;  // X marks
};

// Four-quadrant decision table: condition stub/entries above the
// separator, action stub/entries below.
struct DecisionTable {
  // Optional `table:` header; used when a rulepack expands the table.
  std::string name;
  std::string version = "1";
  RuleKind kind = RuleKind::Classification;
  std::optional<CriterionClass> criterion_class;
  int priority = kDefaultPriority;
  std::string applies_to = "*";

  std::vector<DataBinding> data_bindings;
  std::vector<TableCondition> conditions;
  std::vector<TableAction> actions;
  std::vector<TableColumn> columns;
  std::string source_file;
};

// Throws RuleError (Syntax) on ragged rows, illegal entries, unparsable
// stubs or duplicate condition-entry columns.
DecisionTable parse_decision_table(std::string_view text, const std::string& file = {});

struct Completeness {
  bool balanced = false;
  std::vector<std::string> missing;  // uncovered vectors, e.g. "FF"
};

class OverlapError : public Error {
 public:
  OverlapError(std::string vector, std::vector<std::size_t> columns);

  std::string vector;                // first colliding condition vector
  std::vector<std::size_t> columns;  // 0-based columns matching it
};

// Vectors are enumerated with T before F in condition order. Throws
// OverlapError when two columns cover the same vector.
Completeness check_completeness(const DecisionTable& table);

// "T-F" style rendering of a column's condition entries.
std::string entries_string(const TableColumn& column);

// One MLM per column, named <base_name>_<column number>.
std::vector<Mlm> table_to_rules(const DecisionTable& table, const std::string& base_name, RuleKind kind,
                                std::optional<CriterionClass> criterion_class);

// Same, using the table's own header.
std::vector<Mlm> table_to_rules(const DecisionTable& table);

}  // namespace rtqa::rulelang
