#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rtqa/fact_request.hpp"
#include "rtqa/value.hpp"

namespace rtqa::rulelang {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolOp { And, Or };
enum class ArithOp { Add, Sub, Mul, Div };

std::string_view to_string(CmpOp op);
std::string_view to_string(BoolOp op);
std::string_view to_string(ArithOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
  Value value;
};
struct VarRef {
  std::string name;
};
struct Compare {
  CmpOp op;
  ExprPtr lhs, rhs;
};
struct InList {
  ExprPtr subject;
  std::vector<Value> items;
};
struct Logical {
  BoolOp op;
  ExprPtr lhs, rhs;
};
struct Not {
  ExprPtr operand;
};
struct Arith {
  ArithOp op;
  ExprPtr lhs, rhs;
};
struct Negate {
  ExprPtr operand;
};

using ExprNode = std::variant<Literal, VarRef, Compare, InList, Logical, Not, Arith, Negate>;

// Immutable expression tree node. Equality is structural and ignores
// source locations.
struct Expr {
  ExprNode node;
  SourceLoc loc;
};

bool operator==(const Expr& a, const Expr& b);
bool same_tree(const ExprPtr& a, const ExprPtr& b);

ExprPtr make_literal(Value value, SourceLoc loc = {});
ExprPtr make_var(std::string name, SourceLoc loc = {});
ExprPtr make_compare(CmpOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
ExprPtr make_in(ExprPtr subject, std::vector<Value> items, SourceLoc loc = {});
ExprPtr make_logical(BoolOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
ExprPtr make_not(ExprPtr operand, SourceLoc loc = {});
ExprPtr make_arith(ArithOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc = {});
ExprPtr make_negate(ExprPtr operand, SourceLoc loc = {});

// Left-nested conjunction; `true` when empty.
ExprPtr make_conjunction(const std::vector<ExprPtr>& terms);

// Number of comparison and membership leaves.
int count_conditions(const Expr& expr);

// Variable names in first-use order, without duplicates.
std::vector<std::string> referenced_vars(const Expr& expr);

enum class RuleKind { Classification, Criterion };
enum class CriterionClass { Precondition, Convention, Structure, Dose, Quality };
enum class EvalMode { Automatic, Manual };

std::string_view to_string(RuleKind kind);
std::string_view to_string(CriterionClass cls);
std::string_view to_string(EvalMode mode);
std::optional<CriterionClass> parse_criterion_class(std::string_view text);

inline constexpr CriterionClass kAllClasses[] = {CriterionClass::Precondition, CriterionClass::Convention,
                                                 CriterionClass::Structure, CriterionClass::Dose,
                                                 CriterionClass::Quality};

struct DataBinding {
  std::string var;
  FactRequest source;

  friend bool operator==(const DataBinding&, const DataBinding&) = default;
};

struct AssertAction {
  std::string key;
  Value value;

  friend bool operator==(const AssertAction&, const AssertAction&) = default;
};

struct LoadCriteriaAction {
  std::string criteria_set;

  friend bool operator==(const LoadCriteriaAction&, const LoadCriteriaAction&) = default;
};

using Action = std::variant<AssertAction, LoadCriteriaAction>;

std::string format_action(const Action& action);

inline constexpr int kDefaultPriority = 50;

// One medical logic module: a classification rule or an evaluation
// criterion.
struct Mlm {
  std::string name;
  std::string version;
  std::string title;
  RuleKind kind = RuleKind::Criterion;
  std::optional<CriterionClass> criterion_class;
  int priority = kDefaultPriority;
  std::string applies_to = "*";
  EvalMode mode = EvalMode::Automatic;
  std::optional<std::string> refines;
  std::vector<DataBinding> data_bindings;
  ExprPtr logic;
  std::vector<Action> actions;
  std::string message;

  // Not part of structural equality.
  SourceLoc loc;
  std::string source_file;
};

bool operator==(const Mlm& a, const Mlm& b);

}  // namespace rtqa::rulelang
