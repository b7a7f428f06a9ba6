#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtqa/rulelang/ast.hpp"
#include "rtqa/value.hpp"

namespace rtqa::rulelang {

// Raised while evaluating rule logic against concrete values (operand
// types or units that do not fit the operator).
class EvalError : public Error {
 public:
  using Error::Error;
};

class InternalCompileError : public Error {
 public:
  using Error::Error;
};

bool compare_values(CmpOp op, const Value& lhs, const Value& rhs);
Value arith_values(ArithOp op, const Value& lhs, const Value& rhs);
bool truth(const Value& v);

// Unit of `lhs op rhs`; nullopt when the combination is not allowed.
// Percent behaves as a pure ratio under * and /.
std::optional<Unit> arith_unit(ArithOp op, Unit lhs, Unit rhs);

enum class OpCode { PushConst, LoadVar, Cmp, InList, And, Or, Not, Add, Sub, Mul, Div };

std::string_view to_string(OpCode op);

struct Instruction {
  OpCode op = OpCode::PushConst;
  Value constant{false};   // PushConst
  std::size_t operand = 0;  // LoadVar: binding slot; InList: item count
  CmpOp cmp = CmpOp::Eq;    // Cmp

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

std::string format_instruction(const Instruction& ins);

// Net stack effect is exactly one value and never dips below zero.
bool is_stack_balanced(std::span<const Instruction> program);

// Executes a postfix program; `slots` are the values of the data bindings
// in binding order. Throws EvalError.
bool execute(std::span<const Instruction> program, std::span<const Value> slots);

struct CompiledRule {
  std::string name;
  std::string title;
  RuleKind kind = RuleKind::Criterion;
  std::optional<CriterionClass> criterion_class;
  int priority = kDefaultPriority;
  int specificity = 0;
  std::string applies_to = "*";
  EvalMode mode = EvalMode::Automatic;
  std::optional<std::string> refines;
  std::string message;
  std::vector<DataBinding> data_bindings;
  std::vector<Instruction> instructions;
  std::vector<Action> actions;

  bool evaluate(std::span<const Value> slots) const { return execute(instructions, slots); }
};

std::vector<Instruction> compile_expression(const Expr& expr, const std::vector<DataBinding>& bindings);
CompiledRule compile_rule(const Mlm& mlm);

// Human-readable listing used by the `compile` subcommand.
std::string disassemble(const CompiledRule& rule);

}  // namespace rtqa::rulelang
