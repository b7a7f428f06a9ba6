#include "rtqa/rulelang/compiler.hpp"

#include <algorithm>

namespace rtqa::rulelang {

namespace {

const Quantity& as_quantity(const Value& v, std::string_view what) {
  if (const auto* q = std::get_if<Quantity>(&v)) return *q;
  throw EvalError(std::string(what) + " needs numbers, got " + std::string(type_name(v)));
}

bool as_bool(const Value& v, std::string_view what) {
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw EvalError(std::string(what) + " needs booleans, got " + std::string(type_name(v)));
}

}  // namespace

bool compare_values(CmpOp op, const Value& lhs, const Value& rhs) {
  if (lhs.index() != rhs.index()) {
    throw EvalError("cannot compare " + std::string(type_name(lhs)) + " with " + std::string(type_name(rhs)));
  }
  if (const auto* a = std::get_if<Quantity>(&lhs)) {
    const auto& b = std::get<Quantity>(rhs);
    if (a->unit != b.unit) {
      throw EvalError("cannot compare " + format_value(lhs) + " with " + format_value(rhs) + " (units differ)");
    }
    switch (op) {
      case CmpOp::Eq: return a->value == b.value;
      case CmpOp::Ne: return a->value != b.value;
      case CmpOp::Lt: return a->value < b.value;
      case CmpOp::Le: return a->value <= b.value;
      case CmpOp::Gt: return a->value > b.value;
      case CmpOp::Ge: return a->value >= b.value;
    }
  }
  switch (op) {
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    default: throw EvalError("ordering comparison needs numbers, got " + std::string(type_name(lhs)));
  }
}

std::optional<Unit> arith_unit(ArithOp op, Unit lhs, Unit rhs) {
  switch (op) {
    case ArithOp::Add:
    case ArithOp::Sub:
      if (lhs == rhs) return lhs;
      return std::nullopt;
    case ArithOp::Mul:
      if (lhs == Unit::None) return rhs;
      if (rhs == Unit::None) return lhs;
      if (lhs == Unit::Percent) return rhs;
      if (rhs == Unit::Percent) return lhs;
      return std::nullopt;
    case ArithOp::Div:
      if (lhs == rhs) return Unit::None;
      if (rhs == Unit::None || rhs == Unit::Percent) return lhs;
      return std::nullopt;
  }
  return std::nullopt;
}

Value arith_values(ArithOp op, const Value& lhs, const Value& rhs) {
  const Quantity& a = as_quantity(lhs, to_string(op));
  const Quantity& b = as_quantity(rhs, to_string(op));
  const auto unit = arith_unit(op, a.unit, b.unit);
  if (!unit) {
    throw EvalError("unit mismatch: " + format_value(lhs) + " " + std::string(to_string(op)) + " " +
                    format_value(rhs));
  }
  switch (op) {
    case ArithOp::Add: return Quantity{a.value + b.value, *unit};
    case ArithOp::Sub: return Quantity{a.value - b.value, *unit};
    case ArithOp::Mul:
      if (a.unit == Unit::Percent && b.unit == Unit::Percent) return Quantity{a.value * b.value / 100.0, *unit};
      if (a.unit == Unit::Percent && b.unit != Unit::None) return Quantity{(a.value / 100.0) * b.value, *unit};
      if (b.unit == Unit::Percent && a.unit != Unit::None) return Quantity{a.value * (b.value / 100.0), *unit};
      return Quantity{a.value * b.value, *unit};
    case ArithOp::Div:
      if (b.unit == Unit::Percent && a.unit != Unit::Percent) return Quantity{a.value / (b.value / 100.0), *unit};
      return Quantity{a.value / b.value, *unit};
  }
  return Quantity{};
}

bool truth(const Value& v) { return as_bool(v, "logic"); }

std::string_view to_string(OpCode op) {
  switch (op) {
    case OpCode::PushConst: return "PUSH_CONST";
    case OpCode::LoadVar: return "LOAD_VAR";
    case OpCode::Cmp: return "CMP";
    case OpCode::InList: return "IN_LIST";
    case OpCode::And: return "AND";
    case OpCode::Or: return "OR";
    case OpCode::Not: return "NOT";
    case OpCode::Add: return "ADD";
    case OpCode::Sub: return "SUB";
    case OpCode::Mul: return "MUL";
    case OpCode::Div: return "DIV";
  }
  return "?";
}

std::string format_instruction(const Instruction& ins) {
  std::string out(to_string(ins.op));
  switch (ins.op) {
    case OpCode::PushConst: return out + " " + format_value(ins.constant);
    case OpCode::LoadVar: return out + " " + std::to_string(ins.operand);
    case OpCode::Cmp: return out + " " + std::string(to_string(ins.cmp));
    case OpCode::InList: return out + " " + std::to_string(ins.operand);
    default: return out;
  }
}

namespace {

// Values popped and pushed by one instruction.
std::pair<std::size_t, std::size_t> stack_effect(const Instruction& ins) {
  switch (ins.op) {
    case OpCode::PushConst:
    case OpCode::LoadVar: return {0, 1};
    case OpCode::Not: return {1, 1};
    case OpCode::InList: return {ins.operand + 1, 1};
    default: return {2, 1};
  }
}

}  // namespace

bool is_stack_balanced(std::span<const Instruction> program) {
  std::size_t depth = 0;
  for (const auto& ins : program) {
    const auto [pop, push] = stack_effect(ins);
    if (depth < pop) return false;
    depth = depth - pop + push;
  }
  return depth == 1;
}

bool execute(std::span<const Instruction> program, std::span<const Value> slots) {
  std::vector<Value> stack;
  stack.reserve(16);
  auto pop = [&stack]() {
    Value v = std::move(stack.back());
    stack.pop_back();
    return v;
  };
  for (const auto& ins : program) {
    switch (ins.op) {
      case OpCode::PushConst:
        stack.push_back(ins.constant);
        break;
      case OpCode::LoadVar:
        if (ins.operand >= slots.size()) throw EvalError("unbound slot " + std::to_string(ins.operand));
        stack.push_back(slots[ins.operand]);
        break;
      case OpCode::Cmp: {
        Value rhs = pop();
        Value lhs = pop();
        stack.push_back(compare_values(ins.cmp, lhs, rhs));
        break;
      }
      case OpCode::InList: {
        const std::size_t base = stack.size() - ins.operand;
        const Value& subject = stack[base - 1];
        bool found = false;
        for (std::size_t i = base; i < stack.size(); ++i) {
          // Every item is compared so type errors surface regardless of order.
          found = compare_values(CmpOp::Eq, subject, stack[i]) || found;
        }
        stack.resize(base - 1);
        stack.push_back(found);
        break;
      }
      case OpCode::And:
      case OpCode::Or: {
        const bool rhs = as_bool(pop(), to_string(ins.op));
        const bool lhs = as_bool(pop(), to_string(ins.op));
        stack.push_back(ins.op == OpCode::And ? (lhs && rhs) : (lhs || rhs));
        break;
      }
      case OpCode::Not:
        stack.push_back(!as_bool(pop(), "not"));
        break;
      case OpCode::Add:
      case OpCode::Sub:
      case OpCode::Mul:
      case OpCode::Div: {
        static constexpr ArithOp kArith[] = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div};
        const ArithOp op = kArith[static_cast<int>(ins.op) - static_cast<int>(OpCode::Add)];
        Value rhs = pop();
        Value lhs = pop();
        stack.push_back(arith_values(op, lhs, rhs));
        break;
      }
    }
  }
  return as_bool(stack.back(), "logic");
}

namespace {

class Emitter {
 public:
  explicit Emitter(const std::vector<DataBinding>& bindings) : bindings_(bindings) {}

  void emit(const Expr& e) {
    std::visit([&](const auto& n) { emit_node(n); }, e.node);
  }

  std::vector<Instruction> take() { return std::move(out_); }

 private:
  void push(OpCode op) { out_.push_back(Instruction{op}); }

  void emit_node(const Literal& n) { out_.push_back(Instruction{OpCode::PushConst, n.value}); }

  void emit_node(const VarRef& n) {
    auto it = std::find_if(bindings_.begin(), bindings_.end(), [&](const DataBinding& b) { return b.var == n.name; });
    if (it == bindings_.end()) throw InternalCompileError("unbound variable '" + n.name + "'");
    Instruction ins{OpCode::LoadVar};
    ins.operand = static_cast<std::size_t>(it - bindings_.begin());
    out_.push_back(ins);
  }

  void emit_node(const Compare& n) {
    emit(*n.lhs);
    emit(*n.rhs);
    Instruction ins{OpCode::Cmp};
    ins.cmp = n.op;
    out_.push_back(ins);
  }

  void emit_node(const InList& n) {
    emit(*n.subject);
    for (const auto& item : n.items) out_.push_back(Instruction{OpCode::PushConst, item});
    Instruction ins{OpCode::InList};
    ins.operand = n.items.size();
    out_.push_back(ins);
  }

  void emit_node(const Logical& n) {
    emit(*n.lhs);
    emit(*n.rhs);
    push(n.op == BoolOp::And ? OpCode::And : OpCode::Or);
  }

  void emit_node(const Not& n) {
    emit(*n.operand);
    push(OpCode::Not);
  }

  void emit_node(const Arith& n) {
    emit(*n.lhs);
    emit(*n.rhs);
    static constexpr OpCode kOps[] = {OpCode::Add, OpCode::Sub, OpCode::Mul, OpCode::Div};
    push(kOps[static_cast<int>(n.op)]);
  }

  // -x is compiled as (-1) * x.
  void emit_node(const Negate& n) {
    out_.push_back(Instruction{OpCode::PushConst, Quantity{-1.0, Unit::None}});
    emit(*n.operand);
    push(OpCode::Mul);
  }

  const std::vector<DataBinding>& bindings_;
  std::vector<Instruction> out_;
};

}  // namespace

std::vector<Instruction> compile_expression(const Expr& expr, const std::vector<DataBinding>& bindings) {
  Emitter emitter(bindings);
  emitter.emit(expr);
  auto program = emitter.take();
  if (!is_stack_balanced(program)) throw InternalCompileError("generated program is not stack-balanced");
  return program;
}

CompiledRule compile_rule(const Mlm& mlm) {
  if (!mlm.logic) throw InternalCompileError("rule '" + mlm.name + "' has no logic");
  CompiledRule rule;
  rule.name = mlm.name;
  rule.title = mlm.title;
  rule.kind = mlm.kind;
  rule.criterion_class = mlm.criterion_class;
  rule.priority = std::clamp(mlm.priority, 0, 100);
  rule.specificity = count_conditions(*mlm.logic);
  rule.applies_to = mlm.applies_to;
  rule.mode = mlm.mode;
  rule.refines = mlm.refines;
  rule.message = mlm.message;
  rule.data_bindings = mlm.data_bindings;
  rule.actions = mlm.actions;
  rule.instructions = compile_expression(*mlm.logic, mlm.data_bindings);
  return rule;
}

std::string disassemble(const CompiledRule& rule) {
  std::string out = rule.name + " (" + std::string(to_string(rule.kind));
  if (rule.criterion_class) out += " " + std::string(to_string(*rule.criterion_class));
  out += ", priority " + std::to_string(rule.priority) + ", specificity " + std::to_string(rule.specificity) + ")\n";
  for (std::size_t i = 0; i < rule.data_bindings.size(); ++i) {
    out += "  slot " + std::to_string(i) + ": " + rule.data_bindings[i].var + " := " +
           format_request(rule.data_bindings[i].source) + "\n";
  }
  for (std::size_t i = 0; i < rule.instructions.size(); ++i) {
    out += "  " + std::to_string(i) + ": " + format_instruction(rule.instructions[i]) + "\n";
  }
  for (const auto& a : rule.actions) out += "  => " + format_action(a) + "\n";
  return out;
}

}  // namespace rtqa::rulelang
