#include "rtqa/rulelang/ast.hpp"

#include <algorithm>

namespace rtqa::rulelang {

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "<>";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string_view to_string(BoolOp op) { return op == BoolOp::And ? "and" : "or"; }

std::string_view to_string(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "?";
}

bool same_tree(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace {

struct NodeEq {
  const ExprNode& other;

  bool operator()(const Literal& a) const { return a.value == std::get<Literal>(other).value; }
  bool operator()(const VarRef& a) const { return a.name == std::get<VarRef>(other).name; }
  bool operator()(const Compare& a) const {
    const auto& b = std::get<Compare>(other);
    return a.op == b.op && same_tree(a.lhs, b.lhs) && same_tree(a.rhs, b.rhs);
  }
  bool operator()(const InList& a) const {
    const auto& b = std::get<InList>(other);
    return same_tree(a.subject, b.subject) && a.items == b.items;
  }
  bool operator()(const Logical& a) const {
    const auto& b = std::get<Logical>(other);
    return a.op == b.op && same_tree(a.lhs, b.lhs) && same_tree(a.rhs, b.rhs);
  }
  bool operator()(const Not& a) const { return same_tree(a.operand, std::get<Not>(other).operand); }
  bool operator()(const Arith& a) const {
    const auto& b = std::get<Arith>(other);
    return a.op == b.op && same_tree(a.lhs, b.lhs) && same_tree(a.rhs, b.rhs);
  }
  bool operator()(const Negate& a) const { return same_tree(a.operand, std::get<Negate>(other).operand); }
};

ExprPtr make(ExprNode node, SourceLoc loc) { return std::make_shared<const Expr>(Expr{std::move(node), loc}); }

void collect_vars(const Expr& expr, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          if (std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
        } else if constexpr (std::is_same_v<T, Compare> || std::is_same_v<T, Logical> ||
                             std::is_same_v<T, Arith>) {
          collect_vars(*n.lhs, out);
          collect_vars(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, InList>) {
          collect_vars(*n.subject, out);
        } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Negate>) {
          collect_vars(*n.operand, out);
        }
      },
      expr.node);
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(NodeEq{b.node}, a.node);
}

ExprPtr make_literal(Value value, SourceLoc loc) { return make(Literal{std::move(value)}, loc); }
ExprPtr make_var(std::string name, SourceLoc loc) { return make(VarRef{std::move(name)}, loc); }
ExprPtr make_compare(CmpOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
  return make(Compare{op, std::move(lhs), std::move(rhs)}, loc);
}
ExprPtr make_in(ExprPtr subject, std::vector<Value> items, SourceLoc loc) {
  return make(InList{std::move(subject), std::move(items)}, loc);
}
ExprPtr make_logical(BoolOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
  return make(Logical{op, std::move(lhs), std::move(rhs)}, loc);
}
ExprPtr make_not(ExprPtr operand, SourceLoc loc) { return make(Not{std::move(operand)}, loc); }
ExprPtr make_arith(ArithOp op, ExprPtr lhs, ExprPtr rhs, SourceLoc loc) {
  return make(Arith{op, std::move(lhs), std::move(rhs)}, loc);
}
ExprPtr make_negate(ExprPtr operand, SourceLoc loc) { return make(Negate{std::move(operand)}, loc); }

ExprPtr make_conjunction(const std::vector<ExprPtr>& terms) {
  if (terms.empty()) return make_literal(true);
  ExprPtr acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = make_logical(BoolOp::And, acc, terms[i]);
  return acc;
}

int count_conditions(const Expr& expr) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Compare> || std::is_same_v<T, InList>) {
          return 1;
        } else if constexpr (std::is_same_v<T, Logical> || std::is_same_v<T, Arith>) {
          return count_conditions(*n.lhs) + count_conditions(*n.rhs);
        } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Negate>) {
          return count_conditions(*n.operand);
        } else {
          return 0;
        }
      },
      expr.node);
}

std::vector<std::string> referenced_vars(const Expr& expr) {
  std::vector<std::string> out;
  collect_vars(expr, out);
  return out;
}

std::string_view to_string(RuleKind kind) {
  return kind == RuleKind::Classification ? "classification" : "criterion";
}

std::string_view to_string(CriterionClass cls) {
  switch (cls) {
    case CriterionClass::Precondition: return "precondition";
    case CriterionClass::Convention: return "convention";
    case CriterionClass::Structure: return "structure";
    case CriterionClass::Dose: return "dose";
    case CriterionClass::Quality: return "quality";
  }
  return "?";
}

std::string_view to_string(EvalMode mode) { return mode == EvalMode::Automatic ? "automatic" : "manual"; }

std::optional<CriterionClass> parse_criterion_class(std::string_view text) {
  for (auto cls : kAllClasses) {
    if (to_string(cls) == text) return cls;
  }
  return std::nullopt;
}

std::string format_action(const Action& action) {
  if (const auto* a = std::get_if<AssertAction>(&action)) {
    return "assert " + format_value(Value{a->key}) + " = " + format_value(a->value);
  }
  return "load_criteria " + std::get<LoadCriteriaAction>(action).criteria_set;
}

bool operator==(const Mlm& a, const Mlm& b) {
  return a.name == b.name && a.version == b.version && a.title == b.title && a.kind == b.kind &&
         a.criterion_class == b.criterion_class && a.priority == b.priority && a.applies_to == b.applies_to &&
         a.mode == b.mode && a.refines == b.refines && a.data_bindings == b.data_bindings &&
         same_tree(a.logic, b.logic) && a.actions == b.actions && a.message == b.message;
}

}  // namespace rtqa::rulelang
