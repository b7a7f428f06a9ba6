#include "rtqa/rulelang/validator.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "rtqa/rulelang/compiler.hpp"
#include "rtqa/rulelang/parser.hpp"

namespace rtqa::rulelang {

std::string_view to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::Syntax: return "Syntax";
    case IssueKind::UnknownConcept: return "UnknownConcept";
    case IssueKind::UnitMismatch: return "UnitMismatch";
    case IssueKind::DuplicateRule: return "DuplicateRule";
    case IssueKind::ConflictingRule: return "ConflictingRule";
    case IssueKind::DanglingRefines: return "DanglingRefines";
    case IssueKind::UnboundVariable: return "UnboundVariable";
  }
  return "?";
}

std::string format_issue(const RuleIssue& issue) {
  std::string out;
  if (!issue.file.empty()) out += issue.file + ":";
  if (issue.location.line > 0) out += std::to_string(issue.location.line) + ":" + std::to_string(issue.location.column) + ":";
  if (!out.empty()) out += " ";
  out += std::string(to_string(issue.severity)) + "[" + std::string(to_string(issue.kind)) + "]";
  if (!issue.mlm_name.empty()) out += " " + issue.mlm_name;
  out += ": " + issue.detail;
  return out;
}

bool has_errors(const std::vector<RuleIssue>& issues) {
  return std::any_of(issues.begin(), issues.end(), [](const RuleIssue& i) { return i.severity == Severity::Error; });
}

namespace {

// ---- canonical form -------------------------------------------------------

void flatten(const ExprPtr& e, BoolOp op, std::vector<ExprPtr>& out) {
  if (const auto* l = std::get_if<Logical>(&e->node); l && l->op == op) {
    flatten(l->lhs, op, out);
    flatten(l->rhs, op, out);
    return;
  }
  out.push_back(e);
}

void flatten_arith(const ExprPtr& e, ArithOp op, std::vector<ExprPtr>& out) {
  if (const auto* a = std::get_if<Arith>(&e->node); a && a->op == op) {
    flatten_arith(a->lhs, op, out);
    flatten_arith(a->rhs, op, out);
    return;
  }
  out.push_back(e);
}

void sort_terms(std::vector<ExprPtr>& terms, bool dedupe) {
  std::vector<std::pair<std::string, ExprPtr>> keyed;
  for (auto& t : terms) keyed.emplace_back(format_expr(*t), t);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (dedupe) {
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
  }
  terms.clear();
  for (auto& [_, t] : keyed) terms.push_back(t);
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const std::vector<DataBinding>& bindings) : bindings_(bindings) {}

  ExprPtr run(const ExprPtr& e) {
    return std::visit([&](const auto& n) { return visit(n, e); }, e->node);
  }

 private:
  ExprPtr visit(const Literal&, const ExprPtr& e) { return e; }

  ExprPtr visit(const VarRef& n, const ExprPtr& e) {
    for (const auto& b : bindings_) {
      if (b.var == n.name) return make_var(format_request(b.source));
    }
    return e;
  }

  ExprPtr visit(const Compare& n, const ExprPtr&) {
    ExprPtr lhs = run(n.lhs);
    ExprPtr rhs = run(n.rhs);
    CmpOp op = n.op;
    if (op == CmpOp::Gt || op == CmpOp::Ge) {
      std::swap(lhs, rhs);
      op = op == CmpOp::Gt ? CmpOp::Lt : CmpOp::Le;
    } else if ((op == CmpOp::Eq || op == CmpOp::Ne) && format_expr(*rhs) < format_expr(*lhs)) {
      std::swap(lhs, rhs);
    }
    return make_compare(op, lhs, rhs);
  }

  ExprPtr visit(const InList& n, const ExprPtr&) {
    std::vector<std::pair<std::string, Value>> keyed;
    for (const auto& v : n.items) keyed.emplace_back(format_value(v), v);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
    std::vector<Value> items;
    for (auto& [_, v] : keyed) items.push_back(v);
    return make_in(run(n.subject), std::move(items));
  }

  ExprPtr visit(const Logical& n, const ExprPtr& e) {
    std::vector<ExprPtr> terms;
    flatten(e, n.op, terms);
    for (auto& t : terms) t = run(t);
    sort_terms(terms, true);
    ExprPtr acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) acc = make_logical(n.op, acc, terms[i]);
    return acc;
  }

  ExprPtr visit(const Not& n, const ExprPtr&) {
    ExprPtr inner = run(n.operand);
    if (const auto* nested = std::get_if<Not>(&inner->node)) return nested->operand;
    return make_not(inner);
  }

  ExprPtr visit(const Arith& n, const ExprPtr& e) {
    if (n.op == ArithOp::Add || n.op == ArithOp::Mul) {
      std::vector<ExprPtr> terms;
      flatten_arith(e, n.op, terms);
      for (auto& t : terms) t = run(t);
      sort_terms(terms, false);
      ExprPtr acc = terms.front();
      for (std::size_t i = 1; i < terms.size(); ++i) acc = make_arith(n.op, acc, terms[i]);
      return acc;
    }
    return make_arith(n.op, run(n.lhs), run(n.rhs));
  }

  ExprPtr visit(const Negate& n, const ExprPtr&) { return make_negate(run(n.operand)); }

  const std::vector<DataBinding>& bindings_;
};

// ---- typing ---------------------------------------------------------------

struct Type {
  enum Tag { Any, Bool, Num, Str, Concept } tag = Any;
  Unit unit = Unit::None;
};

std::string describe(const Type& t) {
  switch (t.tag) {
    case Type::Any: return "any";
    case Type::Bool: return "boolean";
    case Type::Str: return "string";
    case Type::Concept: return "concept";
    case Type::Num: return t.unit == Unit::None ? "unitless number" : "number in " + std::string(unit_suffix(t.unit));
  }
  return "?";
}

Type type_of_value(const Value& v) {
  switch (v.index()) {
    case 0: return {Type::Num, std::get<Quantity>(v).unit};
    case 1: return {Type::Str};
    case 2: return {Type::Bool};
    default: return {Type::Concept};
  }
}

Type type_of_source(const FactRequest& source) {
  const auto* m = std::get_if<MetricRequest>(&source);
  if (!m) return {Type::Any};
  switch (m->op) {
    case MetricOp::V: return {Type::Num, m->output == VolumeOutput::Cc ? Unit::Cc : Unit::Percent};
    case MetricOp::D:
    case MetricOp::Mean:
    case MetricOp::MaxPoint: return {Type::Num, Unit::Gy};
    case MetricOp::VolumeCc: return {Type::Num, Unit::Cc};
    case MetricOp::Delineated: return {Type::Bool};
    case MetricOp::ContourColor: return {Type::Str};
    default: return {Type::Num, Unit::None};
  }
}

class TypeChecker {
 public:
  explicit TypeChecker(const Mlm& mlm) : mlm_(mlm) {}

  std::vector<RuleIssue> run() {
    const Type root = check(*mlm_.logic);
    if (root.tag != Type::Any && root.tag != Type::Bool) {
      report(mlm_.logic->loc, "logic must be boolean, found " + describe(root));
    }
    return std::move(issues_);
  }

 private:
  void report(SourceLoc loc, std::string detail) {
    issues_.push_back(
        RuleIssue{Severity::Error, IssueKind::UnitMismatch, mlm_.name, loc, std::move(detail), mlm_.source_file});
  }

  bool comparable(const Type& a, const Type& b, bool ordering) const {
    if (a.tag == Type::Any || b.tag == Type::Any) {
      const Type& known = a.tag == Type::Any ? b : a;
      return !ordering || known.tag == Type::Any || known.tag == Type::Num;
    }
    if (a.tag != b.tag) return false;
    if (a.tag == Type::Num) return a.unit == b.unit;
    return !ordering;
  }

  Type check(const Expr& e) {
    return std::visit([&](const auto& n) { return visit(n, e); }, e.node);
  }

  Type visit(const Literal& n, const Expr&) { return type_of_value(n.value); }

  Type visit(const VarRef& n, const Expr&) {
    for (const auto& b : mlm_.data_bindings) {
      if (b.var == n.name) return type_of_source(b.source);
    }
    return {Type::Any};
  }

  Type visit(const Compare& n, const Expr& e) {
    const Type a = check(*n.lhs);
    const Type b = check(*n.rhs);
    const bool ordering = n.op != CmpOp::Eq && n.op != CmpOp::Ne;
    if (!comparable(a, b, ordering)) {
      report(e.loc, "cannot compare " + describe(a) + " " + std::string(to_string(n.op)) + " " + describe(b));
    }
    return {Type::Bool};
  }

  Type visit(const InList& n, const Expr& e) {
    const Type subject = check(*n.subject);
    for (const auto& item : n.items) {
      const Type t = type_of_value(item);
      if (!comparable(subject, t, false)) {
        report(e.loc, "membership test of " + describe(subject) + " against " + describe(t));
        break;
      }
    }
    return {Type::Bool};
  }

  Type visit(const Logical& n, const Expr& e) {
    for (const auto* side : {&n.lhs, &n.rhs}) {
      const Type t = check(**side);
      if (t.tag != Type::Any && t.tag != Type::Bool) {
        report(e.loc, "'" + std::string(to_string(n.op)) + "' needs boolean operands, found " + describe(t));
      }
    }
    return {Type::Bool};
  }

  Type visit(const Not& n, const Expr& e) {
    const Type t = check(*n.operand);
    if (t.tag != Type::Any && t.tag != Type::Bool) report(e.loc, "'not' needs a boolean operand, found " + describe(t));
    return {Type::Bool};
  }

  Type visit(const Arith& n, const Expr& e) {
    const Type a = check(*n.lhs);
    const Type b = check(*n.rhs);
    for (const Type* t : {&a, &b}) {
      if (t->tag != Type::Any && t->tag != Type::Num) {
        report(e.loc, "arithmetic needs numbers, found " + describe(*t));
        return {Type::Any};
      }
    }
    if (a.tag == Type::Any || b.tag == Type::Any) return {Type::Any};
    auto unit = arith_unit(n.op, a.unit, b.unit);
    if (!unit) {
      report(e.loc, "unit mismatch in " + describe(a) + " " + std::string(to_string(n.op)) + " " + describe(b));
      return {Type::Any};
    }
    return {Type::Num, *unit};
  }

  Type visit(const Negate& n, const Expr& e) {
    const Type t = check(*n.operand);
    if (t.tag != Type::Any && t.tag != Type::Num) report(e.loc, "negation needs a number, found " + describe(t));
    return t;
  }

  const Mlm& mlm_;
  std::vector<RuleIssue> issues_;
};

// ---- per-rule ontology and binding checks ---------------------------------

void collect_concepts(const Expr& e, std::vector<std::pair<ConceptRef, SourceLoc>>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          if (const auto* c = std::get_if<ConceptRef>(&n.value)) out.emplace_back(*c, e.loc);
        } else if constexpr (std::is_same_v<T, InList>) {
          collect_concepts(*n.subject, out);
          for (const auto& item : n.items) {
            if (const auto* c = std::get_if<ConceptRef>(&item)) out.emplace_back(*c, e.loc);
          }
        } else if constexpr (std::is_same_v<T, Compare> || std::is_same_v<T, Logical> ||
                             std::is_same_v<T, Arith>) {
          collect_concepts(*n.lhs, out);
          collect_concepts(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Negate>) {
          collect_concepts(*n.operand, out);
        }
      },
      e.node);
}

void check_rule(const Mlm& mlm, const ontology::Ontology& ontology, std::vector<RuleIssue>& out) {
  auto issue = [&](IssueKind kind, SourceLoc loc, std::string detail, Severity sev = Severity::Error) {
    out.push_back(RuleIssue{sev, kind, mlm.name, loc, std::move(detail), mlm.source_file});
  };
  if (!mlm.logic) {
    issue(IssueKind::Syntax, mlm.loc, "rule has no logic");
    return;
  }
  if (mlm.kind == RuleKind::Criterion && !mlm.criterion_class) {
    issue(IssueKind::Syntax, mlm.loc, "criterion without a class");
  }
  if (mlm.kind == RuleKind::Classification && mlm.actions.empty()) {
    issue(IssueKind::Syntax, mlm.loc, "classification rule without actions");
  }
  if (mlm.mode == EvalMode::Manual && mlm.message.empty()) {
    issue(IssueKind::Syntax, mlm.loc, "manual criterion without a message");
  }

  for (const auto& var : referenced_vars(*mlm.logic)) {
    const auto n = std::count_if(mlm.data_bindings.begin(), mlm.data_bindings.end(),
                                 [&](const DataBinding& b) { return b.var == var; });
    if (n == 0) issue(IssueKind::UnboundVariable, mlm.logic->loc, "variable '" + var + "' has no data binding");
    if (n > 1) issue(IssueKind::Syntax, mlm.loc, "variable '" + var + "' is bound more than once");
  }

  std::vector<std::pair<ConceptRef, SourceLoc>> concepts;
  collect_concepts(*mlm.logic, concepts);
  for (const auto& action : mlm.actions) {
    if (const auto* a = std::get_if<AssertAction>(&action)) {
      if (const auto* c = std::get_if<ConceptRef>(&a->value)) concepts.emplace_back(*c, mlm.loc);
    }
  }
  for (const auto& [concept_ref, loc] : concepts) {
    try {
      (void)ontology.resolve(concept_ref.system, concept_ref.code);
    } catch (const ontology::UnknownConcept& e) {
      issue(IssueKind::UnknownConcept, loc, e.what());
    }
  }
  for (const auto& b : mlm.data_bindings) {
    const auto* m = std::get_if<MetricRequest>(&b.source);
    if (!m || m->structure.empty()) continue;
    try {
      const std::string canonical = ontology.canonical_structure_name(m->structure);
      if (canonical != m->structure) {
        issue(IssueKind::UnknownConcept, mlm.loc,
              "structure '" + m->structure + "' should be written as its canonical name '" + canonical + "'",
              Severity::Warning);
      }
    } catch (const ontology::UnknownStructureName& e) {
      issue(IssueKind::UnknownConcept, mlm.loc, e.what());
    }
  }

  auto typing = TypeChecker(mlm).run();
  out.insert(out.end(), typing.begin(), typing.end());
}

std::string signature(const Mlm& mlm) {
  std::string sig = std::string(to_string(mlm.kind)) + "|" + mlm.applies_to + "|";
  if (mlm.mode == EvalMode::Manual) return sig + "manual|" + mlm.message;
  return sig + format_expr(*canonicalize(*mlm.logic, mlm.data_bindings));
}

std::vector<std::string> action_set(const Mlm& mlm) {
  std::vector<std::string> out;
  for (const auto& a : mlm.actions) out.push_back(format_action(a));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ExprPtr canonicalize(const Expr& logic, const std::vector<DataBinding>& bindings) {
  // Canonicalizer works on shared pointers; wrap a copy.
  auto root = std::make_shared<const Expr>(logic);
  return Canonicalizer(bindings).run(root);
}

std::vector<RuleIssue> check_types(const Mlm& mlm) {
  if (!mlm.logic) return {};
  return TypeChecker(mlm).run();
}

std::vector<RuleIssue> validate_rulebase(const std::vector<Mlm>& mlms, const ontology::Ontology& ontology) {
  std::vector<RuleIssue> issues;

  std::vector<const Mlm*> sorted;
  for (const auto& m : mlms) sorted.push_back(&m);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Mlm* a, const Mlm* b) {
    return std::tie(a->name, a->source_file) < std::tie(b->name, b->source_file);
  });

  std::map<std::string, const Mlm*> by_name;
  for (const Mlm* m : sorted) {
    check_rule(*m, ontology, issues);
    auto [it, inserted] = by_name.emplace(m->name, m);
    if (!inserted) {
      issues.push_back(RuleIssue{Severity::Error, IssueKind::DuplicateRule, m->name, m->loc,
                                 "rule name is already used in " + it->second->source_file, m->source_file});
    }
  }

  for (const Mlm* m : sorted) {
    if (!m->refines) continue;
    if (*m->refines == m->name || !by_name.count(*m->refines)) {
      issues.push_back(RuleIssue{Severity::Error, IssueKind::DanglingRefines, m->name, m->loc,
                                 "refines '" + *m->refines + "', which is not another rule in this rulebase",
                                 m->source_file});
    }
  }

  // Rules with the same canonical logic: equal actions duplicate, unequal
  // actions conflict. Each later rule (by name) is reported against the
  // first one of its group.
  std::map<std::string, std::vector<const Mlm*>> groups;
  for (const Mlm* m : sorted) {
    if (!m->logic) continue;
    groups[signature(*m)].push_back(m);
  }
  for (const auto& [_, group] : groups) {
    for (std::size_t i = 1; i < group.size(); ++i) {
      const Mlm& first = *group.front();
      const Mlm& other = *group[i];
      if (first.name == other.name) continue;  // already reported as a name clash
      if (action_set(first) == action_set(other)) {
        issues.push_back(RuleIssue{Severity::Warning, IssueKind::DuplicateRule, other.name, other.loc,
                                   "same logic and actions as '" + first.name + "'", other.source_file});
      } else {
        issues.push_back(RuleIssue{Severity::Error, IssueKind::ConflictingRule, other.name, other.loc,
                                   "same logic as '" + first.name + "' but different actions", other.source_file});
      }
    }
  }

  std::sort(issues.begin(), issues.end(), [](const RuleIssue& a, const RuleIssue& b) {
    return std::make_tuple(a.mlm_name, static_cast<int>(a.kind), a.file, a.location.line, a.location.column, a.detail) <
           std::make_tuple(b.mlm_name, static_cast<int>(b.kind), b.file, b.location.line, b.location.column, b.detail);
  });
  return issues;
}

}  // namespace rtqa::rulelang
