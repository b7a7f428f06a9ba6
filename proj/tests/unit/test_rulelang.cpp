#include <gtest/gtest.h>

#include <random>

#include "rtqa/rulelang/compiler.hpp"
#include "rtqa/rulelang/decision_table.hpp"
#include "rtqa/rulelang/parser.hpp"
#include "rtqa/rulelang/rulepack.hpp"
#include "rtqa/rulelang/validator.hpp"
#include "support/expr_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace rtqa::rulelang {
namespace {

std::string rule1_text() { return test::read_text(test::sample_pack_dir() / "classification.mlm"); }

Mlm rule1() { return parse_mlms(rule1_text()).at(0); }

const char* kMinimal = R"(
mlm:
  name minimal;
  version "1";
  title "t";
  kind criterion quality;
data:
logic:
  true;
end.
)";

std::size_t count_kind(const std::vector<RuleIssue>& issues, IssueKind kind) {
  return std::count_if(issues.begin(), issues.end(), [&](const auto& i) { return i.kind == kind; });
}

IssueKind parse_error_kind(std::string_view text) {
  try {
    parse_mlm(text);
  } catch (const RuleError& e) {
    return e.issue().kind;
  }
  ADD_FAILURE() << "no error for: " << text;
  return IssueKind::Syntax;
}

TEST(Parser, ClassificationRuleHasSixConjuncts) {
  const Mlm m = rule1();
  EXPECT_EQ(m.kind, RuleKind::Classification);
  EXPECT_EQ(m.name, "low_risk_prostate");
  EXPECT_EQ(m.priority, 60);
  EXPECT_EQ(m.data_bindings.size(), 6u);
  ASSERT_TRUE(m.logic);
  EXPECT_EQ(compile_rule(m).specificity, 6);
  ASSERT_EQ(m.actions.size(), 1u);
  EXPECT_EQ(std::get<AssertAction>(m.actions[0]).key, "risk.class");
}

TEST(Parser, MinimalCriterion) {
  const Mlm m = parse_mlm(kMinimal);
  EXPECT_EQ(m.kind, RuleKind::Criterion);
  EXPECT_EQ(m.criterion_class, CriterionClass::Quality);
  EXPECT_EQ(m.priority, kDefaultPriority);
  EXPECT_EQ(m.applies_to, "*");
}

TEST(Parser, UnboundVariableRejected) {
  EXPECT_EQ(parse_error_kind(R"(
mlm:
  name unbound;
  version "1";
  title "t";
  kind classification;
data:
logic:
  PSA < 10;
action:
  assert "risk.class" = "x";
end.
)"),
            IssueKind::UnboundVariable);
}

TEST(Parser, SyntaxErrorsCarryLocation) {
  try {
    parse_mlm("mlm:\n  name broken;\n  version \"1\";\n  title \"t\";\n  kind criterion quality;\ndata:\nlogic:\n  1 < ;\nend.\n", "broken.mlm");
    FAIL() << "expected RuleError";
  } catch (const RuleError& e) {
    EXPECT_EQ(e.issue().kind, IssueKind::Syntax);
    EXPECT_EQ(e.issue().file, "broken.mlm");
    EXPECT_EQ(e.issue().location.line, 8);
  }
}

TEST(Parser, RoundTripsEveryPackRule) {
  for (const auto& entry : std::filesystem::directory_iterator(test::sample_pack_dir())) {
    if (entry.path().extension() != ".mlm") continue;
    for (const Mlm& m : parse_mlms(test::read_text(entry.path()), entry.path().filename().string())) {
      const std::string printed = pretty_print(m);
      EXPECT_EQ(parse_mlm(printed), m) << printed;
      EXPECT_EQ(pretty_print(parse_mlm(printed)), printed);
    }
  }
}

TEST(Parser, PreservesBindingOrderAndUnits) {
  Mlm m = rule1();
  std::reverse(m.data_bindings.begin(), m.data_bindings.end());
  const std::string printed = pretty_print(m);
  EXPECT_LT(printed.find("gleason :="), printed.find("location :="));
  EXPECT_NE(printed.find("10ng/ml"), std::string::npos);
  EXPECT_EQ(parse_mlm(printed), m);
}

TEST(Parser, RandomExpressionsRoundTrip) {
  test::Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto e = test::random_expr(rng, 1 + i % 6);
    const std::string text = format_expr(*e);
    EXPECT_EQ(format_expr(*parse_expression(text)), text);
  }
}

TEST(Compiler, TrueCompilesToSinglePush) {
  const CompiledRule r = compile_rule(parse_mlm(kMinimal));
  ASSERT_EQ(r.instructions.size(), 1u);
  EXPECT_EQ(r.instructions[0].op, OpCode::PushConst);
  EXPECT_EQ(r.instructions[0].constant, Value{true});
  EXPECT_EQ(r.specificity, 0);
  EXPECT_TRUE(r.evaluate({}));
}

TEST(Compiler, StackBalance) {
  std::vector<Instruction> bad{{OpCode::And}};
  EXPECT_FALSE(is_stack_balanced(bad));
  std::vector<Instruction> two{{OpCode::PushConst, true}, {OpCode::PushConst, false}};
  EXPECT_FALSE(is_stack_balanced(two));
  EXPECT_TRUE(is_stack_balanced(compile_rule(rule1()).instructions));
}

TEST(Compiler, EvaluatesRuleOneOnReferenceFacts) {
  const CompiledRule r = compile_rule(rule1());
  std::vector<Value> slots{make_concept(ConceptSystem::Icdo, "C61.9"), make_concept(ConceptSystem::Tnm, "T2a"),
                           make_concept(ConceptSystem::Tnm, "N0"),     make_concept(ConceptSystem::Tnm, "M0"),
                           Quantity{8, Unit::NgPerMl},                 Quantity{6, Unit::None}};
  EXPECT_TRUE(r.evaluate(slots));
  slots[4] = Quantity{10, Unit::NgPerMl};
  EXPECT_FALSE(r.evaluate(slots));
  slots[4] = Quantity{8, Unit::Gy};
  EXPECT_THROW(r.evaluate(slots), EvalError);
}

TEST(Compiler, PercentArithmetic) {
  EXPECT_EQ(arith_values(ArithOp::Mul, Quantity{107, Unit::Percent}, Quantity{79.2, Unit::Gy}),
            Value(Quantity{(107.0 / 100.0) * 79.2, Unit::Gy}));
  EXPECT_EQ(arith_values(ArithOp::Div, Quantity{10, Unit::Gy}, Quantity{5, Unit::Gy}), Value(Quantity{2, Unit::None}));
  EXPECT_FALSE(arith_unit(ArithOp::Add, Unit::Gy, Unit::Cc));
  EXPECT_THROW(arith_values(ArithOp::Add, Quantity{1, Unit::Gy}, Quantity{1, Unit::Cc}), EvalError);
}

TEST(Compiler, MatchesTreeInterpreter) {
  test::Rng rng(99);
  const auto& bindings = test::expr_bindings();
  for (int t = 0; t < 200; ++t) {
    const auto e = test::random_expr(rng, 1 + t % 6);
    const auto program = compile_expression(*e, bindings);
    ASSERT_TRUE(is_stack_balanced(program));
    for (int k = 0; k < 20; ++k) {
      const auto env = test::random_env(rng);
      std::vector<Value> slots;
      for (const auto& b : bindings) slots.push_back(env.at(b.var));
      std::optional<bool> vm;
      try {
        vm = execute(program, slots);
      } catch (const EvalError&) {
      }
      EXPECT_EQ(vm, test::tree_truth(*e, env)) << format_expr(*e);
    }
  }
}

TEST(Validator, DuplicateAndConflict) {
  const Mlm base = rule1();
  Mlm copy = base;
  copy.name = "low_risk_prostate_copy";
  const auto dup = validate_rulebase({base, copy}, test::sample_ontology());
  EXPECT_EQ(count_kind(dup, IssueKind::DuplicateRule), 1u);
  EXPECT_FALSE(has_errors(dup));

  Mlm variant = base;
  variant.name = "low_risk_prostate_variant";
  variant.actions = {AssertAction{"risk.class", std::string("intermediate_risk_prostate")}};
  const auto conflict = validate_rulebase({base, variant}, test::sample_ontology());
  EXPECT_EQ(count_kind(conflict, IssueKind::ConflictingRule), 1u);
  EXPECT_TRUE(has_errors(conflict));
}

TEST(Validator, DuplicateSurvivesReorderedConjuncts) {
  const Mlm base = rule1();
  Mlm swapped = parse_mlm(R"(
mlm:
  name swapped;
  version "1";
  title "t";
  kind classification;
data:
  g := fact "lab.gleason";
  p := fact "lab.psa";
  loc := fact "tumour.location";
  t := fact "tumour.stage.t";
  n := fact "tumour.stage.n";
  m := fact "tumour.stage.m";
logic:
  6 >= g and 10ng/ml > p and m = concept TNM "M0" and n = concept TNM "N0"
    and t in [concept TNM "T1a", concept TNM "T1b", concept TNM "T1c", concept TNM "T2a"]
    and loc = concept ICDO "C61.9";
action:
  assert "risk.class" = "low_risk_prostate";
end.
)");
  const auto issues = validate_rulebase({base, swapped}, test::sample_ontology());
  EXPECT_EQ(count_kind(issues, IssueKind::DuplicateRule), 1u);
}

TEST(Validator, UnknownConceptsAndStructures) {
  const auto issues = validate_rulebase({parse_mlm(R"(
mlm:
  name odd;
  version "1";
  title "t";
  kind criterion structure;
data:
  loc := fact "tumour.location";
  v := metric V("Liver", 50%, percent);
logic:
  loc = concept ICDO "C99.9" and v < 10%;
end.
)")},
                                        test::sample_ontology());
  EXPECT_EQ(count_kind(issues, IssueKind::UnknownConcept), 2u);
}

TEST(Validator, UnitMismatchAndDanglingRefines) {
  const auto issues = validate_rulebase({parse_mlm(R"(
mlm:
  name mixed;
  version "1";
  title "t";
  kind criterion dose;
  refines nothing_here;
data:
  m := metric mean("Rectum");
logic:
  m < 15cc;
end.
)")},
                                        test::sample_ontology());
  EXPECT_EQ(count_kind(issues, IssueKind::UnitMismatch), 1u);
  EXPECT_EQ(count_kind(issues, IssueKind::DanglingRefines), 1u);
}

TEST(Validator, SamplePackIsClean) {
  const auto pack = load_rulepack_dir(test::sample_pack_dir());
  const auto issues = lint_rulepack(pack, rulepack_ontology(pack));
  EXPECT_FALSE(has_errors(issues));
  EXPECT_TRUE(pack.parse_issues.empty());
}

TEST(Validator, OrderIndependent) {
  auto mlms = load_rulepack_dir(test::fixture_path("lint/conflict")).mlms;
  const auto a = validate_rulebase(mlms, test::sample_ontology());
  std::reverse(mlms.begin(), mlms.end());
  EXPECT_EQ(validate_rulebase(mlms, test::sample_ontology()), a);
}

TEST(Rulepack, CompileRefusesErrors) {
  const auto pack = load_rulepack_dir(test::fixture_path("lint/conflict"));
  EXPECT_THROW(compile_rulebase(pack), ValidationFailed);
}

TEST(Rulepack, CompiledSampleHasAllClasses) {
  const auto base = test::sample_rulebase();
  EXPECT_EQ(base->id, "prostate_3dcrt");
  EXPECT_EQ(base->classification_rules().size(), 2u);
  std::set<CriterionClass> classes;
  for (const auto* c : base->criteria()) classes.insert(*c->criterion_class);
  EXPECT_EQ(classes.size(), 5u);
  EXPECT_TRUE(std::is_sorted(base->rules.begin(), base->rules.end(),
                             [](const auto& a, const auto& b) { return a.name < b.name; }));
}

const char* kTwoByTwo = R"(
data: psa := fact "lab.psa"; gleason := fact "lab.gleason";
psa < 10ng/ml | T | T | F | F |
gleason <= 6  | T | F | T | F |
---------------------------------
assert "risk.x" = "a" | X |   |   |   |
assert "risk.x" = "b" |   | X | X | X |
)";

TEST(DecisionTable, ParsesFourColumns) {
  const auto t = parse_decision_table(kTwoByTwo);
  EXPECT_EQ(t.conditions.size(), 2u);
  EXPECT_EQ(t.actions.size(), 2u);
  ASSERT_EQ(t.columns.size(), 4u);
  EXPECT_EQ(entries_string(t.columns[1]), "TF");
  EXPECT_EQ(t.columns[1].actions, (std::vector<bool>{false, true}));
}

TEST(DecisionTable, RejectsDuplicateColumnsAndRaggedRows) {
  EXPECT_THROW(parse_decision_table("a := fact \"x.a\";\ntrue | T | T |\n---\nassert \"x.b\" = true | X | X |\n"),
               RuleError);
  EXPECT_THROW(parse_decision_table("true | T | F |\n---\nassert \"x.b\" = true | X |\n"), RuleError);
  EXPECT_THROW(parse_decision_table("true | Q |\n---\nassert \"x.b\" = true | X |\n"), RuleError);
}

TEST(DecisionTable, CompletenessExamples) {
  EXPECT_TRUE(check_completeness(parse_decision_table(kTwoByTwo)).balanced);
  const auto unbalanced = check_completeness(parse_decision_table(
      test::read_text(test::fixture_path("tables/unbalanced.dtab"))));
  EXPECT_FALSE(unbalanced.balanced);
  EXPECT_EQ(unbalanced.missing, std::vector<std::string>{"FF"});
  try {
    check_completeness(parse_decision_table(test::read_text(test::fixture_path("tables/overlap.dtab"))));
    FAIL() << "expected OverlapError";
  } catch (const OverlapError& e) {
    EXPECT_EQ(e.vector, "TT");
    EXPECT_EQ(e.columns, (std::vector<std::size_t>{0, 1}));
  }
}

TEST(DecisionTable, CatchAllColumn) {
  const auto t = parse_decision_table("true | - |\nfalse | - |\n---\nassert \"x.b\" = true | X |\n");
  EXPECT_TRUE(check_completeness(t).balanced);
  const auto rules = table_to_rules(t, "catch", RuleKind::Classification, std::nullopt);
  ASSERT_EQ(rules.size(), 1u);
  EXPECT_EQ(format_expr(*rules[0].logic), "true");
}

TEST(DecisionTable, ExpandsToRules) {
  const auto t = parse_decision_table(kTwoByTwo);
  const auto rules = table_to_rules(t, "pg", RuleKind::Classification, std::nullopt);
  ASSERT_EQ(rules.size(), 4u);
  EXPECT_EQ(rules[0].name, "pg_1");
  for (const auto& r : rules) EXPECT_EQ(compile_rule(r).specificity, 2);
  EXPECT_EQ(format_expr(*rules[1].logic), "psa < 10ng/ml and not gleason <= 6");

  const auto unbalanced =
      parse_decision_table(test::read_text(test::fixture_path("tables/unbalanced.dtab")));
  EXPECT_EQ(table_to_rules(unbalanced, "u", RuleKind::Classification, std::nullopt).size(), 3u);
}

TEST(DecisionTable, HeaderDrivesExpansion) {
  const auto t = parse_decision_table(test::read_text(test::fixture_path("tables/balanced.dtab")));
  EXPECT_EQ(t.name, "psa_gleason");
  EXPECT_EQ(t.priority, 40);
  const auto rules = table_to_rules(t);
  ASSERT_EQ(rules.size(), 4u);
  EXPECT_EQ(rules[3].name, "psa_gleason_4");
  EXPECT_EQ(rules[3].priority, 40);
}

}  // namespace
}  // namespace rtqa::rulelang
