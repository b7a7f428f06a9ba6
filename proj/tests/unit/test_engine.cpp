#include <gtest/gtest.h>

#include "rtqa/engine/engine.hpp"
#include "rtqa/rulelang/parser.hpp"
#include "support/fixtures.hpp"

namespace rtqa::engine {
namespace {

using rulelang::compile_rule;
using rulelang::parse_mlms;

std::vector<CompiledRule> compile_all(const std::string& text) {
  std::vector<CompiledRule> out;
  for (const auto& m : parse_mlms(text)) out.push_back(compile_rule(m));
  return out;
}

std::vector<CompiledRule> classification_rules() { return test::sample_rulebase()->classification_rules(); }

std::string rule(const std::string& name, int priority, const std::string& data, const std::string& logic,
                 const std::string& action, const std::string& extra = "") {
  return "mlm:\n  name " + name + ";\n  version \"1\";\n  title \"t\";\n  kind classification;\n  priority " + std::to_string(priority) + ";\n" +
         extra + "data:\n" + data + "logic:\n  " + logic + ";\naction:\n  " + action + ";\nend.\n";
}

std::vector<std::string> fired(const ForwardResult& r) {
  std::vector<std::string> names;
  for (const auto& t : r.trace) names.push_back(t.rule);
  return names;
}

TEST(WorkingMemory, AssertIdempotentAndContradiction) {
  WorkingMemory wm;
  EXPECT_TRUE(wm.assert_fact({"lab.psa", Quantity{8, Unit::NgPerMl}, Provenance::input()}));
  EXPECT_EQ(wm.size(), 1u);
  EXPECT_FALSE(wm.assert_fact({"lab.psa", Quantity{8, Unit::NgPerMl}, Provenance::input()}));
  EXPECT_EQ(wm.log().size(), 1u);
  EXPECT_THROW(wm.assert_fact({"lab.psa", Quantity{9, Unit::NgPerMl}, Provenance::input()}), ContradictoryAssertion);
  EXPECT_THROW(wm.assert_fact({"Bad Key", true, Provenance::input()}), Error);
}

TEST(WorkingMemory, ReplayRebuildsState) {
  WorkingMemory wm;
  wm.assert_fact({"a.b", true, Provenance::input()});
  wm.assert_fact({"a.c", std::string("x"), Provenance::derived("r")});
  EXPECT_EQ(WorkingMemory::replay(wm.log()), wm);
}

TEST(Match, ReferenceFactsActivateRuleOne) {
  const auto acts = match(classification_rules(), test::fixture_facts("pass"));
  ASSERT_EQ(acts.size(), 1u);
  EXPECT_EQ(acts[0].rule, "low_risk_prostate");
  EXPECT_EQ(acts[0].specificity, 6);
}

TEST(Match, MissingBindingMeansNoActivation) {
  const WorkingMemory full = test::fixture_facts("pass");
  WorkingMemory partial;
  for (const auto& [k, f] : full.facts()) {
    if (k != "lab.gleason") partial.assert_fact(f);
  }
  EXPECT_TRUE(match(classification_rules(), partial).empty());
  EXPECT_TRUE(match({}, full).empty());
}

TEST(ResolveConflicts, OrderingLaws) {
  const std::vector<Activation> acts{{"b", 50, 2, {}}, {"a", 50, 6, {}}, {"c", 60, 1, {}}, {"d", 50, 6, {}}};
  const auto agenda = resolve_conflicts(acts);
  std::vector<std::string> names;
  for (const auto& a : agenda) names.push_back(a.rule);
  EXPECT_EQ(names, (std::vector<std::string>{"c", "a", "d", "b"}));
}

TEST(ResolveConflicts, RefiningRuleSuppressesParent) {
  const auto agenda = resolve_conflicts({{"parent", 90, 1, {}}, {"child", 10, 2, std::string("parent")}});
  ASSERT_EQ(agenda.size(), 1u);
  EXPECT_EQ(agenda[0].rule, "child");
  EXPECT_EQ(resolve_conflicts({{"x", 1, 1, {}}}, {"x"}).size(), 0u);
}

TEST(RunForward, RuleOneThenRuleTwo) {
  const auto r = run_forward(classification_rules(), test::fixture_facts("pass"));
  EXPECT_EQ(fired(r), (std::vector<std::string>{"low_risk_prostate", "load_low_risk_prostate_criteria"}));
  ASSERT_EQ(r.trace[0].asserted.size(), 1u);
  EXPECT_EQ(r.trace[0].asserted[0].key, "risk.class");
  EXPECT_EQ(r.trace[0].asserted[0].provenance, Provenance::derived("low_risk_prostate"));
  EXPECT_EQ(r.trace[1].criteria_loaded, std::vector<std::string>{"low_risk_prostate"});
  EXPECT_EQ(r.loaded_criteria, std::vector<std::string>{"low_risk_prostate"});
  EXPECT_EQ(r.trace[0].cycle, 0);
  EXPECT_EQ(r.trace[1].cycle, 1);
}

TEST(RunForward, EmptyRulebase) {
  const WorkingMemory wm = test::fixture_facts("pass");
  const auto r = run_forward({}, wm);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.wm, wm);
}

std::string chain_text(int n) {
  std::string text;
  for (int i = 0; i < n; ++i) {
    text += rule("r" + std::to_string(i), 50, "  x := fact \"chain.f" + std::to_string(i) + "\";\n", "x = true",
                 "assert \"chain.f" + std::to_string(i + 1) + "\" = true");
  }
  return text;
}

TEST(RunForward, TwentyRuleChainFiresInOrder) {
  WorkingMemory wm;
  wm.assert_fact({"chain.f0", true, Provenance::input()});
  auto rules = compile_all(chain_text(20));
  std::reverse(rules.begin(), rules.end());
  const auto r = run_forward(rules, wm);
  ASSERT_EQ(r.trace.size(), 20u);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(r.trace[i].rule, "r" + std::to_string(i));
  EXPECT_TRUE(r.wm.contains("chain.f20"));
}

TEST(RunForward, CycleLimit) {
  WorkingMemory wm;
  wm.assert_fact({"chain.f0", true, Provenance::input()});
  EXPECT_THROW(run_forward(compile_all(chain_text(20)), wm, 5), CycleLimitExceeded);
}

TEST(RunForward, ContradictionSurfaces) {
  const std::string data = "  x := fact \"in.a\";\n";
  const auto rules = compile_all(rule("one", 50, data, "x = true", "assert \"out.v\" = \"a\"") +
                                 rule("two", 40, data, "x = true", "assert \"out.v\" = \"b\""));
  WorkingMemory wm;
  wm.assert_fact({"in.a", true, Provenance::input()});
  EXPECT_THROW(run_forward(rules, wm), ContradictoryAssertion);
}

TEST(RunForward, RefinesSuppressesParentForTheRun) {
  const std::string data = "  x := fact \"in.a\";\n";
  const auto rules = compile_all(rule("general", 90, data, "x = true", "assert \"out.g\" = true") +
                                 rule("special", 10, data, "x = true", "assert \"out.s\" = true",
                                      "  refines general;\n"));
  WorkingMemory wm;
  wm.assert_fact({"in.a", true, Provenance::input()});
  const auto r = run_forward(rules, wm);
  EXPECT_EQ(fired(r), std::vector<std::string>{"special"});
  EXPECT_FALSE(r.wm.contains("out.g"));
}

TEST(RunForward, TraceIndependentOfRuleOrder) {
  auto rules = test::sample_rulebase()->classification_rules();
  const auto wm = test::fixture_facts("pass");
  const std::string a = trace_to_json(run_forward(rules, wm).trace).dump();
  std::reverse(rules.begin(), rules.end());
  EXPECT_EQ(trace_to_json(run_forward(rules, wm).trace).dump(), a);
}

TEST(QueryBackward, ProvedNeedFactsDisproved) {
  const auto rules = classification_rules();
  const Value goal = std::string("low_risk_prostate");
  const auto proved = query_backward(rules, test::fixture_facts("pass"), "risk.class", goal);
  EXPECT_EQ(proved.status, QueryStatus::Proved);
  EXPECT_EQ(proved.proof, std::vector<std::string>{"low_risk_prostate"});

  const WorkingMemory full = test::fixture_facts("pass");
  WorkingMemory partial;
  for (const auto& [k, f] : full.facts()) {
    if (k != "lab.psa") partial.assert_fact(f);
  }
  const auto need = query_backward(rules, partial, "risk.class", goal);
  EXPECT_EQ(need.status, QueryStatus::NeedFacts);
  EXPECT_EQ(need.needed, std::vector<std::string>{"lab.psa"});

  const auto none = query_backward(rules, partial, "risk.other", goal);
  EXPECT_EQ(none.status, QueryStatus::Disproved);
  EXPECT_TRUE(none.needed.empty());

  EXPECT_EQ(query_backward(rules, test::fixture_facts("psa10"), "risk.class", goal).status,
            QueryStatus::Disproved);
}

TEST(QueryBackward, ChainsThroughDerivedFacts) {
  WorkingMemory wm;
  wm.assert_fact({"chain.f0", true, Provenance::input()});
  const auto r = query_backward(compile_all(chain_text(5)), wm, "chain.f5", true);
  EXPECT_EQ(r.status, QueryStatus::Proved);
  EXPECT_EQ(r.proof, (std::vector<std::string>{"r0", "r1", "r2", "r3", "r4"}));
}

TEST(QueryBackward, GoalCycleDetected) {
  const auto rules = compile_all(rule("a", 50, "  x := fact \"loop.b\";\n", "x = true", "assert \"loop.a\" = true") +
                                 rule("b", 50, "  x := fact \"loop.a\";\n", "x = true", "assert \"loop.b\" = true"));
  EXPECT_THROW(query_backward(rules, WorkingMemory{}, "loop.a", true), GoalCycle);
}

}  // namespace
}  // namespace rtqa::engine
