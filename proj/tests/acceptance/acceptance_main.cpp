// Acceptance checks 1-9. Prints one PASS/FAIL line per check and exits
// non-zero when any check fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "rtqa/dosimetry/metrics.hpp"
#include "rtqa/engine/engine.hpp"
#include "rtqa/evaluation/evaluation.hpp"
#include "rtqa/facts/facts_io.hpp"
#include "rtqa/facts/plan_io.hpp"
#include "rtqa/facts/repository.hpp"
#include "rtqa/rulelang/compiler.hpp"
#include "rtqa/rulelang/decision_table.hpp"
#include "rtqa/rulelang/parser.hpp"
#include "rtqa/rulelang/rulepack.hpp"
#include "rtqa/service/http_api.hpp"
#include "rtqa/service/session_store.hpp"
#include "support/expr_oracle.hpp"
#include "support/fixpoint_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/voxel_oracle.hpp"

namespace {

using namespace rtqa;
using namespace rtqa::test;
namespace dm = rtqa::dosimetry;
namespace rl = rtqa::rulelang;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few mismatches of a check.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Outcome result(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + "/" + std::to_string(checks_) + " mismatches: " + notes_};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string notes_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) { return format_number(v); }

// 1. Classification of the reference facts and its boundary mutations.
Outcome ac1_classification() {
  Checker c;
  const auto start = Clock::now();
  const auto base = sample_rulebase();
  const auto cls = evaluation::classify(*base, fixture_facts("pass"));
  c.expect(cls.risk_class == "low_risk_prostate", "reference facts classified as '" + cls.risk_class + "'");
  const auto sel = evaluation::load_criteria(*base, cls.risk_class, cls.criteria_sets);
  std::set<rl::CriterionClass> classes;
  for (const auto* r : sel.criteria) classes.insert(*r->criterion_class);
  c.expect(cls.criteria_sets == std::vector<std::string>{"low_risk_prostate"} && classes.size() == 5 &&
               sel.warnings.empty(),
           "criteria not loaded across all five classes");
  for (const std::string m : {"psa10", "gleason7", "t2b", "n1", "m1"}) {
    bool no_class = false;
    try {
      evaluation::classify(*base, fixture_facts(m));
    } catch (const evaluation::NoApplicableClass&) {
      no_class = true;
    }
    c.expect(no_class, m + " did not yield NoApplicableClass");
  }
  const double secs = seconds_since(start);
  c.expect(secs < 1.0, "took " + num(secs) + " s");
  return c.result("7 cases in " + num(std::round(secs * 1000) / 1000) + " s");
}

// 2. Every guideline threshold is written verbatim in the sample rulepack.
Outcome ac2_thresholds() {
  Checker c;
  std::string text;
  for (const auto& entry : fs::directory_iterator(sample_pack_dir())) {
    if (entry.path().extension() == ".mlm") text += read_text(entry.path());
  }
  for (const char* literal : {"75Gy", "79.2Gy", "44", "1.8Gy", "15%", "17%", "98%", "107%", "52.5Gy", "195cc", "1.4",
                              "0.98", "cold = 0", "\"3DCRT\"", "\"IMRT\"", "V(\"Bladder\", 80%, percent)",
                              "V(\"Bladder\", 65%, percent)", "V(\"PTV\", 100%, percent)",
                              "V(\"SmallBowel\", 45Gy, cc)"}) {
    c.expect(text.find(literal) != std::string::npos, std::string("literal ") + literal + " not found");
  }

  // The same numbers must reach the compiled programs with the right comparison.
  struct Expected {
    const char* criterion;
    Quantity constant;
    rl::CmpOp cmp;
  };
  const Expected expected[] = {
      {"total_dose", {75, Unit::Gy}, rl::CmpOp::Ge},
      {"total_dose", {79.2, Unit::Gy}, rl::CmpOp::Le},
      {"fractions", {44, Unit::None}, rl::CmpOp::Ge},
      {"dose_per_fraction", {1.8, Unit::Gy}, rl::CmpOp::Le},
      {"bladder_constraint", {15, Unit::Percent}, rl::CmpOp::Lt},
      {"bladder_constraint", {17, Unit::Percent}, rl::CmpOp::Lt},
      {"ptv_coverage", {98, Unit::Percent}, rl::CmpOp::Gt},
      {"ptv_max_point", {107, Unit::Percent}, rl::CmpOp::Lt},
      {"penile_bulb_mean", {52.5, Unit::Gy}, rl::CmpOp::Lt},
      {"small_bowel_volume", {195, Unit::Cc}, rl::CmpOp::Lt},
      {"conformity_index", {1.4, Unit::None}, rl::CmpOp::Lt},
      {"homogeneity_index", {0.98, Unit::None}, rl::CmpOp::Gt},
      {"cold_spots", {0, Unit::None}, rl::CmpOp::Eq},
  };
  const auto base = sample_rulebase();
  for (const auto& e : expected) {
    const auto* rule = base->find(e.criterion);
    bool found = false;
    if (rule) {
      const auto& prog = rule->instructions;
      for (std::size_t i = 0; i < prog.size() && !found; ++i) {
        if (prog[i].op != rl::OpCode::PushConst || !(prog[i].constant == Value{e.constant})) continue;
        for (std::size_t j = i + 1; j < prog.size(); ++j) {
          if (prog[j].op == rl::OpCode::Cmp) {
            found = prog[j].cmp == e.cmp;
            break;
          }
        }
      }
    }
    c.expect(found, std::string(e.criterion) + " lacks " + format_value(e.constant));
  }
  return c.result("all thresholds present");
}

// 3. End-to-end fixture plans through the CLI binary.
Outcome ac3_end_to_end() {
  Checker c;
  TempDir tmp;
  std::string timings;
  for (const auto& [name, overall, code] : {std::tuple{"pass", "Accredited", 0}, std::tuple{"fail", "Rejected", 3}}) {
    const auto out = tmp.path() / (std::string(name) + ".json");
    const auto start = Clock::now();
    const auto r = run_binary({"evaluate", "--facts", fixture_path("facts/facts_pass.json").string(), "--plan",
                               fixture_path(std::string("plans/plan_") + name + ".json").string(), "--rules",
                               sample_pack_dir().string(), "--answers", fixture_path("answers.json").string(),
                               "--out", out.string()});
    const double secs = seconds_since(start);
    timings += std::string(timings.empty() ? "" : ", ") + name + " " + num(std::round(secs * 1000) / 1000) + " s";
    c.expect(secs < 5.0, std::string(name) + " took " + num(secs) + " s");
    c.expect(r.exit_code == code, std::string(name) + " exit " + std::to_string(r.exit_code));
    const json report = load_json(out);
    c.expect(report.at("overall") == overall, std::string(name) + " overall " + report.at("overall").dump());

    // Reported metric values against the brute-force voxel scan.
    const RawPlan raw = raw_plan_from_json(load_json(fixture_path(std::string("plans/plan_") + name + ".json")));
    std::map<std::string, std::pair<std::string, double>> expected{
        {"conformity_index", {"ci_value", oracle::ci(raw)}},
        {"homogeneity_index", {"hi_value", oracle::hi(raw)}},
        {"cold_spots", {"cold", static_cast<double>(oracle::cold_spots(raw))}},
        {"ptv_max_point", {"max_dose", oracle::max(raw, "PTV")}},
        {"ptv_coverage", {"v100", oracle::v_percent(raw, "PTV", (100.0 / 100.0) * raw.rx)}},
        {"penile_bulb_mean", {"mean_dose", oracle::mean(raw, "PenileBulb")}},
        {"small_bowel_volume", {"v45", oracle::v_cc(raw, "Small Bowel", 45.0)}},
    };
    const double v80 = oracle::v_percent(raw, "Bladder", (80.0 / 100.0) * raw.rx);
    const double v65 = oracle::v_percent(raw, "Bladder", (65.0 / 100.0) * raw.rx);
    std::map<std::string, const json*> verdicts;
    for (const auto& [cls, list] : report.at("classes").items()) {
      for (const auto& v : list) verdicts[v.at("criterion").get<std::string>()] = &v;
    }
    auto evidence = [&](const std::string& criterion, const std::string& var) -> double {
      if (!verdicts.count(criterion)) return std::nan("");
      for (const auto& e : verdicts[criterion]->at("evidence")) {
        if (e.at("var") == var) return e.at("value").at("value").get<double>();
      }
      return std::nan("");
    };
    for (const auto& [criterion, ev] : expected) {
      const double got = evidence(criterion, ev.first);
      c.expect(got == ev.second, std::string(name) + " " + criterion + " " + num(got) + " vs oracle " + num(ev.second));
    }
    c.expect(evidence("bladder_constraint", "v80") == v80 && evidence("bladder_constraint", "v65") == v65,
             std::string(name) + " bladder V80/V65");

    // The failing plan is engineered to miss exactly CI (1.5) and cold spots (1).
    std::set<std::string> failed;
    for (const auto& [criterion, v] : verdicts) {
      if (v->at("outcome") == "Fail") failed.insert(criterion);
    }
    if (std::string(name) == "fail") {
      c.expect(oracle::ci(raw) == 1.5 && oracle::cold_spots(raw) == 1, "fail fixture is not CI 1.5 / 1 cold spot");
      c.expect(failed == std::set<std::string>{"cold_spots", "conformity_index"}, "unexpected failing criteria");
    } else {
      c.expect(failed.empty(), "pass fixture has failing criteria");
    }
  }
  return c.result("Accredited/0 and Rejected/3 (" + timings + ")");
}

// 4. Every metric equals the brute-force voxel computation on random grids.
Outcome ac4_dosimetry_oracle() {
  Checker c;
  Rng rng(20240404);
  const auto& onto = sample_ontology();
  std::size_t metrics = 0;
  for (int g = 0; g < 50; ++g) {
    const int max_dim = g < 5 ? 50 : (g % 3 == 0 ? 30 : 12);
    const json doc = random_plan_doc(rng, max_dim);
    const dm::PlanModel plan = facts::ingest_plan(doc, onto);
    const RawPlan raw = raw_plan_from_json(doc);
    const std::string tag = "grid " + std::to_string(g);
    std::vector<double> pct_levels{100.0, 95.0, 80.0, 65.0,
                                   std::round(std::uniform_real_distribution<double>(1, 120)(rng) * 10) / 10};
    std::vector<double> gy_levels{0.0, 45.0, raw.rx, std::uniform_real_distribution<double>(0, 90)(rng)};
    std::vector<double> d_levels{100.0, 95.0, 50.0, 5.0, std::uniform_real_distribution<double>(0.1, 100)(rng)};
    for (const auto& [name, voxels] : raw.structures) {
      for (double p : pct_levels) {
        const Quantity q{p, Unit::Percent};
        const double t = (p / 100.0) * raw.rx;
        c.expect(dm::v_metric(plan, name, q, VolumeOutput::Percent) == oracle::v_percent(raw, name, t),
                 tag + " V% " + name);
        c.expect(dm::v_metric(plan, name, q, VolumeOutput::Cc) == oracle::v_cc(raw, name, t), tag + " Vcc " + name);
        metrics += 2;
      }
      for (double gy : gy_levels) {
        const Quantity q{gy, Unit::Gy};
        c.expect(dm::v_metric(plan, name, q, VolumeOutput::Percent) == oracle::v_percent(raw, name, gy),
                 tag + " V(Gy) " + name);
        c.expect(dm::v_metric(plan, name, q, VolumeOutput::Cc) == oracle::v_cc(raw, name, gy),
                 tag + " V(Gy)cc " + name);
        metrics += 2;
      }
      for (double p : d_levels) {
        c.expect(dm::d_metric(plan, name, p) == oracle::d_metric(raw, name, p), tag + " D" + num(p) + " " + name);
        ++metrics;
      }
      c.expect(dm::mean_dose(plan, name) == oracle::mean(raw, name), tag + " mean " + name);
      c.expect(dm::max_point_dose(plan, name) == oracle::max(raw, name), tag + " max " + name);
      metrics += 2;
    }
    c.expect(dm::conformity_index(plan) == oracle::ci(raw), tag + " CI");
    const double d5 = oracle::d_metric(raw, "PTV", 5.0);
    if (d5 == 0.0) {
      bool threw = false;
      try {
        dm::homogeneity_index(plan);
      } catch (const dm::DivisionByZero&) {
        threw = true;
      }
      c.expect(threw, tag + " HI with D5 = 0");
    } else {
      c.expect(dm::homogeneity_index(plan) == oracle::hi(raw), tag + " HI");
    }
    c.expect(dm::count_cold_spots(plan) == oracle::cold_spots(raw), tag + " cold spots");
    c.expect(dm::count_hot_spots(plan) == oracle::hot_spots(raw), tag + " hot spots");
    metrics += 4;
  }
  return c.result(std::to_string(metrics) + " metric values on 50 grids, all exact");
}

// 5. Engine determinism, termination and agreement with the fixpoint oracle.
Outcome ac5_engine() {
  Checker c;
  Rng rng(5150);
  int exhaustive = 0;
  for (int b = 0; b < 200; ++b) {
    const bool small = b % 2 == 0;
    const std::size_t n = small ? std::uniform_int_distribution<std::size_t>(1, 6)(rng)
                                : std::uniform_int_distribution<std::size_t>(7, 200)(rng);
    const GenRulebase gen = random_rulebase(rng, n, 3);
    std::vector<rl::CompiledRule> rules;
    for (const auto& m : rl::parse_mlms(render_mlm(gen))) rules.push_back(rl::compile_rule(m));
    engine::WorkingMemory wm;
    for (const auto& [k, v] : gen.inputs) wm.assert_fact({k, v, engine::Provenance::input()});

    const auto result = engine::run_forward(rules, wm);
    const std::string trace = engine::trace_to_json(result.trace).dump();
    const std::string tag = "rulebase " + std::to_string(b);
    for (int p = 0; p < 3; ++p) {
      auto shuffled = rules;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      c.expect(engine::trace_to_json(engine::run_forward(shuffled, wm).trace).dump() == trace,
               tag + " trace depends on rule order");
    }
    c.expect(result.trace.size() <= rules.size(), tag + " fired more than once per rule");

    std::set<std::string> fired;
    for (const auto& t : result.trace) fired.insert(t.rule);
    std::vector<std::size_t> order(gen.rules.size());
    std::iota(order.begin(), order.end(), 0);
    c.expect(fired == fixpoint_fired(gen, order), tag + " fired set differs from fixpoint");
    if (gen.rules.size() <= 6) {
      const auto all = exhaustive_fixpoints(gen);
      c.expect(all.size() == 1 && *all.begin() == fired, tag + " exhaustive fixpoint mismatch");
      ++exhaustive;
    }
  }
  return c.result("200 rulebases, " + std::to_string(exhaustive) + " checked against all rule orders");
}

// 6. Stack machine against the tree interpreter.
Outcome ac6_compiler() {
  Checker c;
  Rng rng(60606);
  const auto& bindings = expr_bindings();
  std::vector<Env> envs;
  for (int e = 0; e < 100; ++e) envs.push_back(random_env(rng));
  std::vector<std::vector<Value>> slot_sets;
  for (const auto& env : envs) {
    std::vector<Value> slots;
    for (const auto& b : bindings) slots.push_back(env.at(b.var));
    slot_sets.push_back(std::move(slots));
  }
  int errors = 0;
  for (int t = 0; t < 1000; ++t) {
    const int depth = 1 + t % 6;
    const auto expr = random_expr(rng, depth);
    const auto program = rl::compile_expression(*expr, bindings);
    const std::string text = rl::format_expr(*expr);
    c.expect(rl::is_stack_balanced(program), "unbalanced program for " + text);
    for (std::size_t e = 0; e < envs.size(); ++e) {
      std::optional<bool> vm;
      try {
        vm = rl::execute(program, slot_sets[e]);
      } catch (const rl::EvalError&) {
        vm = std::nullopt;
      }
      const auto tree = tree_truth(*expr, envs[e]);
      if (!tree) ++errors;
      c.expect(vm == tree, "mismatch on " + text);
    }
  }
  return c.result("100000 evaluations agree (" + std::to_string(errors) + " type errors on both sides)");
}

// Brute-force completeness: every T/F vector tested against every column.
struct BruteResult {
  std::vector<std::string> missing;
  std::optional<std::pair<std::string, std::vector<std::size_t>>> overlap;
};

BruteResult brute_completeness(const rl::DecisionTable& table) {
  const std::size_t n = table.conditions.size();
  BruteResult out;
  std::string vec(n, 'T');
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (out.overlap) return;
    if (i == n) {
      std::vector<std::size_t> hits;
      for (std::size_t col = 0; col < table.columns.size(); ++col) {
        bool match = true;
        for (std::size_t k = 0; k < n; ++k) {
          const auto e = table.columns[col].conditions[k];
          if (e == rl::Entry::True && vec[k] != 'T') match = false;
          if (e == rl::Entry::False && vec[k] != 'F') match = false;
        }
        if (match) hits.push_back(col);
      }
      if (hits.size() > 1) out.overlap = std::pair{vec, hits};
      if (hits.empty()) out.missing.push_back(vec);
      return;
    }
    for (char v : {'T', 'F'}) {
      vec[i] = v;
      walk(i + 1);
    }
  };
  walk(0);
  return out;
}

// 7. Decision-table completeness against exhaustive enumeration.
Outcome ac7_tables() {
  Checker c;
  Rng rng(777);
  int overlaps = 0;
  int unbalanced = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    for (int t = 0; t < 100; ++t) {
      const auto table = random_table(rng, n, t % 2 == 0);
      const auto expected = brute_completeness(table);
      const std::string tag = "n=" + std::to_string(n) + " table " + std::to_string(t);
      try {
        const auto got = rl::check_completeness(table);
        c.expect(!expected.overlap, tag + " overlap not reported");
        c.expect(got.missing == expected.missing, tag + " missing vectors differ");
        c.expect(got.balanced == expected.missing.empty(), tag + " balanced flag");
        if (!got.balanced) ++unbalanced;
      } catch (const rl::OverlapError& e) {
        ++overlaps;
        c.expect(expected.overlap && expected.overlap->first == e.vector && expected.overlap->second == e.columns,
                 tag + " overlap " + e.vector + " not confirmed");
      }
    }
  }
  const auto balanced = rl::check_completeness(
      rl::parse_decision_table(read_text(fixture_path("tables/balanced.dtab")), "balanced.dtab"));
  c.expect(balanced.balanced && balanced.missing.empty(), "balanced.dtab not balanced");
  const auto missing = rl::check_completeness(
      rl::parse_decision_table(read_text(fixture_path("tables/unbalanced.dtab")), "unbalanced.dtab"));
  c.expect(!missing.balanced && missing.missing == std::vector<std::string>{"FF"}, "unbalanced.dtab not missing FF");
  return c.result("1000 tables (" + std::to_string(unbalanced) + " unbalanced, " + std::to_string(overlaps) +
                  " overlapping) plus fixtures");
}

std::vector<rl::RuleIssue> lint_dir(const fs::path& dir) {
  const auto pack = rl::load_rulepack_dir(dir);
  return rl::lint_rulepack(pack, rl::rulepack_ontology(pack));
}

std::size_t count_kind(const std::vector<rl::RuleIssue>& issues, rl::IssueKind kind) {
  return std::count_if(issues.begin(), issues.end(), [&](const auto& i) { return i.kind == kind; });
}

// 8. Validator findings on the lint fixtures and the sample rulepack.
Outcome ac8_validator() {
  Checker c;
  const auto dup = lint_dir(fixture_path("lint/duplicate"));
  c.expect(count_kind(dup, rl::IssueKind::DuplicateRule) == 1 && !rl::has_errors(dup),
           "duplicate fixture: " + std::to_string(count_kind(dup, rl::IssueKind::DuplicateRule)) + " DuplicateRule");
  const auto conflict = lint_dir(fixture_path("lint/conflict"));
  const std::size_t conflicts = count_kind(conflict, rl::IssueKind::ConflictingRule);
  c.expect(conflicts == 1, "conflict fixture: " + std::to_string(conflicts) + " ConflictingRule");
  for (const auto& i : conflict) {
    if (i.kind == rl::IssueKind::ConflictingRule) c.expect(i.severity == rl::Severity::Error, "conflict not an error");
  }
  const auto sample = lint_dir(sample_pack_dir());
  c.expect(!rl::has_errors(sample), "sample rulepack has lint errors");
  return c.result("1 DuplicateRule, 1 ConflictingRule, sample pack clean");
}

// 9. Reports are reproducible and identical through the CLI and HTTP.
Outcome ac9_reproducibility() {
  Checker c;
  const json facts_doc = load_json(fixture_path("facts/facts_pass.json"));
  const json plan_doc = load_json(fixture_path("plans/plan_pass.json"));
  const json answers_doc = load_json(fixture_path("answers.json"));
  const auto base = sample_rulebase();

  auto session_report = [&](const std::string& id) {
    evaluation::Session s(id, base, service::make_inputs(facts_doc, plan_doc, *base->ontology, std::nullopt));
    s.run();
    for (const auto& a : evaluation::answers_from_json(answers_doc)) s.answer_manual(a.criterion, a.answer, a.answered_by);
    return s.finalize().dump();
  };
  const std::string first = session_report("a1");
  c.expect(first == session_report("b2"), "two sessions produced different reports");

  TempDir tmp;
  const auto cli_out = tmp.path() / "report.json";
  const auto r = run_binary({"evaluate", "--facts", fixture_path("facts/facts_pass.json").string(), "--plan",
                             fixture_path("plans/plan_pass.json").string(), "--rules", sample_pack_dir().string(),
                             "--answers", fixture_path("answers.json").string(), "--out", cli_out.string()});
  c.expect(r.exit_code == 0, "CLI exit " + std::to_string(r.exit_code));
  const std::string cli_report = read_text(cli_out);
  c.expect(cli_report == first, "CLI report differs from session report");

  auto repo = std::make_shared<facts::MlmRepository>(tmp.path() / "repo");
  repo->store(rl::load_rulepack_dir(sample_pack_dir()));
  auto store = std::make_shared<service::SessionStore>(repo);
  service::HttpApi api(store);
  const int port = api.bind_any_port("127.0.0.1");
  c.expect(port > 0, "could not bind an HTTP port");
  if (port <= 0) return c.result("");
  std::thread server([&] { api.listen_after_bind(); });
  api.wait_until_ready();

  std::string http_report;
  {
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(30, 0);
    const json body{{"facts", facts_doc}, {"plan", plan_doc}, {"rulepack", "prostate_3dcrt"}};
    const auto created = client.Post("/sessions", body.dump(), "application/json");
    c.expect(created && created->status == 201, "POST /sessions failed");
    if (created && created->status == 201) {
      const std::string id = json::parse(created->body).at("session_id").get<std::string>();
      for (const auto& a : answers_doc) {
        const auto answered = client.Post("/sessions/" + id + "/answers", a.dump(), "application/json");
        c.expect(answered && answered->status == 200, "POST answers failed");
      }
      const auto fin = client.Post("/sessions/" + id + "/finalize", "", "application/json");
      c.expect(fin && fin->status == 200, "POST finalize failed");
      if (fin) http_report = fin->body;
    }
  }
  api.stop();
  server.join();
  c.expect(http_report == cli_report, "HTTP report differs from CLI report");
  return c.result("session, CLI and HTTP reports byte-identical (" + std::to_string(cli_report.size()) + " bytes)");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> checks[] = {
      {"AC1", ac1_classification}, {"AC2", ac2_thresholds}, {"AC3", ac3_end_to_end},
      {"AC4", ac4_dosimetry_oracle}, {"AC5", ac5_engine},   {"AC6", ac6_compiler},
      {"AC7", ac7_tables},         {"AC8", ac8_validator},  {"AC9", ac9_reproducibility},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << name << (o.pass ? " PASS " : " FAIL ") << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
