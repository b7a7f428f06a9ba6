#include "rtqa/service/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "rtqa/evaluation/evaluation.hpp"
#include "rtqa/facts/plan_io.hpp"
#include "rtqa/facts/repository.hpp"
#include "rtqa/rulelang/decision_table.hpp"
#include "rtqa/rulelang/parser.hpp"
#include "rtqa/service/http_api.hpp"
#include "rtqa/service/session_store.hpp"

namespace rtqa::cli {

namespace fs = std::filesystem;
using evaluation::Overall;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

ontology::Ontology pick_ontology(const rulelang::Rulepack& pack, const std::string& override_path) {
  if (!override_path.empty()) return ontology::Ontology::load(override_path);
  return rulelang::rulepack_ontology(pack);
}

std::shared_ptr<const rulelang::CompiledRulebase> compile_pack(const std::string& dir, const std::string& ontology_path) {
  auto pack = rulelang::load_rulepack_dir(dir);
  return rulelang::compile_rulebase(pack, pick_ontology(pack, ontology_path));
}

void print_issues(std::ostream& out, const std::vector<rulelang::RuleIssue>& issues) {
  int errors = 0, warnings = 0;
  for (const auto& i : issues) {
    out << rulelang::format_issue(i) << '\n';
    (i.severity == rulelang::Severity::Error ? errors : warnings)++;
  }
  out << errors << " error(s), " << warnings << " warning(s)\n";
}

void print_trace(std::ostream& out, const std::vector<engine::TraceRecord>& trace) {
  for (const auto& r : trace) {
    out << "  [" << r.cycle << "] " << r.rule;
    for (const auto& f : r.asserted) out << "  assert " << f.key << " = " << format_value(f.value);
    for (const auto& c : r.criteria_loaded) out << "  load_criteria " << c;
    out << '\n';
  }
}

int cmd_lint(const std::string& dir, const std::string& ontology_path, std::ostream& out) {
  auto pack = rulelang::load_rulepack_dir(dir);
  auto issues = rulelang::lint_rulepack(pack, pick_ontology(pack, ontology_path));
  print_issues(out, issues);
  return rulelang::has_errors(issues) ? kValidationErrors : kOk;
}

int cmd_compile(const std::string& dir, const std::string& ontology_path, std::ostream& out) {
  auto base = compile_pack(dir, ontology_path);
  out << "rulepack " << base->id << " " << base->version << " " << base->content_hash << '\n';
  for (const auto& rule : base->rules) out << '\n' << rulelang::disassemble(rule);
  return kOk;
}

int cmd_table_check(const std::string& file, std::ostream& out) {
  const auto table = rulelang::parse_decision_table(read_text(file), file);
  out << table.conditions.size() << " condition(s), " << table.columns.size() << " column(s)\n";
  try {
    const auto result = rulelang::check_completeness(table);
    if (result.balanced) {
      out << "balanced\n";
      return kOk;
    }
    out << "missing:";
    for (const auto& m : result.missing) out << ' ' << m;
    out << '\n';
    return kValidationErrors;
  } catch (const rulelang::OverlapError& e) {
    out << e.what() << '\n';
    return kValidationErrors;
  }
}

int cmd_classify(const std::string& facts_path, const std::string& dir, const std::string& ontology_path,
                 std::ostream& out) {
  auto base = compile_pack(dir, ontology_path);
  auto wm = facts::load_facts(facts_path);
  const auto result = evaluation::classify(*base, wm);
  out << "risk class: " << result.risk_class << '\n';
  out << "criteria sets:";
  for (const auto& s : result.criteria_sets) out << ' ' << s;
  out << "\ntrace:\n";
  print_trace(out, result.trace);
  return kOk;
}

int cmd_query(const std::string& facts_path, const std::string& dir, const std::string& goal,
              const std::string& value_text, std::ostream& out) {
  auto base = compile_pack(dir, {});
  auto wm = facts::load_facts(facts_path);
  const auto expr = rulelang::parse_expression(value_text);
  const auto* lit = std::get_if<rulelang::Literal>(&expr->node);
  if (!lit) throw facts::SchemaError("/value", "goal value must be a literal");
  std::vector<rulelang::CompiledRule> rules = base->classification_rules();
  const auto result = engine::query_backward(rules, wm, goal, lit->value);
  out << engine::to_string(result.status) << '\n';
  if (!result.needed.empty()) {
    out << "needed:";
    for (const auto& n : result.needed) out << ' ' << n;
    out << '\n';
  }
  if (!result.proof.empty()) {
    out << "proof:";
    for (const auto& p : result.proof) out << ' ' << p;
    out << '\n';
  }
  return kOk;
}

struct EvaluateOptions {
  std::string facts;
  std::string plan;
  std::string rules;
  std::string answers;
  bool interactive = false;
  std::string class_filter;
  std::string out;
  std::string ontology;
};

bool ask_manual(evaluation::Session& session, std::istream& in, std::ostream& out) {
  for (const auto& name : session.pending()) {
    const auto it = std::find_if(session.verdicts().begin(), session.verdicts().end(),
                                 [&](const evaluation::Verdict& v) { return v.criterion == name; });
    out << "[" << rulelang::to_string(it->criterion_class) << "] " << name << ": " << it->message << '\n';
    for (;;) {
      out << "answer (pass/fail): " << std::flush;
      std::string line;
      if (!std::getline(in, line)) return false;
      auto answer = evaluation::parse_answer(line);
      if (answer) {
        session.answer_manual(name, *answer, "interactive");
        break;
      }
      out << "please type pass or fail\n";
    }
  }
  return true;
}

int cmd_evaluate(const EvaluateOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  auto base = compile_pack(o.rules, o.ontology);
  const json facts_doc = facts::read_json_file(o.facts);
  const json plan_doc = o.plan.empty() ? json(nullptr) : facts::read_json_file(o.plan);
  std::optional<std::string> filter;
  if (!o.class_filter.empty()) filter = o.class_filter;
  auto inputs = service::make_inputs(facts_doc, plan_doc, *base->ontology, filter);
  const std::string id = hex64(fnv1a64(facts_doc.dump() + plan_doc.dump() + base->content_hash));
  evaluation::Session session(id, base, std::move(inputs));
  session.run();
  out << "risk class: " << session.risk_class() << '\n';
  for (const auto& w : session.warnings()) err << "warning: " << w << '\n';

  if (!o.answers.empty()) {
    for (const auto& a : evaluation::answers_from_json(facts::read_json_file(o.answers))) {
      session.answer_manual(a.criterion, a.answer, a.answered_by);
    }
  } else if (o.interactive) {
    if (!ask_manual(session, in, out)) err << "input ended before all questions were answered\n";
  }
  if (auto pending = session.pending(); !pending.empty()) {
    err << "unanswered manual criteria:";
    for (const auto& p : pending) err << ' ' << p;
    err << "\n(use --answers FILE or --interactive)\n";
    return kIncomplete;
  }

  const auto& report = session.finalize();
  if (!o.out.empty()) {
    write_text(o.out, report.dump());
  } else {
    out << report.dump();
  }
  for (const auto& [cls, t] : report.tallies) {
    out << "  " << rulelang::to_string(cls) << ": pass " << t.pass << ", fail " << t.fail << ", missing " << t.missing
        << '\n';
  }
  out << "overall: " << evaluation::to_string(report.overall) << '\n';
  switch (report.overall) {
    case Overall::Accredited: return kOk;
    case Overall::Rejected: return kRejected;
    case Overall::Incomplete: return kIncomplete;
  }
  return kIncomplete;
}

int cmd_store(const std::string& dir, const std::string& repo, std::ostream& out) {
  facts::MlmRepository repository(repo);
  const auto entry = repository.store(rulelang::load_rulepack_dir(dir));
  out << "stored " << entry.id << " " << entry.version << " " << entry.content_hash << '\n';
  return kOk;
}

std::atomic<service::HttpApi*> g_server{nullptr};

extern "C" void stop_server(int) {
  if (auto* s = g_server.load()) s->stop();
}

int cmd_serve(const std::string& host, int port, const std::string& repo, const std::string& snapshots,
              const std::vector<std::string>& imports, std::ostream& out, std::ostream& err) {
  auto repository = std::make_shared<facts::MlmRepository>(repo);
  for (const auto& dir : imports) {
    const auto e = repository->store(rulelang::load_rulepack_dir(dir));
    out << "imported " << e.id << " " << e.version << '\n';
  }
  std::optional<fs::path> snapshot_dir;
  if (!snapshots.empty()) snapshot_dir = snapshots;
  auto store = std::make_shared<service::SessionStore>(repository, snapshot_dir);
  if (const auto n = store->restore_snapshots(); n > 0) out << "restored " << n << " session(s)\n";
  service::HttpApi api(store);
  g_server = &api;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  out << "listening on " << host << ":" << port << std::endl;
  const bool ok = api.listen(host, port);
  g_server = nullptr;
  if (!ok) {
    err << "cannot listen on " << host << ":" << port << '\n';
    return kIoOrSchema;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rule-based radiotherapy plan evaluation", "rtqa"};
  app.require_subcommand(1);
  std::string ontology_path;

  std::string lint_dir;
  auto* lint = app.add_subcommand("lint", "Validate a rulepack and print its issues");
  lint->add_option("rulepack", lint_dir, "Rulepack directory")->required();
  lint->add_option("--ontology", ontology_path, "Ontology file overriding the pack's own");

  std::string compile_dir;
  auto* compile = app.add_subcommand("compile", "Print the compiled instruction listing");
  compile->add_option("rulepack", compile_dir, "Rulepack directory")->required();
  compile->add_option("--ontology", ontology_path, "Ontology file overriding the pack's own");

  std::string table_file;
  auto* table = app.add_subcommand("table", "Decision table tools");
  table->require_subcommand(1);
  auto* check = table->add_subcommand("check", "Report completeness of a decision table");
  check->add_option("file", table_file, "Decision table file")->required();

  std::string facts_path, rules_dir;
  auto* classify = app.add_subcommand("classify", "Run classification over patient facts");
  classify->add_option("--facts", facts_path, "facts.json")->required();
  classify->add_option("--rules", rules_dir, "Rulepack directory")->required();
  classify->add_option("--ontology", ontology_path, "Ontology file overriding the pack's own");

  std::string goal, goal_value;
  auto* query = app.add_subcommand("query", "Goal-driven query over the classification rules");
  query->add_option("--facts", facts_path, "facts.json")->required();
  query->add_option("--rules", rules_dir, "Rulepack directory")->required();
  query->add_option("--goal", goal, "Fact key to prove")->required();
  query->add_option("--value", goal_value, "Literal value, e.g. '\"low_risk_prostate\"'")->required();

  EvaluateOptions eo;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a plan and write the accreditation report");
  evaluate->add_option("--facts", eo.facts, "facts.json")->required();
  evaluate->add_option("--plan", eo.plan, "plan.json");
  evaluate->add_option("--rules", eo.rules, "Rulepack directory")->required();
  auto* answers_opt = evaluate->add_option("--answers", eo.answers, "answers.json for manual criteria");
  evaluate->add_flag("--interactive", eo.interactive, "Ask manual questions on the terminal")->excludes(answers_opt);
  evaluate->add_option("--class-filter", eo.class_filter,
                       "Comma-separated classes: precondition,convention,structure,dose,quality");
  evaluate->add_option("--out", eo.out, "Report file (stdout when omitted)");
  evaluate->add_option("--ontology", eo.ontology, "Ontology file overriding the pack's own");

  std::string store_dir, repo_dir = "repo";
  auto* store = app.add_subcommand("store", "Validate a rulepack and add it to the repository");
  store->add_option("rulepack", store_dir, "Rulepack directory")->required();
  store->add_option("--rulepack-dir", repo_dir, "Repository directory")->envname("RTQA_RULEPACK_DIR");

  std::string host = "127.0.0.1", snapshot_dir;
  int port = 8080;
  std::vector<std::string> imports;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "Port")->envname("RTQA_PORT");
  serve->add_option("--host", host, "Bind address")->envname("RTQA_HOST");
  serve->add_option("--rulepack-dir", repo_dir, "Repository directory")->envname("RTQA_RULEPACK_DIR");
  serve->add_option("--snapshot-dir", snapshot_dir, "Session snapshot directory")->envname("RTQA_SNAPSHOT_DIR");
  serve->add_option("--import", imports, "Rulepack directories to store before serving");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("rtqa");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoOrSchema;
  }

  try {
    if (*lint) return cmd_lint(lint_dir, ontology_path, out);
    if (*compile) return cmd_compile(compile_dir, ontology_path, out);
    if (*check) return cmd_table_check(table_file, out);
    if (*classify) return cmd_classify(facts_path, rules_dir, ontology_path, out);
    if (*query) return cmd_query(facts_path, rules_dir, goal, goal_value, out);
    if (*evaluate) return cmd_evaluate(eo, in, out, err);
    if (*store) return cmd_store(store_dir, repo_dir, out);
    if (*serve) return cmd_serve(host, port, repo_dir, snapshot_dir, imports, out, err);
  } catch (const rulelang::ValidationFailed& e) {
    print_issues(err, e.issues);
    return kValidationErrors;
  } catch (const facts::ValidationGate& e) {
    print_issues(err, e.issues);
    return kValidationErrors;
  } catch (const rulelang::RuleError& e) {
    err << rulelang::format_issue(e.issue()) << '\n';
    return kValidationErrors;
  } catch (const evaluation::NoApplicableClass& e) {
    err << "NoApplicableClass: " << e.what() << '\n';
    return kRejected;
  } catch (const evaluation::AmbiguousClass& e) {
    err << "AmbiguousClass: " << e.what() << '\n';
    return kRejected;
  } catch (const evaluation::UnknownCriterion& e) {
    err << e.what() << '\n';
    return kIoOrSchema;
  } catch (const evaluation::ConflictingAnswer& e) {
    err << "ConflictingAnswer: " << e.what() << '\n';
    return kIoOrSchema;
  } catch (const evaluation::NotPending& e) {
    err << "NotPending: " << e.what() << '\n';
    return kIoOrSchema;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoOrSchema;
  }
  return kIoOrSchema;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace rtqa::cli
