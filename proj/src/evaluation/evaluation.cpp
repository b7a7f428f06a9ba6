#include "rtqa/evaluation/evaluation.hpp"

#include <algorithm>

#include "rtqa/facts/facts_io.hpp"
#include "rtqa/facts/provider.hpp"

namespace rtqa::evaluation {

using rulelang::EvalMode;

PendingManualAnswers::PendingManualAnswers(std::vector<std::string> names)
    : Error([&] {
        std::string msg = "manual criteria still pending:";
        for (const auto& n : names) msg += " " + n;
        return msg;
      }()),
      criteria(std::move(names)) {}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "Pass";
    case Outcome::Fail: return "Fail";
    case Outcome::ManualPending: return "ManualPending";
    case Outcome::ManualConfirmed: return "ManualConfirmed";
    case Outcome::MissingData: return "MissingData";
  }
  return "MissingData";
}

std::string_view to_string(Answer a) { return a == Answer::Pass ? "Pass" : "Fail"; }

std::optional<Answer> parse_answer(std::string_view text) {
  const std::string up = to_upper(text);
  if (up == "PASS") return Answer::Pass;
  if (up == "FAIL") return Answer::Fail;
  return std::nullopt;
}

std::string_view to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::Classifying: return "Classifying";
    case SessionStatus::Evaluating: return "Evaluating";
    case SessionStatus::AwaitingManual: return "AwaitingManual";
    case SessionStatus::Finalized: return "Finalized";
  }
  return "Classifying";
}

std::string_view to_string(Overall o) {
  switch (o) {
    case Overall::Accredited: return "Accredited";
    case Overall::Rejected: return "Rejected";
    case Overall::Incomplete: return "Incomplete";
  }
  return "Incomplete";
}

bool Verdict::passed() const {
  return outcome == Outcome::Pass || (outcome == Outcome::ManualConfirmed && answer == Answer::Pass);
}

bool Verdict::failed() const {
  return outcome == Outcome::Fail || (outcome == Outcome::ManualConfirmed && answer == Answer::Fail);
}

json verdict_to_json(const Verdict& v) {
  json j;
  j["criterion"] = v.criterion;
  j["title"] = v.title;
  j["class"] = rulelang::to_string(v.criterion_class);
  j["mode"] = rulelang::to_string(v.mode);
  j["outcome"] = to_string(v.outcome);
  j["message"] = v.message;
  if (v.answer) {
    j["answer"] = to_string(*v.answer);
    j["answered_by"] = v.answered_by;
  }
  if (!v.missing.empty()) j["missing"] = v.missing;
  json evidence = json::array();
  for (const auto& e : v.evidence) {
    evidence.push_back({{"var", e.var}, {"request", format_request(e.request)}, {"value", value_to_json(e.value)}});
  }
  j["evidence"] = std::move(evidence);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Classification classify(const CompiledRulebase& rulebase, const engine::WorkingMemory& facts) {
  Classification out;
  engine::ForwardResult run;
  try {
    run = engine::run_forward(rulebase.classification_rules(), facts);
  } catch (const engine::ContradictoryAssertion& e) {
    throw AmbiguousClass("classification is ambiguous: " + std::string(e.what()));
  }
  const engine::Fact* cls = run.wm.find(kRiskClassKey);
  if (!cls) throw NoApplicableClass("no classification rule applies to the patient facts");
  if (const auto* s = std::get_if<std::string>(&cls->value)) {
    out.risk_class = *s;
  } else {
    out.risk_class = format_value(cls->value);
  }
  out.criteria_sets = run.loaded_criteria;
  out.trace = std::move(run.trace);
  out.wm = std::move(run.wm);
  return out;
}

CriteriaSelection load_criteria(const CompiledRulebase& rulebase, const std::string& risk_class,
                                const std::vector<std::string>& criteria_sets,
                                const std::optional<std::set<CriterionClass>>& class_filter) {
  std::set<std::string> targets(criteria_sets.begin(), criteria_sets.end());
  targets.insert(risk_class);
  CriteriaSelection out;
  bool specific = false;
  for (const CompiledRule* c : rulebase.criteria()) {
    const bool wildcard = c->applies_to == "*";
    if (!wildcard && !targets.count(c->applies_to)) continue;
    specific = specific || !wildcard;
    if (class_filter && !class_filter->count(*c->criterion_class)) continue;
    out.criteria.push_back(c);
  }
  std::stable_sort(out.criteria.begin(), out.criteria.end(), [](const CompiledRule* a, const CompiledRule* b) {
    if (*a->criterion_class != *b->criterion_class) return *a->criterion_class < *b->criterion_class;
    return a->name < b->name;
  });
  if (!specific) out.warnings.push_back("EmptyCriteriaSet: no criteria target risk class '" + risk_class + "'");
  return out;
}

Verdict evaluate_criterion(const CompiledRule& criterion, const engine::WorkingMemory& wm,
                           const dosimetry::PlanModel* plan) {
  Verdict v;
  v.criterion = criterion.name;
  v.title = criterion.title;
  v.criterion_class = criterion.criterion_class.value_or(CriterionClass::Precondition);
  v.mode = criterion.mode;
  v.message = criterion.message;
  if (criterion.mode == EvalMode::Manual) {
    v.outcome = Outcome::ManualPending;
    return v;
  }
  std::vector<Value> slots;
  for (const auto& b : criterion.data_bindings) {
    auto answer = facts::provide_fact(b.source, wm, plan);
    if (const auto* u = std::get_if<facts::Unavailable>(&answer)) {
      for (const auto& m : u->missing) {
        if (std::find(v.missing.begin(), v.missing.end(), m) == v.missing.end()) v.missing.push_back(m);
      }
      continue;
    }
    const Value& value = std::get<Value>(answer);
    slots.push_back(value);
    v.evidence.push_back({b.var, b.source, value});
  }
  if (!v.missing.empty()) {
    v.outcome = Outcome::MissingData;
    return v;
  }
  try {
    v.outcome = criterion.evaluate(slots) ? Outcome::Pass : Outcome::Fail;
  } catch (const rulelang::EvalError& e) {
    v.outcome = Outcome::Fail;
    v.note = e.what();
  }
  return v;
}

Overall overall_outcome(const std::vector<Verdict>& verdicts) {
  bool incomplete = verdicts.empty();
  for (const auto& v : verdicts) {
    if (v.failed()) return Overall::Rejected;
    if (!v.passed()) incomplete = true;
  }
  return incomplete ? Overall::Incomplete : Overall::Accredited;
}

std::map<CriterionClass, ClassTally> tally(const std::vector<Verdict>& verdicts) {
  std::map<CriterionClass, ClassTally> out;
  for (auto c : rulelang::kAllClasses) out[c] = {};
  for (const auto& v : verdicts) {
    ClassTally& t = out[v.criterion_class];
    if (v.passed()) {
      ++t.pass;
    } else if (v.failed()) {
      ++t.fail;
    } else if (v.outcome == Outcome::ManualPending) {
      ++t.manual_pending;
    } else {
      ++t.missing;
    }
  }
  return out;
}

json Report::to_json() const {
  json j;
  j["rulepack"] = {{"id", rulepack_id}, {"version", rulepack_version}, {"content_hash", rulepack_hash}};
  j["risk_class"] = risk_class;
  j["criteria_sets"] = criteria_sets;
  if (class_filter) {
    json f = json::array();
    for (auto c : *class_filter) f.push_back(rulelang::to_string(c));
    j["class_filter"] = std::move(f);
  } else {
    j["class_filter"] = nullptr;
  }
  j["overall"] = evaluation::to_string(overall);
  json tally_json = json::object();
  json classes = json::object();
  for (auto c : rulelang::kAllClasses) {
    const std::string name(rulelang::to_string(c));
    const auto it = tallies.find(c);
    const ClassTally t = it == tallies.end() ? ClassTally{} : it->second;
    tally_json[name] = {{"pass", t.pass}, {"fail", t.fail}, {"manual_pending", t.manual_pending}, {"missing", t.missing}};
    json list = json::array();
    for (const auto& v : verdicts) {
      if (v.criterion_class == c) list.push_back(verdict_to_json(v));
    }
    classes[name] = std::move(list);
  }
  j["tallies"] = std::move(tally_json);
  j["classes"] = std::move(classes);
  j["warnings"] = warnings;
  j["trace"] = engine::trace_to_json(trace);
  return j;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

std::set<CriterionClass> parse_class_filter(std::string_view text) {
  std::set<CriterionClass> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string item = to_lower(text.substr(start, end - start));
    auto c = rulelang::parse_criterion_class(item);
    if (!c) throw Error("unknown criterion class '" + item + "'");
    out.insert(*c);
    start = end + 1;
  }
  return out;
}

Session::Session(std::string id, std::shared_ptr<const CompiledRulebase> rulebase, SessionInputs inputs)
    : id_(std::move(id)), rulebase_(std::move(rulebase)), inputs_(std::move(inputs)) {}

void Session::run() {
  if (status_ != SessionStatus::Classifying) throw InvalidSessionState("session " + id_ + " has already run");
  classification_ = classify(*rulebase_, inputs_.facts);
  auto selection = load_criteria(*rulebase_, classification_.risk_class, classification_.criteria_sets,
                                 inputs_.class_filter);
  warnings_ = std::move(selection.warnings);
  const dosimetry::PlanModel* plan = inputs_.plan ? &*inputs_.plan : nullptr;
  for (const CompiledRule* c : selection.criteria) {
    verdicts_.push_back(evaluate_criterion(*c, classification_.wm, plan));
  }
  status_ = pending().empty() ? SessionStatus::Evaluating : SessionStatus::AwaitingManual;
}

std::vector<std::string> Session::pending() const {
  std::vector<std::string> out;
  for (const auto& v : verdicts_) {
    if (v.outcome == Outcome::ManualPending) out.push_back(v.criterion);
  }
  return out;
}

Verdict& Session::find_verdict(const std::string& criterion) {
  for (auto& v : verdicts_) {
    if (v.criterion == criterion) return v;
  }
  throw UnknownCriterion("criterion '" + criterion + "' is not part of this session");
}

const Verdict& Session::answer_manual(const std::string& criterion, Answer answer, const std::string& answered_by) {
  if (status_ == SessionStatus::Finalized) throw InvalidSessionState("session " + id_ + " is finalized");
  if (status_ == SessionStatus::Classifying) throw InvalidSessionState("session " + id_ + " has not been evaluated");
  Verdict& v = find_verdict(criterion);
  if (v.outcome == Outcome::ManualConfirmed) {
    if (v.answer == answer) return v;
    throw ConflictingAnswer("criterion '" + criterion + "' was already answered " +
                            std::string(to_string(*v.answer)));
  }
  if (v.outcome != Outcome::ManualPending) {
    throw NotPending("criterion '" + criterion + "' is not awaiting a manual answer");
  }
  v.outcome = Outcome::ManualConfirmed;
  v.answer = answer;
  v.answered_by = answered_by;
  if (pending().empty()) status_ = SessionStatus::Evaluating;
  return v;
}

const Report& Session::finalize() {
  if (report_) return *report_;
  if (status_ == SessionStatus::Classifying) throw InvalidSessionState("session " + id_ + " has not been evaluated");
  if (auto p = pending(); !p.empty()) throw PendingManualAnswers(std::move(p));
  Report r;
  r.rulepack_id = rulebase_->id;
  r.rulepack_version = rulebase_->version;
  r.rulepack_hash = rulebase_->content_hash;
  r.risk_class = classification_.risk_class;
  r.criteria_sets = classification_.criteria_sets;
  r.class_filter = inputs_.class_filter;
  r.overall = overall_outcome(verdicts_);
  r.tallies = tally(verdicts_);
  r.verdicts = verdicts_;
  r.trace = classification_.trace;
  r.warnings = warnings_;
  report_ = std::move(r);
  status_ = SessionStatus::Finalized;
  return *report_;
}

json Session::state_json() const {
  json j;
  j["session_id"] = id_;
  j["status"] = to_string(status_);
  j["rulepack"] = {{"id", rulebase_->id}, {"version", rulebase_->version}, {"content_hash", rulebase_->content_hash}};
  j["risk_class"] = classification_.risk_class;
  j["criteria_sets"] = classification_.criteria_sets;
  json criteria = json::object();
  for (auto c : rulelang::kAllClasses) {
    json names = json::array();
    for (const auto& v : verdicts_) {
      if (v.criterion_class == c) names.push_back(v.criterion);
    }
    criteria[std::string(rulelang::to_string(c))] = std::move(names);
  }
  j["criteria"] = std::move(criteria);
  json verdicts = json::array();
  for (const auto& v : verdicts_) verdicts.push_back(verdict_to_json(v));
  j["verdicts"] = std::move(verdicts);
  j["pending"] = pending();
  j["warnings"] = warnings_;
  j["report"] = report_ ? report_->to_json() : json(nullptr);
  return j;
}

std::vector<ManualAnswer> answers_from_json(const json& doc) {
  if (!doc.is_array()) throw facts::SchemaError("", "answers must be a JSON array");
  std::vector<ManualAnswer> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& a = doc[i];
    const std::string at = "/" + std::to_string(i);
    if (!a.is_object() || !a.contains("criterion") || !a.at("criterion").is_string()) {
      throw facts::SchemaError(at + "/criterion", "required string");
    }
    if (!a.contains("answer") || !a.at("answer").is_string()) throw facts::SchemaError(at + "/answer", "required string");
    auto answer = parse_answer(a.at("answer").get<std::string>());
    if (!answer) throw facts::SchemaError(at + "/answer", "must be \"Pass\" or \"Fail\"");
    std::string by;
    if (a.contains("answered_by")) {
      if (!a.at("answered_by").is_string()) throw facts::SchemaError(at + "/answered_by", "must be a string");
      by = a.at("answered_by").get<std::string>();
    }
    out.push_back({a.at("criterion").get<std::string>(), *answer, by});
  }
  return out;
}

}  // namespace rtqa::evaluation
