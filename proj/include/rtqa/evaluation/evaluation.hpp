#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtqa/dosimetry/plan.hpp"
#include "rtqa/engine/engine.hpp"
#include "rtqa/rulelang/rulepack.hpp"

namespace rtqa::evaluation {

using rulelang::CompiledRule;
using rulelang::CompiledRulebase;
using rulelang::CriterionClass;

inline constexpr std::string_view kRiskClassKey = "risk.class";

class NoApplicableClass : public Error {
 public:
  using Error::Error;
};

class AmbiguousClass : public Error {
 public:
  using Error::Error;
};

class NotPending : public Error {
 public:
  using Error::Error;
};

class ConflictingAnswer : public Error {
 public:
  using Error::Error;
};

class UnknownCriterion : public Error {
 public:
  using Error::Error;
};

class PendingManualAnswers : public Error {
 public:
  explicit PendingManualAnswers(std::vector<std::string> criteria);

  std::vector<std::string> criteria;
};

// Operation not allowed in the session's current status.
class InvalidSessionState : public Error {
 public:
  using Error::Error;
};

enum class Outcome { Pass, Fail, ManualPending, ManualConfirmed, MissingData };
enum class Answer { Pass, Fail };

std::string_view to_string(Outcome o);
std::string_view to_string(Answer a);
std::optional<Answer> parse_answer(std::string_view text);

struct Evidence {
  std::string var;
  FactRequest request;
  Value value;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct Verdict {
  std::string criterion;
  std::string title;
  CriterionClass criterion_class = CriterionClass::Precondition;
  rulelang::EvalMode mode = rulelang::EvalMode::Automatic;
  Outcome outcome = Outcome::MissingData;
  std::string message;               // guideline text / manual question
  std::optional<Answer> answer;      // ManualConfirmed
  std::string answered_by;           // ManualConfirmed
  std::vector<std::string> missing;  // MissingData: fact keys or structures
  std::vector<Evidence> evidence;    // automatic criteria, binding order
  std::string note;                  // evaluation error detail, if any

  bool passed() const;
  bool failed() const;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

json verdict_to_json(const Verdict& v);

// Classification result: the asserted risk class and how it was reached.
struct Classification {
  std::string risk_class;
  std::vector<std::string> criteria_sets;  // from load_criteria actions
  std::vector<engine::TraceRecord> trace;
  engine::WorkingMemory wm;  // fixpoint
};

// Forward chaining over the classification rules. Throws NoApplicableClass
// or AmbiguousClass.
Classification classify(const CompiledRulebase& rulebase, const engine::WorkingMemory& facts);

struct CriteriaSelection {
  std::vector<const CompiledRule*> criteria;  // ordered by (class, name)
  std::vector<std::string> warnings;
};

// Criteria whose applies_to is the risk class, one of the loaded criteria
// sets, or the wildcard; optionally limited to some classes.
CriteriaSelection load_criteria(const CompiledRulebase& rulebase, const std::string& risk_class,
                                const std::vector<std::string>& criteria_sets,
                                const std::optional<std::set<CriterionClass>>& class_filter = std::nullopt);

// Never throws for data problems: missing facts give MissingData, type
// errors give Fail with a note.
Verdict evaluate_criterion(const CompiledRule& criterion, const engine::WorkingMemory& wm,
                           const dosimetry::PlanModel* plan);

enum class SessionStatus { Classifying, Evaluating, AwaitingManual, Finalized };
enum class Overall { Accredited, Rejected, Incomplete };

std::string_view to_string(SessionStatus s);
std::string_view to_string(Overall o);

struct ClassTally {
  int pass = 0;
  int fail = 0;
  int manual_pending = 0;
  int missing = 0;

  int total() const { return pass + fail + manual_pending + missing; }
  friend bool operator==(const ClassTally&, const ClassTally&) = default;
};

// Accredited: at least one criterion and no Fail, MissingData or pending
// answer. Rejected: any Fail. Otherwise Incomplete.
Overall overall_outcome(const std::vector<Verdict>& verdicts);

std::map<CriterionClass, ClassTally> tally(const std::vector<Verdict>& verdicts);

struct Report {
  std::string rulepack_id;
  std::string rulepack_version;
  std::string rulepack_hash;
  std::string risk_class;
  std::vector<std::string> criteria_sets;
  std::optional<std::set<CriterionClass>> class_filter;
  Overall overall = Overall::Incomplete;
  std::map<CriterionClass, ClassTally> tallies;
  std::vector<Verdict> verdicts;  // ordered by (class, name)
  std::vector<engine::TraceRecord> trace;
  std::vector<std::string> warnings;

  // Deterministic; carries no session id or timestamps.
  json to_json() const;
  std::string dump() const;
};

// Parses "precondition,dose" style lists. Throws Error.
std::set<CriterionClass> parse_class_filter(std::string_view text);

struct SessionInputs {
  engine::WorkingMemory facts;
  std::optional<dosimetry::PlanModel> plan;
  std::optional<std::set<CriterionClass>> class_filter;
};

// One evaluation of one plan. Not thread-safe; callers serialize access.
class Session {
 public:
  Session(std::string id, std::shared_ptr<const CompiledRulebase> rulebase, SessionInputs inputs);

  // Classifying -> Evaluating/AwaitingManual. Classification errors leave
  // the session in Classifying.
  void run();

  const Verdict& answer_manual(const std::string& criterion, Answer answer, const std::string& answered_by);

  // Throws PendingManualAnswers. Repeated calls return the same report.
  const Report& finalize();

  const std::string& id() const { return id_; }
  SessionStatus status() const { return status_; }
  const std::string& risk_class() const { return classification_.risk_class; }
  const Classification& classification() const { return classification_; }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const CompiledRulebase& rulebase() const { return *rulebase_; }
  const std::optional<Report>& report() const { return report_; }
  std::vector<std::string> pending() const;

  json state_json() const;

 private:
  Verdict& find_verdict(const std::string& criterion);

  std::string id_;
  std::shared_ptr<const CompiledRulebase> rulebase_;
  SessionInputs inputs_;
  SessionStatus status_ = SessionStatus::Classifying;
  Classification classification_;
  std::vector<Verdict> verdicts_;
  std::vector<std::string> warnings_;
  std::optional<Report> report_;
};

// answers.json: [{criterion, answer: "Pass"|"Fail", answered_by}]
struct ManualAnswer {
  std::string criterion;
  Answer answer = Answer::Pass;
  std::string answered_by;
};

std::vector<ManualAnswer> answers_from_json(const json& doc);

}  // namespace rtqa::evaluation
