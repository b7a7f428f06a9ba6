#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtqa/rulelang/compiler.hpp"
#include "rtqa/value.hpp"

namespace rtqa::engine {

using rulelang::CompiledRule;

enum class ProvenanceKind { Input, Derived, Manual };

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::Input;
  std::string rule;  // Derived only

  static Provenance input() { return {}; }
  static Provenance derived(std::string rule) { return {ProvenanceKind::Derived, std::move(rule)}; }
  static Provenance manual() { return {ProvenanceKind::Manual, {}}; }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

std::string format_provenance(const Provenance& p);

struct Fact {
  std::string key;
  Value value;
  Provenance provenance;

  friend bool operator==(const Fact&, const Fact&) = default;
};

class ContradictoryAssertion : public Error {
 public:
  ContradictoryAssertion(std::string key, Value existing, Value attempted);

  std::string key;
  Value existing;
  Value attempted;
};

class CycleLimitExceeded : public Error {
 public:
  using Error::Error;
};

class GoalCycle : public Error {
 public:
  using Error::Error;
};

// One value per key. Facts are never retracted.
class WorkingMemory {
 public:
  // Returns false when the same value is already present (no log growth).
  // Throws ContradictoryAssertion on a different value, Error on a
  // malformed key.
  bool assert_fact(Fact fact);

  const Fact* find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }
  std::size_t size() const { return facts_.size(); }
  const std::map<std::string, Fact, std::less<>>& facts() const { return facts_; }
  const std::vector<Fact>& log() const { return log_; }

  static WorkingMemory replay(const std::vector<Fact>& log);

  friend bool operator==(const WorkingMemory& a, const WorkingMemory& b) { return a.facts_ == b.facts_; }

 private:
  std::map<std::string, Fact, std::less<>> facts_;
  std::vector<Fact> log_;
};

// Resolves a non-raw binding (e.g. a plan metric). nullopt = unknown.
using MetricResolver = std::function<std::optional<Value>(const FactRequest&)>;

// Values for the rule's data bindings in binding order, or nullopt when
// any binding is unresolved.
std::optional<std::vector<Value>> resolve_bindings(const CompiledRule& rule, const WorkingMemory& wm,
                                                   const MetricResolver& metrics = {});

struct Activation {
  std::string rule;
  int priority = 0;
  int specificity = 0;
  std::optional<std::string> refines;

  friend bool operator==(const Activation&, const Activation&) = default;
};

// Rules not yet fired whose bindings all resolve and whose logic is true.
// Unknown bindings and evaluation errors both mean "no activation".
std::vector<Activation> match(const std::vector<CompiledRule>& rules, const WorkingMemory& wm,
                              const std::set<std::string>& fired = {}, const MetricResolver& metrics = {});

// Priority desc, specificity desc, name asc. A rule refined by another
// activation, or named in `suppressed`, is dropped.
std::vector<Activation> resolve_conflicts(std::vector<Activation> activations,
                                          const std::set<std::string>& suppressed = {});

struct TraceRecord {
  int cycle = 0;
  std::string rule;
  std::vector<Fact> asserted;
  std::vector<std::string> criteria_loaded;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ForwardResult {
  WorkingMemory wm;
  std::vector<TraceRecord> trace;
  std::vector<std::string> loaded_criteria;  // first-load order, unique
};

inline constexpr int kDefaultMaxCycles = 1000;

ForwardResult run_forward(const std::vector<CompiledRule>& rules, WorkingMemory wm,
                          int max_cycles = kDefaultMaxCycles, const MetricResolver& metrics = {});

json trace_to_json(const std::vector<TraceRecord>& trace);

enum class QueryStatus { Proved, Disproved, NeedFacts };

std::string_view to_string(QueryStatus s);

struct QueryResult {
  QueryStatus status = QueryStatus::Disproved;
  std::vector<std::string> needed;  // sorted
  std::vector<std::string> proof;   // rules in firing order

  friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

// Goal-driven query for `key = value`. Throws GoalCycle when proving the
// goal re-enters a key already on the derivation path.
QueryResult query_backward(const std::vector<CompiledRule>& rules, const WorkingMemory& wm,
                           const std::string& key, const Value& value);

}  // namespace rtqa::engine
