#include "rtqa/engine/engine.hpp"

#include <algorithm>

namespace rtqa::engine {

using rulelang::AssertAction;
using rulelang::EvalError;
using rulelang::LoadCriteriaAction;

std::string format_provenance(const Provenance& p) {
  switch (p.kind) {
    case ProvenanceKind::Input: return "input";
    case ProvenanceKind::Derived: return "derived(" + p.rule + ")";
    case ProvenanceKind::Manual: return "manual";
  }
  return "input";
}

ContradictoryAssertion::ContradictoryAssertion(std::string k, Value e, Value a)
    : Error("contradictory assertion for '" + k + "': holds " + format_value(e) + ", asserted " + format_value(a)),
      key(std::move(k)),
      existing(std::move(e)),
      attempted(std::move(a)) {}

bool WorkingMemory::assert_fact(Fact fact) {
  if (!is_valid_fact_key(fact.key)) throw Error("malformed fact key '" + fact.key + "'");
  auto it = facts_.find(fact.key);
  if (it != facts_.end()) {
    if (it->second.value == fact.value) return false;
    throw ContradictoryAssertion(fact.key, it->second.value, fact.value);
  }
  log_.push_back(fact);
  const std::string key = fact.key;
  facts_.emplace(key, std::move(fact));
  return true;
}

const Fact* WorkingMemory::find(std::string_view key) const {
  auto it = facts_.find(key);
  return it == facts_.end() ? nullptr : &it->second;
}

WorkingMemory WorkingMemory::replay(const std::vector<Fact>& log) {
  WorkingMemory wm;
  for (const auto& f : log) wm.assert_fact(f);
  return wm;
}

std::optional<std::vector<Value>> resolve_bindings(const CompiledRule& rule, const WorkingMemory& wm,
                                                   const MetricResolver& metrics) {
  std::vector<Value> slots;
  slots.reserve(rule.data_bindings.size());
  for (const auto& b : rule.data_bindings) {
    if (const auto* raw = std::get_if<RawFactRequest>(&b.source)) {
      const Fact* f = wm.find(raw->key);
      if (!f) return std::nullopt;
      slots.push_back(f->value);
    } else {
      if (!metrics) return std::nullopt;
      auto v = metrics(b.source);
      if (!v) return std::nullopt;
      slots.push_back(std::move(*v));
    }
  }
  return slots;
}

std::vector<Activation> match(const std::vector<CompiledRule>& rules, const WorkingMemory& wm,
                              const std::set<std::string>& fired, const MetricResolver& metrics) {
  std::vector<Activation> out;
  for (const auto& rule : rules) {
    if (fired.count(rule.name)) continue;
    auto slots = resolve_bindings(rule, wm, metrics);
    if (!slots) continue;
    bool ok = false;
    try {
      ok = rule.evaluate(*slots);
    } catch (const EvalError&) {
      ok = false;
    }
    if (ok) out.push_back({rule.name, rule.priority, rule.specificity, rule.refines});
  }
  return out;
}

std::vector<Activation> resolve_conflicts(std::vector<Activation> activations,
                                          const std::set<std::string>& suppressed) {
  std::set<std::string> refined = suppressed;
  for (const auto& a : activations) {
    if (a.refines) refined.insert(*a.refines);
  }
  std::erase_if(activations, [&](const Activation& a) { return refined.count(a.rule) > 0; });
  std::sort(activations.begin(), activations.end(), [](const Activation& a, const Activation& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    if (a.specificity != b.specificity) return a.specificity > b.specificity;
    return a.rule < b.rule;
  });
  return activations;
}

ForwardResult run_forward(const std::vector<CompiledRule>& rules, WorkingMemory wm, int max_cycles,
                          const MetricResolver& metrics) {
  if (max_cycles < 1) throw Error("max_cycles must be at least 1");
  std::map<std::string, const CompiledRule*> by_name;
  for (const auto& r : rules) by_name.emplace(r.name, &r);

  ForwardResult result;
  std::set<std::string> fired;
  // Parents of fired refiners; they would otherwise slip in on a later
  // cycle once the refiner has left the agenda.
  std::set<std::string> suppressed;
  std::set<std::string> loaded;
  for (int cycle = 0;; ++cycle) {
    auto agenda = resolve_conflicts(match(rules, wm, fired, metrics), suppressed);
    if (agenda.empty()) break;
    if (cycle >= max_cycles) throw CycleLimitExceeded("forward chaining exceeded " + std::to_string(max_cycles) + " cycles");

    const CompiledRule& rule = *by_name.at(agenda.front().rule);
    fired.insert(rule.name);
    if (rule.refines) suppressed.insert(*rule.refines);
    TraceRecord rec;
    rec.cycle = cycle;
    rec.rule = rule.name;
    for (const auto& action : rule.actions) {
      if (const auto* a = std::get_if<AssertAction>(&action)) {
        Fact f{a->key, a->value, Provenance::derived(rule.name)};
        wm.assert_fact(f);
        rec.asserted.push_back(std::move(f));
      } else if (const auto* l = std::get_if<LoadCriteriaAction>(&action)) {
        rec.criteria_loaded.push_back(l->criteria_set);
        if (loaded.insert(l->criteria_set).second) result.loaded_criteria.push_back(l->criteria_set);
      }
    }
    result.trace.push_back(std::move(rec));
  }
  result.wm = std::move(wm);
  return result;
}

json trace_to_json(const std::vector<TraceRecord>& trace) {
  json out = json::array();
  for (const auto& r : trace) {
    json asserted = json::array();
    for (const auto& f : r.asserted) asserted.push_back({{"key", f.key}, {"value", value_to_json(f.value)}});
    out.push_back({{"cycle", r.cycle}, {"rule", r.rule}, {"asserted", asserted}, {"criteria_loaded", r.criteria_loaded}});
  }
  return out;
}

std::string_view to_string(QueryStatus s) {
  switch (s) {
    case QueryStatus::Proved: return "Proved";
    case QueryStatus::Disproved: return "Disproved";
    case QueryStatus::NeedFacts: return "NeedFacts";
  }
  return "Disproved";
}

namespace {

// Outcome of trying to establish a fact or fire a rule hypothetically.
struct Attempt {
  enum Kind { Established, Failed, Missing } kind = Failed;
  Value value{false};
  std::set<std::string> needed;
  std::vector<std::string> proof;
};

class BackwardProver {
 public:
  BackwardProver(const std::vector<CompiledRule>& rules, const WorkingMemory& wm) : wm_(wm) {
    for (const auto& r : rules) ordered_.push_back(&r);
    std::sort(ordered_.begin(), ordered_.end(), [](const CompiledRule* a, const CompiledRule* b) {
      if (a->priority != b->priority) return a->priority > b->priority;
      if (a->specificity != b->specificity) return a->specificity > b->specificity;
      return a->name < b->name;
    });
  }

  QueryResult prove(const std::string& key, const Value& value) {
    if (const Fact* f = wm_.find(key)) {
      return {f->value == value ? QueryStatus::Proved : QueryStatus::Disproved, {}, {}};
    }
    path_.insert(key);
    std::set<std::string> needed;
    for (const CompiledRule* r : producers(key, &value)) {
      Attempt a = try_rule(*r);
      if (a.kind == Attempt::Established) return {QueryStatus::Proved, {}, a.proof};
      if (a.kind == Attempt::Missing) needed.insert(a.needed.begin(), a.needed.end());
    }
    if (needed.empty()) return {QueryStatus::Disproved, {}, {}};
    return {QueryStatus::NeedFacts, {needed.begin(), needed.end()}, {}};
  }

 private:
  std::vector<const CompiledRule*> producers(const std::string& key, const Value* value) const {
    std::vector<const CompiledRule*> out;
    for (const CompiledRule* r : ordered_) {
      for (const auto& action : r->actions) {
        const auto* a = std::get_if<AssertAction>(&action);
        if (a && a->key == key && (!value || a->value == *value)) {
          out.push_back(r);
          break;
        }
      }
    }
    return out;
  }

  static const Value& asserted_value(const CompiledRule& r, const std::string& key) {
    for (const auto& action : r.actions) {
      const auto* a = std::get_if<AssertAction>(&action);
      if (a && a->key == key) return a->value;
    }
    throw Error("rule " + r.name + " does not assert " + key);
  }

  Attempt derive(const std::string& key) {
    if (const Fact* f = wm_.find(key)) return {Attempt::Established, f->value, {}, {}};
    if (auto it = derived_.find(key); it != derived_.end()) return it->second;
    auto prods = producers(key, nullptr);
    if (prods.empty()) return {Attempt::Missing, Value{false}, {key}, {}};
    if (path_.count(key)) throw GoalCycle("goal cycle through '" + key + "'");
    path_.insert(key);
    Attempt out{Attempt::Failed, Value{false}, {}, {}};
    for (const CompiledRule* r : prods) {
      Attempt a = try_rule(*r);
      if (a.kind == Attempt::Established) {
        out = {Attempt::Established, asserted_value(*r, key), {}, a.proof};
        break;
      }
      if (a.kind == Attempt::Missing) {
        out.kind = Attempt::Missing;
        out.needed.insert(a.needed.begin(), a.needed.end());
      }
    }
    path_.erase(key);
    derived_[key] = out;
    return out;
  }

  Attempt try_rule(const CompiledRule& r) {
    std::vector<Value> slots;
    std::set<std::string> needed;
    std::vector<std::string> proof;
    bool failed = false;
    for (const auto& b : r.data_bindings) {
      const auto* raw = std::get_if<RawFactRequest>(&b.source);
      if (!raw) {
        needed.insert(format_request(b.source));
        continue;
      }
      Attempt a = derive(raw->key);
      if (a.kind == Attempt::Established) {
        slots.push_back(a.value);
        for (auto& p : a.proof) {
          if (std::find(proof.begin(), proof.end(), p) == proof.end()) proof.push_back(p);
        }
      } else if (a.kind == Attempt::Missing) {
        needed.insert(a.needed.begin(), a.needed.end());
      } else {
        failed = true;
      }
    }
    if (failed) return {Attempt::Failed, Value{false}, {}, {}};
    if (!needed.empty()) return {Attempt::Missing, Value{false}, needed, {}};
    bool ok = false;
    try {
      ok = r.evaluate(slots);
    } catch (const EvalError&) {
      ok = false;
    }
    if (!ok) return {Attempt::Failed, Value{false}, {}, {}};
    proof.push_back(r.name);
    return {Attempt::Established, Value{true}, {}, proof};
  }

  const WorkingMemory& wm_;
  std::vector<const CompiledRule*> ordered_;
  std::set<std::string> path_;
  std::map<std::string, Attempt> derived_;
};

}  // namespace

QueryResult query_backward(const std::vector<CompiledRule>& rules, const WorkingMemory& wm, const std::string& key,
                           const Value& value) {
  if (!is_valid_fact_key(key)) throw Error("malformed goal key '" + key + "'");
  return BackwardProver(rules, wm).prove(key, value);
}

}  // namespace rtqa::engine
