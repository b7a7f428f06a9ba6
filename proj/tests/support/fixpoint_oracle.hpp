#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rtqa::test {

// Abstract monotone rulebase: conditions test boolean facts, actions
// assert derived facts to true.
struct GenRule {
  std::string name;
  int priority = 50;
  std::vector<std::pair<std::string, bool>> conditions;  // key must equal value
  std::vector<std::string> asserts;                      // key := true
};

struct GenRulebase {
  std::vector<GenRule> rules;
  std::map<std::string, bool> inputs;
};

// Scans the rules in `order` (indices) repeatedly, firing every satisfied
// unfired rule, until a full pass changes nothing.
std::set<std::string> fixpoint_fired(const GenRulebase& base, const std::vector<std::size_t>& order);

// Fired sets reached over every permutation of the rule order.
std::set<std::set<std::string>> exhaustive_fixpoints(const GenRulebase& base);

// MLM source for the rulebase (classification rules).
std::string render_mlm(const GenRulebase& base);

}  // namespace rtqa::test
