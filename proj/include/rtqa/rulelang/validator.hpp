#pragma once

#include <vector>

#include "rtqa/ontology/ontology.hpp"
#include "rtqa/rulelang/ast.hpp"
#include "rtqa/rulelang/issues.hpp"

namespace rtqa::rulelang {

// Canonical form used for duplicate/conflict detection: variables are
// replaced by their binding source, commutative operands are sorted,
// and/or chains are flattened, > and >= are rewritten as < and <=.
ExprPtr canonicalize(const Expr& logic, const std::vector<DataBinding>& bindings);

// UnitMismatch issues for one rule (operand types and units, boolean root).
std::vector<RuleIssue> check_types(const Mlm& mlm);

// All issues in a rulebase, sorted so the result does not depend on the
// input order.
std::vector<RuleIssue> validate_rulebase(const std::vector<Mlm>& mlms, const ontology::Ontology& ontology);

}  // namespace rtqa::rulelang
