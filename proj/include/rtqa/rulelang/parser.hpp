#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rtqa/rulelang/ast.hpp"
#include "rtqa/rulelang/issues.hpp"

namespace rtqa::rulelang {

// Parses exactly one MLM. Throws RuleError (Syntax or UnboundVariable)
// with the location of the first failure.
Mlm parse_mlm(std::string_view text, const std::string& file = {});

// Parses a file holding one or more MLMs back to back.
std::vector<Mlm> parse_mlms(std::string_view text, const std::string& file = {});

// Parses a standalone logic expression (no trailing `;`).
ExprPtr parse_expression(std::string_view text);

// Parses the body of a `data:` slot: zero or more `var := ... ;` entries.
std::vector<DataBinding> parse_data_bindings(std::string_view text, const std::string& file = {}, int first_line = 1);

// Parses one action statement without its trailing `;`.
Action parse_action(std::string_view text);

// Canonical text form. parse_mlm(pretty_print(m)) == m for every valid m.
std::string pretty_print(const Mlm& mlm);
std::string format_expr(const Expr& expr);

}  // namespace rtqa::rulelang
