#include "rtqa/rulelang/decision_table.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rtqa/rulelang/parser.hpp"

namespace rtqa::rulelang {

namespace {

constexpr std::size_t kMaxConditions = 24;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == '|') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  // A trailing '|' closes the row rather than opening an empty cell.
  if (!line.empty() && trim(line).back() == '|') cells.pop_back();
  return cells;
}

bool is_separator(const std::string& line) {
  if (line.find("---") == std::string::npos) return false;
  return std::all_of(line.begin(), line.end(), [](char c) { return c == '-' || c == '|' || c == '+' || c == ' '; });
}

class TableParser {
 public:
  TableParser(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  DecisionTable run() {
    DecisionTable table;
    table.source_file = file_;
    std::istringstream in{std::string(text_)};
    std::string raw;
    enum { Header, Conditions, Actions } section = Header;
    std::optional<std::size_t> width;
    std::vector<std::vector<std::string>> cond_rows, action_rows;
    std::vector<int> cond_lines, action_lines;

    while (std::getline(in, raw)) {
      ++line_;
      const std::string line = trim(raw);
      if (line.empty() || line.rfind("//", 0) == 0 || line.front() == '#') continue;
      if (section == Header && line.rfind("table:", 0) == 0) {
        parse_header(line.substr(6), table);
        continue;
      }
      if (section == Header && line.rfind("data:", 0) == 0) {
        auto bindings = parse_data_bindings(line.substr(5), file_, line_);
        table.data_bindings.insert(table.data_bindings.end(), bindings.begin(), bindings.end());
        continue;
      }
      if (is_separator(line)) {
        if (section != Conditions) fail("separator must follow at least one condition row");
        section = Actions;
        continue;
      }
      if (line.find('|') == std::string::npos) fail("expected a '|'-separated table row");
      if (section == Header) section = Conditions;
      auto cells = split_cells(line);
      const std::size_t entries = cells.size() - 1;
      if (!width) width = entries;
      if (entries != *width) {
        fail("ragged row: " + std::to_string(entries) + " entries, expected " + std::to_string(*width));
      }
      if (section == Conditions) {
        cond_rows.push_back(std::move(cells));
        cond_lines.push_back(line_);
      } else {
        action_rows.push_back(std::move(cells));
        action_lines.push_back(line_);
      }
    }
    if (cond_rows.empty()) fail("table has no condition rows");
    if (!width || *width == 0) fail("table has no columns");
    if (cond_rows.size() > kMaxConditions) fail("too many conditions");

    table.columns.resize(*width);
    for (std::size_t r = 0; r < cond_rows.size(); ++r) {
      line_ = cond_lines[r];
      const auto& row = cond_rows[r];
      table.conditions.push_back({row[0], parse_stub_expr(row[0], table.data_bindings)});
      for (std::size_t c = 0; c < *width; ++c) {
        const std::string& cell = row[c + 1];
        Entry e;
        if (cell == "T") {
          e = Entry::True;
        } else if (cell == "F") {
          e = Entry::False;
        } else if (cell == "-") {
          e = Entry::DontCare;
        } else {
          fail("condition entry '" + cell + "' must be T, F or -");
        }
        table.columns[c].conditions.push_back(e);
      }
    }
    for (std::size_t r = 0; r < action_rows.size(); ++r) {
      line_ = action_lines[r];
      const auto& row = action_rows[r];
      try {
        table.actions.push_back({row[0], parse_action(row[0])});
      } catch (const RuleError& e) {
        fail("bad action stub '" + row[0] + "': " + e.issue().detail);
      }
      for (std::size_t c = 0; c < *width; ++c) {
        const std::string& cell = row[c + 1];
        if (cell != "X" && cell != "x" && !cell.empty()) fail("action entry '" + cell + "' must be X or blank");
        table.columns[c].actions.push_back(!cell.empty());
      }
    }
    std::set<std::string> seen;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (!seen.insert(entries_string(table.columns[c])).second) {
        line_ = cond_lines.front();
        fail("column " + std::to_string(c + 1) + " repeats condition entries " + entries_string(table.columns[c]));
      }
    }
    return table;
  }

 private:
  [[noreturn]] void fail(const std::string& detail) const {
    throw RuleError(RuleIssue{Severity::Error, IssueKind::Syntax, {}, {line_, 1}, detail, file_});
  }

  ExprPtr parse_stub_expr(const std::string& text, const std::vector<DataBinding>& bindings) {
    ExprPtr e;
    try {
      e = parse_expression(text);
    } catch (const RuleError& err) {
      fail("bad condition stub '" + text + "': " + err.issue().detail);
    }
    for (const auto& var : referenced_vars(*e)) {
      const bool bound =
          std::any_of(bindings.begin(), bindings.end(), [&](const DataBinding& b) { return b.var == var; });
      if (!bound) {
        throw RuleError(RuleIssue{Severity::Error, IssueKind::UnboundVariable, {}, {line_, 1},
                                  "variable '" + var + "' has no data binding", file_});
      }
    }
    return e;
  }

  void parse_header(const std::string& body, DecisionTable& table) {
    std::istringstream slots(body);
    std::string slot;
    while (std::getline(slots, slot, ';')) {
      std::istringstream words(slot);
      std::vector<std::string> w;
      for (std::string x; words >> x;) w.push_back(x);
      if (w.empty()) continue;
      if (w[0] == "name" && w.size() == 2) {
        table.name = w[1];
      } else if (w[0] == "version" && w.size() == 2) {
        table.version = w[1];
      } else if (w[0] == "kind" && w.size() == 2 && w[1] == "classification") {
        table.kind = RuleKind::Classification;
      } else if (w[0] == "kind" && w.size() == 3 && w[1] == "criterion" && parse_criterion_class(w[2])) {
        table.kind = RuleKind::Criterion;
        table.criterion_class = parse_criterion_class(w[2]);
      } else if (w[0] == "priority" && w.size() == 2) {
        try {
          table.priority = std::clamp(std::stoi(w[1]), 0, 100);
        } catch (const std::exception&) {
          fail("priority must be an integer");
        }
      } else if (w[0] == "applies_to" && w.size() == 2) {
        table.applies_to = w[1];
      } else {
        fail("unknown table header slot '" + trim(slot) + "'");
      }
    }
  }

  std::string_view text_;
  std::string file_;
  int line_ = 0;
};

}  // namespace

OverlapError::OverlapError(std::string v, std::vector<std::size_t> cols)
    : Error([&] {
        std::string msg = "overlapping columns on condition vector " + v + ":";
        for (auto c : cols) msg += " " + std::to_string(c + 1);
        return msg;
      }()),
      vector(std::move(v)),
      columns(std::move(cols)) {}

DecisionTable parse_decision_table(std::string_view text, const std::string& file) {
  return TableParser(text, file).run();
}

std::string entries_string(const TableColumn& column) {
  std::string out;
  for (Entry e : column.conditions) out.push_back(e == Entry::True ? 'T' : e == Entry::False ? 'F' : '-');
  return out;
}

Completeness check_completeness(const DecisionTable& table) {
  const std::size_t n = table.conditions.size();
  if (n > kMaxConditions) throw Error("too many conditions for completeness analysis");
  const std::size_t total = std::size_t{1} << n;
  // Bit i of a vector index is 1 when condition i is F; index 0 is all-T.
  std::vector<std::vector<std::size_t>> cover(total);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& entries = table.columns[c].conditions;
    std::size_t fixed = 0;
    std::vector<std::size_t> free_bits;
    for (std::size_t i = 0; i < n; ++i) {
      if (entries[i] == Entry::False) fixed |= std::size_t{1} << (n - 1 - i);
      if (entries[i] == Entry::DontCare) free_bits.push_back(n - 1 - i);
    }
    const std::size_t combos = std::size_t{1} << free_bits.size();
    for (std::size_t m = 0; m < combos; ++m) {
      std::size_t v = fixed;
      for (std::size_t b = 0; b < free_bits.size(); ++b) {
        if (m & (std::size_t{1} << b)) v |= std::size_t{1} << free_bits[b];
      }
      cover[v].push_back(c);
    }
  }
  auto render = [n](std::size_t v) {
    std::string s(n, 'T');
    for (std::size_t i = 0; i < n; ++i) {
      if (v & (std::size_t{1} << (n - 1 - i))) s[i] = 'F';
    }
    return s;
  };
  Completeness result;
  for (std::size_t v = 0; v < total; ++v) {
    if (cover[v].size() > 1) throw OverlapError(render(v), cover[v]);
    if (cover[v].empty()) result.missing.push_back(render(v));
  }
  result.balanced = result.missing.empty();
  return result;
}

std::vector<Mlm> table_to_rules(const DecisionTable& table, const std::string& base_name, RuleKind kind,
                                std::optional<CriterionClass> criterion_class) {
  std::vector<Mlm> out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& column = table.columns[c];
    Mlm mlm;
    mlm.name = base_name + "_" + std::to_string(c + 1);
    mlm.version = table.version;
    mlm.title = base_name + " column " + std::to_string(c + 1);
    mlm.kind = kind;
    mlm.criterion_class = kind == RuleKind::Criterion ? criterion_class : std::nullopt;
    mlm.priority = table.priority;
    mlm.applies_to = table.applies_to;
    mlm.source_file = table.source_file;

    std::vector<ExprPtr> terms;
    for (std::size_t i = 0; i < table.conditions.size(); ++i) {
      if (column.conditions[i] == Entry::True) terms.push_back(table.conditions[i].expr);
      if (column.conditions[i] == Entry::False) terms.push_back(make_not(table.conditions[i].expr));
    }
    mlm.logic = make_conjunction(terms);

    // Only the bindings this column reads, so an ignored condition's
    // missing fact cannot block the rule.
    const auto used = referenced_vars(*mlm.logic);
    for (const auto& b : table.data_bindings) {
      if (std::find(used.begin(), used.end(), b.var) != used.end()) mlm.data_bindings.push_back(b);
    }
    for (std::size_t a = 0; a < table.actions.size(); ++a) {
      if (column.actions[a]) mlm.actions.push_back(table.actions[a].action);
    }
    out.push_back(std::move(mlm));
  }
  return out;
}

std::vector<Mlm> table_to_rules(const DecisionTable& table) {
  if (table.name.empty()) throw Error("decision table " + table.source_file + " has no `table: name ...;` header");
  return table_to_rules(table, table.name, table.kind, table.criterion_class);
}

}  // namespace rtqa::rulelang
