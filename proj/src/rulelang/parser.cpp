#include "rtqa/rulelang/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace rtqa::rulelang {

namespace {

enum class Tok { Ident, String, Number, Punct, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;  // identifier, string contents or punctuation
  Quantity number;
  SourceLoc loc;
};

const std::set<std::string, std::less<>> kReserved{"and", "or", "not", "in", "true", "false", "concept"};

class Lexer {
 public:
  Lexer(std::string_view src, std::string file, int first_line) : src_(src), file_(std::move(file)), line_(first_line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          t.text.push_back(src_[pos_]);
          advance();
        }
      } else if (c == '"') {
        lex_string(t);
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& detail) const {
    throw RuleError(RuleIssue{Severity::Error, IssueKind::Syntax, {}, {line_, col_}, detail, file_});
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (starts_with("//")) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_number(Token& t) {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    };
    digits();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        advance(look - pos_);
        digits();
      }
    }
    const std::string_view lexeme = src_.substr(start, pos_ - start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
    if (ec != std::errc{} || ptr != lexeme.data() + lexeme.size()) fail("bad number '" + std::string(lexeme) + "'");
    t.kind = Tok::Number;
    t.number.value = value;
    for (Unit unit : {Unit::NgPerMl, Unit::Gy, Unit::Cc, Unit::Percent}) {
      const auto suffix = unit_suffix(unit);
      if (starts_with(suffix)) {
        t.number.unit = unit;
        advance(suffix.size());
        break;
      }
    }
  }

  void lex_string(Token& t) {
    t.kind = Tok::String;
    advance();
    for (;;) {
      if (pos_ >= src_.size()) fail("unterminated string");
      const char c = src_[pos_];
      if (c == '"') {
        advance();
        return;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail("unterminated string");
        const char e = src_[pos_];
        t.text.push_back(e == 'n' ? '\n' : e);
        advance();
        continue;
      }
      t.text.push_back(c);
      advance();
    }
  }

  void lex_punct(Token& t) {
    t.kind = Tok::Punct;
    static const std::pair<std::string_view, std::string_view> kMulti[] = {
        {":=", ":="}, {"<=", "<="}, {">=", ">="}, {"<>", "<>"}, {"!=", "<>"},
        {"\xE2\x89\xA4", "<="}, {"\xE2\x89\xA5", ">="}, {"\xE2\x89\xA0", "<>"},
        {"\xC3\x97", "*"}, {"\xC3\xB7", "/"},
    };
    for (const auto& [spelling, canonical] : kMulti) {
      if (starts_with(spelling)) {
        t.text = canonical;
        advance(spelling.size());
        return;
      }
    }
    static const std::string_view kSingle = ";:,()[]=<>+-*/.";
    if (kSingle.find(src_[pos_]) == std::string_view::npos) {
      fail(std::string("unexpected character '") + src_[pos_] + "'");
    }
    t.text = std::string(1, src_[pos_]);
    advance();
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, std::string file, int first_line = 1)
      : file_(std::move(file)), toks_(Lexer(src, file_, first_line).run()) {}

  bool at_eof() const { return peek().kind == Tok::Eof; }

  std::vector<Mlm> parse_all() {
    std::vector<Mlm> out;
    while (!at_eof()) out.push_back(parse_one());
    return out;
  }

  Mlm parse_one() {
    Mlm mlm;
    mlm.source_file = file_;
    mlm.loc = peek().loc;
    current_name_.clear();
    expect_section("mlm");
    parse_header(mlm);
    expect_section("data");
    while (!is_section("logic")) {
      const SourceLoc loc = peek().loc;
      DataBinding binding = parse_binding();
      for (const auto& existing : mlm.data_bindings) {
        if (existing.var == binding.var) fail_at(loc, "variable '" + binding.var + "' is bound more than once");
      }
      mlm.data_bindings.push_back(std::move(binding));
    }
    expect_section("logic");
    mlm.logic = parse_expr();
    expect_punct(";");
    if (is_section("action")) {
      expect_section("action");
      while (!is_section("message") && !is_ident("end")) {
        mlm.actions.push_back(parse_action_stmt());
        expect_punct(";");
      }
    }
    if (is_section("message")) {
      expect_section("message");
      mlm.message = expect_string();
      expect_punct(";");
    }
    const SourceLoc end_loc = peek().loc;
    expect_ident("end");
    expect_punct(".");
    check_invariants(mlm, end_loc);
    return mlm;
  }

  ExprPtr parse_expr() { return parse_or(); }

  std::vector<DataBinding> parse_bindings_only() {
    std::vector<DataBinding> out;
    while (!at_eof()) out.push_back(parse_binding());
    return out;
  }

  Action parse_action_stmt() {
    const SourceLoc loc = peek().loc;
    if (accept_ident("assert")) {
      AssertAction a;
      a.key = expect_string();
      if (!is_valid_fact_key(a.key)) fail_at(loc, "fact key '" + a.key + "' must be a dotted lowercase path");
      expect_punct("=");
      a.value = parse_literal_value();
      return a;
    }
    if (accept_ident("load_criteria")) return LoadCriteriaAction{expect_identifier()};
    fail("expected 'assert' or 'load_criteria'");
  }

  void expect_eof() {
    if (!at_eof()) fail("unexpected trailing content");
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail_at(SourceLoc loc, const std::string& detail, IssueKind kind = IssueKind::Syntax) const {
    throw RuleError(RuleIssue{Severity::Error, kind, current_name_, loc, detail, file_});
  }
  [[noreturn]] void fail(const std::string& detail) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::Eof ? "end of input" : "'" + t.text + "'";
    if (t.kind == Tok::Number) found = "number";
    fail_at(t.loc, detail + ", found " + found);
  }

  bool is_ident(std::string_view word) const { return peek().kind == Tok::Ident && peek().text == word; }
  bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
  bool is_section(std::string_view word) const {
    return is_ident(word) && peek(1).kind == Tok::Punct && peek(1).text == ":";
  }

  bool accept_ident(std::string_view word) {
    if (!is_ident(word)) return false;
    ++pos_;
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }
  void expect_ident(std::string_view word) {
    if (!accept_ident(word)) fail("expected '" + std::string(word) + "'");
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  void expect_section(std::string_view word) {
    if (!is_section(word)) fail("expected section '" + std::string(word) + ":'");
    pos_ += 2;
  }
  std::string expect_string() {
    if (peek().kind != Tok::String) fail("expected a string");
    return next().text;
  }
  std::string expect_identifier() {
    if (peek().kind != Tok::Ident) fail("expected an identifier");
    return next().text;
  }
  int expect_int() {
    bool negative = accept_punct("-");
    if (peek().kind != Tok::Number || peek().number.unit != Unit::None) fail("expected an integer");
    const double v = next().number.value;
    if (v != static_cast<double>(static_cast<long long>(v))) fail_at(toks_[pos_ - 1].loc, "expected an integer");
    const double signed_v = negative ? -v : v;
    return static_cast<int>(std::clamp(signed_v, -1e9, 1e9));
  }

  void parse_header(Mlm& mlm) {
    std::set<std::string> seen;
    bool has_kind = false;
    while (!is_section("data")) {
      const SourceLoc loc = peek().loc;
      const std::string slot = expect_identifier();
      if (!seen.insert(slot).second) fail_at(loc, "slot '" + slot + "' given twice");
      if (slot == "name") {
        mlm.name = expect_identifier();
        current_name_ = mlm.name;
      } else if (slot == "version") {
        mlm.version = expect_string();
      } else if (slot == "title") {
        mlm.title = expect_string();
      } else if (slot == "kind") {
        has_kind = true;
        if (accept_ident("classification")) {
          mlm.kind = RuleKind::Classification;
        } else if (accept_ident("criterion")) {
          mlm.kind = RuleKind::Criterion;
          const SourceLoc cls_loc = peek().loc;
          auto cls = parse_criterion_class(expect_identifier());
          if (!cls) {
            fail_at(cls_loc, "criterion class must be one of precondition, convention, structure, dose, quality");
          }
          mlm.criterion_class = cls;
        } else {
          fail("expected 'classification' or 'criterion'");
        }
      } else if (slot == "priority") {
        mlm.priority = std::clamp(expect_int(), 0, 100);
      } else if (slot == "applies_to") {
        mlm.applies_to = accept_punct("*") ? "*" : expect_identifier();
      } else if (slot == "mode") {
        if (accept_ident("automatic")) {
          mlm.mode = EvalMode::Automatic;
        } else if (accept_ident("manual")) {
          mlm.mode = EvalMode::Manual;
        } else {
          fail("expected 'automatic' or 'manual'");
        }
      } else if (slot == "refines") {
        mlm.refines = expect_identifier();
      } else {
        fail_at(loc, "unknown slot '" + slot + "'");
      }
      expect_punct(";");
    }
    for (const char* required : {"name", "version", "title", "kind"}) {
      if (!seen.count(required)) fail_at(mlm.loc, std::string("missing required slot '") + required + "'");
    }
    (void)has_kind;
  }

  DataBinding parse_binding() {
    DataBinding binding;
    const SourceLoc loc = peek().loc;
    binding.var = expect_identifier();
    if (kReserved.count(binding.var)) fail_at(loc, "'" + binding.var + "' is a reserved word");
    expect_punct(":=");
    if (accept_ident("fact")) {
      const SourceLoc key_loc = peek().loc;
      RawFactRequest raw{expect_string()};
      if (!is_valid_fact_key(raw.key)) fail_at(key_loc, "fact key '" + raw.key + "' must be a dotted lowercase path");
      binding.source = raw;
    } else if (accept_ident("metric")) {
      binding.source = parse_metric();
    } else {
      fail("expected 'fact' or 'metric'");
    }
    expect_punct(";");
    return binding;
  }

  MetricRequest parse_metric() {
    const SourceLoc loc = peek().loc;
    const std::string op_name = expect_identifier();
    auto op = parse_metric_op(op_name);
    if (!op) fail_at(loc, "unknown metric '" + op_name + "'");
    MetricRequest req;
    req.op = *op;
    if (accept_punct("(")) {
      if (!is_punct(")")) {
        req.structure = expect_string();
        while (accept_punct(",")) {
          if (peek().kind == Tok::Number && !req.level) {
            req.level = next().number;
          } else if (accept_ident("percent")) {
            req.output = VolumeOutput::Percent;
          } else if (accept_ident("cc")) {
            req.output = VolumeOutput::Cc;
          } else {
            fail("expected a dose level or 'percent'/'cc'");
          }
        }
      }
      expect_punct(")");
    }
    try {
      check_metric_arity(req);
    } catch (const Error& e) {
      fail_at(loc, e.what());
    }
    return req;
  }

  Value parse_literal_value() {
    const Token& t = peek();
    if (accept_punct("-")) {
      if (peek().kind != Tok::Number) fail("expected a number after '-'");
      Quantity q = next().number;
      q.value = -q.value;
      return q;
    }
    if (t.kind == Tok::Number) return next().number;
    if (t.kind == Tok::String) return next().text;
    if (accept_ident("true")) return true;
    if (accept_ident("false")) return false;
    if (accept_ident("concept")) {
      const SourceLoc loc = peek().loc;
      auto system = parse_concept_system(expect_identifier());
      if (!system) fail_at(loc, "unknown concept system (expected ICDO, TNM, STRUCT or LOCAL)");
      const std::string code = expect_string();
      if (code.empty()) fail_at(loc, "empty concept code");
      return make_concept(*system, code);
    }
    fail("expected a literal");
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    for (;;) {
      const SourceLoc loc = peek().loc;
      if (!accept_ident("or")) return lhs;
      lhs = make_logical(BoolOp::Or, lhs, parse_and(), loc);
    }
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    for (;;) {
      const SourceLoc loc = peek().loc;
      if (!accept_ident("and")) return lhs;
      lhs = make_logical(BoolOp::And, lhs, parse_not(), loc);
    }
  }

  ExprPtr parse_not() {
    const SourceLoc loc = peek().loc;
    if (accept_ident("not")) return make_not(parse_not(), loc);
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    const SourceLoc loc = peek().loc;
    if (accept_ident("in")) {
      expect_punct("[");
      std::vector<Value> items;
      if (!is_punct("]")) {
        items.push_back(parse_literal_value());
        while (accept_punct(",")) items.push_back(parse_literal_value());
      }
      expect_punct("]");
      if (items.empty()) fail_at(loc, "membership list must not be empty");
      return make_in(lhs, std::move(items), loc);
    }
    static const std::pair<std::string_view, CmpOp> kOps[] = {{"=", CmpOp::Eq},  {"<>", CmpOp::Ne},
                                                              {"<", CmpOp::Lt},  {"<=", CmpOp::Le},
                                                              {">", CmpOp::Gt},  {">=", CmpOp::Ge}};
    for (const auto& [spelling, op] : kOps) {
      if (accept_punct(spelling)) return make_compare(op, lhs, parse_add(), loc);
    }
    return lhs;
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    for (;;) {
      const SourceLoc loc = peek().loc;
      if (accept_punct("+")) {
        lhs = make_arith(ArithOp::Add, lhs, parse_mul(), loc);
      } else if (accept_punct("-")) {
        lhs = make_arith(ArithOp::Sub, lhs, parse_mul(), loc);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      const SourceLoc loc = peek().loc;
      if (accept_punct("*")) {
        lhs = make_arith(ArithOp::Mul, lhs, parse_unary(), loc);
      } else if (accept_punct("/")) {
        lhs = make_arith(ArithOp::Div, lhs, parse_unary(), loc);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_unary() {
    const SourceLoc loc = peek().loc;
    if (accept_punct("-")) {
      // A sign written directly on a number is part of the literal.
      if (peek().kind == Tok::Number) {
        Quantity q = next().number;
        q.value = -q.value;
        return make_literal(q, loc);
      }
      return make_negate(parse_unary(), loc);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    const SourceLoc loc = t.loc;
    if (accept_punct("(")) {
      ExprPtr inner = parse_expr();
      expect_punct(")");
      return inner;
    }
    if (t.kind == Tok::Number || t.kind == Tok::String || is_ident("true") || is_ident("false") ||
        is_ident("concept")) {
      return make_literal(parse_literal_value(), loc);
    }
    if (t.kind == Tok::Ident && !kReserved.count(t.text)) return make_var(next().text, loc);
    fail("expected an expression");
  }

  void check_invariants(const Mlm& mlm, SourceLoc end_loc) const {
    if (mlm.kind == RuleKind::Classification && mlm.actions.empty()) {
      fail_at(end_loc, "classification rules need at least one action");
    }
    if (mlm.kind == RuleKind::Criterion && !mlm.actions.empty()) {
      fail_at(end_loc, "criteria are side-effect free and take no actions");
    }
    if (mlm.mode == EvalMode::Manual && mlm.message.empty()) {
      fail_at(end_loc, "manual criteria need a message (the question asked)");
    }
    check_bound(*mlm.logic, mlm.data_bindings);
  }

  void check_bound(const Expr& expr, const std::vector<DataBinding>& bindings) const {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarRef>) {
            const bool bound = std::any_of(bindings.begin(), bindings.end(),
                                           [&](const DataBinding& b) { return b.var == n.name; });
            if (!bound) {
              fail_at(expr.loc, "variable '" + n.name + "' has no data binding", IssueKind::UnboundVariable);
            }
          } else if constexpr (std::is_same_v<T, Compare> || std::is_same_v<T, Logical> ||
                               std::is_same_v<T, Arith>) {
            check_bound(*n.lhs, bindings);
            check_bound(*n.rhs, bindings);
          } else if constexpr (std::is_same_v<T, InList>) {
            check_bound(*n.subject, bindings);
          } else if constexpr (std::is_same_v<T, Not> || std::is_same_v<T, Negate>) {
            check_bound(*n.operand, bindings);
          }
        },
        expr.node);
  }

  std::string file_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string current_name_;
};

// Printing precedence levels.
constexpr int kPrecOr = 1, kPrecAnd = 2, kPrecNot = 3, kPrecCmp = 4, kPrecAdd = 5, kPrecMul = 6, kPrecNeg = 7,
              kPrecAtom = 8;

int precedence(const Expr& e) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Logical>) {
          return n.op == BoolOp::Or ? kPrecOr : kPrecAnd;
        } else if constexpr (std::is_same_v<T, Not>) {
          return kPrecNot;
        } else if constexpr (std::is_same_v<T, Compare> || std::is_same_v<T, InList>) {
          return kPrecCmp;
        } else if constexpr (std::is_same_v<T, Arith>) {
          return (n.op == ArithOp::Add || n.op == ArithOp::Sub) ? kPrecAdd : kPrecMul;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return kPrecNeg;
        } else {
          return kPrecAtom;
        }
      },
      e.node);
}

std::string print(const Expr& e, int required);

std::string wrap(const Expr& e, int required) {
  std::string inner = print(e, 0);
  return precedence(e) < required ? "(" + inner + ")" : inner;
}

std::string print(const Expr& e, int) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return format_value(n.value);
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Compare>) {
          return wrap(*n.lhs, kPrecAdd) + " " + std::string(to_string(n.op)) + " " + wrap(*n.rhs, kPrecAdd);
        } else if constexpr (std::is_same_v<T, InList>) {
          std::string out = wrap(*n.subject, kPrecAdd) + " in [";
          for (std::size_t i = 0; i < n.items.size(); ++i) {
            if (i) out += ", ";
            out += format_value(n.items[i]);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, Logical>) {
          const int p = n.op == BoolOp::Or ? kPrecOr : kPrecAnd;
          return wrap(*n.lhs, p) + " " + std::string(to_string(n.op)) + " " + wrap(*n.rhs, p + 1);
        } else if constexpr (std::is_same_v<T, Not>) {
          return "not " + wrap(*n.operand, kPrecNot);
        } else if constexpr (std::is_same_v<T, Arith>) {
          const int p = (n.op == ArithOp::Add || n.op == ArithOp::Sub) ? kPrecAdd : kPrecMul;
          return wrap(*n.lhs, p) + " " + std::string(to_string(n.op)) + " " + wrap(*n.rhs, p + 1);
        } else {
          // A bare numeric literal after '-' would re-parse as a signed
          // literal, so keep it parenthesized.
          const bool numeric_literal = std::holds_alternative<Literal>(n.operand->node) &&
                                       std::holds_alternative<Quantity>(std::get<Literal>(n.operand->node).value);
          std::string inner = wrap(*n.operand, kPrecNeg);
          if (numeric_literal && inner.front() != '(') inner = "(" + inner + ")";
          return "-" + inner;
        }
      },
      e.node);
}

}  // namespace

Mlm parse_mlm(std::string_view text, const std::string& file) {
  Parser parser(text, file);
  Mlm mlm = parser.parse_one();
  parser.expect_eof();
  return mlm;
}

std::vector<Mlm> parse_mlms(std::string_view text, const std::string& file) {
  return Parser(text, file).parse_all();
}

ExprPtr parse_expression(std::string_view text) {
  Parser parser(text, {});
  ExprPtr e = parser.parse_expr();
  parser.expect_eof();
  return e;
}

std::vector<DataBinding> parse_data_bindings(std::string_view text, const std::string& file, int first_line) {
  return Parser(text, file, first_line).parse_bindings_only();
}

Action parse_action(std::string_view text) {
  Parser parser(text, {});
  Action a = parser.parse_action_stmt();
  parser.expect_eof();
  return a;
}

std::string format_expr(const Expr& expr) { return print(expr, 0); }

std::string pretty_print(const Mlm& mlm) {
  std::string out = "mlm:\n";
  out += "  name " + mlm.name + ";\n";
  out += "  version " + format_value(Value{mlm.version}) + ";\n";
  out += "  title " + format_value(Value{mlm.title}) + ";\n";
  out += "  kind " + std::string(to_string(mlm.kind));
  if (mlm.criterion_class) out += " " + std::string(to_string(*mlm.criterion_class));
  out += ";\n";
  out += "  priority " + std::to_string(mlm.priority) + ";\n";
  out += "  applies_to " + mlm.applies_to + ";\n";
  out += "  mode " + std::string(to_string(mlm.mode)) + ";\n";
  if (mlm.refines) out += "  refines " + *mlm.refines + ";\n";
  out += "data:\n";
  for (const auto& b : mlm.data_bindings) out += "  " + b.var + " := " + format_request(b.source) + ";\n";
  out += "logic:\n  " + format_expr(*mlm.logic) + ";\n";
  if (!mlm.actions.empty()) {
    out += "action:\n";
    for (const auto& a : mlm.actions) out += "  " + format_action(a) + ";\n";
  }
  if (!mlm.message.empty()) out += "message:\n  " + format_value(Value{mlm.message}) + ";\n";
  out += "end.\n";
  return out;
}

}  // namespace rtqa::rulelang
