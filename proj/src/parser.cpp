#include "linform/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "linform/errors.hpp"
#include "linform/normalize.hpp"

namespace linform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxDepth = 200;
constexpr int kMaxDiagnostics = 100;

enum class Tok {
  Ident, Number, KwVar, KwParam, KwBinary, KwInteger, KwContinuous,
  KwMinimize, KwMaximize, KwSt, KwInf,
  Colon, Comma, LBracket, RBracket, LParen, RParen,
  Plus, Minus, Star, Slash, Le, Ge, Eq,
  Newline, End, Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blanks_and_comments();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      return t;
    }
    const char c = text_[pos_];
    if (c == '\n') {
      advance();
      t.kind = Tok::Newline;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      return lex_number(t);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_word(t);
    advance();
    switch (c) {
      case ':': t.kind = Tok::Colon; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '[': t.kind = Tok::LBracket; return t;
      case ']': t.kind = Tok::RBracket; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '=': t.kind = Tok::Eq; return t;
      case '<':
        if (pos_ < text_.size() && text_[pos_] == '=') {
          advance();
          t.kind = Tok::Le;
          return t;
        }
        t.kind = Tok::Bad;
        t.text = "'<' (use '<=')";
        return t;
      case '>':
        if (pos_ < text_.size() && text_[pos_] == '=') {
          advance();
          t.kind = Tok::Ge;
          return t;
        }
        t.kind = Tok::Bad;
        t.text = "'>' (use '>=')";
        return t;
      default:
        t.kind = Tok::Bad;
        t.text = printable(c);
        return t;
    }
  }

 private:
  void advance() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void skip_blanks_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token lex_number(Token t) {
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      advance();
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      size_t save = pos_;
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          advance();
      } else {
        pos_ = save;  // 'e' starts an identifier, not an exponent
      }
    }
    t.text = std::string(text_.substr(start, pos_ - start));
    char* end = nullptr;
    t.number = std::strtod(t.text.c_str(), &end);
    if (end != t.text.c_str() + t.text.size() || !std::isfinite(t.number)) {
      t.kind = Tok::Bad;
      t.text = "malformed number '" + t.text + "'";
      return t;
    }
    t.kind = Tok::Number;
    return t;
  }

  Token lex_word(Token t) {
    // "s.t." is one keyword
    if (text_.substr(pos_, 4) == "s.t.") {
      for (int i = 0; i < 4; ++i) advance();
      t.kind = Tok::KwSt;
      return t;
    }
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      advance();
    t.text = std::string(text_.substr(start, pos_ - start));
    if (t.text == "var") t.kind = Tok::KwVar;
    else if (t.text == "param") t.kind = Tok::KwParam;
    else if (t.text == "binary") t.kind = Tok::KwBinary;
    else if (t.text == "integer") t.kind = Tok::KwInteger;
    else if (t.text == "continuous") t.kind = Tok::KwContinuous;
    else if (t.text == "minimize") t.kind = Tok::KwMinimize;
    else if (t.text == "maximize") t.kind = Tok::KwMaximize;
    else if (t.text == "inf") t.kind = Tok::KwInf;
    else t.kind = Tok::Ident;
    return t;
  }

  static std::string printable(char c) {
    if (std::isprint(static_cast<unsigned char>(c))) return std::string("'") + c + "'";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "byte 0x%02x", static_cast<unsigned char>(c));
    return buf;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct StatementError {
  int line;
  int column;
  std::string message;
};

struct NameRef {
  std::string name;
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  ParseResult run() {
    while (cur_.kind != Tok::End && diags_.size() < kMaxDiagnostics) {
      if (cur_.kind == Tok::Newline) {
        shift();
        continue;
      }
      try {
        statement();
        if (cur_.kind != Tok::Newline && cur_.kind != Tok::End)
          fail(cur_, "unexpected trailing content");
      } catch (const StatementError& e) {
        diags_.push_back({e.line, e.column, e.message, Severity::Error});
        sync_to_newline();
      }
    }
    finish();
    ParseResult out;
    out.diagnostics = std::move(diags_);
    bool has_error = false;
    for (const auto& d : out.diagnostics)
      if (d.severity == Severity::Error) has_error = true;
    if (!has_error) out.model = std::move(model_);
    return out;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const Token& at, std::string message) {
    throw StatementError{at.line, at.column, std::move(message)};
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(cur_, std::string("expected ") + what);
    shift();
  }

  void sync_to_newline() {
    while (cur_.kind != Tok::Newline && cur_.kind != Tok::End) shift();
  }

  void statement() {
    switch (cur_.kind) {
      case Tok::KwVar: var_decl(); break;
      case Tok::KwParam: param_decl(); break;
      case Tok::KwMinimize:
      case Tok::KwMaximize: objective(); break;
      case Tok::KwSt: constraint(); break;
      case Tok::Bad: fail(cur_, "unexpected " + cur_.text);
      default: fail(cur_, "expected 'var', 'param', 'minimize', 'maximize' or 's.t.'");
    }
  }

  void var_decl() {
    const Token kw = cur_;
    shift();
    if (cur_.kind != Tok::Ident) fail(cur_, "expected variable name");
    const std::string name = cur_.text;
    const Token name_tok = cur_;
    shift();
    VarDecl decl;
    decl.name = name;
    switch (cur_.kind) {
      case Tok::KwBinary: decl.domain = VarDomain::Binary; break;
      case Tok::KwInteger: decl.domain = VarDomain::Integer; break;
      case Tok::KwContinuous: decl.domain = VarDomain::Continuous; break;
      default: fail(cur_, "expected 'binary', 'integer' or 'continuous'");
    }
    shift();
    if (decl.domain == VarDomain::Binary) {
      decl.lower = 0.0;
      decl.upper = 1.0;
    } else {
      decl.lower = 0.0;
      decl.upper = kInf;
    }
    if (cur_.kind == Tok::LBracket) {
      shift();
      decl.lower = bound_value(/*lower=*/true);
      expect(Tok::Comma, "','");
      decl.upper = bound_value(/*lower=*/false);
      expect(Tok::RBracket, "']'");
    }
    if (declared_.count(name)) fail(name_tok, "duplicate declaration: " + name);
    if (decl.lower > decl.upper) fail(name_tok, "empty bounds on " + name);
    if (decl.domain == VarDomain::Binary && (decl.lower < 0.0 || decl.upper > 1.0))
      fail(name_tok, "binary variable with bounds outside [0,1]: " + name);
    declared_.insert(name);
    model_.vars.push_back(std::move(decl));
    (void)kw;
  }

  double bound_value(bool lower) {
    double sign = 1.0;
    if (cur_.kind == Tok::Minus) {
      sign = -1.0;
      shift();
    }
    if (cur_.kind == Tok::KwInf) {
      shift();
      return sign * kInf;
    }
    if (cur_.kind != Tok::Number)
      fail(cur_, lower ? "expected lower bound" : "expected upper bound");
    const double v = sign * cur_.number;
    shift();
    return v;
  }

  void param_decl() {
    shift();
    if (cur_.kind != Tok::Ident) fail(cur_, "expected parameter name");
    const std::string name = cur_.text;
    const Token name_tok = cur_;
    shift();
    expect(Tok::Eq, "'='");
    double sign = 1.0;
    if (cur_.kind == Tok::Minus) {
      sign = -1.0;
      shift();
    }
    if (cur_.kind != Tok::Number) fail(cur_, "expected parameter value");
    const double value = sign * cur_.number;
    shift();
    if (declared_.count(name)) fail(name_tok, "duplicate declaration: " + name);
    declared_.insert(name);
    model_.params.push_back({name, value});
  }

  void objective() {
    const Token kw = cur_;
    if (seen_objective_) fail(kw, "duplicate objective");
    seen_objective_ = true;
    model_.sense = cur_.kind == Tok::KwMinimize ? Sense::Minimize : Sense::Maximize;
    shift();
    expect(Tok::Colon, "':'");
    objective_line_ = kw.line;
    model_.objective = expression(0);
  }

  void constraint() {
    shift();
    if (cur_.kind != Tok::Ident) fail(cur_, "expected constraint name");
    const std::string name = cur_.text;
    const Token name_tok = cur_;
    shift();
    expect(Tok::Colon, "':'");
    Constraint c;
    c.name = name;
    c.lhs = expression(0);
    switch (cur_.kind) {
      case Tok::Le: c.rel = Rel::Le; break;
      case Tok::Ge: c.rel = Rel::Ge; break;
      case Tok::Eq: c.rel = Rel::Eq; break;
      case Tok::Bad: fail(cur_, "unexpected " + cur_.text);
      default: fail(cur_, "expected '<=', '>=' or '='");
    }
    shift();
    c.rhs = expression(0);
    if (constraint_names_.count(name)) fail(name_tok, "duplicate constraint name: " + name);
    constraint_names_.insert(name);
    constraint_lines_[name] = name_tok.line;
    model_.constraints.push_back(std::move(c));
  }

  // precedence climbing; level 0 = additive, 1 = multiplicative
  Expr expression(int depth) {
    if (depth > kMaxDepth) fail(cur_, "expression too deeply nested");
    Expr lhs = term(depth + 1);
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const bool minus = cur_.kind == Tok::Minus;
      shift();
      Expr rhs = term(depth + 1);
      lhs = minus ? Expr::sum({lhs, Expr::neg(rhs)}) : Expr::sum({lhs, rhs});
    }
    return lhs;
  }

  Expr term(int depth) {
    if (depth > kMaxDepth) fail(cur_, "expression too deeply nested");
    Expr lhs = unary(depth + 1);
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const bool div = cur_.kind == Tok::Slash;
      shift();
      Expr rhs = unary(depth + 1);
      lhs = div ? Expr::quot(lhs, rhs) : Expr::prod({lhs, rhs});
    }
    return lhs;
  }

  Expr unary(int depth) {
    if (depth > kMaxDepth) fail(cur_, "expression too deeply nested");
    if (cur_.kind == Tok::Minus) {
      shift();
      return Expr::neg(unary(depth + 1));
    }
    if (cur_.kind == Tok::Plus) {
      shift();
      return unary(depth + 1);
    }
    return primary(depth + 1);
  }

  Expr primary(int depth) {
    if (depth > kMaxDepth) fail(cur_, "expression too deeply nested");
    switch (cur_.kind) {
      case Tok::Number: {
        const double v = cur_.number;
        shift();
        return Expr::constant(v);
      }
      case Tok::LParen: {
        shift();
        Expr inner = expression(depth + 1);
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        const Token name_tok = cur_;
        const std::string name = cur_.text;
        shift();
        if (cur_.kind == Tok::LParen) return call(name, name_tok, depth + 1);
        refs_.push_back({name, name_tok.line, name_tok.column});
        return Expr::var(name);
      }
      case Tok::Bad: fail(cur_, "unexpected " + cur_.text);
      default: fail(cur_, "expected an expression");
    }
  }

  Expr call(const std::string& fn, const Token& at, int depth) {
    expect(Tok::LParen, "'('");
    std::vector<Expr> args;
    args.push_back(expression(depth + 1));
    while (cur_.kind == Tok::Comma) {
      shift();
      args.push_back(expression(depth + 1));
    }
    expect(Tok::RParen, "')'");
    auto need = [&](size_t n) {
      if (args.size() != n)
        fail(at, fn + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
    };
    if (fn == "abs") { need(1); return Expr::abs(args[0]); }
    if (fn == "exp") { need(1); return Expr::mono(MonoFn::Exp, args[0]); }
    if (fn == "log") { need(1); return Expr::mono(MonoFn::Log, args[0]); }
    if (fn == "sqrt") { need(1); return Expr::mono(MonoFn::Sqrt, args[0]); }
    if (fn == "min" || fn == "max") {
      if (args.size() < 2) fail(at, fn + " takes at least 2 arguments");
      return fn == "min" ? Expr::min_of(std::move(args)) : Expr::max_of(std::move(args));
    }
    fail(at, "unknown function: " + fn);
  }

  // Identifiers parse as VarRef; those naming a parameter become ParamRef here.
  Expr resolve(const Expr& e, const std::set<std::string>& param_names) {
    if (e.is(ExprKind::VarRef) && param_names.count(e.name()))
      return Expr::param(e.name());
    Expr out = e;
    for (int i = 0; i < e.child_count(); ++i)
      out = out.with_child(i, resolve(out.child(i), param_names));
    return out;
  }

  void collect_used(const Expr& e, std::set<std::string>& used) {
    if (e.is(ExprKind::VarRef) || e.is(ExprKind::ParamRef)) used.insert(e.name());
    for (const Expr& k : e.children()) collect_used(k, used);
  }

  void finish() {
    if (!diags_.empty()) {
      bool has_error = false;
      for (const auto& d : diags_)
        if (d.severity == Severity::Error) has_error = true;
      if (has_error) return;
    }
    if (!seen_objective_) {
      diags_.push_back({1, 1, "missing objective", Severity::Error});
      return;
    }
    std::set<std::string> var_names;
    std::set<std::string> param_names;
    for (const auto& v : model_.vars) var_names.insert(v.name);
    for (const auto& p : model_.params) param_names.insert(p.name);
    bool bad_ref = false;
    for (const auto& r : refs_) {
      if (!var_names.count(r.name) && !param_names.count(r.name)) {
        diags_.push_back({r.line, r.column, "unknown identifier: " + r.name, Severity::Error});
        bad_ref = true;
      }
    }
    if (bad_ref) return;

    model_.objective = resolve(model_.objective, param_names);
    for (auto& c : model_.constraints) {
      c.lhs = resolve(c.lhs, param_names);
      c.rhs = resolve(c.rhs, param_names);
    }
    try {
      model_.objective = normalize(model_.objective, model_.param_values());
    } catch (const Error& e) {
      diags_.push_back({objective_line_, 1, std::string("in objective: ") + e.what(),
                        Severity::Error});
      return;
    }
    for (auto& c : model_.constraints) {
      try {
        c.lhs = normalize(c.lhs, model_.param_values());
        c.rhs = normalize(c.rhs, model_.param_values());
      } catch (const Error& e) {
        diags_.push_back({constraint_lines_[c.name], 1,
                          "in constraint " + c.name + ": " + e.what(), Severity::Error});
        return;
      }
    }
    std::set<std::string> used;
    collect_used(model_.objective, used);
    for (const auto& c : model_.constraints) {
      collect_used(c.lhs, used);
      collect_used(c.rhs, used);
    }
    for (const auto& v : model_.vars)
      if (!used.count(v.name))
        diags_.push_back({1, 1, "variable declared but never used: " + v.name,
                          Severity::Warning});
  }

  Lexer lexer_;
  Token cur_;
  Model model_;
  std::vector<ParseDiagnostic> diags_;
  std::vector<NameRef> refs_;
  std::set<std::string> declared_;
  std::set<std::string> constraint_names_;
  std::map<std::string, int> constraint_lines_;
  bool seen_objective_ = false;
  int objective_line_ = 1;
};

std::string format_bound(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

ParseResult parse_model(std::string_view text) {
  try {
    return Parser(text).run();
  } catch (const std::exception& e) {
    ParseResult out;
    out.diagnostics.push_back({1, 1, std::string("internal parse failure: ") + e.what(),
                               Severity::Error});
    return out;
  }
}

std::string to_nlm(const Model& m) {
  std::string out;
  for (const auto& v : m.vars) {
    out += "var ";
    out += v.name;
    out += v.domain == VarDomain::Binary      ? " binary"
           : v.domain == VarDomain::Integer   ? " integer"
                                              : " continuous";
    const bool default_bounds =
        v.domain == VarDomain::Binary
            ? (v.lower == 0.0 && v.upper == 1.0)
            : (v.lower == 0.0 && v.upper == kInf);
    if (!default_bounds) {
      out += " [" + format_bound(v.lower) + ", " + format_bound(v.upper) + "]";
    }
    out += '\n';
  }
  for (const auto& p : m.params)
    out += "param " + p.name + " = " + format_bound(p.value) + '\n';
  out += m.sense == Sense::Minimize ? "minimize: " : "maximize: ";
  out += to_string(m.objective);
  out += '\n';
  for (const auto& c : m.constraints) {
    out += "s.t. " + c.name + ": " + to_string(c.lhs) + " " + rel_name(c.rel) + " " +
           to_string(c.rhs) + '\n';
  }
  return out;
}

std::string format_diagnostics(const std::vector<ParseDiagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    out += std::to_string(d.line) + ":" + std::to_string(d.column) + ": ";
    out += d.severity == Severity::Error ? "error: " : "warning: ";
    out += d.message;
    out += '\n';
  }
  return out;
}

}  // namespace linform
