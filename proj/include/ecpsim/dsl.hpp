// Copyright 2026 The ecpsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Circuit description language (.ecp files).
//
// Line oriented; `#` starts a comment. Statements:
//
//   circuit <name>
//   param <id>...
//   mode <id>...
//   section prepare|round|recycle|finish
//   source <id> pol=<H|V> [amp=<expr>] [photon=<label>]
//   pbs in=<id> outH=<id> outV=<id>        split
//   pbs inH=<id> inV=<id> out=<id>         merge
//   vbs in=<id> reflect=<id> transmit=<id> t=<expr>
//   bs in1=<id> in2=<id> out1=<id> out2=<id>
//   qnd a=<id> b=<id> select=<n>
//   detect group=<name> modes=<id,...> require=exactly_one [eta=<float>]
//   flip mode=<id> when=<detector>
//   output <id,...>
//
// Sources sharing a photon label are one photon in superposition. Statements
// before the first section header belong to `round`.

#ifndef ECPSIM_DSL_HPP
#define ECPSIM_DSL_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecpsim/errors.hpp"
#include "ecpsim/fock.hpp"

namespace ecpsim::dsl {

// ---------------------------------------------------------------- expressions

struct Expr {
  enum class Kind { Number, Param, Neg, Add, Sub, Mul, Div, Sqrt };
  Kind kind = Kind::Number;
  double value = 0.0;
  std::string name;
  std::vector<Expr> args;

  static Expr number(double v) { return Expr{Kind::Number, v, {}, {}}; }
  static Expr param(std::string n) { return Expr{Kind::Param, 0.0, std::move(n), {}}; }
};

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == Expr::Kind::Number && a.value != b.value) return false;
  if (a.kind == Expr::Kind::Param && a.name != b.name) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!(a.args[i] == b.args[i])) return false;
  }
  return true;
}

inline void collect_params(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Param) out.insert(e.name);
  for (const auto& a : e.args) collect_params(a, out);
}

using Bindings = std::map<std::string, double>;

inline double evaluate(const Expr& e, const Bindings& b) {
  switch (e.kind) {
    case Expr::Kind::Number: return e.value;
    case Expr::Kind::Param: {
      auto it = b.find(e.name);
      if (it == b.end()) throw BindingError("unbound parameter '" + e.name + "'");
      return it->second;
    }
    case Expr::Kind::Neg: return -evaluate(e.args[0], b);
    case Expr::Kind::Add: return evaluate(e.args[0], b) + evaluate(e.args[1], b);
    case Expr::Kind::Sub: return evaluate(e.args[0], b) - evaluate(e.args[1], b);
    case Expr::Kind::Mul: return evaluate(e.args[0], b) * evaluate(e.args[1], b);
    case Expr::Kind::Div: return evaluate(e.args[0], b) / evaluate(e.args[1], b);
    case Expr::Kind::Sqrt: return std::sqrt(evaluate(e.args[0], b));
  }
  return 0.0;
}

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    default: return 4;
  }
}

inline std::string wrap(const std::string& s, bool parens) { return parens ? "(" + s + ")" : s; }

}  // namespace detail

/// Canonical text; reparses to a structurally equal tree.
inline std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number: return format_number(e.value);
    case K::Param: return e.name;
    case K::Sqrt: return "sqrt(" + to_string(e.args[0]) + ")";
    case K::Neg: return "-" + detail::wrap(to_string(e.args[0]), detail::precedence(e.args[0]) < 3);
    default: break;
  }
  const int p = detail::precedence(e);
  const char op = e.kind == K::Add ? '+' : e.kind == K::Sub ? '-' : e.kind == K::Mul ? '*' : '/';
  return detail::wrap(to_string(e.args[0]), detail::precedence(e.args[0]) < p) + op +
         detail::wrap(to_string(e.args[1]), detail::precedence(e.args[1]) <= p);
}

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, int line, int column) : text_(text), line_(line), column_(column) {}

  Expr parse() {
    Expr e = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "' in expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, column_ + static_cast<int>(pos_), msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr binary(Expr::Kind k, Expr l, Expr r) { return Expr{k, 0.0, {}, {std::move(l), std::move(r)}}; }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) {
        e = binary(Expr::Kind::Add, std::move(e), product());
      } else if (accept('-')) {
        e = binary(Expr::Kind::Sub, std::move(e), product());
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = binary(Expr::Kind::Mul, std::move(e), unary());
      } else if (accept('/')) {
        e = binary(Expr::Kind::Div, std::move(e), unary());
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr{Expr::Kind::Neg, 0.0, {}, {unary()}};
    return primary();
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("expression ends unexpectedly");
    const char c = text_[pos_];
    if (accept('(')) {
      Expr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string id(text_.substr(start, pos_ - start));
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        if (id != "sqrt") {
          pos_ = start;
          fail("unknown function '" + id + "'");
        }
        ++pos_;
        Expr arg = sum();
        if (!accept(')')) fail("expected ')'");
        return Expr{Expr::Kind::Sqrt, 0.0, {}, {std::move(arg)}};
      }
      return Expr::param(std::move(id));
    }
    fail("unexpected '" + std::string(1, c) + "' in expression");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::number(v);
  }

  std::string_view text_;
  int line_;
  int column_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expr(std::string_view text, int line = 1, int column = 1) {
  return detail::ExprParser(text, line, column).parse();
}

// ----------------------------------------------------------------- statements

enum class Kind { Circuit, Param, Mode, Section, Source, Pbs, Vbs, Bs, Qnd, Detect, Flip, Output };

enum class Section { Prepare, Round, Recycle, Finish };

inline std::string to_string(Section s) {
  switch (s) {
    case Section::Prepare: return "prepare";
    case Section::Round: return "round";
    case Section::Recycle: return "recycle";
    case Section::Finish: return "finish";
  }
  return "round";
}

struct Statement {
  Kind kind = Kind::Output;
  std::vector<std::string> names;              // positional identifiers / detect modes
  std::map<std::string, std::string> ports;    // mode-valued fields
  Pol pol = Pol::H;                            // source
  std::optional<Expr> expr;                    // source amp, vbs t
  std::string label;                           // source photon, detect group
  unsigned select = 1;                         // qnd
  std::optional<double> eta;                   // detect

  // position data, ignored by structural comparison
  int line = 0;
  int column = 1;
  std::map<std::string, int> field_columns;

  const std::string& port(const std::string& key) const { return ports.at(key); }
  bool has(const std::string& key) const { return ports.count(key) != 0; }
  bool is_split() const { return kind == Kind::Pbs && has("in"); }
  bool is_merge() const { return kind == Kind::Pbs && has("inH"); }

  int column_of(const std::string& field) const {
    auto it = field_columns.find(field);
    return it == field_columns.end() ? column : it->second;
  }

  /// Spatial modes this statement touches.
  std::vector<std::string> modes() const {
    std::vector<std::string> m;
    if (kind == Kind::Source || kind == Kind::Detect || kind == Kind::Output) m = names;
    for (const auto& [k, v] : ports) m.push_back(v);
    return m;
  }

  /// Spatial modes this statement creates photons in.
  std::vector<std::string> produced() const {
    switch (kind) {
      case Kind::Source: return names;
      case Kind::Pbs: return is_split() ? std::vector{port("outH"), port("outV")} : std::vector{port("out")};
      case Kind::Vbs: return {port("reflect"), port("transmit")};
      case Kind::Bs: return {port("out1"), port("out2")};
      default: return {};
    }
  }
};

inline bool operator==(const Statement& a, const Statement& b) {
  return a.kind == b.kind && a.names == b.names && a.ports == b.ports && a.pol == b.pol && a.expr == b.expr &&
         a.label == b.label && a.select == b.select && a.eta == b.eta;
}

struct SectionedStatement {
  Section section;
  const Statement* statement;
};

struct CircuitDoc {
  std::vector<Statement> statements;

  friend bool operator==(const CircuitDoc& a, const CircuitDoc& b) { return a.statements == b.statements; }

  std::string name() const {
    for (const auto& s : statements) {
      if (s.kind == Kind::Circuit) return s.names.front();
    }
    return "circuit";
  }

  std::vector<std::string> params() const {
    std::vector<std::string> p;
    for (const auto& s : statements) {
      if (s.kind == Kind::Param) p.insert(p.end(), s.names.begin(), s.names.end());
    }
    return p;
  }

  std::vector<std::string> output_modes() const {
    for (const auto& s : statements) {
      if (s.kind == Kind::Output) return s.names;
    }
    return {};
  }

  /// Element statements tagged with their section.
  std::vector<SectionedStatement> elements() const {
    std::vector<SectionedStatement> out;
    Section current = Section::Round;
    for (const auto& s : statements) {
      if (s.kind == Kind::Section) {
        current = s.names.front() == "prepare"   ? Section::Prepare
                  : s.names.front() == "recycle" ? Section::Recycle
                  : s.names.front() == "finish"  ? Section::Finish
                                                 : Section::Round;
      } else if (s.kind != Kind::Circuit && s.kind != Kind::Param && s.kind != Kind::Mode && s.kind != Kind::Output) {
        out.push_back({current, &s});
      }
    }
    return out;
  }

  std::size_t detector_count() const {
    std::set<std::string> d;
    for (const auto& s : statements) {
      if (s.kind == Kind::Detect) d.insert(s.names.begin(), s.names.end());
    }
    return d.size();
  }
};

// --------------------------------------------------------------------- parser

namespace detail {

struct Token {
  std::string text;
  int column;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

/// Position of '=' when `tok` starts with `identifier=`, else npos.
inline std::size_t field_split(const std::string& tok) {
  const auto eq = tok.find('=');
  if (eq == std::string::npos || eq == 0) return std::string::npos;
  return is_identifier(std::string_view(tok).substr(0, eq)) ? eq : std::string::npos;
}

struct Field {
  std::string value;
  int column;  // column of the value
  int key_column;
};

struct Line {
  int number;
  Token keyword;
  std::vector<Token> positional;
  std::map<std::string, Field> fields;
};

inline std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    if (i >= text.size()) break;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r') ++i;
    out.push_back({text.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

inline Line split_line(int number, const std::vector<Token>& tokens) {
  Line line{number, tokens.front(), {}, {}};
  std::string current;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    const auto eq = field_split(t.text);
    if (eq != std::string::npos) {
      current = t.text.substr(0, eq);
      if (line.fields.count(current)) throw ParseError(number, t.column, "duplicate field '" + current + "'");
      line.fields[current] = Field{t.text.substr(eq + 1), t.column + static_cast<int>(eq) + 1, t.column};
    } else if (!current.empty()) {
      line.fields[current].value += " " + t.text;
    } else {
      line.positional.push_back(t);
    }
  }
  return line;
}

/// Splits comma- or space-separated identifiers out of positional tokens.
inline std::vector<Token> identifier_list(const std::vector<Token>& tokens, int line) {
  std::vector<Token> out;
  for (const auto& t : tokens) {
    std::size_t start = 0;
    while (start <= t.text.size()) {
      const auto comma = t.text.find(',', start);
      const auto end = comma == std::string::npos ? t.text.size() : comma;
      const std::string id = t.text.substr(start, end - start);
      const int col = t.column + static_cast<int>(start);
      if (!id.empty()) {
        if (!is_identifier(id)) throw ParseError(line, col, "invalid identifier '" + id + "'");
        out.push_back({id, col});
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

class StatementBuilder {
 public:
  explicit StatementBuilder(const Line& l) : l_(l) {
    st_.line = l.number;
    st_.column = l.keyword.column;
  }

  Statement build() {
    const std::string& kw = l_.keyword.text;
    if (kw == "circuit") {
      st_.kind = Kind::Circuit;
      no_fields();
      names(1, 1);
    } else if (kw == "param") {
      st_.kind = Kind::Param;
      no_fields();
      names(1, 0);
    } else if (kw == "mode") {
      st_.kind = Kind::Mode;
      no_fields();
      names(1, 0);
    } else if (kw == "section") {
      st_.kind = Kind::Section;
      no_fields();
      names(1, 1);
      const auto& s = st_.names.front();
      if (s != "prepare" && s != "round" && s != "recycle" && s != "finish") {
        throw ParseError(l_.number, l_.positional.front().column, "unknown section '" + s + "'");
      }
    } else if (kw == "source") {
      st_.kind = Kind::Source;
      names(1, 1);
      allow({"pol", "amp", "photon"});
      const auto pol = parse_pol(required("pol"));
      if (!pol) throw ParseError(l_.number, l_.fields.at("pol").column, "polarization must be H or V");
      st_.pol = *pol;
      if (l_.fields.count("amp")) st_.expr = expression("amp");
      if (l_.fields.count("photon")) st_.label = identifier("photon");
    } else if (kw == "pbs") {
      st_.kind = Kind::Pbs;
      no_positional();
      if (l_.fields.count("in")) {
        allow({"in", "outH", "outV"});
        ports({"in", "outH", "outV"});
      } else {
        allow({"inH", "inV", "out"});
        ports({"inH", "inV", "out"});
      }
    } else if (kw == "vbs") {
      st_.kind = Kind::Vbs;
      no_positional();
      allow({"in", "reflect", "transmit", "t"});
      ports({"in", "reflect", "transmit"});
      st_.expr = expression("t");
    } else if (kw == "bs") {
      st_.kind = Kind::Bs;
      no_positional();
      allow({"in1", "in2", "out1", "out2"});
      ports({"in1", "in2", "out1", "out2"});
    } else if (kw == "qnd") {
      st_.kind = Kind::Qnd;
      no_positional();
      allow({"a", "b", "select"});
      ports({"a", "b"});
      const std::string& v = required("select");
      unsigned sel = 0;
      auto res = std::from_chars(v.data(), v.data() + v.size(), sel);
      if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ParseError(l_.number, l_.fields.at("select").column, "select must be a non-negative integer");
      }
      st_.select = sel;
    } else if (kw == "detect") {
      st_.kind = Kind::Detect;
      no_positional();
      allow({"group", "modes", "require", "eta"});
      st_.label = identifier("group");
      required("modes");
      const auto& f = l_.fields.at("modes");
      for (const auto& t : identifier_list(tokenize(f.value), l_.number)) st_.names.push_back(t.text);
      st_.field_columns["modes"] = f.column;
      if (st_.names.empty()) throw ParseError(l_.number, f.column, "detect needs at least one mode");
      if (required("require") != "exactly_one") {
        throw ParseError(l_.number, l_.fields.at("require").column, "only require=exactly_one is supported");
      }
      if (l_.fields.count("eta")) {
        const auto& e = l_.fields.at("eta");
        double v = 0.0;
        auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
        if (res.ec != std::errc() || res.ptr != e.value.data() + e.value.size() || !(v >= 0.0 && v <= 1.0)) {
          throw ParseError(l_.number, e.column, "eta must be a number in [0, 1]");
        }
        st_.eta = v;
      }
    } else if (kw == "flip") {
      st_.kind = Kind::Flip;
      no_positional();
      allow({"mode", "when"});
      ports({"mode", "when"});
    } else if (kw == "output") {
      st_.kind = Kind::Output;
      no_fields();
      names(1, 0);
    } else {
      throw ParseError(l_.number, l_.keyword.column, "unknown statement '" + kw + "'");
    }
    return std::move(st_);
  }

 private:
  [[noreturn]] void fail_at(int column, const std::string& msg) const { throw ParseError(l_.number, column, msg); }

  void no_fields() const {
    if (!l_.fields.empty()) fail_at(l_.fields.begin()->second.key_column, "unexpected field");
  }
  void no_positional() const {
    if (!l_.positional.empty()) fail_at(l_.positional.front().column, "unexpected '" + l_.positional.front().text + "'");
  }

  void names(std::size_t min, std::size_t max) {
    const auto ids = identifier_list(l_.positional, l_.number);
    if (ids.size() < min) fail_at(l_.keyword.column, "'" + l_.keyword.text + "' needs an identifier");
    if (max != 0 && ids.size() > max) fail_at(ids[max].column, "unexpected '" + ids[max].text + "'");
    for (const auto& t : ids) {
      st_.names.push_back(t.text);
      st_.field_columns.emplace(t.text, t.column);
    }
  }

  void allow(std::initializer_list<const char*> keys) const {
    for (const auto& [k, f] : l_.fields) {
      bool ok = false;
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) fail_at(f.key_column, "unknown field '" + k + "' for " + l_.keyword.text);
    }
  }

  const std::string& required(const std::string& key) const {
    auto it = l_.fields.find(key);
    if (it == l_.fields.end()) fail_at(l_.keyword.column, l_.keyword.text + " requires " + key + "=");
    if (it->second.value.empty()) fail_at(it->second.column, "empty value for " + key);
    return it->second.value;
  }

  std::string identifier(const std::string& key) {
    const std::string& v = required(key);
    if (!is_identifier(v)) fail_at(l_.fields.at(key).column, "invalid identifier '" + v + "'");
    st_.field_columns[key] = l_.fields.at(key).column;
    return v;
  }

  void ports(std::initializer_list<const char*> keys) {
    for (const char* k : keys) st_.ports[k] = identifier(k);
  }

  Expr expression(const std::string& key) {
    const auto& f = l_.fields.at(key);
    if (f.value.empty()) fail_at(f.column, "empty value for " + key);
    st_.field_columns[key] = f.column;
    return parse_expr(f.value, l_.number, f.column);
  }

  const Line& l_;
  Statement st_;
};

inline void validate(const CircuitDoc& doc, int last_line) {
  auto fail = [](const Statement& s, const std::string& field, const std::string& msg) {
    throw ParseError(s.line, s.column_of(field), msg);
  };

  std::set<std::string> params;
  std::set<std::string> modes;
  const Statement* output = nullptr;
  int circuits = 0;
  for (const auto& s : doc.statements) {
    if (s.kind == Kind::Param) {
      for (const auto& n : s.names) {
        if (!params.insert(n).second) fail(s, n, "parameter '" + n + "' declared twice");
      }
    } else if (s.kind == Kind::Mode) {
      for (const auto& n : s.names) {
        if (!modes.insert(n).second) fail(s, n, "mode '" + n + "' declared twice");
      }
    } else if (s.kind == Kind::Output) {
      if (output) fail(s, "", "more than one output statement");
      output = &s;
    } else if (s.kind == Kind::Circuit) {
      if (++circuits > 1) fail(s, "", "more than one circuit statement");
    }
  }
  if (!output) throw ParseError(last_line, 1, "missing output");

  std::set<std::string> sections_seen;
  for (const auto& s : doc.statements) {
    if (s.kind == Kind::Section && !sections_seen.insert(s.names.front()).second) {
      fail(s, s.names.front(), "section '" + s.names.front() + "' appears twice");
    }
    for (const auto& [key, m] : s.ports) {
      if (!modes.count(m)) fail(s, key, "undeclared mode '" + m + "'");
    }
    if (s.kind == Kind::Source || s.kind == Kind::Detect || s.kind == Kind::Output) {
      for (const auto& m : s.names) {
        if (!modes.count(m)) fail(s, s.kind == Kind::Detect ? "modes" : m, "undeclared mode '" + m + "'");
      }
    }
    if (s.expr) {
      const std::string field = s.kind == Kind::Vbs ? "t" : "amp";
      std::set<std::string> used;
      collect_params(*s.expr, used);
      for (const auto& p : used) {
        if (!params.count(p)) fail(s, field, "undeclared parameter '" + p + "'");
      }
      if (s.kind == Kind::Vbs && used.empty()) {
        const double t = evaluate(*s.expr, {});
        if (!(t >= 0.0 && t <= 1.0)) fail(s, "t", "transmission " + format_number(t) + " outside [0, 1]");
      }
    }
    if (s.kind == Kind::Pbs || s.kind == Kind::Vbs || s.kind == Kind::Bs || s.kind == Kind::Qnd) {
      std::set<std::string> distinct;
      for (const auto& [key, m] : s.ports) {
        if (!distinct.insert(m).second) fail(s, key, "port '" + m + "' used twice");
      }
    }
  }

  std::set<std::string> out_modes(output->names.begin(), output->names.end());
  for (const auto& s : doc.statements) {
    if (s.kind != Kind::Detect) continue;
    for (const auto& m : s.names) {
      if (out_modes.count(m)) fail(s, "modes", "detector mode '" + m + "' is also an output");
    }
  }

  // one producer per mode per section; one photon label counts once
  std::map<Section, std::map<std::string, std::string>> producers;
  std::map<Section, int> qnd_blocks;
  const auto elements = doc.elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& [sec, s] = elements[i];
    const std::string who = s->kind == Kind::Source && !s->label.empty() ? "photon " + s->label
                                                                          : "line " + std::to_string(s->line);
    for (const auto& m : s->produced()) {
      auto [it, inserted] = producers[sec].emplace(m, who);
      if (!inserted && it->second != who) {
        fail(*s, s->kind == Kind::Source ? m : "", "mode '" + m + "' already produced by " + it->second);
      }
    }
    if (s->kind == Kind::Qnd) {
      if (sec != Section::Round) fail(*s, "", "qnd is only allowed in the round section");
      if (i == 0 || elements[i - 1].statement->kind != Kind::Qnd || elements[i - 1].section != sec) {
        if (++qnd_blocks[sec] > 1) fail(*s, "", "qnd statements of a round must be contiguous");
      }
    }
    if (s->kind == Kind::Flip) {
      std::size_t j = i;
      while (j > 0 && elements[j - 1].statement->kind == Kind::Flip && elements[j - 1].section == sec) --j;
      std::set<std::string> detectors;
      while (j > 0 && elements[j - 1].statement->kind == Kind::Detect && elements[j - 1].section == sec) {
        --j;
        detectors.insert(elements[j].statement->names.begin(), elements[j].statement->names.end());
      }
      if (detectors.empty()) fail(*s, "", "flip must follow a detect statement");
      if (!detectors.count(s->port("when"))) {
        fail(*s, "when", "'" + s->port("when") + "' is not a detector of the preceding detect block");
      }
    }
  }
}

}  // namespace detail

inline CircuitDoc parse(std::string_view text) {
  CircuitDoc doc;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string line(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto tokens = detail::tokenize(line);
    if (!tokens.empty()) {
      doc.statements.push_back(detail::StatementBuilder(detail::split_line(number, tokens)).build());
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  // a trailing newline does not open another line
  const int lines = text.empty() ? 0 : (text.back() == '\n' ? number - 1 : number);
  detail::validate(doc, lines + 1);
  return doc;
}

// ----------------------------------------------------------------- serializer

inline std::string to_string(const Statement& s) {
  auto join = [](const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : sep) + x;
    return out;
  };
  auto fields = [&](std::initializer_list<const char*> keys) {
    std::string out;
    for (const char* k : keys) out += std::string(" ") + k + "=" + s.port(k);
    return out;
  };
  switch (s.kind) {
    case Kind::Circuit: return "circuit " + s.names.front();
    case Kind::Param: return "param " + join(s.names, " ");
    case Kind::Mode: return "mode " + join(s.names, " ");
    case Kind::Section: return "section " + s.names.front();
    case Kind::Source: {
      std::string out = "source " + s.names.front() + " pol=" + std::string(ecpsim::to_string(s.pol));
      if (s.expr) out += " amp=" + to_string(*s.expr);
      if (!s.label.empty()) out += " photon=" + s.label;
      return out;
    }
    case Kind::Pbs: return "pbs" + (s.is_split() ? fields({"in", "outH", "outV"}) : fields({"inH", "inV", "out"}));
    case Kind::Vbs: return "vbs" + fields({"in", "reflect", "transmit"}) + " t=" + to_string(*s.expr);
    case Kind::Bs: return "bs" + fields({"in1", "in2", "out1", "out2"});
    case Kind::Qnd: return "qnd" + fields({"a", "b"}) + " select=" + std::to_string(s.select);
    case Kind::Detect: {
      std::string out = "detect group=" + s.label + " modes=" + join(s.names, ",") + " require=exactly_one";
      if (s.eta) out += " eta=" + format_number(*s.eta);
      return out;
    }
    case Kind::Flip: return "flip" + fields({"mode", "when"});
    case Kind::Output: return "output " + join(s.names, ",");
  }
  return {};
}

/// Canonical form: one statement per line, a blank line before each section.
inline std::string serialize(const CircuitDoc& doc) {
  std::string out;
  for (const auto& s : doc.statements) {
    if (s.kind == Kind::Section && !out.empty()) out += "\n";
    out += to_string(s) + "\n";
  }
  return out;
}

}  // namespace ecpsim::dsl

#endif  // ECPSIM_DSL_HPP
