#pragma once

// Surface syntax: lexing, parsing, scope resolution to core terms, printing.
//
//   module := { decl }
//   decl   := "def" IDENT ":" term ":=" term | "axiom" IDENT ":" term
//   term   := "\" IDENT+ "." term | arrow
//   arrow  := "(" IDENT+ ":" term ")" "->" term | prod [ "->" term ]
//   prod   := "(" IDENT+ ":" term ")" "*" prod | app [ "*" prod ]
//   app    := atom+
//   atom   := IDENT | keyword | "U" NAT | "(" term ")" | "(" term "," term ")"
//           | "(" term ":" term ")"
//
// `--` starts a comment that runs to the end of the line.

#include <cctype>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hott/term.hpp"

namespace hott {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class SKind { Var, Lam, App, Pi, Sigma, Pair, Prim, Univ, Ann };

// Children: Lam [body]; App [fn, arg]; Pi/Sigma [dom, cod]; Pair [fst, snd]; Ann [term, type].
struct SurfaceTerm {
  SKind kind = SKind::Var;
  std::string name;  // Var name or the binder's bound name
  Prim prim = Prim::Id;
  int level = 0;
  std::vector<SurfaceTerm> children;
  Span span;
  // Set on the inner binders of a group `(x y : A)`: the domain is the
  // group's shared domain, scoped outside the group.
  bool shares_domain = false;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
      : std::runtime_error(format(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t offset, const std::vector<std::string>& expected, const std::string& found) {
    std::string msg = "parse error at offset " + std::to_string(offset) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
    return msg + " but found " + found;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

enum class ScopeErrorKind { UnboundVariable, DuplicateName };

class ScopeError : public std::runtime_error {
 public:
  ScopeError(ScopeErrorKind kind, std::string name, Span span)
      : std::runtime_error(std::string(kind == ScopeErrorKind::UnboundVariable ? "UnboundVariable" : "DuplicateName") +
                           "(" + name + ") at offset " + std::to_string(span.begin)),
        kind_(kind),
        name_(std::move(name)),
        span_(span) {}

  ScopeErrorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  Span span() const { return span_; }

 private:
  ScopeErrorKind kind_;
  std::string name_;
  Span span_;
};

// A module declaration as written. An absent body marks an axiom.
struct Declaration {
  std::string name;
  SurfaceTerm type;
  std::optional<SurfaceTerm> body;
  Span span;

  bool is_axiom() const { return !body.has_value(); }
};

// A declaration after scope resolution.
struct ResolvedDeclaration {
  std::string name;
  Term type;
  std::optional<Term> body;
  Span span;

  bool is_axiom() const { return !body.has_value(); }
};

inline bool is_keyword(std::string_view s) {
  return s == "def" || s == "axiom" || prim_from_name(s).has_value();
}

inline bool is_universe_token(std::string_view s) {
  if (s.size() < 2 || s[0] != 'U') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

namespace detail {

enum class Tok { Ident, Keyword, Universe, Backslash, Dot, Comma, Colon, Assign, LParen, RParen, Arrow, Star, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t begin;
  std::size_t end;
  int level = 0;
};

inline std::string describe(const Token& t) {
  return t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
}

inline std::vector<Token> lex(std::string_view src, std::size_t base, bool level_vars) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    auto punct = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(src.substr(start, len)), base + start, base + start + len});
      i += len;
    };
    switch (c) {
      case '\\': punct(Tok::Backslash, 1); continue;
      case '.': punct(Tok::Dot, 1); continue;
      case ',': punct(Tok::Comma, 1); continue;
      case '(': punct(Tok::LParen, 1); continue;
      case ')': punct(Tok::RParen, 1); continue;
      case '*': punct(Tok::Star, 1); continue;
      case ':':
        if (i + 1 < src.size() && src[i + 1] == '=') punct(Tok::Assign, 2);
        else punct(Tok::Colon, 1);
        continue;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          punct(Tok::Arrow, 2);
          continue;
        }
        break;
      default:
        break;
    }
    if (!is_ident_char(c)) throw ParseError(base + i, {"token"}, "'" + std::string(1, c) + "'");
    while (i < src.size() && is_ident_char(src[i])) ++i;
    std::string text(src.substr(start, i - start));
    Token tok{Tok::Ident, text, base + start, base + i};
    if (is_universe_token(text)) {
      tok.kind = Tok::Universe;
      tok.level = std::stoi(text.substr(1));
    } else if (level_vars && (text == "Ui" || text == "Uj")) {
      tok.kind = Tok::Universe;
      tok.level = text == "Ui" ? -1 : -2;
    } else if (is_keyword(text)) {
      tok.kind = Tok::Keyword;
    }
    out.push_back(std::move(tok));
  }
  out.push_back({Tok::End, "", base + src.size(), base + src.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, std::size_t base, bool level_vars) : toks_(lex(src, base, level_vars)) {}

  SurfaceTerm whole_term() {
    SurfaceTerm t = term();
    expect(Tok::End, "end of input");
    return t;
  }

  std::vector<Declaration> module() {
    std::vector<Declaration> decls;
    std::unordered_set<std::string> seen;
    while (peek().kind != Tok::End) {
      const Token& kw = peek();
      if (kw.kind != Tok::Keyword || (kw.text != "def" && kw.text != "axiom"))
        throw ParseError(kw.begin, {"'def'", "'axiom'", "end of input"}, describe(kw));
      bool is_def = kw.text == "def";
      std::size_t begin = kw.begin;
      ++pos_;
      const Token& id = peek();
      if (id.kind != Tok::Ident) throw ParseError(id.begin, {"identifier"}, describe(id));
      Declaration d;
      d.name = id.text;
      Span name_span{id.begin, id.end};
      ++pos_;
      expect(Tok::Colon, "':'");
      d.type = term();
      if (is_def) {
        expect(Tok::Assign, "':='");
        d.body = term();
      }
      d.span = {begin, toks_[pos_ - 1].end};
      if (!seen.insert(d.name).second) throw ScopeError(ScopeErrorKind::DuplicateName, d.name, name_span);
      decls.push_back(std::move(d));
    }
    return decls;
  }

 private:
  struct Group {
    std::vector<std::pair<std::string, Span>> names;
    SurfaceTerm dom;
  };

  struct Parsed {
    SurfaceTerm term;
    std::optional<Group> group;
  };

  const Token& peek() const { return toks_[pos_]; }

  const Token& expect(Tok k, const char* what) {
    const Token& t = peek();
    if (t.kind != k) throw ParseError(t.begin, {what}, describe(t));
    ++pos_;
    return t;
  }

  static SurfaceTerm node(SKind k, Span s) {
    SurfaceTerm t;
    t.kind = k;
    t.span = s;
    return t;
  }

  SurfaceTerm term() {
    if (peek().kind == Tok::Backslash) return lambda();
    return arrow();
  }

  SurfaceTerm lambda() {
    std::size_t begin = peek().begin;
    ++pos_;
    std::vector<std::pair<std::string, Span>> names;
    while (peek().kind == Tok::Ident) {
      names.push_back({peek().text, {peek().begin, peek().end}});
      ++pos_;
    }
    if (names.empty()) throw ParseError(peek().begin, {"identifier"}, describe(peek()));
    expect(Tok::Dot, "'.'");
    SurfaceTerm body = term();
    for (std::size_t i = names.size(); i-- > 0;) {
      SurfaceTerm l = node(SKind::Lam, {i == 0 ? begin : names[i].second.begin, body.span.end});
      l.name = names[i].first;
      l.children.push_back(std::move(body));
      body = std::move(l);
    }
    return body;
  }

  static SurfaceTerm binders(SKind k, const Group& g, SurfaceTerm body, std::size_t begin) {
    for (std::size_t i = g.names.size(); i-- > 0;) {
      SurfaceTerm b = node(k, {i == 0 ? begin : g.names[i].second.begin, body.span.end});
      b.name = g.names[i].first;
      b.shares_domain = i > 0;
      b.children.push_back(g.dom);
      b.children.push_back(std::move(body));
      body = std::move(b);
    }
    return body;
  }

  SurfaceTerm arrow() {
    std::size_t begin = peek().begin;
    Parsed lhs = prod();
    if (peek().kind != Tok::Arrow) return std::move(lhs.term);
    ++pos_;
    SurfaceTerm rhs = term();
    if (lhs.group) return binders(SKind::Pi, *lhs.group, std::move(rhs), begin);
    SurfaceTerm p = node(SKind::Pi, {begin, rhs.span.end});
    p.children.push_back(std::move(lhs.term));
    p.children.push_back(std::move(rhs));
    return p;
  }

  Parsed prod() {
    std::size_t begin = peek().begin;
    Parsed lhs = app();
    if (peek().kind != Tok::Star) return lhs;
    ++pos_;
    Parsed rhs = prod();
    if (lhs.group) return {binders(SKind::Sigma, *lhs.group, std::move(rhs.term), begin), std::nullopt};
    SurfaceTerm s = node(SKind::Sigma, {begin, rhs.term.span.end});
    s.children.push_back(std::move(lhs.term));
    s.children.push_back(std::move(rhs.term));
    return {std::move(s), std::nullopt};
  }

  bool starts_atom() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Keyword:
      case Tok::Universe:
      case Tok::LParen:
        return !(peek().kind == Tok::Keyword && (peek().text == "def" || peek().text == "axiom"));
      default:
        return false;
    }
  }

  Parsed app() {
    if (!starts_atom())
      throw ParseError(peek().begin, {"identifier", "keyword", "universe", "'('", "'\\'"}, describe(peek()));
    Parsed first = atom();
    if (!starts_atom()) return first;
    SurfaceTerm acc = std::move(first.term);
    while (starts_atom()) {
      Parsed a = atom();
      SurfaceTerm ap = node(SKind::App, {acc.span.begin, a.term.span.end});
      ap.children.push_back(std::move(acc));
      ap.children.push_back(std::move(a.term));
      acc = std::move(ap);
    }
    return {std::move(acc), std::nullopt};
  }

  // Variables named by an application chain of identifiers, if that is what t is.
  static bool ident_chain(const SurfaceTerm& t, std::vector<std::pair<std::string, Span>>& out) {
    if (t.kind == SKind::Var) {
      out.push_back({t.name, t.span});
      return true;
    }
    if (t.kind == SKind::App) return ident_chain(t.children[0], out) && ident_chain(t.children[1], out);
    return false;
  }

  Parsed atom() {
    const Token& t = peek();
    Span s{t.begin, t.end};
    switch (t.kind) {
      case Tok::Ident: {
        ++pos_;
        SurfaceTerm v = node(SKind::Var, s);
        v.name = t.text;
        return {std::move(v), std::nullopt};
      }
      case Tok::Keyword: {
        ++pos_;
        SurfaceTerm p = node(SKind::Prim, s);
        p.prim = *prim_from_name(t.text);
        p.name = t.text;
        return {std::move(p), std::nullopt};
      }
      case Tok::Universe: {
        ++pos_;
        SurfaceTerm u = node(SKind::Univ, s);
        u.level = t.level;
        return {std::move(u), std::nullopt};
      }
      case Tok::LParen: {
        ++pos_;
        SurfaceTerm inner = term();
        if (peek().kind == Tok::Comma) {
          ++pos_;
          SurfaceTerm second = term();
          std::size_t end = expect(Tok::RParen, "')'").end;
          SurfaceTerm p = node(SKind::Pair, {s.begin, end});
          p.children.push_back(std::move(inner));
          p.children.push_back(std::move(second));
          return {std::move(p), std::nullopt};
        }
        if (peek().kind == Tok::Colon) {
          ++pos_;
          SurfaceTerm type = term();
          std::size_t end = expect(Tok::RParen, "')'").end;
          std::optional<Group> group;
          std::vector<std::pair<std::string, Span>> names;
          if (ident_chain(inner, names)) group = Group{std::move(names), type};
          SurfaceTerm a = node(SKind::Ann, {s.begin, end});
          a.children.push_back(std::move(inner));
          a.children.push_back(std::move(type));
          return {std::move(a), std::move(group)};
        }
        if (peek().kind != Tok::RParen) throw ParseError(peek().begin, {"')'", "','", "':'"}, describe(peek()));
        ++pos_;
        return {std::move(inner), std::nullopt};
      }
      default:
        throw ParseError(t.begin, {"identifier", "keyword", "universe", "'('"}, describe(t));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses one term. `base` offsets every span; `level_vars` admits the schema
// universes Ui and Uj (used only for primitive signatures).
inline SurfaceTerm parse_term(std::string_view text, std::size_t base = 0, bool level_vars = false) {
  return detail::Parser(text, base, level_vars).whole_term();
}

inline std::vector<Declaration> parse_module(std::string_view text, std::size_t base = 0) {
  return detail::Parser(text, base, false).module();
}

// Names visible to resolve: locals (most recent last) and optionally globals.
struct Scope {
  std::vector<std::string> locals;
  const std::unordered_set<std::string>* globals = nullptr;
};

namespace detail {

inline Term resolve_in(const SurfaceTerm& s, std::vector<std::string>& locals,
                       const std::unordered_set<std::string>* globals, const Term* group_dom) {
  switch (s.kind) {
    case SKind::Var: {
      if (s.name != "_") {
        for (std::size_t i = locals.size(); i-- > 0;)
          if (locals[i] == s.name) return var(static_cast<std::uint32_t>(locals.size() - 1 - i));
        if (globals && globals->count(s.name)) return ref(s.name);
      }
      throw ScopeError(ScopeErrorKind::UnboundVariable, s.name, s.span);
    }
    case SKind::Prim: return prim(s.prim);
    case SKind::Univ: return univ(s.level);
    case SKind::Lam: {
      locals.push_back(s.name);
      Term body = resolve_in(s.children[0], locals, globals, nullptr);
      locals.pop_back();
      return lam(std::move(body), s.name);
    }
    case SKind::Pi:
    case SKind::Sigma: {
      Term dom = s.shares_domain && group_dom ? shift(*group_dom, 1)
                                              : resolve_in(s.children[0], locals, globals, nullptr);
      locals.push_back(s.name);
      const SurfaceTerm& cod_s = s.children[1];
      Term cod = resolve_in(cod_s, locals, globals, cod_s.shares_domain ? &dom : nullptr);
      locals.pop_back();
      return s.kind == SKind::Pi ? pi(std::move(dom), std::move(cod), s.name)
                                 : sigma(std::move(dom), std::move(cod), s.name);
    }
    case SKind::App:
      return app(resolve_in(s.children[0], locals, globals, nullptr),
                 resolve_in(s.children[1], locals, globals, nullptr));
    case SKind::Pair:
      return pair(resolve_in(s.children[0], locals, globals, nullptr),
                  resolve_in(s.children[1], locals, globals, nullptr));
    case SKind::Ann:
      return ann(resolve_in(s.children[0], locals, globals, nullptr),
                 resolve_in(s.children[1], locals, globals, nullptr));
  }
  return nullptr;
}

}  // namespace detail

// Converts named surface syntax to a nameless core term. Variables become the
// index of their nearest binder, or a reference to a global name.
inline Term resolve(const SurfaceTerm& s, const Scope& scope = {}) {
  std::vector<std::string> locals = scope.locals;
  return detail::resolve_in(s, locals, scope.globals, nullptr);
}

inline ResolvedDeclaration resolve_declaration(const Declaration& d, const std::unordered_set<std::string>& globals) {
  Scope scope{{}, &globals};
  ResolvedDeclaration r{d.name, resolve(d.type, scope), std::nullopt, d.span};
  if (d.body) r.body = resolve(*d.body, scope);
  return r;
}

namespace detail {

class Printer {
 public:
  Printer(std::vector<std::string> names, const Term& t) : locals_(std::move(names)) {
    std::vector<std::string> refs;
    collect_refs(t, refs);
    reserved_.insert(refs.begin(), refs.end());
  }

  std::string print(const Term& t, int prec) {
    std::ostringstream os;
    emit(os, t, prec);
    return os.str();
  }

 private:
  // prec: 0 = any term, 1 = product operand, 2 = application head, 3 = atom
  void emit(std::ostream& os, const Term& t, int prec) {
    switch (t->kind) {
      case Kind::Var:
        if (t->index < locals_.size()) os << locals_[locals_.size() - 1 - t->index];
        else os << "#" << t->index;
        return;
      case Kind::Ref: os << t->name; return;
      case Kind::Prim: os << prim_name(t->prim); return;
      case Kind::Univ:
        if (t->level >= 0) os << "U" << t->level;
        else os << (t->level == -1 ? "Ui" : "Uj");
        return;
      case Kind::Pair:
        os << "(";
        emit(os, t->lhs, 0);
        os << ", ";
        emit(os, t->rhs, 0);
        os << ")";
        return;
      case Kind::Ann:
        os << "(";
        emit(os, t->lhs, 0);
        os << " : ";
        emit(os, t->rhs, 0);
        os << ")";
        return;
      case Kind::App: {
        if (prec > 2) os << "(";
        emit(os, t->lhs, 2);
        os << " ";
        emit(os, t->rhs, 3);
        if (prec > 2) os << ")";
        return;
      }
      case Kind::Lam: {
        if (prec > 0) os << "(";
        os << "\\";
        std::size_t pushed = 0;
        Term cur = t;
        while (cur->kind == Kind::Lam) {
          std::string n = occurs(cur->lhs, 0) ? fresh(cur->name) : "_";
          os << (pushed ? " " : "") << n;
          locals_.push_back(n);
          ++pushed;
          cur = cur->lhs;
        }
        os << ". ";
        emit(os, cur, 0);
        locals_.resize(locals_.size() - pushed);
        if (prec > 0) os << ")";
        return;
      }
      case Kind::Pi:
      case Kind::Sigma:
        binder(os, t, prec);
        return;
    }
  }

  void binder(std::ostream& os, const Term& t, int prec) {
    bool is_pi = t->kind == Kind::Pi;
    int own = is_pi ? 0 : 1;
    const char* op = is_pi ? " -> " : " * ";
    if (prec > own) os << "(";
    if (!occurs(t->rhs, 0)) {
      operand(os, t->lhs, is_pi ? 1 : 2);
      os << op;
      locals_.push_back("");
      emit(os, t->rhs, own);
      locals_.pop_back();
    } else {
      std::string dom = print(t->lhs, 0);
      std::vector<std::string> names{fresh(t->name)};
      locals_.push_back(names.back());
      Term cur = t->rhs;
      while (cur->kind == t->kind && occurs(cur->rhs, 0) && same(cur->lhs, shift(t->lhs, static_cast<int>(names.size())))) {
        names.push_back(fresh(cur->name));
        locals_.push_back(names.back());
        cur = cur->rhs;
      }
      os << "(";
      for (std::size_t i = 0; i < names.size(); ++i) os << (i ? " " : "") << names[i];
      os << " : " << dom << ")" << op;
      emit(os, cur, own);
      locals_.resize(locals_.size() - names.size());
    }
    if (prec > own) os << ")";
  }

  // Left operand of a non-dependent arrow or product; a bare annotation there
  // would read back as a binder group, so it gets an extra pair of parentheses.
  void operand(std::ostream& os, const Term& t, int prec) {
    if (t->kind == Kind::Ann) {
      os << "(";
      emit(os, t, 0);
      os << ")";
    } else {
      emit(os, t, prec);
    }
  }

  bool taken(const std::string& n) const {
    if (is_keyword(n) || is_universe_token(n) || n == "Ui" || n == "Uj" || reserved_.count(n)) return true;
    for (const auto& l : locals_)
      if (l == n) return true;
    return false;
  }

  std::string fresh(const std::string& hint) {
    std::string base = hint;
    bool ok = !base.empty() && base != "_";
    for (char c : base) ok = ok && is_ident_char(c);
    if (!ok) base = "x";
    if (!taken(base)) return base;
    for (int i = 1;; ++i) {
      std::string n = base + std::to_string(i);
      if (!taken(n)) return n;
    }
  }

  std::vector<std::string> locals_;
  std::unordered_set<std::string> reserved_;
};

}  // namespace detail

// Renders a core term as surface syntax that parses and resolves back to the
// same term. `names` names the free variables (most recent last).
inline std::string print_term(const Term& t, std::vector<std::string> names = {}) {
  return detail::Printer(std::move(names), t).print(t, 0);
}

}  // namespace hott
