#pragma once

// Core terms: a nameless (de Bruijn) tree shared by types and values.

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hott {

enum class Prim : std::uint8_t {
  Id, refl, J, fst, snd,
  Nat, zero, suc, natind,
  S1, base, loop, circind,
  I, i0, i1, seg, intind,
  Empty, emptyind,
  Unit, tt, unitind,
  Sum, inl, inr, sumind,
};

inline constexpr std::size_t kPrimCount = static_cast<std::size_t>(Prim::sumind) + 1;

inline constexpr std::array<std::string_view, kPrimCount> kPrimNames = {
    "Id",    "refl",     "J",    "fst",    "snd",    "Nat",     "zero",
    "suc",   "natind",   "S1",   "base",   "loop",   "circind", "I",
    "i0",    "i1",       "seg",  "intind", "Empty",  "emptyind", "Unit",
    "tt",    "unitind",  "Sum",  "inl",    "inr",    "sumind",
};

inline std::string_view prim_name(Prim p) { return kPrimNames[static_cast<std::size_t>(p)]; }

inline std::optional<Prim> prim_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kPrimCount; ++i)
    if (kPrimNames[i] == s) return static_cast<Prim>(i);
  return std::nullopt;
}

enum class Kind : std::uint8_t { Var, Ref, Prim, Univ, Lam, Pi, Sigma, Pair, App, Ann };

struct Node;
using Term = std::shared_ptr<const Node>;

// Children by kind:
//   Lam:        lhs = body
//   Pi, Sigma:  lhs = domain, rhs = codomain (under one binder)
//   Pair:       lhs = first, rhs = second
//   App:        lhs = function, rhs = argument
//   Ann:        lhs = term, rhs = type
// `name` is the global name for Ref and a printing hint for binders; hints
// never affect equality.
struct Node {
  Kind kind;
  std::uint32_t index = 0;  // Var
  int level = 0;            // Univ; negative values are schema level variables
  Prim prim = Prim::Id;     // Prim
  std::string name;
  Term lhs;
  Term rhs;
  std::uint32_t loose = 0;  // 1 + largest loose de Bruijn index; 0 when closed
  bool has_level_var = false;
};

namespace detail {

inline Term make(Node n) {
  auto binds = [&] { return n.kind == Kind::Lam || n.kind == Kind::Pi || n.kind == Kind::Sigma; };
  auto under = [](const Term& t, std::uint32_t by) -> std::uint32_t {
    if (!t) return 0;
    return t->loose > by ? t->loose - by : 0;
  };
  switch (n.kind) {
    case Kind::Var:
      n.loose = n.index + 1;
      break;
    case Kind::Univ:
      n.has_level_var = n.level < 0;
      break;
    case Kind::Lam:
      n.loose = under(n.lhs, 1);
      n.has_level_var = n.lhs->has_level_var;
      break;
    default:
      if (n.lhs) {
        n.loose = n.lhs->loose;
        n.has_level_var = n.lhs->has_level_var;
      }
      if (n.rhs) {
        n.loose = std::max(n.loose, binds() ? under(n.rhs, 1) : n.rhs->loose);
        n.has_level_var = n.has_level_var || n.rhs->has_level_var;
      }
      break;
  }
  return std::make_shared<const Node>(std::move(n));
}

}  // namespace detail

inline Term var(std::uint32_t i) { return detail::make({.kind = Kind::Var, .index = i}); }
inline Term ref(std::string name) { return detail::make({.kind = Kind::Ref, .name = std::move(name)}); }
inline Term prim(Prim p) { return detail::make({.kind = Kind::Prim, .prim = p}); }
inline Term univ(int level) { return detail::make({.kind = Kind::Univ, .level = level}); }
inline Term lam(Term body, std::string hint = {}) {
  return detail::make({.kind = Kind::Lam, .name = std::move(hint), .lhs = std::move(body)});
}
inline Term pi(Term dom, Term cod, std::string hint = {}) {
  return detail::make({.kind = Kind::Pi, .name = std::move(hint), .lhs = std::move(dom), .rhs = std::move(cod)});
}
inline Term sigma(Term dom, Term cod, std::string hint = {}) {
  return detail::make(
      {.kind = Kind::Sigma, .name = std::move(hint), .lhs = std::move(dom), .rhs = std::move(cod)});
}
inline Term pair(Term a, Term b) { return detail::make({.kind = Kind::Pair, .lhs = std::move(a), .rhs = std::move(b)}); }
inline Term app(Term f, Term a) { return detail::make({.kind = Kind::App, .lhs = std::move(f), .rhs = std::move(a)}); }
inline Term ann(Term t, Term type) {
  return detail::make({.kind = Kind::Ann, .lhs = std::move(t), .rhs = std::move(type)});
}

inline Term apps(Term f, std::initializer_list<Term> args) {
  for (const auto& a : args) f = app(std::move(f), a);
  return f;
}

inline Term apps(Term f, const std::vector<Term>& args, std::size_t from = 0) {
  for (std::size_t i = from; i < args.size(); ++i) f = app(std::move(f), args[i]);
  return f;
}

// Returns the head of an application spine and fills `args` left to right.
inline Term spine(const Term& t, std::vector<Term>& args) {
  args.clear();
  Term h = t;
  while (h->kind == Kind::App) {
    args.push_back(h->rhs);
    h = h->lhs;
  }
  std::reverse(args.begin(), args.end());
  return h;
}

inline bool is_prim(const Term& t, Prim p) { return t->kind == Kind::Prim && t->prim == p; }

// Structural equality; binder hints are ignored, so this is alpha-equivalence.
inline bool same(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->loose != b->loose) return false;
  switch (a->kind) {
    case Kind::Var: return a->index == b->index;
    case Kind::Ref: return a->name == b->name;
    case Kind::Prim: return a->prim == b->prim;
    case Kind::Univ: return a->level == b->level;
    case Kind::Lam: return same(a->lhs, b->lhs);
    default: return same(a->lhs, b->lhs) && same(a->rhs, b->rhs);
  }
}

inline std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  if (t->lhs) n += term_size(t->lhs);
  if (t->rhs) n += term_size(t->rhs);
  return n;
}

// Adds `by` to every index >= cutoff.
inline Term shift(const Term& t, int by, std::uint32_t cutoff = 0) {
  if (by == 0 || t->loose <= cutoff) return t;
  switch (t->kind) {
    case Kind::Var:
      return t->index >= cutoff ? var(static_cast<std::uint32_t>(static_cast<int>(t->index) + by)) : t;
    case Kind::Lam:
      return lam(shift(t->lhs, by, cutoff + 1), t->name);
    case Kind::Pi:
      return pi(shift(t->lhs, by, cutoff), shift(t->rhs, by, cutoff + 1), t->name);
    case Kind::Sigma:
      return sigma(shift(t->lhs, by, cutoff), shift(t->rhs, by, cutoff + 1), t->name);
    case Kind::Pair: return pair(shift(t->lhs, by, cutoff), shift(t->rhs, by, cutoff));
    case Kind::App: return app(shift(t->lhs, by, cutoff), shift(t->rhs, by, cutoff));
    case Kind::Ann: return ann(shift(t->lhs, by, cutoff), shift(t->rhs, by, cutoff));
    default: return t;
  }
}

namespace detail {

inline Term subst_at(const Term& t, std::uint32_t k, const Term& s, std::uint32_t depth) {
  if (t->loose <= k + depth) return t;
  switch (t->kind) {
    case Kind::Var:
      if (t->index == k + depth) return shift(s, static_cast<int>(depth));
      return var(t->index - 1);  // index > k + depth, since loose > k + depth
    case Kind::Lam:
      return lam(subst_at(t->lhs, k, s, depth + 1), t->name);
    case Kind::Pi:
      return pi(subst_at(t->lhs, k, s, depth), subst_at(t->rhs, k, s, depth + 1), t->name);
    case Kind::Sigma:
      return sigma(subst_at(t->lhs, k, s, depth), subst_at(t->rhs, k, s, depth + 1), t->name);
    case Kind::Pair: return pair(subst_at(t->lhs, k, s, depth), subst_at(t->rhs, k, s, depth));
    case Kind::App: return app(subst_at(t->lhs, k, s, depth), subst_at(t->rhs, k, s, depth));
    case Kind::Ann: return ann(subst_at(t->lhs, k, s, depth), subst_at(t->rhs, k, s, depth));
    default: return t;
  }
}

}  // namespace detail

// Replaces loose variable k by s and closes the gap (indices above k drop by one).
// s is expressed in the context obtained by deleting variable k.
inline Term subst(const Term& t, std::uint32_t k, const Term& s) { return detail::subst_at(t, k, s, 0); }

// Body of a binder applied to an argument.
inline Term instantiate(const Term& body, const Term& arg) { return subst(body, 0, arg); }

inline bool occurs(const Term& t, std::uint32_t k) {
  if (t->loose <= k) return false;
  switch (t->kind) {
    case Kind::Var: return t->index == k;
    case Kind::Lam: return occurs(t->lhs, k + 1);
    case Kind::Pi:
    case Kind::Sigma: return occurs(t->lhs, k) || occurs(t->rhs, k + 1);
    default: return (t->lhs && occurs(t->lhs, k)) || (t->rhs && occurs(t->rhs, k));
  }
}

// Replaces schema level variable `which` (encoded as level -1-which) by a concrete level.
inline Term set_level_var(const Term& t, int which, int level) {
  if (!t->has_level_var) return t;
  switch (t->kind) {
    case Kind::Univ: return t->level == -1 - which ? univ(level) : t;
    case Kind::Lam: return lam(set_level_var(t->lhs, which, level), t->name);
    case Kind::Pi: return pi(set_level_var(t->lhs, which, level), set_level_var(t->rhs, which, level), t->name);
    case Kind::Sigma:
      return sigma(set_level_var(t->lhs, which, level), set_level_var(t->rhs, which, level), t->name);
    case Kind::Pair: return pair(set_level_var(t->lhs, which, level), set_level_var(t->rhs, which, level));
    case Kind::App: return app(set_level_var(t->lhs, which, level), set_level_var(t->rhs, which, level));
    case Kind::Ann: return ann(set_level_var(t->lhs, which, level), set_level_var(t->rhs, which, level));
    default: return t;
  }
}

// Collects the global names referenced by t.
inline void collect_refs(const Term& t, std::vector<std::string>& out) {
  if (t->kind == Kind::Ref) {
    out.push_back(t->name);
    return;
  }
  if (t->lhs) collect_refs(t->lhs, out);
  if (t->rhs) collect_refs(t->rhs, out);
}

}  // namespace hott
