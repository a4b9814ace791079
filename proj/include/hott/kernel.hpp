#pragma once

// Bidirectional type checking for the core calculus: Pi, Sigma, Id, a
// cumulative universe tower and the primitive types of datatypes.hpp.
//
// Definitional equality compares weak-head normal forms recursively, which
// agrees with comparing full normal forms. There is no eta for Pi. Sigma is
// eta-expanded when a pair meets a neutral term (see conv_whnf).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hott/datatypes.hpp"
#include "hott/syntax.hpp"
#include "hott/term.hpp"

namespace hott {

struct GlobalEntry {
  Term type;
  std::optional<Term> value;  // nullopt for axioms, which never unfold
};

// Checked global declarations. Append-only; safe for concurrent readers once built.
class Environment {
 public:
  void add(const std::string& name, Term type, std::optional<Term> value) {
    entries_.emplace(name, GlobalEntry{std::move(type), std::move(value)});
    names_.insert(name);
    order_.push_back(name);
  }

  const GlobalEntry* find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool contains(const std::string& name) const { return names_.count(name) != 0; }
  const std::unordered_set<std::string>& names() const { return names_; }
  const std::vector<std::string>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }

 private:
  std::unordered_map<std::string, GlobalEntry> entries_;
  std::unordered_set<std::string> names_;
  std::vector<std::string> order_;
};

class StepBudgetExceeded : public std::runtime_error {
 public:
  explicit StepBudgetExceeded(std::uint64_t limit)
      : std::runtime_error("StepBudgetExceeded: more than " + std::to_string(limit) + " reduction steps") {}
};

struct StepBudget {
  std::uint64_t limit = 1'000'000;
  std::uint64_t used = 0;
};

// Local typing context x1 : A1, ..., xn : An (most recent last) over a global environment.
class Context {
 public:
  explicit Context(const Environment& env, StepBudget* budget = nullptr) : env_(&env), budget_(budget) {}

  Context extend(Term type, std::string name = {}) const {
    Context c = *this;
    c.types_.push_back(std::move(type));
    c.names_.push_back(name.empty() ? "x" + std::to_string(types_.size()) : std::move(name));
    return c;
  }

  // Type of variable i, valid in this context.
  Term lookup(std::uint32_t i) const {
    return shift(types_[types_.size() - 1 - i], static_cast<int>(i) + 1);
  }

  std::size_t size() const { return types_.size(); }
  const Environment& env() const { return *env_; }
  const std::vector<std::string>& names() const { return names_; }

  void tick() const {
    if (budget_ && ++budget_->used > budget_->limit) throw StepBudgetExceeded(budget_->limit);
  }

 private:
  const Environment* env_;
  StepBudget* budget_;
  std::vector<Term> types_;
  std::vector<std::string> names_;
};

enum class TypeErrorKind {
  Mismatch,
  NotAFunction,
  NotAPair,
  NotAType,
  UniverseInconsistency,
  UnboundVariable,
  IllFormedEliminator,
  CannotInfer,
};

inline const char* type_error_kind_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::Mismatch: return "Mismatch";
    case TypeErrorKind::NotAFunction: return "NotAFunction";
    case TypeErrorKind::NotAPair: return "NotAPair";
    case TypeErrorKind::NotAType: return "NotAType";
    case TypeErrorKind::UniverseInconsistency: return "UniverseInconsistency";
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::IllFormedEliminator: return "IllFormedEliminator";
    case TypeErrorKind::CannotInfer: return "CannotInfer";
  }
  return "?";
}

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, const std::string& judgment, Term actual, std::optional<Term> expected,
            const std::string& detail)
      : std::runtime_error(std::string(type_error_kind_name(kind)) + " in " + judgment + ": " + detail),
        kind_(kind),
        judgment_(judgment),
        actual_(std::move(actual)),
        expected_(std::move(expected)) {}

  TypeErrorKind kind() const { return kind_; }
  const std::string& judgment() const { return judgment_; }
  const Term& actual() const { return actual_; }
  const std::optional<Term>& expected() const { return expected_; }

  // Source location and declaration, attached by the module checker.
  std::optional<Span> span;
  std::string declaration;

 private:
  TypeErrorKind kind_;
  std::string judgment_;
  Term actual_;
  std::optional<Term> expected_;
};

Term whnf(const Context& ctx, Term t);
Term normalize(const Context& ctx, const Term& t);
bool conv(const Context& ctx, const Term& a, const Term& b);
bool leq(const Context& ctx, const Term& a, const Term& b);
Term infer(const Context& ctx, const Term& t);
void check(const Context& ctx, const Term& t, const Term& type);

inline Term whnf(const Context& ctx, Term t) {
  std::vector<Term> args;
  for (;;) {
    ctx.tick();
    switch (t->kind) {
      case Kind::Ann:
        t = t->lhs;
        continue;
      case Kind::Ref: {
        const GlobalEntry* e = ctx.env().find(t->name);
        if (e && e->value) {
          t = *e->value;
          continue;
        }
        return t;
      }
      case Kind::App: {
        Term head = spine(t, args);
        Term h = whnf(ctx, head);
        if (h->kind == Kind::App) {
          t = apps(h, args);
          continue;
        }
        if (h->kind == Kind::Lam) {
          t = apps(instantiate(h->lhs, args[0]), args, 1);
          continue;
        }
        if (h->kind == Kind::Prim) {
          std::size_t arity = eliminator_arity(h->prim);
          if (arity && args.size() >= arity) {
            std::size_t m = major_premise(h->prim);
            args[m] = whnf(ctx, args[m]);
            Term r = apps(h, args);
            if (auto d = delta_step(r)) {
              t = *d;
              continue;
            }
            return r;
          }
        }
        return h == head ? t : apps(h, args);
      }
      default:
        return t;
    }
  }
}

// Full beta/delta normal form, reducing under binders. Idempotent.
inline Term normalize(const Context& ctx, const Term& t) {
  Term w = whnf(ctx, t);
  switch (w->kind) {
    case Kind::Lam: return lam(normalize(ctx, w->lhs), w->name);
    case Kind::Pi: return pi(normalize(ctx, w->lhs), normalize(ctx, w->rhs), w->name);
    case Kind::Sigma: return sigma(normalize(ctx, w->lhs), normalize(ctx, w->rhs), w->name);
    case Kind::Pair: return pair(normalize(ctx, w->lhs), normalize(ctx, w->rhs));
    case Kind::App: {
      std::vector<Term> args;
      Term head = spine(w, args);
      for (auto& a : args) a = normalize(ctx, a);
      return apps(head, args);
    }
    default: return w;
  }
}

namespace detail {

inline bool conv_whnf(const Context& ctx, const Term& a, const Term& b);

inline bool same_ref_spine(const Context& ctx, const Term& a, const Term& b) {
  std::vector<Term> xs, ys;
  Term ha = spine(a, xs);
  Term hb = spine(b, ys);
  if (ha->kind != Kind::Ref || hb->kind != Kind::Ref || ha->name != hb->name || xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!conv(ctx, xs[i], ys[i])) return false;
  return true;
}

inline bool conv_whnf(const Context& ctx, const Term& a, const Term& b) {
  if (same(a, b)) return true;
  // Sigma eta: a pair equals a neutral term whose projections match.
  if (a->kind == Kind::Pair && b->kind != Kind::Pair && b->kind != Kind::Lam)
    return conv(ctx, a->lhs, app(prim(Prim::fst), b)) && conv(ctx, a->rhs, app(prim(Prim::snd), b));
  if (b->kind == Kind::Pair && a->kind != Kind::Pair && a->kind != Kind::Lam)
    return conv(ctx, app(prim(Prim::fst), a), b->lhs) && conv(ctx, app(prim(Prim::snd), a), b->rhs);
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Lam: return conv(ctx, a->lhs, b->lhs);
    case Kind::Pi:
    case Kind::Sigma:
    case Kind::Pair: return conv(ctx, a->lhs, b->lhs) && conv(ctx, a->rhs, b->rhs);
    case Kind::App: {
      std::vector<Term> xs, ys;
      Term ha = spine(a, xs);
      Term hb = spine(b, ys);
      if (xs.size() != ys.size() || !same(ha, hb)) return false;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!conv(ctx, xs[i], ys[i])) return false;
      return true;
    }
    default: return false;  // Var, Ref, Prim, Univ: `same` already decided
  }
}

}  // namespace detail

// Definitional equality.
inline bool conv(const Context& ctx, const Term& a, const Term& b) {
  if (same(a, b)) return true;
  if (a->kind == Kind::App && b->kind == Kind::App && detail::same_ref_spine(ctx, a, b)) return true;
  return detail::conv_whnf(ctx, whnf(ctx, a), whnf(ctx, b));
}

// Cumulative subtyping: U_i <= U_j for i <= j, covariant in Pi codomains and
// Sigma components, definitional equality elsewhere.
inline bool leq(const Context& ctx, const Term& a, const Term& b) {
  if (same(a, b)) return true;
  Term wa = whnf(ctx, a);
  Term wb = whnf(ctx, b);
  if (wa->kind == Kind::Univ && wb->kind == Kind::Univ) return wa->level <= wb->level;
  if (wa->kind == Kind::Pi && wb->kind == Kind::Pi)
    return conv(ctx, wa->lhs, wb->lhs) && leq(ctx.extend(wa->lhs), wa->rhs, wb->rhs);
  if (wa->kind == Kind::Sigma && wb->kind == Kind::Sigma)
    return leq(ctx, wa->lhs, wb->lhs) && leq(ctx.extend(wa->lhs), wa->rhs, wb->rhs);
  return detail::conv_whnf(ctx, wa, wb);
}

namespace detail {

inline std::string show(const Context& ctx, const Term& t) { return print_term(t, ctx.names()); }

[[noreturn]] inline void fail(const Context& ctx, TypeErrorKind kind, const std::string& judgment, const Term& actual,
                              std::optional<Term> expected, const std::string& detail) {
  Term a = actual;
  std::string msg = detail;
  try {
    a = normalize(ctx, actual);
    msg += "\n  actual:   " + show(ctx, a);
    if (expected) {
      expected = normalize(ctx, *expected);
      msg += "\n  expected: " + show(ctx, *expected);
    }
  } catch (const StepBudgetExceeded&) {
  }
  throw TypeError(kind, judgment, a, std::move(expected), msg);
}

inline int universe_level(const Context& ctx, const Term& type, const std::string& judgment) {
  Term s = infer(ctx, type);
  Term w = whnf(ctx, s);
  if (w->kind != Kind::Univ) fail(ctx, TypeErrorKind::NotAType, judgment, type, std::nullopt, "not a type: " + show(ctx, type));
  return w->level;
}

// Universe level of a type family given the domains it abstracts over
// (a syntactic Pi telescope, each domain scoped under the previous ones).
inline int family_level(const Context& ctx, const Term& family, const std::vector<Term>& doms) {
  Context c = ctx;
  Term f = family;
  std::size_t i = 0;
  while (i < doms.size() && f->kind == Kind::Lam) {
    c = c.extend(doms[i], f->name);
    f = f->lhs;
    ++i;
  }
  if (i == doms.size()) return universe_level(c, f, "motive");
  Term type = infer(c, f);
  for (; i < doms.size(); ++i) {
    Term w = whnf(c, type);
    if (w->kind != Kind::Pi) fail(c, TypeErrorKind::NotAFunction, "motive", f, std::nullopt, "motive has too few arguments");
    c = c.extend(w->lhs, w->name);
    type = w->rhs;
  }
  Term w = whnf(c, type);
  if (w->kind != Kind::Univ) fail(c, TypeErrorKind::NotAType, "motive", type, std::nullopt, "motive does not land in a universe");
  return w->level;
}

// Instantiates the first level variable in the domain of `type` from `arg`.
inline Term fix_levels(const Context& ctx, Term type, const Term& arg) {
  while (type->lhs->has_level_var) {
    std::vector<Term> doms;
    Term target = type->lhs;
    while (target->kind == Kind::Pi) {
      doms.push_back(target->lhs);
      target = target->rhs;
    }
    if (target->kind != Kind::Univ || target->level >= 0)
      fail(ctx, TypeErrorKind::IllFormedEliminator, "primitive", arg, std::nullopt, "malformed primitive schema");
    int which = -1 - target->level;
    int level = doms.empty() ? universe_level(ctx, arg, "primitive argument") : family_level(ctx, arg, doms);
    type = set_level_var(type, which, level);
  }
  return type;
}

inline Term apply_spine(const Context& ctx, Term type, const std::vector<Term>& args, std::size_t from,
                        const Term& head) {
  for (std::size_t i = from; i < args.size(); ++i) {
    Term w = type->kind == Kind::Pi ? type : whnf(ctx, type);
    if (w->kind != Kind::Pi)
      fail(ctx, TypeErrorKind::NotAFunction, "application", apps(head, args), std::nullopt,
           "applied to too many arguments: " + show(ctx, apps(head, args)));
    if (w->lhs->has_level_var) w = fix_levels(ctx, w, args[i]);
    check(ctx, args[i], w->lhs);
    type = instantiate(w->rhs, args[i]);
  }
  return type;
}

inline Term infer_prim_spine(const Context& ctx, const Term& head, const std::vector<Term>& args) {
  Prim p = head->prim;
  switch (p) {
    case Prim::refl: {
      Term a = args[0];
      Term type = infer(ctx, a);
      return apply_spine(ctx, apps(prim(Prim::Id), {type, a, a}), args, 1, head);
    }
    case Prim::fst:
    case Prim::snd: {
      Term w = whnf(ctx, infer(ctx, args[0]));
      if (w->kind != Kind::Sigma)
        fail(ctx, TypeErrorKind::NotAPair, std::string(prim_name(p)), args[0], std::nullopt,
             "projection from a term that is not a pair: " + show(ctx, args[0]));
      Term type = p == Prim::fst ? w->lhs : instantiate(w->rhs, app(prim(Prim::fst), args[0]));
      return apply_spine(ctx, type, args, 1, head);
    }
    case Prim::inl:
    case Prim::inr:
      fail(ctx, TypeErrorKind::CannotInfer, std::string(prim_name(p)), apps(head, args), std::nullopt,
           "the type of an injection must be known from context; annotate it");
    default: {
      // A level variable shared by several universe arguments (Sum A B) takes the largest of their levels.
      Term type = primitive_type(p);
      std::map<int, int> levels;
      Term walk = type;
      for (std::size_t i = 0; i < args.size() && walk->kind == Kind::Pi; ++i, walk = walk->rhs)
        if (walk->lhs->kind == Kind::Univ && walk->lhs->level < 0) {
          int level = universe_level(ctx, args[i], "primitive argument");
          auto [it, fresh] = levels.emplace(-1 - walk->lhs->level, level);
          if (!fresh) it->second = std::max(it->second, level);
        }
      for (auto [which, level] : levels) type = set_level_var(type, which, level);
      type = apply_spine(ctx, type, args, 0, head);
      if (type->has_level_var)
        fail(ctx, TypeErrorKind::IllFormedEliminator, std::string(prim_name(p)), apps(head, args), std::nullopt,
             std::string(prim_name(p)) + " is missing the arguments that fix its universe levels");
      return type;
    }
  }
}

}  // namespace detail

// Synthesizes the type of t.
inline Term infer(const Context& ctx, const Term& t) {
  using detail::fail;
  switch (t->kind) {
    case Kind::Var:
      if (t->index >= ctx.size())
        fail(ctx, TypeErrorKind::UnboundVariable, "variable", t, std::nullopt, "index out of scope");
      return ctx.lookup(t->index);
    case Kind::Ref: {
      const GlobalEntry* e = ctx.env().find(t->name);
      if (!e) fail(ctx, TypeErrorKind::UnboundVariable, "reference", t, std::nullopt, "unknown name " + t->name);
      return e->type;
    }
    case Kind::Prim: {
      const Term& s = primitive_type(t->prim);
      if (!s || s->has_level_var)
        fail(ctx, TypeErrorKind::IllFormedEliminator, std::string(prim_name(t->prim)), t, std::nullopt,
             std::string(prim_name(t->prim)) + " must be applied to the arguments that determine its type");
      return s;
    }
    case Kind::Univ:
      return univ(t->level + 1);
    case Kind::Pi:
    case Kind::Sigma: {
      int i = detail::universe_level(ctx, t->lhs, "type former");
      int j = detail::universe_level(ctx.extend(t->lhs, t->name), t->rhs, "type former");
      return univ(std::max(i, j));
    }
    case Kind::Lam:
      fail(ctx, TypeErrorKind::CannotInfer, "lambda", t, std::nullopt,
           "cannot infer the type of an unannotated lambda");
    case Kind::Pair:
      fail(ctx, TypeErrorKind::CannotInfer, "pair", t, std::nullopt, "cannot infer the type of an unannotated pair");
    case Kind::Ann:
      detail::universe_level(ctx, t->rhs, "annotation");
      check(ctx, t->lhs, t->rhs);
      return t->rhs;
    case Kind::App: {
      std::vector<Term> args;
      Term head = spine(t, args);
      if (head->kind == Kind::Prim) return detail::infer_prim_spine(ctx, head, args);
      return detail::apply_spine(ctx, infer(ctx, head), args, 0, head);
    }
  }
  return nullptr;
}

// Checks t against type (which must itself be a type in ctx).
inline void check(const Context& ctx, const Term& t, const Term& type) {
  using detail::fail;
  switch (t->kind) {
    case Kind::Lam: {
      Term w = whnf(ctx, type);
      if (w->kind != Kind::Pi)
        fail(ctx, TypeErrorKind::Mismatch, "lambda", t, type, "lambda checked against a non-function type");
      check(ctx.extend(w->lhs, t->name), t->lhs, w->rhs);
      return;
    }
    case Kind::Pair: {
      Term w = whnf(ctx, type);
      if (w->kind != Kind::Sigma)
        fail(ctx, TypeErrorKind::NotAPair, "pair", t, type, "pair checked against a non-Sigma type");
      check(ctx, t->lhs, w->lhs);
      check(ctx, t->rhs, instantiate(w->rhs, t->lhs));
      return;
    }
    case Kind::App: {
      const Term& f = t->lhs;
      if (f->kind == Kind::Prim && (f->prim == Prim::refl || f->prim == Prim::inl || f->prim == Prim::inr)) {
        std::vector<Term> targs;
        Term w = whnf(ctx, type);
        Term th = spine(w, targs);
        if (f->prim == Prim::refl && is_prim(th, Prim::Id) && targs.size() == 3) {
          check(ctx, t->rhs, targs[0]);
          if (!conv(ctx, t->rhs, targs[1]) || !conv(ctx, t->rhs, targs[2]))
            fail(ctx, TypeErrorKind::Mismatch, "refl", apps(prim(Prim::Id), {targs[0], t->rhs, t->rhs}), type,
                 "the endpoints are not definitionally equal");
          return;
        }
        if (f->prim != Prim::refl) {
          if (!is_prim(th, Prim::Sum) || targs.size() != 2)
            fail(ctx, TypeErrorKind::Mismatch, std::string(prim_name(f->prim)), t, type,
                 "injection checked against a non-Sum type");
          check(ctx, t->rhs, f->prim == Prim::inl ? targs[0] : targs[1]);
          return;
        }
      }
      break;
    }
    default:
      break;
  }
  Term actual = infer(ctx, t);
  if (!leq(ctx, actual, type)) {
    Term wa = whnf(ctx, actual);
    Term we = whnf(ctx, type);
    bool universes = wa->kind == Kind::Univ && we->kind == Kind::Univ;
    fail(ctx, universes ? TypeErrorKind::UniverseInconsistency : TypeErrorKind::Mismatch, "check", actual, type,
         "type mismatch for " + detail::show(ctx, t));
  }
}

}  // namespace hott
