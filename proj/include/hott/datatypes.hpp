#pragma once

// Primitive types: Empty, Unit, Sum, Nat, the circle S1 and the interval I.
//
// Point constructors compute (delta rules); the path constructors loop and
// seg never do. Their computation rules are propositional axioms, returned
// by path_beta_axioms().

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hott/syntax.hpp"
#include "hott/term.hpp"

namespace hott {

// Typing schemas for the primitive constants. `Ui` and `Uj` are universe
// level variables fixed by the arguments at each use. refl, fst, snd, inl and
// inr have no schema: the kernel types them directly.
inline const char* primitive_schema_text(Prim p) {
  switch (p) {
    case Prim::Id: return "(A : Ui) -> A -> A -> Ui";
    case Prim::J:
      return "(A : Ui) -> (a b : A) -> (p : Id A a b) -> (R : (x y : A) -> Id A x y -> Uj)"
             " -> ((x : A) -> R x x (refl x)) -> R a b p";
    case Prim::Nat: return "U0";
    case Prim::zero: return "Nat";
    case Prim::suc: return "Nat -> Nat";
    case Prim::natind:
      return "(P : Nat -> Uj) -> P zero -> ((n : Nat) -> P n -> P (suc n)) -> (n : Nat) -> P n";
    case Prim::S1: return "U0";
    case Prim::base: return "S1";
    case Prim::loop: return "Id S1 base base";
    case Prim::circind:
      return "(P : S1 -> Uj) -> (b : P base)"
             " -> Id (P base) (J S1 base base loop (\\x y q. P x -> P y) (\\x u. u) b) b"
             " -> (x : S1) -> P x";
    case Prim::I: return "U0";
    case Prim::i0: return "I";
    case Prim::i1: return "I";
    case Prim::seg: return "Id I i0 i1";
    case Prim::intind:
      return "(P : I -> Uj) -> (a : P i0) -> (b : P i1)"
             " -> Id (P i1) (J I i0 i1 seg (\\x y q. P x -> P y) (\\x u. u) a) b"
             " -> (x : I) -> P x";
    case Prim::Empty: return "U0";
    case Prim::emptyind: return "(P : Empty -> Uj) -> (e : Empty) -> P e";
    case Prim::Unit: return "U0";
    case Prim::tt: return "Unit";
    case Prim::unitind: return "(P : Unit -> Uj) -> P tt -> (u : Unit) -> P u";
    case Prim::Sum: return "Ui -> Ui -> Ui";
    case Prim::sumind:
      return "(A B : Ui) -> (P : Sum A B -> Uj) -> ((a : A) -> P (inl a)) -> ((b : B) -> P (inr b))"
             " -> (s : Sum A B) -> P s";
    default: return nullptr;
  }
}

// Parsed schema for a primitive, or null for the directly typed ones.
inline const Term& primitive_type(Prim p) {
  static const std::array<Term, kPrimCount> table = [] {
    std::array<Term, kPrimCount> t{};
    for (std::size_t i = 0; i < kPrimCount; ++i) {
      const char* text = primitive_schema_text(static_cast<Prim>(i));
      if (text) t[i] = resolve(parse_term(text, 0, true));
    }
    return t;
  }();
  return table[static_cast<std::size_t>(p)];
}

struct DeltaRule {
  Prim eliminator;
  Prim constructor;
  std::size_t major;  // argument position of the scrutinee
  std::string lhs;    // sample redex with schematic arguments
  std::string rhs;    // its contractum
};

struct PathBetaAxiom {
  std::string name;
  std::string type;  // surface text; mentions prelude definitions
};

struct PrimitiveSignature {
  std::string type_former;
  std::string formation_type;
  std::vector<std::pair<std::string, std::string>> constructors;  // name, type
  std::vector<std::string> path_constructors;
  std::string eliminator;
  std::string eliminator_type;
  std::vector<DeltaRule> delta_rules;
  std::vector<PathBetaAxiom> path_beta_axioms;
};

class UnknownPrimitive : public std::runtime_error {
 public:
  explicit UnknownPrimitive(const std::string& name) : std::runtime_error("UnknownPrimitive(" + name + ")") {}
};

// Number of leading arguments an eliminator needs before it can fire, and the
// position of its scrutinee. Zero for non-eliminators.
inline std::size_t eliminator_arity(Prim p) {
  switch (p) {
    case Prim::J: return 6;
    case Prim::natind: return 4;
    case Prim::circind: return 4;
    case Prim::intind: return 5;
    case Prim::emptyind: return 2;
    case Prim::unitind: return 3;
    case Prim::sumind: return 6;
    case Prim::fst:
    case Prim::snd: return 1;
    default: return 0;
  }
}

inline std::size_t major_premise(Prim p) {
  switch (p) {
    case Prim::J: return 3;
    default: return eliminator_arity(p) - 1;
  }
}

inline const std::vector<PathBetaAxiom>& path_beta_axioms() {
  static const std::vector<PathBetaAxiom> axioms = {
      {"circbeta", "(X : U1) -> (a : X) -> (p : Id X a a) -> Id (Id X a a) (ap S1 X (circrec X a p) base base loop) p"},
      {"intbeta", "(X : U1) -> (a b : X) -> (p : Id X a b) -> Id (Id X a b) (ap I X (intrec X a b p) i0 i1 seg) p"},
  };
  return axioms;
}

inline PrimitiveSignature signature_of(const std::string& name) {
  auto schema = [](Prim p) { return std::string(primitive_schema_text(p)); };
  PrimitiveSignature s;
  s.type_former = name;
  if (name == "Empty") {
    s.formation_type = schema(Prim::Empty);
    s.eliminator = "emptyind";
    s.eliminator_type = schema(Prim::emptyind);
  } else if (name == "Unit") {
    s.formation_type = schema(Prim::Unit);
    s.constructors = {{"tt", schema(Prim::tt)}};
    s.eliminator = "unitind";
    s.eliminator_type = schema(Prim::unitind);
    s.delta_rules = {{Prim::unitind, Prim::tt, 2, "unitind P c tt", "c"}};
  } else if (name == "Sum") {
    s.formation_type = schema(Prim::Sum);
    s.constructors = {{"inl", "A -> Sum A B"}, {"inr", "B -> Sum A B"}};
    s.eliminator = "sumind";
    s.eliminator_type = schema(Prim::sumind);
    s.delta_rules = {{Prim::sumind, Prim::inl, 5, "sumind A B P l r (inl a)", "l a"},
                     {Prim::sumind, Prim::inr, 5, "sumind A B P l r (inr b)", "r b"}};
  } else if (name == "Nat") {
    s.formation_type = schema(Prim::Nat);
    s.constructors = {{"zero", schema(Prim::zero)}, {"suc", schema(Prim::suc)}};
    s.eliminator = "natind";
    s.eliminator_type = schema(Prim::natind);
    s.delta_rules = {{Prim::natind, Prim::zero, 3, "natind P z s zero", "z"},
                     {Prim::natind, Prim::suc, 3, "natind P z s (suc n)", "s n (natind P z s n)"}};
  } else if (name == "S1") {
    s.formation_type = schema(Prim::S1);
    s.constructors = {{"base", schema(Prim::base)}};
    s.path_constructors = {"loop"};
    s.constructors.push_back({"loop", schema(Prim::loop)});
    s.eliminator = "circind";
    s.eliminator_type = schema(Prim::circind);
    s.delta_rules = {{Prim::circind, Prim::base, 3, "circind P b l base", "b"}};
    s.path_beta_axioms = {path_beta_axioms()[0]};
  } else if (name == "I") {
    s.formation_type = schema(Prim::I);
    s.constructors = {{"i0", schema(Prim::i0)}, {"i1", schema(Prim::i1)}, {"seg", schema(Prim::seg)}};
    s.path_constructors = {"seg"};
    s.eliminator = "intind";
    s.eliminator_type = schema(Prim::intind);
    s.delta_rules = {{Prim::intind, Prim::i0, 4, "intind P a b l i0", "a"},
                     {Prim::intind, Prim::i1, 4, "intind P a b l i1", "b"}};
    s.path_beta_axioms = {path_beta_axioms()[1]};
  } else {
    throw UnknownPrimitive(name);
  }
  return s;
}

// One contraction of an eliminator applied to a canonical constructor, or
// nullopt when the scrutinee (taken as is, not reduced) is neutral.
// Extra arguments beyond the eliminator's arity are carried over.
inline std::optional<Term> delta_step(const Term& t) {
  std::vector<Term> args;
  Term head = spine(t, args);
  if (head->kind != Kind::Prim) return std::nullopt;
  Prim p = head->prim;
  std::size_t arity = eliminator_arity(p);
  if (arity == 0 || args.size() < arity) return std::nullopt;
  std::vector<Term> margs;
  Term m = spine(args[major_premise(p)], margs);
  auto rest = [&](Term r) { return apps(std::move(r), args, arity); };
  if (m->kind == Kind::Pair && margs.empty()) {
    if (p == Prim::fst) return rest(m->lhs);
    if (p == Prim::snd) return rest(m->rhs);
    return std::nullopt;
  }
  if (m->kind != Kind::Prim) return std::nullopt;
  switch (p) {
    case Prim::J:
      if (m->prim == Prim::refl && margs.size() == 1) return rest(app(args[5], args[1]));
      break;
    case Prim::natind:
      if (m->prim == Prim::zero && margs.empty()) return rest(args[1]);
      if (m->prim == Prim::suc && margs.size() == 1) {
        Term recursive = apps(head, {args[0], args[1], args[2], margs[0]});
        return rest(apps(args[2], {margs[0], recursive}));
      }
      break;
    case Prim::circind:
      if (m->prim == Prim::base && margs.empty()) return rest(args[1]);
      break;
    case Prim::intind:
      if (m->prim == Prim::i0 && margs.empty()) return rest(args[1]);
      if (m->prim == Prim::i1 && margs.empty()) return rest(args[2]);
      break;
    case Prim::unitind:
      if (m->prim == Prim::tt && margs.empty()) return rest(args[1]);
      break;
    case Prim::sumind:
      if (m->prim == Prim::inl && margs.size() == 1) return rest(app(args[3], margs[0]));
      if (m->prim == Prim::inr && margs.size() == 1) return rest(app(args[4], margs[0]));
      break;
    default:
      break;
  }
  return std::nullopt;
}

}  // namespace hott
