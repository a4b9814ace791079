#pragma once

// The axiom constants: univalence (ua), its propositional computation rule
// (uabeta), function extensionality, and the path-beta rules of S1 and I.
//
// Their statements mention prelude definitions (Equiv, transport, ap, ...), so
// the prelude declares them itself in gated sections; the checker pins each
// such declaration to the canonical statement below.

#include <array>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hott/datatypes.hpp"
#include "hott/module.hpp"
#include "hott/syntax.hpp"

namespace hott {

enum class Axiom { ua, uabeta, funext, circbeta, intbeta };

inline constexpr std::array<std::string_view, 5> kAxiomNames = {"ua", "uabeta", "funext", "circbeta", "intbeta"};

inline std::string_view axiom_name(Axiom a) { return kAxiomNames[static_cast<std::size_t>(a)]; }

inline std::optional<Axiom> axiom_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kAxiomNames.size(); ++i)
    if (kAxiomNames[i] == s) return static_cast<Axiom>(i);
  return std::nullopt;
}

class IllFormedAxiom : public std::runtime_error {
 public:
  IllFormedAxiom(const std::string& name, const std::string& why)
      : std::runtime_error("IllFormedAxiom(" + name + "): " + why), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class AxiomSet {
 public:
  AxiomSet() = default;
  AxiomSet(std::initializer_list<Axiom> axioms) {
    for (Axiom a : axioms) bits_ |= bit(a);
    if (contains(Axiom::uabeta) && !contains(Axiom::ua))
      throw std::invalid_argument("uabeta requires ua");
  }

  static AxiomSet all() {
    return {Axiom::ua, Axiom::uabeta, Axiom::funext, Axiom::circbeta, Axiom::intbeta};
  }
  static AxiomSet none() { return {}; }

  bool contains(Axiom a) const { return bits_ & bit(a); }
  bool contains(std::string_view name) const {
    auto a = axiom_from_name(name);
    return a && contains(*a);
  }
  bool empty() const { return bits_ == 0; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < kAxiomNames.size(); ++i)
      if (bits_ & (1u << i)) out.emplace_back(kAxiomNames[i]);
    return out;
  }

  bool operator==(const AxiomSet&) const = default;

 private:
  static unsigned bit(Axiom a) { return 1u << static_cast<unsigned>(a); }
  unsigned bits_ = 0;
};

inline const char* axiom_statement(Axiom a) {
  switch (a) {
    case Axiom::ua: return "(A B : U0) -> Equiv A B -> Id U0 A B";
    case Axiom::uabeta:
      return "(A B : U0) -> (e : Equiv A B) -> (x : A)"
             " -> Id B (transport U0 (\\X. X) A B (ua A B e) x) (applyEquiv A B e x)";
    case Axiom::funext:
      return "(A : U1) -> (B : A -> U1) -> (f g : (x : A) -> B x)"
             " -> ((x : A) -> Id (B x) (f x) (g x)) -> Id ((x : A) -> B x) f g";
    case Axiom::circbeta: return path_beta_axioms()[0].type.c_str();
    case Axiom::intbeta: return path_beta_axioms()[1].type.c_str();
  }
  return "";
}

// Opaque declarations for the enabled axioms, in dependency order.
inline std::vector<Declaration> axiom_declarations(const AxiomSet& set) {
  std::vector<Declaration> out;
  for (std::size_t i = 0; i < kAxiomNames.size(); ++i) {
    Axiom a = static_cast<Axiom>(i);
    if (!set.contains(a)) continue;
    SurfaceTerm type = parse_term(axiom_statement(a));
    out.push_back(Declaration{std::string(kAxiomNames[i]), type, std::nullopt, type.span});
  }
  return out;
}

// Rejects an axiom that reuses a canonical name with a different statement.
inline void validate_axiom(const CheckedModule& m, const ResolvedDeclaration& d) {
  auto a = axiom_from_name(d.name);
  if (!a) return;
  Term expected;
  try {
    expected = resolve(parse_term(axiom_statement(*a)), Scope{{}, &m.environment().names()});
  } catch (const ScopeError& e) {
    throw IllFormedAxiom(d.name, std::string("statement refers to an undeclared name: ") + e.what());
  }
  if (!same(expected, d.type))
    throw IllFormedAxiom(d.name, "expected " + print_term(expected) + " but found " + print_term(d.type));
}

inline bool is_axiom_free(const CheckedDeclaration& d) { return d.axioms.empty(); }

inline bool is_axiom_free(const CheckedModule& m) {
  for (const auto& d : m.declarations())
    if (!is_axiom_free(d)) return false;
  return true;
}

}  // namespace hott
