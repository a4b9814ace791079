#pragma once

// Checking a sequence of declarations into an environment.

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hott/kernel.hpp"
#include "hott/syntax.hpp"

namespace hott {

struct CheckedDeclaration {
  std::string name;
  Term type;
  std::optional<Term> value;  // nullopt for axioms
  Span span;
  std::string section;
  std::set<std::string> axioms;  // axiom constants reached transitively; an axiom lists itself

  bool is_axiom() const { return !value.has_value(); }
};

// Checked declarations in order, plus the environment they populate.
class CheckedModule {
 public:
  const Environment& environment() const { return env_; }
  const std::vector<CheckedDeclaration>& declarations() const { return decls_; }
  const std::vector<std::string>& skipped_sections() const { return skipped_; }

  const CheckedDeclaration* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &decls_[it->second];
  }

  void add(CheckedDeclaration d) {
    env_.add(d.name, d.type, d.value);
    index_.emplace(d.name, decls_.size());
    decls_.push_back(std::move(d));
  }

  void note_skipped(std::string section) { skipped_.push_back(std::move(section)); }

 private:
  Environment env_;
  std::vector<CheckedDeclaration> decls_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> skipped_;
};

// Hook run on each axiom after its type checks (used to pin the canonical
// axiom statements).
using AxiomValidator = std::function<void(const CheckedModule&, const ResolvedDeclaration&)>;

// Checks one resolved declaration against the module and appends it.
// Type errors are tagged with the declaration name and span.
inline void check_declaration(CheckedModule& m, const ResolvedDeclaration& d, const std::string& section = {},
                              const AxiomValidator& validate_axiom = {}) {
  Context ctx(m.environment());
  try {
    detail::universe_level(ctx, d.type, "declaration type");
    if (d.body) check(ctx, *d.body, d.type);
  } catch (TypeError& e) {
    e.declaration = d.name;
    e.span = d.span;
    throw;
  }
  if (!d.body && validate_axiom) validate_axiom(m, d);

  CheckedDeclaration c{d.name, d.type, d.body, d.span, section, {}};
  std::vector<std::string> refs;
  collect_refs(d.type, refs);
  if (d.body) collect_refs(*d.body, refs);
  for (const auto& r : refs)
    if (const CheckedDeclaration* dep = m.find(r)) c.axioms.insert(dep->axioms.begin(), dep->axioms.end());
  if (!d.body) c.axioms.insert(d.name);
  m.add(std::move(c));
}

// Parses, resolves and checks module source. `base` is the offset of `text`
// within its file, so spans stay file-relative.
inline std::size_t check_source(CheckedModule& m, std::string_view text, std::size_t base = 0,
                                const std::string& section = {}, const AxiomValidator& validate_axiom = {}) {
  std::vector<Declaration> decls = parse_module(text, base);
  for (const Declaration& d : decls) {
    if (m.environment().contains(d.name)) throw ScopeError(ScopeErrorKind::DuplicateName, d.name, d.span);
    check_declaration(m, resolve_declaration(d, m.environment().names()), section, validate_axiom);
  }
  return decls.size();
}

}  // namespace hott
