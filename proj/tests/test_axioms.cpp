#include <gtest/gtest.h>

#include "hott/hott.hpp"

using namespace hott;

namespace {

const CheckedModule& full() {
  static const CheckedModule m = load_prelude();
  return m;
}

const CheckedModule& core() {
  static const CheckedModule m = load_prelude(AxiomSet::none());
  return m;
}

Term parse_in(const CheckedModule& m, const std::string& s) {
  return resolve(parse_term(s), {{}, &m.environment().names()});
}

Term numeral(int n) {
  Term t = prim(Prim::zero);
  while (n-- > 0) t = app(prim(Prim::suc), t);
  return t;
}

}  // namespace

TEST(AxiomSet, Basics) {
  EXPECT_TRUE(AxiomSet::none().empty());
  EXPECT_EQ(AxiomSet::all().names().size(), 5u);
  AxiomSet s{Axiom::ua, Axiom::uabeta};
  EXPECT_TRUE(s.contains(Axiom::ua));
  EXPECT_TRUE(s.contains("uabeta"));
  EXPECT_FALSE(s.contains(Axiom::funext));
  EXPECT_FALSE(s.contains("nonsense"));
  EXPECT_EQ(s.names(), (std::vector<std::string>{"ua", "uabeta"}));
  EXPECT_TRUE((AxiomSet{Axiom::uabeta, Axiom::ua}) == s);
}

TEST(AxiomSet, ComputationRuleNeedsItsAxiom) { EXPECT_THROW((AxiomSet{Axiom::uabeta}), std::invalid_argument); }

TEST(AxiomSet, NamesRoundTrip) {
  for (auto name : kAxiomNames) {
    auto a = axiom_from_name(name);
    ASSERT_TRUE(a);
    EXPECT_EQ(axiom_name(*a), name);
  }
  EXPECT_FALSE(axiom_from_name("univalence"));
}

TEST(Declarations, OnePerEnabledAxiom) {
  EXPECT_EQ(axiom_declarations(AxiomSet::all()).size(), 5u);
  EXPECT_TRUE(axiom_declarations(AxiomSet::none()).empty());
  auto decls = axiom_declarations({Axiom::funext});
  ASSERT_EQ(decls.size(), 1u);
  EXPECT_EQ(decls[0].name, "funext");
  EXPECT_TRUE(decls[0].is_axiom());
}

TEST(Declarations, PreludeStatementsMatchTheCanonicalOnes) {
  for (auto name : kAxiomNames) {
    const CheckedDeclaration* d = full().find(std::string(name));
    ASSERT_NE(d, nullptr) << name;
    EXPECT_TRUE(d->is_axiom());
    EXPECT_TRUE(same(d->type, parse_in(full(), axiom_statement(*axiom_from_name(name)))));
    // An axiom depends on itself and on any axiom its statement mentions.
    std::set<std::string> expected{std::string(name)};
    if (name == "uabeta") expected.insert("ua");
    EXPECT_EQ(d->axioms, expected);
  }
}

TEST(Validation, WrongStatementIsRejected) {
  CheckedModule m = core();
  try {
    check_source(m, "axiom ua : (A B : U0) -> Id U0 A B", 0, {}, validate_axiom);
    FAIL();
  } catch (const IllFormedAxiom& e) {
    EXPECT_EQ(e.name(), "ua");
  }
  // The canonical statement is accepted, and other names are unconstrained.
  CheckedModule ok = core();
  EXPECT_NO_THROW(check_source(ok, std::string("axiom ua : ") + axiom_statement(Axiom::ua), 0, {}, validate_axiom));
  EXPECT_NO_THROW(check_source(ok, "axiom lem : (A : U0) -> Sum A (A -> Empty)", 0, {}, validate_axiom));
}

TEST(Tracking, AxiomFreedom) {
  EXPECT_TRUE(is_axiom_free(core()));
  EXPECT_FALSE(is_axiom_free(full()));
  EXPECT_TRUE(is_axiom_free(CheckedModule{}));
  EXPECT_TRUE(is_axiom_free(lemma(full(), "nat_is_set")));
  EXPECT_FALSE(is_axiom_free(lemma(full(), "wind_loop")));
  EXPECT_EQ(lemma(full(), "U_not_set").axioms, (std::set<std::string>{"ua", "uabeta"}));
  EXPECT_EQ(lemma(full(), "wind_loop").axioms, (std::set<std::string>{"ua", "uabeta", "circbeta"}));
  EXPECT_EQ(lemma(full(), "nat_id_ext").axioms, (std::set<std::string>{"funext"}));
}

TEST(Tracking, DependenciesAreTransitive) {
  CheckedModule m = full();
  check_source(m, "def uses_wind : Z := wind (refl base)\ndef uses_that : Z := uses_wind");
  EXPECT_EQ(lemma(m, "uses_that").axioms, lemma(full(), "wind").axioms);
}

TEST(Neutrality, UnivalenceDoesNotCompute) {
  Context ctx(full().environment());
  Term e = parse_in(full(), "ua Z Z suc_equiv");
  EXPECT_TRUE(same(whnf(ctx, e), e));
  EXPECT_TRUE(conv(ctx, e, parse_in(full(), "ua Z Z suc_equiv")));
  EXPECT_FALSE(conv(ctx, e, parse_in(full(), "refl Z")));
  EXPECT_FALSE(conv(ctx, e, parse_in(full(), "ua Z Z (idE Z)")));
}

TEST(Canonicity, ClosedNaturalsNormalizeToNumerals) {
  CheckedModule m = core();
  check_source(m,
               "def seven : Nat := add (add two two) three\n"
               "def pred_eight : Nat := predN (add seven (suc zero))\n"
               "def via_j : Nat := J Nat two two (refl two) (\\x y q. Nat) (\\x. add x x)\n"
               "def via_sum : Nat := sumind Nat Unit (\\_. Nat) (\\n. suc n) (\\_. zero) (inl three)\n");
  Context ctx(m.environment());
  const std::pair<const char*, int> expected[] = {{"seven", 7}, {"pred_eight", 7}, {"via_j", 4}, {"via_sum", 4}};
  for (const auto& [name, value] : expected) {
    const CheckedDeclaration& d = lemma(m, name);
    EXPECT_TRUE(is_axiom_free(d));
    EXPECT_TRUE(same(normalize(ctx, ref(name)), numeral(value))) << name;
  }
}
