#include <gtest/gtest.h>

#include <functional>

#include "fohl/frontend.hpp"
#include "fohl/syntax.hpp"

using namespace fohl;

namespace {

Symbol bvar(const std::string& n) { return {SymbolKind::BoundVar, n, 0}; }
Symbol cons(const std::string& n) { return {SymbolKind::Constant, n, 0}; }
Symbol fvar(const std::string& n) { return {SymbolKind::FreeVar, n, 0}; }
Formula P(const Term& t) { return mk::pred("P", {t}); }

}  // namespace

TEST(Substitute, ReplacesFreeOccurrence) {
    EXPECT_EQ(substitute(P(Term::bound("x")), bvar("x"), cons("c")), P(Term::constant("c")));
}

TEST(Substitute, LeavesBoundOccurrence) {
    Formula f = mk::exists("x", P(Term::bound("x")));
    EXPECT_EQ(substitute(f, bvar("x"), cons("c")), f);
}

TEST(Substitute, GoesUnderTenseOperators) {
    Formula f = mk::fut(P(Term::bound("x")));
    EXPECT_EQ(substitute(f, bvar("x"), fvar("_a0")), mk::fut(P(Term::free("_a0"))));
}

TEST(Substitute, TenseVariableToNominal) {
    Formula f = mk::at(mk::tvar("t"), mk::pred("q"));
    Formula g = substitute(f, {SymbolKind::TenseVar, "t", 0}, {SymbolKind::Nominal, "j", 0});
    EXPECT_EQ(g, mk::at("j", mk::pred("q")));
}

TEST(Substitute, SortMismatchThrows) {
    EXPECT_THROW(substitute(P(Term::bound("x")), bvar("x"), {SymbolKind::Nominal, "j", 0}), SortError);
}

TEST(ReplaceAt, SingleOccurrenceOfEquality) {
    Formula f = mk::eq(Term::constant("b1"), Term::constant("b1"));
    EXPECT_EQ(replaceAt(f, cons("b1"), cons("b2"), {0}), mk::eq(Term::constant("b2"), Term::constant("b1")));
}

TEST(ReplaceAt, AllOccurrences) {
    Formula f = mk::pred("P", {Term::constant("b1"), Term::constant("b1")});
    EXPECT_EQ(replaceAt(f, cons("b1"), cons("b2"), {0, 1}),
              mk::pred("P", {Term::constant("b2"), Term::constant("b2")}));
}

TEST(ReplaceAt, EmptyPositionSet) {
    Formula f = P(Term::constant("c"));
    EXPECT_EQ(replaceAt(f, cons("b1"), cons("b2"), {}), f);
}

TEST(ReplaceAt, OutOfRangeThrows) {
    EXPECT_THROW(replaceAt(P(Term::constant("b1")), cons("b1"), cons("b2"), {1}), PositionError);
}

TEST(ReplaceAt, SwapBackIsIdentity) {
    Formula f = mk::pred("P", {Term::constant("b1"), Term::constant("c"), Term::constant("b1")});
    Formula g = replaceAt(f, cons("b1"), cons("b2"), {0, 1});
    EXPECT_EQ(replaceAt(g, cons("b2"), cons("b1"), {0, 1}), f);
}

TEST(ExpandAbbrev, Top) { EXPECT_EQ(expandAbbrev(mk::top()), mk::neg(mk::bot())); }

TEST(ExpandAbbrev, Always) {
    EXPECT_EQ(expandAbbrev(mk::always(mk::pred("q"))), mk::neg(mk::fut(mk::neg(mk::pred("q")))));
}

TEST(ExpandAbbrev, Implication) {
    Formula p = mk::pred("p");
    Formula q = mk::pred("q");
    EXPECT_EQ(expandAbbrev(mk::imp(p, q)), mk::neg(mk::conj(mk::neg(mk::neg(p)), mk::neg(q))));
}

TEST(ExpandAbbrev, Forall) {
    Formula f = mk::forall("x", P(Term::bound("x")));
    EXPECT_EQ(expandAbbrev(f), mk::neg(mk::exists("x", mk::neg(P(Term::bound("x"))))));
}

TEST(ExpandAbbrev, OutputIsCore) {
    Formula f = parseSurface("(forall x. G (P(x) <-> q)) | H top | c != d");
    bool core = true;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        core = core && isCore(g.op());
        for (const auto& k : g->kids) walk(k);
    };
    walk(expandAbbrev(f));
    EXPECT_TRUE(core);
}

TEST(WellFormed, DescriptionOutsideLambda) {
    Formula f = mk::pred("P", {Term::description("y", mk::pred("K", {Term::bound("y")}))});
    auto v = wellFormed(f);
    ASSERT_FALSE(v.empty());
    EXPECT_NE(v.front().find("description outside"), std::string::npos);
}

TEST(WellFormed, LambdaDescriptionOk) {
    Formula f = mk::lambda("x", mk::pred("B", {Term::bound("x")}),
                           Term::description("y", mk::pred("K", {Term::bound("y")})));
    EXPECT_TRUE(wellFormed(f).empty());
}

TEST(WellFormed, TemporalDescriptionBindingItsBody) {
    EXPECT_FALSE(wellFormed(mk::tiota("x", mk::tvar("x"))).empty());
}

TEST(WellFormed, FreeBoundVariableInSentence) {
    EXPECT_FALSE(wellFormed(P(Term::bound("x"))).empty());
    EXPECT_TRUE(wellFormed(P(Term::bound("x")), false).empty());
}

TEST(FreeSymbols, NominalAndConstant) {
    SymbolInventory s = freeSymbols(mk::at("j", P(Term::constant("c"))));
    EXPECT_EQ(s.constants, std::set<std::string>{"c"});
    EXPECT_EQ(s.nominals, std::set<std::string>{"j"});
    EXPECT_TRUE(s.freeVars.empty());
    EXPECT_EQ(s.predicates, (std::map<std::string, int>{{"P", 1}}));
}

TEST(FreeSymbols, DownBindsItsVariable) {
    SymbolInventory s = freeSymbols(mk::down("x", mk::at(mk::tvar("x"), mk::pred("q"))));
    EXPECT_TRUE(s.freeTenseVars.empty());
    EXPECT_EQ(s.predicates, (std::map<std::string, int>{{"q", 0}}));
}

TEST(FreeSymbols, LambdaDescriptionPredicates) {
    Formula f = parseFormula("(lam x. B(x))(iota y. K(y))");
    SymbolInventory s = freeSymbols(f);
    EXPECT_EQ(s.predicates, (std::map<std::string, int>{{"B", 1}, {"K", 1}}));
    EXPECT_TRUE(s.constants.empty());
}

TEST(FreeSymbols, SubstitutionAddsTheConstant) {
    Formula f = mk::conj(P(Term::bound("x")), mk::pred("q"));
    SymbolInventory before = freeSymbols(f);
    SymbolInventory after = freeSymbols(substitute(f, bvar("x"), cons("c")));
    before.constants.insert("c");
    EXPECT_EQ(before, after);
}

TEST(FreshSymbol, Counters) {
    EXPECT_EQ(freshSymbol(SymbolKind::FreeVar, {"_a0"}).name, "_a1");
    EXPECT_EQ(freshSymbol(SymbolKind::Nominal, {}).name, "_n0");
    std::set<std::string> used;
    for (int i = 0; i < 5; ++i) EXPECT_TRUE(used.insert(freshSymbol(SymbolKind::Nominal, used).name).second);
}

TEST(CanonicalBinders, AlphaVariantsCoincide) {
    Formula a = parseOpenFormula("@'j down $x. F $x");
    Formula b = parseOpenFormula("@'j down $y. F $y");
    EXPECT_NE(a, b);
    EXPECT_TRUE(alphaEqual(a, b));
    EXPECT_EQ(canonicalBinders(a), canonicalBinders(b));
}

TEST(CanonicalBinders, NoShadowing) {
    Formula f = parseFormula("exists x. (exists y. R(x, y)) & exists z. R(z, z)");
    Formula g = canonicalBinders(f);
    EXPECT_TRUE(alphaEqual(f, g));
    EXPECT_TRUE(wellFormed(g).empty());
}
