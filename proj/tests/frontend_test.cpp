#include <gtest/gtest.h>

#include "fohl/cli.hpp"
#include "fohl/frontend.hpp"
#include "support/random_sentences.hpp"

using namespace fohl;

namespace {

std::string fixture(const std::string& name) { return std::string(FOHL_FIXTURES) + "/" + name; }

void expectRoundTrip(const Formula& f) {
    Formula back = parseFormula(printFormula(f));
    EXPECT_TRUE(alphaEqual(back, f)) << printFormula(f) << " reparsed as " << printFormula(back);
}

}  // namespace

TEST(Parse, BarcanInstance) {
    Formula f = parseSurface("@'j (F (exists x. P(x)) -> exists x. F P(x))");
    ASSERT_EQ(f.op(), Op::At);
    EXPECT_EQ(f.kid(0), mk::nom("j"));
    const Formula& imp = f.kid(1);
    ASSERT_EQ(imp.op(), Op::Imp);
    EXPECT_EQ(imp.kid(0).op(), Op::Future);
    EXPECT_EQ(imp.kid(0).kid(0).op(), Op::Exists);
    EXPECT_EQ(imp.kid(1).op(), Op::Exists);
    EXPECT_EQ(imp.kid(1).kid(0).op(), Op::Future);
}

TEST(Parse, LambdaDescription) {
    Formula f = parseSurface("(lam x. B(x))(iota y. K(y))");
    ASSERT_EQ(f.op(), Op::Lambda);
    EXPECT_EQ(f.name(), "x");
    EXPECT_EQ(f.kid(0), mk::pred("B", {Term::bound("x")}));
    ASSERT_EQ(f.args().size(), 1u);
    EXPECT_EQ(f.args()[0].kind, TermKind::Description);
    EXPECT_EQ(f.args()[0].body, mk::pred("K", {Term::bound("y")}));
}

TEST(Parse, TemporalDescriptionDesignator) {
    Formula f = parseSurface("@{Iota $x. W(t,j)} M(t,j,l)");
    ASSERT_EQ(f.op(), Op::At);
    EXPECT_EQ(f.kid(0).op(), Op::TIota);
    EXPECT_EQ(f.kid(0).kid(0), mk::pred("W", {Term::constant("t"), Term::constant("j")}));
    EXPECT_EQ(f.kid(1), mk::pred("M", {Term::constant("t"), Term::constant("j"), Term::constant("l")}));
}

TEST(Parse, ImplicationIsRightAssociative) {
    Formula f = parseSurface("p -> q -> r");
    ASSERT_EQ(f.op(), Op::Imp);
    EXPECT_EQ(f.kid(1).op(), Op::Imp);
}

TEST(Parse, ConjunctionBindsTighterThanDisjunction) {
    Formula f = parseSurface("p & q | r");
    ASSERT_EQ(f.op(), Op::Or);
    EXPECT_EQ(f.kid(0).op(), Op::And);
}

TEST(Parse, ErrorCarriesPosition) {
    try {
        parseFormula("p &\n  & q");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 2);
        EXPECT_EQ(e.column, 3);
    }
}

TEST(Parse, IllFormedIsRejected) {
    EXPECT_THROW(parseFormula("B(iota y. K(y))"), ParseError);
    EXPECT_THROW(parseFormula("@$x p"), ParseError);
    EXPECT_THROW(parseFormula("{Iota $x. $x}"), ParseError);
}

TEST(Parse, BindersAreRenamedApart) {
    Formula f = parseFormula("(exists x. R(x)) & exists x. S(x)");
    std::set<std::string> names = binderNames(f);
    EXPECT_EQ(names.size(), 2u);
}

TEST(Print, Basics) {
    EXPECT_EQ(printFormula(mk::bot()), "bot");
    EXPECT_EQ(printFormula(mk::neg(mk::at("j", mk::pred("p")))), "~@'j p");
}

TEST(Print, RoundTripsFixtureFormulas) {
    for (const char* file : {"valid.txt", "invalid.txt", "interpolation-cases.txt"})
        for (const auto& line : readFormulaLines(readFile(fixture(file)))) expectRoundTrip(parseFormula(line));
    for (const char* file : {"wedding.fohl", "barcan.fohl", "dd-rule.fohl"}) {
        SourceProblem p = parseProblem(readFile(fixture(file)));
        for (const auto& f : p.premises) expectRoundTrip(f);
        expectRoundTrip(*p.goal);
    }
}

TEST(Print, RoundTripsGeneratedSentences) {
    fohl::testing::SentenceGenerator gen(7);
    for (int i = 0; i < 300; ++i) expectRoundTrip(gen.next());
}

TEST(Problem, EntailmentFile) {
    SourceProblem p = parseProblem(readFile(fixture("wedding.fohl")));
    EXPECT_EQ(p.premises.size(), 2u);
    ASSERT_TRUE(p.goal.has_value());
}

TEST(Problem, GoalMustBeLast) { EXPECT_THROW(parseProblem("|- p\nq\n"), ParseError); }

TEST(Model, FiveTimeModelParses) {
    ModelFile m = parseModel(readFile(fixture("five-times-model.json")));
    EXPECT_EQ(m.times.size(), 5u);
    EXPECT_EQ(m.domain.size(), 2u);
    EXPECT_EQ(m.predicates.count("B"), 1u);
    EXPECT_EQ(m.predicates.count("K"), 1u);
    EXPECT_EQ(parseModel(writeModel(m)), m);
}

TEST(Model, EmptyDomainIsRejected) {
    try {
        parseModel(R"({"times": ["t0"], "prec": [], "domain": [], "predicates": {}})");
        FAIL();
    } catch (const ModelError& e) {
        ASSERT_FALSE(e.violations.empty());
        EXPECT_EQ(e.violations.front(), "domain must be non-empty");
    }
}

TEST(Model, UnknownTimeInPrecIsRejected) {
    EXPECT_THROW(parseModel(R"({"times": ["t0"], "prec": [["t0", "t9"]], "domain": ["o"], "predicates": {}})"),
                 ModelError);
}

TEST(Model, TupleWidthMustMatchArity) {
    EXPECT_THROW(parseModel(R"({"times": ["t0"], "prec": [], "domain": ["o"],
                               "predicates": {"B": {"arity": 1, "extension": {"t0": [["o", "o"]]}}}})"),
                 ModelError);
}
