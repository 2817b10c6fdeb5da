#include <gtest/gtest.h>

#include <random>

#include "fohl/frontend.hpp"
#include "fohl/semantics.hpp"
#include "support/random_sentences.hpp"

using namespace fohl;

namespace {

std::string fixture(const std::string& name) { return std::string(FOHL_FIXTURES) + "/" + name; }

Model fiveTimeModel() { return buildModel(parseModel(readFile(fixture("five-times-model.json")))); }

std::set<int> truthAt(const std::string& text) {
    Model m = fiveTimeModel();
    return truthSet(m, Assignment{}, parseFormula(text));
}

// A random model over the generator's vocabulary: B, q, 'i and c.
Model randomModel(std::mt19937& rng, int times, int objects) {
    auto coin = [&] { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; };
    auto below = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    Model m;
    for (int t = 0; t < times; ++t) m.timeNames.push_back("t" + std::to_string(t));
    for (int d = 0; d < objects; ++d) m.objectNames.push_back("o" + std::to_string(d));
    m.prec.assign(times, std::vector<bool>(times, false));
    for (int t = 0; t < times; ++t)
        for (int s = 0; s < times; ++s) m.prec[t][s] = coin();
    m.nominals["i"] = below(times);
    m.constants["c"] = below(objects);
    Model::Extension b{1, std::vector<std::set<std::vector<int>>>(times)};
    Model::Extension q{0, std::vector<std::set<std::vector<int>>>(times)};
    for (int t = 0; t < times; ++t) {
        for (int d = 0; d < objects; ++d)
            if (coin()) b.at[t].insert({d});
        if (coin()) q.at[t].insert({});
    }
    m.predicates["B"] = b;
    m.predicates["q"] = q;
    return m;
}

bool transitive(const std::vector<std::vector<bool>>& r) {
    int n = static_cast<int>(r.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (r[a][b] && r[b][c] && !r[a][c]) return false;
    return true;
}

}  // namespace

TEST(FiveTimeModel, LambdaOfDescription) { EXPECT_EQ(truthAt("(lam x. B(x))(iota y. K(y))"), (std::set<int>{1, 4})); }

TEST(FiveTimeModel, NegatedPredicateOfDescription) {
    std::set<int> s = truthAt("(lam x. ~B(x))(iota y. K(y))");
    EXPECT_TRUE(s.count(0));
    EXPECT_FALSE(s.count(2));
    EXPECT_FALSE(s.count(3));
}

TEST(FiveTimeModel, FutureOfDescription) {
    std::set<int> s = truthAt("F (lam x. B(x))(iota y. K(y))");
    EXPECT_TRUE(s.count(0));
    EXPECT_FALSE(s.count(2));
}

TEST(FiveTimeModel, AlwaysOfDescription) { EXPECT_TRUE(truthAt("G (lam x. B(x))(iota y. K(y))").count(3)); }

TEST(FiveTimeModel, NominalsDenoteTheirTimes) {
    EXPECT_EQ(truthAt("'t2"), std::set<int>{2});
    EXPECT_EQ(truthAt("@'t3 F 't1"), (std::set<int>{0, 1, 2, 3, 4}));
    EXPECT_TRUE(truthAt("@'t1 F 't3").empty());
}

TEST(FiveTimeModel, TemporalDescription) {
    // t1 is the only time with B(o1) and not B(o2).
    EXPECT_EQ(truthAt("@{Iota $x. (lam y. B(y))(iota z. K(z)) & ~'t4} 't1").size(), 5u);
    EXPECT_TRUE(truthAt("@{Iota $x. exists y. B(y)} 't1").empty());
}

TEST(Evaluator, MaskAgreesWithPointwise) {
    fohl::testing::SentenceGenerator gen(11);
    std::mt19937 rng(12);
    for (int i = 0; i < 300; ++i) {
        Formula f = gen.next();
        MaskEvaluator eval(f);
        for (int k = 0; k < 3; ++k) {
            Model m = randomModel(rng, 1 + i % 4, 1 + k);
            std::uint64_t mask = eval.evaluate(m, Assignment{});
            for (int t = 0; t < m.times(); ++t)
                ASSERT_EQ(((mask >> t) & 1) != 0, satisfies(m, t, Assignment{}, f)) << printFormula(f) << " at t" << t;
        }
    }
}

TEST(Evaluator, UninterpretedNominalThrows) {
    Model m = fiveTimeModel();
    EXPECT_THROW(satisfies(m, 0, Assignment{}, parseFormula("'nowhere")), EvaluationError);
}

TEST(Oracle, WitnessSatisfiesFormula) {
    Formula f = parseFormula("F p & P ~p & exists x. B(x) & ~B(c)");
    OracleResult r = boundedOracle(f, 3, 2);
    ASSERT_TRUE(std::holds_alternative<SatWitness>(r));
    const auto& w = std::get<SatWitness>(r);
    EXPECT_TRUE(satisfies(w.model, w.time, w.assignment, f));
    EXPECT_EQ(w.model.times(), 2);
    EXPECT_EQ(w.model.objects(), 2);
}

TEST(Oracle, ContradictionHasNoModel) {
    OracleResult r = boundedOracle(parseFormula("F (p & ~p)"), 3, 2);
    ASSERT_TRUE(std::holds_alternative<NoModelUpTo>(r));
    EXPECT_EQ(std::get<NoModelUpTo>(r).maxT, 3);
}

TEST(Oracle, ParallelMatchesSerial) {
    fohl::testing::SentenceGenerator gen(5);
    for (int i = 0; i < 40; ++i) {
        Formula f = mk::neg(gen.next());
        OracleResult par = boundedOracle(f, 2, 2, {.parallel = true});
        OracleResult ser = boundedOracle(f, 2, 2, {.parallel = false});
        ASSERT_EQ(par.index(), ser.index());
        if (par.index() == 0) EXPECT_EQ(std::get<SatWitness>(par).index, std::get<SatWitness>(ser).index);
    }
}

TEST(Oracle, BudgetIsEnforced) {
    Formula f = parseFormula("exists x. exists y. R(x, y) & S(x, y, x)");
    EXPECT_GT(oracleSearchSpace(f, 3, 3), 1000u);
    EXPECT_THROW(boundedOracle(f, 3, 3, {.budget = 1000}), BudgetError);
}

TEST(FrameAxiom, DefinesTransitivity) {
    Formula axiom = parseFormula(readFile(fixture("transitivity.axiom")));
    for (int n = 1; n <= 3; ++n) {
        int pairs = n * n;
        for (int mask = 0; mask < (1 << pairs); ++mask) {
            Model m;
            for (int t = 0; t < n; ++t) m.timeNames.push_back("t" + std::to_string(t));
            m.objectNames = {"o"};
            m.prec.assign(n, std::vector<bool>(n, false));
            for (int k = 0; k < pairs; ++k) m.prec[k / n][k % n] = (mask >> k) & 1;
            bool valid = truthSet(m, Assignment{}, axiom).size() == static_cast<std::size_t>(n);
            EXPECT_EQ(valid, transitive(m.prec)) << "n=" << n << " mask=" << mask;
        }
    }
}

TEST(ModelRoundTrip, ToFileAndBack) {
    ModelFile file = parseModel(readFile(fixture("five-times-model.json")));
    Model m = buildModel(file);
    Model back = buildModel(toModelFile(m, Assignment{}));
    Formula f = parseFormula("(lam x. B(x))(iota y. K(y)) | F (lam x. ~B(x))(iota y. K(y))");
    EXPECT_EQ(truthSet(m, Assignment{}, f), truthSet(back, Assignment{}, f));
}
