#include "fohl/countermodel.hpp"

#include <algorithm>

#include "fohl/frontend.hpp"

namespace fohl {

namespace {

void requireSaturated(const Branch& b) {
    if (b.status() != BranchStatus::Saturated) throw StateError("branch is not saturated and open");
}

// @j1 j2 on the branch, read literally.
bool nominalEq(const Branch& b, const std::string& j1, const std::string& j2) {
    return b.contains(satAt(j1, mk::nom(j2)));
}

bool objectEq(const Branch& b, const std::string& b1, const std::string& b2) {
    const std::string& r = b.rep(b1);
    return r == b.rep(b2) && b.contains(mk::eq(objectTerm(r), objectTerm(r)));
}

}  // namespace

BranchQuotient quotient(const Branch& branch) {
    requireSaturated(branch);
    BranchQuotient q;
    for (const auto& o : branch.objects()) {
        const std::string& r = branch.rep(o);
        if (!q.objClassOf.count(r)) {
            q.objClassOf[r] = static_cast<int>(q.objClasses.size());
            q.objClasses.emplace_back();
        }
        q.objClassOf[o] = q.objClassOf[r];
        q.objClasses[q.objClassOf[o]].push_back(o);
    }
    // Nominal classes: the oldest member of a class is its representative.
    for (const auto& j : branch.nominals()) {
        int found = -1;
        for (std::size_t c = 0; c < q.timeClasses.size() && found < 0; ++c)
            if (nominalEq(branch, q.timeClasses[c].front(), j)) found = static_cast<int>(c);
        if (found < 0) {
            found = static_cast<int>(q.timeClasses.size());
            q.timeClasses.emplace_back();
        }
        q.timeClasses[found].push_back(j);
        q.timeClassOf[j] = found;
    }
    return q;
}

ModelFile BranchModel::file() const { return toModelFile(model, assignment, designated); }

BranchModel extractModel(const Branch& branch, const std::string& rootNominal, const std::vector<Formula>& vocabulary) {
    BranchQuotient q = quotient(branch);
    BranchModel bm;
    bm.entries = branch.entries();
    bm.objClassOf = q.objClassOf;
    bm.timeClassOf = q.timeClassOf;
    Model& m = bm.model;
    for (const auto& c : q.timeClasses) m.timeNames.push_back(c.front());
    for (const auto& c : q.objClasses) m.objectNames.push_back(c.front());
    m.prec.assign(m.times(), std::vector<bool>(m.times(), false));
    for (const auto& j : branch.nominals()) m.nominals[j] = q.timeClassOf[j];
    for (const auto& o : branch.objects()) {
        if (branch.hasConstant(o))
            m.constants[o] = q.objClassOf[o];
        else
            bm.assignment.objects[o] = q.objClassOf[o];
    }
    auto declare = [&](const std::string& p, int arity) {
        auto& ext = m.predicates[p];
        ext.arity = arity;
        ext.at.resize(m.times());
    };
    for (const auto& f : vocabulary)
        for (const auto& [p, arity] : freeSymbols(f).predicates) declare(p, arity);
    for (const auto& e : branch.entries()) {
        bool positive;
        std::string j;
        Formula body;
        if (!splitSat(e.formula, positive, j, body)) continue;
        for (const auto& [p, arity] : freeSymbols(body).predicates)
            if (!m.predicates.count(p)) declare(p, arity);
        if (!positive) continue;
        int t = q.timeClassOf[j];
        if (body.op() == Op::Future && body.kid(0).op() == Op::Nominal) m.prec[t][q.timeClassOf[body.kid(0).name()]] = true;
        if (body.op() == Op::Pred) {
            std::vector<int> tuple;
            for (const auto& a : body.args()) tuple.push_back(q.objClassOf[a.name]);
            m.predicates[body.name()].at[t].insert(tuple);
        }
    }
    if (m.objects() > 0) bm.assignment.defaultObject = 0;
    if (m.times() > 0) bm.assignment.defaultTime = 0;
    bm.designated = q.timeClassOf.count(rootNominal) ? q.timeClassOf[rootNominal] : 0;
    return bm;
}

CheckReport validateCountermodel(const BranchModel& bm, const Formula& rootFormula) {
    CheckReport r;
    auto fail = [&](const std::string& why) {
        r.ok = false;
        r.failures.push_back(why);
    };
    for (const auto& e : bm.entries) {
        const Formula& f = e.formula;
        try {
            bool positive;
            std::string j;
            Formula body;
            if (splitSat(f, positive, j, body)) {
                bool holds = satisfies(bm.model, bm.timeClassOf.at(j), bm.assignment, body);
                if (holds != positive) fail("branch formula not matched by the model: " + printFormula(f));
                continue;
            }
            bool positiveEq = f.op() == Op::Eq;
            const Formula& eq = positiveEq ? f : f.kid(0);
            bool same = bm.objClassOf.at(eq.args()[0].name) == bm.objClassOf.at(eq.args()[1].name);
            if (same != positiveEq) fail("branch (in)equality not matched by the model: " + printFormula(f));
        } catch (const std::exception& ex) {
            fail("cannot evaluate " + printFormula(f) + ": " + ex.what());
        }
    }
    try {
        if (!satisfies(bm.model, bm.designated, bm.assignment, mk::neg(rootFormula)))
            fail("model does not falsify the root formula at the designated time");
    } catch (const std::exception& ex) {
        fail(std::string("cannot evaluate the root formula: ") + ex.what());
    }
    return r;
}

CheckReport checkEquivalences(const Branch& branch) {
    requireSaturated(branch);
    CheckReport r;
    auto fail = [&](const std::string& why) {
        r.ok = false;
        r.failures.push_back(why);
    };
    const auto& noms = branch.nominals();
    for (const auto& a : noms) {
        if (!nominalEq(branch, a, a)) fail("nominal relation not reflexive at " + a);
        for (const auto& b : noms) {
            if (!nominalEq(branch, a, b)) continue;
            if (!nominalEq(branch, b, a)) fail("nominal relation not symmetric at " + a + ", " + b);
            if (branch.contains(negSat(a, mk::nom(b)))) fail("@" + a + " " + b + " and its negation on an open branch");
            for (const auto& c : noms)
                if (nominalEq(branch, b, c) && !nominalEq(branch, a, c))
                    fail("nominal relation not transitive at " + a + ", " + b + ", " + c);
        }
    }
    const auto& objs = branch.objects();
    for (const auto& a : objs) {
        if (!objectEq(branch, a, a)) fail("object relation not reflexive at " + a);
        for (const auto& b : objs) {
            if (!objectEq(branch, a, b)) continue;
            if (!objectEq(branch, b, a)) fail("object relation not symmetric at " + a + ", " + b);
            for (const auto& c : objs)
                if (objectEq(branch, b, c) && !objectEq(branch, a, c))
                    fail("object relation not transitive at " + a + ", " + b + ", " + c);
        }
    }
    for (const auto& e : branch.entries()) {
        const Formula& f = e.formula;
        if (f.op() == Op::Eq && !objectEq(branch, f.args()[0].name, f.args()[1].name))
            fail("equality outside the object relation: " + printFormula(f));
        if (f.op() == Op::Not && f.kid(0).op() == Op::Eq &&
            objectEq(branch, f.kid(0).args()[0].name, f.kid(0).args()[1].name))
            fail("inequality inside the object relation: " + printFormula(f));
    }
    return r;
}

}  // namespace fohl
