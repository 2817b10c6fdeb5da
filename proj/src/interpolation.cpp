#include "fohl/interpolation.hpp"

#include <algorithm>
#include <map>

#include "fohl/frontend.hpp"

namespace fohl {

namespace {

bool isFreeVar(const std::string& name) { return name.rfind("_a", 0) == 0; }

// Connectives that drop neutral and absorbing constants.
Formula orF(const Formula& a, const Formula& b) {
    if (a.op() == Op::Top || b.op() == Op::Top) return mk::top();
    if (a.op() == Op::Bot) return b;
    if (b.op() == Op::Bot || a == b) return a;
    return mk::disj(a, b);
}

Formula andF(const Formula& a, const Formula& b) {
    if (a.op() == Op::Bot || b.op() == Op::Bot) return mk::bot();
    if (a.op() == Op::Top) return b;
    if (b.op() == Op::Top || a == b) return a;
    return mk::conj(a, b);
}

Formula notF(const Formula& a) {
    if (a.op() == Op::Top) return mk::bot();
    if (a.op() == Op::Bot) return mk::top();
    if (a.op() == Op::Not) return a.kid(0);
    return mk::neg(a);
}

std::set<std::string> objectNames(const Formula& f) {
    std::set<std::string> out;
    for (const auto& t : objectsInOrder(f)) out.insert(t.name);
    return out;
}

bool mentionsNominal(const Formula& f, const std::string& n) {
    auto ns = nominalsInOrder(f);
    return std::find(ns.begin(), ns.end(), n) != ns.end();
}

std::string binderFor(const Formula& f, const char* stem) {
    std::set<std::string> used = binderNames(f);
    for (int i = 0;; ++i) {
        std::string name = stem + std::to_string(i);
        if (!used.count(name)) return name;
    }
}

Formula quantify(const Formula& f, const std::string& object, bool universal) {
    std::string x = binderFor(f, "u");
    Formula body = replaceObject(f, object, Term::bound(x));
    return universal ? mk::forall(x, body) : mk::exists(x, body);
}

// down x. f with nominal n abstracted to x.
Formula bindNominal(const Formula& f, const std::string& n, std::string& x) {
    x = binderFor(f, "w");
    return mk::down(x, abstractNominal(f, n, x));
}

// Drops @n outside modal and hybrid operators of f; sound where f is evaluated at the point named n.
Formula localize(const Formula& f, const std::string& n) {
    switch (f.op()) {
    case Op::At:
        if (f.kid(0).op() == Op::Nominal && f.kid(0).name() == n && !mentionsNominal(f.kid(1), n))
            return localize(f.kid(1), n);
        return f;
    case Op::Not: return notF(localize(f.kid(0), n));
    case Op::And: return andF(localize(f.kid(0), n), localize(f.kid(1), n));
    case Op::Or: return orF(localize(f.kid(0), n), localize(f.kid(1), n));
    case Op::Exists: return mk::exists(f.name(), localize(f.kid(0), n));
    case Op::Forall: return mk::forall(f.name(), localize(f.kid(0), n));
    default: return f;
    }
}

bool splitEntry(const Formula& f, bool& positive, std::string& j, Formula& body) {
    return splitSat(f, positive, j, body);
}

}  // namespace

Formula closureInterpolant(const std::vector<Formula>& closing, const std::vector<Bias>& bias) {
    if (closing.size() == 1) return bias[0] == Bias::R ? mk::top() : mk::bot();
    if (bias[0] == bias[1]) return bias[0] == Bias::R ? mk::top() : mk::bot();
    const Formula& left = bias[0] == Bias::L ? closing[0] : closing[1];
    return left;
}

StepResult interpolantStep(const StepContext& ctx, const std::vector<Formula>& children) {
    Bias bias = ctx.bias != Bias::None ? ctx.bias : ctx.premiseBias.empty() ? Bias::L : ctx.premiseBias[0];
    if (bias == Bias::None) return RuleGap{ctx.rule, bias, "premise without bias"};
    bool left = bias == Bias::L;
    Formula chi = left ? mk::bot() : mk::top();
    for (const auto& c : children) chi = left ? orF(chi, c) : andF(chi, c);

    // Side premises owned by the other side.
    Formula sides = mk::top();
    for (std::size_t p = 0; p < ctx.premises.size(); ++p)
        if (ctx.premiseBias[p] != bias) sides = andF(sides, ctx.premises[p]);
    chi = left ? orF(chi, notF(sides)) : andF(chi, sides);

    // Fresh nominals are bound where they are introduced.
    for (const auto& n : ctx.fresh) {
        if (isFreeVar(n) || !mentionsNominal(chi, n)) continue;
        bool positive;
        std::string j;
        Formula body;
        splitEntry(ctx.premises[0], positive, j, body);
        std::string x;
        if (ctx.rule == "F" || ctx.rule == "P") {
            Formula bound = bindNominal(chi, n, x);
            Formula modal = ctx.rule == "F" ? (left ? mk::fut(bound) : mk::always(bound))
                                            : (left ? mk::past(bound) : mk::hist(bound));
            chi = mk::at(j, modal);
        } else if (ctx.rule == "at-iota-tmp") {
            const Formula& designator = body.kid(0);
            for (const auto& [p, arity] : freeSymbols(designator).predicates) {
                (void)arity;
                if (!ctx.leftPredicates.count(p) || !ctx.rightPredicates.count(p))
                    return RuleGap{ctx.rule, bias, "description predicate " + p + " is not shared"};
            }
            Formula bound = bindNominal(chi, n, x);
            chi = left ? mk::at(designator, bound) : notF(mk::at(designator, notF(bound)));
        } else {
            return RuleGap{ctx.rule, bias, "fresh nominal " + n + " escapes into the interpolant"};
        }
    }

    // Object symbols outside the shared vocabulary of the premise sets are quantified:
    // fresh ones by step bias, then foreign ones universally (missing on L) or existentially.
    std::set<std::string> objs = objectNames(chi);
    for (const auto& a : ctx.fresh)
        if (isFreeVar(a) && objs.count(a)) chi = quantify(chi, a, !left);
    auto isFresh = [&](const std::string& s) {
        return std::find(ctx.fresh.begin(), ctx.fresh.end(), s) != ctx.fresh.end();
    };
    for (const auto& s : objs)
        if (!isFresh(s) && !ctx.leftObjects.count(s)) chi = quantify(chi, s, true);
    for (const auto& s : objs)
        if (!isFresh(s) && ctx.leftObjects.count(s) && !ctx.rightObjects.count(s)) chi = quantify(chi, s, false);
    return chi;
}

namespace {

// Branch contents along one path of the trace, with first-occurrence indices per side.
struct PathState {
    std::vector<Formula> formulas;
    std::vector<Bias> bias;
    std::map<std::string, int> leftObj, rightObj, leftPred, rightPred;

    void push(const Formula& f, Bias b) {
        int idx = static_cast<int>(formulas.size());
        formulas.push_back(f);
        bias.push_back(b);
        auto& objs = b == Bias::R ? rightObj : leftObj;
        auto& preds = b == Bias::R ? rightPred : leftPred;
        for (const auto& t : objectsInOrder(f)) objs.emplace(t.name, idx);
        for (const auto& [p, arity] : freeSymbols(f).predicates) {
            (void)arity;
            preds.emplace(p, idx);
        }
    }

    static std::set<std::string> before(const std::map<std::string, int>& m, int size) {
        std::set<std::string> out;
        for (const auto& [s, i] : m)
            if (i < size) out.insert(s);
        return out;
    }

    StepContext context(const TraceStep& step, int size) const {
        StepContext ctx;
        ctx.rule = step.rule;
        for (const auto& p : step.premises) {
            ctx.premises.push_back(formulas[p.entry]);
            ctx.premiseBias.push_back(bias[p.entry]);
        }
        if (step.premises.empty()) {
            // Zero-premise conclusions are valid; they only need a side for quantifying fresh symbols.
            Bias b = step.conclusions.empty() || step.conclusions[0].empty() ? Bias::L : step.conclusions[0][0].bias;
            ctx.premiseBias.push_back(b == Bias::None ? Bias::L : b);
        }
        for (const auto& set : step.conclusions)
            if (!set.empty() && set[0].bias != Bias::None) ctx.bias = set[0].bias;
        for (const auto& set : step.conclusions) {
            ctx.conclusions.emplace_back();
            for (const auto& c : set) ctx.conclusions.back().push_back(c.formula);
        }
        ctx.fresh = step.fresh;
        ctx.leftObjects = before(leftObj, size);
        ctx.rightObjects = before(rightObj, size);
        ctx.leftPredicates = before(leftPred, size);
        ctx.rightPredicates = before(rightPred, size);
        return ctx;
    }
};

class Folder {
public:
    Folder(const Trace& t, std::vector<std::string>* used) : trace_(t), used_(used) {}

    StepResult node(int id, PathState state) {
        const TraceNode& n = trace_.nodes[id];
        std::vector<int> sizes;
        std::size_t linear = n.end == "split" ? n.steps.size() - 1 : n.steps.size();
        for (std::size_t s = 0; s < linear; ++s) {
            sizes.push_back(static_cast<int>(state.formulas.size()));
            apply(n.steps[s], 0, state);
        }
        StepResult chi;
        if (n.end == "bot") {
            std::vector<Formula> closing;
            std::vector<Bias> bias;
            for (int i : n.closure) {
                closing.push_back(state.formulas[i]);
                bias.push_back(state.bias[i]);
            }
            if (closing.empty()) return RuleGap{"bot", Bias::None, "leaf without a closing pair"};
            chi = closureInterpolant(closing, bias);
        } else if (n.end == "split") {
            const TraceStep& step = n.steps.back();
            std::vector<Formula> kids;
            for (std::size_t k = 0; k < n.children.size(); ++k) {
                PathState child = state;
                apply(step, k, child);
                StepResult r = node(n.children[k], std::move(child));
                if (std::holds_alternative<RuleGap>(r)) return r;
                kids.push_back(std::get<Formula>(r));
            }
            chi = combine(step, state, static_cast<int>(state.formulas.size()), kids);
        } else {
            return RuleGap{"", Bias::None, "branch ended " + n.end + ", not closed"};
        }
        for (std::size_t s = linear; s-- > 0;) {
            if (std::holds_alternative<RuleGap>(chi)) return chi;
            chi = combine(n.steps[s], state, sizes[s], {std::get<Formula>(chi)});
        }
        return chi;
    }

private:
    static void apply(const TraceStep& step, std::size_t k, PathState& state) {
        for (const auto& c : step.conclusions[k])
            if (c.added) state.push(c.formula, c.bias);
    }

    StepResult combine(const TraceStep& step, const PathState& state, int size, const std::vector<Formula>& kids) {
        StepContext ctx = state.context(step, size);
        if (used_) used_->push_back(std::string((ctx.bias != Bias::None ? ctx.bias : ctx.premiseBias[0]) == Bias::R ? "R " : "L ") + step.rule);
        return interpolantStep(ctx, kids);
    }

    const Trace& trace_;
    std::vector<std::string>* used_;
};

}  // namespace

StepResult foldTrace(const Trace& trace, std::vector<std::string>* rulesUsed) {
    PathState root;
    for (std::size_t i = 0; i < trace.roots.size(); ++i) root.push(trace.roots[i], trace.rootBias[i]);
    if (rulesUsed) rulesUsed->clear();
    return Folder(trace, rulesUsed).node(0, std::move(root));
}

VocabularyCertificate vocabularyCertificate(const Formula& phi, const Formula& chi, const Formula& psi) {
    VocabularyCertificate cert;
    SymbolInventory a = freeSymbols(phi);
    SymbolInventory b = freeSymbols(psi);
    SymbolInventory c = freeSymbols(chi);
    for (const auto& [p, arity] : a.predicates)
        if (b.predicates.count(p) && b.predicates.at(p) == arity) cert.sharedPredicates.insert(p);
    for (const auto& k : a.constants)
        if (b.constants.count(k)) cert.sharedConstants.insert(k);
    for (const auto& [p, arity] : c.predicates) {
        (void)arity;
        if (!cert.sharedPredicates.count(p)) cert.violations.push_back("predicate " + p);
    }
    for (const auto& k : c.constants)
        if (!cert.sharedConstants.count(k)) cert.violations.push_back("constant " + k);
    for (const auto& v : c.freeVars) cert.violations.push_back("free variable " + v);
    for (const auto& x : c.freeTenseVars) cert.violations.push_back("free tense variable " + x);
    return cert;
}

VerifyReport verifyInterpolant(const Formula& phi, const Formula& chi, const Formula& psi, const Config& cfg) {
    VerifyReport rep;
    rep.vocabulary = vocabularyCertificate(phi, chi, psi);
    rep.leftProof = prove(mk::imp(phi, chi), cfg);
    rep.rightProof = prove(mk::imp(chi, psi), cfg);
    auto check = [&](const Verdict& v, const char* what) {
        if (!rep.failure.empty() || v.kind == VerdictKind::Proved) return;
        rep.inconclusive = v.kind == VerdictKind::ResourceLimit;
        rep.failure = std::string(what) + (rep.inconclusive ? " hit a resource bound" : " is refuted");
    };
    check(*rep.leftProof, "phi -> chi");
    check(*rep.rightProof, "chi -> psi");
    if (rep.failure.empty() && !rep.vocabulary.violations.empty())
        rep.failure = "vocabulary: " + rep.vocabulary.violations.front() + " is not shared";
    rep.ok = rep.failure.empty();
    return rep;
}

std::string interpolationStatusName(InterpolationStatus s) {
    switch (s) {
    case InterpolationStatus::Interpolant: return "Interpolant";
    case InterpolationStatus::NotValid: return "NotValid";
    case InterpolationStatus::ResourceLimit: return "ResourceLimit";
    case InterpolationStatus::RuleGap: return "RuleGap";
    case InterpolationStatus::Unverified: return "Unverified";
    }
    return "";
}

InterpolationResult interpolate(const Formula& phiIn, const Formula& psiIn, const Config& cfg) {
    Formula phi = expandAbbrev(phiIn);
    Formula psi = expandAbbrev(psiIn);
    InterpolationResult res;
    auto finish = [&](const Formula& chi) {
        res.chi = chi;
        res.verification = verifyInterpolant(phi, chi, psi, cfg);
        if (res.verification.ok)
            res.status = InterpolationStatus::Interpolant;
        else
            res.status = res.verification.inconclusive ? InterpolationStatus::ResourceLimit : InterpolationStatus::Unverified;
        return res;
    };
    if (phi.op() == Op::Bot) return finish(mk::bot());
    if (psi.op() == Op::Top || psi == mk::neg(mk::bot())) return finish(mk::top());

    Config primed = cfg;
    primed.ruleset = Ruleset::Primed;
    std::set<std::string> used;
    for (const auto& f : {phi, psi})
        for (const auto& n : nominalsInOrder(f)) used.insert(n);
    std::string n = freshSymbol(SymbolKind::Nominal, used).name;
    Verdict v = runTableau({satAt(n, phi), negSat(n, psi)}, {Bias::L, Bias::R}, primed);
    v.rootNominal = n;
    res.tableau = v;
    if (v.kind == VerdictKind::Refuted) {
        res.status = InterpolationStatus::NotValid;
        return res;
    }
    if (v.kind == VerdictKind::ResourceLimit) {
        res.status = InterpolationStatus::ResourceLimit;
        return res;
    }
    StepResult folded = foldTrace(v.trace, &res.rulesUsed);
    if (auto* gap = std::get_if<RuleGap>(&folded)) {
        res.gap = *gap;
        res.status = InterpolationStatus::RuleGap;
        return res;
    }
    Formula chi = localize(std::get<Formula>(folded), n);
    if (mentionsNominal(chi, n)) {
        std::string x;
        chi = bindNominal(chi, n, x);
    }
    chi = renameApart({chi}).front();
    return finish(chi);
}

InterpolationResult interpolate(const Formula& implication, const Config& cfg) {
    if (implication.op() == Op::Imp) return interpolate(implication.kid(0), implication.kid(1), cfg);
    // Core form of an implication: ~(phi & ~psi).
    if (implication.op() == Op::Not && implication.kid(0).op() == Op::And &&
        implication.kid(0).kid(1).op() == Op::Not)
        return interpolate(implication.kid(0).kid(0), implication.kid(0).kid(1).kid(0), cfg);
    InterpolationResult res;
    res.status = InterpolationStatus::NotValid;
    res.gap = RuleGap{"", Bias::None, "input is not an implication"};
    return res;
}

EquivalenceReport primedEquivalence(const std::vector<Formula>& sentences, const Config& cfg) {
    EquivalenceReport rep;
    Config standard = cfg;
    standard.ruleset = Ruleset::Standard;
    Config primed = cfg;
    primed.ruleset = Ruleset::Primed;
    for (const auto& f : sentences) {
        EquivalenceCase c{f, prove(f, standard).kind, prove(f, primed).kind};
        if (c.standard != c.primed) {
            rep.ok = false;
            rep.mismatches.push_back(printFormula(f) + ": standard " + verdictName(c.standard) + ", primed " +
                                     verdictName(c.primed));
        }
        rep.cases.push_back(std::move(c));
    }
    return rep;
}

}  // namespace fohl
