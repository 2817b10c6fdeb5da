#include "fohl/syntax.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace fohl {

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hashTerm(const Term& t) {
    std::size_t h = combine(static_cast<std::size_t>(t.kind) + 1, std::hash<std::string>{}(t.name));
    if (t.body) h = combine(h, t.body.hash());
    return h;
}

int compareStr(const std::string& a, const std::string& b) { return a < b ? -1 : (b < a ? 1 : 0); }

int compareFormula(const Formula& a, const Formula& b);

int compareTerm(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    if (int c = compareStr(a.name, b.name)) return c;
    if (!a.body || !b.body) return a.body ? 1 : (b.body ? -1 : 0);
    return compareFormula(a.body, b.body);
}

int compareFormula(const Formula& a, const Formula& b) {
    if (&*a == &*b) return 0;
    if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
    if (int c = compareStr(a.name(), b.name())) return c;
    const auto& aa = a.args();
    const auto& ba = b.args();
    if (aa.size() != ba.size()) return aa.size() < ba.size() ? -1 : 1;
    for (std::size_t i = 0; i < aa.size(); ++i)
        if (int c = compareTerm(aa[i], ba[i])) return c;
    const auto& ak = a->kids;
    const auto& bk = b->kids;
    if (ak.size() != bk.size()) return ak.size() < bk.size() ? -1 : 1;
    for (std::size_t i = 0; i < ak.size(); ++i)
        if (int c = compareFormula(ak[i], bk[i])) return c;
    return 0;
}

bool bindsObject(Op op) { return op == Op::Exists || op == Op::Forall || op == Op::Lambda; }
bool bindsTense(Op op) { return op == Op::Down || op == Op::TIota; }

}  // namespace

bool isCore(Op op) { return op <= Op::Down; }

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const Formula& Formula::kid(std::size_t i) const { return node_->kids.at(i); }
std::size_t Formula::hash() const { return node_->hash; }

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    if (node_->hash != other.node_->hash) return false;
    return compareFormula(*this, other) == 0;
}

bool Formula::operator<(const Formula& other) const { return compareFormula(*this, other) < 0; }

bool Term::operator==(const Term& other) const { return compareTerm(*this, other) == 0; }

namespace mk {

Formula make(Op op, std::string name, std::vector<Term> args, std::vector<Formula> kids) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->name = std::move(name);
    n->args = std::move(args);
    n->kids = std::move(kids);
    std::size_t h = combine(static_cast<std::size_t>(op) + 17, std::hash<std::string>{}(n->name));
    for (const auto& t : n->args) h = combine(h, hashTerm(t));
    for (const auto& k : n->kids) h = combine(h, k.hash());
    n->hash = h;
    return Formula(std::move(n));
}

Formula bot() {
    static const Formula f = make(Op::Bot, "", {}, {});
    return f;
}
Formula top() {
    static const Formula f = make(Op::Top, "", {}, {});
    return f;
}
Formula pred(std::string p, std::vector<Term> args) { return make(Op::Pred, std::move(p), std::move(args), {}); }
Formula eq(Term a, Term b) { return make(Op::Eq, "", {std::move(a), std::move(b)}, {}); }
Formula neq(Term a, Term b) { return make(Op::Neq, "", {std::move(a), std::move(b)}, {}); }
Formula nom(std::string n) { return make(Op::Nominal, std::move(n), {}, {}); }
Formula tvar(std::string x) { return make(Op::TenseVar, std::move(x), {}, {}); }
Formula tiota(std::string x, Formula body) { return make(Op::TIota, std::move(x), {}, {std::move(body)}); }
Formula neg(Formula f) { return make(Op::Not, "", {}, {std::move(f)}); }
Formula conj(Formula a, Formula b) { return make(Op::And, "", {}, {std::move(a), std::move(b)}); }
Formula disj(Formula a, Formula b) { return make(Op::Or, "", {}, {std::move(a), std::move(b)}); }
Formula imp(Formula a, Formula b) { return make(Op::Imp, "", {}, {std::move(a), std::move(b)}); }
Formula iff(Formula a, Formula b) { return make(Op::Iff, "", {}, {std::move(a), std::move(b)}); }
Formula fut(Formula f) { return make(Op::Future, "", {}, {std::move(f)}); }
Formula past(Formula f) { return make(Op::Past, "", {}, {std::move(f)}); }
Formula always(Formula f) { return make(Op::G, "", {}, {std::move(f)}); }
Formula hist(Formula f) { return make(Op::H, "", {}, {std::move(f)}); }
Formula exists(std::string x, Formula f) { return make(Op::Exists, std::move(x), {}, {std::move(f)}); }
Formula forall(std::string x, Formula f) { return make(Op::Forall, std::move(x), {}, {std::move(f)}); }
Formula lambda(std::string x, Formula body, Term arg) {
    return make(Op::Lambda, std::move(x), {std::move(arg)}, {std::move(body)});
}
Formula at(Formula designator, Formula body) {
    return make(Op::At, "", {}, {std::move(designator), std::move(body)});
}
Formula at(const std::string& nominal, Formula body) { return at(nom(nominal), std::move(body)); }
Formula down(std::string x, Formula body) { return make(Op::Down, std::move(x), {}, {std::move(body)}); }

}  // namespace mk

namespace {

// Generic bottom-up rebuild; returns the original handle when nothing changed.
using TermFn = std::function<Term(const Term&, const std::set<std::string>& boundObj)>;
using NodeFn = std::function<Formula(const Formula&, const std::set<std::string>& boundTense)>;

struct Rewriter {
    TermFn onTerm;  // applied to non-description terms
    NodeFn onAtom;  // applied to Nominal/TenseVar nodes
    std::set<std::string> obj;
    std::set<std::string> tense;

    Term term(const Term& t) {
        if (t.kind == TermKind::Description) {
            bool added = obj.insert(t.name).second;
            Formula b = formula(t.body);
            if (added) obj.erase(t.name);
            if (b == t.body && &*b == &*t.body) return t;
            return Term::description(t.name, b);
        }
        return onTerm ? onTerm(t, obj) : t;
    }

    Formula formula(const Formula& f) {
        if ((f.op() == Op::Nominal || f.op() == Op::TenseVar) && onAtom) return onAtom(f, tense);
        bool changed = false;
        std::vector<Formula> kids;
        kids.reserve(f->kids.size());
        bool addedObj = false;
        bool addedTense = false;
        if (bindsObject(f.op())) addedObj = obj.insert(f.name()).second;
        if (bindsTense(f.op())) addedTense = tense.insert(f.name()).second;
        for (const auto& k : f->kids) {
            kids.push_back(formula(k));
            changed = changed || &*kids.back() != &*k;
        }
        if (addedObj) obj.erase(f.name());
        if (addedTense) tense.erase(f.name());
        std::vector<Term> args;
        args.reserve(f.args().size());
        for (const auto& a : f.args()) {
            args.push_back(term(a));
            changed = changed || !(args.back().kind == a.kind && args.back().name == a.name &&
                                   (!a.body || &*args.back().body == &*a.body));
        }
        if (!changed) return f;
        return mk::make(f.op(), f.name(), std::move(args), std::move(kids));
    }
};

// Pre-order, textual-order visitor over terms; Lambda visits its body before its argument.
void visitTerms(const Formula& f, const std::function<void(const Term&)>& fn) {
    for (const auto& k : f->kids) visitTerms(k, fn);
    for (const auto& a : f.args()) {
        if (a.kind == TermKind::Description)
            visitTerms(a.body, fn);
        else
            fn(a);
    }
}

void preorder(const Formula& f, const std::function<void(const Formula&)>& fn) {
    fn(f);
    for (const auto& k : f->kids) preorder(k, fn);
    for (const auto& a : f.args())
        if (a.kind == TermKind::Description) preorder(a.body, fn);
}

}  // namespace

Formula substitute(const Formula& phi, const Symbol& x, const Symbol& eta) {
    if (x.kind == SymbolKind::BoundVar) {
        if (eta.kind != SymbolKind::FreeVar && eta.kind != SymbolKind::Constant)
            throw SortError("bound variable " + x.name + " can only be replaced by a free variable or constant");
        Term replacement = eta.kind == SymbolKind::FreeVar ? Term::free(eta.name) : Term::constant(eta.name);
        Rewriter rw;
        rw.onTerm = [&](const Term& t, const std::set<std::string>& bound) {
            if (t.kind == TermKind::Bound && t.name == x.name && !bound.count(x.name)) return replacement;
            return t;
        };
        return rw.formula(phi);
    }
    if (x.kind == SymbolKind::TenseVar) {
        if (eta.kind != SymbolKind::Nominal)
            throw SortError("tense variable $" + x.name + " can only be replaced by a nominal");
        Rewriter rw;
        rw.onAtom = [&](const Formula& f, const std::set<std::string>& bound) {
            if (f.op() == Op::TenseVar && f.name() == x.name && !bound.count(x.name)) return mk::nom(eta.name);
            return f;
        };
        return rw.formula(phi);
    }
    throw SortError("substitution target must be a bound or tense variable");
}

namespace {
bool matchesObject(const Term& t, const Symbol& b) {
    return (b.kind == SymbolKind::FreeVar && t.kind == TermKind::Free && t.name == b.name) ||
           (b.kind == SymbolKind::Constant && t.kind == TermKind::Constant && t.name == b.name);
}
}  // namespace

std::size_t countOccurrences(const Formula& phi, const Symbol& b) {
    std::size_t n = 0;
    visitTerms(phi, [&](const Term& t) { n += matchesObject(t, b); });
    return n;
}

Formula replaceAt(const Formula& phi, const Symbol& b1, const Symbol& b2, const std::set<std::size_t>& positions) {
    auto objectSort = [](const Symbol& s) { return s.kind == SymbolKind::FreeVar || s.kind == SymbolKind::Constant; };
    if (!objectSort(b1) || !objectSort(b2)) throw SortError("replacement is defined on free variables and constants");
    std::size_t total = countOccurrences(phi, b1);
    if (!positions.empty() && *positions.rbegin() >= total)
        throw PositionError("occurrence index " + std::to_string(*positions.rbegin()) + " out of range (" +
                            std::to_string(total) + " occurrences)");
    Term replacement = b2.kind == SymbolKind::FreeVar ? Term::free(b2.name) : Term::constant(b2.name);
    // Same traversal order as visitTerms: kids first, then own arguments.
    std::size_t index = 0;
    std::function<Formula(const Formula&)> go = [&](const Formula& f) -> Formula {
        std::vector<Formula> kids;
        for (const auto& k : f->kids) kids.push_back(go(k));
        std::vector<Term> args;
        for (const auto& a : f.args()) {
            if (a.kind == TermKind::Description) {
                args.push_back(Term::description(a.name, go(a.body)));
            } else if (matchesObject(a, b1)) {
                args.push_back(positions.count(index) ? replacement : a);
                ++index;
            } else {
                args.push_back(a);
            }
        }
        return mk::make(f.op(), f.name(), std::move(args), std::move(kids));
    };
    return go(phi);
}

Formula expandAbbrev(const Formula& phi) {
    using namespace mk;
    auto ex = [](const Formula& f) { return expandAbbrev(f); };
    auto orCore = [](Formula a, Formula b) { return neg(conj(neg(std::move(a)), neg(std::move(b)))); };
    auto impCore = [&](Formula a, Formula b) { return orCore(neg(std::move(a)), std::move(b)); };
    auto exTerm = [](const Term& t) {
        return t.kind == TermKind::Description ? Term::description(t.name, expandAbbrev(t.body)) : t;
    };
    switch (phi.op()) {
    case Op::Top:
        return neg(bot());
    case Op::Neq:
        return neg(eq(phi.args()[0], phi.args()[1]));
    case Op::Or:
        return orCore(ex(phi.kid(0)), ex(phi.kid(1)));
    case Op::Imp:
        return impCore(ex(phi.kid(0)), ex(phi.kid(1)));
    case Op::Iff: {
        Formula a = ex(phi.kid(0));
        Formula b = ex(phi.kid(1));
        return conj(impCore(a, b), impCore(b, a));
    }
    case Op::Forall:
        return neg(exists(phi.name(), neg(ex(phi.kid(0)))));
    case Op::G:
        return neg(fut(neg(ex(phi.kid(0)))));
    case Op::H:
        return neg(past(neg(ex(phi.kid(0)))));
    default:
        break;
    }
    if (phi->kids.empty() && std::none_of(phi.args().begin(), phi.args().end(),
                                          [](const Term& t) { return t.kind == TermKind::Description; }))
        return phi;
    std::vector<Formula> kids;
    for (const auto& k : phi->kids) kids.push_back(ex(k));
    std::vector<Term> args;
    for (const auto& a : phi.args()) args.push_back(exTerm(a));
    return make(phi.op(), phi.name(), std::move(args), std::move(kids));
}

namespace {

bool occursFreeObject(const Formula& f, const std::string& x) {
    Rewriter probe;
    bool found = false;
    probe.onTerm = [&](const Term& t, const std::set<std::string>& bound) {
        if (t.kind == TermKind::Bound && t.name == x && !bound.count(x)) found = true;
        return t;
    };
    probe.formula(f);
    return found;
}

bool occursFreeTense(const Formula& f, const std::string& x) {
    Rewriter probe;
    bool found = false;
    probe.onAtom = [&](const Formula& a, const std::set<std::string>& bound) {
        if (a.op() == Op::TenseVar && a.name() == x && !bound.count(x)) found = true;
        return a;
    };
    probe.formula(f);
    return found;
}

struct WfChecker {
    bool sentence;
    std::vector<std::string> violations;
    std::map<std::string, int> arity;
    std::vector<std::string> obj;
    std::vector<std::string> tense;

    void note(const std::string& v) {
        if (std::find(violations.begin(), violations.end(), v) == violations.end()) violations.push_back(v);
    }
    bool inScope(const std::vector<std::string>& s, const std::string& x) {
        return std::find(s.begin(), s.end(), x) != s.end();
    }
    void simpleTerm(const Term& t) {
        if (t.kind == TermKind::Description) {
            note("description outside λ-atom");
            return;
        }
        if (t.kind == TermKind::Bound && !inScope(obj, t.name) && sentence)
            note("free bound variable " + t.name + " in sentence");
    }
    void designator(const Formula& d) {
        if (d.op() != Op::Nominal && d.op() != Op::TenseVar && d.op() != Op::TIota)
            note("@ requires a nominal, tense variable or temporal description");
        check(d);
    }
    void check(const Formula& f) {
        switch (f.op()) {
        case Op::Pred: {
            auto [it, fresh] = arity.emplace(f.name(), static_cast<int>(f.args().size()));
            if (!fresh && it->second != static_cast<int>(f.args().size()))
                note("predicate " + f.name() + " used with inconsistent arity");
            for (const auto& a : f.args()) simpleTerm(a);
            return;
        }
        case Op::Eq:
        case Op::Neq:
            for (const auto& a : f.args()) simpleTerm(a);
            return;
        case Op::TenseVar:
            if (!inScope(tense, f.name()) && sentence) note("free tense variable $" + f.name() + " in sentence");
            return;
        case Op::TIota:
            if (occursFreeTense(f.kid(0), f.name()))
                note("tense variable $" + f.name() + " occurs free in its temporal description");
            tense.push_back(f.name());
            check(f.kid(0));
            tense.pop_back();
            return;
        case Op::Down:
            tense.push_back(f.name());
            check(f.kid(0));
            tense.pop_back();
            return;
        case Op::Exists:
        case Op::Forall:
            obj.push_back(f.name());
            check(f.kid(0));
            obj.pop_back();
            return;
        case Op::Lambda: {
            if (!occursFreeObject(f.kid(0), f.name()))
                note("λ-bound variable " + f.name() + " does not occur free in its body");
            obj.push_back(f.name());
            check(f.kid(0));
            obj.pop_back();
            const Term& arg = f.args()[0];
            if (arg.kind == TermKind::Description) {
                if (!occursFreeObject(arg.body, arg.name))
                    note("description variable " + arg.name + " does not occur free in its body");
                obj.push_back(arg.name);
                check(arg.body);
                obj.pop_back();
            } else {
                simpleTerm(arg);
            }
            return;
        }
        case Op::At:
            designator(f.kid(0));
            check(f.kid(1));
            return;
        default:
            for (const auto& k : f->kids) check(k);
        }
    }
};

}  // namespace

std::vector<std::string> wellFormed(const Formula& phi, bool sentence) {
    WfChecker c{sentence, {}, {}, {}, {}};
    c.check(phi);
    return c.violations;
}

SymbolInventory freeSymbols(const Formula& phi) {
    SymbolInventory inv;
    Rewriter rw;
    rw.onTerm = [&](const Term& t, const std::set<std::string>&) {
        if (t.kind == TermKind::Free) inv.freeVars.insert(t.name);
        if (t.kind == TermKind::Constant) inv.constants.insert(t.name);
        return t;
    };
    rw.onAtom = [&](const Formula& a, const std::set<std::string>& bound) {
        if (a.op() == Op::Nominal) inv.nominals.insert(a.name());
        if (a.op() == Op::TenseVar && !bound.count(a.name())) inv.freeTenseVars.insert(a.name());
        return a;
    };
    rw.formula(phi);
    preorder(phi, [&](const Formula& f) {
        if (f.op() == Op::Pred) inv.predicates.emplace(f.name(), static_cast<int>(f.args().size()));
    });
    return inv;
}

Symbol freshSymbol(SymbolKind kind, const std::set<std::string>& used) {
    std::string prefix;
    if (kind == SymbolKind::FreeVar)
        prefix = "_a";
    else if (kind == SymbolKind::Nominal)
        prefix = "_n";
    else
        throw SortError("fresh symbols exist only for free variables and nominals");
    long next = 0;
    for (const auto& s : used) {
        if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0) continue;
        std::string digits = s.substr(prefix.size());
        if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
        if (digits.size() > 9) continue;
        next = std::max(next, std::stol(digits) + 1);
    }
    return Symbol{kind, prefix + std::to_string(next), 0};
}

std::vector<Term> objectsInOrder(const Formula& phi) {
    std::vector<Term> out;
    visitTerms(phi, [&](const Term& t) {
        if (!t.isObject()) return;
        for (const auto& o : out)
            if (o.name == t.name) return;
        out.push_back(t);
    });
    return out;
}

std::vector<std::string> nominalsInOrder(const Formula& phi) {
    std::vector<std::string> out;
    preorder(phi, [&](const Formula& f) {
        if (f.op() == Op::Nominal && std::find(out.begin(), out.end(), f.name()) == out.end())
            out.push_back(f.name());
    });
    return out;
}

Formula replaceObject(const Formula& phi, const std::string& from, const Term& to) {
    Rewriter rw;
    rw.onTerm = [&](const Term& t, const std::set<std::string>&) {
        return t.isObject() && t.name == from ? to : t;
    };
    return rw.formula(phi);
}

Formula abstractNominal(const Formula& phi, const std::string& from, const std::string& to) {
    Rewriter rw;
    rw.onAtom = [&](const Formula& a, const std::set<std::string>&) {
        return a.op() == Op::Nominal && a.name() == from ? mk::tvar(to) : a;
    };
    return rw.formula(phi);
}

Formula renameNominal(const Formula& phi, const std::string& from, const std::string& to) {
    Rewriter rw;
    rw.onAtom = [&](const Formula& a, const std::set<std::string>&) {
        return a.op() == Op::Nominal && a.name() == from ? mk::nom(to) : a;
    };
    return rw.formula(phi);
}

Term objectTerm(const std::string& name) {
    return name.rfind("_a", 0) == 0 ? Term::free(name) : Term::constant(name);
}

std::set<std::string> binderNames(const Formula& phi) {
    std::set<std::string> out;
    preorder(phi, [&](const Formula& f) {
        if (bindsObject(f.op()) || bindsTense(f.op())) out.insert(f.name());
        for (const auto& a : f.args())
            if (a.kind == TermKind::Description) out.insert(a.name);
    });
    return out;
}

namespace {

struct AlphaEq {
    std::vector<std::pair<std::string, std::string>> obj;
    std::vector<std::pair<std::string, std::string>> tense;

    static int lookup(const std::vector<std::pair<std::string, std::string>>& env, const std::string& n, bool left) {
        for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i)
            if ((left ? env[i].first : env[i].second) == n) return i;
        return -1;
    }
    bool term(const Term& a, const Term& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == TermKind::Description) {
            obj.emplace_back(a.name, b.name);
            bool r = formula(a.body, b.body);
            obj.pop_back();
            return r;
        }
        if (a.kind == TermKind::Bound) {
            int i = lookup(obj, a.name, true);
            int j = lookup(obj, b.name, false);
            return i == j && (i >= 0 || a.name == b.name);
        }
        return a.name == b.name;
    }
    bool formula(const Formula& a, const Formula& b) {
        if (a.op() != b.op() || a->kids.size() != b->kids.size() || a.args().size() != b.args().size())
            return false;
        switch (a.op()) {
        case Op::TenseVar: {
            int i = lookup(tense, a.name(), true);
            int j = lookup(tense, b.name(), false);
            return i == j && (i >= 0 || a.name() == b.name());
        }
        case Op::Exists:
        case Op::Forall:
        case Op::Lambda: {
            obj.emplace_back(a.name(), b.name());
            bool r = formula(a.kid(0), b.kid(0));
            obj.pop_back();
            return r && (a.op() != Op::Lambda || term(a.args()[0], b.args()[0]));
        }
        case Op::Down:
        case Op::TIota: {
            tense.emplace_back(a.name(), b.name());
            bool r = formula(a.kid(0), b.kid(0));
            tense.pop_back();
            return r;
        }
        default:
            if (a.name() != b.name()) return false;
            for (std::size_t i = 0; i < a.args().size(); ++i)
                if (!term(a.args()[i], b.args()[i])) return false;
            for (std::size_t i = 0; i < a->kids.size(); ++i)
                if (!formula(a.kid(i), b.kid(i))) return false;
            return true;
        }
    }
};

}  // namespace

bool alphaEqual(const Formula& a, const Formula& b) { return AlphaEq{}.formula(a, b); }

namespace {

// Binder height: 1 + the largest height of a binder of the same sort inside its scope.
struct Heights {
    int obj = 0;
    int tense = 0;
};

Heights heights(const Formula& f);

Heights heights(const Term& t) {
    if (t.kind != TermKind::Description) return {};
    Heights h = heights(t.body);
    return {h.obj + 1, h.tense};
}

Heights heights(const Formula& f) {
    Heights out;
    auto merge = [&](Heights h) {
        out.obj = std::max(out.obj, h.obj);
        out.tense = std::max(out.tense, h.tense);
    };
    for (const auto& a : f.args()) merge(heights(a));
    for (const auto& k : f->kids) {
        Heights h = heights(k);
        if (bindsObject(f.op())) ++h.obj;
        if (bindsTense(f.op())) ++h.tense;
        merge(h);
    }
    return out;
}

struct Canon {
    std::vector<std::pair<std::string, std::string>> obj;
    std::vector<std::pair<std::string, std::string>> tense;

    static const std::string* lookup(const std::vector<std::pair<std::string, std::string>>& env, const std::string& n) {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == n) return &it->second;
        return nullptr;
    }

    Term term(const Term& t) {
        if (t.kind == TermKind::Bound) {
            const std::string* to = lookup(obj, t.name);
            return Term::bound(to ? *to : t.name);
        }
        if (t.kind != TermKind::Description) return t;
        std::string name = "x" + std::to_string(heights(t.body).obj + 1);
        obj.emplace_back(t.name, name);
        Formula body = formula(t.body);
        obj.pop_back();
        return Term::description(name, body);
    }

    Formula formula(const Formula& f) {
        std::vector<Term> args;
        for (const auto& a : f.args()) args.push_back(term(a));
        std::string name = f.name();
        if (f.op() == Op::TenseVar) {
            if (const std::string* to = lookup(tense, name)) name = *to;
        }
        std::vector<std::pair<std::string, std::string>>* env = nullptr;
        if (bindsObject(f.op())) {
            env = &obj;
            name = "x" + std::to_string(heights(f.kid(0)).obj + 1);
        } else if (bindsTense(f.op())) {
            env = &tense;
            name = "t" + std::to_string(heights(f.kid(0)).tense + 1);
        }
        if (env) env->emplace_back(f.name(), name);
        std::vector<Formula> kids;
        for (const auto& k : f->kids) kids.push_back(formula(k));
        if (env) env->pop_back();
        return mk::make(f.op(), name, std::move(args), std::move(kids));
    }
};

}  // namespace

Formula canonicalBinders(const Formula& phi) { return Canon{}.formula(phi); }

std::size_t formulaSize(const Formula& phi) {
    std::size_t n = 0;
    preorder(phi, [&](const Formula&) { ++n; });
    return n;
}

}  // namespace fohl
