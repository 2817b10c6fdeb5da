#include "fohl/tableau.hpp"

#include "fohl/frontend.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace fohl {

std::string biasName(Bias b) {
    switch (b) {
    case Bias::L: return "L";
    case Bias::R: return "R";
    case Bias::None: break;
    }
    return "";
}

std::string verdictName(VerdictKind k) {
    switch (k) {
    case VerdictKind::Proved: return "Proved";
    case VerdictKind::Refuted: return "Refuted";
    case VerdictKind::ResourceLimit: return "ResourceLimit";
    }
    return "";
}

std::string RuleInstance::key() const {
    std::string out = rule + '|';
    for (std::size_t i = 0; i < premises.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(premises[i]);
    }
    out += '|';
    out += witness;
    return out;
}

Formula satAt(const std::string& nominal, const Formula& body) { return mk::at(nominal, body); }
Formula negSat(const std::string& nominal, const Formula& body) { return mk::neg(mk::at(nominal, body)); }

bool splitSat(const Formula& entry, bool& positive, std::string& nominal, Formula& body) {
    const Formula* f = &entry;
    positive = true;
    if (f->op() == Op::Not) {
        positive = false;
        f = &f->kid(0);
    }
    if (f->op() != Op::At || f->kid(0).op() != Op::Nominal) return false;
    nominal = f->kid(0).name();
    body = f->kid(1);
    return true;
}

int Branch::find(const Formula& f) const {
    auto it = index_.find(f);
    return it == index_.end() ? -1 : it->second;
}

const std::string& Branch::rep(const std::string& object) const {
    const std::string* cur = &object;
    for (auto it = parent_.find(*cur); it != parent_.end() && it->second != *cur; it = parent_.find(*cur))
        cur = &it->second;
    return *cur;
}

std::vector<std::string> frameAxiomViolations(const Formula& axiom) {
    std::vector<std::string> out = wellFormed(axiom);
    SymbolInventory inv = freeSymbols(axiom);
    if (!inv.nominals.empty()) out.push_back("frame axiom contains a nominal");
    if (!inv.predicates.empty()) out.push_back("frame axiom contains a predicate");
    if (!inv.constants.empty() || !inv.freeVars.empty()) out.push_back("frame axiom contains an object symbol");
    bool quantifies = false;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (f.op() == Op::Exists || f.op() == Op::Lambda || f.op() == Op::Eq) quantifies = true;
        for (const auto& k : f->kids) walk(k);
    };
    walk(axiom);
    if (quantifies) out.push_back("frame axiom is not a pure hybrid sentence");
    return out;
}

Config loadFrameAxioms(Config cfg, const std::vector<Formula>& axioms) {
    for (const auto& a : axioms) {
        auto v = frameAxiomViolations(a);
        if (!v.empty()) throw FrameAxiomError(v.front());
        cfg.frameAxioms.push_back(canonicalBinders(a));
    }
    return cfg;
}

namespace {

enum class Cls { P1 = 1, P2, P3, P4 };

bool isFreeVar(const std::string& s) { return s.rfind("_a", 0) == 0; }

Symbol objSymbol(const std::string& name) {
    return {isFreeVar(name) ? SymbolKind::FreeVar : SymbolKind::Constant, name, 0};
}

Formula instObj(const Formula& body, const std::string& var, const std::string& obj) {
    return substitute(body, Symbol{SymbolKind::BoundVar, var, 0}, objSymbol(obj));
}

Formula instTense(const Formula& body, const std::string& var, const std::string& nominal) {
    return substitute(body, Symbol{SymbolKind::TenseVar, var, 0}, Symbol{SymbolKind::Nominal, nominal, 0});
}

Formula bareEq(const std::string& a, const std::string& b) { return mk::eq(objectTerm(a), objectTerm(b)); }
Formula bareNeq(const std::string& a, const std::string& b) { return mk::neg(bareEq(a, b)); }

Formula complement(const Formula& f) { return f.op() == Op::Not ? f.kid(0) : mk::neg(f); }

using Emit = std::function<bool(RuleInstance&&, Cls)>;

}  // namespace

class Engine {
public:
    explicit Engine(const Config& cfg) : cfg_(cfg) {}

    // Registers a formula on the branch; returns its index and whether it was new.
    static std::pair<int, bool> add(Branch& b, const Formula& f, Bias bias, const std::string& origin) {
        int existing = b.find(f);
        if (existing >= 0) return {existing, false};
        int idx = static_cast<int>(b.entries_.size());
        b.entries_.push_back(Entry{f, bias, true, origin});
        b.index_.emplace(f, idx);
        std::vector<std::string> objs;
        for (const auto& t : objectsInOrder(f)) {
            objs.push_back(t.name);
            if (b.objectAge_.count(t.name)) continue;
            b.objectAge_[t.name] = static_cast<int>(b.objects_.size());
            b.objects_.push_back(t.name);
            b.parent_[t.name] = t.name;
            if (t.kind == TermKind::Constant) b.constants_.insert(t.name);
        }
        b.entryObjects_.push_back(std::move(objs));
        for (const auto& n : nominalsInOrder(f))
            if (b.nominalSet_.insert(n).second) b.nominals_.push_back(n);
        if (f.op() == Op::Eq) unite(b, f.args()[0].name, f.args()[1].name);
        if (b.status_ == BranchStatus::Open && b.find(complement(f)) >= 0) b.status_ = BranchStatus::Closed;
        bool positive;
        std::string j;
        Formula body;
        if (splitSat(f, positive, j, body) && positive) {
            ++b.positiveBodies_[body.op()];
            if (body.op() == Op::Bot) b.status_ = BranchStatus::Closed;
            if (body.op() == Op::Nominal && body.name() != j) {
                b.sameAs_[j].emplace_back(body.name(), idx);
            }
            if (body.op() == Op::Future && body.kid(0).op() == Op::Nominal) {
                b.futureOf_[j].emplace_back(body.kid(0).name(), idx);
                b.pastOf_[body.kid(0).name()].emplace_back(j, idx);
            }
        }
        return {idx, true};
    }

    static void unite(Branch& b, const std::string& x, const std::string& y) {
        std::string rx = b.rep(x);
        std::string ry = b.rep(y);
        if (rx == ry) return;
        if (b.objectAge_[ry] < b.objectAge_[rx]) std::swap(rx, ry);
        b.parent_[ry] = rx;
        ++b.unions_;
    }

    static bool normalized(const Branch& b, int idx) {
        const Formula& f = b.entries_[idx].formula;
        if (f.op() == Op::Eq) return true;
        for (const auto& o : b.entryObjects_[idx])
            if (b.rep(o) != o) return false;
        return true;
    }

    bool present(const Branch& b, const Formula& f) const { return b.find(f) >= 0; }
    bool activeEntry(const Branch& b, const Formula& f, int& idx) const {
        idx = b.find(f);
        return idx >= 0 && b.entries_[idx].active;
    }

    std::vector<std::string> repObjects(const Branch& b) const {
        std::vector<std::string> out;
        for (const auto& o : b.objects_)
            if (b.rep(o) == o) out.push_back(o);
        return out;
    }

    std::string freshName(const Branch& b, SymbolKind kind) const {
        std::set<std::string> used;
        if (kind == SymbolKind::Nominal)
            used.insert(b.nominals_.begin(), b.nominals_.end());
        else
            used.insert(b.objects_.begin(), b.objects_.end());
        return freshSymbol(kind, used).name;
    }

    // Equality entries on a path from `from` to its representative.
    std::vector<int> equalityPath(const Branch& b, const std::string& from) const {
        const std::string& target = b.rep(from);
        std::map<std::string, std::pair<std::string, int>> prev;
        std::deque<std::string> queue{from};
        prev[from] = {"", -1};
        while (!queue.empty()) {
            std::string cur = queue.front();
            queue.pop_front();
            if (cur == target) break;
            for (std::size_t i = 0; i < b.entries_.size(); ++i) {
                const Formula& f = b.entries_[i].formula;
                if (f.op() != Op::Eq) continue;
                const std::string& l = f.args()[0].name;
                const std::string& r = f.args()[1].name;
                std::string next;
                if (l == cur)
                    next = r;
                else if (r == cur)
                    next = l;
                else
                    continue;
                if (prev.count(next)) continue;
                prev[next] = {cur, static_cast<int>(i)};
                queue.push_back(next);
            }
        }
        std::vector<int> path;
        for (std::string cur = target; prev.count(cur) && prev[cur].second >= 0; cur = prev[cur].first)
            path.push_back(prev[cur].second);
        std::reverse(path.begin(), path.end());
        return path;
    }

    // Enumerates rule instances with `idx` as main premise. With `literal`, entries holding
    // non-representative symbols still get their ordinary rules (replay mode).
    bool entryInstances(const Branch& b, int idx, bool literal, const Emit& emit) const {
        const Entry& e = b.entries_[idx];
        if (!e.active) return false;
        const Formula& f = e.formula;
        bool norm = normalized(b, idx);
        if (!norm) {
            RuleInstance rr;
            rr.rule = "RR";
            rr.premises = {idx};
            Formula out = f;
            std::set<int> eqs;
            for (const auto& o : b.entryObjects_[idx]) {
                if (b.rep(o) == o) continue;
                out = replaceObject(out, o, objectTerm(b.rep(o)));
                for (int p : equalityPath(b, o)) eqs.insert(p);
            }
            rr.premises.insert(rr.premises.end(), eqs.begin(), eqs.end());
            rr.conclusions = {{out}};
            if (emit(std::move(rr), Cls::P1)) return true;
            if (!literal) return false;
        }
        bool positive;
        std::string j;
        Formula body;
        if (!splitSat(f, positive, j, body)) return false;
        auto one = [&](const std::string& rule, std::vector<Formula> concl, Cls cls, std::vector<int> side = {},
                       std::string witness = {}, std::vector<std::string> fresh = {}) {
            RuleInstance r;
            r.rule = rule;
            r.premises = {idx};
            r.premises.insert(r.premises.end(), side.begin(), side.end());
            r.conclusions = {std::move(concl)};
            r.witness = std::move(witness);
            r.fresh = std::move(fresh);
            return emit(std::move(r), cls);
        };
        auto many = [&](const std::string& rule, std::vector<std::vector<Formula>> sets, Cls cls, std::string witness,
                        std::vector<std::string> fresh = {}) {
            RuleInstance r;
            r.rule = rule;
            r.premises = {idx};
            r.conclusions = std::move(sets);
            r.witness = std::move(witness);
            r.fresh = std::move(fresh);
            return emit(std::move(r), cls);
        };
        // Checks the ledger before any conclusion is built.
        auto done = [&](const std::string& rule, std::vector<int> side = {}, const std::string& witness = {}) {
            RuleInstance r;
            r.rule = rule;
            r.premises = {idx};
            r.premises.insert(r.premises.end(), side.begin(), side.end());
            r.witness = witness;
            return b.ledger_.count(r.key()) > 0;
        };
        std::vector<std::string> objs = literal ? b.objects_ : repObjects(b);
        int side = -1;
        if (positive) {
            // (nom): transport along @j m.
            if (auto it = b.sameAs_.find(j); it != b.sameAs_.end())
                for (const auto& [m, link] : it->second)
                    if (!done("nom", {link}, m) && one("nom", {satAt(m, body)}, Cls::P1, {link}, m)) return true;
            switch (body.op()) {
            case Op::Not:
                return one("neg", {negSat(j, body.kid(0))}, Cls::P1);
            case Op::And:
                return one("and", {satAt(j, body.kid(0)), satAt(j, body.kid(1))}, Cls::P1);
            case Op::At:
                if (body.kid(0).op() == Op::Nominal) return one("gl", {satAt(body.kid(0).name(), body.kid(1))}, Cls::P1);
                if (body.kid(0).op() == Op::TIota && !done("at-iota-tmp")) {
                    std::string i = freshName(b, SymbolKind::Nominal);
                    return one("at-iota-tmp", {satAt(i, body.kid(0)), satAt(i, body.kid(1))}, Cls::P3, {}, {}, {i});
                }
                return false;
            case Op::Down:
                return one("down", {satAt(j, instTense(body.kid(0), body.name(), j))}, Cls::P1);
            case Op::Eq:
                return one("eq", {body}, Cls::P1);
            case Op::Exists: {
                if (done("exists")) return false;
                std::string a = freshName(b, SymbolKind::FreeVar);
                return one("exists", {satAt(j, instObj(body.kid(0), body.name(), a))}, Cls::P3, {}, {}, {a});
            }
            case Op::Future: {
                const Formula& inner = body.kid(0);
                if (inner.op() == Op::Nominal) {
                    // (bridge): @m k and @j F m give @j F k.
                    const std::string& m = inner.name();
                    if (auto it = b.sameAs_.find(m); it != b.sameAs_.end())
                        for (const auto& [k, link] : it->second)
                            if (!done("bridge", {link}, k) && one("bridge", {satAt(j, mk::fut(mk::nom(k)))}, Cls::P1, {link}, k)) return true;
                }
                if (done("F")) return false;
                std::string i = freshName(b, SymbolKind::Nominal);
                return one("F", {satAt(j, mk::fut(mk::nom(i))), satAt(i, inner)}, Cls::P3, {}, {}, {i});
            }
            case Op::Past: {
                if (done("P")) return false;
                std::string i = freshName(b, SymbolKind::Nominal);
                return one("P", {satAt(i, mk::fut(mk::nom(j))), satAt(i, body.kid(0))}, Cls::P3, {}, {}, {i});
            }
            case Op::TIota: {
                const Formula& theta = body.kid(0);
                const std::string& x = body.name();
                if (one("iota1-tmp", {satAt(j, instTense(theta, x, j))}, Cls::P1)) return true;
                for (const auto& k : b.nominals_) {
                    if (done(cfg_.ruleset == Ruleset::Standard ? "iota2-tmp-cut" : "iota2-tmp'", {}, k)) continue;
                    if (cfg_.ruleset == Ruleset::Standard) {
                        Formula at = instTense(theta, x, k);
                        if (activeEntry(b, satAt(k, at), side) &&
                            one("iota2-tmp", {satAt(j, mk::nom(k))}, Cls::P1, {side}, k))
                            return true;
                        // Uniqueness needs θ decided at every nominal; the literal rule alone leaves gaps.
                        if (many("iota2-tmp-cut", {{negSat(k, at)}, {satAt(j, mk::nom(k))}}, Cls::P4, k)) return true;
                    } else if (many("iota2-tmp'", {{negSat(k, instTense(theta, x, k))}, {satAt(j, mk::nom(k))}},
                                    Cls::P2, k)) {
                        return true;
                    }
                }
                return false;
            }
            case Op::Lambda: {
                const Formula& psi = body.kid(0);
                const std::string& x = body.name();
                const Term& arg = body.args()[0];
                if (arg.kind != TermKind::Description)
                    return one("lambda", {satAt(j, instObj(psi, x, arg.name))}, Cls::P1);
                const Formula& theta = arg.body;
                const std::string& y = arg.name;
                for (std::size_t p = 0; p < objs.size(); ++p)
                    for (std::size_t q = p + 1; q < objs.size(); ++q) {
                        const std::string& b1 = objs[p];
                        const std::string& b2 = objs[q];
                        std::string w = b1 + "," + b2;
                        if (done(cfg_.ruleset == Ruleset::Standard ? "iota2-obj-cut" : "iota2-obj'", {}, w)) continue;
                        if (cfg_.ruleset == Ruleset::Standard) {
                            int s1 = -1;
                            int s2 = -1;
                            Formula at1 = instObj(theta, y, b1);
                            Formula at2 = instObj(theta, y, b2);
                            if (activeEntry(b, satAt(j, at1), s1) && activeEntry(b, satAt(j, at2), s2) &&
                                one("iota2-obj", {bareEq(b1, b2)}, Cls::P1, {s1, s2}, w))
                                return true;
                            if (many("iota2-obj-cut", {{negSat(j, at1)}, {negSat(j, at2)}, {bareEq(b1, b2)}}, Cls::P4,
                                     w))
                                return true;
                        } else if (many("iota2-obj'",
                                        {{negSat(j, instObj(theta, y, b1))},
                                         {negSat(j, instObj(theta, y, b2))},
                                         {bareEq(b1, b2)}},
                                        Cls::P2, w)) {
                            return true;
                        }
                    }
                if (done("iota1-obj")) return false;
                std::string a = freshName(b, SymbolKind::FreeVar);
                return one("iota1-obj", {satAt(j, instObj(theta, y, a)), satAt(j, instObj(psi, x, a))}, Cls::P3, {},
                           {}, {a});
            }
            default:
                return false;
            }
        }
        switch (body.op()) {
        case Op::Not:
            return one("negneg", {satAt(j, body.kid(0))}, Cls::P1);
        case Op::And:
            return many("neg-and", {{negSat(j, body.kid(0))}, {negSat(j, body.kid(1))}}, Cls::P2, {});
        case Op::At:
            if (body.kid(0).op() == Op::Nominal) return one("neg-gl", {negSat(body.kid(0).name(), body.kid(1))}, Cls::P1);
            if (body.kid(0).op() == Op::TIota) {
                for (const auto& k : b.nominals_)
                    if (!done("neg-at-iota-tmp", {}, k) && many("neg-at-iota-tmp", {{negSat(k, body.kid(0))}, {negSat(k, body.kid(1))}}, Cls::P2, k))
                        return true;
            }
            return false;
        case Op::Down:
            return one("neg-down", {negSat(j, instTense(body.kid(0), body.name(), j))}, Cls::P1);
        case Op::Eq:
            return one("neg-eq", {mk::neg(body)}, Cls::P1);
        case Op::Exists:
            for (const auto& o : objs)
                if (!done("neg-exists", {}, o) && one("neg-exists", {negSat(j, instObj(body.kid(0), body.name(), o))}, Cls::P2, {}, o)) return true;
            return false;
        case Op::Future:
            if (auto it = b.futureOf_.find(j); it != b.futureOf_.end())
                for (const auto& [k, link] : it->second)
                    if (!done("neg-F", {link}, k) && one("neg-F", {negSat(k, body.kid(0))}, Cls::P1, {link}, k)) return true;
            return false;
        case Op::Past:
            if (auto it = b.pastOf_.find(j); it != b.pastOf_.end())
                for (const auto& [k, link] : it->second)
                    if (!done("neg-P", {link}, k) && one("neg-P", {negSat(k, body.kid(0))}, Cls::P1, {link}, k)) return true;
            return false;
        case Op::TIota: {
            const Formula& theta = body.kid(0);
            const std::string& x = body.name();
            if (done("neg-iota-tmp")) return false;
            std::string i = freshName(b, SymbolKind::Nominal);
            return many("neg-iota-tmp", {{negSat(j, instTense(theta, x, j))}, {satAt(i, instTense(theta, x, i)), negSat(j, mk::nom(i))}},
                        Cls::P3, {}, {i});
        }
        case Op::Lambda: {
            const Formula& psi = body.kid(0);
            const std::string& x = body.name();
            const Term& arg = body.args()[0];
            if (arg.kind != TermKind::Description)
                return one("neg-lambda", {negSat(j, instObj(psi, x, arg.name))}, Cls::P1);
            const Formula& theta = arg.body;
            const std::string& y = arg.name;
            std::string a = freshName(b, SymbolKind::FreeVar);
            for (const auto& o : objs)
                if (!done("neg-iota-obj", {}, o) && many("neg-iota-obj",
                         {{negSat(j, instObj(psi, x, o))},
                          {negSat(j, instObj(theta, y, o))},
                          {satAt(j, instObj(theta, y, a)), bareNeq(a, o)}},
                         Cls::P3, o, {a}))
                    return true;
            return false;
        }
        default:
            return false;
        }
    }

    // Zero-premise rules: (ref_j), (ref), frame axioms and (NED).
    bool zeroInstances(const Branch& b, bool literal, const Emit& emit) const {
        auto make = [](std::string rule, Formula f, std::string witness, std::vector<std::string> fresh = {}) {
            RuleInstance r;
            r.rule = std::move(rule);
            r.conclusions = {{std::move(f)}};
            r.witness = std::move(witness);
            r.fresh = std::move(fresh);
            return r;
        };
        for (const auto& j : b.nominals_)
            if (emit(make("ref-nom", satAt(j, mk::nom(j)), j), Cls::P1)) return true;
        for (const auto& o : literal ? b.objects_ : repObjects(b))
            if (emit(make("ref", bareEq(o, o), o), Cls::P1)) return true;
        for (std::size_t a = 0; a < cfg_.frameAxioms.size(); ++a)
            for (const auto& j : b.nominals_)
                if (emit(make("frame", satAt(j, cfg_.frameAxioms[a]), std::to_string(a) + "@" + j), Cls::P1))
                    return true;
        if (b.objects_.empty()) {
            std::string a = freshName(b, SymbolKind::FreeVar);
            if (emit(make("NED", bareEq(a, a), {}, {a}), Cls::P4)) return true;
        }
        return false;
    }

    bool allInstances(const Branch& b, bool literal, const Emit& emit) const {
        for (std::size_t i = 0; i < b.entries_.size(); ++i)
            if (entryInstances(b, static_cast<int>(i), literal, emit)) return true;
        return zeroInstances(b, literal, emit);
    }

    bool setPresent(const Branch& b, const std::vector<Formula>& set) const {
        return std::all_of(set.begin(), set.end(), [&](const Formula& f) { return present(b, f); });
    }

    // An instance is redundant when one of its conclusion sets, or an equivalent witness, is on the branch.
    bool redundant(const Branch& b, const RuleInstance& r) const {
        if (r.rule == "RR") return false;
        if (r.fresh.empty()) {
            for (const auto& set : r.conclusions)
                if (setPresent(b, set)) return true;
            return false;
        }
        const Formula& main = r.premises.empty() ? Formula() : b.entries_[r.premises[0]].formula;
        bool positive;
        std::string j;
        Formula body;
        if (r.rule == "NED") return !b.objects_.empty();
        splitSat(main, positive, j, body);
        if (r.rule == "exists") {
            for (const auto& o : b.objects_)
                if (present(b, satAt(j, instObj(body.kid(0), body.name(), o)))) return true;
            return false;
        }
        if (r.rule == "F" || r.rule == "P") {
            const auto& links = r.rule == "F" ? b.futureOf_ : b.pastOf_;
            if (auto it = links.find(j); it != links.end())
                for (const auto& [k, link] : it->second)
                    if (present(b, satAt(k, body.kid(0)))) return true;
            return false;
        }
        if (r.rule == "at-iota-tmp") {
            for (const auto& k : b.nominals_)
                if (present(b, satAt(k, body.kid(0))) && present(b, satAt(k, body.kid(1)))) return true;
            return false;
        }
        if (r.rule == "iota1-obj") {
            const Term& arg = body.args()[0];
            for (const auto& o : b.objects_)
                if (present(b, satAt(j, instObj(arg.body, arg.name, o))) &&
                    present(b, satAt(j, instObj(body.kid(0), body.name(), o))))
                    return true;
            return false;
        }
        if (r.rule == "neg-iota-obj") {
            if (setPresent(b, r.conclusions[0]) || setPresent(b, r.conclusions[1])) return true;
            const Term& arg = body.args()[0];
            const std::string& target = b.rep(r.witness);
            for (const auto& c : b.objects_)
                if (b.rep(c) != target && present(b, satAt(j, instObj(arg.body, arg.name, c)))) return true;
            return false;
        }
        if (r.rule == "neg-iota-tmp") {
            if (setPresent(b, r.conclusions[0])) return true;
            for (const auto& k : b.nominals_)
                if (present(b, satAt(k, instTense(body.kid(0), body.name(), k))) && present(b, negSat(j, mk::nom(k))))
                    return true;
            return false;
        }
        return false;
    }

    // Everything an entry's instance set depends on; equal signatures mean the same instances.
    static std::array<int, 5> signature(const Branch& b, int idx) {
        auto count = [](const Branch::Links& links, const std::string& n) {
            auto it = links.find(n);
            return it == links.end() ? 0 : static_cast<int>(it->second.size());
        };
        const Branch::Memo& memo = b.memo_[idx];
        std::array<int, 5> sig{b.unions_, 0, 0, 0, 0};
        const Branch::Links* links[] = {nullptr, &b.sameAs_, &b.futureOf_, &b.pastOf_};
        if (memo.links) sig[1] = count(*links[memo.links], memo.nominal);
        if (!memo.bridge.empty()) sig[2] = count(b.sameAs_, memo.bridge);
        if (memo.nominals) sig[3] = static_cast<int>(b.nominals_.size());
        if (memo.objects) sig[3] = static_cast<int>(b.objects_.size());
        if (memo.sides) {
            auto it = b.positiveBodies_.find(*memo.sides);
            sig[4] = it == b.positiveBodies_.end() ? 0 : it->second;
        }
        return sig;
    }

    // Records which parts of the branch an entry's instances depend on.
    static void classify(const Branch& b, int idx, Branch::Memo& memo) {
        memo.classified = true;
        bool positive;
        Formula body;
        if (!splitSat(b.entries_[idx].formula, positive, memo.nominal, body)) return;
        bool description = body.op() == Op::Lambda && body.args()[0].kind == TermKind::Description;
        if (positive) {
            memo.links = 1;
            if (body.op() == Op::Future && body.kid(0).op() == Op::Nominal) memo.bridge = body.kid(0).name();
            memo.nominals = body.op() == Op::TIota;
            memo.objects = description;
            if (body.op() == Op::TIota) {
                const Formula& theta = body.kid(0);
                bool bare = theta.op() == Op::TenseVar && theta.name() == body.name();
                memo.sides = bare ? Op::Nominal : theta.op();
            }
            if (description) memo.sides = body.args()[0].body.op();
        } else {
            if (body.op() == Op::Future) memo.links = 2;
            if (body.op() == Op::Past) memo.links = 3;
            memo.nominals = body.op() == Op::At;
            memo.objects = body.op() == Op::Exists || description;
        }
    }

    // First applicable instance in strategy order; redundant instances are marked as done.
    std::optional<RuleInstance> next(Branch& b) const {
        std::vector<std::string> done;
        // Live means neither ledgered nor redundant; redundant instances get ledgered on the way.
        auto live = [&](const RuleInstance& r) {
            std::string key = r.key();
            if (b.ledger_.count(key)) return false;
            if (!redundant(b, r)) return true;
            done.push_back(std::move(key));
            return false;
        };
        std::optional<RuleInstance> best[5];
        auto finish = [&]() -> std::optional<RuleInstance> {
            b.ledger_.insert(done.begin(), done.end());
            for (int k = 1; k <= 4; ++k)
                if (best[k]) return refreshFresh(b, std::move(*best[k]));
            return std::nullopt;
        };
        b.memo_.resize(b.entries_.size());
        for (std::size_t i = 0; i < b.entries_.size(); ++i) {
            Branch::Memo& memo = b.memo_[i];
            if (!memo.classified) classify(b, static_cast<int>(i), memo);
            auto sig = signature(b, static_cast<int>(i));
            bool usable = memo.valid && memo.sig == sig;
            for (int k = 1; usable && k <= 4; ++k)
                if (memo.first[k] && !live(*memo.first[k])) usable = false;
            if (!usable) {
                memo.first = {};
                bool partial = entryInstances(b, static_cast<int>(i), false, [&](RuleInstance&& r, Cls c) {
                    int cls = static_cast<int>(c);
                    // Fresh-rule redundancy is costlier, so it is checked only for a class's first candidate.
                    if (!r.fresh.empty() && memo.first[cls]) return false;
                    if (!live(r)) return false;
                    if (!memo.first[cls]) memo.first[cls] = std::move(r);
                    return cls == 1;
                });
                memo.valid = !partial;
                memo.sig = sig;
            }
            for (int k = 1; k <= 4; ++k)
                if (memo.first[k] && !best[k]) best[k] = memo.first[k];
            if (best[1]) return finish();
        }
        zeroInstances(b, false, [&](RuleInstance&& r, Cls c) {
            int cls = static_cast<int>(c);
            for (int k = 1; k <= cls; ++k)
                if (best[k]) return false;
            if (!live(r)) return false;
            best[cls] = std::move(r);
            return cls == 1;
        });
        return finish();
    }

    // A cached instance may name a fresh symbol that has since appeared on the branch.
    RuleInstance refreshFresh(const Branch& b, RuleInstance r) const {
        for (auto& name : r.fresh) {
            bool nominal = !isFreeVar(name);
            if (nominal ? !b.nominalSet_.count(name) : !b.objectAge_.count(name)) continue;
            std::string renamed = freshName(b, nominal ? SymbolKind::Nominal : SymbolKind::FreeVar);
            for (auto& set : r.conclusions)
                for (auto& f : set)
                    f = nominal ? renameNominal(f, name, renamed) : replaceObject(f, name, objectTerm(renamed));
            name = renamed;
        }
        return r;
    }

    Bias symbolBias(const Branch& b, const std::string& symbol) const {
        for (const auto& e : b.entries_) {
            bool hit = false;
            for (const auto& t : objectsInOrder(e.formula)) hit = hit || t.name == symbol;
            for (const auto& n : nominalsInOrder(e.formula)) hit = hit || n == symbol;
            if (hit) return e.bias;
        }
        return b.entries_.empty() ? Bias::None : b.entries_.front().bias;
    }

    // Side that introduced a symbol, or None when both root sides mention it.
    Bias ownerBias(const Branch& b, const std::string& symbol) const {
        Bias seen = Bias::None;
        for (const auto& e : b.entries_) {
            bool hit = false;
            for (const auto& t : objectsInOrder(e.formula)) hit = hit || t.name == symbol;
            for (const auto& n : nominalsInOrder(e.formula)) hit = hit || n == symbol;
            if (!hit) continue;
            if (e.origin != "root") return seen == Bias::None ? e.bias : seen;
            if (seen != Bias::None && seen != e.bias) return Bias::None;
            seen = e.bias;
        }
        return seen;
    }

    Bias conclusionBias(const Branch& b, const RuleInstance& r) const {
        if (!r.premises.empty()) {
            // Mixed premises: the conclusion goes to the side owning the symbols it mentions.
            Bias main = b.entries_[r.premises[0]].bias;
            Bias other = main;
            for (int p : r.premises)
                if (b.entries_[p].bias != main) other = b.entries_[p].bias;
            if (other == main) return main;
            bool mainOwned = false;
            bool otherOwned = false;
            for (const auto& set : r.conclusions)
                for (const auto& f : set) {
                    std::vector<std::string> names = nominalsInOrder(f);
                    for (const auto& t : objectsInOrder(f)) names.push_back(t.name);
                    for (const auto& n : names) {
                        Bias o = ownerBias(b, n);
                        mainOwned = mainOwned || o == main;
                        otherOwned = otherOwned || o == other;
                    }
                }
            return otherOwned && !mainOwned ? other : main;
        }
        if (r.rule == "frame") return symbolBias(b, r.witness.substr(r.witness.find('@') + 1));
        if (r.rule == "NED") return b.entries_.empty() ? Bias::None : b.entries_.front().bias;
        return symbolBias(b, r.witness);
    }

    // Adds conclusion set `k` of `r` to `b` and records it in `step`.
    void applySet(Branch& b, const RuleInstance& r, std::size_t k, TraceStep& step) const {
        Bias bias = conclusionBias(b, r);
        b.ledger_.insert(r.key());
        for (const auto& s : r.fresh) {
            if (isFreeVar(s))
                ++b.freshVars_;
            else
                ++b.freshNominals_;
        }
        if (r.rule == "RR") b.entries_[r.premises[0]].active = false;
        step.conclusions[k].clear();
        for (const auto& f : r.conclusions[k]) {
            auto [idx, added] = add(b, f, bias, r.rule);
            step.conclusions[k].push_back({f, bias, added, idx});
        }
    }

    TraceStep stepFor(const Branch& b, const RuleInstance& r) const {
        TraceStep s;
        s.rule = r.rule;
        for (int p : r.premises) s.premises.push_back({p, b.entries_[p].formula});
        s.conclusions.resize(r.conclusions.size());
        for (std::size_t k = 0; k < r.conclusions.size(); ++k)
            for (const auto& f : r.conclusions[k]) s.conclusions[k].push_back({f, Bias::None, false, -1});
        s.fresh = r.fresh;
        return s;
    }

    bool exceedsFresh(const Branch& b, const RuleInstance& r) const {
        for (const auto& s : r.fresh) {
            if (isFreeVar(s) && b.freshVars_ >= cfg_.maxFreshVars) return true;
            if (!isFreeVar(s) && b.freshNominals_ >= cfg_.maxFreshNominals) return true;
        }
        return false;
    }

    Verdict run(const std::vector<Formula>& roots, const std::vector<Bias>& bias) const {
        Verdict v{VerdictKind::Proved, {}, std::nullopt, -1, {}, {}};
        for (const auto& r : roots) v.trace.roots.push_back(canonicalBinders(r));
        v.trace.rootBias = bias;
        v.trace.rootBias.resize(roots.size(), Bias::None);
        Branch root = makeRoot(v.trace.roots, v.trace.rootBias);
        v.trace.nodes.push_back(TraceNode{});
        std::vector<std::pair<Branch, int>> stack;
        stack.emplace_back(std::move(root), 0);
        bool anyLimit = false;
        bool stop = false;
        while (!stack.empty()) {
            auto [b, n] = std::move(stack.back());
            stack.pop_back();
            if (stop) {
                v.trace.nodes[n].end = "unexplored";
                continue;
            }
            while (true) {
                TraceNode& node = v.trace.nodes[n];
                v.stats.maxFreshNominals = std::max(v.stats.maxFreshNominals, b.freshNominals_);
                v.stats.maxFreshVars = std::max(v.stats.maxFreshVars, b.freshVars_);
                if (b.status_ == BranchStatus::Closed) {
                    node.end = "bot";
                    if (auto pair = closingPair(b)) {
                        node.closure = *pair;
                        for (int i : *pair) node.closureFormulas.push_back(b.entries_[i].formula);
                    }
                    ++v.stats.closedBranches;
                    ++v.stats.branches;
                    break;
                }
                if (v.stats.steps >= cfg_.maxSteps) {
                    node.end = "limit";
                    b.status_ = BranchStatus::Limit;
                    v.stats.limit = "max-steps";
                    ++v.stats.branches;
                    stop = true;
                    anyLimit = true;
                    break;
                }
                auto inst = next(b);
                if (!inst) {
                    node.end = "open";
                    b.status_ = BranchStatus::Saturated;
                    ++v.stats.branches;
                    v.kind = VerdictKind::Refuted;
                    v.openNode = n;
                    v.openBranch = b;
                    stop = true;
                    break;
                }
                if (exceedsFresh(b, *inst)) {
                    node.end = "limit";
                    b.status_ = BranchStatus::Limit;
                    if (v.stats.limit.empty())
                        v.stats.limit = b.freshVars_ >= cfg_.maxFreshVars ? "max-fresh-vars" : "max-fresh-nominals";
                    ++v.stats.branches;
                    anyLimit = true;
                    break;
                }
                ++v.stats.steps;
                TraceStep step = stepFor(b, *inst);
                if (inst->conclusions.size() == 1) {
                    applySet(b, *inst, 0, step);
                    node.steps.push_back(std::move(step));
                    continue;
                }
                node.end = "split";
                std::vector<std::pair<Branch, int>> kids;
                for (std::size_t k = 0; k < inst->conclusions.size(); ++k) {
                    Branch child = b;
                    TraceStep childStep = step;
                    int first = static_cast<int>(child.entries_.size());
                    applySet(child, *inst, k, childStep);
                    step.conclusions[k] = childStep.conclusions[k];
                    int id = static_cast<int>(v.trace.nodes.size());
                    TraceNode cn;
                    cn.firstEntry = first;
                    v.trace.nodes.push_back(std::move(cn));
                    v.trace.nodes[n].children.push_back(id);
                    kids.emplace_back(std::move(child), id);
                }
                v.trace.nodes[n].steps.push_back(std::move(step));
                for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
                break;
            }
        }
        if (v.kind != VerdictKind::Refuted && anyLimit) v.kind = VerdictKind::ResourceLimit;
        return v;
    }

    static Branch makeRoot(const std::vector<Formula>& roots, const std::vector<Bias>& bias) {
        Branch b;
        for (std::size_t i = 0; i < roots.size(); ++i)
            add(b, canonicalBinders(roots[i]), i < bias.size() ? bias[i] : Bias::None, "root");
        return b;
    }

    const Config& cfg_;
};

Branch makeBranch(const std::vector<Formula>& roots, const std::vector<Bias>& bias) {
    return Engine::makeRoot(roots, bias);
}

std::optional<std::vector<int>> closingPair(const Branch& branch) {
    const auto& es = branch.entries();
    for (std::size_t i = 0; i < es.size(); ++i) {
        bool positive;
        std::string j;
        Formula body;
        if (splitSat(es[i].formula, positive, j, body) && positive && body.op() == Op::Bot)
            return std::vector<int>{static_cast<int>(i)};
        if (es[i].formula.op() != Op::Not) continue;
        int k = branch.find(es[i].formula.kid(0));
        if (k >= 0) return std::vector<int>{k, static_cast<int>(i)};
    }
    return std::nullopt;
}

std::vector<RuleInstance> applicableInstances(const Branch& branch, const Config& cfg) {
    Engine eng(cfg);
    std::vector<RuleInstance> out;
    for (int cls = 1; cls <= 4; ++cls)
        eng.allInstances(branch, false, [&](RuleInstance&& r, Cls c) {
            if (static_cast<int>(c) == cls && !branch.ledger().count(r.key()) && !eng.redundant(branch, r))
                out.push_back(std::move(r));
            return false;
        });
    return out;
}

std::vector<Branch> applyInstance(const Branch& branch, const RuleInstance& inst, const Config& cfg) {
    Engine eng(cfg);
    std::vector<Branch> out;
    for (std::size_t k = 0; k < inst.conclusions.size(); ++k) {
        Branch child = branch;
        TraceStep step = eng.stepFor(branch, inst);
        eng.applySet(child, inst, k, step);
        out.push_back(std::move(child));
    }
    return out;
}

Verdict runTableau(const std::vector<Formula>& roots, const std::vector<Bias>& bias, const Config& cfg) {
    Engine eng(cfg);
    return eng.run(roots, bias);
}

namespace {

std::set<std::string> usedNominals(const std::vector<Formula>& fs) {
    std::set<std::string> out;
    for (const auto& f : fs)
        for (const auto& n : nominalsInOrder(f)) out.insert(n);
    return out;
}

}  // namespace

Verdict prove(const Formula& input, const Config& cfg) {
    Formula phi = expandAbbrev(input);
    std::string n = freshSymbol(SymbolKind::Nominal, usedNominals({phi})).name;
    Verdict v = runTableau({negSat(n, phi)}, {}, cfg);
    v.rootNominal = n;
    return v;
}

Verdict entails(const std::vector<Formula>& inputs, const Formula& input, const Config& cfg) {
    std::vector<Formula> premises;
    for (const auto& p : inputs) premises.push_back(expandAbbrev(p));
    Formula goal = expandAbbrev(input);
    std::vector<Formula> all = premises;
    all.push_back(goal);
    std::string n = freshSymbol(SymbolKind::Nominal, usedNominals(all)).name;
    std::vector<Formula> roots;
    for (const auto& p : premises) roots.push_back(satAt(n, p));
    roots.push_back(negSat(n, goal));
    Verdict v = runTableau(roots, {}, cfg);
    v.rootNominal = n;
    return v;
}

// ---------------------------------------------------------------- replay

namespace {

class Replayer {
public:
    Replayer(const Config& cfg) : eng_(cfg) {}

    bool node(Branch& b, const ReplayNode& script, ReplayResult& res) {
        for (std::size_t s = 0; s < script.steps.size(); ++s) {
            const ReplayStep& step = script.steps[s];
            auto inst = match(b, step, res);
            if (!inst) return false;
            res.rulesApplied.push_back(step.rule);
            if (inst->conclusions.size() == 1) {
                TraceStep t = eng_.stepFor(b, *inst);
                eng_.applySet(b, *inst, 0, t);
                continue;
            }
            if (s + 1 != script.steps.size() || script.children.size() != inst->conclusions.size()) {
                res.error = "branching step " + step.rule + " must end its node with one child per conclusion set";
                return false;
            }
            for (std::size_t k = 0; k < inst->conclusions.size(); ++k) {
                Branch child = b;
                TraceStep t = eng_.stepFor(b, *inst);
                eng_.applySet(child, *inst, k, t);
                if (!node(child, script.children[k], res)) return false;
            }
            return true;
        }
        if (!script.children.empty()) {
            res.error = "children given without a branching step";
            return false;
        }
        if (script.closes) {
            if (!closingPair(b)) {
                res.error = "branch does not close after " + std::to_string(res.rulesApplied.size()) + " steps";
                return false;
            }
            res.rulesApplied.push_back("bot");
        }
        return true;
    }

private:
    Engine eng_;

    static std::set<Formula> asSet(const std::vector<Formula>& v) {
        std::set<Formula> out;
        for (const auto& f : v) out.insert(canonicalBinders(f));
        return out;
    }

    std::optional<RuleInstance> match(const Branch& b, const ReplayStep& step, ReplayResult& res) {
        std::set<Formula> wanted = asSet(step.premises);
        for (const auto& p : step.premises)
            if (b.find(canonicalBinders(p)) < 0) {
                res.error = "premise not on branch for " + step.rule + ": " + printFormula(p);
                return std::nullopt;
            }
        // Names in the expected conclusions that are new on the branch stand for the fresh symbol.
        std::set<std::string> newNames;
        for (const auto& set : step.conclusions)
            for (const auto& f : set) {
                for (const auto& n : nominalsInOrder(f))
                    if (!std::count(b.nominals().begin(), b.nominals().end(), n)) newNames.insert(n);
                for (const auto& t : objectsInOrder(f))
                    if (!std::count(b.objects().begin(), b.objects().end(), t.name)) newNames.insert(t.name);
            }
        std::optional<RuleInstance> found;
        eng_.allInstances(b, true, [&](RuleInstance&& r, Cls) {
            if (r.rule != step.rule) return false;
            std::set<Formula> prem;
            for (int p : r.premises) prem.insert(b.entries()[p].formula);
            if (prem != wanted) return false;
            if (b.ledger().count(r.key())) return false;
            if (r.fresh.size() == 1 && newNames.size() == 1) {
                const std::string& from = r.fresh[0];
                const std::string& to = *newNames.begin();
                for (auto& set : r.conclusions)
                    for (auto& f : set)
                        f = isFreeVar(from) ? replaceObject(f, from, objectTerm(to)) : renameNominal(f, from, to);
                r.fresh = {to};
            }
            if (r.conclusions.size() != step.conclusions.size()) return false;
            for (std::size_t k = 0; k < r.conclusions.size(); ++k)
                if (asSet(r.conclusions[k]) != asSet(step.conclusions[k])) return false;
            found = std::move(r);
            return true;
        });
        if (!found) res.error = "no applicable " + step.rule + " instance matches step " + std::to_string(res.rulesApplied.size() + 1);
        return found;
    }
};

}  // namespace

ReplayResult replay(const std::vector<Formula>& roots, const ReplayNode& script, const Config& cfg) {
    ReplayResult res;
    Replayer r(cfg);
    Branch b = makeBranch(roots);
    res.ok = r.node(b, script, res);
    return res;
}

}  // namespace fohl
