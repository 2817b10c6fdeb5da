#include "fohl/semantics.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fohl {

BudgetError::BudgetError(std::uint64_t required, std::uint64_t budget)
    : std::runtime_error("oracle search space of " + std::to_string(required) + " models exceeds budget " +
                         std::to_string(budget)),
      required(required), budget(budget) {}

// ---------------------------------------------------------------- model files

Model buildModel(const ModelFile& file) {
    auto violations = validateModelFile(file);
    if (!violations.empty()) throw ModelError(violations);
    Model m;
    m.timeNames = file.times;
    m.objectNames = file.domain;
    std::map<std::string, int> timeIndex;
    std::map<std::string, int> objIndex;
    for (int i = 0; i < m.times(); ++i) timeIndex[m.timeNames[i]] = i;
    for (int i = 0; i < m.objects(); ++i) objIndex[m.objectNames[i]] = i;
    m.prec.assign(m.times(), std::vector<bool>(m.times(), false));
    for (const auto& [a, b] : file.prec) m.prec[timeIndex[a]][timeIndex[b]] = true;
    for (const auto& [n, t] : file.nominals) m.nominals[n] = timeIndex[t];
    for (const auto& [c, o] : file.constants) m.constants[c] = objIndex[o];
    for (const auto& [p, ext] : file.predicates) {
        Model::Extension e;
        e.arity = ext.arity;
        e.at.resize(m.times());
        for (const auto& [t, tuples] : ext.at)
            for (const auto& tuple : tuples) {
                std::vector<int> coded;
                for (const auto& o : tuple) coded.push_back(objIndex[o]);
                e.at[timeIndex[t]].insert(coded);
            }
        m.predicates[p] = std::move(e);
    }
    return m;
}

Assignment buildAssignment(const ModelFile& file, const Model& m) {
    Assignment v;
    for (const auto& [x, o] : file.objectAssignment)
        v.objects[x] = static_cast<int>(std::find(m.objectNames.begin(), m.objectNames.end(), o) - m.objectNames.begin());
    for (const auto& [x, t] : file.timeAssignment)
        v.times[x] = static_cast<int>(std::find(m.timeNames.begin(), m.timeNames.end(), t) - m.timeNames.begin());
    return v;
}

ModelFile toModelFile(const Model& m, const Assignment& v, std::optional<int> designated) {
    ModelFile f;
    f.times = m.timeNames;
    f.domain = m.objectNames;
    for (int t = 0; t < m.times(); ++t)
        for (int s = 0; s < m.times(); ++s)
            if (m.prec[t][s]) f.prec.emplace_back(m.timeNames[t], m.timeNames[s]);
    for (const auto& [n, t] : m.nominals) f.nominals[n] = m.timeNames[t];
    for (const auto& [c, o] : m.constants) f.constants[c] = m.objectNames[o];
    for (const auto& [p, ext] : m.predicates) {
        ModelFile::Extension e;
        e.arity = ext.arity;
        for (int t = 0; t < m.times(); ++t) {
            if (ext.at[t].empty()) continue;
            auto& tuples = e.at[m.timeNames[t]];
            for (const auto& tuple : ext.at[t]) {
                std::vector<std::string> named;
                for (int o : tuple) named.push_back(m.objectNames[o]);
                tuples.insert(named);
            }
        }
        f.predicates[p] = std::move(e);
    }
    for (const auto& [x, o] : v.objects) f.objectAssignment[x] = m.objectNames[o];
    for (const auto& [x, t] : v.times) f.timeAssignment[x] = m.timeNames[t];
    if (designated) f.designated = m.timeNames[*designated];
    return f;
}

// ---------------------------------------------------------------- pointwise satisfaction

namespace {

class Pointwise {
public:
    Pointwise(const Model& m, const Assignment& v) : m_(m), v_(v) {}

    bool sat(int t, const Formula& f) {
        switch (f.op()) {
        case Op::Bot: return false;
        case Op::Top: return true;
        case Op::Pred: {
            auto it = m_.predicates.find(f.name());
            if (it == m_.predicates.end()) throw EvaluationError("predicate " + f.name() + " is not interpreted");
            if (it->second.arity != static_cast<int>(f.args().size()))
                throw EvaluationError("predicate " + f.name() + " interpreted with a different arity");
            std::vector<int> tuple;
            for (const auto& a : f.args()) tuple.push_back(object(a));
            return it->second.at[t].count(tuple) > 0;
        }
        case Op::Eq: return object(f.args()[0]) == object(f.args()[1]);
        case Op::Neq: return object(f.args()[0]) != object(f.args()[1]);
        case Op::Nominal: return t == nominal(f.name());
        case Op::TenseVar: return t == tense(f.name());
        case Op::TIota: {
            if (!withTense(f.name(), t, [&] { return sat(t, f.kid(0)); })) return false;
            for (int s = 0; s < m_.times(); ++s)
                if (s != t && withTense(f.name(), s, [&] { return sat(s, f.kid(0)); })) return false;
            return true;
        }
        case Op::Not: return !sat(t, f.kid(0));
        case Op::And: return sat(t, f.kid(0)) && sat(t, f.kid(1));
        case Op::Or: return sat(t, f.kid(0)) || sat(t, f.kid(1));
        case Op::Imp: return !sat(t, f.kid(0)) || sat(t, f.kid(1));
        case Op::Iff: return sat(t, f.kid(0)) == sat(t, f.kid(1));
        case Op::Future:
            for (int s = 0; s < m_.times(); ++s)
                if (m_.prec[t][s] && sat(s, f.kid(0))) return true;
            return false;
        case Op::Past:
            for (int s = 0; s < m_.times(); ++s)
                if (m_.prec[s][t] && sat(s, f.kid(0))) return true;
            return false;
        case Op::G:
            for (int s = 0; s < m_.times(); ++s)
                if (m_.prec[t][s] && !sat(s, f.kid(0))) return false;
            return true;
        case Op::H:
            for (int s = 0; s < m_.times(); ++s)
                if (m_.prec[s][t] && !sat(s, f.kid(0))) return false;
            return true;
        case Op::Exists:
            for (int o = 0; o < m_.objects(); ++o)
                if (withObject(f.name(), o, [&] { return sat(t, f.kid(0)); })) return true;
            return false;
        case Op::Forall:
            for (int o = 0; o < m_.objects(); ++o)
                if (!withObject(f.name(), o, [&] { return sat(t, f.kid(0)); })) return false;
            return true;
        case Op::Lambda: {
            const Term& arg = f.args()[0];
            if (arg.kind != TermKind::Description) {
                int o = object(arg);
                return withObject(f.name(), o, [&] { return sat(t, f.kid(0)); });
            }
            int witness = -1;
            for (int o = 0; o < m_.objects(); ++o) {
                if (!withObject(arg.name, o, [&] { return sat(t, arg.body); })) continue;
                if (witness >= 0) return false;  // not unique
                witness = o;
            }
            if (witness < 0) return false;
            return withObject(f.name(), witness, [&] { return sat(t, f.kid(0)); });
        }
        case Op::At: {
            const Formula& d = f.kid(0);
            if (d.op() == Op::Nominal) return sat(nominal(d.name()), f.kid(1));
            if (d.op() == Op::TenseVar) return sat(tense(d.name()), f.kid(1));
            for (int s = 0; s < m_.times(); ++s)
                if (sat(s, d) && sat(s, f.kid(1))) return true;
            return false;
        }
        case Op::Down: return withTense(f.name(), t, [&] { return sat(t, f.kid(0)); });
        }
        return false;
    }

private:
    const Model& m_;
    Assignment v_;

    template <class Fn>
    bool withObject(const std::string& x, int o, Fn fn) {
        auto it = v_.objects.find(x);
        std::optional<int> saved = it == v_.objects.end() ? std::nullopt : std::optional<int>(it->second);
        v_.objects[x] = o;
        bool r = fn();
        if (saved)
            v_.objects[x] = *saved;
        else
            v_.objects.erase(x);
        return r;
    }
    template <class Fn>
    bool withTense(const std::string& x, int t, Fn fn) {
        auto it = v_.times.find(x);
        std::optional<int> saved = it == v_.times.end() ? std::nullopt : std::optional<int>(it->second);
        v_.times[x] = t;
        bool r = fn();
        if (saved)
            v_.times[x] = *saved;
        else
            v_.times.erase(x);
        return r;
    }
    int object(const Term& a) const {
        if (a.kind == TermKind::Constant) {
            auto it = m_.constants.find(a.name);
            if (it == m_.constants.end()) throw EvaluationError("constant " + a.name + " is not interpreted");
            return it->second;
        }
        if (a.kind == TermKind::Description) throw EvaluationError("description outside a λ-atom");
        auto it = v_.objects.find(a.name);
        if (it != v_.objects.end()) return it->second;
        if (v_.defaultObject) return *v_.defaultObject;
        throw EvaluationError("variable " + a.name + " is not assigned");
    }
    int nominal(const std::string& n) const {
        auto it = m_.nominals.find(n);
        if (it == m_.nominals.end()) throw EvaluationError("nominal '" + n + " is not interpreted");
        return it->second;
    }
    int tense(const std::string& x) const {
        auto it = v_.times.find(x);
        if (it != v_.times.end()) return it->second;
        if (v_.defaultTime) return *v_.defaultTime;
        throw EvaluationError("tense variable $" + x + " is not assigned");
    }
};

}  // namespace

bool satisfies(const Model& m, int t, const Assignment& v, const Formula& phi) {
    if (t < 0 || t >= m.times()) throw EvaluationError("time index out of range");
    return Pointwise(m, v).sat(t, phi);
}

std::set<int> truthSet(const Model& m, const Assignment& v, const Formula& phi) {
    std::set<int> out;
    for (int t = 0; t < m.times(); ++t)
        if (satisfies(m, t, v, phi)) out.insert(t);
    return out;
}

// ---------------------------------------------------------------- bitmask evaluation

namespace {

enum class TermSrc { Slot, Constant, Free };

struct CTerm {
    TermSrc src;
    int index;
};

struct CNode {
    Op op;
    int a = -1;
    int b = -1;
    int slot = -1;  // binder slot (object or tense)
    int ref = -1;   // predicate, nominal or free tense variable index
    std::vector<CTerm> args;
    int descSlot = -1;  // λ-atom with description: slot of the description variable
    int descBody = -1;
};

// Per-evaluation state; arrays are owned by the caller.
struct Frame {
    int T = 0;
    int D = 0;
    std::uint64_t full = 0;
    const std::uint64_t* succ = nullptr;  // succ[t]: times after t
    const std::uint64_t* pred = nullptr;  // pred[t]: times before t
    const int* nominals = nullptr;
    const int* constants = nullptr;
    const int* freeVars = nullptr;
    const int* freeTense = nullptr;
    const std::uint64_t* const* extensions = nullptr;  // per predicate, indexed by tuple code
    int* objSlots = nullptr;
    int* tenseSlots = nullptr;
};

}  // namespace

struct MaskEvaluator::Impl {
    std::vector<CNode> nodes;
    int root = -1;
    std::vector<std::string> nominals;
    std::vector<std::string> constants;
    std::vector<std::string> freeVars;
    std::vector<std::string> freeTense;
    std::vector<std::pair<std::string, int>> predicates;
    int objSlots = 0;
    int tenseSlots = 0;

    template <class T>
    static int indexOf(std::vector<T>& v, const T& x) {
        auto it = std::find(v.begin(), v.end(), x);
        if (it != v.end()) return static_cast<int>(it - v.begin());
        v.push_back(x);
        return static_cast<int>(v.size()) - 1;
    }

    int predIndex(const std::string& p, int arity) {
        for (std::size_t i = 0; i < predicates.size(); ++i)
            if (predicates[i].first == p) return static_cast<int>(i);
        predicates.emplace_back(p, arity);
        return static_cast<int>(predicates.size()) - 1;
    }

    CTerm term(const Term& t, const std::vector<std::pair<std::string, int>>& scope) {
        switch (t.kind) {
        case TermKind::Bound:
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == t.name) return {TermSrc::Slot, it->second};
            return {TermSrc::Free, indexOf(freeVars, t.name)};
        case TermKind::Free: return {TermSrc::Free, indexOf(freeVars, t.name)};
        case TermKind::Constant: return {TermSrc::Constant, indexOf(constants, t.name)};
        case TermKind::Description: break;
        }
        throw EvaluationError("description outside a λ-atom");
    }

    int compile(const Formula& f, std::vector<std::pair<std::string, int>>& obj,
                std::vector<std::pair<std::string, int>>& tense) {
        CNode n;
        n.op = f.op();
        switch (f.op()) {
        case Op::Pred:
            n.ref = predIndex(f.name(), static_cast<int>(f.args().size()));
            for (const auto& a : f.args()) n.args.push_back(term(a, obj));
            break;
        case Op::Eq:
        case Op::Neq:
            for (const auto& a : f.args()) n.args.push_back(term(a, obj));
            break;
        case Op::Nominal: n.ref = indexOf(nominals, f.name()); break;
        case Op::TenseVar: {
            for (auto it = tense.rbegin(); it != tense.rend(); ++it)
                if (it->first == f.name()) {
                    n.slot = it->second;
                    break;
                }
            if (n.slot < 0) n.ref = indexOf(freeTense, f.name());
            break;
        }
        case Op::TIota:
        case Op::Down:
            n.slot = tenseSlots++;
            tense.emplace_back(f.name(), n.slot);
            n.a = compile(f.kid(0), obj, tense);
            tense.pop_back();
            break;
        case Op::Exists:
        case Op::Forall:
            n.slot = objSlots++;
            obj.emplace_back(f.name(), n.slot);
            n.a = compile(f.kid(0), obj, tense);
            obj.pop_back();
            break;
        case Op::Lambda: {
            n.slot = objSlots++;
            obj.emplace_back(f.name(), n.slot);
            n.a = compile(f.kid(0), obj, tense);
            obj.pop_back();
            const Term& arg = f.args()[0];
            if (arg.kind == TermKind::Description) {
                n.descSlot = objSlots++;
                obj.emplace_back(arg.name, n.descSlot);
                n.descBody = compile(arg.body, obj, tense);
                obj.pop_back();
            } else {
                n.args.push_back(term(arg, obj));
            }
            break;
        }
        default:
            if (!f->kids.empty()) n.a = compile(f.kid(0), obj, tense);
            if (f->kids.size() > 1) n.b = compile(f.kid(1), obj, tense);
            break;
        }
        nodes.push_back(std::move(n));
        return static_cast<int>(nodes.size()) - 1;
    }

    int value(const CTerm& t, const Frame& fr) const {
        switch (t.src) {
        case TermSrc::Slot: return fr.objSlots[t.index];
        case TermSrc::Constant: return fr.constants[t.index];
        case TermSrc::Free: return fr.freeVars[t.index];
        }
        return 0;
    }

    std::uint64_t eval(int i, Frame& fr) const {
        const CNode& n = nodes[i];
        switch (n.op) {
        case Op::Bot: return 0;
        case Op::Top: return fr.full;
        case Op::Pred: {
            std::size_t code = 0;
            for (const auto& a : n.args) code = code * fr.D + value(a, fr);
            return fr.extensions[n.ref][code];
        }
        case Op::Eq: return value(n.args[0], fr) == value(n.args[1], fr) ? fr.full : 0;
        case Op::Neq: return value(n.args[0], fr) != value(n.args[1], fr) ? fr.full : 0;
        case Op::Nominal: return std::uint64_t{1} << fr.nominals[n.ref];
        case Op::TenseVar:
            return std::uint64_t{1} << (n.slot >= 0 ? fr.tenseSlots[n.slot] : fr.freeTense[n.ref]);
        case Op::TIota: {
            std::uint64_t holds = 0;
            for (int t = 0; t < fr.T; ++t) {
                fr.tenseSlots[n.slot] = t;
                holds |= eval(n.a, fr) & (std::uint64_t{1} << t);
            }
            return std::popcount(holds) == 1 ? holds : 0;
        }
        case Op::Down: {
            std::uint64_t out = 0;
            for (int t = 0; t < fr.T; ++t) {
                fr.tenseSlots[n.slot] = t;
                out |= eval(n.a, fr) & (std::uint64_t{1} << t);
            }
            return out;
        }
        case Op::Not: return ~eval(n.a, fr) & fr.full;
        case Op::And: {
            std::uint64_t l = eval(n.a, fr);
            return l ? l & eval(n.b, fr) : 0;
        }
        case Op::Or: return eval(n.a, fr) | eval(n.b, fr);
        case Op::Imp: return (~eval(n.a, fr) & fr.full) | eval(n.b, fr);
        case Op::Iff: return ~(eval(n.a, fr) ^ eval(n.b, fr)) & fr.full;
        case Op::Future:
        case Op::Past:
        case Op::G:
        case Op::H: {
            std::uint64_t m = eval(n.a, fr);
            const std::uint64_t* rel = (n.op == Op::Future || n.op == Op::G) ? fr.succ : fr.pred;
            bool universal = n.op == Op::G || n.op == Op::H;
            std::uint64_t out = 0;
            for (int t = 0; t < fr.T; ++t) {
                bool hit = universal ? (rel[t] & ~m) == 0 : (rel[t] & m) != 0;
                if (hit) out |= std::uint64_t{1} << t;
            }
            return out;
        }
        case Op::Exists: {
            std::uint64_t out = 0;
            for (int o = 0; o < fr.D && out != fr.full; ++o) {
                fr.objSlots[n.slot] = o;
                out |= eval(n.a, fr);
            }
            return out;
        }
        case Op::Forall: {
            std::uint64_t out = fr.full;
            for (int o = 0; o < fr.D && out; ++o) {
                fr.objSlots[n.slot] = o;
                out &= eval(n.a, fr);
            }
            return out;
        }
        case Op::Lambda: {
            if (n.descBody < 0) {
                fr.objSlots[n.slot] = value(n.args[0], fr);
                return eval(n.a, fr);
            }
            std::uint64_t seen = 0;
            std::uint64_t multi = 0;
            std::uint64_t good = 0;
            for (int o = 0; o < fr.D; ++o) {
                fr.objSlots[n.descSlot] = o;
                std::uint64_t d = eval(n.descBody, fr);
                if (!d) continue;
                multi |= seen & d;
                seen |= d;
                fr.objSlots[n.slot] = o;
                good |= d & eval(n.a, fr);
            }
            return good & ~multi;
        }
        case Op::At: {
            std::uint64_t where = eval(n.a, fr);
            return (where & eval(n.b, fr)) ? fr.full : 0;
        }
        }
        return 0;
    }
};

MaskEvaluator::MaskEvaluator(const Formula& phi) {
    auto impl = std::make_shared<Impl>();
    std::vector<std::pair<std::string, int>> obj;
    std::vector<std::pair<std::string, int>> tense;
    impl->root = impl->compile(phi, obj, tense);
    impl_ = std::move(impl);
}

std::uint64_t MaskEvaluator::evaluate(const Model& m, const Assignment& v) const {
    const Impl& im = *impl_;
    if (m.times() > 64) throw EvaluationError("bitmask evaluation supports at most 64 times");
    Frame fr;
    fr.T = m.times();
    fr.D = m.objects();
    fr.full = fr.T == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << fr.T) - 1;
    std::vector<std::uint64_t> succ(fr.T, 0);
    std::vector<std::uint64_t> pred(fr.T, 0);
    for (int t = 0; t < fr.T; ++t)
        for (int s = 0; s < fr.T; ++s)
            if (m.prec[t][s]) {
                succ[t] |= std::uint64_t{1} << s;
                pred[s] |= std::uint64_t{1} << t;
            }
    auto lookup = [](const std::map<std::string, int>& map, const std::string& k, std::optional<int> dflt,
                     const char* what) {
        auto it = map.find(k);
        if (it != map.end()) return it->second;
        if (dflt) return *dflt;
        throw EvaluationError(std::string(what) + " " + k + " is not interpreted");
    };
    std::vector<int> noms;
    for (const auto& n : im.nominals) noms.push_back(lookup(m.nominals, n, std::nullopt, "nominal"));
    std::vector<int> consts;
    for (const auto& c : im.constants) consts.push_back(lookup(m.constants, c, std::nullopt, "constant"));
    std::vector<int> fvs;
    for (const auto& x : im.freeVars) fvs.push_back(lookup(v.objects, x, v.defaultObject, "variable"));
    std::vector<int> fts;
    for (const auto& x : im.freeTense) fts.push_back(lookup(v.times, x, v.defaultTime, "tense variable"));
    std::vector<std::vector<std::uint64_t>> ext;
    for (const auto& [p, arity] : im.predicates) {
        auto it = m.predicates.find(p);
        if (it == m.predicates.end()) throw EvaluationError("predicate " + p + " is not interpreted");
        if (it->second.arity != arity) throw EvaluationError("predicate " + p + " interpreted with a different arity");
        std::size_t codes = 1;
        for (int k = 0; k < arity; ++k) codes *= static_cast<std::size_t>(fr.D);
        std::vector<std::uint64_t> masks(codes, 0);
        for (int t = 0; t < fr.T; ++t)
            for (const auto& tuple : it->second.at[t]) {
                std::size_t code = 0;
                for (int o : tuple) code = code * fr.D + o;
                masks[code] |= std::uint64_t{1} << t;
            }
        ext.push_back(std::move(masks));
    }
    std::vector<const std::uint64_t*> extPtr;
    for (const auto& e : ext) extPtr.push_back(e.data());
    std::vector<int> objSlots(im.objSlots + 1, 0);
    std::vector<int> tenseSlots(im.tenseSlots + 1, 0);
    fr.succ = succ.data();
    fr.pred = pred.data();
    fr.nominals = noms.data();
    fr.constants = consts.data();
    fr.freeVars = fvs.data();
    fr.freeTense = fts.data();
    fr.extensions = extPtr.data();
    fr.objSlots = objSlots.data();
    fr.tenseSlots = tenseSlots.data();
    return im.eval(im.root, fr);
}

// ---------------------------------------------------------------- bounded oracle

namespace {

constexpr std::uint64_t kOverflow = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mulSat(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kOverflow / b) return kOverflow;
    return a * b;
}

std::uint64_t powSat(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r = mulSat(r, base);
    return r;
}

// One (T, D) slice of the enumeration with its mixed-radix decoding.
struct Slice {
    int T;
    int D;
    std::uint64_t precCount;
    std::uint64_t nomCount;
    std::uint64_t constCount;
    std::uint64_t predCount;
    std::uint64_t fvCount;
    std::uint64_t total;
    std::vector<int> predOffset;  // bit offset of each predicate
    std::vector<std::size_t> predCodes;
    int predBits = 0;
};

Slice makeSlice(const MaskEvaluator::Impl& im, int T, int D) {
    Slice s{T, D, 0, 0, 0, 0, 0, 0, {}, {}, 0};
    s.precCount = T * T >= 64 ? kOverflow : std::uint64_t{1} << (T * T);
    s.nomCount = powSat(T, im.nominals.size());
    s.constCount = powSat(D, im.constants.size());
    s.fvCount = powSat(D, im.freeVars.size());
    std::uint64_t bits = 0;
    for (const auto& [p, arity] : im.predicates) {
        std::size_t codes = powSat(D, arity);
        s.predOffset.push_back(static_cast<int>(std::min<std::uint64_t>(bits, 1 << 20)));
        s.predCodes.push_back(codes);
        bits += static_cast<std::uint64_t>(T) * codes;
    }
    s.predBits = static_cast<int>(std::min<std::uint64_t>(bits, 64));
    s.predCount = bits >= 63 ? kOverflow : std::uint64_t{1} << bits;
    s.total = mulSat(mulSat(mulSat(mulSat(s.precCount, s.nomCount), s.constCount), s.predCount), s.fvCount);
    return s;
}

// Thread-local buffers for decoding one model of a slice.
struct Decoded {
    std::vector<std::uint64_t> succ;
    std::vector<std::uint64_t> pred;
    std::vector<int> noms;
    std::vector<int> consts;
    std::vector<int> fvs;
    std::vector<std::vector<std::uint64_t>> ext;
    std::vector<const std::uint64_t*> extPtr;
    std::vector<int> objSlots;
    std::vector<int> tenseSlots;
    Frame fr;

    Decoded(const MaskEvaluator::Impl& im, const Slice& s) {
        succ.assign(s.T, 0);
        pred.assign(s.T, 0);
        noms.assign(im.nominals.size(), 0);
        consts.assign(im.constants.size(), 0);
        fvs.assign(im.freeVars.size(), 0);
        for (std::size_t p = 0; p < im.predicates.size(); ++p) ext.emplace_back(s.predCodes[p], 0);
        for (const auto& e : ext) extPtr.push_back(e.data());
        objSlots.assign(im.objSlots + 1, 0);
        tenseSlots.assign(im.tenseSlots + 1, 0);
        fr.T = s.T;
        fr.D = s.D;
        fr.full = (std::uint64_t{1} << s.T) - 1;
        fr.succ = succ.data();
        fr.pred = pred.data();
        fr.nominals = noms.data();
        fr.constants = consts.data();
        fr.freeVars = fvs.data();
        fr.freeTense = nullptr;
        fr.extensions = extPtr.data();
        fr.objSlots = objSlots.data();
        fr.tenseSlots = tenseSlots.data();
    }

    void decode(const Slice& s, std::uint64_t idx) {
        std::uint64_t fv = idx % s.fvCount;
        idx /= s.fvCount;
        std::uint64_t predBits = idx % s.predCount;
        idx /= s.predCount;
        std::uint64_t cst = idx % s.constCount;
        idx /= s.constCount;
        std::uint64_t nom = idx % s.nomCount;
        std::uint64_t precMask = idx / s.nomCount;
        // Most significant digit first so that lower indices compare lexicographically.
        for (int i = static_cast<int>(fvs.size()) - 1; i >= 0; --i) {
            fvs[i] = static_cast<int>(fv % s.D);
            fv /= s.D;
        }
        for (int i = static_cast<int>(consts.size()) - 1; i >= 0; --i) {
            consts[i] = static_cast<int>(cst % s.D);
            cst /= s.D;
        }
        for (int i = static_cast<int>(noms.size()) - 1; i >= 0; --i) {
            noms[i] = static_cast<int>(nom % s.T);
            nom /= s.T;
        }
        std::fill(succ.begin(), succ.end(), 0);
        std::fill(pred.begin(), pred.end(), 0);
        for (int t = 0; t < s.T; ++t)
            for (int u = 0; u < s.T; ++u)
                if (precMask >> (t * s.T + u) & 1) {
                    succ[t] |= std::uint64_t{1} << u;
                    pred[u] |= std::uint64_t{1} << t;
                }
        std::uint64_t timeMask = (std::uint64_t{1} << s.T) - 1;
        for (std::size_t p = 0; p < ext.size(); ++p)
            for (std::size_t c = 0; c < s.predCodes[p]; ++c)
                ext[p][c] = (predBits >> (s.predOffset[p] + c * s.T)) & timeMask;
    }

    SatWitness witness(const MaskEvaluator::Impl& im, const Slice& s, std::uint64_t idx, int time) {
        decode(s, idx);
        SatWitness w;
        w.time = time;
        w.index = idx;
        Model& m = w.model;
        for (int t = 0; t < s.T; ++t) m.timeNames.push_back("t" + std::to_string(t));
        for (int o = 0; o < s.D; ++o) m.objectNames.push_back("o" + std::to_string(o));
        m.prec.assign(s.T, std::vector<bool>(s.T, false));
        for (int t = 0; t < s.T; ++t)
            for (int u = 0; u < s.T; ++u) m.prec[t][u] = succ[t] >> u & 1;
        for (std::size_t i = 0; i < noms.size(); ++i) m.nominals[im.nominals[i]] = noms[i];
        for (std::size_t i = 0; i < consts.size(); ++i) m.constants[im.constants[i]] = consts[i];
        for (std::size_t p = 0; p < ext.size(); ++p) {
            Model::Extension e;
            e.arity = im.predicates[p].second;
            e.at.resize(s.T);
            for (std::size_t c = 0; c < s.predCodes[p]; ++c) {
                std::vector<int> tuple(e.arity);
                std::size_t code = c;
                for (int k = e.arity - 1; k >= 0; --k) {
                    tuple[k] = static_cast<int>(code % s.D);
                    code /= s.D;
                }
                for (int t = 0; t < s.T; ++t)
                    if (ext[p][c] >> t & 1) e.at[t].insert(tuple);
            }
            m.predicates[im.predicates[p].first] = std::move(e);
        }
        for (std::size_t i = 0; i < fvs.size(); ++i) w.assignment.objects[im.freeVars[i]] = fvs[i];
        return w;
    }
};

}  // namespace

struct OracleAccess {
    static const MaskEvaluator::Impl& impl(const MaskEvaluator& e) { return *e.impl_; }
};

std::uint64_t oracleSearchSpace(const Formula& phi, int maxT, int maxD) {
    MaskEvaluator ev(phi);
    const auto& im = OracleAccess::impl(ev);
    std::uint64_t total = 0;
    for (int T = 1; T <= maxT; ++T)
        for (int D = 1; D <= maxD; ++D) {
            std::uint64_t n = makeSlice(im, T, D).total;
            total = n == kOverflow || total > kOverflow - n ? kOverflow : total + n;
        }
    return total;
}

OracleResult boundedOracle(const Formula& phi, int maxT, int maxD, const OracleOptions& opts) {
    if (maxT < 1 || maxD < 1) throw std::invalid_argument("oracle bounds must be at least 1");
    if (maxT > 7) throw std::invalid_argument("oracle supports at most 7 times");
    MaskEvaluator ev(phi);
    const auto& im = OracleAccess::impl(ev);
    if (!im.freeTense.empty()) throw EvaluationError("oracle input has a free tense variable");
    std::uint64_t required = oracleSearchSpace(phi, maxT, maxD);
    if (required > opts.budget) throw BudgetError(required, opts.budget);

    std::uint64_t checked = 0;
    constexpr std::uint64_t kBlock = 1 << 14;
    for (int T = 1; T <= maxT; ++T)
        for (int D = 1; D <= maxD; ++D) {
            Slice s = makeSlice(im, T, D);
            for (std::uint64_t start = 0; start < s.total; start += kBlock) {
                std::uint64_t end = std::min(s.total, start + kBlock);
                // Encodes (index, time) so that the minimum is the least witness.
                std::uint64_t best = kOverflow;
                if (opts.parallel) {
#pragma omp parallel
                    {
                        Decoded dec(im, s);
#pragma omp for schedule(static) reduction(min : best)
                        for (std::uint64_t idx = start; idx < end; ++idx) {
                            dec.decode(s, idx);
                            std::uint64_t mask = im.eval(im.root, dec.fr);
                            if (mask) best = std::min(best, idx * 64 + std::countr_zero(mask));
                        }
                    }
                } else {
                    Decoded dec(im, s);
                    for (std::uint64_t idx = start; idx < end; ++idx) {
                        dec.decode(s, idx);
                        std::uint64_t mask = im.eval(im.root, dec.fr);
                        if (mask) {
                            best = idx * 64 + std::countr_zero(mask);
                            break;
                        }
                    }
                }
                if (best != kOverflow) {
                    Decoded dec(im, s);
                    return dec.witness(im, s, best / 64, static_cast<int>(best % 64));
                }
                checked += end - start;
            }
        }
    return NoModelUpTo{maxT, maxD, checked};
}

}  // namespace fohl
