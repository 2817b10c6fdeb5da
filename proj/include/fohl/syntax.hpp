#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fohl {

enum class SymbolKind { BoundVar, FreeVar, Constant, TenseVar, Nominal, Predicate };

struct Symbol {
    SymbolKind kind;
    std::string name;
    int arity = 0;
    auto operator<=>(const Symbol&) const = default;
};

struct SortError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Core operators plus the surface abbreviations removed by expandAbbrev.
enum class Op {
    Bot,
    Pred,
    Eq,
    Nominal,
    TenseVar,
    TIota,
    Not,
    And,
    Future,
    Past,
    Exists,
    Lambda,
    At,
    Down,
    // abbreviations
    Top,
    Neq,
    Or,
    Imp,
    Iff,
    Forall,
    G,
    H,
};

bool isCore(Op op);

struct Node;
struct Term;

// Immutable shared formula handle with structural equality.
class Formula {
public:
    Formula() = default;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    const Node& operator*() const { return *node_; }
    const Node* operator->() const { return node_.get(); }
    explicit operator bool() const { return static_cast<bool>(node_); }

    Op op() const;
    const std::string& name() const;
    const std::vector<Term>& args() const;
    const Formula& kid(std::size_t i) const;
    std::size_t hash() const;

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }
    // Total structural order, used for deterministic containers.
    bool operator<(const Formula& other) const;

private:
    std::shared_ptr<const Node> node_;
};

enum class TermKind { Bound, Free, Constant, Description };

struct Term {
    TermKind kind;
    std::string name;  // variable/constant name; bound variable of a description
    Formula body;      // description body only

    static Term bound(std::string n) { return {TermKind::Bound, std::move(n), {}}; }
    static Term free(std::string n) { return {TermKind::Free, std::move(n), {}}; }
    static Term constant(std::string n) { return {TermKind::Constant, std::move(n), {}}; }
    static Term description(std::string var, Formula body) {
        return {TermKind::Description, std::move(var), std::move(body)};
    }
    bool isObject() const { return kind == TermKind::Free || kind == TermKind::Constant; }
    bool operator==(const Term& other) const;
};

struct Node {
    Op op;
    std::string name;           // predicate, nominal, tense variable or binder variable
    std::vector<Term> args;     // Pred/Eq/Neq arguments; Lambda argument
    std::vector<Formula> kids;  // subformulas; At: designator then body
    std::size_t hash = 0;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Constructors.
namespace mk {
Formula bot();
Formula top();
Formula pred(std::string p, std::vector<Term> args = {});
Formula eq(Term a, Term b);
Formula neq(Term a, Term b);
Formula nom(std::string n);
Formula tvar(std::string x);
Formula tiota(std::string x, Formula body);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula imp(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula fut(Formula f);
Formula past(Formula f);
Formula always(Formula f);  // G
Formula hist(Formula f);    // H
Formula exists(std::string x, Formula f);
Formula forall(std::string x, Formula f);
Formula lambda(std::string x, Formula body, Term arg);
Formula at(Formula designator, Formula body);
Formula at(const std::string& nominal, Formula body);
Formula down(std::string x, Formula body);
Formula make(Op op, std::string name, std::vector<Term> args, std::vector<Formula> kids);
}  // namespace mk

struct SymbolInventory {
    std::set<std::string> freeVars;
    std::set<std::string> constants;
    std::set<std::string> nominals;
    std::set<std::string> freeTenseVars;
    std::map<std::string, int> predicates;
    auto operator<=>(const SymbolInventory&) const = default;
};

// phi[x/eta]: free occurrences of x replaced by eta.
Formula substitute(const Formula& phi, const Symbol& x, const Symbol& eta);
// Replaces the indexed pre-order occurrences of object symbol b1 by b2.
Formula replaceAt(const Formula& phi, const Symbol& b1, const Symbol& b2,
                  const std::set<std::size_t>& positions);
std::size_t countOccurrences(const Formula& phi, const Symbol& b);
Formula expandAbbrev(const Formula& phi);
std::vector<std::string> wellFormed(const Formula& phi, bool sentence = true);
SymbolInventory freeSymbols(const Formula& phi);
Symbol freshSymbol(SymbolKind kind, const std::set<std::string>& used);

// Object symbols (free variables and constants) and nominals in order of first occurrence.
std::vector<Term> objectsInOrder(const Formula& phi);
std::vector<std::string> nominalsInOrder(const Formula& phi);

// Replaces every object symbol named `from` by `to`; `to` must not be captured.
Formula replaceObject(const Formula& phi, const std::string& from, const Term& to);
// Replaces every nominal `from` by the tense variable `to`.
Formula abstractNominal(const Formula& phi, const std::string& from, const std::string& to);
Formula renameNominal(const Formula& phi, const std::string& from, const std::string& to);
// Free variable for names in the reserved `_a` namespace, constant otherwise.
Term objectTerm(const std::string& name);
// Binder names used anywhere in phi (object and tense).
std::set<std::string> binderNames(const Formula& phi);

bool alphaEqual(const Formula& a, const Formula& b);
// Alpha-variant that names each binder by its height, so alpha-equivalent subformulas coincide.
Formula canonicalBinders(const Formula& phi);
std::size_t formulaSize(const Formula& phi);

}  // namespace fohl
