#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fohl/syntax.hpp"

namespace fohl {

enum class Ruleset { Standard, Primed };

struct FrameAxiomError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    int maxSteps = 10000;         // rule applications across the whole tableau
    int maxFreshNominals = 50;    // per branch
    int maxFreshVars = 50;        // per branch
    Ruleset ruleset = Ruleset::Standard;
    std::vector<Formula> frameAxioms;
};

// Validates pure, nominal-free sentences and adds them as zero-premise rules.
Config loadFrameAxioms(Config cfg, const std::vector<Formula>& axioms);
// Violations that make a formula unusable as a frame axiom; empty when pure.
std::vector<std::string> frameAxiomViolations(const Formula& axiom);

enum class Bias { None, L, R };
std::string biasName(Bias b);

// A branch formula: @j φ, ¬@j φ, or a bare (in)equality between object symbols.
struct Entry {
    Formula formula;
    Bias bias = Bias::None;
    bool active = true;  // false once rewritten by (RR)
    std::string origin;  // rule that produced it, or "root"
};

struct RuleInstance {
    std::string rule;
    std::vector<int> premises;  // entry indices, main premise first
    std::vector<std::vector<Formula>> conclusions;
    std::vector<std::string> fresh;
    std::string witness;  // distinguishes instances of universal-type rules
    std::string key() const;
};

enum class BranchStatus { Open, Closed, Saturated, Limit };

class Branch {
public:
    const std::vector<Entry>& entries() const { return entries_; }
    // Object symbols (free variables and constants) and nominals in order of first occurrence.
    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::string>& nominals() const { return nominals_; }
    const std::set<std::string>& ledger() const { return ledger_; }
    BranchStatus status() const { return status_; }
    bool hasConstant(const std::string& name) const { return constants_.count(name) > 0; }

    int find(const Formula& f) const;
    bool contains(const Formula& f) const { return find(f) >= 0; }
    // Union-find representative: the oldest symbol of the equality class.
    const std::string& rep(const std::string& object) const;
    int freshNominals() const { return freshNominals_; }
    int freshVars() const { return freshVars_; }

private:
    friend class Engine;
    std::vector<Entry> entries_;
    std::unordered_map<Formula, int, FormulaHash> index_;
    std::vector<std::vector<std::string>> entryObjects_;  // object symbols per entry
    std::vector<std::string> objects_;
    std::map<std::string, int> objectAge_;
    std::set<std::string> constants_;
    std::vector<std::string> nominals_;
    std::set<std::string> nominalSet_;
    std::map<std::string, std::string> parent_;
    // Nominal links by source nominal: @j m, @j F k, and @j F k keyed by k; pairs of (other nominal, entry).
    using Links = std::map<std::string, std::vector<std::pair<std::string, int>>>;
    Links sameAs_;
    Links futureOf_;
    Links pastOf_;
    int unions_ = 0;
    std::map<Op, int> positiveBodies_;  // positive sat entries by body operator
    // Per entry, the first live instance of each priority class as of a branch signature.
    struct Memo {
        bool classified = false;
        std::string nominal;
        int links = 0;  // 1 sameAs_, 2 futureOf_, 3 pastOf_
        std::string bridge;
        bool nominals = false;
        bool objects = false;
        std::optional<Op> sides;  // body operator of the side premises, if any
        std::array<int, 5> sig{};
        bool valid = false;
        std::array<std::optional<RuleInstance>, 5> first;
    };
    std::vector<Memo> memo_;
    std::set<std::string> ledger_;
    BranchStatus status_ = BranchStatus::Open;
    int freshNominals_ = 0;
    int freshVars_ = 0;
};

struct TraceStep {
    struct Premise {
        int entry;
        Formula formula;
    };
    struct Conclusion {
        Formula formula;
        Bias bias = Bias::None;
        bool added = false;  // false when already on the branch
        int entry = -1;
    };
    std::string rule;
    std::vector<Premise> premises;
    std::vector<std::vector<Conclusion>> conclusions;  // per conclusion set
    std::vector<std::string> fresh;
};

// One node per branch segment; a branching step ends the segment and opens one child per set.
struct TraceNode {
    std::vector<TraceStep> steps;
    std::vector<int> children;
    std::string end;  // "bot", "open", "limit", "split" or "unexplored"
    std::vector<int> closure;  // entry indices of the closing pair (one for @j⊥)
    std::vector<Formula> closureFormulas;
    int firstEntry = 0;  // entries before this index belong to ancestors
};

struct Trace {
    std::vector<Formula> roots;
    std::vector<Bias> rootBias;
    std::vector<TraceNode> nodes;  // nodes[0] is the root segment
};

enum class VerdictKind { Proved, Refuted, ResourceLimit };
std::string verdictName(VerdictKind k);

struct Stats {
    int steps = 0;
    int branches = 0;
    int closedBranches = 0;
    int maxFreshNominals = 0;
    int maxFreshVars = 0;
    std::string limit;  // which bound was hit, if any
};

struct Verdict {
    VerdictKind kind;
    Trace trace;
    std::optional<Branch> openBranch;  // the saturated branch when Refuted
    int openNode = -1;
    Stats stats;
    std::string rootNominal;
};

Verdict prove(const Formula& phi, const Config& cfg = {});
Verdict entails(const std::vector<Formula>& premises, const Formula& goal, const Config& cfg = {});
// Runs the engine from explicit root formulas; used by prove, entails and interpolation.
Verdict runTableau(const std::vector<Formula>& roots, const std::vector<Bias>& bias, const Config& cfg);

Branch makeBranch(const std::vector<Formula>& roots, const std::vector<Bias>& bias = {});
std::vector<RuleInstance> applicableInstances(const Branch& branch, const Config& cfg = {});
std::vector<Branch> applyInstance(const Branch& branch, const RuleInstance& inst, const Config& cfg = {});
// The closing pair if the branch contains one.
std::optional<std::vector<int>> closingPair(const Branch& branch);

// Step-by-step replay of a hand-written derivation tree.
struct ReplayStep {
    std::string rule;
    std::vector<Formula> premises;
    std::vector<std::vector<Formula>> conclusions;
};

struct ReplayNode {
    std::vector<ReplayStep> steps;
    std::vector<ReplayNode> children;  // one per conclusion set of the last step, if it branches
    bool closes = true;                // leaf must close by (⊥)
};

struct ReplayResult {
    bool ok = false;
    std::string error;
    std::vector<std::string> rulesApplied;
};

ReplayResult replay(const std::vector<Formula>& roots, const ReplayNode& script, const Config& cfg = {});

// The sat-formula shapes used on branches.
Formula satAt(const std::string& nominal, const Formula& body);
Formula negSat(const std::string& nominal, const Formula& body);
// Splits an entry into (positive, nominal, body); false for bare (in)equalities.
bool splitSat(const Formula& entry, bool& positive, std::string& nominal, Formula& body);

}  // namespace fohl
