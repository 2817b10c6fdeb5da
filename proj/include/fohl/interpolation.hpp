#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fohl/syntax.hpp"
#include "fohl/tableau.hpp"

namespace fohl {

// A trace step the interpolant table has no entry for.
struct RuleGap {
    std::string rule;
    Bias bias = Bias::None;
    std::string reason;
};

// One fold step: the rule application plus the symbols of the branch before it.
struct StepContext {
    std::string rule;
    Bias bias = Bias::None;         // side of the conclusions; defaults to the main premise's
    std::vector<Formula> premises;  // main premise first
    std::vector<Bias> premiseBias;
    std::vector<std::vector<Formula>> conclusions;
    std::vector<std::string> fresh;
    std::set<std::string> leftObjects;  // constants and free variables of the L formulas
    std::set<std::string> rightObjects;
    std::set<std::string> leftPredicates;
    std::set<std::string> rightPredicates;
};

using StepResult = std::variant<Formula, RuleGap>;

// Combines the interpolants of the conclusion sets into one for the premises.
StepResult interpolantStep(const StepContext& ctx, const std::vector<Formula>& children);
// Interpolant of a closed leaf from its closing entries.
Formula closureInterpolant(const std::vector<Formula>& closing, const std::vector<Bias>& bias);
// Folds a closed biased trace into an interpolant for its root sets.
StepResult foldTrace(const Trace& trace, std::vector<std::string>* rulesUsed = nullptr);

struct VocabularyCertificate {
    std::set<std::string> sharedPredicates;
    std::set<std::string> sharedConstants;
    std::vector<std::string> violations;  // symbols of chi outside the shared sets
};

VocabularyCertificate vocabularyCertificate(const Formula& phi, const Formula& chi, const Formula& psi);

struct VerifyReport {
    bool ok = false;
    bool inconclusive = false;  // a verification proof hit a resource bound
    std::string failure;        // which obligation broke
    VocabularyCertificate vocabulary;
    std::optional<Verdict> leftProof;   // phi -> chi
    std::optional<Verdict> rightProof;  // chi -> psi
};

VerifyReport verifyInterpolant(const Formula& phi, const Formula& chi, const Formula& psi, const Config& cfg = {});

enum class InterpolationStatus { Interpolant, NotValid, ResourceLimit, RuleGap, Unverified };
std::string interpolationStatusName(InterpolationStatus s);

struct InterpolationResult {
    InterpolationStatus status = InterpolationStatus::Unverified;
    std::optional<Formula> chi;
    VerifyReport verification;
    std::optional<RuleGap> gap;
    std::optional<Verdict> tableau;      // the biased tableau, absent for degenerate inputs
    std::vector<std::string> rulesUsed;  // "L rule" / "R rule" per folded step
};

// Interpolant for phi -> psi from a closed tableau in the primed rule set.
InterpolationResult interpolate(const Formula& phi, const Formula& psi, const Config& cfg = {});
// Same, for a formula whose main connective is an implication.
InterpolationResult interpolate(const Formula& implication, const Config& cfg = {});

struct EquivalenceCase {
    Formula formula;
    VerdictKind standard;
    VerdictKind primed;
};

struct EquivalenceReport {
    bool ok = true;
    std::vector<EquivalenceCase> cases;
    std::vector<std::string> mismatches;
};

// Proves each sentence under both rule sets and compares verdicts.
EquivalenceReport primedEquivalence(const std::vector<Formula>& sentences, const Config& cfg = {});

}  // namespace fohl
