#pragma once

#include <string>
#include <vector>

#include "fohl/frontend.hpp"
#include "fohl/tableau.hpp"

namespace fohl::testing {

// A hand-written derivation: root formulas, the step script and the rule set it uses.
struct Golden {
    std::string name;
    std::vector<Formula> roots;
    ReplayNode script;
    Ruleset ruleset = Ruleset::Standard;
};

inline Formula F(const std::string& text) { return parseOpenFormula(text); }

inline ReplayStep step(std::string rule, std::vector<std::string> premises,
                       std::vector<std::vector<std::string>> conclusions) {
    ReplayStep s;
    s.rule = std::move(rule);
    for (const auto& p : premises) s.premises.push_back(F(p));
    for (const auto& set : conclusions) {
        s.conclusions.emplace_back();
        for (const auto& c : set) s.conclusions.back().push_back(F(c));
    }
    return s;
}

inline ReplayNode leaf(std::vector<ReplayStep> steps = {}, bool closes = true) {
    ReplayNode n;
    n.steps = std::move(steps);
    n.closes = closes;
    return n;
}

// The wedding entailment: two (@ιt) steps, a (¬@ιt) split, then (ι1t), (ι2t), (nom) on the left.
inline Golden weddingGolden() {
    Golden g;
    g.name = "wedding";
    g.roots = {F("@'j1 @{Iota $x. W(t, j)} M(t, j, l)"), F("@'j1 @{Iota $x. W(t, j)} {Iota $y. B}"),
               F("~@'j1 @{Iota $y. B} M(t, j, l)")};
    ReplayNode& root = g.script;
    root.steps = {
        step("at-iota-tmp", {"@'j1 @{Iota $x. W(t, j)} {Iota $y. B}"},
             {{"@'j2 {Iota $x. W(t, j)}", "@'j2 {Iota $y. B}"}}),
        step("at-iota-tmp", {"@'j1 @{Iota $x. W(t, j)} M(t, j, l)"},
             {{"@'j3 {Iota $x. W(t, j)}", "@'j3 M(t, j, l)"}}),
        step("neg-at-iota-tmp", {"~@'j1 @{Iota $y. B} M(t, j, l)"},
             {{"~@'j3 {Iota $y. B}"}, {"~@'j3 M(t, j, l)"}}),
    };
    root.closes = false;
    root.children = {
        leaf({step("iota1-tmp", {"@'j3 {Iota $x. W(t, j)}"}, {{"@'j3 W(t, j)"}}),
              step("iota2-tmp", {"@'j2 {Iota $x. W(t, j)}", "@'j3 W(t, j)"}, {{"@'j2 'j3"}}),
              step("nom", {"@'j2 {Iota $y. B}", "@'j2 'j3"}, {{"@'j3 {Iota $y. B}"}})}),
        leaf(),
    };
    return g;
}

// The derived rule for temporal descriptions, with p, q, r for the description bodies and the claim.
inline Golden ddRuleGolden() {
    Golden g;
    g.name = "dd-rule";
    g.roots = {F("@'j1 @{Iota $x. p} {Iota $y. q}"), F("@'j1 @{Iota $x. p} r"), F("~@'j1 @{Iota $y. q} r")};
    ReplayNode& root = g.script;
    root.steps = {
        step("at-iota-tmp", {"@'j1 @{Iota $x. p} {Iota $y. q}"}, {{"@'j2 {Iota $x. p}", "@'j2 {Iota $y. q}"}}),
        step("at-iota-tmp", {"@'j1 @{Iota $x. p} r"}, {{"@'j3 {Iota $x. p}", "@'j3 r"}}),
        step("iota1-tmp", {"@'j2 {Iota $x. p}"}, {{"@'j2 p"}}),
        step("iota2-tmp", {"@'j3 {Iota $x. p}", "@'j2 p"}, {{"@'j3 'j2"}}),
        step("nom", {"@'j3 r", "@'j3 'j2"}, {{"@'j2 r"}}),
        step("neg-at-iota-tmp", {"~@'j1 @{Iota $y. q} r"}, {{"~@'j2 {Iota $y. q}"}, {"~@'j2 r"}}),
    };
    root.closes = false;
    root.children = {leaf(), leaf()};
    return g;
}

// Barcan: (F), (∃), (¬∃), (¬F), then closure.
inline Golden barcanGolden() {
    Golden g;
    g.name = "barcan";
    g.roots = {F("@'j1 F exists x. R(x)"), F("~@'j1 exists x. F R(x)")};
    g.script.steps = {
        step("F", {"@'j1 F exists x. R(x)"}, {{"@'j1 F 'j2", "@'j2 exists x. R(x)"}}),
        step("exists", {"@'j2 exists x. R(x)"}, {{"@'j2 R(a)"}}),
        step("neg-exists", {"~@'j1 exists x. F R(x)"}, {{"~@'j1 F R(a)"}}),
        step("neg-F", {"~@'j1 F R(a)", "@'j1 F 'j2"}, {{"~@'j2 R(a)"}}),
    };
    return g;
}

// The primed object-uniqueness rule closing two of its three branches.
inline Golden primedObjectGolden() {
    Golden g;
    g.name = "primed-object-uniqueness";
    g.ruleset = Ruleset::Primed;
    g.roots = {F("@'j K(b1)"), F("@'j K(b2)"), F("@'j (lam x. B(x))(iota y. K(y))")};
    g.script.steps = {step("iota2-obj'", {"@'j (lam x. B(x))(iota y. K(y))"},
                           {{"~@'j K(b1)"}, {"~@'j K(b2)"}, {"b1 = b2"}})};
    g.script.closes = false;
    g.script.children = {leaf(), leaf(), leaf({}, false)};
    return g;
}

inline std::vector<Golden> allGoldens() {
    return {weddingGolden(), ddRuleGolden(), barcanGolden(), primedObjectGolden()};
}

}  // namespace fohl::testing
