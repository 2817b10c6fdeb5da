#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fohl/semantics.hpp"
#include "fohl/tableau.hpp"

namespace fohl {

struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Partitions of the branch's object symbols and nominals.
struct BranchQuotient {
    std::vector<std::vector<std::string>> objClasses;   // by age of representative
    std::vector<std::vector<std::string>> timeClasses;
    std::map<std::string, int> objClassOf;
    std::map<std::string, int> timeClassOf;
};

BranchQuotient quotient(const Branch& branch);

struct BranchModel {
    Model model;
    Assignment assignment;
    int designated = 0;
    std::vector<Entry> entries;  // the branch the model was read from
    std::map<std::string, int> objClassOf;
    std::map<std::string, int> timeClassOf;

    ModelFile file() const;
};

// Builds the branch structure; predicates of `vocabulary` are declared even when empty.
BranchModel extractModel(const Branch& branch, const std::string& rootNominal,
                         const std::vector<Formula>& vocabulary = {});

struct CheckReport {
    bool ok = true;
    std::vector<std::string> failures;
};

// Every branch formula holds (or fails, if negated) at its nominal's time, and ¬phi holds at the designated time.
CheckReport validateCountermodel(const BranchModel& bm, const Formula& rootFormula);
// Reflexivity, symmetry and transitivity of both branch relations, plus their consistency with the branch.
CheckReport checkEquivalences(const Branch& branch);

}  // namespace fohl
