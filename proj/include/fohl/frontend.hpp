#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fohl/syntax.hpp"

namespace fohl {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line, int column);
};

struct ModelError : std::runtime_error {
    std::vector<std::string> violations;
    explicit ModelError(std::vector<std::string> v);
};

struct SourceProblem {
    std::vector<Formula> premises;
    std::optional<Formula> goal;
    std::vector<std::string> premiseText;
    std::string goalText;
};

// Parses surface syntax, renames binders apart, expands abbreviations and checks well-formedness.
Formula parseFormula(const std::string& text);
// Same, for a formula that may contain free bound/tense variables (no sentence check).
Formula parseOpenFormula(const std::string& text);
// Parses without expanding abbreviations or renaming; for tests of the surface layer.
Formula parseSurface(const std::string& text);
std::string printFormula(const Formula& phi);

// A file with `|-` marks an entailment: premises one per line, goal after `|-`.
// Otherwise the whole file is one formula. `#` starts a comment.
SourceProblem parseProblem(const std::string& text);
// Renames binders apart across a set of formulas.
std::vector<Formula> renameApart(const std::vector<Formula>& formulas);

struct ModelFile {
    struct Extension {
        int arity = 0;
        std::map<std::string, std::set<std::vector<std::string>>> at;  // time -> tuples
        bool operator==(const Extension&) const = default;
    };
    std::vector<std::string> times;
    std::vector<std::pair<std::string, std::string>> prec;
    std::vector<std::string> domain;
    std::map<std::string, std::string> nominals;   // nominal -> time
    std::map<std::string, std::string> constants;  // constant -> object
    std::map<std::string, Extension> predicates;
    std::map<std::string, std::string> objectAssignment;  // free variable -> object
    std::map<std::string, std::string> timeAssignment;    // tense variable -> time
    std::optional<std::string> designated;
    bool operator==(const ModelFile&) const = default;
};

ModelFile parseModel(const std::string& jsonText);
std::string writeModel(const ModelFile& model);
std::vector<std::string> validateModelFile(const ModelFile& model);

std::string readFile(const std::string& path);

}  // namespace fohl
