#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fohl/frontend.hpp"
#include "fohl/syntax.hpp"

namespace fohl {

struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    std::uint64_t required;
    std::uint64_t budget;
    BudgetError(std::uint64_t required, std::uint64_t budget);
};

// Finite tense first-order model with integer-coded times and objects.
struct Model {
    struct Extension {
        int arity = 0;
        std::vector<std::set<std::vector<int>>> at;  // indexed by time
    };
    std::vector<std::string> timeNames;
    std::vector<std::string> objectNames;
    std::vector<std::vector<bool>> prec;  // prec[t][s] iff t precedes s
    std::map<std::string, int> nominals;
    std::map<std::string, int> constants;
    std::map<std::string, Extension> predicates;

    int times() const { return static_cast<int>(timeNames.size()); }
    int objects() const { return static_cast<int>(objectNames.size()); }
};

struct Assignment {
    std::map<std::string, int> objects;  // free and bound variables
    std::map<std::string, int> times;    // tense variables
    std::optional<int> defaultObject;
    std::optional<int> defaultTime;
};

Model buildModel(const ModelFile& file);
Assignment buildAssignment(const ModelFile& file, const Model& model);
ModelFile toModelFile(const Model& model, const Assignment& v, std::optional<int> designated = std::nullopt);

// Pointwise reference implementation of the satisfaction clauses.
bool satisfies(const Model& m, int t, const Assignment& v, const Formula& phi);
std::set<int> truthSet(const Model& m, const Assignment& v, const Formula& phi);

// Bitmask evaluator over all times at once; requires at most 64 times.
class MaskEvaluator {
public:
    explicit MaskEvaluator(const Formula& phi);
    std::uint64_t evaluate(const Model& m, const Assignment& v) const;

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
    friend struct OracleAccess;
};

struct SatWitness {
    Model model;
    Assignment assignment;
    int time;
    std::uint64_t index;  // position in the enumeration order
};

struct NoModelUpTo {
    int maxT;
    int maxD;
    std::uint64_t modelsChecked;
};

using OracleResult = std::variant<SatWitness, NoModelUpTo>;

struct OracleOptions {
    std::uint64_t budget = 200'000'000;  // models across all sizes
    bool parallel = true;
};

// Searches models up to maxT times and maxD objects in the fixed order
// (T, D, precedence mask, nominal map, constant map, predicate extensions,
// free-variable map, time) and returns the least satisfying point.
OracleResult boundedOracle(const Formula& phi, int maxT, int maxD, const OracleOptions& opts = {});
std::uint64_t oracleSearchSpace(const Formula& phi, int maxT, int maxD);

}  // namespace fohl
