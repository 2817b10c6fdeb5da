#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fohl/interpolation.hpp"
#include "fohl/tableau.hpp"

namespace fohl {

using Json = nlohmann::ordered_json;

// Exit codes.
namespace exitcode {
constexpr int Proved = 0;
constexpr int Refuted = 1;
constexpr int ResourceLimit = 2;
constexpr int InputError = 3;
constexpr int RuleGap = 4;
constexpr int Unverified = 5;
}  // namespace exitcode

struct CliOptions {
    Config config;
    std::optional<std::string> frameFile;
    bool json = false;
};

// Outcome of one command: exit code, JSON report, human-readable text and diagnostics.
struct CommandResult {
    int exitCode = exitcode::InputError;
    Json report;
    std::string text;
    std::string diagnostics;

    // What the command prints on stdout.
    std::string output(bool json) const;
};

Json formulaJson(const Formula& f);
Json statsJson(const Stats& s);
Json traceJson(const Trace& trace);
Json verdictJson(const Verdict& v);

// Reads the frame axiom file (one formula per line, `#` comments) into the config.
Config withFrameFile(Config cfg, const std::string& path);
// Formulas of a one-per-line file; blank lines and `#` comments are skipped.
std::vector<std::string> readFormulaLines(const std::string& text);

CommandResult cmdProve(const std::string& file, const CliOptions& opts);
CommandResult cmdEntail(const std::string& premisesFile, const std::optional<std::string>& goalFile,
                        const CliOptions& opts);
CommandResult cmdInterpolate(const std::string& file, const CliOptions& opts);
CommandResult cmdCheck(const std::string& modelFile, const std::string& atNominal, const std::string& formulaFile);
CommandResult cmdCountermodel(const std::string& file, const CliOptions& opts);

// Runs the command line; returns the exit code. Used by the `fohl` tool.
int runCli(int argc, char** argv);

}  // namespace fohl
