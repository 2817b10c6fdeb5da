#include "fohl/cli.hpp"

#include <exception>
#include <sstream>

#include "CLI11.hpp"

#include "fohl/countermodel.hpp"
#include "fohl/frontend.hpp"
#include "fohl/semantics.hpp"

namespace fohl {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

int verdictExit(VerdictKind k) {
    switch (k) {
    case VerdictKind::Proved: return exitcode::Proved;
    case VerdictKind::Refuted: return exitcode::Refuted;
    case VerdictKind::ResourceLimit: return exitcode::ResourceLimit;
    }
    return exitcode::InputError;
}

CommandResult inputError(const std::string& command, const std::string& message) {
    CommandResult r;
    r.exitCode = exitcode::InputError;
    r.report = Json{{"command", command}, {"error", message}};
    r.diagnostics = "error: " + message + "\n";
    return r;
}

std::string describe(const std::exception& e) {
    if (const auto* p = dynamic_cast<const ParseError*>(&e))
        return "line " + std::to_string(p->line) + ", column " + std::to_string(p->column) + ": " + p->what();
    if (const auto* m = dynamic_cast<const ModelError*>(&e)) {
        std::string out = m->what();
        for (const auto& v : m->violations) out += "\n  " + v;
        return out;
    }
    return e.what();
}

template <class F>
CommandResult guarded(const std::string& command, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return inputError(command, describe(e));
    }
}

// The sentence an entailment problem stands for.
Formula problemFormula(const std::vector<Formula>& premises, const Formula& goal) {
    if (premises.empty()) return goal;
    Formula all = premises.front();
    for (std::size_t i = 1; i < premises.size(); ++i) all = mk::conj(all, premises[i]);
    return expandAbbrev(mk::imp(all, goal));
}

struct Countermodel {
    Json model;
    bool valid = false;
    std::vector<std::string> failures;
};

Countermodel countermodelFor(const Verdict& v, const Formula& root) {
    Countermodel cm;
    if (!v.openBranch) return cm;
    BranchModel bm = extractModel(*v.openBranch, v.rootNominal, {root});
    cm.model = Json::parse(writeModel(bm.file()));
    CheckReport check = validateCountermodel(bm, root);
    cm.valid = check.ok;
    cm.failures = check.failures;
    return cm;
}

std::string summary(const Verdict& v) {
    std::ostringstream s;
    s << verdictName(v.kind) << " (" << v.stats.steps << " steps, " << v.stats.branches << " branches";
    if (!v.stats.limit.empty()) s << ", limit: " << v.stats.limit;
    s << ")\n";
    return s.str();
}

CommandResult runProblem(const std::string& command, const std::vector<Formula>& premises, const Formula& goal,
                         const CliOptions& opts) {
    Verdict v = premises.empty() ? prove(goal, opts.config) : entails(premises, goal, opts.config);
    CommandResult r;
    r.exitCode = verdictExit(v.kind);
    r.report = Json{{"command", command}};
    Json input = Json::array();
    for (const auto& p : premises) input.push_back(formulaJson(p));
    r.report["premises"] = input;
    r.report["goal"] = formulaJson(goal);
    Json body = verdictJson(v);
    for (auto it = body.begin(); it != body.end(); ++it) r.report[it.key()] = it.value();
    r.text = summary(v);
    if (v.kind == VerdictKind::Refuted) {
        Countermodel cm = countermodelFor(v, problemFormula(premises, goal));
        r.report["countermodel"] = cm.model;
        r.report["countermodelValid"] = cm.valid;
        r.text += "countermodel:\n" + cm.model.dump(2) + "\n";
        for (const auto& f : cm.failures) r.diagnostics += "countermodel check: " + f + "\n";
    }
    return r;
}

}  // namespace

std::string CommandResult::output(bool json) const {
    if (json) return report.dump(2) + "\n";
    return text;
}

Json formulaJson(const Formula& f) { return printFormula(f); }

Json statsJson(const Stats& s) {
    Json j{{"steps", s.steps},
           {"branches", s.branches},
           {"closedBranches", s.closedBranches},
           {"maxFreshNominals", s.maxFreshNominals},
           {"maxFreshVars", s.maxFreshVars}};
    if (!s.limit.empty()) j["limit"] = s.limit;
    return j;
}

namespace {

Json nodeJson(const Trace& trace, int id) {
    const TraceNode& n = trace.nodes[id];
    Json steps = Json::array();
    for (const auto& st : n.steps) {
        Json premises = Json::array();
        for (const auto& p : st.premises) premises.push_back(formulaJson(p.formula));
        Json sets = Json::array();
        for (const auto& set : st.conclusions) {
            Json cs = Json::array();
            for (const auto& c : set) {
                Json cj{{"formula", formulaJson(c.formula)}, {"new", c.added}};
                if (c.bias != Bias::None) cj["bias"] = biasName(c.bias);
                cs.push_back(cj);
            }
            sets.push_back(cs);
        }
        Json sj{{"rule", st.rule}, {"premises", premises}, {"conclusions", sets}};
        if (!st.fresh.empty()) sj["fresh"] = st.fresh;
        steps.push_back(sj);
    }
    Json j{{"steps", steps}, {"end", n.end}};
    if (!n.closureFormulas.empty()) {
        Json closure = Json::array();
        for (const auto& f : n.closureFormulas) closure.push_back(formulaJson(f));
        j["closure"] = closure;
    }
    if (!n.children.empty()) {
        Json kids = Json::array();
        for (int c : n.children) kids.push_back(nodeJson(trace, c));
        j["children"] = kids;
    }
    return j;
}

}  // namespace

Json traceJson(const Trace& trace) {
    Json roots = Json::array();
    for (std::size_t i = 0; i < trace.roots.size(); ++i) {
        Json r{{"formula", formulaJson(trace.roots[i])}};
        if (i < trace.rootBias.size() && trace.rootBias[i] != Bias::None) r["bias"] = biasName(trace.rootBias[i]);
        roots.push_back(r);
    }
    Json j{{"roots", roots}};
    if (!trace.nodes.empty()) j["tree"] = nodeJson(trace, 0);
    return j;
}

Json verdictJson(const Verdict& v) {
    return Json{{"verdict", verdictName(v.kind)},
                {"rootNominal", v.rootNominal},
                {"stats", statsJson(v.stats)},
                {"trace", traceJson(v.trace)}};
}

std::vector<std::string> readFormulaLines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

Config withFrameFile(Config cfg, const std::string& path) {
    std::vector<Formula> axioms;
    for (const auto& line : readFormulaLines(readFile(path))) axioms.push_back(parseFormula(line));
    return loadFrameAxioms(std::move(cfg), axioms);
}

CommandResult cmdProve(const std::string& file, const CliOptions& opts) {
    return guarded("prove", [&] {
        SourceProblem p = parseProblem(readFile(file));
        return runProblem("prove", p.premises, *p.goal, opts);
    });
}

CommandResult cmdEntail(const std::string& premisesFile, const std::optional<std::string>& goalFile,
                        const CliOptions& opts) {
    return guarded("entail", [&] {
        if (!goalFile) {
            SourceProblem p = parseProblem(readFile(premisesFile));
            return runProblem("entail", p.premises, *p.goal, opts);
        }
        std::string text;
        for (const auto& line : readFormulaLines(readFile(premisesFile))) text += line + "\n";
        std::string goal = readFile(*goalFile);
        std::string goalLine;
        for (const auto& line : readFormulaLines(goal)) goalLine += line + " ";
        SourceProblem p = parseProblem(text + "|- " + goalLine + "\n");
        return runProblem("entail", p.premises, *p.goal, opts);
    });
}

CommandResult cmdInterpolate(const std::string& file, const CliOptions& opts) {
    return guarded("interpolate", [&] {
        SourceProblem p = parseProblem(readFile(file));
        if (!p.premises.empty()) throw std::runtime_error("interpolate expects a single implication");
        const Formula& f = *p.goal;
        bool implication = f.op() == Op::Not && f.kid(0).op() == Op::And && f.kid(0).kid(1).op() == Op::Not;
        if (!implication) throw std::runtime_error("interpolate expects an implication phi -> psi");
        InterpolationResult res = interpolate(f, opts.config);
        CommandResult r;
        r.report = Json{{"command", "interpolate"},
                        {"input", formulaJson(f)},
                        {"status", interpolationStatusName(res.status)}};
        switch (res.status) {
        case InterpolationStatus::Interpolant: r.exitCode = exitcode::Proved; break;
        case InterpolationStatus::NotValid: r.exitCode = exitcode::Refuted; break;
        case InterpolationStatus::ResourceLimit: r.exitCode = exitcode::ResourceLimit; break;
        case InterpolationStatus::RuleGap: r.exitCode = exitcode::RuleGap; break;
        case InterpolationStatus::Unverified:
            r.exitCode = res.verification.inconclusive ? exitcode::ResourceLimit : exitcode::Unverified;
            break;
        }
        if (res.tableau) r.report["stats"] = statsJson(res.tableau->stats);
        if (res.chi) {
            const VocabularyCertificate& voc = res.verification.vocabulary;
            r.report["interpolant"] = formulaJson(*res.chi);
            r.report["sharedPredicates"] = voc.sharedPredicates;
            r.report["sharedConstants"] = voc.sharedConstants;
            r.report["leftProofTrace"] =
                res.verification.leftProof ? verdictJson(*res.verification.leftProof) : Json(nullptr);
            r.report["rightProofTrace"] =
                res.verification.rightProof ? verdictJson(*res.verification.rightProof) : Json(nullptr);
            r.text = "interpolant: " + printFormula(*res.chi) + "\n";
        }
        r.report["rulesUsed"] = res.rulesUsed;
        if (res.gap) {
            r.report["ruleGap"] = Json{{"rule", res.gap->rule}, {"bias", biasName(res.gap->bias)}, {"reason", res.gap->reason}};
            r.diagnostics += "rule gap: " + res.gap->rule + ": " + res.gap->reason + "\n";
        }
        if (!res.verification.failure.empty()) {
            r.report["verificationFailure"] = res.verification.failure;
            r.diagnostics += "verification: " + res.verification.failure + "\n";
        }
        r.text = interpolationStatusName(res.status) + "\n" + r.text;
        return r;
    });
}

CommandResult cmdCheck(const std::string& modelFile, const std::string& atNominal, const std::string& formulaFile) {
    return guarded("check", [&] {
        ModelFile mf = parseModel(readFile(modelFile));
        Model m = buildModel(mf);
        Assignment v = buildAssignment(mf, m);
        std::string nominal = atNominal.rfind('\'', 0) == 0 ? atNominal.substr(1) : atNominal;
        auto it = m.nominals.find(nominal);
        if (it == m.nominals.end()) throw std::runtime_error("nominal '" + nominal + "' is not interpreted by the model");
        SourceProblem p = parseProblem(readFile(formulaFile));
        if (!p.premises.empty()) throw std::runtime_error("check expects a single formula");
        bool holds = satisfies(m, it->second, v, *p.goal);
        CommandResult r;
        r.exitCode = holds ? exitcode::Proved : exitcode::Refuted;
        r.report = Json{{"command", "check"},
                        {"at", "'" + nominal},
                        {"time", m.timeNames[it->second]},
                        {"formula", formulaJson(*p.goal)},
                        {"satisfied", holds}};
        r.text = holds ? "satisfied\n" : "not satisfied\n";
        return r;
    });
}

CommandResult cmdCountermodel(const std::string& file, const CliOptions& opts) {
    return guarded("countermodel", [&] {
        SourceProblem p = parseProblem(readFile(file));
        Verdict v = p.premises.empty() ? prove(*p.goal, opts.config) : entails(p.premises, *p.goal, opts.config);
        CommandResult r;
        r.exitCode = verdictExit(v.kind);
        r.report = Json{{"command", "countermodel"}, {"verdict", verdictName(v.kind)}, {"stats", statsJson(v.stats)}};
        r.text = summary(v);
        if (v.kind == VerdictKind::Refuted) {
            Countermodel cm = countermodelFor(v, problemFormula(p.premises, *p.goal));
            r.report["countermodel"] = cm.model;
            r.report["countermodelValid"] = cm.valid;
            r.text = cm.model.dump(2) + "\n";
            for (const auto& f : cm.failures) r.diagnostics += "countermodel check: " + f + "\n";
        }
        return r;
    });
}

int runCli(int argc, char** argv) {
    CLI::App app{"Tableau prover for first-order hybrid tense logic with definite descriptions"};
    app.require_subcommand(1);
    CliOptions opts;
    std::string ruleset = "standard";
    std::string frame;
    auto engineFlags = [&](CLI::App* sub) {
        sub->add_option("--max-steps", opts.config.maxSteps, "rule applications per proof")->check(CLI::PositiveNumber);
        sub->add_option("--max-fresh-nominals", opts.config.maxFreshNominals, "fresh nominals per branch")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-fresh-vars", opts.config.maxFreshVars, "fresh free variables per branch")
            ->check(CLI::PositiveNumber);
        sub->add_option("--frame", frame, "file of pure frame axioms, one per line");
        sub->add_option("--ruleset", ruleset, "rule set")->check(CLI::IsMember({"standard", "primed"}));
        sub->add_flag("--json", opts.json, "print the JSON report");
    };

    std::string file;
    std::string goalFile;
    std::string model;
    std::string at;

    auto* prove = app.add_subcommand("prove", "prove a formula, or an entailment written with |-");
    prove->add_option("file", file, "formula file")->required();
    engineFlags(prove);

    auto* entail = app.add_subcommand("entail", "prove premises |- goal");
    entail->add_option("premises", file, "premises one per line, or a file with a |- goal line")->required();
    entail->add_option("goal", goalFile, "goal file");
    engineFlags(entail);

    auto* interp = app.add_subcommand("interpolate", "Craig interpolant of a valid implication");
    interp->add_option("file", file, "implication file")->required();
    engineFlags(interp);

    auto* check = app.add_subcommand("check", "evaluate a formula in a model file");
    check->add_option("model", model, "model JSON")->required();
    check->add_option("nominal", at, "nominal naming the evaluation time")->required();
    check->add_option("file", file, "formula file")->required();
    check->add_flag("--json", opts.json, "print the JSON report");

    auto* counter = app.add_subcommand("countermodel", "countermodel for a non-valid formula");
    counter->add_option("file", file, "formula file")->required();
    engineFlags(counter);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exitcode::InputError;
    }

    CommandResult r;
    if (*check) {
        r = cmdCheck(model, at, file);
    } else {
        opts.config.ruleset = ruleset == "primed" ? Ruleset::Primed : Ruleset::Standard;
        if (!frame.empty()) {
            try {
                opts.config = withFrameFile(opts.config, frame);
            } catch (const std::exception& e) {
                r = inputError(app.get_subcommands().front()->get_name(), describe(e));
                std::cerr << r.diagnostics;
                if (opts.json) std::cout << r.report.dump(2) << "\n";
                return r.exitCode;
            }
        }
        if (*prove) r = cmdProve(file, opts);
        if (*entail) r = cmdEntail(file, goalFile.empty() ? std::nullopt : std::optional(goalFile), opts);
        if (*interp) r = cmdInterpolate(file, opts);
        if (*counter) r = cmdCountermodel(file, opts);
    }
    std::cerr << r.diagnostics;
    std::cout << (r.exitCode == exitcode::InputError && !opts.json ? "" : r.output(opts.json));
    return r.exitCode;
}

}  // namespace fohl
