// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fohl/cli.hpp"
#include "fohl/countermodel.hpp"
#include "fohl/frontend.hpp"
#include "fohl/interpolation.hpp"
#include "support/golden.hpp"
#include "support/random_sentences.hpp"

using namespace fohl;

namespace {

using Clock = std::chrono::steady_clock;

std::string fixture(const std::string& name) { return std::string(FOHL_FIXTURES) + "/" + name; }

double secondsSince(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::vector<Formula> fixtureFormulas(const std::string& name) {
    std::vector<Formula> out;
    for (const auto& line : readFormulaLines(readFile(fixture(name)))) out.push_back(parseFormula(line));
    return out;
}

std::string scratchFile(const std::string& stem, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / ("fohl-acceptance-" + stem + ".txt");
    std::ofstream(path) << content;
    return path.string();
}

bool replayGolden(const fohl::testing::Golden& g, std::ostringstream& detail) {
    Config cfg;
    cfg.ruleset = g.ruleset;
    ReplayResult r = replay(g.roots, g.script, cfg);
    if (!r.ok) detail << g.name << " replay failed: " << r.error << "; ";
    return r.ok;
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

void report(int id, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << std::endl;
}

Outcome examplesProve() {
    Outcome o;
    std::ostringstream d;
    for (const char* file : {"wedding.fohl", "dd-rule.fohl", "barcan.fohl"}) {
        SourceProblem p = parseProblem(readFile(fixture(file)));
        auto start = Clock::now();
        Verdict v = p.premises.empty() ? prove(*p.goal) : entails(p.premises, *p.goal);
        double secs = secondsSince(start);
        bool ok = v.kind == VerdictKind::Proved && secs < 1.0;
        o.pass = o.pass && ok;
        d << file << " " << verdictName(v.kind) << " in " << secs << "s; ";
    }
    for (const auto& g : {fohl::testing::weddingGolden(), fohl::testing::ddRuleGolden(),
                          fohl::testing::barcanGolden()})
        o.pass = replayGolden(g, d) && o.pass;
    d << "goldens replayed";
    o.detail = d.str();
    return o;
}

Outcome modelJudgments() {
    struct Judgment {
        std::string formula;
        std::string time;
        bool expected;
    };
    const std::string lb = "(lam x. B(x))(iota y. K(y))";
    const std::string lnb = "(lam x. ~B(x))(iota y. K(y))";
    std::vector<Judgment> judgments;
    for (int t = 0; t < 5; ++t) judgments.push_back({lb, "t" + std::to_string(t), t == 1 || t == 4});
    judgments.push_back({lnb, "t0", true});
    judgments.push_back({lnb, "t2", false});
    judgments.push_back({lnb, "t3", false});
    judgments.push_back({"F " + lb, "t0", true});
    judgments.push_back({"F " + lb, "t2", false});
    judgments.push_back({"G " + lb, "t3", true});

    Outcome o;
    int right = 0;
    std::ostringstream d;
    for (std::size_t i = 0; i < judgments.size(); ++i) {
        const auto& j = judgments[i];
        std::string file = scratchFile("judgment" + std::to_string(i), j.formula + "\n");
        CommandResult r = cmdCheck(fixture("five-times-model.json"), j.time, file);
        std::filesystem::remove(file);
        bool ok = r.exitCode == (j.expected ? 0 : 1);
        if (ok) ++right;
        else d << "wrong at " << j.time << ": " << j.formula << "; ";
    }
    o.pass = right == static_cast<int>(judgments.size());
    d << right << "/" << judgments.size() << " judgments match (the first five fix the truth set of "
      << lb << " to {t1,t4})";
    o.detail = d.str();
    return o;
}

struct SweepStats {
    int sentences = 0;
    int proved = 0;
    int refuted = 0;
    int limit = 0;
    int oracleSkipped = 0;  // search space above the oracle budget
    int compared = 0;
    int beyondBounds = 0;  // refuted, no oracle model, countermodel larger than 3 times or 2 objects
    int disagreements = 0;
    int invalidCountermodels = 0;
    int partitionChecks = 0;
    int partitionFailures = 0;
    double seconds = 0;
    std::vector<std::string> examples;
};

SweepStats randomSweep() {
    SweepStats s;
    fohl::testing::SentenceGenerator gen(20261015);
    auto start = Clock::now();
    while (s.compared < 500 && s.sentences < 2000) {
        Formula phi = gen.next();
        ++s.sentences;
        Verdict v = prove(phi);
        std::optional<BranchModel> bm;
        if (v.kind == VerdictKind::Proved) ++s.proved;
        if (v.kind == VerdictKind::ResourceLimit) ++s.limit;
        if (v.kind == VerdictKind::Refuted) {
            ++s.refuted;
            bm = extractModel(*v.openBranch, v.rootNominal, {phi});
            if (!validateCountermodel(*bm, phi).ok) {
                ++s.invalidCountermodels;
                s.examples.push_back("invalid countermodel: " + printFormula(phi));
            }
            ++s.partitionChecks;
            if (!checkEquivalences(*v.openBranch).ok) {
                ++s.partitionFailures;
                s.examples.push_back("partition check failed: " + printFormula(phi));
            }
        }
        OracleResult oracle;
        try {
            oracle = boundedOracle(mk::neg(phi), 3, 2);
        } catch (const BudgetError&) {
            ++s.oracleSkipped;
            continue;
        }
        ++s.compared;
        bool oracleSat = std::holds_alternative<SatWitness>(oracle);
        bool agree = false;
        if (v.kind == VerdictKind::Proved) agree = !oracleSat;
        if (v.kind == VerdictKind::Refuted) {
            bool small = bm->model.times() <= 3 && bm->model.objects() <= 2;
            agree = oracleSat || !small;
            if (!oracleSat && !small) ++s.beyondBounds;
        }
        if (!agree) {
            ++s.disagreements;
            s.examples.push_back(verdictName(v.kind) + " but oracle " + (oracleSat ? "found" : "found no") +
                                 " model: " + printFormula(phi));
        }
    }
    s.seconds = secondsSince(start);
    return s;
}

Outcome sweepOutcome(const SweepStats& s) {
    Outcome o;
    o.pass = s.compared >= 500 && s.disagreements == 0 && s.invalidCountermodels == 0 && s.limit == 0 &&
             s.seconds < 300;
    std::ostringstream d;
    d << s.sentences << " sentences (" << s.proved << " proved, " << s.refuted << " refuted, " << s.limit
      << " limit), " << s.compared << " compared with the bounded oracle at 3 times/2 objects, "
      << s.oracleSkipped << " over the oracle budget, " << s.disagreements << " disagreements, "
      << s.invalidCountermodels << " invalid countermodels, " << s.beyondBounds
      << " countermodels beyond the oracle bounds, " << s.seconds << "s";
    if (!s.examples.empty()) d << "; first: " << s.examples.front();
    o.detail = d.str();
    return o;
}

Outcome partitions(const SweepStats& s) {
    Outcome o;
    int checks = s.partitionChecks;
    int failures = s.partitionFailures;
    for (const auto& f : fixtureFormulas("invalid.txt")) {
        Verdict v = prove(f);
        if (v.kind != VerdictKind::Refuted) continue;
        ++checks;
        if (!checkEquivalences(*v.openBranch).ok) ++failures;
    }
    Formula eqs = parseFormula("c = d & d = e & @'i 'k & @'k 'm -> B(c) & F q");
    Verdict v = prove(eqs);
    if (v.kind == VerdictKind::Refuted) {
        ++checks;
        if (!checkEquivalences(*v.openBranch).ok) ++failures;
    } else {
        ++failures;
    }
    o.pass = failures == 0 && checks > 0;
    o.detail = std::to_string(checks) + " saturated branches checked, " + std::to_string(failures) +
               " with a non-equivalence partition";
    return o;
}

Outcome primedAgreement() {
    Outcome o;
    auto valid = fixtureFormulas("valid.txt");
    auto invalid = fixtureFormulas("invalid.txt");
    std::vector<Formula> all = valid;
    all.insert(all.end(), invalid.begin(), invalid.end());
    EquivalenceReport r = primedEquivalence(all);
    int validProved = 0;
    int invalidRefuted = 0;
    for (std::size_t i = 0; i < r.cases.size(); ++i) {
        const auto& c = r.cases[i];
        bool both = c.standard == c.primed;
        if (i < valid.size() && both && c.standard == VerdictKind::Proved) ++validProved;
        if (i >= valid.size() && both && c.standard == VerdictKind::Refuted) ++invalidRefuted;
    }
    std::ostringstream d;
    bool golden = replayGolden(fohl::testing::primedObjectGolden(), d);
    o.pass = r.ok && validProved >= 30 && invalidRefuted >= 10 && golden &&
             validProved == static_cast<int>(valid.size()) && invalidRefuted == static_cast<int>(invalid.size());
    d << validProved << "/" << valid.size() << " valid proved and " << invalidRefuted << "/" << invalid.size()
      << " invalid refuted under both rule sets, " << r.mismatches.size() << " mismatches, primed golden "
      << (golden ? "replayed" : "failed");
    o.detail = d.str();
    return o;
}

Outcome interpolation() {
    Outcome o;
    const std::vector<std::string> required = {"iota2-obj'", "neg-iota-obj", "iota2-tmp'", "neg-iota-tmp",
                                               "neg-at-iota-tmp"};
    std::map<std::string, int> coverage;
    int cases = 0;
    int verified = 0;
    int gaps = 0;
    std::ostringstream d;
    for (const auto& line : readFormulaLines(readFile(fixture("interpolation-cases.txt")))) {
        ++cases;
        InterpolationResult r = interpolate(parseFormula(line));
        if (r.status == InterpolationStatus::RuleGap) ++gaps;
        if (r.status == InterpolationStatus::Interpolant && r.verification.ok) ++verified;
        else d << "not verified: " << line << " (" << interpolationStatusName(r.status) << "); ";
        for (const auto& label : r.rulesUsed) ++coverage[label.substr(label.find(' ') + 1)];
    }
    bool covered = true;
    for (const auto& rule : required) {
        d << rule << " x" << coverage[rule] << ", ";
        covered = covered && coverage[rule] > 0;
    }
    double gapRate = cases ? static_cast<double>(gaps) / cases : 0.0;
    o.pass = verified >= 30 && verified == cases && covered && gaps == 0;
    d << verified << "/" << cases << " verified interpolants, RuleGap rate " << gapRate;
    o.detail = d.str();
    return o;
}

Outcome frameAxiom() {
    Outcome o;
    Formula ffp = parseFormula(readFile(fixture("ffp.fohl")));
    Verdict without = prove(ffp);
    Config cfg = withFrameFile({}, fixture("transitivity.axiom"));
    Verdict with = prove(ffp, cfg);
    bool validModel = false;
    int times = -1;
    if (without.kind == VerdictKind::Refuted) {
        BranchModel bm = extractModel(*without.openBranch, without.rootNominal, {ffp});
        validModel = validateCountermodel(bm, ffp).ok;
        times = bm.model.times();
    }
    o.pass = with.kind == VerdictKind::Proved && without.kind == VerdictKind::Refuted && validModel && times == 3;
    o.detail = "with the transitivity axiom " + verdictName(with.kind) + "; without it " +
               verdictName(without.kind) + " with a " + std::to_string(times) + "-time countermodel, " +
               (validModel ? "validated" : "not validated");
    return o;
}

std::string captureTool(const std::string& args) {
    std::string cmd = std::string(FOHL_BIN) + " " + args + " 2>/dev/null";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    std::string out;
    if (!pipe) return out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe.get())) > 0) out.append(buf, n);
    return out;
}

Outcome byteIdentical() {
    Outcome o;
    std::string interp = scratchFile("interp", "@{Iota $x. p} q & @'j p -> @'j q\n");
    const std::vector<std::string> runs = {
        "prove --json " + fixture("wedding.fohl"),
        "prove --json " + fixture("dd-rule.fohl"),
        "prove --json " + fixture("barcan.fohl"),
        "prove --json " + fixture("ffp.fohl"),
        "prove --json --ruleset primed " + fixture("wedding.fohl"),
        "countermodel --json " + fixture("ffp.fohl"),
        "interpolate --json " + interp,
    };
    int same = 0;
    std::ostringstream d;
    for (const auto& args : runs) {
        std::string a = captureTool(args);
        std::string b = captureTool(args);
        if (!a.empty() && a == b) ++same;
        else d << "differs: " << args << "; ";
    }
    std::filesystem::remove(interp);
    o.pass = same == static_cast<int>(runs.size());
    d << same << "/" << runs.size() << " reports byte-identical across two process runs";
    o.detail = d.str();
    return o;
}

}  // namespace

int main() {
    std::vector<Outcome> outcomes;
    auto run = [&](int id, auto&& fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        report(id, o);
        outcomes.push_back(o);
    };
    SweepStats sweep;
    run(1, examplesProve);
    run(2, modelJudgments);
    run(3, [&] {
        sweep = randomSweep();
        return sweepOutcome(sweep);
    });
    run(4, [&] { return partitions(sweep); });
    run(5, primedAgreement);
    run(6, interpolation);
    run(7, frameAxiom);
    run(8, byteIdentical);
    for (const auto& o : outcomes)
        if (!o.pass) return 1;
    return 0;
}
