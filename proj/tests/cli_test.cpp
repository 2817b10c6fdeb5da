#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "fohl/cli.hpp"

using namespace fohl;

namespace {

std::string fixture(const std::string& name) { return std::string(FOHL_FIXTURES) + "/" + name; }

// A scratch file removed at scope exit.
class TempFile {
public:
    explicit TempFile(const std::string& content) {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 ("fohl-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".txt"))
                    .string();
        std::ofstream(path_) << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

int runTool(const std::string& args) {
    std::string cmd = std::string(FOHL_BIN) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Prove, ExitCodes) {
    EXPECT_EQ(cmdProve(fixture("barcan.fohl"), {}).exitCode, exitcode::Proved);
    EXPECT_EQ(cmdProve(fixture("ffp.fohl"), {}).exitCode, exitcode::Refuted);
    TempFile bad("p &");
    EXPECT_EQ(cmdProve(bad.path(), {}).exitCode, exitcode::InputError);
    EXPECT_EQ(cmdProve("/nonexistent/file", {}).exitCode, exitcode::InputError);
    CliOptions tight;
    tight.config.maxSteps = 2;
    EXPECT_EQ(cmdProve(fixture("wedding.fohl"), tight).exitCode, exitcode::ResourceLimit);
}

TEST(Prove, ReportShape) {
    CommandResult r = cmdProve(fixture("ffp.fohl"), {});
    EXPECT_EQ(r.report["command"], "prove");
    EXPECT_EQ(r.report["verdict"], "Refuted");
    EXPECT_TRUE(r.report.contains("trace"));
    EXPECT_TRUE(r.report.contains("countermodel"));
    EXPECT_EQ(r.report["countermodelValid"], true);
}

TEST(Prove, FrameFile) {
    CliOptions opts;
    opts.frameFile = fixture("transitivity.axiom");
    opts.config = withFrameFile(opts.config, *opts.frameFile);
    EXPECT_EQ(cmdProve(fixture("ffp.fohl"), opts).exitCode, exitcode::Proved);
}

TEST(Entail, TwoFiles) {
    TempFile premises("F F p\n");
    TempFile goal("F p\n");
    EXPECT_EQ(cmdEntail(premises.path(), goal.path(), {}).exitCode, exitcode::Refuted);
    TempFile goal2("F F p | q\n");
    EXPECT_EQ(cmdEntail(premises.path(), goal2.path(), {}).exitCode, exitcode::Proved);
    EXPECT_EQ(cmdEntail(fixture("wedding.fohl"), std::nullopt, {}).exitCode, exitcode::Proved);
}

TEST(Interpolate, ExitCodes) {
    TempFile ok("p & q -> p | r\n");
    CommandResult r = cmdInterpolate(ok.path(), {});
    EXPECT_EQ(r.exitCode, exitcode::Proved);
    EXPECT_EQ(r.report["status"], "Interpolant");
    EXPECT_TRUE(r.report.contains("interpolant"));
    TempFile invalid("p -> q\n");
    EXPECT_EQ(cmdInterpolate(invalid.path(), {}).exitCode, exitcode::Refuted);
    TempFile notImp("p & q\n");
    EXPECT_EQ(cmdInterpolate(notImp.path(), {}).exitCode, exitcode::InputError);
}

TEST(Check, FiveTimeModel) {
    TempFile f("(lam x. B(x))(iota y. K(y))\n");
    EXPECT_EQ(cmdCheck(fixture("five-times-model.json"), "t1", f.path()).exitCode, 0);
    EXPECT_EQ(cmdCheck(fixture("five-times-model.json"), "'t4", f.path()).exitCode, 0);
    EXPECT_EQ(cmdCheck(fixture("five-times-model.json"), "t0", f.path()).exitCode, 1);
    EXPECT_EQ(cmdCheck(fixture("five-times-model.json"), "t9", f.path()).exitCode, exitcode::InputError);
}

TEST(Countermodel, ExitCodes) {
    EXPECT_EQ(cmdCountermodel(fixture("ffp.fohl"), {}).exitCode, 1);
    EXPECT_EQ(cmdCountermodel(fixture("barcan.fohl"), {}).exitCode, 0);
}

TEST(Report, ByteIdentical) {
    for (const char* file : {"wedding.fohl", "ffp.fohl", "dd-rule.fohl"}) {
        std::string a = cmdProve(fixture(file), {}).output(true);
        std::string b = cmdProve(fixture(file), {}).output(true);
        EXPECT_EQ(a, b) << file;
    }
}

TEST(Binary, ExitCodes) {
    EXPECT_EQ(runTool("prove " + fixture("barcan.fohl")), 0);
    EXPECT_EQ(runTool("prove --json " + fixture("ffp.fohl")), 1);
    EXPECT_EQ(runTool("prove --frame " + fixture("transitivity.axiom") + " " + fixture("ffp.fohl")), 0);
    EXPECT_EQ(runTool("prove --max-steps 2 " + fixture("wedding.fohl")), 2);
    EXPECT_EQ(runTool("prove /nonexistent/file"), 3);
    TempFile f("(lam x. B(x))(iota y. K(y))\n");
    EXPECT_EQ(runTool("check " + fixture("five-times-model.json") + " t1 " + f.path()), 0);
    EXPECT_EQ(runTool("check " + fixture("five-times-model.json") + " t2 " + f.path()), 1);
    EXPECT_EQ(runTool("frobnicate"), 3);
}
