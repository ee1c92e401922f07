#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "helpers.hpp"

using namespace dsos;
using nlohmann::json;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / ("dsos_cli_test_" + name);
    std::ofstream(p) << text;
    return p;
}

std::vector<json> json_lines(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (!l.empty()) out.push_back(json::parse(l));
    }
    return out;
}

std::vector<json> repl(const cli::Invocation& inv, const std::string& script) {
    std::istringstream in(script);
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_repl(inv, in, out), 0);
    return json_lines(out.str());
}

const json* find_var(const json& store, const std::string& x) {
    return store.contains(x) ? &store.at(x) : nullptr;
}

}  // namespace

TEST(Repl, InjectThenStepPastUpdate) {
    cli::Invocation inv;
    inv.program = write_temp("inject.prot", "var x := 1; update{v: x}; var y := x").string();
    auto lines = repl(inv, "inject U_S {\"x\": 2}\nstep 20\nshow S\nquit\n");
    ASSERT_FALSE(lines.empty());
    EXPECT_EQ(lines.front()["kind"], "injection");
    const json& shown = lines.back();
    ASSERT_EQ(shown["index"], "S");
    const json* y = find_var(shown["value"], "y");
    ASSERT_NE(y, nullptr);
    EXPECT_EQ(*y, 2);
}

TEST(Repl, MalformedInjectLeavesStateAlone) {
    cli::Invocation inv;
    inv.program = write_temp("bad_inject.prot", "var x := 1").string();
    auto lines = repl(inv, "inject U_S [1,2]\ninject U_S {nope\ninject S {}\nshow U_S\njump-log\nstatus\n");
    ASSERT_EQ(lines.size(), 5u);
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(lines[i].contains("error")) << lines[i];
    EXPECT_EQ(lines[3]["value"], json::object());
    EXPECT_EQ(lines[4]["status"], "running");
    EXPECT_EQ(lines[4]["steps"], 0);
}

TEST(Repl, EnabledOnTwoObjects) {
    cli::Invocation inv;
    inv.program = write_temp("two.creol", "object a { var x := 1 } || object b { var y := 2 }").string();
    auto lines = repl(inv, "enabled\napply 1\nenabled\n");
    ASSERT_GE(lines.size(), 4u);
    EXPECT_EQ(lines[0]["actor"], "a");
    EXPECT_EQ(lines[1]["actor"], "b");
    EXPECT_EQ(lines[2]["kind"], "step");
    EXPECT_EQ(lines[2]["actor"], "b");
    EXPECT_EQ(lines[3]["actor"], "a");
}

TEST(Repl, UnknownCommandReportsError) {
    cli::Invocation inv;
    inv.program = write_temp("unknown.prot", "skip").string();
    auto lines = repl(inv, "frobnicate\nhelp\n");
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_TRUE(lines[0].contains("error"));
    EXPECT_TRUE(lines[1].contains("message"));
}

// Stepping through the session prints the same entries as the trace command.
TEST(Repl, SameEntriesAsTrace) {
    for (const char* name : {"call_protocol.creol", "classes.creol", "threads.creol"}) {
        cli::Invocation inv;
        inv.program = (testing_support::corpus() / "creol" / name).string();
        inv.seed = 5;
        std::ostringstream traced;
        cli::cmd_trace(inv, traced);
        auto expected = json_lines(traced.str());
        expected.erase(expected.begin());
        expected.pop_back();
        auto got = repl(inv, "step 100000\n");
        ASSERT_FALSE(got.empty());
        got.pop_back();  // status line
        EXPECT_EQ(got, expected) << name;
    }
}

TEST(Commands, RunOutputIsOneJsonLine) {
    cli::Invocation inv;
    inv.program = (testing_support::corpus() / "proteus" / "p23_update_v.prot").string();
    inv.schedule = (testing_support::corpus() / "schedules" / "p23_update_v.json").string();
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_run(inv, out), 0);
    auto lines = json_lines(out.str());
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0]["status"], "terminated");
    EXPECT_EQ(lines[0]["snapshot"]["S"]["seen"], 12);
}

TEST(Commands, TraceIsJsonLines) {
    cli::Invocation inv;
    inv.program = (testing_support::corpus() / "creol" / "temperature.creol").string();
    inv.schedule = (testing_support::corpus() / "schedules" / "temperature.json").string();
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_trace(inv, out), 0);
    auto lines = json_lines(out.str());
    ASSERT_GE(lines.size(), 3u);
    bool jump = false;
    for (const auto& l : lines) jump = jump || l["kind"] == "jump";
    EXPECT_TRUE(jump);
}

TEST(Commands, ExploreReportsGraph) {
    cli::Invocation inv;
    inv.program = (testing_support::corpus() / "creol" / "call_protocol.creol").string();
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_explore(inv, out), 0);
    auto j = json::parse(out.str());
    EXPECT_EQ(j["states"], 32);
    EXPECT_EQ(j["distinct_terminal"].size(), 1u);
}

TEST(Commands, CheckSuitesPass) {
    cli::Invocation inv;
    inv.corpus = testing_support::corpus().string();
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_check(inv, out), 0);
    auto lines = json_lines(out.str());
    ASSERT_EQ(lines.size(), 6u);
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) EXPECT_TRUE(lines[i]["pass"].get<bool>()) << lines[i];
}

TEST(Commands, MutantFailsWithWitness) {
    cli::Invocation inv;
    inv.corpus = testing_support::corpus().string();
    inv.only = "no-sudden-jumps";
    inv.mutant = true;
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_check(inv, out), 1);
    auto lines = json_lines(out.str());
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_FALSE(lines[0]["pass"].get<bool>());
    EXPECT_EQ(lines[0]["witness"]["endofunctor"], "E_mutant");
}

TEST(Commands, LoadErrors) {
    cli::Invocation inv;
    inv.program = "/nonexistent/file.prot";
    EXPECT_THROW(cli::load(inv), cli::InputError);
    inv.program = write_temp("syntax.prot", "var x := ;").string();
    EXPECT_THROW(cli::load(inv), cli::InputError);
    inv.program = write_temp("unknown.ext", "skip").string();
    EXPECT_THROW(cli::load(inv), cli::InputError);
    inv.lang = "proteus";
    EXPECT_NO_THROW(cli::load(inv));
}

TEST(Binary, ExitStatusOfBlockedRun) {
    const std::string cmd = std::string(DSOS_CLI_PATH) + " run " +
                            (testing_support::corpus() / "creol" / "blocked_reader.creol").string() +
                            " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(rc));
    EXPECT_EQ(WEXITSTATUS(rc), 2);
}
