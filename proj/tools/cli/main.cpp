#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "dsos/error.hpp"

namespace {

void common_options(CLI::App* sub, dsos::cli::Invocation& inv, bool needs_program) {
    if (needs_program) sub->add_option("program", inv.program, "Program file (.prot or .creol)")->required();
    sub->add_option("--lang", inv.lang, "Language override")->check(CLI::IsMember({"proteus", "creol"}));
    sub->add_option("--schedule", inv.schedule, "Upgrade schedule (JSON)");
    sub->add_option("--seed", inv.seed, "Scheduler seed; DSOS_SEED overrides");
    sub->add_option("--fuel", inv.fuel, "Maximum number of transitions");
    sub->add_flag("--non-int", inv.non_int, "Enable the combined multi-object step");
    sub->add_flag("--consume-all", inv.consume_all, "Jumps empty the whole upgrade component");
    sub->add_option("--format", inv.format, "Output format")->check(CLI::IsMember({"json", "pretty"}));
    sub->add_option("--scheduler", inv.scheduler, "Scheduler")
        ->check(CLI::IsMember({"uniform", "round-robin", "first"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modular and dynamic small-step interpreter"};
    app.require_subcommand(1);
    dsos::cli::Invocation inv;

    auto* run = app.add_subcommand("run", "Run a program and print the final configuration");
    common_options(run, inv, true);
    auto* trace = app.add_subcommand("trace", "Run a program and print its trace");
    common_options(trace, inv, true);
    auto* explore = app.add_subcommand("explore", "Enumerate every interleaving");
    common_options(explore, inv, true);
    explore->add_option("--depth", inv.depth, "Depth bound");
    explore->add_option("--max-states", inv.max_states, "State bound");
    auto* check = app.add_subcommand("check", "Run the built-in property suites");
    common_options(check, inv, false);
    check->add_option("--corpus", inv.corpus, "Corpus directory");
    check->add_option("--only", inv.only, "Run a single suite")
        ->check(CLI::IsMember({"modularity", "no-sudden-jumps", "commutativity", "oracle", "audits"}));
    check->add_flag("--mutant", inv.mutant, "Register a broken endofunctor (negative control)");
    auto* repl = app.add_subcommand("repl", "Step a program interactively");
    common_options(repl, inv, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return dsos::cli::kInputErrorExit;
    }

    if (const char* env = std::getenv("DSOS_SEED")) {
        try {
            inv.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: DSOS_SEED is not a number: " << env << '\n';
            return dsos::cli::kInputErrorExit;
        }
    }

    try {
        if (*run) return dsos::cli::cmd_run(inv, std::cout);
        if (*trace) return dsos::cli::cmd_trace(inv, std::cout);
        if (*explore) return dsos::cli::cmd_explore(inv, std::cout);
        if (*check) return dsos::cli::cmd_check(inv, std::cout);
        if (*repl) return dsos::cli::cmd_repl(inv, std::cin, std::cout);
    } catch (const dsos::cli::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return dsos::cli::kInputErrorExit;
    } catch (const dsos::DepthExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
