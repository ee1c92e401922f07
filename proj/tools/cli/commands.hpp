#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>

#include "dsos/engine/run.hpp"

namespace dsos::cli {

/// Bad paths, unparsable programs or schedules. Exit status 5.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kInputErrorExit = 5;

struct Invocation {
    std::string program;
    std::string schedule;
    std::string lang;
    std::string format = "json";
    std::string scheduler = "uniform";
    std::uint64_t seed = 0;
    std::size_t fuel = 100000;
    bool non_int = false;
    bool consume_all = false;

    // explore
    std::size_t depth = 500;
    std::size_t max_states = 100000;

    // check
    std::string corpus;
    std::string only;
    bool mutant = false;
};

struct Loaded {
    std::shared_ptr<const engine::Language> lang;
    syntax::Term program;
    engine::UpgradeSchedule schedule;
};

/// Reads the program and schedule named by inv. Throws InputError.
Loaded load(const Invocation& inv);

std::string read_file(const std::string& path);

int cmd_run(const Invocation& inv, std::ostream& out);
int cmd_trace(const Invocation& inv, std::ostream& out);
int cmd_explore(const Invocation& inv, std::ostream& out);
int cmd_check(const Invocation& inv, std::ostream& out);
int cmd_repl(const Invocation& inv, std::istream& in, std::ostream& out);

}  // namespace dsos::cli
