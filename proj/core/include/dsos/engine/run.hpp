#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsos/engine/language.hpp"

namespace dsos::engine {

struct Configuration {
    Term term;
    /// Data and upgrade components together.
    label::Snapshot snapshot;
    std::size_t step_count = 0;
    /// At least one step (not a jump) has been applied.
    bool stepped = false;
};

Configuration initial_configuration(const Language& lang, const Term& program);

struct ScheduledUpgrade {
    enum class Trigger { Immediate, AtStep, AtUpgradePoint };
    Trigger trigger = Trigger::Immediate;
    std::size_t at_step = 0;
    std::string index;
    label::Datum payload;
};

using UpgradeSchedule = std::vector<ScheduledUpgrade>;

/// Parses the schedule format and checks payloads against sig.
/// Throws Error.
UpgradeSchedule parse_schedule(const nlohmann::json& j, const label::LabelSignature& sig);
nlohmann::json schedule_to_json(const UpgradeSchedule& s, const label::LabelSignature& sig);

class Scheduler {
public:
    virtual ~Scheduler() = default;
    /// Index into a non-empty list of enabled transitions.
    virtual std::size_t choose(const std::vector<Transition>& enabled, const Configuration& c) = 0;
};

/// Uniform choice from a seeded Mersenne Twister.
class UniformScheduler final : public Scheduler {
public:
    explicit UniformScheduler(std::uint64_t seed) : rng_(seed) {}
    std::size_t choose(const std::vector<Transition>& enabled, const Configuration& c) override;

private:
    std::mt19937_64 rng_;
};

/// Cycles over actors in name order; falls back to the first transition.
class RoundRobinScheduler final : public Scheduler {
public:
    std::size_t choose(const std::vector<Transition>& enabled, const Configuration& c) override;

private:
    std::string last_;
};

/// Always the first enabled transition.
class FirstScheduler final : public Scheduler {
public:
    std::size_t choose(const std::vector<Transition>&, const Configuration&) override { return 0; }
};

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, std::uint64_t seed);

struct TraceEntry {
    enum class Kind { Step, Jump, Injection, Refresh };
    Kind kind = Kind::Step;
    std::size_t seq = 0;
    std::string rule;
    std::string actor;
    Term term_before;
    Term term_after;
    label::Morphism label;
    uts::Jump jump;
    std::string index;
    label::Datum payload;
    label::Snapshot before;
    label::Snapshot after;
};

using Trace = std::vector<TraceEntry>;

std::string_view to_string(TraceEntry::Kind k);

nlohmann::json entry_to_json(const TraceEntry& e, const label::LabelSignature& sig);

enum class RunStatus { Running, Terminated, Blocked, Stuck, FuelExhausted, JumpBeforeFirstStep };

std::string_view to_string(RunStatus s);
/// CLI exit code for a final status.
int exit_code(RunStatus s);

/// Stepwise driver shared by `run` and the interactive session.
class Session {
public:
    Session(std::shared_ptr<const Language> lang, const Term& program, UpgradeSchedule schedule = {},
            std::size_t fuel = 100000);

    /// Applies due injections, then returns the transitions the next
    /// `apply` may take (jumps removed before the first step).
    const std::vector<Transition>& enabled();

    /// Classification when nothing is enabled or fuel is out.
    RunStatus status();
    const std::string& message() const { return message_; }

    /// Applies enabled()[i], then any post-jump refresh.
    void apply(std::size_t i);

    /// Replaces an upgrade component between steps. Throws Error when the
    /// index is not an upgrade index.
    void inject(const std::string& index, label::Datum payload);

    /// One scheduler-chosen transition; false when the run has stopped.
    bool advance(Scheduler& sched);

    const Configuration& configuration() const { return config_; }
    const Trace& trace() const { return trace_; }
    const Language& language() const { return *lang_; }
    std::shared_ptr<const Language> language_ptr() const { return lang_; }

private:
    void refresh_enabled();
    void fire_due_injections(bool at_upgrade_point);

    std::shared_ptr<const Language> lang_;
    Configuration config_;
    UpgradeSchedule schedule_;
    std::vector<bool> fired_;
    std::size_t fuel_;
    Trace trace_;
    std::vector<Transition> enabled_;
    std::vector<std::string> stuck_;
    bool jumps_only_ = false;
    bool fresh_ = false;
    std::string message_;
};

struct RunResult {
    RunStatus status = RunStatus::Running;
    Configuration final;
    Trace trace;
    std::string message;
};

RunResult run(std::shared_ptr<const Language> lang, const Term& program, Scheduler& sched,
              const UpgradeSchedule& schedule = {}, std::size_t fuel = 100000);

/// JSON Lines: a start line, one line per entry, an end line.
std::string trace_to_jsonl(const RunResult& r, const Language& lang, const Term& program);

/// Re-executes recorded entries from the program's initial configuration,
/// matching each step by label and successor term. Throws Error when an
/// entry cannot be reproduced.
Configuration replay(const Language& lang, const Term& program, const Trace& trace);
Configuration replay_jsonl(const Language& lang, const std::string& jsonl);

}  // namespace dsos::engine
