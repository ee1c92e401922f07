#include "dsos/engine/run.hpp"

#include <sstream>

#include "dsos/error.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::engine {

using nlohmann::json;

Configuration initial_configuration(const Language& lang, const Term& program) {
    Configuration c;
    c.term = program;
    c.snapshot = lang.initial_snapshot(program);
    return c;
}

UpgradeSchedule parse_schedule(const json& j, const label::LabelSignature& sig) {
    if (!j.is_array()) throw Error("schedule must be a JSON array");
    UpgradeSchedule out;
    for (const auto& item : j) {
        if (!item.is_object()) throw Error("schedule entries must be objects");
        ScheduledUpgrade u;
        const json& trig = item.at("trigger");
        if (trig.is_string() && trig.get<std::string>() == "immediate") {
            u.trigger = ScheduledUpgrade::Trigger::Immediate;
        } else if (trig.is_string() && trig.get<std::string>() == "at_upgrade_point") {
            u.trigger = ScheduledUpgrade::Trigger::AtUpgradePoint;
        } else if (trig.is_object() && trig.contains("at_step") && trig.at("at_step").is_number_unsigned()) {
            u.trigger = ScheduledUpgrade::Trigger::AtStep;
            u.at_step = trig.at("at_step").get<std::size_t>();
        } else {
            throw Error("unknown trigger: " + trig.dump());
        }
        u.index = item.at("index").get<std::string>();
        const auto* c = sig.find(u.index);
        if (!c) throw UnknownIndex(u.index);
        if (c->index.ns != label::Namespace::Upgrade) {
            throw Error("schedule index is not an upgrade component: " + u.index);
        }
        u.payload = label::datum_from_json(item.at("payload"), c->domain);
        out.push_back(std::move(u));
    }
    return out;
}

json schedule_to_json(const UpgradeSchedule& s, const label::LabelSignature& sig) {
    json out = json::array();
    for (const auto& u : s) {
        json trig;
        switch (u.trigger) {
            case ScheduledUpgrade::Trigger::Immediate: trig = "immediate"; break;
            case ScheduledUpgrade::Trigger::AtUpgradePoint: trig = "at_upgrade_point"; break;
            case ScheduledUpgrade::Trigger::AtStep: trig = {{"at_step", u.at_step}}; break;
        }
        out.push_back({{"trigger", trig},
                       {"index", u.index},
                       {"payload", label::datum_to_json(u.payload, sig.at(u.index).domain)}});
    }
    return out;
}

std::size_t UniformScheduler::choose(const std::vector<Transition>& enabled, const Configuration&) {
    std::uniform_int_distribution<std::size_t> dist(0, enabled.size() - 1);
    return dist(rng_);
}

std::size_t RoundRobinScheduler::choose(const std::vector<Transition>& enabled, const Configuration&) {
    std::size_t best = enabled.size();
    std::size_t lowest = 0;
    for (std::size_t i = 0; i < enabled.size(); ++i) {
        const auto& a = enabled[i].actor;
        if (a < enabled[lowest].actor) lowest = i;
        if (a > last_ && (best == enabled.size() || a < enabled[best].actor)) best = i;
    }
    const std::size_t pick = best == enabled.size() ? lowest : best;
    last_ = enabled[pick].actor;
    return pick;
}

std::unique_ptr<Scheduler> make_scheduler(const std::string& name, std::uint64_t seed) {
    if (name == "uniform") return std::make_unique<UniformScheduler>(seed);
    if (name == "round-robin") return std::make_unique<RoundRobinScheduler>();
    if (name == "first") return std::make_unique<FirstScheduler>();
    throw Error("unknown scheduler: " + name);
}

std::string_view to_string(TraceEntry::Kind k) {
    switch (k) {
        case TraceEntry::Kind::Step: return "step";
        case TraceEntry::Kind::Jump: return "jump";
        case TraceEntry::Kind::Injection: return "injection";
        case TraceEntry::Kind::Refresh: return "refresh";
    }
    return "?";
}

namespace {

json changes(const label::Snapshot& before, const label::Snapshot& after,
             const label::LabelSignature& sig) {
    json out = json::object();
    for (const auto& c : sig.components()) {
        auto a = before.find(c.index.name);
        auto b = after.find(c.index.name);
        if (b == after.end()) continue;
        if (a == before.end() || !(a->second == b->second)) {
            out[c.index.name] = label::datum_to_json(b->second, c.domain);
        }
    }
    return out;
}

}  // namespace

json entry_to_json(const TraceEntry& e, const label::LabelSignature& sig) {
    json j = {{"kind", to_string(e.kind)}, {"seq", e.seq}};
    switch (e.kind) {
        case TraceEntry::Kind::Step:
            j["rule"] = e.rule;
            j["actor"] = e.actor;
            j["term_before"] = syntax::render(e.term_before);
            j["term_after"] = syntax::render(e.term_after);
            j["label"] = label::morphism_to_json(e.label, sig);
            j["changes"] = changes(e.before, e.after, sig);
            break;
        case TraceEntry::Kind::Jump:
            j["rule"] = e.rule;
            j["actor"] = e.actor;
            j["term_before"] = syntax::render(e.term_before);
            j["term_after"] = syntax::render(e.term_after);
            j["jump"] = {{"name", e.jump.name},
                         {"delta", e.jump.delta},
                         {"before", label::snapshot_to_json(e.before, sig)},
                         {"after", label::snapshot_to_json(e.after, sig)}};
            break;
        case TraceEntry::Kind::Injection:
            j["index"] = e.index;
            j["payload"] = label::datum_to_json(e.payload, sig.at(e.index).domain);
            break;
        case TraceEntry::Kind::Refresh:
            j["changes"] = changes(e.before, e.after, sig);
            break;
    }
    return j;
}

std::string_view to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Running: return "running";
        case RunStatus::Terminated: return "terminated";
        case RunStatus::Blocked: return "blocked";
        case RunStatus::Stuck: return "stuck";
        case RunStatus::FuelExhausted: return "fuel_exhausted";
        case RunStatus::JumpBeforeFirstStep: return "jump_before_first_step";
    }
    return "?";
}

int exit_code(RunStatus s) {
    switch (s) {
        case RunStatus::Terminated: return 0;
        case RunStatus::Blocked: return 2;
        case RunStatus::Stuck:
        case RunStatus::JumpBeforeFirstStep: return 3;
        case RunStatus::FuelExhausted: return 4;
        case RunStatus::Running: return 1;
    }
    return 1;
}

Session::Session(std::shared_ptr<const Language> lang, const Term& program, UpgradeSchedule schedule,
                 std::size_t fuel)
    : lang_(std::move(lang)),
      config_(initial_configuration(*lang_, program)),
      schedule_(std::move(schedule)),
      fired_(schedule_.size(), false),
      fuel_(fuel) {}

void Session::fire_due_injections(bool at_upgrade_point) {
    for (std::size_t i = 0; i < schedule_.size(); ++i) {
        if (fired_[i]) continue;
        const auto& u = schedule_[i];
        bool due = false;
        switch (u.trigger) {
            case ScheduledUpgrade::Trigger::Immediate: due = true; break;
            case ScheduledUpgrade::Trigger::AtStep: due = config_.step_count == u.at_step; break;
            case ScheduledUpgrade::Trigger::AtUpgradePoint: due = at_upgrade_point; break;
        }
        if (!due) continue;
        fired_[i] = true;
        TraceEntry e;
        e.kind = TraceEntry::Kind::Injection;
        e.seq = trace_.size();
        e.index = u.index;
        e.payload = u.payload;
        e.before = config_.snapshot;
        config_.snapshot.insert_or_assign(u.index, u.payload);
        e.after = config_.snapshot;
        trace_.push_back(std::move(e));
    }
}

void Session::refresh_enabled() {
    fire_due_injections(false);
    StepOutcome out = lang_->step(config_.term, config_.snapshot);
    const bool has_jump = std::any_of(out.transitions.begin(), out.transitions.end(),
                                      [](const Transition& t) { return std::holds_alternative<uts::Jump>(t.label); });
    if (has_jump) {
        const std::size_t before = trace_.size();
        fire_due_injections(true);
        if (trace_.size() != before) out = lang_->step(config_.term, config_.snapshot);
    }

    enabled_.clear();
    jumps_only_ = false;
    bool dropped_jump = false;
    for (auto& t : out.transitions) {
        if (std::holds_alternative<uts::Jump>(t.label)) {
            if (!config_.stepped) {
                dropped_jump = true;
                continue;
            }
        } else {
            try {
                label::apply(std::get<label::Morphism>(t.label), lang_->signature(), config_.snapshot);
            } catch (const NotComposable&) {
                continue;
            }
        }
        enabled_.push_back(std::move(t));
    }
    jumps_only_ = enabled_.empty() && dropped_jump;
    stuck_ = std::move(out.stuck);
    fresh_ = true;
}

const std::vector<Transition>& Session::enabled() {
    if (!fresh_) refresh_enabled();
    return enabled_;
}

RunStatus Session::status() {
    enabled();
    if (!enabled_.empty()) {
        if (config_.step_count >= fuel_) {
            message_ = "fuel of " + std::to_string(fuel_) + " transitions exhausted";
            return RunStatus::FuelExhausted;
        }
        return RunStatus::Running;
    }
    if (jumps_only_) {
        message_ = JumpBeforeFirstStep().what();
        return RunStatus::JumpBeforeFirstStep;
    }
    if (!stuck_.empty()) {
        message_.clear();
        for (const auto& s : stuck_) message_ += (message_.empty() ? "" : "; ") + s;
        return RunStatus::Stuck;
    }
    message_.clear();
    if (lang_->is_final(config_.term, config_.snapshot)) return RunStatus::Terminated;
    return RunStatus::Blocked;
}

void Session::apply(std::size_t i) {
    enabled();
    if (i >= enabled_.size()) throw Error("no enabled transition #" + std::to_string(i));
    Transition t = enabled_[i];
    TraceEntry e;
    e.seq = trace_.size();
    e.rule = t.rule;
    e.actor = t.actor;
    e.term_before = config_.term;
    e.term_after = t.next;
    e.before = config_.snapshot;
    if (auto* m = std::get_if<label::Morphism>(&t.label)) {
        e.kind = TraceEntry::Kind::Step;
        e.label = *m;
        config_.snapshot = label::apply(*m, lang_->signature(), config_.snapshot);
        config_.stepped = true;
    } else {
        const auto& j = std::get<uts::Jump>(t.label);
        e.kind = TraceEntry::Kind::Jump;
        e.jump = j;
        const auto& spec = lang_->registry().lookup(j.name);
        config_.snapshot = uts::extend_endofunctor(spec, lang_->signature(), j.delta)(config_.snapshot);
    }
    e.after = config_.snapshot;
    config_.term = t.next;
    ++config_.step_count;
    const bool was_jump = e.kind == TraceEntry::Kind::Jump;
    trace_.push_back(std::move(e));

    if (was_jump) {
        if (auto refreshed = lang_->after_jump(config_.snapshot)) {
            TraceEntry r;
            r.kind = TraceEntry::Kind::Refresh;
            r.seq = trace_.size();
            r.before = config_.snapshot;
            config_.snapshot = std::move(*refreshed);
            r.after = config_.snapshot;
            trace_.push_back(std::move(r));
        }
    }
    fresh_ = false;
}

void Session::inject(const std::string& index, label::Datum payload) {
    const auto& c = lang_->signature().at(index);
    if (c.index.ns != label::Namespace::Upgrade) {
        throw Error("not an upgrade component: " + index);
    }
    TraceEntry e;
    e.kind = TraceEntry::Kind::Injection;
    e.seq = trace_.size();
    e.index = index;
    e.payload = payload;
    e.before = config_.snapshot;
    config_.snapshot.insert_or_assign(index, std::move(payload));
    e.after = config_.snapshot;
    trace_.push_back(std::move(e));
    fresh_ = false;
}

bool Session::advance(Scheduler& sched) {
    if (status() != RunStatus::Running) return false;
    apply(sched.choose(enabled_, config_));
    return true;
}

RunResult run(std::shared_ptr<const Language> lang, const Term& program, Scheduler& sched,
              const UpgradeSchedule& schedule, std::size_t fuel) {
    Session s(std::move(lang), program, schedule, fuel);
    while (s.advance(sched)) {
    }
    RunResult r;
    r.status = s.status();
    r.message = s.message();
    r.final = s.configuration();
    r.trace = s.trace();
    return r;
}

std::string trace_to_jsonl(const RunResult& r, const Language& lang, const Term& program) {
    const auto& sig = lang.signature();
    std::ostringstream os;
    json start = {{"kind", "start"},
                  {"language", lang.name()},
                  {"program", syntax::render(program)},
                  {"snapshot", label::snapshot_to_json(lang.initial_snapshot(program), sig)}};
    os << start.dump() << '\n';
    for (const auto& e : r.trace) os << entry_to_json(e, sig).dump() << '\n';
    json end = {{"kind", "end"},
                {"status", to_string(r.status)},
                {"steps", r.final.step_count},
                {"term", syntax::render(r.final.term)},
                {"snapshot", label::snapshot_to_json(r.final.snapshot, sig)}};
    if (!r.message.empty()) end["message"] = r.message;
    os << end.dump() << '\n';
    return os.str();
}

Configuration replay(const Language& lang, const Term& program, const Trace& trace) {
    const auto& sig = lang.signature();
    Configuration c = initial_configuration(lang, program);
    for (const auto& e : trace) {
        switch (e.kind) {
            case TraceEntry::Kind::Injection:
                c.snapshot.insert_or_assign(e.index, e.payload);
                break;
            case TraceEntry::Kind::Refresh: {
                auto r = lang.after_jump(c.snapshot);
                if (!r) throw Error("entry " + std::to_string(e.seq) + ": refresh changed nothing");
                c.snapshot = std::move(*r);
                break;
            }
            case TraceEntry::Kind::Step:
            case TraceEntry::Kind::Jump: {
                const bool is_step = e.kind == TraceEntry::Kind::Step;
                StepOutcome out = lang.step(c.term, c.snapshot);
                const Transition* match = nullptr;
                for (const auto& t : out.transitions) {
                    if (!(t.next == e.term_after)) continue;
                    if (is_step) {
                        const auto* m = std::get_if<label::Morphism>(&t.label);
                        if (m && *m == e.label) match = &t;
                    } else {
                        const auto* j = std::get_if<uts::Jump>(&t.label);
                        if (j && *j == e.jump) match = &t;
                    }
                    if (match) break;
                }
                if (!match) {
                    throw Error("entry " + std::to_string(e.seq) + ": transition not reproducible");
                }
                if (is_step) {
                    c.snapshot = label::apply(e.label, sig, c.snapshot);
                    c.stepped = true;
                } else {
                    if (!c.stepped) throw JumpBeforeFirstStep();
                    c.snapshot = uts::extend_endofunctor(lang.registry().lookup(e.jump.name), sig,
                                                         e.jump.delta)(c.snapshot);
                }
                c.term = e.term_after;
                ++c.step_count;
                break;
            }
        }
        if (!e.after.empty() && !(c.snapshot == e.after)) {
            throw Error("entry " + std::to_string(e.seq) + ": snapshot differs after replay");
        }
    }
    return c;
}

Configuration replay_jsonl(const Language& lang, const std::string& jsonl) {
    const auto& sig = lang.signature();
    std::istringstream is(jsonl);
    std::string line;
    std::optional<Term> program;
    std::optional<json> final_snapshot;
    Trace trace;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "start") {
            program = syntax::parse_term(j.at("program").get<std::string>());
            continue;
        }
        if (kind == "end") {
            final_snapshot = j.at("snapshot");
            continue;
        }
        TraceEntry e;
        e.seq = j.at("seq").get<std::size_t>();
        if (kind == "step") {
            e.kind = TraceEntry::Kind::Step;
            e.label = label::morphism_from_json(j.at("label"), sig);
            e.term_after = syntax::parse_term(j.at("term_after").get<std::string>());
        } else if (kind == "jump") {
            e.kind = TraceEntry::Kind::Jump;
            e.jump.name = j.at("jump").at("name").get<std::string>();
            e.jump.delta = j.at("jump").at("delta").get<std::set<std::string>>();
            e.term_after = syntax::parse_term(j.at("term_after").get<std::string>());
        } else if (kind == "injection") {
            e.kind = TraceEntry::Kind::Injection;
            e.index = j.at("index").get<std::string>();
            e.payload = label::datum_from_json(j.at("payload"), sig.at(e.index).domain);
        } else if (kind == "refresh") {
            e.kind = TraceEntry::Kind::Refresh;
        } else {
            throw Error("unknown trace entry kind: " + kind);
        }
        trace.push_back(std::move(e));
    }
    if (!program) throw Error("trace has no start line");
    Configuration c = replay(lang, *program, trace);
    if (final_snapshot && !(label::snapshot_to_json(c.snapshot, sig) == *final_snapshot)) {
        throw Error("final snapshot differs after replay");
    }
    return c;
}

}  // namespace dsos::engine
