#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "dsos/engine/explore.hpp"
#include "dsos/error.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::cli {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Loaded load(const Invocation& inv) {
    if (!std::filesystem::is_regular_file(inv.program)) throw InputError("no such file: " + inv.program);
    std::string lang = inv.lang.empty() ? engine::language_for_path(inv.program) : inv.lang;
    if (lang.empty()) throw InputError("cannot tell the language of " + inv.program + "; use --lang");

    Loaded l;
    l.lang = engine::make_language(lang, {.consume_all = inv.consume_all, .non_int = inv.non_int});
    std::vector<std::string> warnings;
    try {
        l.program = l.lang->parse(read_file(inv.program), &warnings);
    } catch (const SyntaxError& e) {
        throw InputError(inv.program + ":" + e.what());
    } catch (const InvalidProgram& e) {
        throw InputError(inv.program + ": " + e.what());
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

    if (!inv.schedule.empty()) {
        try {
            l.schedule = engine::parse_schedule(json::parse(read_file(inv.schedule)), l.lang->signature());
        } catch (const json::exception& e) {
            throw InputError(inv.schedule + ": " + e.what());
        } catch (const Error& e) {
            throw InputError(inv.schedule + ": " + e.what());
        }
    }
    return l;
}

namespace {

engine::RunResult execute(const Invocation& inv, const Loaded& l) {
    auto sched = engine::make_scheduler(inv.scheduler, inv.seed);
    return engine::run(l.lang, l.program, *sched, l.schedule, inv.fuel);
}

void pretty_snapshot(std::ostream& out, const label::Snapshot& s) {
    for (const auto& [idx, d] : s) out << "  " << idx << " = " << label::to_string(d) << '\n';
}

void pretty_entry(std::ostream& out, const engine::TraceEntry& e, const label::LabelSignature& sig) {
    using K = engine::TraceEntry::Kind;
    out << '[' << e.seq << "] ";
    switch (e.kind) {
        case K::Step:
            out << e.rule;
            if (!e.actor.empty()) out << " @" << e.actor;
            out << "\n    " << syntax::render(e.term_before) << "\n    --" << label::pretty(e.label, sig)
                << "-->\n    " << syntax::render(e.term_after) << '\n';
            break;
        case K::Jump: {
            out << "jump " << e.jump.name << " {";
            bool first = true;
            for (const auto& x : e.jump.delta) {
                out << (first ? "" : ", ") << x;
                first = false;
            }
            out << "}\n";
            for (const auto& [idx, d] : e.after) {
                auto it = e.before.find(idx);
                if (it == e.before.end() || !(it->second == d)) {
                    out << "    " << idx << " := " << label::to_string(d) << '\n';
                }
            }
            break;
        }
        case K::Injection:
            out << "inject " << e.index << " := " << label::to_string(e.payload) << '\n';
            break;
        case K::Refresh: out << "refresh objects\n"; break;
    }
}

}  // namespace

int cmd_run(const Invocation& inv, std::ostream& out) {
    Loaded l = load(inv);
    engine::RunResult r = execute(inv, l);
    if (inv.format == "pretty") {
        out << "status: " << engine::to_string(r.status) << '\n'
            << "transitions: " << r.final.step_count << '\n'
            << "term: " << syntax::render(r.final.term) << '\n'
            << "snapshot:\n";
        pretty_snapshot(out, r.final.snapshot);
        if (!r.message.empty()) out << "message: " << r.message << '\n';
    } else {
        json end = {{"kind", "end"},
                    {"status", engine::to_string(r.status)},
                    {"steps", r.final.step_count},
                    {"term", syntax::render(r.final.term)},
                    {"snapshot", label::snapshot_to_json(r.final.snapshot, l.lang->signature())}};
        if (!r.message.empty()) end["message"] = r.message;
        out << end.dump() << '\n';
    }
    if (!r.message.empty()) std::cerr << engine::to_string(r.status) << ": " << r.message << '\n';
    return engine::exit_code(r.status);
}

int cmd_trace(const Invocation& inv, std::ostream& out) {
    Loaded l = load(inv);
    engine::RunResult r = execute(inv, l);
    if (inv.format == "pretty") {
        for (const auto& e : r.trace) pretty_entry(out, e, l.lang->signature());
        out << "status: " << engine::to_string(r.status) << '\n';
    } else {
        out << engine::trace_to_jsonl(r, *l.lang, l.program);
    }
    if (!r.message.empty()) std::cerr << engine::to_string(r.status) << ": " << r.message << '\n';
    return engine::exit_code(r.status);
}

int cmd_explore(const Invocation& inv, std::ostream& out) {
    Loaded l = load(inv);
    if (!l.schedule.empty()) std::cerr << "warning: explore ignores upgrade schedules\n";
    engine::StateGraph g = engine::explore(*l.lang, l.program, inv.depth, inv.max_states);

    std::map<std::string, std::size_t> by_status;
    std::set<std::pair<syntax::Term, label::Snapshot>> distinct;
    for (const auto& [id, k] : g.terminal) {
        ++by_status[std::string(engine::to_string(k))];
        distinct.emplace(g.states[id].term, g.states[id].snapshot);
    }
    if (inv.format == "pretty") {
        out << "states: " << g.states.size() << "\nedges: " << g.edges.size() << "\ndepth: " << g.depth
            << "\ndistinct terminal configurations: " << distinct.size() << '\n';
        for (const auto& [k, n] : by_status) out << "  " << k << ": " << n << '\n';
        for (const auto& [term, snap] : distinct) {
            out << "terminal: " << syntax::render(term) << '\n';
            pretty_snapshot(out, snap);
        }
    } else {
        json terms = json::array();
        for (const auto& [term, snap] : distinct) {
            terms.push_back({{"term", syntax::render(term)},
                             {"snapshot", label::snapshot_to_json(snap, l.lang->signature())}});
        }
        json j = {{"states", g.states.size()},
                  {"edges", g.edges.size()},
                  {"depth", g.depth},
                  {"terminal", by_status},
                  {"distinct_terminal", terms}};
        out << j.dump() << '\n';
    }
    return 0;
}

}  // namespace dsos::cli
