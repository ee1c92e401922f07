#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "dsos/error.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::cli {

using nlohmann::json;

namespace {

class Repl {
public:
    Repl(const Invocation& inv, Loaded l, std::ostream& out)
        : pretty_(inv.format == "pretty"),
          sig_(l.lang->signature()),
          session_(l.lang, l.program, l.schedule, inv.fuel),
          sched_(engine::make_scheduler(inv.scheduler, inv.seed)),
          out_(out) {}

    /// False on quit.
    bool handle(const std::string& line) {
        std::istringstream in(line);
        std::string cmd;
        in >> cmd;
        if (cmd.empty()) return true;
        try {
            if (cmd == "quit" || cmd == "exit") return false;
            if (cmd == "step") {
                std::size_t n = 1;
                if (!(in >> n)) n = 1;
                step(n);
            } else if (cmd == "apply") {
                std::size_t i = 0;
                if (!(in >> i)) throw Error("usage: apply <i>");
                apply(i);
            } else if (cmd == "enabled") {
                enabled();
            } else if (cmd == "inject") {
                std::string index;
                in >> index;
                std::string payload;
                std::getline(in, payload);
                inject(index, payload);
            } else if (cmd == "show") {
                std::string what;
                in >> what;
                show(what);
            } else if (cmd == "jump-log") {
                jump_log();
            } else if (cmd == "status") {
                report_status();
            } else if (cmd == "help") {
                message("commands: step [n], apply <i>, enabled, inject <index> <json>, "
                        "show <index|term|pools>, jump-log, status, quit");
            } else {
                throw Error("unknown command: " + cmd);
            }
        } catch (const std::exception& e) {
            error(e.what());
        }
        return true;
    }

private:
    void step(std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t before = session_.trace().size();
            if (!session_.advance(*sched_)) break;
            emit_entries(before);
        }
        report_status();
    }

    void apply(std::size_t i) {
        const std::size_t before = session_.trace().size();
        if (session_.status() != engine::RunStatus::Running) throw Error("nothing to apply");
        session_.apply(i);
        emit_entries(before);
    }

    void enabled() {
        const auto& ts = session_.enabled();
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto& t = ts[i];
            const auto* m = std::get_if<label::Morphism>(&t.label);
            const auto* j = std::get_if<uts::Jump>(&t.label);
            if (pretty_) {
                out_ << i << ": " << t.rule;
                if (!t.actor.empty()) out_ << " @" << t.actor;
                out_ << "  " << (m ? label::pretty(*m, sig_) : "jump " + j->name) << "  => "
                     << syntax::render(t.next) << '\n';
            } else {
                json e = {{"index", i}, {"rule", t.rule}, {"next", syntax::render(t.next)}};
                if (!t.actor.empty()) e["actor"] = t.actor;
                if (m) e["label"] = label::morphism_to_json(*m, sig_);
                if (j) e["jump"] = {{"name", j->name}, {"delta", j->delta}};
                out_ << e.dump() << '\n';
            }
        }
        if (ts.empty()) report_status();
    }

    void inject(const std::string& index, const std::string& text) {
        const auto& c = sig_.at(index);
        if (c.index.ns != label::Namespace::Upgrade) throw Error("not an upgrade component: " + index);
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw Error(std::string("malformed payload: ") + e.what());
        }
        label::Datum payload = label::datum_from_json(j, c.domain);
        const std::size_t before = session_.trace().size();
        session_.inject(index, std::move(payload));
        emit_entries(before);
    }

    void show(const std::string& what) {
        const auto& c = session_.configuration();
        if (what == "term") {
            message(syntax::render(c.term));
        } else if (what == "pools") {
            json j = json::object();
            for (const char* idx : {"M", "E"}) {
                if (!sig_.contains(idx)) continue;
                if (std::string(idx) == "M") {
                    j["messages"] = label::datum_to_json(c.snapshot.at(idx), sig_.at(idx).domain);
                } else {
                    json threads = json::object();
                    for (const auto& [o, local] : c.snapshot.at(idx).as_map()) {
                        json pool = json::array();
                        if (const auto* t = local.lookup("T")) {
                            for (const auto& s : t->as_bag()) pool.push_back(syntax::render(s.as_term()));
                        }
                        threads[o] = pool;
                    }
                    j["threads"] = threads;
                }
            }
            if (j.empty()) throw Error("this language has no pools");
            pretty_ ? void(out_ << j.dump(2) << '\n') : void(out_ << j.dump() << '\n');
        } else {
            const auto& comp = sig_.at(what);
            if (pretty_) {
                out_ << what << " = " << label::to_string(c.snapshot.at(what)) << '\n';
            } else {
                out_ << json{{"index", what}, {"value", label::datum_to_json(c.snapshot.at(what), comp.domain)}}.dump()
                     << '\n';
            }
        }
    }

    void jump_log() {
        for (const auto& e : session_.trace()) {
            if (e.kind == engine::TraceEntry::Kind::Jump) emit(e);
        }
    }

    void report_status() {
        const auto s = session_.status();
        if (pretty_) {
            out_ << "status: " << engine::to_string(s);
            if (!session_.message().empty()) out_ << " (" << session_.message() << ')';
            out_ << '\n';
        } else {
            json j = {{"status", engine::to_string(s)}, {"steps", session_.configuration().step_count}};
            if (!session_.message().empty()) j["message"] = session_.message();
            out_ << j.dump() << '\n';
        }
    }

    void emit_entries(std::size_t from) {
        const auto& tr = session_.trace();
        for (std::size_t i = from; i < tr.size(); ++i) emit(tr[i]);
    }

    void emit(const engine::TraceEntry& e) {
        if (pretty_) {
            out_ << '[' << e.seq << "] " << engine::to_string(e.kind);
            if (!e.rule.empty()) out_ << ' ' << e.rule;
            if (!e.actor.empty()) out_ << " @" << e.actor;
            if (e.kind == engine::TraceEntry::Kind::Jump) out_ << ' ' << e.jump.name;
            if (e.kind == engine::TraceEntry::Kind::Injection) out_ << ' ' << e.index;
            const bool moves = e.kind == engine::TraceEntry::Kind::Step || e.kind == engine::TraceEntry::Kind::Jump;
            if (moves) out_ << "  => " << syntax::render(e.term_after);
            out_ << '\n';
        } else {
            out_ << engine::entry_to_json(e, sig_).dump() << '\n';
        }
    }

    void message(const std::string& text) {
        if (pretty_) {
            out_ << text << '\n';
        } else {
            out_ << json{{"message", text}}.dump() << '\n';
        }
    }

    void error(const std::string& text) {
        if (pretty_) {
            out_ << "error: " << text << '\n';
        } else {
            out_ << json{{"error", text}}.dump() << '\n';
        }
    }

    bool pretty_;
    const label::LabelSignature& sig_;
    engine::Session session_;
    std::unique_ptr<engine::Scheduler> sched_;
    std::ostream& out_;
};

}  // namespace

int cmd_repl(const Invocation& inv, std::istream& in, std::ostream& out) {
    Repl repl(inv, load(inv), out);
    const bool interactive = &in == &std::cin && inv.format == "pretty";
    std::string line;
    while (true) {
        if (interactive) out << "dsos> " << std::flush;
        if (!std::getline(in, line)) break;
        if (!repl.handle(line)) break;
    }
    return 0;
}

}  // namespace dsos::cli
