#include "dsos/engine/checks.hpp"

#include <map>
#include <set>

#include "dsos/engine/oracle.hpp"
#include "dsos/error.hpp"

namespace dsos::engine {

using label::Datum;
using syntax::TermKind;

namespace {

CheckVerdict fail(std::size_t at, std::string why) {
    CheckVerdict v;
    v.pass = false;
    v.witness_step = at;
    v.detail = std::move(why);
    return v;
}

label::Snapshot restrict(const label::Snapshot& s, const std::set<std::string>& keep) {
    label::Snapshot out;
    for (const auto& [k, v] : s) {
        if (keep.contains(k)) out.emplace(k, v);
    }
    return out;
}

/// Elements added and removed between two bags.
std::pair<std::vector<Datum>, std::vector<Datum>> bag_diff(const Datum* before, const Datum* after) {
    std::map<Datum, long> count;
    if (before) {
        for (const auto& d : before->as_bag()) --count[d];
    }
    if (after) {
        for (const auto& d : after->as_bag()) ++count[d];
    }
    std::vector<Datum> added, removed;
    for (const auto& [d, n] : count) {
        for (long i = 0; i < n; ++i) added.push_back(d);
        for (long i = 0; i < -n; ++i) removed.push_back(d);
    }
    return {added, removed};
}

const Datum* find(const label::Snapshot& s, const char* idx) {
    auto it = s.find(idx);
    return it == s.end() ? nullptr : &it->second;
}

}  // namespace

CheckVerdict modularity_check(std::shared_ptr<const Language> base, const Term& program,
                              const std::string& fresh_index, const UpgradeSchedule& schedule,
                              std::uint64_t seed, bool mutate) {
    auto ext = extend_language(base, fresh_index, mutate);
    const auto names = base->signature().names();
    const std::set<std::string> keep(names.begin(), names.end());

    UniformScheduler s1(seed);
    UniformScheduler s2(seed);
    RunResult a = run(base, program, s1, schedule);
    RunResult b = run(ext, program, s2, schedule);

    CheckVerdict v;
    const std::size_t n = std::min(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a.trace[i];
        const auto& y = b.trace[i];
        ++v.checked;
        if (x.kind != y.kind) return fail(i, "entry kinds differ");
        if (!(x.term_before == y.term_before) || !(x.term_after == y.term_after)) {
            return fail(i, "terms differ");
        }
        if (x.kind == TraceEntry::Kind::Step) {
            if (!(label::project(y.label, keep, ext->signature()) == x.label)) {
                return fail(i, "labels differ after projection");
            }
        }
        if (x.kind == TraceEntry::Kind::Jump && !(x.jump == y.jump)) return fail(i, "jumps differ");
        if (!(restrict(y.after, keep) == x.after)) return fail(i, "snapshots differ after projection");
        if (!(y.after.at(fresh_index) == y.before.at(fresh_index))) {
            return fail(i, "the fresh component " + fresh_index + " changed");
        }
    }
    if (a.trace.size() != b.trace.size()) return fail(n, "computations have different lengths");
    if (a.status != b.status) return fail(n, "final statuses differ");
    return v;
}

CheckVerdict heap_conformance(const Term& program, const UpgradeSchedule& schedule, bool consume_all,
                              std::size_t fuel) {
    Heap pending;
    for (const auto& u : schedule) {
        if (u.trigger != ScheduledUpgrade::Trigger::Immediate) return fail(0, "non-immediate trigger");
        const auto sort = u.index == "U_S"   ? HeapCell::Sort::Var
                          : u.index == "U_F" ? HeapCell::Sort::Fun
                                             : HeapCell::Sort::Rec;
        for (auto it = pending.begin(); it != pending.end();) {
            it = it->second.sort == sort ? pending.erase(it) : std::next(it);
        }
        for (const auto& [k, v] : u.payload.as_map()) pending[k] = {sort, v.as_term()};
    }

    OracleTrace expected = oracle_run(program, pending, consume_all, fuel);
    FirstScheduler first;
    RunResult got = run(make_proteus({.consume_all = consume_all}), program, first, schedule, fuel);

    CheckVerdict v;
    std::size_t k = 0;
    for (const auto& e : got.trace) {
        if (e.kind == TraceEntry::Kind::Injection || e.kind == TraceEntry::Kind::Refresh) continue;
        ++k;
        ++v.checked;
        if (k >= expected.terms.size()) return fail(e.seq, "oracle stopped earlier");
        if (!(e.term_after == expected.terms[k])) return fail(e.seq, "terms differ");
        if (!(heap_union(e.after) == expected.heaps[k])) return fail(e.seq, "heaps differ");
    }
    if (k + 1 != expected.terms.size()) return fail(got.trace.size(), "oracle ran longer");
    if (expected.stuck != (got.status == RunStatus::Stuck)) return fail(got.trace.size(), "stuckness differs");
    return v;
}

CheckVerdict audit_messages(const Trace& trace) {
    CheckVerdict v;
    std::map<std::uint64_t, int> invoke_added, invoke_consumed, completion_added, completion_consumed;
    std::size_t returns = 0;
    std::size_t completions = 0;
    for (const auto& e : trace) {
        if (e.kind != TraceEntry::Kind::Step) continue;
        ++v.checked;
        if (e.rule == "return") ++returns;
        const Datum* mb = find(e.before, "M");
        const Datum* ma = find(e.after, "M");
        if (!mb && !ma) continue;
        std::set<std::string> objects;
        if (mb) for (const auto& [o, _] : mb->as_map()) objects.insert(o);
        if (ma) for (const auto& [o, _] : ma->as_map()) objects.insert(o);
        for (const auto& o : objects) {
            auto [added, removed] = bag_diff(mb ? mb->lookup(o) : nullptr, ma ? ma->lookup(o) : nullptr);
            for (const auto& d : added) {
                const Term& t = d.as_term();
                if (t.is(TermKind::MsgInvoke)) {
                    if (++invoke_added[t.number()] > 1) {
                        return fail(e.seq, "invoke " + std::to_string(t.number()) + " appended twice");
                    }
                } else {
                    ++completions;
                    if (++completion_added[t.number()] > 1) {
                        return fail(e.seq, "completion " + std::to_string(t.number()) + " appended twice");
                    }
                }
            }
            for (const auto& d : removed) {
                const Term& t = d.as_term();
                auto& added_map = t.is(TermKind::MsgInvoke) ? invoke_added : completion_added;
                auto& consumed = t.is(TermKind::MsgInvoke) ? invoke_consumed : completion_consumed;
                if (++consumed[t.number()] > added_map[t.number()]) {
                    return fail(e.seq, "message " + std::to_string(t.number()) + " consumed more often than sent");
                }
            }
        }
        if (completions != returns) {
            return fail(e.seq, "completions do not match executed returns");
        }
    }
    for (const auto& [n, _] : completion_added) {
        if (!invoke_added.contains(n)) {
            return fail(trace.size(), "completion " + std::to_string(n) + " without a call");
        }
    }
    return v;
}

CheckVerdict audit_futures(const Trace& trace) {
    CheckVerdict v;
    std::set<std::uint64_t> issued;
    for (const auto& e : trace) {
        if (e.kind != TraceEntry::Kind::Step || e.rule != "call") continue;
        ++v.checked;
        const Datum* mb = find(e.before, "M");
        const Datum* ma = find(e.after, "M");
        if (!ma) continue;
        for (const auto& [o, pool] : ma->as_map()) {
            auto [added, removed] = bag_diff(mb ? mb->lookup(o) : nullptr, &pool);
            for (const auto& d : added) {
                if (!d.as_term().is(TermKind::MsgInvoke)) continue;
                if (!issued.insert(d.as_term().number()).second) {
                    return fail(e.seq, "future " + std::to_string(d.as_term().number()) + " reused");
                }
            }
        }
    }
    return v;
}

CheckVerdict audit_upgrade_numbers(const Trace& trace) {
    CheckVerdict v;
    for (const auto& e : trace) {
        ++v.checked;
        const Datum* before = find(e.before, "UN");
        const Datum* after = find(e.after, "UN");
        if (!before) continue;
        for (const auto& [c, n] : before->as_map()) {
            const Datum* m = after ? after->lookup(c) : nullptr;
            if (!m || m->as_nat() < n.as_nat()) return fail(e.seq, "upgrade number of " + c + " decreased");
        }
    }
    return v;
}

CheckVerdict audit_chain(const Language& lang, const Trace& trace) {
    CheckVerdict v;
    const auto& sig = lang.signature();
    const TraceEntry* prev = nullptr;
    for (const auto& e : trace) {
        ++v.checked;
        if (prev && !(prev->after == e.before)) return fail(e.seq, "entry does not start where the last ended");
        if (e.kind == TraceEntry::Kind::Step) {
            try {
                if (!(label::apply(e.label, sig, e.before) == e.after)) {
                    return fail(e.seq, "label target differs from recorded snapshot");
                }
                if (prev && prev->kind == TraceEntry::Kind::Step) {
                    label::compose(prev->label, e.label, sig, e.before);
                }
            } catch (const NotComposable& err) {
                return fail(e.seq, err.what());
            }
        } else if (e.kind == TraceEntry::Kind::Jump) {
            auto ext = uts::extend_endofunctor(lang.registry().lookup(e.jump.name), sig, e.jump.delta);
            if (!(ext(e.before) == e.after)) return fail(e.seq, "jump target differs from E(source)");
        }
        prev = &e;
    }
    return v;
}

CheckVerdict audit_frame(const Trace& trace) {
    CheckVerdict v;
    for (const auto& e : trace) {
        if (e.kind != TraceEntry::Kind::Step || e.actor.empty() || e.rule == "non-int") continue;
        ++v.checked;
        const Datum* before = find(e.before, "E");
        const Datum* after = find(e.after, "E");
        if (!before || !after) continue;
        for (const auto& [o, local] : before->as_map()) {
            if (o == e.actor) continue;
            const Datum* now = after->lookup(o);
            if (!now || !(*now == local)) return fail(e.seq, "object " + o + " changed during a step of " + e.actor);
        }
    }
    return v;
}

}  // namespace dsos::engine
