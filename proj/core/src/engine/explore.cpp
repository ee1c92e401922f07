#include "dsos/engine/explore.hpp"

#include <deque>
#include <tuple>

#include "dsos/error.hpp"

namespace dsos::engine {

std::vector<std::size_t> StateGraph::terminal_states(RunStatus kind) const {
    std::vector<std::size_t> out;
    for (const auto& [id, k] : terminal) {
        if (k == kind) out.push_back(id);
    }
    return out;
}

StateGraph explore(const Language& lang, const Term& program, std::size_t max_depth,
                   std::size_t max_states) {
    using Key = std::tuple<Term, label::Snapshot, bool>;
    const auto& sig = lang.signature();

    StateGraph g;
    std::map<Key, std::size_t> index;
    std::deque<std::pair<std::size_t, std::size_t>> queue;  // (state, depth)

    auto intern = [&](Configuration c) -> std::pair<std::size_t, bool> {
        Key k{c.term, c.snapshot, c.stepped};
        if (auto it = index.find(k); it != index.end()) return {it->second, false};
        const std::size_t id = g.states.size();
        index.emplace(std::move(k), id);
        g.states.push_back(std::move(c));
        if (g.states.size() > max_states) throw DepthExceeded(g.depth, queue.size());
        return {id, true};
    };

    queue.emplace_back(intern(initial_configuration(lang, program)).first, 0);
    while (!queue.empty()) {
        auto [id, depth] = queue.front();
        queue.pop_front();
        g.depth = std::max(g.depth, depth);
        const Configuration cur = g.states[id];
        StepOutcome out = lang.step(cur.term, cur.snapshot);

        bool any = false;
        bool dropped_jump = false;
        for (const auto& t : out.transitions) {
            Configuration next = cur;
            next.term = t.next;
            ++next.step_count;
            const bool jump = std::holds_alternative<uts::Jump>(t.label);
            if (jump) {
                if (!cur.stepped) {
                    dropped_jump = true;
                    continue;
                }
                const auto& j = std::get<uts::Jump>(t.label);
                next.snapshot =
                    uts::extend_endofunctor(lang.registry().lookup(j.name), sig, j.delta)(cur.snapshot);
                if (auto r = lang.after_jump(next.snapshot)) next.snapshot = std::move(*r);
            } else {
                try {
                    next.snapshot = label::apply(std::get<label::Morphism>(t.label), sig, cur.snapshot);
                } catch (const NotComposable&) {
                    continue;
                }
                next.stepped = true;
            }
            if (depth >= max_depth) throw DepthExceeded(max_depth, queue.size() + 1);
            next.step_count = 0;
            any = true;
            auto [to, fresh] = intern(std::move(next));
            g.edges.push_back({id, to, t.rule, t.actor, jump});
            if (fresh) queue.emplace_back(to, depth + 1);
        }
        if (!any) {
            RunStatus k;
            if (dropped_jump) {
                k = RunStatus::JumpBeforeFirstStep;
            } else if (!out.stuck.empty()) {
                k = RunStatus::Stuck;
            } else if (lang.is_final(cur.term, cur.snapshot)) {
                k = RunStatus::Terminated;
            } else {
                k = RunStatus::Blocked;
            }
            g.terminal.emplace(id, k);
        }
    }
    return g;
}

}  // namespace dsos::engine
