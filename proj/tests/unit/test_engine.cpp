#include <gtest/gtest.h>

#include "dsos/creol/creol.hpp"
#include "dsos/engine/checks.hpp"
#include "dsos/engine/explore.hpp"
#include "dsos/engine/generate.hpp"
#include "dsos/engine/oracle.hpp"
#include "dsos/error.hpp"
#include "dsos/proteus/proteus.hpp"
#include "dsos/syntax/text.hpp"
#include "helpers.hpp"

using namespace dsos;
using namespace dsos::engine;
using label::Datum;
using syntax::nat;
using syntax::parse_term;

namespace {

Datum vals(std::initializer_list<std::pair<const char*, std::uint64_t>> kv) {
    label::DatumMap m;
    for (auto [k, v] : kv) m.emplace(k, Datum::term(nat(v)));
    return Datum::map(std::move(m));
}

ScheduledUpgrade now(const char* index, Datum payload) {
    return {ScheduledUpgrade::Trigger::Immediate, 0, index, std::move(payload)};
}

const Datum& var(const RunResult& r, const char* x) { return *r.final.snapshot.at("S").lookup(x); }

}  // namespace

TEST(Run, UpdateReadsInjectedValue) {
    auto lang = make_proteus();
    FirstScheduler s;
    auto r = run(lang, proteus::parse("var x := 1; update{v: x}; var y := x"), s, {now("U_S", vals({{"x", 9}}))});
    EXPECT_EQ(r.status, RunStatus::Terminated);
    EXPECT_EQ(var(r, "y"), Datum::term(nat(9)));
    EXPECT_EQ(r.final.snapshot.at("U_S"), Datum::map());
}

TEST(Run, UpdateWithoutPayloadIsIdentity) {
    auto lang = make_proteus();
    FirstScheduler s;
    auto r = run(lang, proteus::parse("var x := 1; update{v: x}; var y := x"), s);
    EXPECT_EQ(var(r, "y"), Datum::term(nat(1)));
}

TEST(Run, LeadingJumpIsRejected) {
    auto lang = make_proteus();
    FirstScheduler s;
    auto r = run(lang, proteus::parse("update{v: x}; skip"), s);
    EXPECT_EQ(r.status, RunStatus::JumpBeforeFirstStep);
    EXPECT_EQ(exit_code(r.status), 3);
}

TEST(Run, StatusesAndExitCodes) {
    auto lang = make_proteus();
    FirstScheduler s;
    EXPECT_EQ(run(lang, proteus::parse("x := 1"), s).status, RunStatus::Stuck);
    EXPECT_EQ(run(lang, proteus::parse("skip; skip; skip"), s, {}, 2).status, RunStatus::FuelExhausted);
    EXPECT_EQ(exit_code(RunStatus::Terminated), 0);
    EXPECT_EQ(exit_code(RunStatus::Blocked), 2);
    EXPECT_EQ(exit_code(RunStatus::Stuck), 3);
    EXPECT_EQ(exit_code(RunStatus::FuelExhausted), 4);
}

TEST(Session, EnabledListsEveryObject) {
    auto lang = make_creol();
    Session s(lang, creol::parse("object a { var x := 1 } || object b { var y := 2 }"));
    const auto& ts = s.enabled();
    ASSERT_EQ(ts.size(), 2u);
    EXPECT_EQ(ts[0].actor, "a");
    EXPECT_EQ(ts[1].actor, "b");
    s.apply(1);
    EXPECT_EQ(s.trace().back().actor, "b");
    EXPECT_EQ(s.enabled().size(), 1u);
}

TEST(Session, InjectRejectsDataIndex) {
    Session s(make_proteus(), proteus::parse("skip"));
    EXPECT_THROW(s.inject("S", Datum::map()), Error);
    EXPECT_NO_THROW(s.inject("U_S", vals({{"x", 1}})));
    EXPECT_EQ(s.configuration().step_count, 0u);
}

// An injection changes nothing but its upgrade component, and without a
// matching update the data of the run is the same as without it.
TEST(Session, InjectionIsolation) {
    auto lang = make_proteus();
    for (const auto& f : testing_support::corpus_files("proteus", ".prot")) {
        Term prog = proteus::parse(testing_support::slurp(f));
        FirstScheduler a, b;
        auto plain = run(lang, prog, a);
        auto injected = run(lang, prog, b, {now("U_S", vals({{"unused_name", 1}}))});
        ASSERT_EQ(injected.trace.front().kind, TraceEntry::Kind::Injection);
        for (const auto& [idx, d] : injected.trace.front().after) {
            if (idx != "U_S") EXPECT_EQ(d, injected.trace.front().before.at(idx));
        }
        EXPECT_EQ(plain.status, injected.status) << f;
        EXPECT_EQ(plain.final.term, injected.final.term) << f;
        for (const char* idx : {"S", "F", "R"}) {
            EXPECT_EQ(plain.final.snapshot.at(idx), injected.final.snapshot.at(idx)) << f << ' ' << idx;
        }
    }
}

TEST(Scheduler, SameSeedSameTrace) {
    auto lang = make_creol();
    for (const auto& f : testing_support::corpus_files("creol", ".creol")) {
        Term sys = creol::parse(testing_support::slurp(f));
        auto sched = testing_support::schedule_for(f, creol::signature());
        UniformScheduler a(42), b(42);
        EXPECT_EQ(trace_to_jsonl(run(lang, sys, a, sched), *lang, sys),
                  trace_to_jsonl(run(lang, sys, b, sched), *lang, sys))
            << f;
    }
}

TEST(Scheduler, RoundRobinRotatesActors) {
    auto lang = make_creol();
    RoundRobinScheduler rr;
    auto r = run(lang, creol::parse("object a { skip; skip } || object b { skip; skip }"), rr);
    ASSERT_GE(r.trace.size(), 2u);
    EXPECT_NE(r.trace[0].actor, r.trace[1].actor);
}

TEST(Replay, CorpusTracesReproduce) {
    for (const auto* sub : {"proteus", "creol"}) {
        const bool creol = std::string(sub) == "creol";
        auto lang = creol ? make_creol() : make_proteus();
        for (const auto& f : testing_support::corpus_files(sub, creol ? ".creol" : ".prot")) {
            Term prog = lang->parse(testing_support::slurp(f), nullptr);
            UniformScheduler s(7);
            auto r = run(lang, prog, s, testing_support::schedule_for(f, lang->signature()));
            Configuration c = replay(*lang, prog, r.trace);
            EXPECT_EQ(c.term, r.final.term) << f;
            EXPECT_EQ(c.snapshot, r.final.snapshot) << f;
            EXPECT_EQ(replay_jsonl(*lang, trace_to_jsonl(r, *lang, prog)).snapshot, r.final.snapshot) << f;
        }
    }
}

TEST(Replay, TamperedEntryRejected) {
    auto lang = make_proteus();
    Term prog = proteus::parse("var x := 1; x := 2");
    FirstScheduler s;
    auto r = run(lang, prog, s);
    r.trace[1].term_after = parse_term("x := 3");
    EXPECT_THROW(replay(*lang, prog, r.trace), Error);
}

TEST(Trace, JsonLinesShape) {
    auto lang = make_proteus();
    Term prog = proteus::parse("var x := 1; print x");
    FirstScheduler s;
    auto r = run(lang, prog, s);
    std::istringstream in(trace_to_jsonl(r, *lang, prog));
    std::vector<nlohmann::json> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(nlohmann::json::parse(l));
    ASSERT_EQ(lines.size(), r.trace.size() + 2);
    EXPECT_EQ(lines.front()["kind"], "start");
    EXPECT_EQ(lines.back()["kind"], "end");
    EXPECT_EQ(lines.back()["status"], "terminated");
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) EXPECT_EQ(lines[i]["seq"], i - 1);
}

// Chain and jump-target invariants over every corpus run.
TEST(Audit, CorpusChains) {
    for (const auto* sub : {"proteus", "creol"}) {
        const bool creol = std::string(sub) == "creol";
        auto lang = creol ? make_creol() : make_proteus();
        for (const auto& f : testing_support::corpus_files(sub, creol ? ".creol" : ".prot")) {
            Term prog = lang->parse(testing_support::slurp(f), nullptr);
            for (std::uint64_t seed : {1u, 2u, 3u}) {
                UniformScheduler s(seed);
                auto r = run(lang, prog, s, testing_support::schedule_for(f, lang->signature()));
                auto v = audit_chain(*lang, r.trace);
                EXPECT_TRUE(v.pass) << f << ": " << v.detail;
                EXPECT_TRUE(audit_upgrade_numbers(r.trace).pass) << f;
                EXPECT_TRUE(audit_futures(r.trace).pass) << f;
            }
        }
    }
}

TEST(Audit, BrokenChainDetected) {
    auto lang = make_proteus();
    Term prog = proteus::parse("var x := 1; x := 2");
    FirstScheduler s;
    auto r = run(lang, prog, s);
    r.trace[1].after["S"] = vals({{"x", 5}});
    EXPECT_FALSE(audit_chain(*lang, r.trace).pass);
}

TEST(Explore, DiamondOfTwoIndependentSteps) {
    auto lang = make_creol();
    auto g = explore(*lang, creol::parse("object a { skip } || object b { skip }"), 10);
    EXPECT_EQ(g.states.size(), 4u);
    EXPECT_EQ(g.edges.size(), 4u);
    EXPECT_EQ(g.terminal_states(RunStatus::Terminated).size(), 1u);
}

TEST(Explore, SequentialProgramIsAPath) {
    auto lang = make_proteus();
    auto g = explore(*lang, proteus::parse("skip; skip"), 10);
    EXPECT_EQ(g.states.size(), 4u);
    EXPECT_EQ(g.edges.size(), 3u);
    EXPECT_EQ(g.depth, 3u);
}

TEST(Explore, DepthLimit) {
    auto lang = make_proteus();
    try {
        explore(*lang, proteus::parse("skip; skip; skip; skip"), 2);
        FAIL();
    } catch (const DepthExceeded& e) {
        EXPECT_GT(e.frontier, 0u);
    }
}

TEST(Explore, CallProtocolConfluent) {
    auto lang = make_creol();
    Term sys = creol::parse(testing_support::slurp(testing_support::corpus() / "creol" / "call_protocol.creol"));
    auto g = explore(*lang, sys, 200);
    EXPECT_EQ(g.states.size(), 32u);
    EXPECT_EQ(g.edges.size(), 47u);
    ASSERT_EQ(g.terminal.size(), 1u);
    EXPECT_EQ(g.terminal.begin()->second, RunStatus::Terminated);
}

TEST(Oracle, RunsWithSingleHeap) {
    auto t = oracle_run(proteus::parse("var x := 2; fun f(n) { x := x * n }; f 5; record r { a = x }"));
    EXPECT_FALSE(t.stuck);
    const Heap& h = t.heaps.back();
    EXPECT_EQ(h.at("x").content, nat(10));
    EXPECT_EQ(h.at("f").sort, HeapCell::Sort::Fun);
    EXPECT_EQ(h.at("r").sort, HeapCell::Sort::Rec);
    EXPECT_EQ(t.terms.size(), t.heaps.size());
}

TEST(Oracle, ConsumesPendingOnUpdate) {
    Heap pending{{"x", {HeapCell::Sort::Var, nat(9)}}};
    auto t = oracle_run(proteus::parse("var x := 1; update{v: x}; var y := x"), pending);
    EXPECT_EQ(t.heaps.back().at("y").content, nat(9));
}

TEST(Oracle, SortClashRejected) {
    EXPECT_THROW(check_disjoint(proteus::parse("var f := 1; fun f(x) { skip }")), InvalidProgram);
}

TEST(Oracle, StuckProgramReported) {
    auto t = oracle_run(proteus::parse("var y := x"));
    EXPECT_TRUE(t.stuck);
}

TEST(HeapConformance, CorpusAgrees) {
    for (const auto& f : testing_support::corpus_files("proteus", ".prot")) {
        Term prog = proteus::parse(testing_support::slurp(f));
        auto sched = testing_support::schedule_for(f, proteus::signature());
        for (bool all : {false, true}) {
            auto v = heap_conformance(prog, sched, all);
            EXPECT_TRUE(v.pass) << f << ": " << v.detail;
        }
    }
}

TEST(Modularity, CorpusUnaffectedByFreshIndex) {
    auto lang = make_proteus();
    for (const auto& f : testing_support::corpus_files("proteus", ".prot")) {
        Term prog = proteus::parse(testing_support::slurp(f));
        auto v = modularity_check(lang, prog, "X", testing_support::schedule_for(f, proteus::signature()), 1);
        EXPECT_TRUE(v.pass) << f << ": " << v.detail;
    }
}

TEST(Modularity, MutatedRulesDetected) {
    auto v = modularity_check(make_proteus(), proteus::parse("var x := 1"), "X", {}, 0, true);
    EXPECT_FALSE(v.pass);
    ASSERT_TRUE(v.witness_step.has_value());
}

TEST(Modularity, ValueProgramPassesTrivially) {
    auto v = modularity_check(make_proteus(), nat(3), "X");
    EXPECT_TRUE(v.pass);
}

TEST(Modularity, ExtendedLanguageKeepsBaseRules) {
    auto ext = extend_language(make_proteus(), "X");
    EXPECT_TRUE(ext->signature().contains("X"));
    EXPECT_THROW(extend_language(make_proteus(), "S"), DuplicateIndex);
}

TEST(Schedule, JsonRoundTrip) {
    const auto& sig = creol::signature();
    auto j = nlohmann::json::parse(testing_support::slurp(testing_support::corpus() / "schedules" / "temperature.json"));
    auto s = parse_schedule(j, sig);
    EXPECT_EQ(parse_schedule(schedule_to_json(s, sig), sig).size(), s.size());
    EXPECT_THROW(parse_schedule(nlohmann::json::parse(R"([{"trigger":"immediate","index":"S","payload":{}}])"),
                                proteus::signature()),
                 Error);
}

TEST(Generate, RandomSystemsTerminate) {
    auto lang = make_creol();
    for (std::uint64_t k = 0; k < 30; ++k) {
        gen::Rng rng(k);
        Term sys = gen::creol_system(rng);
        UniformScheduler s(k);
        auto r = run(lang, sys, s);
        EXPECT_EQ(r.status, RunStatus::Terminated) << syntax::render(sys);
        EXPECT_TRUE(audit_messages(r.trace).pass);
        EXPECT_TRUE(audit_frame(r.trace).pass);
    }
}
