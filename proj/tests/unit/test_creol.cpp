#include <gtest/gtest.h>

#include "direct.hpp"
#include "dsos/creol/creol.hpp"
#include "dsos/engine/checks.hpp"
#include "dsos/engine/explore.hpp"
#include "dsos/engine/generate.hpp"
#include "dsos/error.hpp"
#include "dsos/syntax/text.hpp"
#include "helpers.hpp"

using namespace dsos;
using namespace dsos::syntax;
using label::Datum;

namespace {

std::map<std::string, oracle::Methods> class_map(const Datum& d) {
    std::map<std::string, oracle::Methods> out;
    for (const auto& [c, ms] : d.as_map()) {
        auto& row = out[c];
        for (const auto& [m, body] : ms.as_map()) row.emplace(m, render(body.as_term()));
    }
    return out;
}

std::map<std::string, std::string> attr_map(const Datum& d) {
    std::map<std::string, std::string> out;
    for (const auto& [c, t] : d.as_map()) out.emplace(c, render(t.as_term()));
    return out;
}

oracle::Versions versions(const Datum& d) {
    oracle::Versions out;
    for (const auto& [c, n] : d.as_map()) out.emplace(c, n.as_nat());
    return out;
}

oracle::ClassState to_oracle(const creol::ClassTables& t) {
    oracle::ClassState s{class_map(t.c), attr_map(t.a), versions(t.un), class_map(t.uc), attr_map(t.ua), {}};
    for (const auto& [c, deps] : t.ud.as_map()) s.ud.emplace(c, versions(deps));
    return s;
}

Datum nats(std::initializer_list<std::pair<const char*, std::uint64_t>> kv) {
    label::DatumMap m;
    for (auto [k, v] : kv) m.emplace(k, Datum::nat(v));
    return Datum::map(std::move(m));
}

Datum methods(std::initializer_list<std::pair<const char*, const char*>> kv) {
    label::DatumMap m;
    for (auto [k, v] : kv) m.emplace(k, Datum::term(parse_term(v)));
    return Datum::map(std::move(m));
}

Term load(const char* name) {
    return creol::parse(testing_support::slurp(testing_support::corpus() / "creol" / name));
}

}  // namespace

TEST(Decompose, FindsLeftmostRedex) {
    Term s = parse_term("x := 1; skip; y := 2");
    auto [ev, r] = creol::decompose(s);
    EXPECT_EQ(r, assign("x", nat(1)));
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(creol::plug(ev, r), s);
}

TEST(Decompose, NestedSequenceOnTheLeft) {
    Term s = seq(seq(seq(yield(), skip()), skip()), assign("x", nat(0)));
    auto [ev, r] = creol::decompose(s);
    EXPECT_EQ(r, yield());
    EXPECT_EQ(ev.size(), 3u);
    EXPECT_EQ(creol::plug(ev, r), s);
}

TEST(Decompose, UniqueOnGeneratedBodies) {
    gen::Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        Term sys = gen::creol_system(rng);
        for (const Term* t = &sys;;) {
            const Term& obj = t->is(TermKind::Par) ? t->kid(0) : *t;
            Term body = obj.kid(0);
            if (!body.is_value()) {
                auto [ev, r] = creol::decompose(body);
                EXPECT_EQ(creol::plug(ev, r), body);
                EXPECT_FALSE(r.is(TermKind::Seq) && !r.kid(0).is_value());
            }
            if (!t->is(TermKind::Par)) break;
            t = &t->kid(1);
        }
    }
}

TEST(StepSystem, OneCandidatePerReadyObject) {
    Term sys = load("call_protocol.creol");
    auto res = creol::step_system(sys, creol::initial_snapshot(sys));
    ASSERT_EQ(res.transitions.size(), 2u);
    std::set<std::string> actors;
    for (const auto& t : res.transitions) actors.insert(t.actor);
    EXPECT_EQ(actors, (std::set<std::string>{"client", "server"}));
    EXPECT_TRUE(res.stuck.empty());
}

TEST(StepSystem, NonIntAddsCombinedStep) {
    Term sys = load("call_protocol.creol");
    auto res = creol::step_system(sys, creol::initial_snapshot(sys), {.non_int = true});
    ASSERT_EQ(res.transitions.size(), 3u);
    EXPECT_EQ(res.transitions.back().rule, "non-int");
    EXPECT_EQ(res.transitions.back().actor, "client,server");
}

TEST(StepSystem, ReadWithoutCompletionBlocks) {
    Term sys = load("blocked_reader.creol");
    auto lang = engine::make_creol();
    engine::FirstScheduler s;
    auto r = engine::run(lang, sys, s);
    EXPECT_EQ(r.status, engine::RunStatus::Blocked);
}

TEST(StepSystem, ReturnOutsideMethodIsStuck) {
    Term sys = creol::parse("object a { return 1 }");
    auto res = creol::step_system(sys, creol::initial_snapshot(sys));
    EXPECT_TRUE(res.transitions.empty());
    ASSERT_EQ(res.stuck.size(), 1u);
    EXPECT_EQ(res.stuck[0].first, "a");
}

TEST(DepCheck, Examples) {
    EXPECT_TRUE(creol::dep_check(Datum::map(), nats({{"A", 0}})));
    EXPECT_TRUE(creol::dep_check(Datum::map(), Datum::map()));
    EXPECT_TRUE(creol::dep_check(nats({{"C", 2}}), nats({{"C", 3}, {"D", 1}})));
    EXPECT_FALSE(creol::dep_check(nats({{"C", 2}}), nats({{"D", 5}})));
    EXPECT_FALSE(creol::dep_check(nats({{"C", 2}}), nats({{"C", 1}})));
}

TEST(ClassUpgrade, MergesMethodsAndBumpsVersion) {
    creol::ClassTables in{Datum::map({{"A", methods({{"m", "lambda(x) { return x }"}, {"n", "lambda(x) { return 0 }"}})}}),
                          Datum::map(),
                          nats({{"A", 0}}),
                          Datum::map({{"A", methods({{"m", "lambda(x) { return x + 1 }"}})}}),
                          Datum::map(),
                          Datum::map()};
    auto out = creol::E_c({"A"}, in);
    EXPECT_EQ(out.c, Datum::map({{"A", methods({{"m", "lambda(x) { return x + 1 }"}, {"n", "lambda(x) { return 0 }"}})}}));
    EXPECT_EQ(out.un, nats({{"A", 1}}));
    EXPECT_EQ(out.uc, Datum::map());
    EXPECT_EQ(to_oracle(out), oracle::class_upgrade({"A"}, to_oracle(in)));
}

TEST(ClassUpgrade, UnmetDependencyBlocksWholeUpgrade) {
    creol::ClassTables in{Datum::map(),
                          Datum::map(),
                          nats({{"B", 0}}),
                          Datum::map({{"A", methods({{"m", "lambda(x) { skip }"}})}}),
                          Datum::map({{"A", Datum::term(parse_term("var a := 0"))}}),
                          Datum::map({{"A", nats({{"B", 1}})}})};
    EXPECT_EQ(creol::E_c({"A"}, in), in);
    EXPECT_EQ(to_oracle(in), oracle::class_upgrade({"A"}, to_oracle(in)));
}

TEST(ClassUpgrade, AttributesOnlyAndAbsentVersion) {
    creol::ClassTables in{Datum::map(), Datum::map(), Datum::map(), Datum::map(),
                          Datum::map({{"A", Datum::term(parse_term("var a := 1; var b := 2"))}}),
                          Datum::map({{"A", nats({})}})};
    auto out = creol::E_c({"A", "Z"}, in);
    EXPECT_EQ(out.a, in.ua);
    EXPECT_EQ(out.un, nats({{"A", 1}}));
    EXPECT_EQ(out.ua, Datum::map());
    EXPECT_EQ(out.ud, Datum::map());
    EXPECT_EQ(to_oracle(out), oracle::class_upgrade({"A", "Z"}, to_oracle(in)));
}

TEST(ClassUpgrade, AgreesWithDirectTranscription) {
    gen::Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        auto in = gen::class_tables(rng);
        auto d = gen::delta(rng, {"A", "B", "C"});
        EXPECT_EQ(to_oracle(creol::E_c(d, in)), oracle::class_upgrade({d.begin(), d.end()}, to_oracle(in)));
    }
}

TEST(Refresh, BringsObjectToClassVersion) {
    auto snap = creol::signature().bottom_snapshot();
    label::Snapshot local = creol::inner_signature().bottom_snapshot();
    local["CN"] = Datum::atom("A");
    local["V"] = Datum::nat(0);
    local["S"] = Datum::map({{"a", Datum::term(nat(5))}});
    snap["E"] = Datum::map({{"o_0", Datum::map(local)}});
    snap["UN"] = nats({{"A", 1}});
    snap["A"] = Datum::map({{"A", Datum::term(parse_term("var a := 0; var b := 0"))}});
    auto out = creol::refresh_objects(snap);
    ASSERT_TRUE(out.has_value());
    const auto& o = out->at("E").lookup("o_0")->as_map();
    EXPECT_EQ(o.at("V"), Datum::nat(1));
    EXPECT_EQ(o.at("S"), Datum::map({{"a", Datum::term(nat(5))}, {"b", Datum::term(nil())}}));
    EXPECT_FALSE(creol::refresh_objects(*out).has_value());
}

TEST(Refresh, StaticObjectsUntouched) {
    Term sys = load("threads.creol");
    EXPECT_FALSE(creol::refresh_objects(creol::initial_snapshot(sys)).has_value());
}

TEST(Parse, ResolvesStaticObjectNames) {
    Term sys = creol::parse("object a { call m(1) of b in t } || object b { method m(x) { return x } }");
    const Term& body = sys.kid(0).kid(0);
    ASSERT_TRUE(body.is(TermKind::Call));
    EXPECT_EQ(body.kid(1), obj_ref("b"));
}

TEST(Parse, RejectsBadSystems) {
    EXPECT_THROW(creol::parse("object a { skip } || object a { skip }"), InvalidProgram);
    EXPECT_THROW(creol::parse("object o_1 { skip }"), InvalidProgram);
    EXPECT_THROW(creol::parse("object a { print 1 }"), InvalidProgram);
    EXPECT_THROW(creol::parse("skip"), InvalidProgram);
}

// Steps of one object never move another existing object.
TEST(FrameProperty, RandomSystems) {
    auto lang = engine::make_creol();
    std::size_t checked = 0;
    for (std::uint64_t k = 0; k < 40; ++k) {
        gen::Rng rng(k);
        Term sys = gen::creol_system(rng);
        engine::UniformScheduler s(k);
        auto r = engine::run(lang, sys, s);
        EXPECT_EQ(r.status, engine::RunStatus::Terminated) << render(sys);
        for (const auto& e : r.trace) {
            if (e.kind != engine::TraceEntry::Kind::Step) continue;
            auto it = e.label.entries.find("E");
            if (it == e.label.entries.end()) continue;
            const auto& loc = std::get<label::Localized>(it->second);
            for (const auto& [o, step] : loc.eta->per_object) {
                if (std::holds_alternative<label::Morphism>(step)) EXPECT_EQ(o, e.actor) << e.rule;
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 100u);
}

// The yielding server answers one future twice on some interleaving; the
// message audit must flag exactly those runs.
TEST(Hazard, MessageAuditCatchesDuplicateCompletion) {
    Term sys = creol::parse(testing_support::slurp(testing_support::corpus() / "hazards" / "yield_server.creol"));
    auto lang = engine::make_creol();
    auto g = engine::explore(*lang, sys, 500);
    EXPECT_EQ(g.terminal_states(engine::RunStatus::Blocked).size(), 1u);
    std::size_t flagged = 0, clean = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        engine::UniformScheduler s(seed);
        auto r = engine::run(lang, sys, s);
        const bool ok = engine::audit_messages(r.trace).pass;
        if (r.status == engine::RunStatus::Blocked) {
            EXPECT_FALSE(ok) << "seed " << seed;
            ++flagged;
        } else {
            EXPECT_TRUE(ok) << "seed " << seed;
            ++clean;
        }
    }
    EXPECT_GT(flagged, 0u);
    EXPECT_GT(clean, 0u);
}
