// Prints one line per acceptance criterion and exits non-zero when any
// criterion fails or overruns its time limit.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "direct.hpp"
#include "dsos/creol/creol.hpp"
#include "dsos/engine/checks.hpp"
#include "dsos/engine/explore.hpp"
#include "dsos/engine/generate.hpp"
#include "dsos/proteus/proteus.hpp"
#include "dsos/syntax/text.hpp"

using namespace dsos;
using label::Datum;
using syntax::Term;
namespace fs = std::filesystem;

namespace {

// Time limits in milliseconds.
constexpr double kLimitModularity = 5000;
constexpr double kLimitHeap = 5000;
constexpr double kLimitUpdate = 5000;
constexpr double kLimitJumps = 2000;
constexpr double kLimitCommute = 2000;
constexpr double kLimitConfluence = 10000;
constexpr double kLimitAudits = 10000;
constexpr double kLimitTemperature = 2000;
constexpr double kLimitClassUpgrade = 2000;

// Sample counts.
constexpr std::size_t kMinCorpus = 30;
constexpr std::size_t kUpdateTriples = 120;
constexpr std::size_t kJumpTuples = 500;
constexpr std::size_t kCommuteSnapshots = 200;
constexpr std::size_t kConfluenceSeeds = 25;
constexpr std::size_t kAuditRuns = 50;
constexpr std::size_t kClassTuples = 50;

// Recorded reachable state count of the call protocol system.
constexpr std::size_t kCallProtocolStates = 32;

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

const fs::path kCorpus = DSOS_CORPUS_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> files(const std::string& sub, const std::string& ext) {
    std::vector<fs::path> out;
    for (const auto& f : fs::directory_iterator(kCorpus / sub)) {
        if (f.path().extension() == ext) out.push_back(f.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

engine::UpgradeSchedule schedule_for(const fs::path& program, const label::LabelSignature& sig) {
    const auto p = kCorpus / "schedules" / (program.stem().string() + ".json");
    if (!fs::exists(p)) return {};
    return engine::parse_schedule(nlohmann::json::parse(slurp(p)), sig);
}

oracle::Table to_table(const Datum& d) {
    oracle::Table t;
    for (const auto& [k, v] : d.as_map()) t.emplace(k, syntax::render(v.as_term()));
    return t;
}

// 1. Extending the signature by a fresh read-write index changes nothing.
Outcome modularity() {
    auto lang = engine::make_proteus();
    const auto progs = files("proteus", ".prot");
    if (progs.size() < kMinCorpus) return fail("corpus has only " + std::to_string(progs.size()) + " programs");
    std::size_t steps = 0;
    for (const auto& f : progs) {
        auto v = engine::modularity_check(lang, proteus::parse(slurp(f)), "X", schedule_for(f, proteus::signature()));
        if (!v.pass) return fail(f.filename().string() + ": " + v.detail);
        steps += v.checked;
    }
    auto neg = engine::modularity_check(lang, proteus::parse("var x := 1"), "X", {}, 0, true);
    if (neg.pass) return fail("mutated rule pack not detected");
    return {true, std::to_string(progs.size()) + " programs, " + std::to_string(steps) + " entries"};
}

// 2. Modular interpreter against the single-heap interpreter.
Outcome heap() {
    std::size_t steps = 0, n = 0;
    for (const auto& f : files("proteus", ".prot")) {
        const Term prog = proteus::parse(slurp(f));
        const auto sched = schedule_for(f, proteus::signature());
        for (bool all : {false, true}) {
            auto v = engine::heap_conformance(prog, sched, all);
            if (!v.pass) return fail(f.filename().string() + ": " + v.detail);
            steps += v.checked;
        }
        ++n;
    }
    return {true, std::to_string(n) + " programs, " + std::to_string(steps) + " transitions"};
}

// 3. update{v: Δ} mid-run on generated stores.
Outcome update() {
    gen::Rng rng(2024);
    const std::vector<std::string> keys{"x0", "x1", "x2", "x3", "x4"};
    std::size_t fired = 0;
    for (std::size_t i = 0; i < kUpdateTriples; ++i) {
        const Datum rho = gen::store(rng, keys);
        const Datum rho_u = gen::store(rng, keys);
        std::vector<std::string> dom;
        for (const auto& [k, _] : rho.as_map()) dom.push_back(k);
        for (const auto& [k, _] : rho_u.as_map()) dom.push_back(k);
        const uts::Delta delta = gen::delta(rng, dom);
        const Term prog = gen::update_program(rho, delta);
        const engine::UpgradeSchedule sched{{engine::ScheduledUpgrade::Trigger::Immediate, 0, "U_S", rho_u}};
        for (bool all : {false, true}) {
            auto v = engine::heap_conformance(prog, sched, all);
            if (!v.pass) return fail("triple " + std::to_string(i) + ": " + v.detail);
            engine::FirstScheduler first;
            auto r = engine::run(engine::make_proteus({.consume_all = all}), prog, first, sched);
            if (r.status != engine::RunStatus::Terminated) return fail("triple " + std::to_string(i) + " did not terminate");
            for (const auto& e : r.trace) {
                if (e.kind != engine::TraceEntry::Kind::Jump) continue;
                ++fired;
                auto want = oracle::table_update({delta.begin(), delta.end()}, to_table(e.before.at("S")),
                                                 to_table(e.before.at("U_S")), all);
                if (to_table(e.after.at("S")) != want.rho || to_table(e.after.at("U_S")) != want.rho_u) {
                    return fail("triple " + std::to_string(i) + ": store after jump differs");
                }
            }
        }
    }
    return {true, std::to_string(kUpdateTriples) + " triples x 2 variants, " + std::to_string(fired) + " jumps"};
}

// 4. Every shipped endofunctor is the identity on information-less upgrade data.
Outcome no_sudden_jumps() {
    gen::Rng rng(7);
    const std::vector<std::string> pool{"x0", "x1", "f0", "f1", "r0", "r1", "A", "B", "C"};
    const std::vector<std::pair<const label::LabelSignature*, uts::EndofunctorSpec>> specs{
        {&proteus::signature(), proteus::spec_v()},
        {&proteus::signature(), proteus::spec_f()},
        {&proteus::signature(), proteus::spec_r()},
        {&creol::signature(), creol::spec_c()}};
    std::size_t checked = 0;
    for (const auto& [sig, spec] : specs) {
        const bool creol = spec.name == "E_c";
        std::vector<std::pair<label::Snapshot, uts::Delta>> samples;
        for (std::size_t i = 0; i < kJumpTuples; ++i) {
            samples.emplace_back(creol ? gen::creol_snapshot(rng) : gen::proteus_snapshot(rng), gen::delta(rng, pool));
        }
        auto v = uts::check_no_sudden_jumps(spec, *sig, samples);
        if (!v.pass) return fail(spec.name + " changed information-less data");
        checked += v.checked;
    }
    return {true, "4 endofunctors, " + std::to_string(checked) + " tuples"};
}

// 5. The three Proteus endofunctors commute pairwise.
Outcome commutativity() {
    gen::Rng rng(11);
    const auto& sig = proteus::signature();
    const std::vector<std::string> pool{"x0", "x1", "x2", "x3", "x4", "f0", "f1", "f2", "f3", "r0", "r1", "r2", "r3"};
    const std::vector<uts::EndofunctorSpec> specs{proteus::spec_v(), proteus::spec_f(), proteus::spec_r()};
    std::size_t checked = 0;
    for (std::size_t a = 0; a < specs.size(); ++a) {
        for (std::size_t b = a + 1; b < specs.size(); ++b) {
            for (std::size_t i = 0; i < kCommuteSnapshots; ++i) {
                const auto snap = gen::proteus_snapshot(rng);
                const auto ea = uts::extend_endofunctor(specs[a], sig, gen::delta(rng, pool));
                const auto eb = uts::extend_endofunctor(specs[b], sig, gen::delta(rng, pool));
                if (!(uts::compose_extended(ea, eb)(snap) == uts::compose_extended(eb, ea)(snap))) {
                    return fail(specs[a].name + "/" + specs[b].name + " differ on sample " + std::to_string(i));
                }
                ++checked;
            }
        }
    }
    return {true, "3 pairs, " + std::to_string(checked) + " snapshots"};
}

// 6. One call, one return, one read: a single terminal state.
Outcome confluence() {
    auto lang = engine::make_creol();
    const Term sys = creol::parse(slurp(kCorpus / "creol" / "call_protocol.creol"));
    const auto g = engine::explore(*lang, sys, 500);
    if (g.terminal.size() != 1) return fail(std::to_string(g.terminal.size()) + " terminal states");
    const auto& [id, status] = *g.terminal.begin();
    if (status != engine::RunStatus::Terminated) return fail("terminal state is not terminated");
    if (g.states.size() != kCallProtocolStates) return fail("state count " + std::to_string(g.states.size()));
    const auto again = engine::explore(*lang, sys, 500);
    if (again.states.size() != g.states.size() || again.edges.size() != g.edges.size()) {
        return fail("exploration not reproducible");
    }
    const auto& final_state = g.states[id];
    for (std::uint64_t seed = 0; seed < kConfluenceSeeds; ++seed) {
        engine::UniformScheduler s(seed);
        auto r = engine::run(lang, sys, s);
        if (!(r.final.term == final_state.term) || !(r.final.snapshot == final_state.snapshot)) {
            return fail("seed " + std::to_string(seed) + " reached another state");
        }
    }
    return {true, std::to_string(g.states.size()) + " states, " + std::to_string(g.edges.size()) + " edges, " +
                      std::to_string(kConfluenceSeeds) + " seeds agree"};
}

// 7. Message and future audits on random systems.
Outcome audits() {
    auto lang = engine::make_creol();
    std::size_t steps = 0;
    for (std::uint64_t k = 0; k < kAuditRuns; ++k) {
        gen::Rng rng(1000 + k);
        const Term sys = gen::creol_system(rng, {.max_objects = 4, .max_calls = 3});
        engine::UniformScheduler s(k);
        auto r = engine::run(lang, sys, s);
        if (r.status != engine::RunStatus::Terminated) return fail("run " + std::to_string(k) + " did not terminate");
        for (const auto& v : {engine::audit_messages(r.trace), engine::audit_futures(r.trace),
                              engine::audit_upgrade_numbers(r.trace), engine::audit_frame(r.trace)}) {
            if (!v.pass) return fail("run " + std::to_string(k) + ": " + v.detail);
        }
        steps += r.final.step_count;
    }
    // The yielding server must be flagged on its blocked interleaving.
    const Term hazard = creol::parse(slurp(kCorpus / "hazards" / "yield_server.creol"));
    bool flagged = false;
    for (std::uint64_t seed = 0; seed < 500 && !flagged; ++seed) {
        engine::UniformScheduler s(seed);
        auto r = engine::run(lang, hazard, s);
        flagged = r.status == engine::RunStatus::Blocked && !engine::audit_messages(r.trace).pass;
    }
    if (!flagged) return fail("duplicate completion of the yielding server not flagged");
    return {true, std::to_string(kAuditRuns) + " runs, " + std::to_string(steps) + " transitions"};
}

const Term* find_object(const Term& t, const std::string& o) {
    if (t.is(syntax::TermKind::Object)) return t.name() == o ? &t : nullptr;
    if (t.is(syntax::TermKind::Par)) {
        if (const Term* l = find_object(t.kid(0), o)) return l;
        return find_object(t.kid(1), o);
    }
    return nullptr;
}

// Values handed to `r` by every read of object main, in order.
std::vector<std::string> reads_of_main(const engine::Trace& tr) {
    std::vector<std::string> out;
    for (const auto& e : tr) {
        if (e.kind != engine::TraceEntry::Kind::Step || e.rule != "read" || e.actor != "main") continue;
        const Term* obj = find_object(e.term_after, "main");
        if (!obj) continue;
        auto [ev, redex] = creol::decompose(obj->kid(0));
        if (redex.is(syntax::TermKind::Assign) && redex.name() == "r") out.push_back(syntax::render(redex.kid(0)));
    }
    return out;
}

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return "[" + s + "]";
}

// 8. Logging upgrade of a running thermometer, and its guarded variant.
Outcome temperature() {
    auto lang = engine::make_creol();
    auto run_file = [&](const char* name) {
        const auto f = kCorpus / "creol" / name;
        const Term sys = creol::parse(slurp(f));
        engine::FirstScheduler s;
        return engine::run(lang, sys, s, schedule_for(f, creol::signature()));
    };

    const auto up = run_file("temperature.creol");
    if (up.status != engine::RunStatus::Terminated) return fail("upgrade run " + std::string(engine::to_string(up.status)));
    const std::vector<std::string> golden{"nil", "20", "nil", "nil", "42", "12"};
    if (reads_of_main(up.trace) != golden) return fail("reads " + joined(reads_of_main(up.trace)));
    std::size_t jumps = 0, refreshed = 0;
    for (const auto& e : up.trace) {
        jumps += e.kind == engine::TraceEntry::Kind::Jump;
        refreshed += e.kind == engine::TraceEntry::Kind::Refresh;
    }
    if (jumps != 1 || refreshed != 1) return fail("expected one jump and one refresh");
    if (*up.final.snapshot.at("UN").lookup("TEMP") != Datum::nat(1)) return fail("TEMP version not bumped");

    const auto guarded = run_file("temperature_guard.creol");
    if (guarded.status != engine::RunStatus::Terminated) return fail("guarded run did not terminate");
    const std::vector<std::string> golden_guard{"nil", "20", "nil", "nil", "12"};
    if (reads_of_main(guarded.trace) != golden_guard) return fail("guarded reads " + joined(reads_of_main(guarded.trace)));
    for (const auto& e : guarded.trace) {
        if (e.kind != engine::TraceEntry::Kind::Jump) continue;
        for (const char* idx : {"C", "A", "UN", "UC", "UA", "UD", "E"}) {
            if (!(e.before.at(idx) == e.after.at(idx))) return fail(std::string("guarded jump changed ") + idx);
        }
    }
    return {true, "reads " + joined(golden) + ", guarded " + joined(golden_guard)};
}

std::map<std::string, oracle::Methods> class_map(const Datum& d) {
    std::map<std::string, oracle::Methods> out;
    for (const auto& [c, ms] : d.as_map()) {
        auto& row = out[c];
        for (const auto& [m, body] : ms.as_map()) row.emplace(m, syntax::render(body.as_term()));
    }
    return out;
}

oracle::Versions versions(const Datum& d) {
    oracle::Versions out;
    for (const auto& [c, n] : d.as_map()) out.emplace(c, n.as_nat());
    return out;
}

oracle::ClassState to_oracle(const creol::ClassTables& t) {
    oracle::ClassState s{class_map(t.c), to_table(t.a), versions(t.un), class_map(t.uc), to_table(t.ua), {}};
    for (const auto& [c, deps] : t.ud.as_map()) s.ud.emplace(c, versions(deps));
    return s;
}

// 9. Class upgrade examples plus generated tuples against the direct transcription.
Outcome class_upgrade() {
    auto code = [](const char* s) { return Datum::term(syntax::parse_term(s)); };
    const Datum empty = Datum::map();

    // all upgrade maps empty
    const creol::ClassTables idle{Datum::map({{"C", Datum::map({{"m", code("lambda(x) { return x }")}})}}), empty,
                                  Datum::map({{"C", Datum::nat(0)}}), empty, empty, empty};
    if (!(creol::E_c({"C"}, idle) == idle)) return fail("empty upgrade maps changed the state");

    // method replaced, others kept
    const creol::ClassTables in{
        Datum::map({{"C", Datum::map({{"m", code("lambda(x) { return x }")}, {"k", code("lambda(x) { return 0 }")}})}}),
        empty, Datum::map({{"C", Datum::nat(0)}}),
        Datum::map({{"C", Datum::map({{"m", code("lambda(x) { return x + 1 }")}})}}), empty, empty};
    const auto out = creol::E_c({"C"}, in);
    const creol::ClassTables want{
        Datum::map({{"C", Datum::map({{"m", code("lambda(x) { return x + 1 }")}, {"k", code("lambda(x) { return 0 }")}})}}),
        empty, Datum::map({{"C", Datum::nat(1)}}), empty, empty, empty};
    if (!(out == want)) return fail("method replacement example");

    // unmet dependency
    const creol::ClassTables guarded{empty, empty, Datum::map({{"D", Datum::nat(1)}}),
                                     Datum::map({{"C", Datum::map({{"m", code("lambda(x) { skip }")}})}}), empty,
                                     Datum::map({{"C", Datum::map({{"D", Datum::nat(2)}})}})};
    if (!(creol::E_c({"C"}, guarded) == guarded)) return fail("unmet dependency example");

    for (const auto* t : {&idle, &in, &guarded}) {
        if (to_oracle(creol::E_c({"C"}, *t)) != oracle::class_upgrade({"C"}, to_oracle(*t))) {
            return fail("transcription disagrees on an example");
        }
    }

    gen::Rng rng(99);
    for (std::size_t i = 0; i < kClassTuples; ++i) {
        const auto tuple = gen::class_tables(rng);
        const auto d = gen::delta(rng, {"A", "B", "C"});
        if (to_oracle(creol::E_c(d, tuple)) != oracle::class_upgrade({d.begin(), d.end()}, to_oracle(tuple))) {
            return fail("generated tuple " + std::to_string(i));
        }
    }
    return {true, "3 examples, " + std::to_string(kClassTuples) + " generated tuples"};
}

}  // namespace

int main() {
    const std::vector<std::tuple<int, const char*, double, std::function<Outcome()>>> criteria{
        {1, "modularity under a fresh index", kLimitModularity, modularity},
        {2, "heap conformance", kLimitHeap, heap},
        {3, "update conformance", kLimitUpdate, update},
        {4, "no sudden jumps", kLimitJumps, no_sudden_jumps},
        {5, "disjoint updates commute", kLimitCommute, commutativity},
        {6, "call protocol confluence", kLimitConfluence, confluence},
        {7, "message and future audits", kLimitAudits, audits},
        {8, "temperature logger upgrade", kLimitTemperature, temperature},
        {9, "class upgrade", kLimitClassUpgrade, class_upgrade},
    };
    int failures = 0;
    for (const auto& [n, name, limit, body] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && ms > limit) o = fail("took " + std::to_string(ms) + " ms");
        failures += o.pass ? 0 : 1;
        std::printf("criterion %d %-32s %s  %8.1f ms / %6.0f ms  %s\n", n, name, o.pass ? "PASS" : "FAIL", ms, limit,
                    o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
