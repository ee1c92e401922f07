#include <filesystem>
#include <fstream>
#include <sstream>

#include <benchmark/benchmark.h>

#include "dsos/creol/creol.hpp"
#include "dsos/engine/explore.hpp"
#include "dsos/engine/generate.hpp"
#include "dsos/proteus/proteus.hpp"
#include "dsos/syntax/text.hpp"

using namespace dsos;

namespace {

std::string slurp(const char* sub, const char* name) {
    std::ifstream in(std::filesystem::path(DSOS_CORPUS_DIR) / sub / name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// var acc := 0; acc := acc + 1; ... (n assignments)
syntax::Term counting_program(std::size_t n) {
    std::string text = "var acc := 0";
    for (std::size_t i = 0; i < n; ++i) text += "; acc := acc + 1";
    return proteus::parse(text);
}

void BM_ParseCreol(benchmark::State& state) {
    const std::string text = slurp("creol", "temperature.creol");
    for (auto _ : state) benchmark::DoNotOptimize(creol::parse(text));
}
BENCHMARK(BM_ParseCreol);

void BM_ProteusStep(benchmark::State& state) {
    const auto prog = proteus::parse("var x := 1; x := x + 2 * x");
    auto snap = proteus::signature().bottom_snapshot();
    for (auto _ : state) benchmark::DoNotOptimize(proteus::step(prog, snap));
}
BENCHMARK(BM_ProteusStep);

void BM_ProteusRun(benchmark::State& state) {
    const auto prog = counting_program(static_cast<std::size_t>(state.range(0)));
    auto lang = engine::make_proteus();
    for (auto _ : state) {
        engine::FirstScheduler s;
        benchmark::DoNotOptimize(engine::run(lang, prog, s));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProteusRun)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_CreolRandomRun(benchmark::State& state) {
    auto lang = engine::make_creol();
    gen::Rng rng(1);
    const auto sys = gen::creol_system(rng);
    for (auto _ : state) {
        engine::UniformScheduler s(3);
        benchmark::DoNotOptimize(engine::run(lang, sys, s));
    }
}
BENCHMARK(BM_CreolRandomRun);

void BM_ExploreCallProtocol(benchmark::State& state) {
    auto lang = engine::make_creol();
    const auto sys = creol::parse(slurp("creol", "call_protocol.creol"));
    for (auto _ : state) benchmark::DoNotOptimize(engine::explore(*lang, sys, 500));
}
BENCHMARK(BM_ExploreCallProtocol);

void BM_ComposeChain(benchmark::State& state) {
    const auto& sig = proteus::signature();
    std::vector<label::Snapshot> snaps{sig.bottom_snapshot()};
    std::vector<label::Morphism> ms;
    for (std::uint64_t i = 0; i < 64; ++i) {
        auto next = snaps.back();
        next["S"] = next["S"].with("x", label::Datum::term(syntax::nat(i)));
        ms.push_back(label::Morphism{{"S", label::Pair{snaps.back().at("S"), next.at("S")}},
                                     {"Out", label::Emit{{label::Datum::term(syntax::nat(i))}}}});
        snaps.push_back(next);
    }
    for (auto _ : state) {
        label::Morphism acc = ms[0];
        for (std::size_t i = 1; i < ms.size(); ++i) acc = label::compose(acc, ms[i], sig, snaps[i]);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_ComposeChain);

void BM_ClassUpgrade(benchmark::State& state) {
    gen::Rng rng(5);
    const auto tables = gen::class_tables(rng);
    for (auto _ : state) benchmark::DoNotOptimize(creol::E_c({"A", "B", "C"}, tables));
}
BENCHMARK(BM_ClassUpgrade);

}  // namespace

BENCHMARK_MAIN();
