#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>

#include "commands.hpp"
#include "dsos/creol/creol.hpp"
#include "dsos/engine/checks.hpp"
#include "dsos/engine/generate.hpp"
#include "dsos/error.hpp"
#include "dsos/proteus/proteus.hpp"

#ifndef DSOS_DEFAULT_CORPUS
#define DSOS_DEFAULT_CORPUS "corpus"
#endif

namespace dsos::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Item {
    std::string path;
    std::shared_ptr<const engine::Language> lang;
    syntax::Term program;
    engine::UpgradeSchedule schedule;
};

std::vector<Item> corpus_items(const fs::path& root, const std::string& sub, const std::string& ext,
                               const Invocation& inv) {
    std::vector<fs::path> files;
    if (fs::is_directory(root / sub)) {
        for (const auto& f : fs::directory_iterator(root / sub)) {
            if (f.path().extension() == ext) files.push_back(f.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<Item> out;
    for (const auto& f : files) {
        Invocation one = inv;
        one.program = f.string();
        one.lang.clear();
        const fs::path sched = root / "schedules" / (f.stem().string() + ".json");
        one.schedule = fs::exists(sched) ? sched.string() : "";
        Loaded l = load(one);
        out.push_back({f.string(), l.lang, l.program, l.schedule});
    }
    return out;
}

struct Report {
    std::string property;
    bool pass = true;
    std::size_t checked = 0;
    json witness;
};

Report collect(const std::string& property, const std::vector<std::pair<std::string, engine::CheckVerdict>>& vs) {
    Report r{property, true, 0, nullptr};
    for (const auto& [item, v] : vs) {
        r.checked += v.checked;
        if (!v.pass && r.pass) {
            r.pass = false;
            r.witness = {{"item", item}, {"detail", v.detail}};
            if (v.witness_step) r.witness["step"] = *v.witness_step;
        }
    }
    return r;
}

std::vector<std::pair<std::string, uts::EndofunctorSpec>> shipped_specs(bool mutant) {
    std::vector<std::pair<std::string, uts::EndofunctorSpec>> out{
        {"proteus", proteus::spec_v()}, {"proteus", proteus::spec_f()},
        {"proteus", proteus::spec_r()}, {"creol", creol::spec_c()}};
    if (mutant) {
        // Forgets the store whatever the upgrade data says.
        uts::EndofunctorSpec bad{"E_mutant",
                                 {{"S", label::Namespace::Data}},
                                 {{"U_S", label::Namespace::Upgrade}},
                                 [](const label::Snapshot& in, const uts::Delta&) {
                                     label::Snapshot out = in;
                                     out["S"] = label::Datum::map();
                                     return out;
                                 }};
        out.emplace_back("proteus", std::move(bad));
    }
    return out;
}

Report suite_no_sudden_jumps(const Invocation& inv) {
    Report r{"no-sudden-jumps", true, 0, nullptr};
    gen::Rng rng(inv.seed);
    const std::vector<std::string> pool{"x0", "x1", "x2", "f0", "f1", "r0", "r1", "A", "B", "C"};
    for (const auto& [lang, spec] : shipped_specs(inv.mutant)) {
        const auto& sig = lang == "creol" ? creol::signature() : proteus::signature();
        std::vector<std::pair<label::Snapshot, uts::Delta>> samples;
        for (int i = 0; i < 500; ++i) {
            samples.emplace_back(lang == "creol" ? gen::creol_snapshot(rng) : gen::proteus_snapshot(rng),
                                 gen::delta(rng, pool));
        }
        auto v = uts::check_no_sudden_jumps(spec, sig, samples);
        r.checked += v.checked;
        if (!v.pass && r.pass) {
            r.pass = false;
            json delta = v.witness->second;
            json data = json::object();
            for (const auto& i : spec.data_indexes) {
                data[i.name] = label::datum_to_json(v.witness->first.at(i.name), sig.at(i.name).domain);
            }
            r.witness = {{"endofunctor", spec.name},
                         {"data", data},
                         {"delta", delta}};
        }
    }
    return r;
}

Report suite_commutativity(const Invocation& inv) {
    Report r{"commutativity", true, 0, nullptr};
    gen::Rng rng(inv.seed + 1);
    const auto& sig = proteus::signature();
    const std::vector<std::string> pool{"x0", "x1", "x2", "x3", "x4", "f0", "f1", "f2", "f3", "r0", "r1", "r2", "r3"};
    const std::vector<uts::EndofunctorSpec> specs{proteus::spec_v(), proteus::spec_f(), proteus::spec_r()};
    for (std::size_t a = 0; a < specs.size(); ++a) {
        for (std::size_t b = a + 1; b < specs.size(); ++b) {
            for (int i = 0; i < 200; ++i) {
                const auto snap = gen::proteus_snapshot(rng);
                const auto ea = uts::extend_endofunctor(specs[a], sig, gen::delta(rng, pool));
                const auto eb = uts::extend_endofunctor(specs[b], sig, gen::delta(rng, pool));
                ++r.checked;
                if (!(uts::compose_extended(ea, eb)(snap) == uts::compose_extended(eb, ea)(snap)) && r.pass) {
                    r.pass = false;
                    r.witness = {{"pair", specs[a].name + "/" + specs[b].name},
                                 {"snapshot", label::snapshot_to_json(snap, sig)}};
                }
            }
        }
    }
    return r;
}

}  // namespace

int cmd_check(const Invocation& inv, std::ostream& out) {
    const fs::path root = inv.corpus.empty() ? fs::path(DSOS_DEFAULT_CORPUS) : fs::path(inv.corpus);
    if (!fs::is_directory(root)) throw InputError("no corpus directory: " + root.string());
    const auto prot = corpus_items(root, "proteus", ".prot", inv);
    const auto creo = corpus_items(root, "creol", ".creol", inv);

    const std::vector<std::pair<std::string, std::function<Report()>>> suites{
        {"modularity",
         [&] {
             std::vector<std::pair<std::string, engine::CheckVerdict>> vs;
             for (const auto* set : {&prot, &creo}) {
                 for (const auto& it : *set) {
                     vs.emplace_back(it.path, engine::modularity_check(it.lang, it.program, "X", it.schedule, inv.seed));
                 }
             }
             return collect("modularity", vs);
         }},
        {"no-sudden-jumps", [&] { return suite_no_sudden_jumps(inv); }},
        {"commutativity", [&] { return suite_commutativity(inv); }},
        {"oracle",
         [&] {
             std::vector<std::pair<std::string, engine::CheckVerdict>> vs;
             for (const auto& it : prot) {
                 const bool immediate = std::all_of(it.schedule.begin(), it.schedule.end(), [](const auto& u) {
                     return u.trigger == engine::ScheduledUpgrade::Trigger::Immediate;
                 });
                 if (!immediate) continue;
                 vs.emplace_back(it.path, engine::heap_conformance(it.program, it.schedule, inv.consume_all));
             }
             return collect("oracle", vs);
         }},
        {"audits",
         [&] {
             std::vector<std::pair<std::string, engine::CheckVerdict>> vs;
             auto audit = [&](const std::string& name, const engine::Language& lang, const engine::Trace& tr) {
                 vs.emplace_back(name + " messages", engine::audit_messages(tr));
                 vs.emplace_back(name + " futures", engine::audit_futures(tr));
                 vs.emplace_back(name + " upgrade numbers", engine::audit_upgrade_numbers(tr));
                 vs.emplace_back(name + " chain", engine::audit_chain(lang, tr));
                 vs.emplace_back(name + " frame", engine::audit_frame(tr));
             };
             for (const auto* set : {&prot, &creo}) {
                 for (const auto& it : *set) {
                     engine::UniformScheduler s(inv.seed);
                     audit(it.path, *it.lang, engine::run(it.lang, it.program, s, it.schedule).trace);
                 }
             }
             auto lang = engine::make_creol();
             for (std::uint64_t k = 0; k < 50; ++k) {
                 gen::Rng rng(inv.seed * 1000 + k);
                 const auto sys = gen::creol_system(rng);
                 engine::UniformScheduler s(k);
                 audit("random system " + std::to_string(k), *lang, engine::run(lang, sys, s).trace);
             }
             return collect("audits", vs);
         }},
    };

    bool all = true;
    std::size_t failed = 0;
    for (const auto& [name, suite] : suites) {
        if (!inv.only.empty() && inv.only != name) continue;
        Report r = suite();
        all = all && r.pass;
        failed += r.pass ? 0 : 1;
        if (inv.format == "pretty") {
            out << (r.pass ? "PASS " : "FAIL ") << r.property << " (" << r.checked << " checked)";
            if (!r.pass) out << "\n  witness: " << r.witness.dump();
            out << '\n';
        } else {
            out << json{{"property", r.property}, {"pass", r.pass}, {"checked", r.checked}, {"witness", r.witness}}.dump()
                << '\n';
        }
    }
    if (inv.format != "pretty") out << json{{"summary", {{"pass", all}, {"failed", failed}}}}.dump() << '\n';
    return all ? 0 : 1;
}

}  // namespace dsos::cli
