#include "dsos/engine/generate.hpp"

#include <sstream>

#include "dsos/proteus/proteus.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::gen {

using label::Datum;
using label::DatumMap;
using syntax::BinaryOp;
using syntax::Term;

namespace {

const std::vector<std::string> kClasses{"A", "B", "C"};
const std::vector<std::string> kMethods{"m", "n", "k"};
const std::vector<std::string> kAttrs{"a", "b", "log"};

Term small_body(Rng& rng) {
    const auto k = syntax::nat(below(rng, 10));
    switch (below(rng, 3)) {
        case 0: return syntax::binop(BinaryOp::Add, syntax::var_ref("x"), k);
        case 1: return syntax::binop(BinaryOp::Mul, syntax::var_ref("x"), k);
        default: return k;
    }
}

Datum method_table(Rng& rng) {
    return map_over(rng, kMethods, [](Rng& r) {
        return Datum::term(syntax::lambda("x", syntax::return_(small_body(r))));
    });
}

Datum attr_table(Rng& rng) {
    return map_over(rng, kClasses, [](Rng& r) {
        Term attrs = syntax::nil();
        for (auto it = kAttrs.rbegin(); it != kAttrs.rend(); ++it) {
            if (!below(r, 2)) continue;
            Term decl = syntax::var_decl(*it, value(r));
            attrs = attrs.is_nil() ? decl : syntax::seq(decl, attrs);
        }
        return Datum::term(attrs);
    });
}

Datum nat_map(Rng& rng, std::size_t bound) {
    return map_over(rng, kClasses, [bound](Rng& r) { return Datum::nat(below(r, bound)); });
}

std::vector<std::string> keys(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

}  // namespace

std::size_t below(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Term value(Rng& rng) {
    switch (below(rng, 5)) {
        case 0: return syntax::nil();
        case 1: return syntax::boolean(below(rng, 2) == 1);
        default: return syntax::nat(below(rng, 100));
    }
}

uts::Delta delta(Rng& rng, const std::vector<std::string>& pool) {
    uts::Delta d;
    for (const auto& x : pool) {
        if (below(rng, 2)) d.insert(x);
    }
    return d;
}

Datum store(Rng& rng, const std::vector<std::string>& ks) {
    return map_over(rng, ks, [](Rng& r) { return Datum::term(value(r)); });
}

Datum fun_table(Rng& rng, const std::vector<std::string>& ks) {
    return map_over(rng, ks, [](Rng& r) {
        return Datum::term(syntax::lambda("x", syntax::var_decl("y", small_body(r))));
    });
}

Datum rec_table(Rng& rng, const std::vector<std::string>& ks) {
    return map_over(rng, ks, [](Rng& r) {
        std::vector<std::pair<std::string, Term>> fields;
        fields.emplace_back("l", value(r));
        if (below(r, 2)) fields.emplace_back("w", syntax::binop(BinaryOp::Add, syntax::nat(1), value(r)));
        return Datum::term(syntax::record_lit(std::move(fields)));
    });
}

label::Snapshot proteus_snapshot(Rng& rng) {
    label::Snapshot s = proteus::signature().bottom_snapshot();
    const auto vars = keys("x", 5);
    const auto funs = keys("f", 4);
    const auto recs = keys("r", 4);
    s["S"] = store(rng, vars);
    s["F"] = fun_table(rng, funs);
    s["R"] = rec_table(rng, recs);
    s["U_S"] = store(rng, vars);
    s["U_F"] = fun_table(rng, funs);
    s["U_R"] = rec_table(rng, recs);
    return s;
}

creol::ClassTables class_tables(Rng& rng) {
    creol::ClassTables t;
    t.c = map_over(rng, kClasses, method_table);
    t.a = attr_table(rng);
    t.un = nat_map(rng, 4);
    t.uc = map_over(rng, kClasses, method_table);
    t.ua = attr_table(rng);
    t.ud = map_over(rng, kClasses, [](Rng& r) { return nat_map(r, 4); });
    return t;
}

label::Snapshot creol_snapshot(Rng& rng) {
    label::Snapshot s = creol::signature().bottom_snapshot();
    auto t = class_tables(rng);
    s["C"] = t.c;
    s["A"] = t.a;
    s["UN"] = t.un;
    s["UC"] = t.uc;
    s["UA"] = t.ua;
    s["UD"] = t.ud;
    return s;
}

Term creol_system(Rng& rng, SystemShape shape) {
    const std::size_t n = 2 + below(rng, std::max<std::size_t>(shape.max_objects, 2) - 1);
    const std::size_t calls = 1 + below(rng, std::max<std::size_t>(shape.max_calls, 1));

    // Object i only calls objects j > i, so the last object never waits
    // and every read is eventually answered.
    std::vector<std::vector<std::string>> body(n);
    std::vector<std::size_t> made(n, 0);
    for (std::size_t c = 0; c < calls; ++c) {
        const std::size_t from = below(rng, n - 1);
        const std::size_t to = from + 1 + below(rng, n - from - 1);
        const std::size_t k = made[from]++;
        const std::string m = below(rng, 2) ? "inc" : "dbl";
        std::ostringstream stmt;
        stmt << "call " << m << "(" << below(rng, 20) << ") of w" << to << " in t" << k << "; ";
        if (below(rng, 3) == 0) stmt << "skip; ";
        stmt << "read t" << k << " into r" << k;
        if (below(rng, 4) == 0) {
            body[from].push_back("var r" + std::to_string(k) + " := 0; async { " + stmt.str() + " }");
        } else {
            body[from].push_back("var r" + std::to_string(k) + " := 0; " + stmt.str());
        }
    }

    std::ostringstream out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out << " || ";
        out << "object w" << i << " { method inc(x) { return x + 1 }; method dbl(x) { return x * 2 }";
        for (const auto& s : body[i]) out << "; " << s;
        out << " }";
    }
    return creol::parse(out.str());
}

Term update_program(const Datum& rho, const uts::Delta& delta) {
    std::ostringstream out;
    for (const auto& [x, v] : rho.as_map()) out << "var " << x << " := " << syntax::render(v.as_term()) << "; ";
    out << "var probe := 0; ";
    if (!delta.empty()) {
        out << "update{v: ";
        bool first = true;
        for (const auto& x : delta) {
            out << (first ? "" : ", ") << x;
            first = false;
        }
        out << "}; ";
    }
    std::set<std::string> reads;
    for (const auto& [x, _] : rho.as_map()) reads.insert(x);
    reads.insert(delta.begin(), delta.end());
    for (const auto& x : reads) out << "probe := " << x << "; ";
    out << "skip";
    return proteus::parse(out.str());
}

}  // namespace dsos::gen
