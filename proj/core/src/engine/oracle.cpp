#include "dsos/engine/oracle.hpp"

#include <optional>
#include <set>

#include "dsos/error.hpp"

// Deliberately shares no code with the modular interpreter: one heap,
// direct mutation, its own substitution.

namespace dsos::engine {

using syntax::Term;
using K = syntax::TermKind;
using Sort = HeapCell::Sort;

namespace {

Term replace(const Term& t, const std::string& x, const Term& v) {
    if (t.is(K::VarRef)) return t.name() == x ? v : t;
    if (t.is(K::Let)) {
        Term bound = replace(t.kid(0), x, v);
        Term body = t.name() == x ? t.kid(1) : replace(t.kid(1), x, v);
        return syntax::let(t.name(), bound, body);
    }
    if ((t.is(K::FunDecl) || t.is(K::MethodDef)) && t.name(1) == x) return t;
    if (t.is(K::Lambda) && t.name() == x) return t;
    if (t.kids().empty()) return t;
    std::vector<Term> kids;
    for (const auto& k : t.kids()) kids.push_back(replace(k, x, v));
    return Term::make(t.kind(), t.number(), t.names(), kids);
}

struct Fail {
    std::string why;
};

class Machine {
public:
    Heap heap;
    Heap pending;
    bool consume_all = false;

    std::optional<Term> step(const Term& t) {
        switch (t.kind()) {
            case K::Nil:
            case K::Nat:
            case K::Bool:
            case K::ObjRef: return std::nullopt;
            case K::Skip: return syntax::nil();
            case K::Seq:
                if (t.kid(0).is(K::Nil)) return t.kid(1);
                return syntax::seq(must(t.kid(0)), t.kid(1));
            case K::VarRef: return cell(t.name(), Sort::Var).content;
            case K::Let:
                if (value(t.kid(0))) return replace(t.kid(1), t.name(), t.kid(0));
                return syntax::let(t.name(), must(t.kid(0)), t.kid(1));
            case K::VarDecl:
                if (!value(t.kid(0))) return syntax::var_decl(t.name(), must(t.kid(0)));
                if (heap.count(t.name())) throw Fail{"redeclared " + t.name()};
                heap[t.name()] = {Sort::Var, t.kid(0)};
                return syntax::nil();
            case K::Assign:
                if (!value(t.kid(0))) return syntax::assign(t.name(), must(t.kid(0)));
                cell(t.name(), Sort::Var);
                heap[t.name()] = {Sort::Var, t.kid(0)};
                return syntax::nil();
            case K::FunDecl:
                heap[t.name(0)] = {Sort::Fun, syntax::lambda(t.name(1), t.kid(0))};
                return syntax::nil();
            case K::App: {
                if (!value(t.kid(0))) return syntax::app(t.name(), must(t.kid(0)));
                const Term& fn = cell(t.name(), Sort::Fun).content;
                return replace(fn.kid(0), fn.name(), t.kid(0));
            }
            case K::RecDecl:
                if (heap.count(t.name())) throw Fail{"redeclared " + t.name()};
                heap[t.name()] = {Sort::Rec, syntax::record_lit(syntax::record_fields(t))};
                return syntax::nil();
            case K::RecProj: {
                const Term& rec = cell(t.name(0), Sort::Rec).content;
                for (std::size_t i = 0; i < rec.names().size(); ++i) {
                    if (rec.name(i) == t.name(1)) return rec.kid(i);
                }
                throw Fail{"missing field " + t.name(1)};
            }
            case K::If: {
                const Term& c = t.kid(0);
                if (c.is(K::Bool)) return c.as_bool() ? t.kid(1) : t.kid(2);
                Term c2 = must(c);
                if (c2.is(K::Bool)) return c2.as_bool() ? t.kid(1) : t.kid(2);
                return syntax::if_then_else(c2, t.kid(1), t.kid(2));
            }
            case K::BinOp: {
                if (!value(t.kid(0))) return syntax::binop(t.op(), must(t.kid(0)), t.kid(1));
                if (!value(t.kid(1))) return syntax::binop(t.op(), t.kid(0), must(t.kid(1)));
                return arith(t.op(), t.kid(0), t.kid(1));
            }
            case K::Not:
                if (t.kid(0).is(K::Bool)) return syntax::boolean(!t.kid(0).as_bool());
                if (value(t.kid(0))) throw Fail{"not of non-boolean"};
                return syntax::not_(must(t.kid(0)));
            case K::Print:
                if (!value(t.kid(0))) return syntax::print(must(t.kid(0)));
                return syntax::nil();
            case K::UpdateV: upgrade(t.delta(), Sort::Var); return syntax::nil();
            case K::UpdateF: upgrade(t.delta(), Sort::Fun); return syntax::nil();
            case K::UpdateR: upgrade(t.delta(), Sort::Rec); return syntax::nil();
            default: throw Fail{"unsupported construct"};
        }
    }

private:
    static bool value(const Term& t) {
        return t.is(K::Nil) || t.is(K::Nat) || t.is(K::Bool) || t.is(K::ObjRef);
    }

    Term must(const Term& t) {
        auto r = step(t);
        if (!r) throw Fail{"value where a step was required"};
        return *r;
    }

    const HeapCell& cell(const std::string& x, Sort s) {
        auto it = heap.find(x);
        if (it == heap.end() || it->second.sort != s) throw Fail{"unbound " + x};
        return it->second;
    }

    static Term arith(syntax::BinaryOp op, const Term& a, const Term& b) {
        using Op = syntax::BinaryOp;
        if (op == Op::Eq) return syntax::boolean(a == b);
        if (op == Op::Ne) return syntax::boolean(!(a == b));
        if (op == Op::And || op == Op::Or) {
            if (!a.is(K::Bool) || !b.is(K::Bool)) throw Fail{"boolean operator on non-booleans"};
            return syntax::boolean(op == Op::And ? (a.as_bool() && b.as_bool())
                                                 : (a.as_bool() || b.as_bool()));
        }
        if (!a.is(K::Nat) || !b.is(K::Nat)) throw Fail{"arithmetic on non-naturals"};
        const auto x = a.as_nat();
        const auto y = b.as_nat();
        switch (op) {
            case Op::Add: return syntax::nat(x + y);
            case Op::Sub: return syntax::nat(x >= y ? x - y : 0);
            case Op::Mul: return syntax::nat(x * y);
            case Op::Lt: return syntax::boolean(x < y);
            case Op::Le: return syntax::boolean(x <= y);
            default: throw Fail{"bad operator"};
        }
    }

    void upgrade(const std::set<std::string>& delta, Sort s) {
        std::vector<std::string> hits;
        for (const auto& x : delta) {
            auto it = pending.find(x);
            if (it != pending.end() && it->second.sort == s) hits.push_back(x);
        }
        if (hits.empty()) return;
        for (const auto& x : hits) heap[x] = pending.at(x);
        for (auto it = pending.begin(); it != pending.end();) {
            const bool drop = it->second.sort == s && (consume_all || delta.count(it->first));
            it = drop ? pending.erase(it) : std::next(it);
        }
    }
};

void collect_names(const Term& t, std::map<std::string, std::set<Sort>>& uses) {
    switch (t.kind()) {
        case K::VarDecl:
        case K::Assign: uses[t.name()].insert(Sort::Var); break;
        case K::FunDecl:
        case K::App: uses[t.name(0)].insert(Sort::Fun); break;
        case K::RecDecl:
        case K::RecProj: uses[t.name(0)].insert(Sort::Rec); break;
        case K::UpdateV:
            for (const auto& x : t.names()) uses[x].insert(Sort::Var);
            break;
        case K::UpdateF:
            for (const auto& x : t.names()) uses[x].insert(Sort::Fun);
            break;
        case K::UpdateR:
            for (const auto& x : t.names()) uses[x].insert(Sort::Rec);
            break;
        default: break;
    }
    for (const auto& k : t.kids()) collect_names(k, uses);
}

}  // namespace

void check_disjoint(const Term& program) {
    std::map<std::string, std::set<Sort>> uses;
    collect_names(program, uses);
    for (const auto& [name, sorts] : uses) {
        if (sorts.size() > 1) {
            throw InvalidProgram("identifier used for more than one kind of entity: " + name);
        }
    }
}

OracleTrace oracle_run(const Term& program, const Heap& pending, bool consume_all, std::size_t fuel) {
    check_disjoint(program);
    Machine m;
    m.pending = pending;
    m.consume_all = consume_all;
    OracleTrace out;
    out.terms.push_back(program);
    out.heaps.push_back(m.heap);
    Term cur = program;
    for (std::size_t i = 0; i < fuel; ++i) {
        std::optional<Term> next;
        try {
            next = m.step(cur);
        } catch (const Fail& f) {
            out.stuck = true;
            out.reason = f.why;
            break;
        }
        if (!next) break;
        cur = *next;
        out.terms.push_back(cur);
        out.heaps.push_back(m.heap);
    }
    return out;
}

Heap heap_union(const label::Snapshot& snap) {
    Heap h;
    auto add = [&](const char* idx, Sort s) {
        auto it = snap.find(idx);
        if (it == snap.end()) return;
        for (const auto& [k, v] : it->second.as_map()) h[k] = {s, v.as_term()};
    };
    add("S", Sort::Var);
    add("F", Sort::Fun);
    add("R", Sort::Rec);
    return h;
}

}  // namespace dsos::engine
