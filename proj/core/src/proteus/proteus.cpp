#include "dsos/proteus/proteus.hpp"

#include "dsos/error.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::proteus {

using label::ComponentKind;
using label::Datum;
using label::Domain;
using label::Identity;
using label::Morphism;
using label::Namespace;
using label::Pair;
using syntax::BinaryOp;
using syntax::TermKind;

const label::LabelSignature& signature() {
    static const label::LabelSignature sig = [] {
        const Domain store = Domain::map_of(Domain::value());
        const Domain code = Domain::map_of(Domain::code());
        return label::LabelSignature{}
            .extend({"S", Namespace::Data}, ComponentKind::ReadWrite, store)
            .extend({"F", Namespace::Data}, ComponentKind::ReadWrite, code)
            .extend({"R", Namespace::Data}, ComponentKind::ReadWrite, code)
            .extend({"Out", Namespace::Data}, ComponentKind::WriteOnly, Domain::unit(),
                    Domain::value())
            .extend({"U_S", Namespace::Upgrade}, ComponentKind::ReadOnly, store)
            .extend({"U_F", Namespace::Upgrade}, ComponentKind::ReadOnly, code)
            .extend({"U_R", Namespace::Upgrade}, ComponentKind::ReadOnly, code);
    }();
    return sig;
}

Term subst(const Term& s, const Term& v, const std::string& x) {
    switch (s.kind()) {
        case TermKind::VarRef: return s.name() == x ? v : s;
        case TermKind::Nil:
        case TermKind::Nat:
        case TermKind::Bool:
        case TermKind::ObjRef:
        case TermKind::Skip:
        case TermKind::Yield:
        case TermKind::RecProj:
        case TermKind::New:
        case TermKind::Read:
        case TermKind::UpdateV:
        case TermKind::UpdateF:
        case TermKind::UpdateR:
        case TermKind::UpdateC: return s;
        case TermKind::Let:
            return syntax::let(s.name(), subst(s.kid(0), v, x),
                               s.name() == x ? s.kid(1) : subst(s.kid(1), v, x));
        case TermKind::FunDecl:
        case TermKind::MethodDef:
            if (s.name(1) == x) return s;
            break;
        case TermKind::Lambda:
            if (s.name() == x) return s;
            break;
        default: break;
    }
    std::vector<Term> kids;
    kids.reserve(s.kids().size());
    bool changed = false;
    for (const auto& k : s.kids()) {
        kids.push_back(subst(k, v, x));
        changed |= !(kids.back() == k);
    }
    if (!changed) return s;
    return Term::make(s.kind(), s.number(), s.names(), std::move(kids));
}

std::optional<Term> eval_binop(BinaryOp op, const Term& a, const Term& b) {
    const bool nats = a.is(TermKind::Nat) && b.is(TermKind::Nat);
    const bool bools = a.is(TermKind::Bool) && b.is(TermKind::Bool);
    switch (op) {
        case BinaryOp::Add:
            if (nats) return syntax::nat(a.as_nat() + b.as_nat());
            break;
        case BinaryOp::Sub:
            if (nats) return syntax::nat(a.as_nat() > b.as_nat() ? a.as_nat() - b.as_nat() : 0);
            break;
        case BinaryOp::Mul:
            if (nats) return syntax::nat(a.as_nat() * b.as_nat());
            break;
        case BinaryOp::Lt:
            if (nats) return syntax::boolean(a.as_nat() < b.as_nat());
            break;
        case BinaryOp::Le:
            if (nats) return syntax::boolean(a.as_nat() <= b.as_nat());
            break;
        case BinaryOp::Eq: return syntax::boolean(a == b);
        case BinaryOp::Ne: return syntax::boolean(!(a == b));
        case BinaryOp::And:
            if (bools) return syntax::boolean(a.as_bool() && b.as_bool());
            break;
        case BinaryOp::Or:
            if (bools) return syntax::boolean(a.as_bool() || b.as_bool());
            break;
    }
    return std::nullopt;
}

namespace {

const Datum& table(const label::Snapshot& snap, const char* idx) {
    static const Datum empty = Datum::map();
    auto it = snap.find(idx);
    return it == snap.end() ? empty : it->second;
}

Transition with_next(Transition t, Term next, const char* rule) {
    t.next = std::move(next);
    t.rule = rule;
    return t;
}

/// Steps the single premise and rebuilds the conclusion around it.
template <class Rebuild>
std::vector<Transition> congruence(const Term& sub, const label::Snapshot& snap, const char* rule,
                                   Rebuild rebuild) {
    std::vector<Transition> out;
    for (auto& t : step(sub, snap)) {
        Term next = rebuild(t.next);
        out.push_back(with_next(std::move(t), std::move(next), rule));
    }
    return out;
}

std::vector<Transition> one(uts::Label label, Term next, const char* rule) {
    std::vector<Transition> out;
    out.push_back({std::move(label), std::move(next), rule});
    return out;
}

}  // namespace

std::vector<Transition> step(const Term& t, const label::Snapshot& snap) {
    if (t.is_value()) return {};
    switch (t.kind()) {
        case TermKind::Skip: return one(Morphism{}, syntax::nil(), "skip");

        case TermKind::Seq:
            if (t.kid(0).is_nil()) return one(Morphism{}, t.kid(1), "seq-nil");
            return congruence(t.kid(0), snap, "seq",
                              [&](const Term& s1) { return syntax::seq(s1, t.kid(1)); });

        case TermKind::VarRef: {
            const Datum& rho = table(snap, "S");
            const Datum* v = rho.lookup(t.name());
            if (!v) throw Stuck("unbound variable " + t.name());
            return one(Morphism{{"S", Identity{rho}}}, v->as_term(), "var");
        }

        case TermKind::Let:
            if (t.kid(0).is_value()) {
                return one(Morphism{}, subst(t.kid(1), t.kid(0), t.name()), "let");
            }
            return congruence(t.kid(0), snap, "let-ctx", [&](const Term& e) {
                return syntax::let(t.name(), e, t.kid(1));
            });

        case TermKind::VarDecl:
            if (t.kid(0).is_value()) {
                const Datum& rho = table(snap, "S");
                if (rho.contains(t.name())) throw Stuck("variable already declared: " + t.name());
                return one(Morphism{{"S", Pair{rho, rho.with(t.name(), Datum::term(t.kid(0)))}}},
                           syntax::nil(), "vardecl");
            }
            return congruence(t.kid(0), snap, "vardecl-ctx",
                              [&](const Term& e) { return syntax::var_decl(t.name(), e); });

        case TermKind::Assign:
            if (t.kid(0).is_value()) {
                const Datum& rho = table(snap, "S");
                if (!rho.contains(t.name())) throw Stuck("assignment to undeclared " + t.name());
                return one(Morphism{{"S", Pair{rho, rho.with(t.name(), Datum::term(t.kid(0)))}}},
                           syntax::nil(), "assign");
            }
            return congruence(t.kid(0), snap, "assign-ctx",
                              [&](const Term& e) { return syntax::assign(t.name(), e); });

        case TermKind::FunDecl: {
            const Datum& rho = table(snap, "F");
            Datum fn = Datum::term(syntax::lambda(t.name(1), t.kid(0)));
            return one(Morphism{{"F", Pair{rho, rho.with(t.name(0), fn)}}}, syntax::nil(),
                       "fundecl");
        }

        case TermKind::App:
            if (t.kid(0).is_value()) {
                const Datum& rho = table(snap, "F");
                const Datum* fn = rho.lookup(t.name());
                if (!fn) throw Stuck("undeclared function " + t.name());
                const Term& lam = fn->as_term();
                return one(Morphism{{"F", Identity{rho}}}, subst(lam.kid(0), t.kid(0), lam.name()),
                           "funapp");
            }
            return congruence(t.kid(0), snap, "funapp-ctx",
                              [&](const Term& e) { return syntax::app(t.name(), e); });

        case TermKind::RecDecl: {
            const Datum& rho = table(snap, "R");
            if (rho.contains(t.name())) throw Stuck("record already declared: " + t.name());
            Datum rec = Datum::term(syntax::record_lit(syntax::record_fields(t)));
            return one(Morphism{{"R", Pair{rho, rho.with(t.name(), rec)}}}, syntax::nil(),
                       "recdecl");
        }

        case TermKind::RecProj: {
            const Datum& rho = table(snap, "R");
            const Datum* rec = rho.lookup(t.name(0));
            if (!rec) throw Stuck("undeclared record " + t.name(0));
            for (const auto& [l, e] : syntax::record_fields(rec->as_term())) {
                if (l == t.name(1)) return one(Morphism{{"R", Identity{rho}}}, e, "recproj");
            }
            throw Stuck("record " + t.name(0) + " has no field " + t.name(1));
        }

        case TermKind::If: {
            const Term& c = t.kid(0);
            if (c.is(TermKind::Bool)) {
                return one(Morphism{}, c.as_bool() ? t.kid(1) : t.kid(2), "if-value");
            }
            if (c.is_value()) throw Stuck("non-boolean condition");
            std::vector<Transition> out;
            for (auto& tr : step(c, snap)) {
                if (tr.next.is(TermKind::Bool)) {
                    const bool taken = tr.next.as_bool();
                    Term branch = taken ? t.kid(1) : t.kid(2);
                    out.push_back(with_next(std::move(tr), std::move(branch),
                                            taken ? "if-true" : "if-false"));
                } else {
                    Term next = syntax::if_then_else(tr.next, t.kid(1), t.kid(2));
                    out.push_back(with_next(std::move(tr), std::move(next), "if-ctx"));
                }
            }
            return out;
        }

        case TermKind::BinOp: {
            const Term& a = t.kid(0);
            const Term& b = t.kid(1);
            if (!a.is_value()) {
                return congruence(a, snap, "binop-left",
                                  [&](const Term& e) { return syntax::binop(t.op(), e, b); });
            }
            if (!b.is_value()) {
                return congruence(b, snap, "binop-right",
                                  [&](const Term& e) { return syntax::binop(t.op(), a, e); });
            }
            auto r = eval_binop(t.op(), a, b);
            if (!r) throw Stuck("ill-typed operands for " + std::string(syntax::op_symbol(t.op())));
            return one(Morphism{}, *r, "binop");
        }

        case TermKind::Not:
            if (t.kid(0).is(TermKind::Bool)) {
                return one(Morphism{}, syntax::boolean(!t.kid(0).as_bool()), "not");
            }
            if (t.kid(0).is_value()) throw Stuck("non-boolean operand of not");
            return congruence(t.kid(0), snap, "not-ctx",
                              [](const Term& e) { return syntax::not_(e); });

        case TermKind::Print:
            if (t.kid(0).is_value()) {
                return one(Morphism{{"Out", label::Emit{{Datum::term(t.kid(0))}}}}, syntax::nil(),
                           "print");
            }
            return congruence(t.kid(0), snap, "print-ctx",
                              [](const Term& e) { return syntax::print(e); });

        case TermKind::UpdateV: return one(uts::Jump{"E_v", t.delta()}, syntax::nil(), "update-v");
        case TermKind::UpdateF: return one(uts::Jump{"E_f", t.delta()}, syntax::nil(), "update-f");
        case TermKind::UpdateR: return one(uts::Jump{"E_r", t.delta()}, syntax::nil(), "update-r");

        default:
            throw Stuck(std::string("no rule for ") + std::string(syntax::kind_name(t.kind())));
    }
}

std::pair<Datum, Datum> table_update(const uts::Delta& delta, const Datum& rho,
                                     const Datum& rho_u, bool consume_all) {
    bool hit = false;
    Datum out = rho;
    for (const auto& x : delta) {
        if (const Datum* v = rho_u.lookup(x)) {
            out = out.with(x, *v);
            hit = true;
        }
    }
    if (!hit) return {rho, rho_u};
    if (consume_all) return {out, Datum::map()};
    Datum rest = rho_u;
    for (const auto& x : delta) rest = rest.without(x);
    return {out, rest};
}

namespace {

uts::EndofunctorSpec table_spec(const char* name, const char* data, const char* upgrade,
                                bool consume_all) {
    uts::EndofunctorSpec spec;
    spec.name = name;
    spec.data_indexes = {{data, Namespace::Data}};
    spec.upgrade_indexes = {{upgrade, Namespace::Upgrade}};
    spec.apply = [d = std::string(data), u = std::string(upgrade), consume_all](
                     const label::Snapshot& tuple, const uts::Delta& delta) {
        auto [rho, rho_u] = table_update(delta, tuple.at(d), tuple.at(u), consume_all);
        label::Snapshot out = tuple;
        out.insert_or_assign(d, std::move(rho));
        out.insert_or_assign(u, std::move(rho_u));
        return out;
    };
    return spec;
}

}  // namespace

uts::EndofunctorSpec spec_v(bool consume_all) { return table_spec("E_v", "S", "U_S", consume_all); }
uts::EndofunctorSpec spec_f(bool consume_all) { return table_spec("E_f", "F", "U_F", consume_all); }
uts::EndofunctorSpec spec_r(bool consume_all) { return table_spec("E_r", "R", "U_R", consume_all); }

uts::Registry registry(bool consume_all) {
    uts::Registry reg;
    reg.add(spec_v(consume_all)).add(spec_f(consume_all)).add(spec_r(consume_all));
    return reg;
}

void validate(const Term& t) {
    switch (t.kind()) {
        case TermKind::Nil:
        case TermKind::Nat:
        case TermKind::Bool:
        case TermKind::Skip:
        case TermKind::Seq:
        case TermKind::VarRef:
        case TermKind::Let:
        case TermKind::VarDecl:
        case TermKind::Assign:
        case TermKind::FunDecl:
        case TermKind::App:
        case TermKind::RecDecl:
        case TermKind::RecProj:
        case TermKind::If:
        case TermKind::BinOp:
        case TermKind::Not:
        case TermKind::Print:
        case TermKind::UpdateV:
        case TermKind::UpdateF:
        case TermKind::UpdateR: break;
        default:
            throw InvalidProgram("construct not available in Proteus: " +
                                 std::string(syntax::kind_name(t.kind())));
    }
    for (const auto& k : t.kids()) validate(k);
}

Term parse(std::string_view text) {
    Term t = syntax::parse_term(text);
    validate(t);
    return t;
}

std::string render(const Term& t) { return syntax::render(t); }

}  // namespace dsos::proteus
