#include "dsos/creol/creol.hpp"

#include <regex>
#include <set>

#include "dsos/error.hpp"
#include "dsos/proteus/proteus.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::creol {

using label::ComponentKind;
using label::Datum;
using label::Domain;
using label::Identity;
using label::Morphism;
using label::Namespace;
using label::Pair;
using label::Snapshot;
using syntax::TermKind;

const label::LabelSignature& inner_signature() {
    static const label::LabelSignature sig =
        label::LabelSignature{}
            .extend({"S", Namespace::Data}, ComponentKind::ReadWrite,
                    Domain::map_of(Domain::value()))
            .extend({"MD", Namespace::Data}, ComponentKind::ReadWrite,
                    Domain::map_of(Domain::code()))
            .extend({"L", Namespace::Data}, ComponentKind::ReadWrite,
                    Domain::map_of(Domain::natural()))
            .extend({"T", Namespace::Data}, ComponentKind::ReadWrite,
                    Domain::bag_of(Domain::code()))
            .extend({"V", Namespace::Data}, ComponentKind::ReadWrite, Domain::natural())
            .extend({"CN", Namespace::Data}, ComponentKind::ReadOnly, Domain::atom());
    return sig;
}

const label::LabelSignature& signature() {
    static const label::LabelSignature sig = [] {
        const Domain classes = Domain::map_of(Domain::map_of(Domain::code()));
        const Domain attrs = Domain::map_of(Domain::code());
        return label::LabelSignature{}
            .extend({"E", Namespace::Data}, ComponentKind::ReadWrite,
                    Domain::local(inner_signature()))
            .extend({"C", Namespace::Data}, ComponentKind::ReadWrite, classes)
            .extend({"A", Namespace::Data}, ComponentKind::ReadWrite, attrs)
            .extend({"UN", Namespace::Data}, ComponentKind::ReadWrite,
                    Domain::map_of(Domain::natural()))
            .extend({"M", Namespace::Data}, ComponentKind::ReadWrite,
                    Domain::map_of(Domain::bag_of(Domain::code())))
            .extend({"N", Namespace::Data}, ComponentKind::ReadWrite,
                    Domain::map_of(Domain::natural()))
            .extend({"UC", Namespace::Upgrade}, ComponentKind::ReadOnly, classes)
            .extend({"UA", Namespace::Upgrade}, ComponentKind::ReadOnly, attrs)
            .extend({"UD", Namespace::Upgrade}, ComponentKind::ReadOnly,
                    Domain::map_of(Domain::map_of(Domain::natural())));
    }();
    return sig;
}

std::pair<Context, Term> decompose(const Term& s) {
    if (s.is(TermKind::Seq) && !s.kid(0).is_value()) {
        auto [ev, r] = decompose(s.kid(0));
        ev.push_back(s.kid(1));
        return {std::move(ev), std::move(r)};
    }
    return {Context{}, s};
}

Term plug(const Context& ev, const Term& redex) {
    Term t = redex;
    for (const auto& k : ev) t = syntax::seq(std::move(t), k);
    return t;
}

namespace {

const Datum& component(const Snapshot& s, const char* idx) {
    static const Datum empty_map = Datum::map();
    auto it = s.find(idx);
    return it == s.end() ? empty_map : it->second;
}

/// One object-level rule instance, before lifting through (enc).
struct ObjStep {
    Morphism inner;
    Morphism global;
    Term next;
    std::string rule;
    std::optional<uts::Jump> jump;
    std::optional<std::pair<std::string, Snapshot>> spawn;
    Term spawn_stmt;
};

struct Ctx {
    const std::string& o;
    const Snapshot& local;
    const Snapshot& global;

    const Datum& S() const { return component(local, "S"); }
};

ObjStep plain(Term next, const char* rule) {
    ObjStep s;
    s.next = std::move(next);
    s.rule = rule;
    return s;
}

struct Blocked {};

/// Deterministic expression step; throws Stuck.
ObjStep expr_step(const Term& e, const Ctx& ctx) {
    switch (e.kind()) {
        case TermKind::VarRef: {
            const Datum* v = ctx.S().lookup(e.name());
            if (!v) throw Stuck("unbound variable " + e.name());
            ObjStep s = plain(v->as_term(), "var");
            s.inner.entries.emplace("S", Identity{ctx.S()});
            return s;
        }
        case TermKind::BinOp: {
            const Term& a = e.kid(0);
            const Term& b = e.kid(1);
            if (!a.is_value()) {
                ObjStep s = expr_step(a, ctx);
                s.next = syntax::binop(e.op(), s.next, b);
                return s;
            }
            if (!b.is_value()) {
                ObjStep s = expr_step(b, ctx);
                s.next = syntax::binop(e.op(), a, s.next);
                return s;
            }
            auto r = proteus::eval_binop(e.op(), a, b);
            if (!r) throw Stuck("ill-typed operands");
            return plain(*r, "binop");
        }
        case TermKind::Not: {
            if (e.kid(0).is(TermKind::Bool)) {
                return plain(syntax::boolean(!e.kid(0).as_bool()), "not");
            }
            if (e.kid(0).is_value()) throw Stuck("non-boolean operand of not");
            ObjStep s = expr_step(e.kid(0), ctx);
            s.next = syntax::not_(s.next);
            return s;
        }
        default:
            throw Stuck(std::string("not an expression: ") + std::string(syntax::kind_name(e.kind())));
    }
}

/// Steps subterm `sub` as an expression and rebuilds the enclosing term.
template <class Rebuild>
ObjStep expr_congruence(const Term& sub, const Ctx& ctx, Rebuild rebuild) {
    ObjStep s = expr_step(sub, ctx);
    s.next = rebuild(s.next);
    return s;
}

/// Method lookup: local definitions first, then the class table through CN.
Term lookup_method(const std::string& m, const Ctx& ctx, ObjStep& s) {
    const Datum& md = component(ctx.local, "MD");
    if (const Datum* def = md.lookup(m)) {
        s.inner.entries.emplace("MD", Identity{md});
        return def->as_term();
    }
    auto cn = ctx.local.find("CN");
    const std::string cls = cn == ctx.local.end() ? "" : cn->second.as_atom();
    const Datum& c = component(ctx.global, "C");
    if (!cls.empty()) {
        if (const Datum* methods = c.lookup(cls)) {
            if (const Datum* def = methods->lookup(m)) {
                s.inner.entries.emplace("CN", Identity{cn->second});
                s.global.entries.emplace("C", Identity{c});
                return def->as_term();
            }
        }
    }
    throw Stuck("method " + m + " not found" + (cls.empty() ? "" : " in class " + cls));
}

ObjStep create_object(const std::string& x, const std::string& cls, bool declare, const Ctx& ctx) {
    const Datum& a = component(ctx.global, "A");
    const Datum* attrs = a.lookup(cls);
    if (!attrs) throw Stuck("undefined class " + cls);
    const Datum& n = component(ctx.global, "N");
    const Datum* counter = n.lookup("object");
    const std::uint64_t k = (counter ? counter->as_nat() : 0) + 1;
    const std::string fresh = "o_" + std::to_string(k);

    const Datum& rho = ctx.S();
    if (declare && rho.contains(x)) throw Stuck("variable already declared: " + x);
    if (!declare && !rho.contains(x)) throw Stuck("assignment to undeclared " + x);

    ObjStep s = plain(syntax::nil(), "new");
    s.inner.entries.emplace("S", Pair{rho, rho.with(x, Datum::term(syntax::obj_ref(fresh)))});
    const Datum& un = component(ctx.global, "UN");
    const Datum* version = un.lookup(cls);
    Snapshot init = inner_signature().bottom_snapshot();
    init.insert_or_assign("CN", Datum::atom(cls));
    init.insert_or_assign("V", Datum::nat(version ? version->as_nat() : 0));
    s.global.entries.emplace("A", Identity{a});
    s.global.entries.emplace("UN", Identity{un});
    s.global.entries.emplace("N", Pair{n, n.with("object", Datum::nat(k))});
    const Datum& m = component(ctx.global, "M");
    s.global.entries.emplace("M", Pair{m, m.with(fresh, Datum::bag())});
    s.spawn = std::make_pair(fresh, std::move(init));
    s.spawn_stmt = attrs->as_term();
    return s;
}

/// Rules at a redex inside context ev. Throws Stuck or Blocked.
ObjStep redex_step(const Term& r, const Context& ev, const Ctx& ctx) {
    auto in_context = [&](ObjStep s) {
        s.next = plug(ev, s.next);
        return s;
    };
    switch (r.kind()) {
        case TermKind::Seq: return in_context(plain(r.kid(1), "seq-nil"));
        case TermKind::Skip: return in_context(plain(syntax::nil(), "skip"));

        case TermKind::VarDecl:
        case TermKind::Assign: {
            const bool declare = r.is(TermKind::VarDecl);
            const Term& e = r.kid(0);
            if (e.is(TermKind::New)) return in_context(create_object(r.name(), e.name(), declare, ctx));
            if (!e.is_value()) {
                return in_context(expr_congruence(e, ctx, [&](const Term& e2) {
                    return declare ? syntax::var_decl(r.name(), e2) : syntax::assign(r.name(), e2);
                }));
            }
            const Datum& rho = ctx.S();
            if (declare && rho.contains(r.name())) throw Stuck("variable already declared: " + r.name());
            if (!declare && !rho.contains(r.name())) throw Stuck("assignment to undeclared " + r.name());
            ObjStep s = plain(syntax::nil(), declare ? "vardecl" : "assign");
            s.inner.entries.emplace("S", Pair{rho, rho.with(r.name(), Datum::term(e))});
            return in_context(std::move(s));
        }

        case TermKind::Let:
            if (r.kid(0).is_value()) {
                return in_context(plain(proteus::subst(r.kid(1), r.kid(0), r.name()), "let"));
            }
            return in_context(expr_congruence(
                r.kid(0), ctx, [&](const Term& e) { return syntax::let(r.name(), e, r.kid(1)); }));

        case TermKind::If: {
            const Term& c = r.kid(0);
            if (c.is(TermKind::Bool)) {
                return in_context(plain(c.as_bool() ? r.kid(1) : r.kid(2), "if-value"));
            }
            ObjStep s = expr_step(c, ctx);
            if (s.next.is(TermKind::Bool)) {
                const bool taken = s.next.as_bool();
                s.next = taken ? r.kid(1) : r.kid(2);
                s.rule = taken ? "if-true" : "if-false";
            } else {
                s.next = syntax::if_then_else(s.next, r.kid(1), r.kid(2));
            }
            return in_context(std::move(s));
        }

        case TermKind::App: {
            if (!r.kid(0).is_value()) {
                return in_context(expr_congruence(
                    r.kid(0), ctx, [&](const Term& e) { return syntax::app(r.name(), e); }));
            }
            ObjStep s = plain(syntax::nil(), "local-call");
            Term lam = lookup_method(r.name(), ctx, s);
            s.next = proteus::subst(lam.kid(0), r.kid(0), lam.name());
            return in_context(std::move(s));
        }

        case TermKind::Activate: {
            ObjStep s = plain(syntax::nil(), "activate");
            Term lam = lookup_method(r.name(), ctx, s);
            const Datum& rho = ctx.S();
            Datum bound = rho.with("caller", Datum::term(r.kid(0)))
                              .with("label", Datum::term(r.kid(1)));
            s.inner.entries.emplace("S", Pair{rho, bound});
            s.next = proteus::subst(lam.kid(0), r.kid(2), lam.name());
            return in_context(std::move(s));
        }

        case TermKind::MethodDef: {
            const Datum& md = component(ctx.local, "MD");
            ObjStep s = plain(syntax::nil(), "methoddef");
            s.inner.entries.emplace(
                "MD", Pair{md, md.with(r.name(0), Datum::term(syntax::lambda(r.name(1), r.kid(0))))});
            return in_context(std::move(s));
        }

        case TermKind::ClassDef: {
            const std::string& cls = r.name();
            label::DatumMap methods;
            for (const auto& [m, lam] : syntax::class_methods(r)) methods.emplace(m, Datum::term(lam));
            const Datum& c = component(ctx.global, "C");
            const Datum& a = component(ctx.global, "A");
            const Datum& un = component(ctx.global, "UN");
            ObjStep s = plain(syntax::nil(), "classdef");
            s.global.entries.emplace("C", Pair{c, c.with(cls, Datum::map(std::move(methods)))});
            s.global.entries.emplace("A", Pair{a, a.with(cls, Datum::term(syntax::class_attrs(r)))});
            if (!un.contains(cls)) s.global.entries.emplace("UN", Pair{un, un.with(cls, Datum::nat(0))});
            return in_context(std::move(s));
        }

        case TermKind::Async: {
            const Datum& t = component(ctx.local, "T");
            ObjStep s = plain(syntax::nil(), "async");
            s.inner.entries.emplace("T", Pair{t, t.inserted(Datum::term(r.kid(0)))});
            return in_context(std::move(s));
        }

        case TermKind::Yield: {
            const Datum& t = component(ctx.local, "T");
            ObjStep s = plain(syntax::nil(), "yield");
            s.inner.entries.emplace("T", Pair{t, t.inserted(Datum::term(plug(ev, syntax::nil())))});
            return s;
        }

        case TermKind::Return: {
            if (!r.kid(0).is_value()) {
                return in_context(expr_congruence(
                    r.kid(0), ctx, [](const Term& e) { return syntax::return_(e); }));
            }
            const Datum& rho = ctx.S();
            const Datum* caller = rho.lookup("caller");
            const Datum* lbl = rho.lookup("label");
            if (!caller || !lbl || !caller->as_term().is(TermKind::ObjRef) ||
                !lbl->as_term().is(TermKind::Nat)) {
                throw Stuck("return outside an activated method");
            }
            const std::string& target = caller->as_term().name();
            const Datum& m = component(ctx.global, "M");
            const Datum* pool = m.lookup(target);
            if (!pool) throw Stuck("caller " + target + " has no message pool");
            ObjStep s = plain(syntax::nil(), "return");
            s.inner.entries.emplace("S", Identity{rho});
            Datum msg = Datum::term(syntax::msg_completion(lbl->as_term().as_nat(), r.kid(0)));
            s.global.entries.emplace("M", Pair{m, m.with(target, pool->inserted(std::move(msg)))});
            return s;
        }

        case TermKind::Call: {
            const Term& arg = r.kid(0);
            const Term& callee = r.kid(1);
            if (!arg.is_value()) {
                return in_context(expr_congruence(arg, ctx, [&](const Term& e) {
                    return syntax::call(r.name(0), e, callee, r.name(1));
                }));
            }
            if (!callee.is_value()) {
                return in_context(expr_congruence(callee, ctx, [&](const Term& e) {
                    return syntax::call(r.name(0), arg, e, r.name(1));
                }));
            }
            if (!callee.is(TermKind::ObjRef)) throw Stuck("callee is not an object");
            const Datum& m = component(ctx.global, "M");
            const Datum* pool = m.lookup(callee.name());
            if (!pool) throw Stuck("unknown object " + callee.name());
            const Datum& n = component(ctx.global, "N");
            const Datum* counter = n.lookup("future");
            const std::uint64_t fut = counter ? counter->as_nat() : 0;
            const Datum& l = component(ctx.local, "L");
            ObjStep s = plain(syntax::nil(), "call");
            s.inner.entries.emplace("L", Pair{l, l.with(r.name(1), Datum::nat(fut))});
            s.global.entries.emplace("N", Pair{n, n.with("future", Datum::nat(fut + 1))});
            Datum msg = Datum::term(syntax::msg_invoke(ctx.o, fut, r.name(0), arg));
            s.global.entries.emplace("M", Pair{m, m.with(callee.name(), pool->inserted(std::move(msg)))});
            return in_context(std::move(s));
        }

        case TermKind::Read: {
            const Datum& l = component(ctx.local, "L");
            const Datum* fut = l.lookup(r.name(0));
            if (!fut) throw Stuck("unknown future label " + r.name(0));
            const Datum& m = component(ctx.global, "M");
            const Datum* pool = m.lookup(ctx.o);
            if (pool) {
                for (const auto& msg : pool->as_bag()) {
                    const Term& mt = msg.as_term();
                    if (mt.is(TermKind::MsgCompletion) && mt.number() == fut->as_nat()) {
                        ObjStep s = plain(syntax::assign(r.name(1), mt.kid(0)), "read");
                        s.inner.entries.emplace("L", Identity{l});
                        s.global.entries.emplace("M", Pair{m, m.with(ctx.o, pool->erased(msg))});
                        return in_context(std::move(s));
                    }
                }
            }
            throw Blocked{};
        }

        case TermKind::UpdateC: {
            ObjStep s = plain(syntax::nil(), "update-c");
            s.jump = uts::Jump{"E_c", r.delta()};
            return in_context(std::move(s));
        }

        default:
            throw Stuck(std::string("no rule for ") + std::string(syntax::kind_name(r.kind())));
    }
}

struct ObjectResult {
    std::vector<ObjStep> steps;
    std::optional<std::string> stuck;
    bool blocked = false;
};

ObjectResult object_steps(const std::string& o, const Term& s, const Snapshot& snap) {
    ObjectResult out;
    const Datum& e = component(snap, "E");
    const Datum* local_d = e.lookup(o);
    if (!local_d) {
        out.stuck = "object " + o + " has no local state";
        return out;
    }
    const Snapshot& local = local_d->as_map();
    Ctx ctx{o, local, snap};

    // message delivery, once per distinct invoke message
    const Datum& m = component(snap, "M");
    if (const Datum* pool = m.lookup(o)) {
        const Datum* prev = nullptr;
        for (const auto& msg : pool->as_bag()) {
            if (prev && *prev == msg) continue;
            prev = &msg;
            const Term& mt = msg.as_term();
            if (!mt.is(TermKind::MsgInvoke)) continue;
            ObjStep st = plain(syntax::seq(syntax::async(syntax::activate(mt.name(1),
                                                                         syntax::obj_ref(mt.name(0)),
                                                                         syntax::nat(mt.number()),
                                                                         mt.kid(0))),
                                           s),
                               "deliver");
            st.global.entries.emplace("M", Pair{m, m.with(o, pool->erased(msg))});
            out.steps.push_back(std::move(st));
        }
    }

    if (s.is_nil()) {
        const Datum& t = component(local, "T");
        const Datum* prev = nullptr;
        for (const auto& th : t.as_bag()) {
            if (prev && *prev == th) continue;
            prev = &th;
            ObjStep st = plain(th.as_term(), "resume");
            st.inner.entries.emplace("T", Pair{t, t.erased(th)});
            out.steps.push_back(std::move(st));
        }
        return out;
    }
    if (s.is_value()) {
        out.stuck = "object " + o + " finished with a non-nil value";
        return out;
    }
    try {
        auto [ev, r] = decompose(s);
        if (r.is_value()) throw Stuck("value in statement position");
        out.steps.push_back(redex_step(r, ev, ctx));
    } catch (const Stuck& err) {
        out.stuck = err.what();
    } catch (const Blocked&) {
        out.blocked = true;
    }
    return out;
}

void collect_objects(const Term& sys, std::vector<std::pair<std::string, Term>>& out) {
    if (sys.is(TermKind::Par)) {
        collect_objects(sys.kid(0), out);
        collect_objects(sys.kid(1), out);
    } else if (sys.is(TermKind::Object)) {
        out.emplace_back(sys.name(), sys.kid(0));
    }
}

Term replace_object(const Term& sys, const std::string& o, const Term& stmt) {
    if (sys.is(TermKind::Par)) {
        return syntax::par(replace_object(sys.kid(0), o, stmt), replace_object(sys.kid(1), o, stmt));
    }
    if (sys.is(TermKind::Object) && sys.name() == o) return syntax::object(o, stmt);
    return sys;
}

Transition lift(const std::string& o, const Term& sys, ObjStep st) {
    Transition tr;
    tr.actor = o;
    tr.rule = st.rule;
    Term next = replace_object(sys, o, st.next);
    if (st.spawn) next = syntax::par(next, syntax::object(st.spawn->first, st.spawn_stmt));
    tr.next = std::move(next);
    if (st.jump) {
        tr.label = *st.jump;
        return tr;
    }
    Morphism label = std::move(st.global);
    enc::LocalizedMorphism eta = enc::localize(o, std::move(st.inner));
    if (st.spawn) eta.per_object.emplace(st.spawn->first, enc::Spawn{st.spawn->second});
    if (!eta.per_object.empty()) label.entries.emplace("E", enc::as_component(std::move(eta)));
    tr.label = std::move(label);
    return tr;
}

}  // namespace

StepResult step_system(const Term& sys, const Snapshot& snap, const Options& opts) {
    StepResult out;
    std::vector<std::pair<std::string, Term>> objects;
    collect_objects(sys, objects);

    // first purely local step per object, for the non-int combination
    std::vector<std::pair<std::string, ObjStep>> local_only;
    for (const auto& [o, s] : objects) {
        ObjectResult r = object_steps(o, s, snap);
        if (r.stuck) out.stuck.emplace_back(o, *r.stuck);
        if (r.blocked) out.blocked.push_back(o);
        bool taken = false;
        for (auto& st : r.steps) {
            if (opts.non_int && !taken && !st.jump && !st.spawn && st.global.entries.empty()) {
                local_only.emplace_back(o, st);
                taken = true;
            }
            out.transitions.push_back(lift(o, sys, std::move(st)));
        }
    }

    if (opts.non_int && local_only.size() >= 2) {
        Transition tr;
        tr.rule = "non-int";
        Term next = sys;
        enc::LocalizedMorphism eta;
        for (auto& [o, st] : local_only) {
            next = replace_object(next, o, st.next);
            eta = enc::merge(eta, o, std::move(st.inner));
            tr.actor += (tr.actor.empty() ? "" : ",") + o;
        }
        Morphism label;
        if (!eta.per_object.empty()) label.entries.emplace("E", enc::as_component(std::move(eta)));
        tr.label = std::move(label);
        tr.next = std::move(next);
        out.transitions.push_back(std::move(tr));
    }
    return out;
}

bool is_final(const Term& sys, const Snapshot& snap) {
    std::vector<std::pair<std::string, Term>> objects;
    collect_objects(sys, objects);
    const Datum& e = component(snap, "E");
    for (const auto& [o, s] : objects) {
        if (!s.is_nil()) return false;
        const Datum* local = e.lookup(o);
        if (local) {
            if (const Datum* t = local->lookup("T"); t && !t->as_bag().empty()) return false;
        }
    }
    return true;
}

bool dep_check(const Datum& rho, const Datum& rho_prime) {
    for (const auto& [c, n] : rho.as_map()) {
        const Datum* have = rho_prime.lookup(c);
        if (!have || have->as_nat() < n.as_nat()) return false;
    }
    return true;
}

ClassTables E_c(const uts::Delta& delta, const ClassTables& in) {
    for (const auto& c : delta) {
        if (const Datum* deps = in.ud.lookup(c)) {
            if (!dep_check(*deps, in.un)) return in;
        }
    }
    ClassTables out = in;
    for (const auto& c : delta) {
        bool upgraded = false;
        if (const Datum* methods = in.uc.lookup(c)) {
            const Datum* old = in.c.lookup(c);
            Datum merged = old ? *old : Datum::map();
            for (const auto& [m, def] : methods->as_map()) merged = merged.with(m, def);
            out.c = out.c.with(c, std::move(merged));
            upgraded = true;
        }
        if (const Datum* attrs = in.ua.lookup(c)) {
            out.a = out.a.with(c, *attrs);
            upgraded = true;
        }
        if (upgraded) {
            const Datum* n = in.un.lookup(c);
            out.un = out.un.with(c, Datum::nat((n ? n->as_nat() : 0) + 1));
        }
        out.uc = out.uc.without(c);
        out.ua = out.ua.without(c);
        out.ud = out.ud.without(c);
    }
    return out;
}

uts::EndofunctorSpec spec_c() {
    uts::EndofunctorSpec spec;
    spec.name = "E_c";
    spec.data_indexes = {{"C", Namespace::Data}, {"A", Namespace::Data}, {"UN", Namespace::Data}};
    spec.upgrade_indexes = {
        {"UC", Namespace::Upgrade}, {"UA", Namespace::Upgrade}, {"UD", Namespace::Upgrade}};
    spec.apply = [](const Snapshot& tuple, const uts::Delta& delta) {
        ClassTables in{tuple.at("C"), tuple.at("A"), tuple.at("UN"),
                       tuple.at("UC"), tuple.at("UA"), tuple.at("UD")};
        ClassTables r = E_c(delta, in);
        return Snapshot{{"C", r.c}, {"A", r.a}, {"UN", r.un}, {"UC", r.uc}, {"UA", r.ua}, {"UD", r.ud}};
    };
    return spec;
}

uts::Registry registry() {
    uts::Registry reg;
    reg.add(spec_c());
    return reg;
}

std::vector<std::string> attribute_names(const Term& attrs) {
    std::vector<std::string> out;
    const Term* a = &attrs;
    while (true) {
        if (a->is(TermKind::Seq)) {
            auto inner = attribute_names(a->kid(0));
            out.insert(out.end(), inner.begin(), inner.end());
            a = &a->kid(1);
            continue;
        }
        if (a->is(TermKind::VarDecl)) out.push_back(a->name());
        return out;
    }
}

Snapshot refresh_object_on_upgrade(const std::string& o, const Snapshot& snap) {
    const Datum& e = component(snap, "E");
    const Datum* local = e.lookup(o);
    if (!local) return snap;
    const Datum* cn = local->lookup("CN");
    if (!cn || cn->as_atom().empty()) return snap;
    const Datum* un = component(snap, "UN").lookup(cn->as_atom());
    const Datum* v = local->lookup("V");
    const std::uint64_t current = v ? v->as_nat() : 0;
    if (!un || un->as_nat() <= current) return snap;

    Datum store = local->lookup("S") ? *local->lookup("S") : Datum::map();
    if (const Datum* attrs = component(snap, "A").lookup(cn->as_atom())) {
        for (const auto& x : attribute_names(attrs->as_term())) {
            if (!store.contains(x)) store = store.with(x, Datum::term(syntax::nil()));
        }
    }
    Datum updated = local->with("S", store).with("V", Datum::nat(un->as_nat()));
    Snapshot out = snap;
    out.insert_or_assign("E", e.with(o, std::move(updated)));
    return out;
}

std::optional<Snapshot> refresh_objects(const Snapshot& snap) {
    Snapshot cur = snap;
    for (const auto& [o, _] : component(snap, "E").as_map()) cur = refresh_object_on_upgrade(o, cur);
    if (cur == snap) return std::nullopt;
    return cur;
}

std::vector<std::string> object_ids(const Term& sys) {
    std::vector<std::pair<std::string, Term>> objects;
    collect_objects(sys, objects);
    std::vector<std::string> out;
    for (const auto& [o, _] : objects) out.push_back(o);
    return out;
}

Snapshot initial_snapshot(const Term& sys) {
    Snapshot s = signature().bottom_snapshot();
    label::DatumMap e;
    label::DatumMap m;
    for (const auto& o : object_ids(sys)) {
        e.emplace(o, Datum::map(inner_signature().bottom_snapshot()));
        m.emplace(o, Datum::bag());
    }
    s.insert_or_assign("E", Datum::map(std::move(e)));
    s.insert_or_assign("M", Datum::map(std::move(m)));
    s.insert_or_assign("N", Datum::map({{"future", Datum::nat(0)}, {"object", Datum::nat(0)}}));
    return s;
}

namespace {

void validate_stmt(const Term& t) {
    switch (t.kind()) {
        case TermKind::Object:
        case TermKind::Par:
        case TermKind::FunDecl:
        case TermKind::RecDecl:
        case TermKind::RecProj:
        case TermKind::Print:
        case TermKind::UpdateV:
        case TermKind::UpdateF:
        case TermKind::UpdateR:
        case TermKind::RecordLit:
        case TermKind::MsgInvoke:
        case TermKind::MsgCompletion:
        case TermKind::Activate:
            throw InvalidProgram("construct not available in Creol statements: " +
                                 std::string(syntax::kind_name(t.kind())));
        case TermKind::Lambda:
            break;
        default: break;
    }
    for (const auto& k : t.kids()) validate_stmt(k);
}

void validate_system(const Term& sys, std::set<std::string>& seen) {
    static const std::regex generated("o_[0-9]+");
    if (sys.is(TermKind::Par)) {
        validate_system(sys.kid(0), seen);
        validate_system(sys.kid(1), seen);
        return;
    }
    if (!sys.is(TermKind::Object)) {
        throw InvalidProgram("a system is a parallel composition of objects");
    }
    if (!seen.insert(sys.name()).second) throw InvalidProgram("duplicate object id " + sys.name());
    if (std::regex_match(sys.name(), generated)) {
        throw InvalidProgram("object ids of the form o_<n> are reserved: " + sys.name());
    }
    validate_stmt(sys.kid(0));
}

Term resolve_objects(const Term& t, const std::set<std::string>& objects) {
    if (t.is(TermKind::Call) && t.kid(1).is(TermKind::VarRef) && objects.contains(t.kid(1).name())) {
        return syntax::call(t.name(0), resolve_objects(t.kid(0), objects),
                            syntax::obj_ref(t.kid(1).name()), t.name(1));
    }
    if (t.kids().empty()) return t;
    std::vector<Term> kids;
    for (const auto& k : t.kids()) kids.push_back(resolve_objects(k, objects));
    return Term::make(t.kind(), t.number(), t.names(), std::move(kids));
}

}  // namespace

void validate(const Term& sys) {
    std::set<std::string> seen;
    validate_system(sys, seen);
}

Term parse(std::string_view text, std::vector<std::string>* warnings) {
    Term t = syntax::parse_term(text, warnings);
    auto ids = object_ids(t);
    Term resolved = resolve_objects(t, {ids.begin(), ids.end()});
    validate(resolved);
    return resolved;
}

std::string render(const Term& t) { return syntax::render(t); }

}  // namespace dsos::creol
