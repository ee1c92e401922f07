#include "dsos/label/morphism.hpp"

#include "dsos/enc/localized.hpp"
#include "dsos/error.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::label {

using nlohmann::json;

bool operator==(const Localized& a, const Localized& b) {
    static const enc::LocalizedMorphism empty;
    const auto& x = a.eta ? *a.eta : empty;
    const auto& y = b.eta ? *b.eta : empty;
    return x == y;
}

namespace {

const Datum& object_at(const Component& c, const Snapshot& snap, Datum& scratch) {
    auto it = snap.find(c.index.name);
    if (it != snap.end()) return it->second;
    scratch = c.domain.bottom();
    return scratch;
}

const enc::LocalizedMorphism& eta_of(const Localized& l) {
    static const enc::LocalizedMorphism empty;
    return l.eta ? *l.eta : empty;
}

}  // namespace

MorphismComponent default_component(const Component& c, const Snapshot& snap) {
    if (c.kind == ComponentKind::WriteOnly) return Emit{};
    if (c.domain.kind == Domain::Kind::Local) return Localized{};
    Datum scratch;
    return Identity{object_at(c, snap, scratch)};
}

MorphismComponent get_component(const Morphism& m, const LabelSignature& sig,
                                const std::string& idx, const Snapshot& snap) {
    const Component& c = sig.at(idx);
    if (auto it = m.entries.find(idx); it != m.entries.end()) return it->second;
    return default_component(c, snap);
}

Morphism compose(const Morphism& m1, const Morphism& m2, const LabelSignature& sig,
                 const Snapshot& between) {
    std::set<std::string> idxs;
    for (const auto& [k, _] : m1.entries) idxs.insert(k);
    for (const auto& [k, _] : m2.entries) idxs.insert(k);

    Morphism out;
    for (const auto& idx : sig.names()) {
        if (!idxs.contains(idx)) continue;
        const Component& c = sig.at(idx);
        MorphismComponent a = get_component(m1, sig, idx, between);
        MorphismComponent b = get_component(m2, sig, idx, between);
        switch (c.kind) {
            case ComponentKind::WriteOnly: {
                auto* ea = std::get_if<Emit>(&a);
                auto* eb = std::get_if<Emit>(&b);
                if (!ea || !eb) throw KindMismatch(idx, "write-only component needs emissions");
                Emit e = *ea;
                e.elems.insert(e.elems.end(), eb->elems.begin(), eb->elems.end());
                out.entries.emplace(idx, std::move(e));
                break;
            }
            case ComponentKind::ReadOnly: {
                auto* ia = std::get_if<Identity>(&a);
                auto* ib = std::get_if<Identity>(&b);
                if (!ia || !ib) throw KindMismatch(idx, "read-only component needs identities");
                if (!(ia->obj == ib->obj)) throw NotComposable(idx);
                out.entries.emplace(idx, *ia);
                break;
            }
            case ComponentKind::ReadWrite: {
                auto* la = std::get_if<Localized>(&a);
                auto* lb = std::get_if<Localized>(&b);
                if (la || lb) {
                    if (!la || !lb || c.domain.kind != Domain::Kind::Local) {
                        throw KindMismatch(idx, "cannot mix localized and plain morphisms");
                    }
                    Datum scratch;
                    auto mid = enc::from_datum(object_at(c, between, scratch));
                    auto eta = enc::compose_localized(eta_of(*la), eta_of(*lb), *c.domain.inner, mid);
                    out.entries.emplace(idx, enc::as_component(std::move(eta)));
                    break;
                }
                auto as_pair = [&](const MorphismComponent& mc) -> Pair {
                    if (auto* p = std::get_if<Pair>(&mc)) return *p;
                    if (auto* i = std::get_if<Identity>(&mc)) return Pair{i->obj, i->obj};
                    throw KindMismatch(idx, "read-write component needs pairs");
                };
                Pair pa = as_pair(a);
                Pair pb = as_pair(b);
                if (!(pa.tgt == pb.src)) throw NotComposable(idx);
                out.entries.emplace(idx, Pair{pa.src, pb.tgt});
                break;
            }
        }
    }
    for (const auto& idx : idxs) {
        if (!sig.contains(idx)) throw UnknownIndex(idx);
    }
    return out;
}

Morphism project(const Morphism& m, const std::set<std::string>& keep, const LabelSignature& sig) {
    for (const auto& k : keep) sig.at(k);
    Morphism out;
    for (const auto& [k, v] : m.entries) {
        if (keep.contains(k)) out.entries.emplace(k, v);
    }
    return out;
}

Morphism embed(const Morphism& m, const LabelSignature& into) {
    for (const auto& [k, _] : m.entries) into.at(k);
    return m;
}

void validate(const Morphism& m, const LabelSignature& sig) {
    for (const auto& [idx, mc] : m.entries) {
        const Component& c = sig.at(idx);
        const bool ok = std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Identity>) {
                    return c.kind != ComponentKind::WriteOnly;
                } else if constexpr (std::is_same_v<T, Pair>) {
                    return c.kind == ComponentKind::ReadWrite;
                } else if constexpr (std::is_same_v<T, Emit>) {
                    return c.kind == ComponentKind::WriteOnly;
                } else {
                    return c.kind == ComponentKind::ReadWrite &&
                           c.domain.kind == Domain::Kind::Local;
                }
            },
            mc);
        if (!ok) throw KindMismatch(idx, "entry does not fit a " + std::string(to_string(c.kind)) +
                                             " component");
    }
}

Snapshot apply(const Morphism& m, const LabelSignature& sig, const Snapshot& source) {
    Snapshot target = source;
    for (const auto& [idx, mc] : m.entries) {
        const Component& c = sig.at(idx);
        Datum scratch;
        const Datum& cur = object_at(c, source, scratch);
        if (auto* i = std::get_if<Identity>(&mc)) {
            if (!(i->obj == cur)) throw NotComposable(idx);
        } else if (auto* p = std::get_if<Pair>(&mc)) {
            if (!(p->src == cur)) throw NotComposable(idx);
            target.insert_or_assign(idx, p->tgt);
        } else if (auto* l = std::get_if<Localized>(&mc)) {
            if (c.domain.kind != Domain::Kind::Local) throw KindMismatch(idx, "not encapsulated");
            auto next = enc::apply_localized(eta_of(*l), *c.domain.inner, enc::from_datum(cur));
            target.insert_or_assign(idx, enc::to_datum(next));
        }
    }
    return target;
}

bool is_identity(const Morphism& m) {
    for (const auto& [_, mc] : m.entries) {
        if (auto* p = std::get_if<Pair>(&mc)) {
            if (!(p->src == p->tgt)) return false;
        } else if (auto* e = std::get_if<Emit>(&mc)) {
            if (!e->elems.empty()) return false;
        } else if (auto* l = std::get_if<Localized>(&mc)) {
            if (!enc::is_identity(eta_of(*l))) return false;
        }
    }
    return true;
}

std::vector<Datum> emitted(const Morphism& m, const std::string& idx) {
    auto it = m.entries.find(idx);
    if (it == m.entries.end()) return {};
    if (auto* e = std::get_if<Emit>(&it->second)) return e->elems;
    return {};
}

// ---- JSON ----

namespace {

json value_to_json(const syntax::Term& t) {
    switch (t.kind()) {
        case syntax::TermKind::Nil: return nullptr;
        case syntax::TermKind::Nat: return t.as_nat();
        case syntax::TermKind::Bool: return t.as_bool();
        case syntax::TermKind::ObjRef: return "@" + t.name();
        default: return syntax::render(t);
    }
}

syntax::Term value_from_json(const json& j) {
    if (j.is_null()) return syntax::nil();
    if (j.is_boolean()) return syntax::boolean(j.get<bool>());
    if (j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        return syntax::nat(j.get<std::uint64_t>());
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (!s.empty() && s[0] == '@' && s.find_first_of(" (){};") == std::string::npos) {
            return syntax::obj_ref(s.substr(1));
        }
        return syntax::parse_term(s);
    }
    throw Error("expected a value (null, natural, boolean or \"@object\"), got " + j.dump());
}

}  // namespace

json datum_to_json(const Datum& d, const Domain& dom) {
    switch (dom.kind) {
        case Domain::Kind::Unit: return nullptr;
        case Domain::Kind::Value: return value_to_json(d.as_term());
        case Domain::Kind::Code: return syntax::render(d.as_term());
        case Domain::Kind::Nat: return d.as_nat();
        case Domain::Kind::Atom: return d.as_atom();
        case Domain::Kind::MapOf: {
            json o = json::object();
            for (const auto& [k, v] : d.as_map()) o[k] = datum_to_json(v, *dom.elem);
            return o;
        }
        case Domain::Kind::BagOf: {
            json a = json::array();
            for (const auto& v : d.as_bag()) a.push_back(datum_to_json(v, *dom.elem));
            return a;
        }
        case Domain::Kind::Local: {
            json o = json::object();
            for (const auto& [k, v] : d.as_map()) o[k] = snapshot_to_json(v.as_map(), *dom.inner);
            return o;
        }
    }
    return nullptr;
}

Datum datum_from_json(const json& j, const Domain& dom) {
    switch (dom.kind) {
        case Domain::Kind::Unit: return Datum::unit();
        case Domain::Kind::Value: return Datum::term(value_from_json(j));
        case Domain::Kind::Code:
            if (!j.is_string()) throw Error("expected program text, got " + j.dump());
            return Datum::term(syntax::parse_term(j.get<std::string>()));
        case Domain::Kind::Nat:
            if (!j.is_number_unsigned() &&
                !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
                throw Error("expected a natural number, got " + j.dump());
            }
            return Datum::nat(j.get<std::uint64_t>());
        case Domain::Kind::Atom:
            if (!j.is_string()) throw Error("expected a string, got " + j.dump());
            return Datum::atom(j.get<std::string>());
        case Domain::Kind::MapOf: {
            if (!j.is_object()) throw Error("expected a JSON object, got " + j.dump());
            DatumMap m;
            for (const auto& [k, v] : j.items()) m.emplace(k, datum_from_json(v, *dom.elem));
            return Datum::map(std::move(m));
        }
        case Domain::Kind::BagOf: {
            if (!j.is_array()) throw Error("expected a JSON array, got " + j.dump());
            DatumBag b;
            for (const auto& v : j) b.push_back(datum_from_json(v, *dom.elem));
            return Datum::bag(std::move(b));
        }
        case Domain::Kind::Local: {
            if (!j.is_object()) throw Error("expected a JSON object, got " + j.dump());
            DatumMap m;
            for (const auto& [k, v] : j.items()) {
                m.emplace(k, Datum::map(snapshot_from_json(v, *dom.inner)));
            }
            return Datum::map(std::move(m));
        }
    }
    return Datum::unit();
}

json snapshot_to_json(const Snapshot& s, const LabelSignature& sig) {
    json o = json::object();
    for (const auto& c : sig.components()) {
        auto it = s.find(c.index.name);
        if (it != s.end()) o[c.index.name] = datum_to_json(it->second, c.domain);
    }
    return o;
}

Snapshot snapshot_from_json(const json& j, const LabelSignature& sig) {
    if (!j.is_object()) throw Error("snapshot must be a JSON object");
    Snapshot s;
    for (const auto& [k, v] : j.items()) {
        const Component& c = sig.at(k);
        s.emplace(k, datum_from_json(v, c.domain));
    }
    return s;
}

namespace {

json local_to_json(const enc::LocalizedMorphism& eta, const LabelSignature& inner) {
    json o = json::object();
    for (const auto& [obj, step] : eta.per_object) {
        if (auto* x = std::get_if<Morphism>(&step)) {
            o[obj] = morphism_to_json(*x, inner);
        } else {
            o[obj] = json{{"spawn", snapshot_to_json(std::get<enc::Spawn>(step).initial, inner)}};
        }
    }
    return o;
}

enc::LocalizedMorphism local_from_json(const json& j, const LabelSignature& inner) {
    enc::LocalizedMorphism eta;
    for (const auto& [obj, v] : j.items()) {
        if (v.contains("spawn")) {
            eta.per_object.emplace(obj, enc::Spawn{snapshot_from_json(v.at("spawn"), inner)});
        } else {
            eta.per_object.emplace(obj, morphism_from_json(v, inner));
        }
    }
    return eta;
}

}  // namespace

json morphism_to_json(const Morphism& m, const LabelSignature& sig) {
    json o = json::object();
    for (const auto& [idx, mc] : m.entries) {
        const Component& c = sig.at(idx);
        if (auto* i = std::get_if<Identity>(&mc)) {
            o[idx] = {{"kind", "read"}, {"obj", datum_to_json(i->obj, c.domain)}};
        } else if (auto* p = std::get_if<Pair>(&mc)) {
            o[idx] = {{"kind", "pair"},
                      {"src", datum_to_json(p->src, c.domain)},
                      {"tgt", datum_to_json(p->tgt, c.domain)}};
        } else if (auto* e = std::get_if<Emit>(&mc)) {
            json elems = json::array();
            for (const auto& d : e->elems) elems.push_back(datum_to_json(d, c.alphabet));
            o[idx] = {{"kind", "emit"}, {"elems", elems}};
        } else {
            o[idx] = {{"enc", local_to_json(eta_of(std::get<Localized>(mc)), *c.domain.inner)}};
        }
    }
    return o;
}

Morphism morphism_from_json(const json& j, const LabelSignature& sig) {
    Morphism m;
    for (const auto& [idx, v] : j.items()) {
        const Component& c = sig.at(idx);
        if (v.contains("enc")) {
            m.entries.emplace(idx, enc::as_component(local_from_json(v.at("enc"), *c.domain.inner)));
            continue;
        }
        const auto kind = v.at("kind").get<std::string>();
        if (kind == "read") {
            m.entries.emplace(idx, Identity{datum_from_json(v.at("obj"), c.domain)});
        } else if (kind == "pair") {
            m.entries.emplace(idx, Pair{datum_from_json(v.at("src"), c.domain),
                                        datum_from_json(v.at("tgt"), c.domain)});
        } else if (kind == "emit") {
            Emit e;
            for (const auto& d : v.at("elems")) e.elems.push_back(datum_from_json(d, c.alphabet));
            m.entries.emplace(idx, std::move(e));
        } else {
            throw Error("unknown morphism component kind: " + kind);
        }
    }
    validate(m, sig);
    return m;
}

namespace {

std::string pretty_local(const enc::LocalizedMorphism& eta, const LabelSignature& inner) {
    std::string s;
    for (const auto& [obj, step] : eta.per_object) {
        if (!s.empty()) s += " ";
        if (auto* x = std::get_if<Morphism>(&step)) {
            s += obj + ":" + pretty(*x, inner);
        } else {
            s += obj + ":new";
        }
    }
    return s.empty() ? "id" : s;
}

}  // namespace

std::string pretty(const Morphism& m, const LabelSignature& sig) {
    std::string src;
    std::string tgt;
    auto add = [](std::string& s, const std::string& part) {
        if (!s.empty()) s += ", ";
        s += part;
    };
    for (const auto& [idx, mc] : m.entries) {
        if (auto* i = std::get_if<Identity>(&mc)) {
            add(src, idx + "=" + to_string(i->obj));
        } else if (auto* p = std::get_if<Pair>(&mc)) {
            add(src, idx + "=" + to_string(p->src));
            add(tgt, idx + "'=" + to_string(p->tgt));
        } else if (auto* e = std::get_if<Emit>(&mc)) {
            std::string elems;
            for (const auto& d : e->elems) elems += (elems.empty() ? "" : ", ") + to_string(d);
            add(tgt, idx + "=[" + elems + "]");
        } else {
            const Component& c = sig.at(idx);
            add(src, pretty_local(eta_of(std::get<Localized>(mc)), *c.domain.inner));
        }
    }
    std::string s = "{";
    s += src;
    s += src.empty() ? "..." : ", ...";
    if (!tgt.empty()) s += ", " + tgt;
    return s + "}";
}

}  // namespace dsos::label
