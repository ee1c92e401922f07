#include "dsos/enc/localized.hpp"

#include <set>

#include "dsos/error.hpp"

namespace dsos::enc {

using label::Morphism;

LocalizedMorphism localize(const ObjectId& o, Morphism x) {
    LocalizedMorphism eta;
    if (!x.entries.empty()) eta.per_object.emplace(o, std::move(x));
    return eta;
}

LocalizedMorphism spawn(const ObjectId& o, label::Snapshot initial) {
    LocalizedMorphism eta;
    eta.per_object.emplace(o, Spawn{std::move(initial)});
    return eta;
}

LocalizedMorphism merge(const LocalizedMorphism& eta, const ObjectId& o, Morphism x) {
    LocalizedMorphism out = eta;
    if (auto it = out.per_object.find(o); it != out.per_object.end()) {
        const auto* m = std::get_if<Morphism>(&it->second);
        if (!m || !label::is_identity(*m)) throw ConflictingLocalStep(o);
        out.per_object.erase(it);
    }
    if (!x.entries.empty()) out.per_object.emplace(o, std::move(x));
    return out;
}

LocalizedMorphism compose_localized(const LocalizedMorphism& e1, const LocalizedMorphism& e2,
                                    const label::LabelSignature& inner,
                                    const LocalSnapshot& between) {
    LocalizedMorphism out = e1;
    for (const auto& [o, s2] : e2.per_object) {
        auto it = out.per_object.find(o);
        if (it == out.per_object.end()) {
            out.per_object.emplace(o, s2);
            continue;
        }
        const LocalStep& s1 = it->second;
        if (std::holds_alternative<Spawn>(s2)) throw NotComposable("spawn", o);
        const Morphism& x2 = std::get<Morphism>(s2);
        try {
            if (const auto* sp = std::get_if<Spawn>(&s1)) {
                it->second = Spawn{label::apply(x2, inner, sp->initial)};
            } else {
                auto mid = between.find(o);
                if (mid == between.end()) throw NotComposable("absent", o);
                it->second = label::compose(std::get<Morphism>(s1), x2, inner, mid->second);
            }
        } catch (const NotComposable& e) {
            if (!e.object_id.empty()) throw;
            throw NotComposable(e.index, o);
        }
    }
    return out;
}

LocalSnapshot apply_localized(const LocalizedMorphism& eta, const label::LabelSignature& inner,
                              const LocalSnapshot& source) {
    LocalSnapshot target = source;
    for (const auto& [o, step] : eta.per_object) {
        auto it = target.find(o);
        if (const auto* sp = std::get_if<Spawn>(&step)) {
            if (it != target.end()) throw NotComposable("spawn", o);
            target.emplace(o, sp->initial);
            continue;
        }
        if (it == target.end()) throw NotComposable("absent", o);
        try {
            it->second = label::apply(std::get<Morphism>(step), inner, it->second);
        } catch (const NotComposable& e) {
            throw NotComposable(e.index, o);
        }
    }
    return target;
}

LocalizedMorphism between(const LocalSnapshot& source, const LocalSnapshot& target,
                          const label::LabelSignature& inner) {
    LocalizedMorphism eta;
    for (const auto& [o, snap] : source) {
        if (!target.contains(o)) throw NotComposable("removed", o);
    }
    for (const auto& [o, tgt] : target) {
        auto it = source.find(o);
        if (it == source.end()) {
            eta.per_object.emplace(o, Spawn{tgt});
            continue;
        }
        Morphism x;
        for (const auto& c : inner.components()) {
            const auto& name = c.index.name;
            auto a = it->second.find(name);
            auto b = tgt.find(name);
            label::Datum da = a == it->second.end() ? c.domain.bottom() : a->second;
            label::Datum db = b == tgt.end() ? c.domain.bottom() : b->second;
            if (da == db) continue;
            if (c.kind != label::ComponentKind::ReadWrite) {
                throw KindMismatch(name, "only read-write components may change");
            }
            x.entries.emplace(name, label::Pair{da, db});
        }
        if (!x.entries.empty()) eta.per_object.emplace(o, std::move(x));
    }
    return eta;
}

bool is_identity(const LocalizedMorphism& eta) {
    for (const auto& [o, step] : eta.per_object) {
        const auto* m = std::get_if<Morphism>(&step);
        if (!m || !label::is_identity(*m)) return false;
    }
    return true;
}

label::Datum to_datum(const LocalSnapshot& s) {
    label::DatumMap m;
    for (const auto& [o, snap] : s) m.emplace(o, label::Datum::map(snap));
    return label::Datum::map(std::move(m));
}

LocalSnapshot from_datum(const label::Datum& d) {
    LocalSnapshot s;
    for (const auto& [o, inner] : d.as_map()) s.emplace(o, inner.as_map());
    return s;
}

label::MorphismComponent as_component(LocalizedMorphism eta) {
    return label::Localized{std::make_shared<const LocalizedMorphism>(std::move(eta))};
}

}  // namespace dsos::enc
