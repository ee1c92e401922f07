#pragma once

#include <map>
#include <string>
#include <variant>

#include "dsos/label/morphism.hpp"

namespace dsos::enc {

using ObjectId = std::string;

/// Object id -> local snapshot over the inner signature.
using LocalSnapshot = std::map<ObjectId, label::Snapshot>;

/// Creation of an object that was absent in the source.
struct Spawn {
    label::Snapshot initial;
    friend bool operator==(const Spawn&, const Spawn&) = default;
};

using LocalStep = std::variant<label::Morphism, Spawn>;

/// Per-object morphisms; absent objects are identities.
struct LocalizedMorphism {
    std::map<ObjectId, LocalStep> per_object;
    friend bool operator==(const LocalizedMorphism&, const LocalizedMorphism&) = default;
};

/// o:X
LocalizedMorphism localize(const ObjectId& o, label::Morphism x);
LocalizedMorphism spawn(const ObjectId& o, label::Snapshot initial);

/// eta[o:X]. Throws ConflictingLocalStep when eta already moves o.
LocalizedMorphism merge(const LocalizedMorphism& eta, const ObjectId& o, label::Morphism x);

/// Pointwise composition. Throws NotComposable(idx, o).
LocalizedMorphism compose_localized(const LocalizedMorphism& e1, const LocalizedMorphism& e2,
                                    const label::LabelSignature& inner, const LocalSnapshot& between);

/// Target of eta from `source`. Throws NotComposable(idx, o).
LocalSnapshot apply_localized(const LocalizedMorphism& eta, const label::LabelSignature& inner,
                              const LocalSnapshot& source);

/// The unique morphism between two local snapshots over an inner signature
/// without write-only components: Pair entries for every changed component.
LocalizedMorphism between(const LocalSnapshot& source, const LocalSnapshot& target,
                          const label::LabelSignature& inner);

bool is_identity(const LocalizedMorphism& eta);

label::Datum to_datum(const LocalSnapshot& s);
LocalSnapshot from_datum(const label::Datum& d);

/// Wraps eta as an outer morphism component.
label::MorphismComponent as_component(LocalizedMorphism eta);

}  // namespace dsos::enc
