#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsos/label/signature.hpp"

namespace dsos::enc {
struct LocalizedMorphism;
}

namespace dsos::label {

struct Identity {
    Datum obj;
    friend bool operator==(const Identity&, const Identity&) = default;
};

struct Pair {
    Datum src;
    Datum tgt;
    friend bool operator==(const Pair&, const Pair&) = default;
};

struct Emit {
    std::vector<Datum> elems;
    friend bool operator==(const Emit&, const Emit&) = default;
};

/// Per-object morphism of an encapsulated component.
struct Localized {
    std::shared_ptr<const enc::LocalizedMorphism> eta;
};
bool operator==(const Localized& a, const Localized& b);

using MorphismComponent = std::variant<Identity, Pair, Emit, Localized>;

/// A label: only mentioned components are stored; the rest are identities.
struct Morphism {
    std::map<std::string, MorphismComponent> entries;

    Morphism() = default;
    Morphism(std::initializer_list<std::pair<const std::string, MorphismComponent>> init)
        : entries(init) {}

    bool mentions(const std::string& idx) const { return entries.contains(idx); }
    friend bool operator==(const Morphism&, const Morphism&) = default;
};

/// The resolved default for an unmentioned component.
MorphismComponent default_component(const Component& c, const Snapshot& snap);

/// Throws UnknownIndex.
MorphismComponent get_component(const Morphism& m, const LabelSignature& sig,
                                const std::string& idx, const Snapshot& snap);

/// m1 followed by m2; `between` is the target of m1. Throws NotComposable.
Morphism compose(const Morphism& m1, const Morphism& m2, const LabelSignature& sig,
                 const Snapshot& between);

/// Throws UnknownIndex when `keep` names an index outside `sig`.
Morphism project(const Morphism& m, const std::set<std::string>& keep, const LabelSignature& sig);

/// Throws UnknownIndex when m mentions an index outside `into`.
Morphism embed(const Morphism& m, const LabelSignature& into);

/// Checks kinds and domains of present entries against sig.
/// Throws UnknownIndex or KindMismatch.
void validate(const Morphism& m, const LabelSignature& sig);

/// Checks that m starts at `source` and returns its target.
/// Throws NotComposable.
Snapshot apply(const Morphism& m, const LabelSignature& sig, const Snapshot& source);

/// Every resolved component is an identity or an empty emission.
bool is_identity(const Morphism& m);

/// Concatenation of all emissions at a write-only index.
std::vector<Datum> emitted(const Morphism& m, const std::string& idx);

nlohmann::json datum_to_json(const Datum& d, const Domain& dom);
/// Throws Error on shape mismatch.
Datum datum_from_json(const nlohmann::json& j, const Domain& dom);

nlohmann::json snapshot_to_json(const Snapshot& s, const LabelSignature& sig);
Snapshot snapshot_from_json(const nlohmann::json& j, const LabelSignature& sig);

nlohmann::json morphism_to_json(const Morphism& m, const LabelSignature& sig);
Morphism morphism_from_json(const nlohmann::json& j, const LabelSignature& sig);

/// Label in bracket notation, e.g. `{S=ρ ... S=ρ'}` style.
std::string pretty(const Morphism& m, const LabelSignature& sig);

}  // namespace dsos::label
