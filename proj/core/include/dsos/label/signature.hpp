#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsos/label/datum.hpp"

namespace dsos::label {

enum class Namespace : std::uint8_t { Data, Upgrade };
enum class ComponentKind : std::uint8_t { ReadOnly, ReadWrite, WriteOnly };

std::string_view to_string(Namespace ns);
std::string_view to_string(ComponentKind k);

struct Index {
    std::string name;
    Namespace ns = Namespace::Data;
    friend bool operator==(const Index&, const Index&) = default;
};

class LabelSignature;

/// Shape of a component's objects; drives the information-less object and
/// JSON encoding.
struct Domain {
    enum class Kind : std::uint8_t {
        Unit,   // single object (write-only components)
        Value,  // program value term
        Code,   // arbitrary program term
        Nat,
        Atom,
        MapOf,  // identifier -> elem
        BagOf,  // multiset of elem
        Local,  // object id -> snapshot over `inner`
    };
    Kind kind = Kind::Unit;
    std::shared_ptr<const Domain> elem;
    std::shared_ptr<const LabelSignature> inner;

    static Domain unit() { return {}; }
    static Domain value() { return {Kind::Value, nullptr, nullptr}; }
    static Domain code() { return {Kind::Code, nullptr, nullptr}; }
    static Domain natural() { return {Kind::Nat, nullptr, nullptr}; }
    static Domain atom() { return {Kind::Atom, nullptr, nullptr}; }
    static Domain map_of(Domain e);
    static Domain bag_of(Domain e);
    static Domain local(LabelSignature inner);

    /// The designated information-less object.
    Datum bottom() const;
};

struct Component {
    Index index;
    ComponentKind kind = ComponentKind::ReadWrite;
    Domain domain;
    /// Element domain of write-only emissions.
    Domain alphabet;
};

/// One object per component, keyed by index name. Covers both namespaces.
using Snapshot = std::map<std::string, Datum>;

/// Ordered list of uniquely named components.
class LabelSignature {
public:
    LabelSignature() = default;

    /// Throws DuplicateIndex or UpgradeKindViolation; never mutates *this.
    LabelSignature extend(Index idx, ComponentKind kind, Domain domain = Domain::unit(),
                          Domain alphabet = Domain::value()) const;

    const std::vector<Component>& components() const { return components_; }
    const Component* find(const std::string& name) const;
    /// Throws UnknownIndex.
    const Component& at(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }
    std::vector<std::string> names() const;
    std::vector<std::string> names(Namespace ns) const;

    /// Every component at its information-less object.
    Snapshot bottom_snapshot() const;

    friend bool operator==(const LabelSignature& a, const LabelSignature& b);

private:
    std::vector<Component> components_;
};

LabelSignature extend_signature(const LabelSignature& sig, Index idx, ComponentKind kind,
                                Domain domain = Domain::unit(), Domain alphabet = Domain::value());

bool operator==(const Domain& a, const Domain& b);

}  // namespace dsos::label
