#include "dsos/label/signature.hpp"

#include "dsos/error.hpp"
#include "dsos/syntax/term.hpp"

namespace dsos::label {

std::string_view to_string(Namespace ns) { return ns == Namespace::Data ? "data" : "upgrade"; }

std::string_view to_string(ComponentKind k) {
    switch (k) {
        case ComponentKind::ReadOnly: return "read-only";
        case ComponentKind::ReadWrite: return "read-write";
        case ComponentKind::WriteOnly: return "write-only";
    }
    return "?";
}

Domain Domain::map_of(Domain e) {
    return {Kind::MapOf, std::make_shared<const Domain>(std::move(e)), nullptr};
}

Domain Domain::bag_of(Domain e) {
    return {Kind::BagOf, std::make_shared<const Domain>(std::move(e)), nullptr};
}

Domain Domain::local(LabelSignature inner) {
    return {Kind::Local, nullptr, std::make_shared<const LabelSignature>(std::move(inner))};
}

Datum Domain::bottom() const {
    switch (kind) {
        case Kind::Unit: return Datum::unit();
        case Kind::Value:
        case Kind::Code: return Datum::term(syntax::nil());
        case Kind::Nat: return Datum::nat(0);
        case Kind::Atom: return Datum::atom("");
        case Kind::MapOf:
        case Kind::Local: return Datum::map();
        case Kind::BagOf: return Datum::bag();
    }
    return Datum::unit();
}

bool operator==(const Domain& a, const Domain& b) {
    if (a.kind != b.kind) return false;
    if (bool(a.elem) != bool(b.elem)) return false;
    if (a.elem && !(*a.elem == *b.elem)) return false;
    if (bool(a.inner) != bool(b.inner)) return false;
    return !a.inner || *a.inner == *b.inner;
}

bool operator==(const LabelSignature& a, const LabelSignature& b) {
    if (a.components_.size() != b.components_.size()) return false;
    for (std::size_t i = 0; i < a.components_.size(); ++i) {
        const auto& x = a.components_[i];
        const auto& y = b.components_[i];
        if (!(x.index == y.index) || x.kind != y.kind || !(x.domain == y.domain) ||
            !(x.alphabet == y.alphabet)) {
            return false;
        }
    }
    return true;
}

LabelSignature LabelSignature::extend(Index idx, ComponentKind kind, Domain domain,
                                      Domain alphabet) const {
    if (contains(idx.name)) throw DuplicateIndex(idx.name);
    if (idx.ns == Namespace::Upgrade && kind != ComponentKind::ReadOnly) {
        throw UpgradeKindViolation(idx.name);
    }
    if (kind == ComponentKind::WriteOnly) domain = Domain::unit();
    LabelSignature out = *this;
    out.components_.push_back({std::move(idx), kind, std::move(domain), std::move(alphabet)});
    return out;
}

const Component* LabelSignature::find(const std::string& name) const {
    for (const auto& c : components_) {
        if (c.index.name == name) return &c;
    }
    return nullptr;
}

const Component& LabelSignature::at(const std::string& name) const {
    if (const auto* c = find(name)) return *c;
    throw UnknownIndex(name);
}

std::vector<std::string> LabelSignature::names() const {
    std::vector<std::string> out;
    for (const auto& c : components_) out.push_back(c.index.name);
    return out;
}

std::vector<std::string> LabelSignature::names(Namespace ns) const {
    std::vector<std::string> out;
    for (const auto& c : components_) {
        if (c.index.ns == ns) out.push_back(c.index.name);
    }
    return out;
}

Snapshot LabelSignature::bottom_snapshot() const {
    Snapshot s;
    for (const auto& c : components_) s.emplace(c.index.name, c.domain.bottom());
    return s;
}

LabelSignature extend_signature(const LabelSignature& sig, Index idx, ComponentKind kind,
                                Domain domain, Domain alphabet) {
    return sig.extend(std::move(idx), kind, std::move(domain), std::move(alphabet));
}

}  // namespace dsos::label
