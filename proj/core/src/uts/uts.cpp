#include "dsos/uts/uts.hpp"

#include "dsos/error.hpp"

namespace dsos::uts {

using label::Namespace;
using label::Snapshot;

std::set<std::string> EndofunctorSpec::index_names() const {
    std::set<std::string> out;
    for (const auto& i : data_indexes) out.insert(i.name);
    for (const auto& i : upgrade_indexes) out.insert(i.name);
    return out;
}

Registry& Registry::add(EndofunctorSpec spec) {
    if (specs_.contains(spec.name)) throw DuplicateName(spec.name);
    if (spec.data_indexes.empty()) throw NamespaceViolation("<no data index>");
    if (spec.upgrade_indexes.empty()) throw NamespaceViolation("<no upgrade index>");
    for (const auto& i : spec.data_indexes) {
        if (i.ns != Namespace::Data) throw NamespaceViolation(i.name);
    }
    for (const auto& i : spec.upgrade_indexes) {
        if (i.ns != Namespace::Upgrade) throw NamespaceViolation(i.name);
    }
    auto name = spec.name;
    specs_.emplace(std::move(name), std::move(spec));
    return *this;
}

const EndofunctorSpec& Registry::lookup(const std::string& name) const {
    auto it = specs_.find(name);
    if (it == specs_.end()) throw UnknownEndofunctor(name);
    return it->second;
}

std::vector<std::string> Registry::names() const {
    std::vector<std::string> out;
    for (const auto& [n, _] : specs_) out.push_back(n);
    return out;
}

Registry register_spec(Registry reg, EndofunctorSpec spec) {
    reg.add(std::move(spec));
    return reg;
}

namespace {

Snapshot restrict_to(const Snapshot& s, const EndofunctorSpec& spec,
                     const label::LabelSignature& sig) {
    Snapshot out;
    for (const auto& name : spec.index_names()) {
        auto it = s.find(name);
        out.emplace(name, it != s.end() ? it->second : sig.at(name).domain.bottom());
    }
    return out;
}

}  // namespace

SnapshotMap extend_endofunctor(const EndofunctorSpec& spec, const label::LabelSignature& sig,
                               Delta delta) {
    for (const auto& name : spec.index_names()) {
        const auto& c = sig.at(name);
        const bool upgrade = c.index.ns == Namespace::Upgrade;
        bool declared_upgrade = false;
        for (const auto& i : spec.upgrade_indexes) declared_upgrade |= i.name == name;
        if (upgrade != declared_upgrade) throw NamespaceViolation(name);
    }
    return [spec, sig, delta = std::move(delta)](const Snapshot& full) {
        Snapshot out = full;
        Snapshot part = spec.apply(restrict_to(full, spec, sig), delta);
        for (const auto& name : spec.index_names()) {
            auto it = part.find(name);
            if (it != part.end()) out.insert_or_assign(name, it->second);
        }
        return out;
    };
}

SnapshotMap compose_extended(SnapshotMap first, SnapshotMap second) {
    return [first = std::move(first), second = std::move(second)](const Snapshot& s) {
        return second(first(s));
    };
}

Verdict check_no_sudden_jumps(const EndofunctorSpec& spec, const label::LabelSignature& sig,
                              const std::vector<std::pair<Snapshot, Delta>>& samples) {
    Verdict v;
    for (const auto& [data, delta] : samples) {
        Snapshot tuple;
        for (const auto& i : spec.data_indexes) {
            auto it = data.find(i.name);
            tuple.emplace(i.name, it != data.end() ? it->second : sig.at(i.name).domain.bottom());
        }
        for (const auto& i : spec.upgrade_indexes) {
            tuple.emplace(i.name, sig.at(i.name).domain.bottom());
        }
        ++v.checked;
        if (!(spec.apply(tuple, delta) == tuple)) {
            v.pass = false;
            v.witness = std::make_pair(data, delta);
            return v;
        }
    }
    return v;
}

Computation::Computation(label::LabelSignature sig, const Registry* registry, Snapshot source)
    : sig_(std::move(sig)), registry_(registry), source_(source), target_(std::move(source)) {}

Computation& Computation::append_step(const label::Morphism& m) {
    target_ = label::apply(m, sig_, target_);
    entries_.push_back({EntryKind::Step, m, {}, {}, target_});
    ++steps_;
    return *this;
}

Computation& Computation::append_jump(const Jump& j) {
    if (steps_ == 0) throw JumpBeforeFirstStep();
    if (!registry_) throw UnknownEndofunctor(j.name);
    target_ = extend_endofunctor(registry_->lookup(j.name), sig_, j.delta)(target_);
    entries_.push_back({EntryKind::Jump, {}, j, {}, target_});
    return *this;
}

Computation& Computation::inject(const std::string& upgrade_index, label::Datum value) {
    const auto& c = sig_.at(upgrade_index);
    if (c.index.ns != Namespace::Upgrade) throw NamespaceViolation(upgrade_index);
    target_.insert_or_assign(upgrade_index, std::move(value));
    entries_.push_back({EntryKind::Injection, {}, {}, upgrade_index, target_});
    return *this;
}

}  // namespace dsos::uts
