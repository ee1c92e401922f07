#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dsos/label/morphism.hpp"

namespace dsos::uts {

/// Identifier set carried by an upgrade construct.
using Delta = std::set<std::string>;

/// A Δ-parameterised family of endofunctors over a data x upgrade
/// sub-product. `apply` sees and returns only the components named by
/// the two index lists, so it can never inspect morphisms.
struct EndofunctorSpec {
    using Fn = std::function<label::Snapshot(const label::Snapshot&, const Delta&)>;

    std::string name;
    std::vector<label::Index> data_indexes;
    std::vector<label::Index> upgrade_indexes;
    Fn apply;

    std::set<std::string> index_names() const;
};

class Registry {
public:
    /// Throws DuplicateName or NamespaceViolation.
    Registry& add(EndofunctorSpec spec);
    /// Throws UnknownEndofunctor.
    const EndofunctorSpec& lookup(const std::string& name) const;
    bool contains(const std::string& name) const { return specs_.contains(name); }
    std::vector<std::string> names() const;

private:
    std::map<std::string, EndofunctorSpec> specs_;
};

/// Functional form of register: returns a new registry.
Registry register_spec(Registry reg, EndofunctorSpec spec);

struct Jump {
    std::string name;
    Delta delta;
    friend bool operator==(const Jump&, const Jump&) = default;
};

using Label = std::variant<label::Morphism, Jump>;

/// Total map on full snapshots.
using SnapshotMap = std::function<label::Snapshot(const label::Snapshot&)>;

/// Pairs the spec with the identity on every other component of sig.
/// Throws UnknownIndex.
SnapshotMap extend_endofunctor(const EndofunctorSpec& spec, const label::LabelSignature& sig,
                               Delta delta);

/// first, then second.
SnapshotMap compose_extended(SnapshotMap first, SnapshotMap second);

struct Verdict {
    bool pass = true;
    std::size_t checked = 0;
    /// Data tuple and Δ on which apply(d, u⊥) != (d, u⊥).
    std::optional<std::pair<label::Snapshot, Delta>> witness;
};

/// Each sample is a data tuple over the spec's data indexes plus a Δ.
Verdict check_no_sudden_jumps(const EndofunctorSpec& spec, const label::LabelSignature& sig,
                              const std::vector<std::pair<label::Snapshot, Delta>>& samples);

/// Alternating steps and jumps that must start with a step.
class Computation {
public:
    enum class EntryKind { Step, Jump, Injection };
    struct Entry {
        EntryKind kind;
        label::Morphism step;
        Jump jump;
        std::string injected_index;
        label::Snapshot target;
    };

    Computation(label::LabelSignature sig, const Registry* registry, label::Snapshot source);

    /// Throws NotComposable when target() is not the source of m.
    Computation& append_step(const label::Morphism& m);
    /// Throws JumpBeforeFirstStep on a computation without steps.
    Computation& append_jump(const Jump& j);
    /// External replacement of an upgrade component; not a transition.
    Computation& inject(const std::string& upgrade_index, label::Datum value);

    const label::Snapshot& source() const { return source_; }
    const label::Snapshot& target() const { return target_; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t steps() const { return steps_; }

private:
    label::LabelSignature sig_;
    const Registry* registry_;
    label::Snapshot source_;
    label::Snapshot target_;
    std::vector<Entry> entries_;
    std::size_t steps_ = 0;
};

}  // namespace dsos::uts
