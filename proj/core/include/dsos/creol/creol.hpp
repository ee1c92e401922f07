#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsos/enc/localized.hpp"
#include "dsos/label/morphism.hpp"
#include "dsos/syntax/term.hpp"
#include "dsos/uts/uts.hpp"

namespace dsos::creol {

using syntax::Term;

/// Per-object components: S store, MD local methods, L future labels,
/// T thread pool, V object version, CN class name (read-only).
const label::LabelSignature& inner_signature();

/// E (encapsulated objects), C classes, A attributes, UN upgrade numbers,
/// M message pools, N fresh counters; upgrade components UC, UA, UD.
const label::LabelSignature& signature();

/// Evaluation context `[] ; s1 ; s2 ...`, innermost continuation first.
using Context = std::vector<Term>;

/// Splits a non-value statement into context and redex.
std::pair<Context, Term> decompose(const Term& s);
Term plug(const Context& ev, const Term& redex);

struct Transition {
    uts::Label label;
    Term next;
    std::string rule;
    std::string actor;
};

struct StepResult {
    std::vector<Transition> transitions;
    /// (object, reason) for objects whose next statement has no rule.
    std::vector<std::pair<std::string, std::string>> stuck;
    /// Objects waiting on a future without a matching completion.
    std::vector<std::string> blocked;
};

struct Options {
    /// Adds one combined step moving every object with a purely local step.
    bool non_int = false;
};

StepResult step_system(const Term& sys, const label::Snapshot& snap, const Options& opts = {});

/// All objects idle with empty thread pools.
bool is_final(const Term& sys, const label::Snapshot& snap);

bool dep_check(const label::Datum& rho, const label::Datum& rho_prime);

struct ClassTables {
    label::Datum c, a, un, uc, ua, ud;
    friend bool operator==(const ClassTables&, const ClassTables&) = default;
};

ClassTables E_c(const uts::Delta& delta, const ClassTables& in);

uts::EndofunctorSpec spec_c();
uts::Registry registry();

/// Brings objects whose class was upgraded to the current class version.
/// Returns nullopt when nothing changes.
std::optional<label::Snapshot> refresh_objects(const label::Snapshot& snap);
label::Snapshot refresh_object_on_upgrade(const std::string& o, const label::Snapshot& snap);

/// Attribute names declared by an attribute statement.
std::vector<std::string> attribute_names(const Term& attrs);

/// Initial data for a system of static objects.
label::Snapshot initial_snapshot(const Term& sys);

/// Object ids of a system term, left to right.
std::vector<std::string> object_ids(const Term& sys);

/// Throws InvalidProgram.
void validate(const Term& sys);

/// Parse, resolve static object names and validate.
Term parse(std::string_view text, std::vector<std::string>* warnings = nullptr);
std::string render(const Term& t);

}  // namespace dsos::creol
