#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsos/label/morphism.hpp"
#include "dsos/syntax/term.hpp"
#include "dsos/uts/uts.hpp"

namespace dsos::engine {

using syntax::Term;

struct Transition {
    uts::Label label;
    Term next;
    std::string rule;
    /// Object that moved; empty for sequential languages.
    std::string actor;
};

struct StepOutcome {
    std::vector<Transition> transitions;
    /// Reasons for stuck subterms (objects, or the whole program).
    std::vector<std::string> stuck;
};

/// A rule pack: signature, endofunctors and the small-step relation.
class Language {
public:
    virtual ~Language() = default;

    virtual std::string name() const = 0;
    virtual const label::LabelSignature& signature() const = 0;
    virtual const uts::Registry& registry() const = 0;

    virtual Term parse(std::string_view text, std::vector<std::string>* warnings) const = 0;
    virtual label::Snapshot initial_snapshot(const Term& program) const = 0;
    virtual StepOutcome step(const Term& t, const label::Snapshot& snap) const = 0;
    /// True when no transition remains because the program is done.
    virtual bool is_final(const Term& t, const label::Snapshot& snap) const = 0;
    /// Post-jump bookkeeping (object refresh); nullopt when nothing changes.
    virtual std::optional<label::Snapshot> after_jump(const label::Snapshot&) const {
        return std::nullopt;
    }
};

struct LanguageOptions {
    bool consume_all = false;
    bool non_int = false;
};

std::shared_ptr<const Language> make_proteus(LanguageOptions opts = {});
std::shared_ptr<const Language> make_creol(LanguageOptions opts = {});

/// "proteus" or "creol"; throws Error otherwise.
std::shared_ptr<const Language> make_language(std::string_view name, LanguageOptions opts = {});

/// Language from a file extension (.prot / .creol); empty when unknown.
std::string language_for_path(std::string_view path);

/// Wraps `base` with an extra read-write component that its rules never
/// mention. With `mutate`, every step also rewrites that component.
std::shared_ptr<const Language> extend_language(std::shared_ptr<const Language> base,
                                                const std::string& fresh_index, bool mutate = false);

}  // namespace dsos::engine
