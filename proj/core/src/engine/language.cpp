#include "dsos/engine/language.hpp"

#include "dsos/creol/creol.hpp"
#include "dsos/error.hpp"
#include "dsos/proteus/proteus.hpp"
#include "dsos/syntax/text.hpp"

namespace dsos::engine {

namespace {

class ProteusLanguage final : public Language {
public:
    explicit ProteusLanguage(LanguageOptions opts) : registry_(proteus::registry(opts.consume_all)) {}

    std::string name() const override { return "proteus"; }
    const label::LabelSignature& signature() const override { return proteus::signature(); }
    const uts::Registry& registry() const override { return registry_; }

    Term parse(std::string_view text, std::vector<std::string>*) const override {
        return proteus::parse(text);
    }

    label::Snapshot initial_snapshot(const Term&) const override {
        return signature().bottom_snapshot();
    }

    StepOutcome step(const Term& t, const label::Snapshot& snap) const override {
        StepOutcome out;
        try {
            for (auto& tr : proteus::step(t, snap)) {
                out.transitions.push_back({std::move(tr.label), std::move(tr.next), tr.rule, ""});
            }
        } catch (const Stuck& e) {
            out.stuck.push_back(e.what());
        }
        return out;
    }

    bool is_final(const Term& t, const label::Snapshot&) const override { return t.is_value(); }

private:
    uts::Registry registry_;
};

class CreolLanguage final : public Language {
public:
    explicit CreolLanguage(LanguageOptions opts) : registry_(creol::registry()) {
        opts_.non_int = opts.non_int;
    }

    std::string name() const override { return "creol"; }
    const label::LabelSignature& signature() const override { return creol::signature(); }
    const uts::Registry& registry() const override { return registry_; }

    Term parse(std::string_view text, std::vector<std::string>* warnings) const override {
        return creol::parse(text, warnings);
    }

    label::Snapshot initial_snapshot(const Term& program) const override {
        return creol::initial_snapshot(program);
    }

    StepOutcome step(const Term& t, const label::Snapshot& snap) const override {
        auto r = creol::step_system(t, snap, opts_);
        StepOutcome out;
        for (auto& tr : r.transitions) {
            out.transitions.push_back(
                {std::move(tr.label), std::move(tr.next), std::move(tr.rule), std::move(tr.actor)});
        }
        for (auto& [o, why] : r.stuck) out.stuck.push_back(o + ": " + why);
        return out;
    }

    bool is_final(const Term& t, const label::Snapshot& snap) const override {
        return creol::is_final(t, snap);
    }

    std::optional<label::Snapshot> after_jump(const label::Snapshot& snap) const override {
        return creol::refresh_objects(snap);
    }

private:
    uts::Registry registry_;
    creol::Options opts_;
};

class ExtendedLanguage final : public Language {
public:
    ExtendedLanguage(std::shared_ptr<const Language> base, std::string fresh, bool mutate)
        : base_(std::move(base)),
          fresh_(std::move(fresh)),
          mutate_(mutate),
          sig_(base_->signature().extend({fresh_, label::Namespace::Data},
                                         label::ComponentKind::ReadWrite,
                                         label::Domain::natural())) {}

    std::string name() const override { return base_->name() + "+" + fresh_; }
    const label::LabelSignature& signature() const override { return sig_; }
    const uts::Registry& registry() const override { return base_->registry(); }

    Term parse(std::string_view text, std::vector<std::string>* warnings) const override {
        return base_->parse(text, warnings);
    }

    label::Snapshot initial_snapshot(const Term& program) const override {
        auto s = base_->initial_snapshot(program);
        s.insert_or_assign(fresh_, label::Datum::nat(0));
        return s;
    }

    StepOutcome step(const Term& t, const label::Snapshot& snap) const override {
        StepOutcome out = base_->step(t, snap);
        if (mutate_) {
            const label::Datum cur = snap.at(fresh_);
            for (auto& tr : out.transitions) {
                if (auto* m = std::get_if<label::Morphism>(&tr.label)) {
                    m->entries.insert_or_assign(
                        fresh_, label::Pair{cur, label::Datum::nat(cur.as_nat() + 1)});
                }
            }
        }
        return out;
    }

    bool is_final(const Term& t, const label::Snapshot& snap) const override {
        return base_->is_final(t, snap);
    }

    std::optional<label::Snapshot> after_jump(const label::Snapshot& snap) const override {
        return base_->after_jump(snap);
    }

private:
    std::shared_ptr<const Language> base_;
    std::string fresh_;
    bool mutate_;
    label::LabelSignature sig_;
};

}  // namespace

std::shared_ptr<const Language> make_proteus(LanguageOptions opts) {
    return std::make_shared<ProteusLanguage>(opts);
}

std::shared_ptr<const Language> make_creol(LanguageOptions opts) {
    return std::make_shared<CreolLanguage>(opts);
}

std::shared_ptr<const Language> make_language(std::string_view name, LanguageOptions opts) {
    if (name == "proteus") return make_proteus(opts);
    if (name == "creol") return make_creol(opts);
    throw Error("unknown language: " + std::string(name));
}

std::string language_for_path(std::string_view path) {
    auto ends_with = [&](std::string_view suffix) {
        return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
    };
    if (ends_with(".prot")) return "proteus";
    if (ends_with(".creol")) return "creol";
    return "";
}

std::shared_ptr<const Language> extend_language(std::shared_ptr<const Language> base,
                                                const std::string& fresh_index, bool mutate) {
    return std::make_shared<ExtendedLanguage>(std::move(base), fresh_index, mutate);
}

}  // namespace dsos::engine
