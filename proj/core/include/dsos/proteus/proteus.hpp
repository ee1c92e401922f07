#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dsos/label/morphism.hpp"
#include "dsos/syntax/term.hpp"
#include "dsos/uts/uts.hpp"

namespace dsos::proteus {

using syntax::Term;

/// S, F, R (read-write tables), Out (write-only) and the upgrade
/// components U_S, U_F, U_R.
const label::LabelSignature& signature();

/// Replaces free occurrences of x by the closed value v.
Term subst(const Term& s, const Term& v, const std::string& x);

struct Transition {
    uts::Label label;
    Term next;
    std::string rule;
};

/// All rule instances at t (at most one). Throws Stuck for a non-value
/// without an applicable rule; returns nothing for a value.
std::vector<Transition> step(const Term& t, const label::Snapshot& snap);

/// Result of evaluating a binary operator on two values; nullopt when
/// the operand types do not fit.
std::optional<Term> eval_binop(syntax::BinaryOp op, const Term& a, const Term& b);

/// Table update shared by E_v, E_f and E_r: (ρ, ρ_u) -> (ρ', ρ_u').
std::pair<label::Datum, label::Datum> table_update(const uts::Delta& delta, const label::Datum& rho,
                                                   const label::Datum& rho_u,
                                                   bool consume_all = false);

inline std::pair<label::Datum, label::Datum> E_v(const uts::Delta& d, const label::Datum& rho,
                                                 const label::Datum& rho_u, bool all = false) {
    return table_update(d, rho, rho_u, all);
}
inline std::pair<label::Datum, label::Datum> E_f(const uts::Delta& d, const label::Datum& rho,
                                                 const label::Datum& rho_u, bool all = false) {
    return table_update(d, rho, rho_u, all);
}
inline std::pair<label::Datum, label::Datum> E_r(const uts::Delta& d, const label::Datum& rho,
                                                 const label::Datum& rho_u, bool all = false) {
    return table_update(d, rho, rho_u, all);
}

uts::EndofunctorSpec spec_v(bool consume_all = false);
uts::EndofunctorSpec spec_f(bool consume_all = false);
uts::EndofunctorSpec spec_r(bool consume_all = false);

/// Registry holding E_v, E_f and E_r.
uts::Registry registry(bool consume_all = false);

/// Throws InvalidProgram when t uses constructs outside the language.
void validate(const Term& t);

/// Parse and validate. Throws SyntaxError or InvalidProgram.
Term parse(std::string_view text);
std::string render(const Term& t);

}  // namespace dsos::proteus
