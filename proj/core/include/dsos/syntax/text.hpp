#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dsos/syntax/term.hpp"

namespace dsos::syntax {

/// Parses the shared concrete grammar of both reference languages.
///
/// Accepts every term shape `render` can produce, so parse(render(t)) == t
/// for all terms. Language front ends restrict the accepted constructs
/// afterwards. Throws SyntaxError with line and column.
Term parse_term(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Re-parseable text; parenthesizes only where precedence requires it.
std::string render(const Term& t);

}  // namespace dsos::syntax
