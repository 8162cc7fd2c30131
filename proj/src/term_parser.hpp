#pragma once

#include "lexer.hpp"

namespace pregax::detail {

/// Parses one term from the stream, stopping at the first token that cannot
/// continue it.
Term parse_term(TokenStream &ts, const Signature &sig, bool allow_variables);

}  // namespace pregax::detail
