#pragma once

#include <string>

#include "dhpu/subst.hpp"
#include "dhpu/term.hpp"

namespace dhpu {

// "a", "a -> b", "(a, a) -> b", "(a -> a) -> b"
std::string print_type(const Type& ty);

// Re-parseable concrete syntax.  Binders are always annotated:
// "\z1:a z2:a. f (M z1) z2".  Arguments that are not bare heads are
// parenthesized.
std::string print_term(const Term& t);

// "{M |-> \z1:a z2:a. z1, N |-> c}" ordered by variable name
std::string print_subst(const Subst& th);

}  // namespace dhpu
