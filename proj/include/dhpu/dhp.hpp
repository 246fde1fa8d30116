#pragma once

#include <string>
#include <vector>

#include "dhpu/term.hpp"

namespace dhpu {

enum class CheckMode { Strict, Lenient, Off };

// Conditions on the argument list of a free-variable head:
//   CondI    an argument has no free variables, or one not bound above
//   CondII   an argument is not expanded over its own binders
//   CondIII  an argument occurs expanded inside a sibling argument
enum class DhpCondition { CondI, CondII, CondIII };

const char* condition_name(DhpCondition c);  // "i", "ii", "iii"

struct DhpViolation {
  DhpCondition condition;
  // 0-based argument indices from the root to the offending argument
  std::vector<std::size_t> path;
  // the argument itself, and for CondIII the sibling found inside it
  std::string argument;
  std::string witness;
};

struct DhpReport {
  bool accepted = true;
  std::vector<DhpViolation> violations;  // in Lenient mode: iii as warnings
};

// Checks every subterm occurrence with a free-variable head.  Strict rejects
// on any violation; Lenient accepts when only CondIII fires; Off skips the
// walk entirely.
DhpReport check_dhp(const Term& t, CheckMode mode);

// The per-occurrence check on one argument list under the given binder
// context; appends violations with the given path prefix.
void check_var_arg_list(const std::vector<Term>& args,
                        const std::set<std::string>& bound_above,
                        const std::vector<std::size_t>& path_prefix,
                        std::vector<DhpViolation>& out);

}  // namespace dhpu
