#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dhpu/subst.hpp"
#include "dhpu/term.hpp"

namespace dhpu {

// Finite enumeration budget.  Fresh variables are sort-typed and canonically
// named V1, V2, ... in order of first use, so two enumerated values that
// differ only by a renaming of fresh variables coincide.  Signatures and
// environments must not already use V-names.
struct EnumBudget {
  int max_term_size = 3;
  int max_fresh_vars = 0;
  Signature signature;
};

// All canonical terms of type tau over env, the signature's function symbols,
// and up to max_fresh_vars fresh variables, with term_size <= max_term_size.
// Deterministic order: environment heads first, then function symbols by
// name, then fresh variables; smaller argument tuples first.
std::vector<Term> enumerate_terms(const Type& tau,
                                  const std::vector<TypedVar>& env,
                                  const EnumBudget& budget);

// Every substitution th with dom(th) = fv(eqs), images drawn from the
// enumeration (sharing one fresh-variable pool across images, threaded in
// domain order), such that both sides of every equation coincide up to alpha
// under th.  Each element is re-verified through apply_subst by construction.
std::vector<Subst> brute_force_unifiers(
    const std::vector<std::pair<Term, Term>>& eqs, const EnumBudget& budget);

struct CompletenessReport {
  bool complete = true;
  // brute-force unifiers that are no instance of any engine solution
  std::vector<Subst> counterexamples;
};

// Checks that every brute-force unifier of eqs under the budget is an
// instance of some engine solution on fv(eqs).
CompletenessReport check_csu_completeness(
    const std::vector<Subst>& engine_solutions,
    const std::vector<std::pair<Term, Term>>& eqs, const EnumBudget& budget);

struct OrthoResult {
  enum class Kind { Orthogonal, CommonInstance, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Subst> witness;  // a common-instance unifier when found
};

// Decides whether th1 and th2 have a common instance.  A rigid head clash at
// the root of some image pair settles Orthogonal immediately; otherwise the
// images (helper variables renamed apart) are unified under step_bound steps:
// a solution is a CommonInstance witness, a drained search is Orthogonal, an
// exhausted bound is Unknown.
OrthoResult check_orthogonality(const Subst& th1, const Subst& th2,
                                const EnumBudget& budget, int step_bound);

}  // namespace dhpu
