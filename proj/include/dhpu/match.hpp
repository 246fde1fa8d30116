#pragma once

#include <set>
#include <vector>

#include "dhpu/dhp.hpp"
#include "dhpu/subst.hpp"
#include "dhpu/term.hpp"

namespace dhpu {

// rename the top binder prefix of t to the given names, capture-avoiding;
// `to` must agree with t.binders in length and types
Term rename_top_binders(const Term& t, const std::vector<TypedVar>& to);

// All terms w with fv(w) avoiding `forbidden` such that substituting ss for
// zs in w gives body.  Candidates are found per node: for each ss[i] whose
// own binders trail expanded (head h_i, leading arguments q̄), a node with
// head h_i and matching q̄ may be rewritten to zs[i] applied to inversions of
// the remaining arguments; a head not in `forbidden` may be copied with its
// arguments inverted.  Rewrites come first (argument index ascending), the
// copy last; the result is deduplicated up to alpha-equality.
std::vector<Term> invert(const Term& body, const std::vector<Term>& ss,
                         const std::vector<TypedVar>& zs,
                         const std::set<std::string>& forbidden);

struct PatternRejected : std::runtime_error {
  DhpReport report;
  PatternRejected(DhpReport r, const std::string& msg)
      : std::runtime_error(msg), report(std::move(r)) {}
};

struct MatchResult {
  enum class Kind { NoMatch, Unique, Ambiguous };
  Kind kind = Kind::NoMatch;
  std::vector<Subst> substs;  // deterministic candidate order
};

// Finds all th with dom(th) within fv(pattern) and pattern·th alpha-equal to
// target.  The pattern is validated by check_dhp first (PatternRejected on
// failure); under Strict the result is NoMatch or Unique, anything more is an
// internal error.
MatchResult match(const Term& pattern, const Term& target, CheckMode mode);

// true iff some ga with gen·ga agreeing with inst on every variable in
// `over` (comparisons use the variable's canonical form where unbound)
bool is_instance(const Subst& inst, const Subst& gen,
                 const std::map<std::string, Type>& over);

}  // namespace dhpu
