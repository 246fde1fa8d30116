#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dhpu/dhp.hpp"
#include "dhpu/subst.hpp"
#include "dhpu/term.hpp"

namespace dhpu {

enum class RuleLabel {
  Delete,     // drop an alpha-trivial equation
  Decompose,  // split a rigid-rigid equation into argument equations
  Eliminate,  // bind an eta-pattern variable to the other side
  Imitate,    // partial binding headed by the rigid function symbol
  Project,    // partial binding projecting a binder position
  FlexSame,   // flex-flex, same head: keep the agreeing arguments
  FlexDiff    // flex-flex, different heads: keep inter-expressible arguments
};

const char* rule_name(RuleLabel r);

// Both sides share the binder prefix (rhs renamed to lhs names) and the pair
// is oriented by canonical key, so equal problems produce equal states.
struct Equation {
  Term lhs, rhs;
};

Equation mk_equation(Term lhs, Term rhs);
std::string equation_key(const Equation& e);

// Deterministic fresh flex variables H1, H2, ... skipping reserved names.
struct FreshVars {
  int next = 1;
  std::set<std::string> reserved;

  TypedVar make(const Type& ty);
};

// \z1..zn. h (\y.H1 z̄ ȳ) ... — the unique partial binding headed by h
Term make_imitation_binding(const Type& tau, const Head& h, FreshVars& fresh);

// (position, binding) per binder position whose result sort matches tau's and
// whose corresponding argument is headed by target_head, ascending
std::vector<std::pair<std::size_t, Term>> make_projection_bindings(
    const Type& tau, const Head& target_head, const std::vector<Term>& args,
    FreshVars& fresh);

// most general solution of x̄.F(s̄) ≈ x̄.F(t̄): keep the positions where the
// arguments agree
Subst solve_flex_flex_same(const TypedVar& F, const std::vector<Term>& ss,
                           const std::vector<Term>& ts, FreshVars& fresh);

// Solutions of x̄.F(s̄) ≈ x̄.G(t̄), F ≠ G: pair each argument with its
// reconstruction over the other side where one exists.  Ambiguous
// reconstructions yield one branch per combination; under Strict they are
// impossible and a single branch returns.  Each branch reports the fresh
// counter it consumed up to.
std::vector<std::pair<Subst, int>> solve_flex_flex_diff(
    const TypedVar& F, const std::vector<Term>& ss, const TypedVar& G,
    const std::vector<Term>& ts, const std::vector<TypedVar>& ctx,
    CheckMode mode, const FreshVars& fresh);

enum class Traversal { BreadthFirst, IterativeDeepening };
enum class SearchStatus { Complete, BoundExhausted };

struct TraceStep {
  RuleLabel rule;
  // printed equations after the step, in canonical order
  std::vector<std::pair<std::string, std::string>> equations;
  Subst accumulated;  // after the step
};

struct EngineConfig {
  CheckMode check_mode = CheckMode::Strict;
  Traversal traversal = Traversal::BreadthFirst;
  int max_steps = 64;
  std::optional<int> max_solutions;
  // give cyclic flex-rigid equations lowest priority and give up when only
  // they remain (cuts the branch instead of diverging)
  bool postpone_cyclic = false;
  bool record_trace = false;
};

struct Solution {
  Subst subst;  // restricted to the free variables of the input problem
  int depth = 0;
  std::vector<TraceStep> trace;
};

struct Outcome {
  std::vector<Solution> solutions;
  SearchStatus status = SearchStatus::Complete;
};

// Index of the equation to process next: trivial, then eliminable, then
// rigid-rigid, then non-cyclic flex-rigid, then flex-flex; when postponing,
// cyclic flex-rigid equations come after everything else.  Ties resolve by
// position (the list is kept canonically sorted).
std::size_t select_equation(const std::vector<Equation>& eqs,
                            bool postpone_cyclic);

// Fair bounded enumeration of a complete set of unifiers.  Solutions are
// sound (asserted) and, under Strict, every intermediate equation stays a
// valid pattern (asserted).  Status is Complete only if the whole derivation
// tree was explored within bounds.
Outcome enumerate_unifiers(const std::vector<std::pair<Term, Term>>& problem,
                           const EngineConfig& config);

}  // namespace dhpu
