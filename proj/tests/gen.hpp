#pragma once

#include <optional>
#include <random>
#include <vector>

#include "dhpu/dhp.hpp"
#include "dhpu/subst.hpp"
#include "dhpu/term.hpp"

namespace dhpu::testgen {

using Rng = std::mt19937_64;

// single-sorted signature used by most property suites:
// c : a, f : a -> a, g : (a, a) -> a, k : (a -> a) -> a
Signature base_sig();

// pick an integer in [lo, hi]
int pick(Rng& rng, int lo, int hi);

// random simple type over the given sorts; depth bounds argument nesting
Type random_type(Rng& rng, const std::vector<std::string>& sorts, int depth);

// Random eta-long term of the given type.  Heads come from the scope (the
// binders accumulated along the way), `vars`, and the signature; `fuel`
// bounds the recursion.  Binder names are globally distinct in the result.
Term random_term(Rng& rng, const Signature& sig,
                 const std::vector<TypedVar>& vars, const Type& tau, int fuel);

// Random deterministic pattern: like random_term, but free variables from
// `flex` may head subterms, and their argument lists are built so the
// pattern conditions hold by construction (each argument closes over its own
// distinct bound variable, higher-order arguments are eta-expanded binders).
Term random_dhp(Rng& rng, const Signature& sig,
                const std::vector<TypedVar>& flex, const Type& tau, int fuel);

// Substitution binding every variable in `vars` to a random rigid image
// (funs and binders only), so pattern status is preserved by application.
Subst random_rigid_subst(Rng& rng, const Signature& sig,
                         const std::vector<TypedVar>& vars, int fuel);

// Argument list satisfying the pattern conditions over the given context:
// each element anchors a distinct context variable (sort arguments through a
// rigid tree, higher ones as the exact-type eta-expansion).  nullopt when the
// context cannot supply anchors for every requested type.
std::optional<std::vector<Term>> random_var_arg_list(
    Rng& rng, const Signature& sig, const std::vector<TypedVar>& ctx,
    const std::vector<Type>& arg_types);

}  // namespace dhpu::testgen
