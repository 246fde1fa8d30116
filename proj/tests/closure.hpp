// One-instance runners for the substitution-closure properties, shared by the
// unit and acceptance suites.  Each draws a random instance whose premises
// hold by construction and returns whether the conclusion held.
#pragma once

#include <optional>
#include <set>
#include <vector>

#include "dhpu/dhp.hpp"
#include "dhpu/subst.hpp"
#include "dhpu/term.hpp"
#include "gen.hpp"

namespace dhpu::closure {

namespace detail {

inline Type ta() { return sort("a"); }
inline Type tf() { return Type{{ta()}, "a"}; }
inline Type tg() { return Type{{ta(), ta()}, "a"}; }

// rigid layers around a sort-a term; the extra slot draws over `vars`
inline Term wrap_rigid(testgen::Rng& rng, const Signature& sig,
                       const std::vector<TypedVar>& vars, Term t, int layers) {
  for (int i = 0; i < layers; ++i) {
    switch (testgen::pick(rng, 0, 2)) {
      case 0:
        t = mk_fun_head({}, "f", tf(), {std::move(t)});
        break;
      case 1:
        t = mk_fun_head({}, "g", tg(),
                        {std::move(t), testgen::random_term(rng, sig, vars, ta(), 1)});
        break;
      default:
        t = mk_fun_head({}, "g", tg(),
                        {testgen::random_term(rng, sig, vars, ta(), 1), std::move(t)});
        break;
    }
  }
  return t;
}

// sort-a term over vars that mentions at least one of them
inline Term anchored_term(testgen::Rng& rng, const Signature& sig,
                          const std::vector<TypedVar>& vars, int fuel) {
  for (;;) {
    Term t = testgen::random_term(rng, sig, vars, ta(), fuel);
    for (const auto& v : vars)
      if (occurs_free(v.name, t)) return t;
  }
}

}  // namespace detail

// substitution associativity: (s th) de alpha-equals s (th de)
inline bool run_subst_assoc(testgen::Rng& rng, const Signature& sig) {
  using namespace detail;
  std::vector<TypedVar> outer{{"M", tg()}, {"F", tf()}, {"N", tg()}};
  std::vector<TypedVar> inner{{"P", tg()}, {"Q", tf()}};
  Type tau = testgen::random_type(rng, {"a"}, 1);
  Term s = testgen::random_term(rng, sig, outer, tau, 3);
  Subst th;
  for (const auto& v : outer)
    if (testgen::pick(rng, 0, 2) > 0)
      th.bind(v, testgen::random_term(rng, sig, inner, v.type, 2));
  Subst de = testgen::random_rigid_subst(rng, sig, inner, 2);
  return alpha_eq(apply_subst(apply_subst(s, th), de),
                  apply_subst(s, compose(th, de)));
}

// conditioned transitivity of the expanded-subterm relation: if s contains t
// expanded and t contains u expanded then s contains u expanded
inline bool run_subte_trans(testgen::Rng& rng, const Signature& sig) {
  using namespace detail;
  std::vector<TypedVar> xs{{"x", ta()}};
  Term u, t_inner;
  if (testgen::pick(rng, 0, 1) == 0) {
    // padded occurrence: u re-exports a trailing binder that the occurrence
    // instantiates with an arbitrary term
    Term a = anchored_term(rng, sig, xs, 1);
    u = mk_term({TypedVar{"z", ta()}}, Head{HeadKind::Fun, "g", tg()},
                {a, mk_var_head({}, TypedVar{"z", ta()}, {})});
    t_inner = mk_fun_head({}, "g", tg(),
                          {a, testgen::random_term(rng, sig, xs, ta(), 1)});
  } else {
    u = anchored_term(rng, sig, xs, 2);
    t_inner = u;
  }
  Term t = wrap_rigid(rng, sig, xs, t_inner, testgen::pick(rng, 0, 2));
  Term s = wrap_rigid(rng, sig, xs, t, testgen::pick(rng, 1, 2));
  if (!contains_expanded(t, u) || !contains_expanded(s, t)) return false;
  return contains_expanded(s, u);
}

// the expanded-subterm relation survives substituting expanded terms for the
// shared context variables
inline bool run_subte_subst(testgen::Rng& rng, const Signature& sig) {
  using namespace detail;
  std::vector<TypedVar> ys{{"y1", ta()}, {"y2", ta()}};
  std::vector<TypedVar> xs{{"x1", ta()}};
  Term v, occ;
  if (testgen::pick(rng, 0, 1) == 0) {
    Term b = anchored_term(rng, sig, ys, 1);
    v = mk_term({TypedVar{"z", ta()}}, Head{HeadKind::Fun, "g", tg()},
                {b, mk_var_head({}, TypedVar{"z", ta()}, {})});
    occ = mk_fun_head({}, "g", tg(),
                      {b, testgen::random_term(rng, sig, ys, ta(), 1)});
  } else {
    v = anchored_term(rng, sig, ys, 2);
    occ = v;
  }
  Term u = wrap_rigid(rng, sig, ys, occ, testgen::pick(rng, 0, 2));
  if (!contains_expanded(u, v)) return false;
  Subst th;
  for (const auto& y : ys)
    th.bind(y, testgen::random_term(rng, sig, xs, ta(), testgen::pick(rng, 0, 2)));
  return contains_expanded(apply_subst(u, th), apply_subst(v, th));
}

// substituting one pattern argument list into another yields a pattern
// argument list; nullopt when the drawn contexts cannot anchor the types
inline std::optional<bool> run_var_arg_list_subst(testgen::Rng& rng,
                                                  const Signature& sig) {
  using namespace detail;
  bool higher = testgen::pick(rng, 0, 2) == 0;
  Type ho = tf();
  std::vector<TypedVar> ys{{"y1", ta()}, {"y2", higher ? ho : ta()}};
  std::vector<TypedVar> xs{{"x1", ta()}, {"x2", higher ? ho : ta()}};

  std::vector<Type> uty;
  if (higher) {
    uty = testgen::pick(rng, 0, 1) ? std::vector<Type>{ta(), ho}
                                   : std::vector<Type>{ho, ta()};
  } else {
    int k = testgen::pick(rng, 1, 2);
    uty.assign(k, ta());
  }
  auto us = testgen::random_var_arg_list(rng, sig, ys, uty);
  std::vector<Type> sty{ys[0].type, ys[1].type};
  auto ss = testgen::random_var_arg_list(rng, sig, xs, sty);
  if (!us || !ss) return std::nullopt;

  Subst mu;
  for (std::size_t i = 0; i < ys.size(); ++i) mu.bind(ys[i], (*ss)[i]);

  std::vector<Term> result;
  for (const auto& u : *us) result.push_back(apply_subst(u, mu));
  std::set<std::string> bound{"x1", "x2"};
  std::vector<DhpViolation> out;
  check_var_arg_list(result, bound, {}, out);
  return out.empty();
}

// applying a substitution with pattern images to a pattern yields a pattern
inline bool run_dhp_subst(testgen::Rng& rng, const Signature& sig) {
  using namespace detail;
  std::vector<TypedVar> flex{{"M", tg()}, {"F", tf()}};
  std::vector<TypedVar> flex2{{"P", tg()}, {"Q", tf()}};
  Type tau = testgen::random_type(rng, {"a"}, 1);
  Term s = testgen::random_dhp(rng, sig, flex, tau, 3);
  Subst th;
  for (const auto& v : flex)
    if (testgen::pick(rng, 0, 3) > 0)
      th.bind(v, testgen::random_dhp(rng, sig, flex2, v.type, 2));
  Term r = apply_subst(s, th);
  return check_dhp(r, CheckMode::Strict).accepted;
}

}  // namespace dhpu::closure
