#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <vector>

#include "dhpu/subst.hpp"
#include "dhpu/term.hpp"
#include "gen.hpp"
#include "util.hpp"

using namespace dhpu;
using testutil::Env;
using testutil::ar;

namespace {

const char* kDecls =
    "sort a .\n"
    "fun c : a .\n"
    "fun f : a -> a .\n"
    "fun g : (a, a) -> a .\n"
    "var M : (a, a) -> a .\n"
    "var F : a -> a .\n"
    "var N : (a, a) -> a .\n";

Env env() { return Env(kDecls); }

Type ta() { return sort("a"); }

}  // namespace

TEST_CASE("binding rejects type mismatches eagerly") {
  Env e = env();
  Subst th;
  CHECK_THROWS_AS(th.bind(TypedVar{"M", ar({ta(), ta()}, "a")}, e.term("c")),
                  TypeError);
  CHECK_NOTHROW(th.bind(TypedVar{"F", ar({ta()}, "a")}, e.term("\\z:a. f z")));
  CHECK(th.has("F"));
  CHECK(th.size() == 1);
}

TEST_CASE("application replaces variable heads and beta-reduces on the fly") {
  Env e = env();
  Subst th{{TypedVar{"M", ar({ta(), ta()}, "a")}, e.term("\\z1:a z2:a. z1")}};
  Term t = e.term("\\x:a y:a. M (f x) y");
  Term r = apply_subst(t, th);
  CHECK(alpha_eq(r, e.term("\\x:a y:a. f x")));
  CHECK(r.type() == t.type());

  // the head's arguments are substituted into the image hereditarily
  Subst th2{{TypedVar{"F", ar({ta()}, "a")}, e.term("\\z:a. g z z")}};
  CHECK(alpha_eq(apply_subst(e.term("\\x:a. F (F x)"), th2),
                 e.term("\\x:a. g (g x x) (g x x)")));
}

TEST_CASE("application avoids capturing free image variables") {
  // image mentions a free variable named like the target's binder
  Type fa = ar({ta()}, "a");
  Term image = mk_term({TypedVar{"z", ta()}},
                       Head{HeadKind::Fun, "g", ar({ta(), ta()}, "a")},
                       {mk_var_head({}, TypedVar{"z", ta()}, {}),
                        mk_var_head({}, TypedVar{"x", ta()}, {})});
  Subst th{{TypedVar{"F", fa}, image}};

  Term target = mk_term({TypedVar{"x", ta()}}, Head{HeadKind::Var, "F", fa},
                        {mk_var_head({}, TypedVar{"x", ta()}, {})});
  Term r = apply_subst(target, th);

  // the binder is renamed; the image's x stays free
  REQUIRE(r.binders.size() == 1);
  CHECK(r.binders[0].name != "x");
  CHECK(occurs_free("x", r));
  auto fv = free_vars(r);
  CHECK(fv.size() == 1);
  CHECK(fv.count("x") == 1);
}

TEST_CASE("composition agrees with sequential application") {
  testgen::Rng rng(7101);
  Signature sig = testgen::base_sig();
  Type m2 = ar({ta(), ta()}, "a");
  Type f1 = ar({ta()}, "a");
  std::vector<TypedVar> outer{{"M", m2}, {"F", f1}, {"N", m2}};
  std::vector<TypedVar> inner{{"P", m2}, {"Q", f1}};

  for (int i = 0; i < 1000; ++i) {
    Type tau = testgen::random_type(rng, {"a"}, 1);
    Term s = testgen::random_term(rng, sig, outer, tau, 3);

    // th maps the outer variables to terms over the inner ones
    Subst th;
    for (const auto& v : outer)
      if (testgen::pick(rng, 0, 2) > 0)
        th.bind(v, testgen::random_term(rng, sig, inner, v.type, 2));
    // de maps the inner variables to rigid terms
    Subst de = testgen::random_rigid_subst(rng, sig, inner, 2);

    Term lhs = apply_subst(apply_subst(s, th), de);
    Term rhs = apply_subst(s, compose(th, de));
    CHECK(alpha_eq(lhs, rhs));
    CHECK(lhs.type() == tau);
  }
}

TEST_CASE("composition binds variables untouched by the first substitution") {
  Env e = env();
  Type f1 = ar({ta()}, "a");
  Subst th{{TypedVar{"F", f1}, e.term("\\z:a. f z")}};
  Subst de{{TypedVar{"N", ar({ta(), ta()}, "a")}, e.term("\\z1:a z2:a. z2")}};
  Subst comp = compose(th, de);
  CHECK(comp.has("F"));
  CHECK(comp.has("N"));
  // F's image passes through de unchanged, N comes from de
  CHECK(alpha_eq(*comp.find("F"), e.term("\\z:a. f z")));
  CHECK(alpha_eq(*comp.find("N"), e.term("\\z1:a z2:a. z2")));
}

TEST_CASE("restriction and domain views") {
  Env e = env();
  Type f1 = ar({ta()}, "a");
  Subst th{{TypedVar{"F", f1}, e.term("\\z:a. f z")},
           {TypedVar{"M", ar({ta(), ta()}, "a")}, e.term("\\z1:a z2:a. z1")}};
  CHECK(th.domain() == std::set<std::string>{"F", "M"});
  Subst r = th.restricted({"F"});
  CHECK(r.size() == 1);
  CHECK(r.has("F"));
  CHECK_FALSE(r.has("M"));

  Subst uses{{TypedVar{"F", f1}, e.term("\\z:a. N z z")}};
  auto ifv = uses.image_free_vars();
  CHECK(ifv.size() == 1);
  CHECK(ifv.count("N") == 1);
}

TEST_CASE("application is a congruence for alpha equality") {
  testgen::Rng rng(7102);
  Signature sig = testgen::base_sig();
  std::vector<TypedVar> vars{{"M", ar({ta(), ta()}, "a")}, {"F", ar({ta()}, "a")}};
  for (int i = 0; i < 300; ++i) {
    Type tau = testgen::random_type(rng, {"a"}, 1);
    Term s = testgen::random_term(rng, sig, vars, tau, 3);
    NameGen gen(collect_names(s));
    Term s2 = freshen_binders(s, gen);
    Subst th = testgen::random_rigid_subst(rng, sig, vars, 2);
    CHECK(alpha_eq(apply_subst(s, th), apply_subst(s2, th)));
  }
}

TEST_CASE("images stay beta-eta-normal after application") {
  testgen::Rng rng(7103);
  Signature sig = testgen::base_sig();
  std::vector<TypedVar> vars{{"M", ar({ta(), ta()}, "a")}, {"F", ar({ta()}, "a")}};
  Signature checked = sig;
  for (const auto& v : vars) checked.vars[v.name] = v.type;
  for (int i = 0; i < 300; ++i) {
    Type tau = testgen::random_type(rng, {"a"}, 1);
    Term s = testgen::random_term(rng, sig, vars, tau, 3);
    Subst th;
    for (const auto& v : vars)
      if (testgen::pick(rng, 0, 1) == 0)
        th.bind(v, testgen::random_term(rng, sig, vars, v.type, 2));
    Term r = apply_subst(s, th);
    // typecheck re-validates eta-longness and full application everywhere
    CHECK_NOTHROW(typecheck(r, tau, checked));
  }
}
