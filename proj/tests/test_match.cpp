#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dhpu/match.hpp"
#include "dhpu/oracle.hpp"
#include "dhpu/printer.hpp"
#include "dhpu/subst.hpp"
#include "dhpu/term.hpp"
#include "gen.hpp"
#include "util.hpp"

using namespace dhpu;
using namespace dhpu::testutil;
using testgen::Rng;

TEST_CASE("top binder renaming keeps alpha identity") {
  Env e(
      "sort a .\n"
      "fun f : a -> a .\n"
      "fun g : (a, a) -> a .\n"
      "fun k : (a -> a) -> a .\n");
  Type a = ar({}, "a");

  Term t = e.term("\\x:a y:a. g (f x) y");
  Term r = rename_top_binders(t, {{"u", a}, {"v", a}});
  REQUIRE(r.binders.size() == 2);
  CHECK(r.binders[0].name == "u");
  CHECK(r.binders[1].name == "v");
  CHECK(alpha_eq(r, t));
  CHECK(print_term(r) == "\\u:a v:a. g (f u) v");

  // the new name collides with an inner binder; the inner one must yield
  Term t2 = e.term("\\x:a. k (\\u:a. f x)");
  Term r2 = rename_top_binders(t2, {{"u", a}});
  CHECK(r2.binders[0].name == "u");
  CHECK(alpha_eq(r2, t2));
  CHECK(alpha_eq(r2, e.term("\\u:a. k (\\w:a. f u)")));
  typecheck(r2, ar({a}, "a"), e.sig);
}

TEST_CASE("inversion goldens") {
  Type a = ar({}, "a");

  SUBCASE("rewrite through a higher-order argument") {
    Env e(
        "sort a .\n"
        "fun f : a -> a .\n"
        "fun g : (a, a) -> a .\n"
        "var x : a .\n"
        "var y : a .\n"
        "var z1 : a -> a .\n"
        "var z3 : a .\n");
    Term body = e.term("g x y");
    std::vector<Term> args = {e.term("\\z:a. g x z"), e.term("f x"),
                              e.term("y")};
    std::vector<TypedVar> zs = {{"z1", ar({a}, "a")}, {"z2", a}, {"z3", a}};
    auto res = invert(body, args, zs, {"x", "y"});
    REQUIRE(res.size() == 1);
    CHECK(alpha_eq(res.at(0), e.term("z1 z3")));
  }

  SUBCASE("copy a rigid head, rewrite below it") {
    Env e(
        "sort a .\n"
        "fun f : a -> a .\n"
        "var x : a .\n"
        "var y : a .\n"
        "var z2 : a .\n");
    Term body = e.term("f x");
    std::vector<Term> args = {e.term("y"), e.term("x")};
    std::vector<TypedVar> zs = {{"z1", a}, {"z2", a}};
    auto res = invert(body, args, zs, {"x", "y"});
    REQUIRE(res.size() == 1);
    CHECK(alpha_eq(res.at(0), e.term("f z2")));
  }

  SUBCASE("closed bodies copy verbatim") {
    Env e(
        "sort a .\n"
        "fun c : a .\n"
        "fun f : a -> a .\n"
        "var x : a .\n");
    Term body = e.term("c");
    std::vector<Term> args = {e.term("f x")};
    std::vector<TypedVar> zs = {{"z1", a}};
    auto res = invert(body, args, zs, {"x"});
    REQUIRE(res.size() == 1);
    CHECK(alpha_eq(res.at(0), e.term("c")));
  }

  SUBCASE("overlapping arguments produce both candidates, rewrite first") {
    // args share the anchor x, so the list is not deterministic and both
    // the rewrite to z2 and the copy f z1 solve the equation
    Env e(
        "sort a .\n"
        "fun f : a -> a .\n"
        "var x : a .\n"
        "var z1 : a .\n"
        "var z2 : a .\n");
    Term body = e.term("f x");
    std::vector<Term> args = {e.term("x"), e.term("f x")};
    std::vector<TypedVar> zs = {{"z1", a}, {"z2", a}};
    auto res = invert(body, args, zs, {"x"});
    REQUIRE(res.size() == 2);
    CHECK(alpha_eq(res.at(0), e.term("z2")));
    CHECK(alpha_eq(res.at(1), e.term("f z1")));
  }
}

TEST_CASE("matching golden trio") {
  Env e(
      "sort a .\n"
      "fun f : a -> a .\n"
      "fun g : a -> a .\n"
      "var F : a -> a .\n");
  Term p = e.term("\\x:a y:a. F (f x)");

  Term t1 = e.term("\\x:a y:a. g (f x)");
  MatchResult r1 = match(p, t1, CheckMode::Strict);
  CHECK(r1.kind == MatchResult::Kind::Unique);
  REQUIRE(r1.substs.size() == 1);
  const Term* im = r1.substs.at(0).find("F");
  REQUIRE(im != nullptr);
  CHECK(alpha_eq(*im, e.term("\\z:a. g z")));
  CHECK(alpha_eq(apply_subst(p, r1.substs.at(0)), t1));

  MatchResult r2 = match(p, e.term("\\x:a y:a. g x"), CheckMode::Strict);
  CHECK(r2.kind == MatchResult::Kind::NoMatch);
  CHECK(r2.substs.empty());

  MatchResult r3 = match(p, e.term("\\x:a y:a. y"), CheckMode::Strict);
  CHECK(r3.kind == MatchResult::Kind::NoMatch);
  CHECK(r3.substs.empty());
}

TEST_CASE("nondeterministic pattern yields both matches in lenient mode") {
  Env e(
      "sort a .\n"
      "fun c : a .\n"
      "fun f : (a, a) -> a .\n"
      "var F : (a, a -> a) -> a .\n");
  Term p = e.term("\\x:a. F (f x c) (\\z:a. f x z)");
  Term t = e.term("\\x:a. f x c");

  // both of F's arguments reach x, so the strict check refuses the pattern
  CHECK_THROWS_AS(match(p, t, CheckMode::Strict), PatternRejected);
  try {
    match(p, t, CheckMode::Strict);
  } catch (const PatternRejected& ex) {
    REQUIRE(!ex.report.violations.empty());
    CHECK(ex.report.violations.at(0).condition == DhpCondition::CondIII);
  }

  MatchResult r = match(p, t, CheckMode::Lenient);
  CHECK(r.kind == MatchResult::Kind::Ambiguous);
  REQUIRE(r.substs.size() == 2);
  const Term* im1 = r.substs.at(0).find("F");
  const Term* im2 = r.substs.at(1).find("F");
  REQUIRE(im1 != nullptr);
  REQUIRE(im2 != nullptr);
  CHECK(alpha_eq(*im1, e.term("\\z1:a z2:(a -> a). z1")));
  CHECK(alpha_eq(*im2, e.term("\\z1:a z2:(a -> a). z2 c")));
  for (const Subst& s : r.substs) CHECK(alpha_eq(apply_subst(p, s), t));
}

TEST_CASE("matching rejects differently typed sides") {
  Env e(
      "sort a .\n"
      "fun c : a .\n"
      "var F : a -> a .\n");
  Term p = e.term("\\x:a. F x");
  Term t = e.term("c");
  CHECK_THROWS_AS(match(p, t, CheckMode::Strict), TypeError);
}

TEST_CASE("instance goldens") {
  Env e(
      "sort a .\n"
      "fun f : a -> a .\n"
      "var M : (a, a) -> a .\n"
      "var N : (a, a) -> a .\n"
      "var H : (a, a) -> a .\n"
      "var K : (a, a) -> a .\n");
  Type a = ar({}, "a");
  Type m2 = ar({a, a}, "a");
  std::map<std::string, Type> over{{"M", m2}, {"N", m2}};

  Subst delta;
  delta.bind({"M", m2}, e.term("\\z1:a z2:a. f (H z1 z2)"));
  delta.bind({"N", m2}, e.term("\\z1:a z2:a. H (f z2) (f z1)"));
  Subst gen;
  gen.bind({"M", m2}, e.term("\\z1:a z2:a. f (K z1 z2)"));

  CHECK(is_instance(delta, gen, over));
  CHECK(!is_instance(gen, delta, over));
  CHECK(is_instance(delta, delta, over));
  CHECK(is_instance(gen, gen, over));

  // distinct projections have no common specialization
  std::map<std::string, Type> over_m{{"M", m2}};
  Subst p1, p2;
  p1.bind({"M", m2}, e.term("\\z1:a z2:a. z1"));
  p2.bind({"M", m2}, e.term("\\z1:a z2:a. z2"));
  CHECK(!is_instance(p1, p2, over_m));
  CHECK(!is_instance(p2, p1, over_m));
  CHECK(is_instance(p1, p1, over_m));
}

TEST_CASE("instance relation composes") {
  Signature sig = testgen::base_sig();
  Type a = ar({}, "a");
  Type m2 = ar({a, a}, "a");
  Type f1 = ar({a}, "a");
  std::vector<TypedVar> dom{{"M", m2}, {"F", f1}};
  std::vector<TypedVar> mid{{"P", m2}, {"Q", f1}};
  std::vector<TypedVar> leaf{{"R", m2}, {"S", f1}};
  std::map<std::string, Type> over{{"M", m2}, {"F", f1}};

  Rng rng(0x6d617463u);
  for (int iter = 0; iter < 200; ++iter) {
    CAPTURE(iter);
    Subst th, rho;
    for (const TypedVar& v : dom)
      th.bind(v, testgen::random_dhp(rng, sig, mid, v.type, 3));
    for (const TypedVar& v : mid)
      rho.bind(v, testgen::random_dhp(rng, sig, leaf, v.type, 3));
    Subst sigma = testgen::random_rigid_subst(rng, sig, leaf, 3);
    Subst b = compose(th, rho);
    Subst c = compose(b, sigma);

    CHECK(is_instance(th, th, over));
    CHECK(is_instance(b, th, over));
    CHECK(is_instance(c, b, over));
    CHECK(is_instance(c, th, over));
  }
}

TEST_CASE("strict matching is deterministic and agrees with brute force") {
  Env e(
      "sort a .\n"
      "fun c : a .\n"
      "fun f : a -> a .\n"
      "fun g : (a, a) -> a .\n"
      "var F : (a, a) -> a .\n");
  Type a = ar({}, "a");
  Type m2 = ar({a, a}, "a");
  Type pat_ty = ar({a, a}, "a");

  Rng rng(0x6272757465u);
  int ambiguous = 0;
  int cross_checked = 0;
  for (int iter = 0; iter < 300; ++iter) {
    CAPTURE(iter);
    Term p = testgen::random_dhp(rng, e.sig, {{"F", m2}}, pat_ty,
                                 testgen::pick(rng, 2, 4));
    Term t;
    if (testgen::pick(rng, 0, 1) == 0) {
      Subst th;
      th.bind({"F", m2}, testgen::random_term(rng, e.sig, {}, m2,
                                              testgen::pick(rng, 1, 3)));
      t = apply_subst(p, th);
    } else {
      t = testgen::random_term(rng, e.sig, {}, pat_ty,
                               testgen::pick(rng, 1, 4));
    }
    CAPTURE(print_term(p));
    CAPTURE(print_term(t));

    MatchResult r = match(p, t, CheckMode::Strict);
    if (r.kind == MatchResult::Kind::Ambiguous) ++ambiguous;
    for (const Subst& s : r.substs) CHECK(alpha_eq(apply_subst(p, s), t));

    // strict images never outgrow the target, so this budget is complete
    if (term_size(t) <= 6) {
      EnumBudget budget;
      budget.max_term_size = std::max<int>(3, term_size(t));
      budget.max_fresh_vars = 0;
      budget.signature = e.sig;
      std::vector<Subst> brute = brute_force_unifiers({{p, t}}, budget);
      if (r.kind == MatchResult::Kind::Unique) {
        REQUIRE(brute.size() == 1);
        for (const auto& [name, ty] : free_vars(p)) {
          const Term* got = r.substs.at(0).find(name);
          const Term* want = brute.at(0).find(name);
          REQUIRE(got != nullptr);
          REQUIRE(want != nullptr);
          CHECK(alpha_eq(*got, *want));
        }
      } else {
        CHECK(brute.empty());
      }
      ++cross_checked;
    }
  }
  CHECK(ambiguous == 0);
  CHECK(cross_checked > 100);
}

TEST_CASE("inversion is single-valued on deterministic argument lists") {
  Signature sig = testgen::base_sig();
  Type a = ar({}, "a");
  Type fa = ar({a}, "a");

  Rng rng(0x696e76u);
  int ran = 0;
  for (int iter = 0; iter < 400 && ran < 200; ++iter) {
    CAPTURE(iter);
    bool higher = testgen::pick(rng, 0, 1) == 1;
    std::vector<TypedVar> ctx =
        higher ? std::vector<TypedVar>{{"x1", a}, {"x2", fa}}
               : std::vector<TypedVar>{{"x1", a}, {"x2", a}};
    std::vector<Type> ats = {ctx.at(0).type, ctx.at(1).type};
    if (testgen::pick(rng, 0, 1) == 1) std::swap(ats[0], ats[1]);

    auto ss = testgen::random_var_arg_list(rng, sig, ctx, ats);
    if (!ss) continue;

    std::vector<TypedVar> zs;
    for (std::size_t j = 0; j < ats.size(); ++j)
      zs.push_back({"w" + std::to_string(j + 1), ats[j]});
    Term w = testgen::random_term(rng, sig, zs, a, testgen::pick(rng, 1, 3));
    Subst th;
    for (std::size_t j = 0; j < zs.size(); ++j) th.bind(zs[j], ss->at(j));
    Term body = apply_subst(w, th);
    CAPTURE(print_term(w));
    CAPTURE(print_term(body));

    std::vector<Term> res = invert(body, *ss, zs, {"x1", "x2"});
    REQUIRE(res.size() == 1);
    CHECK(alpha_eq(res.at(0), w));
    ++ran;
  }
  CHECK(ran == 200);
}
