#include "dhpu/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>

#include "dhpu/match.hpp"
#include "dhpu/unify.hpp"

namespace dhpu {

namespace {

// sorts of the fresh variables used so far; variable k is named V{k+1}
using Pool = std::vector<Type>;

struct Enumerator {
  const EnumBudget& budget;
  NameGen gen;  // binder names for the whole enumeration

  explicit Enumerator(const EnumBudget& b, std::set<std::string> avoid)
      : budget(b), gen(std::move(avoid)) {}

  // candidate heads for a body of the given sort, given the visible binders
  // and the fresh pool; order: env, function symbols, fresh reuse, fresh new
  void heads(const std::string& sort, const std::vector<TypedVar>& env,
             const Pool& pool, std::vector<std::pair<Head, Pool>>& out) {
    for (const auto& v : env)
      if (v.type.result == sort)
        out.push_back({Head{HeadKind::Var, v.name, v.type}, pool});
    for (const auto& [f, ty] : budget.signature.funs)
      if (ty.result == sort) out.push_back({Head{HeadKind::Fun, f, ty}, pool});
    for (std::size_t k = 0; k < pool.size(); ++k)
      if (pool[k].result == sort && pool[k].is_sort()) {
        Head h{HeadKind::Var, "V" + std::to_string(k + 1), pool[k]};
        out.push_back({h, pool});
      }
    if ((int)pool.size() < budget.max_fresh_vars) {
      Pool grown = pool;
      grown.push_back(dhpu::sort(sort));
      Head h{HeadKind::Var, "V" + std::to_string(pool.size() + 1),
             dhpu::sort(sort)};
      out.push_back({h, std::move(grown)});
    }
  }

  // all (term, pool') of type tau with term_size <= cap
  std::vector<std::pair<Term, Pool>> terms(const Type& tau,
                                           std::vector<TypedVar>& env,
                                           int cap, const Pool& pool) {
    std::vector<std::pair<Term, Pool>> out;
    if (cap < 1) return out;
    std::vector<TypedVar> binders;
    for (const auto& at : tau.args) binders.push_back({gen.fresh("x"), at});
    env.insert(env.end(), binders.begin(), binders.end());
    std::vector<std::pair<Head, Pool>> hs;
    heads(tau.result, env, pool, hs);
    for (auto& [h, hpool] : hs) {
      std::vector<std::vector<Term>> tuples;
      std::vector<Pool> pools;
      std::vector<Term> cur;
      args_rec(h.type.args, 0, cap - 1, env, hpool, cur, tuples, pools);
      for (std::size_t i = 0; i < tuples.size(); ++i)
        out.push_back({mk_term(binders, h, std::move(tuples[i])),
                       std::move(pools[i])});
    }
    env.resize(env.size() - binders.size());
    return out;
  }

  void args_rec(const std::vector<Type>& types, std::size_t i, int left,
                std::vector<TypedVar>& env, const Pool& pool,
                std::vector<Term>& cur, std::vector<std::vector<Term>>& tuples,
                std::vector<Pool>& pools) {
    if (i == types.size()) {
      tuples.push_back(cur);
      pools.push_back(pool);
      return;
    }
    int reserve = (int)(types.size() - i - 1);  // later args need >= 1 each
    for (auto& [t, p] : terms(types[i], env, left - reserve, pool)) {
      int sz = (int)term_size(t);
      cur.push_back(std::move(t));
      args_rec(types, i + 1, left - sz, env, p, cur, tuples, pools);
      cur.pop_back();
    }
  }
};

std::set<std::string> names_in_scope(const Signature& sig,
                                     const std::vector<TypedVar>& env) {
  std::set<std::string> avoid = sig.sorts;
  for (const auto& [n, ty] : sig.funs) avoid.insert(n);
  for (const auto& [n, ty] : sig.vars) avoid.insert(n);
  for (const auto& v : env) avoid.insert(v.name);
  return avoid;
}

}  // namespace

std::vector<Term> enumerate_terms(const Type& tau,
                                  const std::vector<TypedVar>& env,
                                  const EnumBudget& budget) {
  Enumerator en(budget, names_in_scope(budget.signature, env));
  std::vector<TypedVar> scope = env;
  std::vector<Term> out;
  std::set<std::string> seen;
  for (auto& [t, pool] : en.terms(tau, scope, budget.max_term_size, {}))
    if (seen.insert(canon_key(t)).second) out.push_back(std::move(t));
  return out;
}

std::vector<Subst> brute_force_unifiers(
    const std::vector<std::pair<Term, Term>>& eqs, const EnumBudget& budget) {
  std::map<std::string, Type> dom;
  std::set<std::string> avoid = names_in_scope(budget.signature, {});
  for (const auto& [l, r] : eqs) {
    for (const auto& [n, ty] : free_vars(l)) dom.emplace(n, ty);
    for (const auto& [n, ty] : free_vars(r)) dom.emplace(n, ty);
    collect_names(l, avoid);
    collect_names(r, avoid);
  }
  std::vector<TypedVar> vars;
  for (const auto& [n, ty] : dom) vars.push_back({n, ty});

  Enumerator en(budget, avoid);
  std::vector<Subst> out;
  std::set<std::string> seen;
  std::vector<TypedVar> scope;

  std::function<void(std::size_t, const Pool&, Subst&)> pick =
      [&](std::size_t i, const Pool& pool, Subst& th) {
        if (i == vars.size()) {
          for (const auto& [l, r] : eqs)
            if (!alpha_eq(apply_subst(l, th), apply_subst(r, th))) return;
          std::string key;
          for (const auto& v : vars)
            key += canon_key(*th.find(v.name)) + "\x1e";
          if (seen.insert(key).second) out.push_back(th);
          return;
        }
        for (auto& [t, p] :
             en.terms(vars[i].type, scope, budget.max_term_size, pool)) {
          Subst ext = th;
          ext.bind(vars[i], std::move(t));
          pick(i + 1, p, ext);
        }
      };
  Subst empty;
  pick(0, {}, empty);
  return out;
}

CompletenessReport check_csu_completeness(
    const std::vector<Subst>& engine_solutions,
    const std::vector<std::pair<Term, Term>>& eqs, const EnumBudget& budget) {
  std::map<std::string, Type> dom;
  for (const auto& [l, r] : eqs) {
    for (const auto& [n, ty] : free_vars(l)) dom.emplace(n, ty);
    for (const auto& [n, ty] : free_vars(r)) dom.emplace(n, ty);
  }
  CompletenessReport rep;
  for (const auto& de : brute_force_unifiers(eqs, budget)) {
    bool covered = false;
    for (const auto& th : engine_solutions)
      if (is_instance(de, th, dom)) {
        covered = true;
        break;
      }
    if (!covered) {
      rep.complete = false;
      rep.counterexamples.push_back(de);
    }
  }
  return rep;
}

namespace {

// index of the binder a var head refers to, if any
std::optional<std::size_t> binder_index(const Term& t) {
  if (t.head.kind != HeadKind::Var) return std::nullopt;
  for (std::size_t i = 0; i < t.binders.size(); ++i)
    if (t.binders[i].name == t.head.name) return i;
  return std::nullopt;
}

bool root_clash(const Term& a, const Term& b) {
  auto ia = binder_index(a), ib = binder_index(b);
  bool rigid_a = a.head.kind == HeadKind::Fun || ia.has_value();
  bool rigid_b = b.head.kind == HeadKind::Fun || ib.has_value();
  if (!rigid_a || !rigid_b) return false;
  if (ia || ib) return ia != ib;  // projection positions must agree
  return !(a.head == b.head);
}

// rename every free variable of the images to pool names base1, base2, ...
Subst rename_helpers(const Subst& th, const std::string& base,
                     std::set<std::string>& avoid) {
  NameGen gen(avoid);
  Subst ren;
  for (const auto& [n, ty] : th.image_free_vars())
    ren.bind({n, ty}, canonical_form({gen.fresh(base), ty}));
  Subst out;
  for (const auto& [n, entry] : th)
    out.bind({n, entry.first}, apply_subst(entry.second, ren));
  for (const auto& v : gen.taken) avoid.insert(v);
  return out;
}

}  // namespace

OrthoResult check_orthogonality(const Subst& th1, const Subst& th2,
                                const EnumBudget&, int step_bound) {
  std::map<std::string, Type> dom;
  for (const auto& [n, e] : th1) dom.emplace(n, e.first);
  for (const auto& [n, e] : th2) dom.emplace(n, e.first);

  auto image = [](const Subst& th, const std::string& n, const Type& ty) {
    const Term* t = th.find(n);
    return t ? *t : canonical_form({n, ty});
  };

  for (const auto& [n, ty] : dom)
    if (root_clash(image(th1, n, ty), image(th2, n, ty)))
      return {OrthoResult::Kind::Orthogonal, std::nullopt};

  std::set<std::string> avoid;
  for (const Subst* th : {&th1, &th2})
    for (const auto& [n, e] : *th) {
      avoid.insert(n);
      collect_names(e.second, avoid);
    }
  Subst r1 = rename_helpers(th1, "P", avoid);
  Subst r2 = rename_helpers(th2, "Q", avoid);

  std::vector<std::pair<Term, Term>> problem;
  for (const auto& [n, ty] : dom)
    problem.emplace_back(image(r1, n, ty), image(r2, n, ty));

  EngineConfig cfg;
  cfg.check_mode = CheckMode::Off;
  cfg.postpone_cyclic = true;
  cfg.max_steps = step_bound;
  cfg.max_solutions = 1;
  Outcome res;
  try {
    res = enumerate_unifiers(problem, cfg);
  } catch (const TypeError&) {
    return {OrthoResult::Kind::Orthogonal, std::nullopt};
  }
  if (!res.solutions.empty())
    return {OrthoResult::Kind::CommonInstance,
            std::move(res.solutions.front().subst)};
  if (res.status == SearchStatus::Complete)
    return {OrthoResult::Kind::Orthogonal, std::nullopt};
  return {OrthoResult::Kind::Unknown, std::nullopt};
}

}  // namespace dhpu
