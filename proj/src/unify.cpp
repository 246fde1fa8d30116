#include "dhpu/unify.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "dhpu/match.hpp"
#include "dhpu/printer.hpp"

namespace dhpu {

const char* rule_name(RuleLabel r) {
  switch (r) {
    case RuleLabel::Delete: return "delete";
    case RuleLabel::Decompose: return "decompose";
    case RuleLabel::Eliminate: return "eliminate";
    case RuleLabel::Imitate: return "imitate";
    case RuleLabel::Project: return "project";
    case RuleLabel::FlexSame: return "flex-same";
    case RuleLabel::FlexDiff: return "flex-diff";
  }
  return "?";
}

Equation mk_equation(Term lhs, Term rhs) {
  if (lhs.type() != rhs.type())
    throw TypeError(TypeError::Kind::TypeMismatch,
                    "equation sides differ in type");
  // Align the shared prefix to the lhs names.  If an lhs binder name occurs
  // free in the rhs the rename would capture, so move both sides to fresh
  // names first.
  bool unsafe = false;
  auto rfv = free_vars(rhs);
  for (const auto& b : lhs.binders)
    if (rfv.count(b.name)) unsafe = true;
  if (unsafe) {
    std::set<std::string> avoid = collect_names(lhs);
    collect_names(rhs, avoid);
    NameGen gen(std::move(avoid));
    std::vector<TypedVar> nb;
    for (const auto& b : lhs.binders) nb.push_back({gen.fresh("w"), b.type});
    lhs = rename_top_binders(lhs, nb);
    rhs = rename_top_binders(rhs, nb);
  } else {
    rhs = rename_top_binders(rhs, lhs.binders);
  }
  if (canon_key(rhs) < canon_key(lhs)) std::swap(lhs, rhs);
  return {std::move(lhs), std::move(rhs)};
}

std::string equation_key(const Equation& e) {
  // sides share the prefix, so positional binder numbering keeps the
  // correspondence and the key is alpha-invariant for the pair
  return canon_key(e.lhs) + "\x1e" + canon_key(e.rhs);
}

TypedVar FreshVars::make(const Type& ty) {
  for (;;) {
    std::string n = "H" + std::to_string(next++);
    if (!reserved.count(n)) return {n, ty};
  }
}

namespace {

// one flex argument \y1..ym. H (z̄^) (ȳ^) for a head argument of type phi
Term flex_arg(const std::vector<TypedVar>& zs, const Type& phi,
              FreshVars& fresh, NameGen& gen) {
  Type hty;
  for (const auto& z : zs) hty.args.push_back(z.type);
  for (const auto& at : phi.args) hty.args.push_back(at);
  hty.result = phi.result;
  TypedVar H = fresh.make(hty);
  std::vector<TypedVar> ys;
  for (const auto& at : phi.args) ys.push_back({gen.fresh("z"), at});
  std::vector<Term> hargs;
  for (const auto& z : zs) hargs.push_back(eta_expand(z, gen));
  for (const auto& y : ys) hargs.push_back(eta_expand(y, gen));
  return mk_var_head(ys, H, std::move(hargs));
}

}  // namespace

Term make_imitation_binding(const Type& tau, const Head& h, FreshVars& fresh) {
  if (h.kind != HeadKind::Fun)
    throw InternalError("imitation binding requires a function-symbol head");
  if (h.type.result != tau.result)
    throw TypeError(TypeError::Kind::TypeMismatch,
                    "sort mismatch in imitation binding");
  NameGen gen;
  std::vector<TypedVar> zs;
  for (const auto& at : tau.args) zs.push_back({gen.fresh("z"), at});
  std::vector<Term> hargs;
  for (const auto& phi : h.type.args)
    hargs.push_back(flex_arg(zs, phi, fresh, gen));
  return mk_fun_head(std::move(zs), h.name, h.type, std::move(hargs));
}

std::vector<std::pair<std::size_t, Term>> make_projection_bindings(
    const Type& tau, const Head& target_head, const std::vector<Term>& args,
    FreshVars& fresh) {
  if (args.size() != tau.args.size())
    throw InternalError("projection: argument list does not fit the type");
  std::vector<std::pair<std::size_t, Term>> out;
  for (std::size_t i = 0; i < tau.args.size(); ++i) {
    if (tau.args[i].result != tau.result) continue;
    if (!(args[i].head == target_head)) continue;
    NameGen gen;
    std::vector<TypedVar> zs;
    for (const auto& at : tau.args) zs.push_back({gen.fresh("z"), at});
    std::vector<Term> pargs;
    for (const auto& phi : tau.args[i].args)
      pargs.push_back(flex_arg(zs, phi, fresh, gen));
    TypedVar zi = zs[i];
    out.emplace_back(i, mk_var_head(std::move(zs), zi, std::move(pargs)));
  }
  return out;
}

Subst solve_flex_flex_same(const TypedVar& F, const std::vector<Term>& ss,
                           const std::vector<Term>& ts, FreshVars& fresh) {
  if (ss.size() != ts.size())
    throw InternalError("flex-flex argument lists differ in length");
  NameGen gen;
  std::vector<TypedVar> ys;
  for (const auto& s : ss) ys.push_back({gen.fresh("y"), s.type()});
  Type hty;
  std::vector<std::size_t> sel;
  for (std::size_t i = 0; i < ss.size(); ++i)
    if (alpha_eq(ss[i], ts[i])) {
      sel.push_back(i);
      hty.args.push_back(ys[i].type);
    }
  hty.result = F.type.result;
  TypedVar H = fresh.make(hty);
  std::vector<Term> hargs;
  for (auto i : sel) hargs.push_back(eta_expand(ys[i], gen));
  Subst de;
  de.bind(F, mk_var_head(std::move(ys), H, std::move(hargs)));
  return de;
}

std::vector<std::pair<Subst, int>> solve_flex_flex_diff(
    const TypedVar& F, const std::vector<Term>& ss, const TypedVar& G,
    const std::vector<Term>& ts, const std::vector<TypedVar>& ctx,
    CheckMode mode, const FreshVars& fresh) {
  if (F.name == G.name)
    throw InternalError("flex-flex-diff requires distinct head variables");
  std::set<std::string> forb;
  for (const auto& b : ctx) forb.insert(b.name);
  std::set<std::string> avoid = forb;
  avoid.insert(F.name);
  avoid.insert(G.name);
  for (const auto& t : ss) collect_names(t, avoid);
  for (const auto& t : ts) collect_names(t, avoid);
  NameGen gen(std::move(avoid));
  std::vector<TypedVar> ys, zs;
  for (const auto& s : ss) ys.push_back({gen.fresh("y"), s.type()});
  for (const auto& t : ts) zs.push_back({gen.fresh("z"), t.type()});

  std::vector<std::vector<Term>> cs, ct;
  for (const auto& s : ss) cs.push_back(invert(s, ts, zs, forb));
  for (const auto& t : ts) ct.push_back(invert(t, ss, ys, forb));

  // positions with at least one reconstruction, P1 side then P2 side
  struct Pos {
    bool p1;
    std::size_t i;
    std::size_t n;
  };
  std::vector<Pos> pos;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (!cs[i].empty()) {
      if (mode == CheckMode::Strict && cs[i].size() > 1)
        throw InternalError("ambiguous reconstruction on strict patterns");
      pos.push_back({true, i, cs[i].size()});
    }
  for (std::size_t i = 0; i < ct.size(); ++i)
    if (!ct[i].empty()) {
      if (mode == CheckMode::Strict && ct[i].size() > 1)
        throw InternalError("ambiguous reconstruction on strict patterns");
      pos.push_back({false, i, ct[i].size()});
    }

  auto eta_index = [](const Term& t, const std::vector<TypedVar>& vars)
      -> std::optional<std::size_t> {
    if (t.head.kind != HeadKind::Var) return std::nullopt;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == t.head.name)
        return is_eta_of(t, vars[i]) ? std::optional<std::size_t>{i}
                                     : std::nullopt;
    return std::nullopt;
  };

  std::vector<std::pair<Subst, int>> out;
  std::vector<std::size_t> odo(pos.size(), 0);
  for (;;) {
    // pairs for this combination, deduplicated up to alpha-equality
    std::vector<std::pair<Term, Term>> pairs;
    std::set<std::string> seen;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const Pos& p = pos[k];
      std::pair<Term, Term> pr =
          p.p1 ? std::make_pair(canonical_form(ys[p.i]), cs[p.i][odo[k]])
               : std::make_pair(ct[p.i][odo[k]], canonical_form(zs[p.i]));
      if (seen.insert(canon_key(pr.first) + "\x1e" + canon_key(pr.second))
              .second)
        pairs.push_back(std::move(pr));
    }
    // Drop a pair whose component is merely the eta-expansion of a fresh
    // binder that another pair already uses on the same side; keeping it
    // would re-export a wildcard the other reconstruction consumed.  On
    // strict patterns this configuration cannot arise.
    std::vector<bool> drop(pairs.size(), false);
    for (std::size_t a = 0; a < pairs.size(); ++a) {
      if (auto yi = eta_index(pairs[a].first, ys)) {
        for (std::size_t b = 0; b < pairs.size() && !drop[a]; ++b)
          if (b != a && occurs_free(ys[*yi].name, pairs[b].first))
            drop[a] = true;
      }
      if (!drop[a]) {
        if (auto zi = eta_index(pairs[a].second, zs)) {
          for (std::size_t b = 0; b < pairs.size() && !drop[a]; ++b)
            if (b != a && occurs_free(zs[*zi].name, pairs[b].second))
              drop[a] = true;
        }
      }
    }
    std::vector<std::pair<Term, Term>> kept;
    for (std::size_t a = 0; a < pairs.size(); ++a)
      if (!drop[a]) kept.push_back(pairs[a]);
    if (mode == CheckMode::Strict && kept.size() != pairs.size())
      throw InternalError("wildcard re-export on strict patterns");

    Type hty;
    for (const auto& [u, v] : kept) {
      if (u.type() != v.type())
        throw InternalError("pair components differ in type");
      hty.args.push_back(u.type());
    }
    hty.result = F.type.result;
    FreshVars local = fresh;
    TypedVar H = local.make(hty);
    std::vector<Term> us, vs;
    for (auto& [u, v] : kept) {
      us.push_back(std::move(u));
      vs.push_back(std::move(v));
    }
    Subst de;
    de.bind(F, mk_var_head(ys, H, std::move(us)));
    de.bind(G, mk_var_head(zs, H, std::move(vs)));
    out.emplace_back(std::move(de), local.next);

    // advance the odometer, first position slowest
    std::size_t k = pos.size();
    while (k > 0) {
      --k;
      if (++odo[k] < pos[k].n) break;
      odo[k] = 0;
      if (k == 0) return out;
    }
    if (pos.empty()) return out;
  }
}

namespace {

enum class EqClass {
  Trivial,
  Var,
  RigidRigid,
  FlexRigidNoncyclic,
  FlexRigidCyclic,
  FlexFlex
};

bool head_is_free(const Term& t) {
  if (t.head.kind != HeadKind::Var) return false;
  for (const auto& b : t.binders)
    if (b.name == t.head.name) return false;
  return true;
}

bool uvar_eligible(const Term& a, const Term& b) {
  if (!head_is_free(a)) return false;
  if (a.args.size() != a.binders.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!is_eta_of(a.args[i], a.binders[i])) return false;
  return !occurs_free(a.head.name, b);
}

EqClass classify(const Equation& e) {
  if (alpha_eq(e.lhs, e.rhs)) return EqClass::Trivial;
  if (uvar_eligible(e.lhs, e.rhs) || uvar_eligible(e.rhs, e.lhs))
    return EqClass::Var;
  bool lf = head_is_free(e.lhs), rf = head_is_free(e.rhs);
  if (!lf && !rf) return EqClass::RigidRigid;
  if (lf && rf) return EqClass::FlexFlex;
  const Term& flex = lf ? e.lhs : e.rhs;
  const Term& rigid = lf ? e.rhs : e.lhs;
  return occurs_free(flex.head.name, rigid) ? EqClass::FlexRigidCyclic
                                            : EqClass::FlexRigidNoncyclic;
}

// cyclic equations sink below flex-flex when postponed, so a branch only
// faces them once nothing else is left
int bucket(const Equation& e, bool postpone) {
  switch (classify(e)) {
    case EqClass::Trivial: return 0;
    case EqClass::Var: return 1;
    case EqClass::RigidRigid: return 2;
    case EqClass::FlexRigidNoncyclic: return 3;
    case EqClass::FlexRigidCyclic: return postpone ? 5 : 3;
    case EqClass::FlexFlex: return 4;
  }
  return 6;
}

struct State {
  std::vector<Equation> eqs;
  Subst acc;
  int fresh_next = 1;
  int depth = 0;
  std::vector<TraceStep> trace;
};

void sort_eqs(std::vector<Equation>& v) {
  std::vector<std::pair<std::string, Equation>> keyed;
  keyed.reserve(v.size());
  for (auto& e : v) keyed.emplace_back(equation_key(e), std::move(e));
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  v.clear();
  for (auto& [k, e] : keyed) v.push_back(std::move(e));
}

std::vector<Equation> apply_all(const std::vector<Equation>& eqs,
                                const Subst& de) {
  std::vector<Equation> out;
  out.reserve(eqs.size());
  for (const auto& e : eqs)
    out.push_back(mk_equation(apply_subst(e.lhs, de), apply_subst(e.rhs, de)));
  return out;
}

struct Engine {
  EngineConfig cfg;
  std::set<std::string> reserved;

  void finish_child(State&& c, RuleLabel rule, std::vector<State>& out) const {
    sort_eqs(c.eqs);
    if (cfg.check_mode == CheckMode::Strict) {
      for (const auto& e : c.eqs)
        if (!check_dhp(e.lhs, CheckMode::Strict).accepted ||
            !check_dhp(e.rhs, CheckMode::Strict).accepted)
          throw InternalError("pattern conditions lost after a step");
    }
    if (cfg.record_trace) {
      TraceStep ts;
      ts.rule = rule;
      for (const auto& e : c.eqs)
        ts.equations.emplace_back(print_term(e.lhs), print_term(e.rhs));
      ts.accumulated = c.acc;
      c.trace.push_back(std::move(ts));
    }
    out.push_back(std::move(c));
  }

  std::vector<State> step(const State& st, std::size_t idx) const {
    const Equation eq = st.eqs[idx];
    std::vector<State> out;
    switch (classify(eq)) {
      case EqClass::Trivial: {
        State c = st;
        c.eqs.erase(c.eqs.begin() + idx);
        c.depth++;
        finish_child(std::move(c), RuleLabel::Delete, out);
        break;
      }
      case EqClass::Var: {
        bool left = uvar_eligible(eq.lhs, eq.rhs);
        const Term& pat = left ? eq.lhs : eq.rhs;
        const Term& val = left ? eq.rhs : eq.lhs;
        Subst de;
        de.bind({pat.head.name, pat.head.type}, val);
        State c = st;
        c.eqs.erase(c.eqs.begin() + idx);
        c.eqs = apply_all(c.eqs, de);
        c.acc = compose(st.acc, de);
        c.depth++;
        finish_child(std::move(c), RuleLabel::Eliminate, out);
        break;
      }
      case EqClass::RigidRigid: {
        if (!(eq.lhs.head == eq.rhs.head)) break;  // clash: failure leaf
        State c = st;
        c.eqs.erase(c.eqs.begin() + idx);
        for (std::size_t i = 0; i < eq.lhs.args.size(); ++i) {
          Term le = eq.lhs.args[i];
          le.binders.insert(le.binders.begin(), eq.lhs.binders.begin(),
                            eq.lhs.binders.end());
          Term re = eq.rhs.args[i];
          re.binders.insert(re.binders.begin(), eq.rhs.binders.begin(),
                            eq.rhs.binders.end());
          c.eqs.push_back(mk_equation(std::move(le), std::move(re)));
        }
        c.depth++;
        finish_child(std::move(c), RuleLabel::Decompose, out);
        break;
      }
      case EqClass::FlexRigidNoncyclic:
      case EqClass::FlexRigidCyclic: {
        bool lf = head_is_free(eq.lhs);
        const Term& flex = lf ? eq.lhs : eq.rhs;
        const Term& rigid = lf ? eq.rhs : eq.lhs;
        TypedVar F{flex.head.name, flex.head.type};
        FreshVars fv{st.fresh_next, reserved};
        auto bind_branch = [&](Term u, RuleLabel rule) {
          Subst de;
          de.bind(F, std::move(u));
          State c = st;
          c.eqs = apply_all(st.eqs, de);
          c.acc = compose(st.acc, de);
          c.fresh_next = fv.next;
          c.depth++;
          finish_child(std::move(c), rule, out);
        };
        for (auto& [pos, u] :
             make_projection_bindings(F.type, rigid.head, flex.args, fv))
          bind_branch(std::move(u), RuleLabel::Project);
        if (rigid.head.kind == HeadKind::Fun)
          bind_branch(make_imitation_binding(F.type, rigid.head, fv),
                      RuleLabel::Imitate);
        break;
      }
      case EqClass::FlexFlex: {
        if (eq.lhs.head.name == eq.rhs.head.name) {
          TypedVar F{eq.lhs.head.name, eq.lhs.head.type};
          FreshVars fv{st.fresh_next, reserved};
          Subst de = solve_flex_flex_same(F, eq.lhs.args, eq.rhs.args, fv);
          State c = st;
          c.eqs = apply_all(st.eqs, de);
          c.acc = compose(st.acc, de);
          c.fresh_next = fv.next;
          c.depth++;
          finish_child(std::move(c), RuleLabel::FlexSame, out);
        } else {
          TypedVar F{eq.lhs.head.name, eq.lhs.head.type};
          TypedVar G{eq.rhs.head.name, eq.rhs.head.type};
          FreshVars fv{st.fresh_next, reserved};
          for (auto& [de, next] :
               solve_flex_flex_diff(F, eq.lhs.args, G, eq.rhs.args,
                                    eq.lhs.binders, cfg.check_mode, fv)) {
            State c = st;
            c.eqs = apply_all(st.eqs, de);
            c.acc = compose(st.acc, de);
            c.fresh_next = next;
            c.depth++;
            finish_child(std::move(c), RuleLabel::FlexDiff, out);
          }
        }
        break;
      }
    }
    return out;
  }

  // nullopt: the branch gives up (only postponed cyclic equations remain)
  std::optional<std::vector<State>> expand(const State& st) const {
    if (cfg.postpone_cyclic) {
      bool all_cyclic = true;
      for (const auto& e : st.eqs)
        if (classify(e) != EqClass::FlexRigidCyclic) all_cyclic = false;
      if (all_cyclic) return std::nullopt;
    }
    return step(st, select_equation(st.eqs, cfg.postpone_cyclic));
  }
};

}  // namespace

std::size_t select_equation(const std::vector<Equation>& eqs,
                            bool postpone_cyclic) {
  if (eqs.empty()) throw InternalError("selection from an empty problem");
  std::size_t best = 0;
  int bb = bucket(eqs[0], postpone_cyclic);
  for (std::size_t i = 1; i < eqs.size(); ++i) {
    int b = bucket(eqs[i], postpone_cyclic);
    if (b < bb) {
      bb = b;
      best = i;
    }
  }
  return best;
}

Outcome enumerate_unifiers(const std::vector<std::pair<Term, Term>>& problem,
                           const EngineConfig& config) {
  if (config.max_steps < 1)
    throw std::invalid_argument("max_steps must be at least 1");
  if (config.max_solutions && *config.max_solutions < 1)
    throw std::invalid_argument("max_solutions must be at least 1");

  Engine eng{config, {}};
  State init;
  std::map<std::string, Type> fvE0;
  std::vector<std::pair<Term, Term>> orig;
  for (const auto& [l, r] : problem) {
    if (config.check_mode != CheckMode::Off) {
      for (const Term* side : {&l, &r}) {
        DhpReport rep = check_dhp(*side, config.check_mode);
        if (!rep.accepted)
          throw PatternRejected(std::move(rep),
                                "equation side fails the pattern conditions");
      }
    }
    Term l2 = ensure_distinct_binders(l, {});
    Term r2 = ensure_distinct_binders(r, {});
    collect_names(l2, eng.reserved);
    collect_names(r2, eng.reserved);
    for (const auto& [n, ty] : free_vars(l2)) fvE0.emplace(n, ty);
    for (const auto& [n, ty] : free_vars(r2)) fvE0.emplace(n, ty);
    init.eqs.push_back(mk_equation(l2, r2));
    orig.emplace_back(std::move(l2), std::move(r2));
  }
  sort_eqs(init.eqs);

  std::set<std::string> keep;
  for (const auto& [n, ty] : fvE0) keep.insert(n);

  Outcome out;
  bool cut = false;
  auto emit = [&](const State& s) {
    Subst th = s.acc.restricted(keep);
    for (const auto& [l, r] : orig)
      if (!alpha_eq(apply_subst(l, th), apply_subst(r, th)))
        throw InternalError("emitted substitution does not unify the problem");
    out.solutions.push_back({std::move(th), s.depth, s.trace});
  };
  auto done = [&] {
    return config.max_solutions &&
           (int)out.solutions.size() >= *config.max_solutions;
  };

  if (config.traversal == Traversal::BreadthFirst) {
    std::deque<State> q;
    q.push_back(std::move(init));
    while (!q.empty()) {
      State s = std::move(q.front());
      q.pop_front();
      if (s.eqs.empty()) {
        emit(s);
        if (done()) break;
        continue;
      }
      if (s.depth >= config.max_steps) {
        cut = true;
        continue;
      }
      auto kids = eng.expand(s);
      if (!kids) {
        cut = true;
        continue;
      }
      for (auto& k : *kids) q.push_back(std::move(k));
    }
    out.status = (cut || !q.empty()) ? SearchStatus::BoundExhausted
                                     : SearchStatus::Complete;
  } else {
    bool stopped = false;
    out.status = SearchStatus::BoundExhausted;
    for (int limit = 0; limit <= config.max_steps && !stopped; ++limit) {
      bool deeper = false;
      std::function<void(const State&)> dfs = [&](const State& s) {
        if (stopped) return;
        if (s.eqs.empty()) {
          if (s.depth == limit) {
            emit(s);
            if (done()) stopped = true;
          }
          return;
        }
        if (s.depth >= limit) {
          deeper = true;
          return;
        }
        auto kids = eng.expand(s);
        if (!kids) {
          cut = true;
          return;
        }
        for (const auto& k : *kids) {
          dfs(k);
          if (stopped) return;
        }
      };
      dfs(init);
      if (!deeper && !stopped) {
        out.status =
            cut ? SearchStatus::BoundExhausted : SearchStatus::Complete;
        break;
      }
    }
  }
  return out;
}

}  // namespace dhpu
