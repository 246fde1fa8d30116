#include "dhpu/match.hpp"

#include <algorithm>

#include "dhpu/printer.hpp"

namespace dhpu {

Term rename_top_binders(const Term& t, const std::vector<TypedVar>& to) {
  if (t.binders.size() != to.size())
    throw InternalError("binder prefix length mismatch in alignment");
  Subst ren;
  bool changed = false;
  for (std::size_t i = 0; i < to.size(); ++i) {
    if (t.binders[i].type != to[i].type)
      throw InternalError("binder prefix type mismatch in alignment");
    if (t.binders[i].name == to[i].name) continue;
    ren.bind(t.binders[i], canonical_form(to[i]));
    changed = true;
  }
  if (!changed) return t;
  Term body{{}, t.head, t.args};
  Term out = apply_subst(body, ren);
  out.binders = to;
  return out;
}

namespace {

struct InvPattern {
  bool usable = false;
  Head head;
  std::vector<Term> fixed;
  std::size_t wild = 0;
  TypedVar z;
};

struct Inverter {
  std::vector<InvPattern> pats;
  const std::set<std::string>* forbidden;

  // all reconstructions of t; binder prefixes are preserved verbatim
  std::vector<Term> run(const Term& t) const {
    std::vector<Term> out;
    std::set<std::string> seen;
    Term node{{}, t.head, t.args};
    auto emit = [&](Term cand) {
      cand.binders = t.binders;
      if (seen.insert(canon_key(cand)).second) out.push_back(std::move(cand));
    };
    for (const auto& p : pats) {
      if (!p.usable) continue;
      if (!(node.head == p.head)) continue;
      if (node.args.size() != p.fixed.size() + p.wild) continue;
      bool ok = true;
      for (std::size_t l = 0; l < p.fixed.size() && ok; ++l)
        ok = alpha_eq(node.args[l], p.fixed[l]);
      if (!ok) continue;
      std::vector<Term> rest(node.args.begin() + p.fixed.size(),
                             node.args.end());
      for (auto& combo : combos(rest))
        emit(mk_var_head({}, p.z, std::move(combo)));
    }
    if (!forbidden->count(node.head.name)) {
      for (auto& combo : combos(node.args))
        emit(Term{{}, node.head, std::move(combo)});
    }
    return out;
  }

 private:
  // cartesian product of per-argument inversions, first argument slowest
  std::vector<std::vector<Term>> combos(const std::vector<Term>& args) const {
    std::vector<std::vector<Term>> acc{{}};
    for (const auto& a : args) {
      std::vector<Term> cands = run(a);
      if (cands.empty()) return {};
      std::vector<std::vector<Term>> next;
      for (const auto& pre : acc)
        for (const auto& c : cands) {
          auto row = pre;
          row.push_back(c);
          next.push_back(std::move(row));
        }
      acc = std::move(next);
    }
    return acc;
  }
};

}  // namespace

std::vector<Term> invert(const Term& body, const std::vector<Term>& ss,
                         const std::vector<TypedVar>& zs,
                         const std::set<std::string>& forbidden) {
  if (ss.size() != zs.size())
    throw InternalError("invert: fresh variable count mismatch");
  Inverter inv;
  inv.forbidden = &forbidden;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    InvPattern p;
    if (auto m = arg_expanded_split(ss[i])) {
      p.usable = true;
      p.head = ss[i].head;
      p.fixed.assign(ss[i].args.begin(), ss[i].args.begin() + *m);
      p.wild = ss[i].binders.size();
      p.z = zs[i];
    }
    inv.pats.push_back(std::move(p));
  }
  return inv.run(body);
}

namespace {

struct MGoal {
  Term p, t;
  std::set<std::string> ctx;
};

struct Matcher {
  NameGen gen;
  std::vector<Subst> found;
  std::set<std::string> seen;

  void record(const Subst& ga) {
    std::string key;
    for (const auto& [n, b] : ga) key += n + "=" + canon_key(b.second) + ";";
    if (seen.insert(key).second) found.push_back(ga);
  }

  void solve(const std::vector<MGoal>& goals, std::size_t idx,
             const Subst& ga) {
    if (idx == goals.size()) {
      record(ga);
      return;
    }
    const MGoal& g = goals[idx];
    const Term& p = g.p;
    if (p.binders.size() != g.t.binders.size()) return;
    for (std::size_t i = 0; i < p.binders.size(); ++i)
      if (p.binders[i].type != g.t.binders[i].type) return;
    Term t = rename_top_binders(g.t, p.binders);
    std::set<std::string> ctx = g.ctx;
    for (const auto& b : p.binders) ctx.insert(b.name);
    Term pn{{}, p.head, p.args};
    Term tn{{}, t.head, t.args};

    bool flex = p.head.kind == HeadKind::Var && !ctx.count(p.head.name);
    if (flex) {
      if (const Term* img = ga.find(p.head.name)) {
        if (img->type() != p.head.type) return;
        if (alpha_eq(apply_subst(pn, ga), tn)) solve(goals, idx + 1, ga);
        return;
      }
      std::vector<Term> args2;
      args2.reserve(p.args.size());
      for (const auto& a : p.args) args2.push_back(apply_subst(a, ga));
      std::vector<TypedVar> zs;
      for (const auto& a : args2) zs.push_back({gen.fresh("z"), a.type()});
      for (Term& w : invert(tn, args2, zs, ctx)) {
        Term image{zs, w.head, w.args};
        Subst ga2 = ga;
        ga2.bind({p.head.name, p.head.type}, std::move(image));
        solve(goals, idx + 1, ga2);
      }
      return;
    }

    if (!(p.head == t.head)) return;
    if (p.args.size() != t.args.size()) return;
    std::vector<MGoal> next(goals.begin(), goals.begin() + idx);
    for (std::size_t i = 0; i < p.args.size(); ++i)
      next.push_back({p.args[i], t.args[i], ctx});
    next.insert(next.end(), goals.begin() + idx + 1, goals.end());
    solve(next, idx, ga);
  }
};

}  // namespace

MatchResult match(const Term& pattern, const Term& target, CheckMode mode) {
  if (pattern.type() != target.type())
    throw TypeError(TypeError::Kind::TypeMismatch,
                    "pattern and target differ in type");
  DhpReport rep = check_dhp(pattern, mode);
  if (!rep.accepted)
    throw PatternRejected(std::move(rep), "pattern fails the DHP conditions");

  std::set<std::string> avoid = collect_names(pattern);
  collect_names(target, avoid);
  Matcher m;
  m.gen = NameGen(avoid);
  Term p2 = freshen_binders(pattern, m.gen);
  Term t2 = ensure_distinct_binders(target, {});
  m.solve({{p2, t2, {}}}, 0, Subst{});

  MatchResult res;
  for (const auto& ga : m.found) {
    // sound by construction; guard against drift
    if (!alpha_eq(apply_subst(p2, ga), t2))
      throw InternalError("matcher produced a non-matching substitution");
    res.substs.push_back(ga);
  }
  if (res.substs.empty()) {
    res.kind = MatchResult::Kind::NoMatch;
  } else if (res.substs.size() == 1) {
    res.kind = MatchResult::Kind::Unique;
  } else {
    if (mode == CheckMode::Strict)
      throw InternalError("ambiguous match on a strict pattern");
    res.kind = MatchResult::Kind::Ambiguous;
  }
  return res;
}

bool is_instance(const Subst& inst, const Subst& gen,
                 const std::map<std::string, Type>& over) {
  std::set<std::string> avoid;
  auto side = [&](const Subst& th, const std::string& n, const Type& ty) {
    const Term* img = th.find(n);
    return img ? *img : canonical_form(TypedVar{n, ty});
  };
  std::vector<std::pair<Term, Term>> pairs;
  for (const auto& [n, ty] : over) {
    pairs.emplace_back(side(gen, n, ty), side(inst, n, ty));
    collect_names(pairs.back().first, avoid);
    collect_names(pairs.back().second, avoid);
  }
  Matcher m;
  m.gen = NameGen(avoid);
  std::vector<MGoal> goals;
  for (auto& [p, t] : pairs)
    goals.push_back(
        {freshen_binders(p, m.gen), ensure_distinct_binders(t, {}), {}});
  m.solve(goals, 0, Subst{});
  return !m.found.empty();
}

}  // namespace dhpu
