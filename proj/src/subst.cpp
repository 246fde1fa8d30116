#include "dhpu/subst.hpp"

#include <algorithm>

namespace dhpu {

Subst::Subst(std::initializer_list<std::pair<TypedVar, Term>> bs) {
  for (const auto& [v, img] : bs) bind(v, img);
}

void Subst::bind(const TypedVar& v, Term image) {
  if (image.type() != v.type)
    throw TypeError(TypeError::Kind::TypeMismatch,
                    "image type does not match variable " + v.name);
  map_.insert_or_assign(v.name, std::make_pair(v.type, std::move(image)));
}

const Term* Subst::find(const std::string& name) const {
  auto it = map_.find(name);
  return it == map_.end() ? nullptr : &it->second.second;
}

const Type* Subst::var_type(const std::string& name) const {
  auto it = map_.find(name);
  return it == map_.end() ? nullptr : &it->second.first;
}

std::set<std::string> Subst::domain() const {
  std::set<std::string> d;
  for (const auto& [n, b] : map_) d.insert(n);
  return d;
}

std::map<std::string, Type> Subst::image_free_vars() const {
  std::map<std::string, Type> fv;
  for (const auto& [n, b] : map_)
    for (const auto& [fn, ft] : free_vars(b.second)) fv.emplace(fn, ft);
  return fv;
}

Subst Subst::restricted(const std::set<std::string>& keep) const {
  Subst out;
  for (const auto& [n, b] : map_)
    if (keep.count(n)) out.map_.emplace(n, b);
  return out;
}

namespace {

// env maps variable names to eta-long images; clash holds dom(env) plus all
// names free in its images, so binders get renamed before they can capture
Term apply_rec(const Term& t, const std::map<std::string, Term>& env,
               const std::set<std::string>& clash, NameGen& gen);

// beta-reduce image(args): consume the image's top binders, substituting the
// (already substituted) arguments.  The copy is freshened so every
// instantiation site gets globally new bound names.
Term beta_apply(const Term& image, std::vector<Term> args, NameGen& gen) {
  Term u = freshen_binders(image, gen);
  if (u.binders.size() != args.size())
    throw InternalError("substitution image applied to wrong argument count");
  if (args.empty()) return u;
  std::map<std::string, Term> env;
  std::set<std::string> clash;
  for (std::size_t i = 0; i < u.binders.size(); ++i) {
    clash.insert(u.binders[i].name);
    for (const auto& [n, ty] : free_vars(args[i])) clash.insert(n);
    env.emplace(u.binders[i].name, std::move(args[i]));
  }
  Term body{{}, u.head, std::move(u.args)};
  return apply_rec(body, env, clash, gen);
}

Term apply_rec(const Term& t, const std::map<std::string, Term>& env,
               const std::set<std::string>& clash, NameGen& gen) {
  // rename binders that clash with the substitution
  const std::map<std::string, Term>* cur = &env;
  const std::set<std::string>* curclash = &clash;
  std::map<std::string, Term> env2;
  std::set<std::string> clash2;
  std::vector<TypedVar> binders;
  for (const auto& b : t.binders) {
    if (curclash->count(b.name)) {
      if (cur != &env2) {
        env2 = env;
        clash2 = clash;
        cur = &env2;
        curclash = &clash2;
      }
      TypedVar nb{gen.fresh(b.name), b.type};
      env2[b.name] = eta_expand(nb, gen);
      clash2.insert(nb.name);
      binders.push_back(nb);
    } else {
      binders.push_back(b);
    }
  }

  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(apply_rec(a, *cur, *curclash, gen));

  if (t.head.kind == HeadKind::Var) {
    auto it = cur->find(t.head.name);
    if (it != cur->end()) {
      Term red = beta_apply(it->second, std::move(args), gen);
      if (!red.binders.empty())
        throw InternalError("beta residue after hereditary substitution");
      red.binders = std::move(binders);
      return red;
    }
  }
  return Term{std::move(binders), t.head, std::move(args)};
}

}  // namespace

Term apply_subst(const Term& t, const Subst& th) {
  if (th.empty()) return t;
  std::map<std::string, Term> env;
  std::set<std::string> clash;
  std::set<std::string> avoid = collect_names(t);
  for (const auto& [n, b] : th) {
    if (b.first != b.second.type() || n.empty())
      throw InternalError("malformed substitution entry " + n);
    env.emplace(n, b.second);
    clash.insert(n);
    avoid.insert(n);
    collect_names(b.second, avoid);
  }
  for (const auto& [fn, ft] : th.image_free_vars()) clash.insert(fn);
  NameGen gen(std::move(avoid));
  return apply_rec(t, env, clash, gen);
}

Subst compose(const Subst& th, const Subst& de) {
  Subst out;
  for (const auto& [n, b] : th)
    out.bind({n, b.first}, apply_subst(b.second, de));
  for (const auto& [n, b] : de)
    if (!th.has(n)) out.bind({n, b.first}, b.second);
  return out;
}

}  // namespace dhpu
