#include "dhpu/term.hpp"

#include <algorithm>
#include <sstream>

namespace dhpu {

bool type_less(const Type& a, const Type& b) {
  if (a.result != b.result) return a.result < b.result;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size();
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (a.args[i] != b.args[i]) return type_less(a.args[i], b.args[i]);
  }
  return false;
}

Type Term::type() const {
  if (binders.empty()) return head.type.is_sort() && args.empty()
                                  ? head.type
                                  : sort(head.type.result);
  Type ty;
  ty.result = head.type.result;
  for (const auto& b : binders) ty.args.push_back(b.type);
  return ty;
}

Term mk_term(std::vector<TypedVar> binders, Head head, std::vector<Term> args) {
  if (args.size() != head.type.args.size())
    throw InternalError("term arity does not match head type: " + head.name);
  return Term{std::move(binders), std::move(head), std::move(args)};
}

Term mk_var_head(std::vector<TypedVar> binders, const TypedVar& v,
                 std::vector<Term> args) {
  return mk_term(std::move(binders), Head{HeadKind::Var, v.name, v.type},
                 std::move(args));
}

Term mk_fun_head(std::vector<TypedVar> binders, const std::string& f,
                 const Type& ty, std::vector<Term> args) {
  return mk_term(std::move(binders), Head{HeadKind::Fun, f, ty},
                 std::move(args));
}

std::string NameGen::fresh(const std::string& base) {
  int& n = next[base];
  for (;;) {
    ++n;
    std::string cand = base + std::to_string(n);
    if (taken.insert(cand).second) return cand;
  }
}

void collect_names(const Term& t, std::set<std::string>& out) {
  for (const auto& b : t.binders) out.insert(b.name);
  out.insert(t.head.name);
  for (const auto& a : t.args) collect_names(a, out);
}

std::set<std::string> collect_names(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

namespace {

void free_vars_rec(const Term& t, std::map<std::string, Type>& acc,
                   std::set<std::string>& bound) {
  std::vector<std::string> added;
  for (const auto& b : t.binders)
    if (bound.insert(b.name).second) added.push_back(b.name);
  if (t.head.kind == HeadKind::Var && !bound.count(t.head.name))
    acc.emplace(t.head.name, t.head.type);
  for (const auto& a : t.args) free_vars_rec(a, acc, bound);
  for (const auto& n : added) bound.erase(n);
}

}  // namespace

std::map<std::string, Type> free_vars(const Term& t) {
  std::map<std::string, Type> acc;
  std::set<std::string> bound;
  free_vars_rec(t, acc, bound);
  return acc;
}

bool occurs_free(const std::string& name, const Term& t) {
  for (const auto& b : t.binders)
    if (b.name == name) return false;
  if (t.head.kind == HeadKind::Var && t.head.name == name) return true;
  for (const auto& a : t.args)
    if (occurs_free(name, a)) return true;
  return false;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& a : t.args) n += term_size(a);
  return n;
}

namespace {

// Binder correspondence maps with shadowing via save/undo.
struct Corr {
  std::map<std::string, std::string> ab, ba;

  struct Mark {
    std::vector<std::pair<std::string, std::optional<std::string>>> a, b;
  };

  Mark bind(const std::vector<TypedVar>& xs, const std::vector<TypedVar>& ys) {
    Mark m;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      m.a.emplace_back(xs[i].name, save(ab, xs[i].name, ys[i].name));
      m.b.emplace_back(ys[i].name, save(ba, ys[i].name, xs[i].name));
    }
    return m;
  }

  void undo(const Mark& m) {
    for (auto it = m.a.rbegin(); it != m.a.rend(); ++it) restore(ab, *it);
    for (auto it = m.b.rbegin(); it != m.b.rend(); ++it) restore(ba, *it);
  }

 private:
  static std::optional<std::string> save(std::map<std::string, std::string>& m,
                                         const std::string& k,
                                         const std::string& v) {
    auto it = m.find(k);
    std::optional<std::string> old;
    if (it != m.end()) old = it->second;
    m[k] = v;
    return old;
  }
  static void restore(
      std::map<std::string, std::string>& m,
      const std::pair<std::string, std::optional<std::string>>& e) {
    if (e.second)
      m[e.first] = *e.second;
    else
      m.erase(e.first);
  }
};

bool alpha_eq_rec(const Term& a, const Term& b, Corr& corr) {
  if (a.binders.size() != b.binders.size()) return false;
  for (std::size_t i = 0; i < a.binders.size(); ++i)
    if (a.binders[i].type != b.binders[i].type) return false;
  auto mark = corr.bind(a.binders, b.binders);
  bool ok = [&] {
    if (a.head.kind != b.head.kind || a.head.type != b.head.type) return false;
    if (a.head.kind == HeadKind::Fun) {
      if (a.head.name != b.head.name) return false;
    } else {
      auto ia = corr.ab.find(a.head.name);
      auto ib = corr.ba.find(b.head.name);
      if (ia != corr.ab.end() || ib != corr.ba.end()) {
        // at least one side bound: both must be, and must correspond
        if (ia == corr.ab.end() || ib == corr.ba.end()) return false;
        if (ia->second != b.head.name || ib->second != a.head.name)
          return false;
      } else if (a.head.name != b.head.name) {
        return false;
      }
    }
    if (a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!alpha_eq_rec(a.args[i], b.args[i], corr)) return false;
    return true;
  }();
  corr.undo(mark);
  return ok;
}

void print_type_canon(const Type& ty, std::ostream& os) {
  if (ty.is_sort()) {
    os << ty.result;
    return;
  }
  os << '(';
  for (std::size_t i = 0; i < ty.args.size(); ++i) {
    if (i) os << ',';
    print_type_canon(ty.args[i], os);
  }
  os << ")>" << ty.result;
}

void canon_rec(const Term& t, std::ostream& os,
               std::map<std::string, std::string>& env, int& counter) {
  std::vector<std::pair<std::string, std::optional<std::string>>> saved;
  if (!t.binders.empty()) {
    os << '\\';
    for (const auto& b : t.binders) {
      std::string canon = "#" + std::to_string(++counter);
      auto it = env.find(b.name);
      saved.emplace_back(b.name,
                         it == env.end() ? std::optional<std::string>{}
                                         : std::optional<std::string>{it->second});
      env[b.name] = canon;
      os << canon << ':';
      print_type_canon(b.type, os);
      os << ' ';
    }
    os << '.';
  }
  if (t.head.kind == HeadKind::Fun) {
    os << '$' << t.head.name;
  } else {
    auto it = env.find(t.head.name);
    if (it != env.end())
      os << it->second;
    else
      os << t.head.name;
  }
  if (!t.args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) os << ',';
      canon_rec(t.args[i], os, env, counter);
    }
    os << ')';
  }
  for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
    if (it->second)
      env[it->first] = *it->second;
    else
      env.erase(it->first);
  }
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  Corr corr;
  return alpha_eq_rec(a, b, corr);
}

std::string canon_key(const Term& t) {
  std::ostringstream os;
  std::map<std::string, std::string> env;
  int counter = 0;
  canon_rec(t, os, env, counter);
  return os.str();
}

Term eta_expand(const TypedVar& v, NameGen& gen) {
  std::vector<TypedVar> binders;
  for (const auto& at : v.type.args) binders.push_back({gen.fresh("z"), at});
  std::vector<Term> args;
  for (const auto& b : binders) args.push_back(eta_expand(b, gen));
  return mk_var_head(std::move(binders), v, std::move(args));
}

Term canonical_form(const TypedVar& v) {
  NameGen gen({v.name});
  return eta_expand(v, gen);
}

bool is_eta_of(const Term& t, const TypedVar& v) {
  // cheap pre-checks before the alpha comparison
  if (t.head.kind != HeadKind::Var || t.head.name != v.name) return false;
  if (t.binders.size() != v.type.args.size()) return false;
  return alpha_eq(t, canonical_form(v));
}

namespace {

Term rename_binders_rec(const Term& t, NameGen& gen,
                        std::map<std::string, std::string>& env, bool always,
                        std::set<std::string>* seen) {
  Term out;
  std::vector<std::pair<std::string, std::optional<std::string>>> saved;
  for (const auto& b : t.binders) {
    std::string nn;
    bool rename = always;
    if (!always) {
      // rename only on repetition or collision with the avoid set
      rename = !seen->insert(b.name).second || gen.taken.count(b.name) > 0;
    }
    nn = rename ? gen.fresh(b.name) : b.name;
    if (!always && !rename) gen.reserve(b.name);
    if (!always && rename) seen->insert(nn);
    auto it = env.find(b.name);
    saved.emplace_back(b.name,
                       it == env.end() ? std::optional<std::string>{}
                                       : std::optional<std::string>{it->second});
    env[b.name] = nn;
    out.binders.push_back({nn, b.type});
  }
  out.head = t.head;
  if (t.head.kind == HeadKind::Var) {
    auto it = env.find(t.head.name);
    if (it != env.end()) out.head.name = it->second;
  }
  for (const auto& a : t.args)
    out.args.push_back(rename_binders_rec(a, gen, env, always, seen));
  for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
    if (it->second)
      env[it->first] = *it->second;
    else
      env.erase(it->first);
  }
  return out;
}

}  // namespace

Term freshen_binders(const Term& t, NameGen& gen) {
  std::map<std::string, std::string> env;
  return rename_binders_rec(t, gen, env, true, nullptr);
}

Term ensure_distinct_binders(const Term& t,
                             const std::set<std::string>& avoid) {
  std::set<std::string> av = avoid;
  for (const auto& [n, ty] : free_vars(t)) av.insert(n);
  NameGen gen(av);
  std::set<std::string> seen;
  std::map<std::string, std::string> env;
  return rename_binders_rec(t, gen, env, false, &seen);
}

namespace {

// t with the binder prefix of the enclosing occurrence prepended
Term extend_prefix(const std::vector<TypedVar>& prefix, const Term& t) {
  Term out = t;
  out.binders.insert(out.binders.begin(), prefix.begin(), prefix.end());
  return out;
}

bool subterm_rec(const Term& s, const Term& t) {
  if (alpha_eq(s, t)) return true;
  for (const auto& a : s.args)
    if (subterm_rec(extend_prefix(s.binders, a), t)) return true;
  return false;
}

}  // namespace

bool subterm(const Term& s, const Term& t) { return subterm_rec(s, t); }

namespace {

// shared by both split notions: args[m + j] must be the eta-expansion of
// bs[from + j], and neither the head nor args[0..m) may mention bs[from..]
bool split_ok(const Term& t, std::size_t from, std::size_t m) {
  std::size_t k = t.binders.size() - from;
  for (std::size_t j = 0; j < k; ++j)
    if (!is_eta_of(t.args[m + j], t.binders[from + j])) return false;
  std::set<std::string> own;
  for (std::size_t j = from; j < t.binders.size(); ++j)
    own.insert(t.binders[j].name);
  if (own.count(t.head.name)) return false;
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& [n, ty] : free_vars(t.args[i]))
      if (own.count(n)) return false;
  return true;
}

std::optional<std::size_t> split_from(const Term& t, std::size_t from) {
  std::size_t k = t.binders.size() - from;
  if (t.args.size() < k) return std::nullopt;
  std::size_t m = t.args.size() - k;
  if (!split_ok(t, from, m)) return std::nullopt;
  return m;
}

}  // namespace

std::optional<std::size_t> arg_expanded_split(const Term& t) {
  return split_from(t, 0);
}

bool is_expanded(const Term& t) {
  // greedy-maximal trailing match first, then the disjointness conditions
  std::size_t kmax = 0;
  std::size_t lim = std::min(t.binders.size(), t.args.size());
  while (kmax < lim &&
         is_eta_of(t.args[t.args.size() - 1 - kmax],
                   t.binders[t.binders.size() - 1 - kmax]))
    ++kmax;
  std::size_t from = t.binders.size() - kmax;
  std::size_t m = t.args.size() - kmax;
  return split_ok(t, from, m);
}

namespace {

// does any occurrence in s (s itself or a descendant node) have the given
// head with matching fixed arguments followed by exactly k more arguments
bool search_pattern(const Term& s, const Head& h,
                    const std::vector<Term>& fixed, std::size_t k) {
  bool here = s.head == h && s.args.size() == fixed.size() + k;
  if (here) {
    for (std::size_t i = 0; i < fixed.size(); ++i)
      if (!alpha_eq(s.args[i], fixed[i])) {
        here = false;
        break;
      }
  }
  if (here) return true;
  for (const auto& a : s.args)
    if (search_pattern(a, h, fixed, k)) return true;
  return false;
}

}  // namespace

bool contains_expanded_from(const Term& s, const Term& t, std::size_t from) {
  auto m = split_from(t, from);
  if (!m) return false;
  std::vector<Term> fixed(t.args.begin(), t.args.begin() + *m);
  return search_pattern(s, t.head, fixed, t.binders.size() - from);
}

bool contains_expanded(const Term& s, const Term& t) {
  return contains_expanded_from(s, t, 0);
}

bool expanded_subterm(const Term& s, const Term& t) {
  std::size_t shared = 0;
  while (shared < s.binders.size() && shared < t.binders.size() &&
         s.binders[shared] == t.binders[shared])
    ++shared;
  return contains_expanded_from(s, t, shared);
}

// ------------------------------------------------------------- signature ---

const Type* Signature::fun_type(const std::string& n) const {
  auto it = funs.find(n);
  return it == funs.end() ? nullptr : &it->second;
}

const Type* Signature::var_type(const std::string& n) const {
  auto it = vars.find(n);
  return it == vars.end() ? nullptr : &it->second;
}

namespace {

void typecheck_rec(const Term& t, const Type& expected, const Signature& sig,
                   std::map<std::string, Type>& bound) {
  if (t.binders.size() != expected.args.size())
    throw TypeError(TypeError::Kind::NotEtaLong,
                    "binder count does not match the expected type");
  std::vector<std::pair<std::string, std::optional<Type>>> saved;
  for (std::size_t i = 0; i < t.binders.size(); ++i) {
    if (t.binders[i].type != expected.args[i])
      throw TypeError(TypeError::Kind::TypeMismatch,
                      "binder " + t.binders[i].name +
                          " does not have the expected type");
    auto it = bound.find(t.binders[i].name);
    saved.emplace_back(t.binders[i].name,
                       it == bound.end() ? std::optional<Type>{}
                                         : std::optional<Type>{it->second});
    bound[t.binders[i].name] = t.binders[i].type;
  }
  // resolve the head
  Type hty;
  if (t.head.kind == HeadKind::Fun) {
    const Type* ft = sig.fun_type(t.head.name);
    if (!ft)
      throw TypeError(TypeError::Kind::UnknownHead,
                      "unknown function symbol " + t.head.name);
    hty = *ft;
  } else {
    auto it = bound.find(t.head.name);
    if (it != bound.end()) {
      hty = it->second;
    } else {
      const Type* vt = sig.var_type(t.head.name);
      if (!vt)
        throw TypeError(TypeError::Kind::UnknownHead,
                        "unknown variable " + t.head.name);
      hty = *vt;
    }
  }
  if (hty != t.head.type)
    throw TypeError(TypeError::Kind::TypeMismatch,
                    "head " + t.head.name + " carries a stale type");
  if (t.args.size() != hty.args.size())
    throw TypeError(TypeError::Kind::NotEtaLong,
                    "head " + t.head.name + " is not fully applied");
  if (hty.result != expected.result)
    throw TypeError(TypeError::Kind::TypeMismatch,
                    "head " + t.head.name + " produces sort " + hty.result +
                        " where " + expected.result + " is required");
  for (std::size_t i = 0; i < t.args.size(); ++i)
    typecheck_rec(t.args[i], hty.args[i], sig, bound);
  for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
    if (it->second)
      bound[it->first] = *it->second;
    else
      bound.erase(it->first);
  }
}

}  // namespace

void typecheck(const Term& t, const Type& expected, const Signature& sig) {
  std::map<std::string, Type> bound;
  typecheck_rec(t, expected, sig, bound);
}

}  // namespace dhpu
