#include "dhpu/dhp.hpp"

#include "dhpu/printer.hpp"

namespace dhpu {

const char* condition_name(DhpCondition c) {
  switch (c) {
    case DhpCondition::CondI: return "i";
    case DhpCondition::CondII: return "ii";
    case DhpCondition::CondIII: return "iii";
  }
  return "?";
}

void check_var_arg_list(const std::vector<Term>& args,
                        const std::set<std::string>& bound_above,
                        const std::vector<std::size_t>& path_prefix,
                        std::vector<DhpViolation>& out) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    auto path = path_prefix;
    path.push_back(i);
    auto fv = free_vars(args[i]);
    bool fv_ok = !fv.empty();
    for (const auto& [n, ty] : fv)
      if (!bound_above.count(n)) fv_ok = false;
    if (!fv_ok)
      out.push_back({DhpCondition::CondI, path, print_term(args[i]), ""});
    if (!arg_expanded_split(args[i]))
      out.push_back({DhpCondition::CondII, path, print_term(args[i]), ""});
    for (std::size_t j = 0; j < args.size(); ++j) {
      if (j == i) continue;
      if (contains_expanded(args[i], args[j]))
        out.push_back({DhpCondition::CondIII, path, print_term(args[i]),
                       print_term(args[j])});
    }
  }
}

namespace {

void walk(const Term& t, std::set<std::string>& bound,
          std::vector<std::size_t>& path, std::vector<DhpViolation>& out) {
  std::vector<std::string> added;
  for (const auto& b : t.binders)
    if (bound.insert(b.name).second) added.push_back(b.name);
  if (t.head.kind == HeadKind::Var && !bound.count(t.head.name))
    check_var_arg_list(t.args, bound, path, out);
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    path.push_back(i);
    walk(t.args[i], bound, path, out);
    path.pop_back();
  }
  for (const auto& n : added) bound.erase(n);
}

}  // namespace

DhpReport check_dhp(const Term& t, CheckMode mode) {
  DhpReport rep;
  if (mode == CheckMode::Off) return rep;
  Term u = ensure_distinct_binders(t, {});
  std::set<std::string> bound;
  std::vector<std::size_t> path;
  walk(u, bound, path, rep.violations);
  if (mode == CheckMode::Strict) {
    rep.accepted = rep.violations.empty();
  } else {
    rep.accepted = true;
    for (const auto& v : rep.violations)
      if (v.condition != DhpCondition::CondIII) rep.accepted = false;
  }
  return rep;
}

}  // namespace dhpu
