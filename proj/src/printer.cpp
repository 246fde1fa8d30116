#include "dhpu/printer.hpp"

#include <sstream>

namespace dhpu {

namespace {

void type_to(const Type& ty, std::ostream& os) {
  if (ty.is_sort()) {
    os << ty.result;
    return;
  }
  if (ty.args.size() == 1 && ty.args[0].is_sort()) {
    os << ty.args[0].result << " -> " << ty.result;
    return;
  }
  os << '(';
  for (std::size_t i = 0; i < ty.args.size(); ++i) {
    if (i) os << ", ";
    type_to(ty.args[i], os);
  }
  os << ") -> " << ty.result;
}

void term_to(const Term& t, std::ostream& os, bool atom_pos) {
  bool needs_parens = atom_pos && (!t.binders.empty() || !t.args.empty());
  if (needs_parens) os << '(';
  if (!t.binders.empty()) {
    os << '\\';
    for (std::size_t i = 0; i < t.binders.size(); ++i) {
      if (i) os << ' ';
      os << t.binders[i].name << ':';
      // arrow types in binder annotations need parens to keep the binder
      // list unambiguous
      if (t.binders[i].type.is_sort()) {
        os << t.binders[i].type.result;
      } else {
        os << '(';
        type_to(t.binders[i].type, os);
        os << ')';
      }
    }
    os << ". ";
  }
  os << t.head.name;
  for (const auto& a : t.args) {
    os << ' ';
    term_to(a, os, true);
  }
  if (needs_parens) os << ')';
}

}  // namespace

std::string print_type(const Type& ty) {
  std::ostringstream os;
  type_to(ty, os);
  return os.str();
}

std::string print_term(const Term& t) {
  std::ostringstream os;
  term_to(t, os, false);
  return os.str();
}

std::string print_subst(const Subst& th) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [n, b] : th) {
    if (!first) os << ", ";
    first = false;
    os << n << " |-> ";
    term_to(b.second, os, false);
  }
  os << '}';
  return os.str();
}

}  // namespace dhpu
