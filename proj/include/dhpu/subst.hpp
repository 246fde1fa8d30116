#pragma once

#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dhpu/term.hpp"

namespace dhpu {

// Finite map from variables to terms of the same type.  Images are stored in
// eta-long form; application is hereditary (applied occurrences are
// beta-reduced on the fly, keeping terms normal).
class Subst {
 public:
  Subst() = default;
  Subst(std::initializer_list<std::pair<TypedVar, Term>> bs);

  // fails fast on a type mismatch between v and image
  void bind(const TypedVar& v, Term image);

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  bool has(const std::string& name) const { return map_.count(name) > 0; }
  const Term* find(const std::string& name) const;
  const Type* var_type(const std::string& name) const;

  std::set<std::string> domain() const;
  // free variables across all images
  std::map<std::string, Type> image_free_vars() const;

  // keep only bindings for the given names
  Subst restricted(const std::set<std::string>& keep) const;

  // ordered iteration over (name, (type, image))
  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

 private:
  std::map<std::string, std::pair<Type, Term>> map_;
};

// t with th applied: variable heads in dom(th) are replaced and their
// arguments substituted into the image's binders; bound variables that would
// capture are renamed with fresh suffixed names
Term apply_subst(const Term& t, const Subst& th);

// composition: apply_subst(t, compose(th, de)) == apply_subst(apply_subst(t, th), de)
Subst compose(const Subst& th, const Subst& de);

}  // namespace dhpu
