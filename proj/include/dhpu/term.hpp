#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dhpu {

// ---------------------------------------------------------------- types ----

// Flattened simple type: (args) -> result sort. A bare sort has no args.
// (sigma) -> ((tau) -> a) is never represented; it is (sigma, tau) -> a.
struct Type {
  std::vector<Type> args;
  std::string result;

  bool is_sort() const { return args.empty(); }
  bool operator==(const Type& o) const {
    return result == o.result && args == o.args;
  }
  bool operator!=(const Type& o) const { return !(*this == o); }
};

inline Type sort(std::string name) { return Type{{}, std::move(name)}; }

// total order, used for deterministic containers only
bool type_less(const Type& a, const Type& b);

// ---------------------------------------------------------------- terms ----

enum class HeadKind { Fun, Var };

struct Head {
  HeadKind kind;
  std::string name;
  Type type;

  bool operator==(const Head& o) const {
    return kind == o.kind && name == o.name && type == o.type;
  }
};

struct TypedVar {
  std::string name;
  Type type;

  bool operator==(const TypedVar& o) const {
    return name == o.name && type == o.type;
  }
};

// Beta-eta-long normal term: binder prefix, head, full argument list.
// Invariants: args.size() == head.type.args.size(), args[i] has type
// head.type.args[i], and the term's type is (binder types) -> head sort.
// A beta redex is not representable (heads are symbols or variables).
struct Term {
  std::vector<TypedVar> binders;
  Head head;
  std::vector<Term> args;

  const std::string& result_sort() const { return head.type.result; }
  Type type() const;
};

Term mk_term(std::vector<TypedVar> binders, Head head, std::vector<Term> args);
Term mk_var_head(std::vector<TypedVar> binders, const TypedVar& v,
                 std::vector<Term> args);
Term mk_fun_head(std::vector<TypedVar> binders, const std::string& f,
                 const Type& ty, std::vector<Term> args);

// ------------------------------------------------------------ fresh names --

// Deterministic fresh-name source: base1, base2, ... skipping taken names.
struct NameGen {
  std::set<std::string> taken;
  std::map<std::string, int> next;

  explicit NameGen(std::set<std::string> avoid = {}) : taken(std::move(avoid)) {}
  std::string fresh(const std::string& base);
  void reserve(const std::string& n) { taken.insert(n); }
};

// every identifier occurring in t (free, bound, function symbols)
void collect_names(const Term& t, std::set<std::string>& out);
std::set<std::string> collect_names(const Term& t);

// ------------------------------------------------------------- queries -----

// free variables with their types, ordered by name
std::map<std::string, Type> free_vars(const Term& t);
bool occurs_free(const std::string& name, const Term& t);

// |x.h(t1..tn)| = 1 + sum |ti|; binders are free
std::size_t term_size(const Term& t);

bool alpha_eq(const Term& a, const Term& b);

// alpha-invariant key: equal strings iff alpha-equal terms
std::string canon_key(const Term& t);

// canonical form of a variable: \z1..zn. v (z1^ .. zn^), hereditarily expanded
Term canonical_form(const TypedVar& v);
// same, drawing binder names from an external generator
Term eta_expand(const TypedVar& v, NameGen& gen);

// true iff t is the canonical form of variable v (up to alpha)
bool is_eta_of(const Term& t, const TypedVar& v);

// rename every binder in t to a fresh name from gen; alpha-equal result
Term freshen_binders(const Term& t, NameGen& gen);
// rename only where needed so all bound names in t are pairwise distinct and
// avoid the given set
Term ensure_distinct_binders(const Term& t, const std::set<std::string>& avoid);

// decides s |> t: t occurs in s at some position, extending the binder
// prefix through inner abstractions (t equal to s counts)
bool subterm(const Term& s, const Term& t);

// Split of an argument-level term: all of t's own binders reappear,
// eta-expanded and in order, as the trailing arguments of its head, and
// neither the head nor the leading arguments mention them.  Returns the
// number of leading (non-binder) arguments, or nullopt.
std::optional<std::size_t> arg_expanded_split(const Term& t);

// Standalone expandedness: greedy-maximal trailing segment of the binder
// list that appears eta-expanded, in order, as trailing arguments; then the
// disjointness check on that split.
bool is_expanded(const Term& t);

// Decides whether t occurs as an expanded subterm of s, where both terms sit
// under a shared binder prefix and t's remaining binders are t.binders[from..].
// t's trailing-argument positions act as wildcards in the search.
bool contains_expanded_from(const Term& s, const Term& t, std::size_t from);

// Argument-level form: shared prefix is implicit, t's own binders all count.
bool contains_expanded(const Term& s, const Term& t);

// Public relation on standalone terms: shared prefix = longest common
// (name, type) binder prefix.  Decides "t is an expanded subterm of s".
bool expanded_subterm(const Term& s, const Term& t);

// --------------------------------------------------------------- errors ----

struct TypeError : std::runtime_error {
  enum class Kind { UnknownHead, TypeMismatch, NotEtaLong };
  Kind kind;
  TypeError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

// ------------------------------------------------------------- signature ---

struct Signature {
  std::set<std::string> sorts;
  std::map<std::string, Type> funs;
  std::map<std::string, Type> vars;

  const Type* fun_type(const std::string& n) const;
  const Type* var_type(const std::string& n) const;
};

// Validates structure against sig and the expected type; binder-bound heads
// resolve to their binder's type.  Throws TypeError.
void typecheck(const Term& t, const Type& expected, const Signature& sig);

}  // namespace dhpu
