#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhpu/term.hpp"

namespace dhpu {

struct SrcPos {
  int line = 1;
  int col = 1;
};

struct ParseError : std::runtime_error {
  enum class Kind {
    Syntax,
    Duplicate,
    Unknown,
    UntypeableBinder,
    TypeMismatch,
    BetaRedex
  };
  Kind kind;
  SrcPos pos;
  ParseError(Kind k, SrcPos p, const std::string& msg)
      : std::runtime_error(msg), kind(k), pos(p) {}
};

struct RawTerm;
using RawTermPtr = std::shared_ptr<const RawTerm>;

struct RawBinder {
  std::string name;
  std::optional<Type> type;  // absent: inferred from the expected type
  SrcPos pos;
};

// one application atom: a bare identifier or a parenthesized subterm
struct RawAtom {
  std::string id;  // empty iff group
  RawTermPtr group;
  SrcPos pos;
};

// binder prefix (possibly empty) over an application spine; a lambda body
// that is itself a lambda is merged into one prefix at parse time
struct RawTerm {
  std::vector<RawBinder> binders;
  std::vector<RawAtom> spine;
  SrcPos pos;
};

enum class QueryKind { Unify, Match, Dhp };

struct ParsedQuery {
  QueryKind kind;
  std::string name;  // empty when unnamed
  RawTermPtr lhs;
  RawTermPtr rhs;  // null for Dhp
  SrcPos pos;
};

struct ParsedFile {
  Signature sig;
  std::vector<ParsedQuery> queries;
};

// declarations then queries, each terminated by '.'
ParsedFile parse_file(const std::string& text);

// Checks raw against the expected type: annotated binders must agree,
// unannotated ones take the expected argument type, underapplied heads are
// eta-expanded with fresh binders, beta redexes are rejected.  The result is
// canonical and passes typecheck.
Term elaborate(const RawTerm& raw, const Type& expected, const Signature& sig);

// Same, but the type is computed; every binder needs an annotation.
Term elaborate_infer(const RawTerm& raw, const Signature& sig);

struct Query {
  QueryKind kind;
  std::string name;
  Term lhs;
  Term rhs;  // meaningless for Dhp
};

// Elaborates both sides, inferring the shared type from whichever side
// determines it (annotation is required on at least one).
Query elaborate_query(const ParsedQuery& q, const Signature& sig);

}  // namespace dhpu
