#include "dhpu/parser.hpp"

#include <cctype>
#include <set>

namespace dhpu {

namespace {

bool reserved_word(const std::string& s) {
  static const std::set<std::string> kw = {"sort", "fun",   "var", "name",
                                           "unify", "match", "dhp"};
  return kw.count(s) > 0;
}

struct Token {
  enum class K {
    Id,
    Lambda,
    Dot,
    Colon,
    LParen,
    RParen,
    Comma,
    Arrow,
    UnifyEq,   // =?
    MatchEq,   // <=?
    End
  };
  K k = K::End;
  std::string id;
  SrcPos pos;
};

[[noreturn]] void fail(ParseError::Kind k, SrcPos p, const std::string& msg) {
  throw ParseError(k, p, msg + " at " + std::to_string(p.line) + ":" +
                             std::to_string(p.col));
}

struct Lexer {
  const std::string& text;
  std::size_t i = 0;
  SrcPos pos;

  explicit Lexer(const std::string& t) : text(t) {}

  void bump() {
    if (text[i] == '\n') {
      pos.line++;
      pos.col = 1;
    } else {
      pos.col++;
    }
    i++;
  }

  Token next() {
    while (i < text.size() && std::isspace((unsigned char)text[i])) bump();
    Token t;
    t.pos = pos;
    if (i >= text.size()) return t;
    char c = text[i];
    auto one = [&](Token::K k) {
      bump();
      t.k = k;
      return t;
    };
    if (c == '\\') return one(Token::K::Lambda);
    if (c == '.') return one(Token::K::Dot);
    if (c == ':') return one(Token::K::Colon);
    if (c == '(') return one(Token::K::LParen);
    if (c == ')') return one(Token::K::RParen);
    if (c == ',') return one(Token::K::Comma);
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      bump();
      bump();
      t.k = Token::K::Arrow;
      return t;
    }
    if (c == '=' && i + 1 < text.size() && text[i + 1] == '?') {
      bump();
      bump();
      t.k = Token::K::UnifyEq;
      return t;
    }
    if (c == '<' && i + 2 < text.size() && text[i + 1] == '=' &&
        text[i + 2] == '?') {
      bump();
      bump();
      bump();
      t.k = Token::K::MatchEq;
      return t;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      std::string id;
      while (i < text.size() &&
             (std::isalnum((unsigned char)text[i]) || text[i] == '_' ||
              text[i] == '\'')) {
        id += text[i];
        bump();
      }
      t.k = Token::K::Id;
      t.id = std::move(id);
      return t;
    }
    fail(ParseError::Kind::Syntax, pos,
         std::string("unexpected character '") + c + "'");
  }
};

struct Parser {
  Lexer lex;
  Token cur;

  explicit Parser(const std::string& text) : lex(text) { cur = lex.next(); }

  void advance() { cur = lex.next(); }

  bool at(Token::K k) const { return cur.k == k; }
  bool at_id(const char* w) const {
    return cur.k == Token::K::Id && cur.id == w;
  }

  Token expect(Token::K k, const char* what) {
    if (cur.k != k)
      fail(ParseError::Kind::Syntax, cur.pos, std::string("expected ") + what);
    Token t = cur;
    advance();
    return t;
  }

  std::string expect_name(const char* what) {
    Token t = expect(Token::K::Id, what);
    if (reserved_word(t.id))
      fail(ParseError::Kind::Syntax, t.pos,
           "reserved word '" + t.id + "' cannot be used as " + what);
    return t.id;
  }

  Type parse_type(const Signature& sig) {
    Type ty;
    if (at(Token::K::LParen)) {
      SrcPos open = cur.pos;
      advance();
      std::vector<Type> parts;
      parts.push_back(parse_type(sig));
      while (at(Token::K::Comma)) {
        advance();
        parts.push_back(parse_type(sig));
      }
      expect(Token::K::RParen, "')'");
      if (at(Token::K::Arrow)) {
        advance();
        ty = Type{std::move(parts), parse_sort(sig)};
      } else if (parts.size() == 1) {
        ty = std::move(parts[0]);  // plain grouping
      } else {
        fail(ParseError::Kind::Syntax, open,
             "argument list must be followed by '->'");
      }
    } else {
      ty = sort(parse_sort(sig));
    }
    while (at(Token::K::Arrow)) {
      advance();
      ty = Type{{std::move(ty)}, parse_sort(sig)};
    }
    return ty;
  }

  std::string parse_sort(const Signature& sig) {
    Token t = expect(Token::K::Id, "a sort name");
    if (!sig.sorts.count(t.id))
      fail(ParseError::Kind::Unknown, t.pos, "unknown sort '" + t.id + "'");
    return t.id;
  }

  bool atom_start() const {
    return (cur.k == Token::K::Id && !reserved_word(cur.id)) ||
           cur.k == Token::K::LParen;
  }

  RawTermPtr parse_term(const Signature& sig) {
    auto r = std::make_shared<RawTerm>();
    r->pos = cur.pos;
    if (at(Token::K::Lambda)) {
      advance();
      while (at(Token::K::Id)) {
        RawBinder b;
        b.pos = cur.pos;
        b.name = expect_name("a binder name");
        if (at(Token::K::Colon)) {
          advance();
          b.type = parse_type(sig);
        }
        r->binders.push_back(std::move(b));
      }
      if (r->binders.empty())
        fail(ParseError::Kind::Syntax, cur.pos, "expected a binder name");
      expect(Token::K::Dot, "'.' after binders");
      RawTermPtr body = parse_term(sig);
      r->binders.insert(r->binders.end(), body->binders.begin(),
                        body->binders.end());
      r->spine = body->spine;
      return r;
    }
    while (atom_start()) {
      RawAtom a;
      a.pos = cur.pos;
      if (at(Token::K::Id)) {
        a.id = cur.id;
        advance();
      } else {
        advance();
        a.group = parse_term(sig);
        expect(Token::K::RParen, "')'");
      }
      r->spine.push_back(std::move(a));
    }
    if (r->spine.empty())
      fail(ParseError::Kind::Syntax, cur.pos, "expected a term");
    return r;
  }

  void declare(Signature& sig, const std::string& n, SrcPos p) {
    if (sig.sorts.count(n) || sig.funs.count(n) || sig.vars.count(n))
      fail(ParseError::Kind::Duplicate, p, "'" + n + "' is already declared");
  }

  ParsedFile run() {
    ParsedFile f;
    while (at_id("sort") || at_id("fun") || at_id("var")) {
      std::string kw = cur.id;
      advance();
      SrcPos p = cur.pos;
      std::string n = expect_name("a declaration name");
      declare(f.sig, n, p);
      if (kw == "sort") {
        f.sig.sorts.insert(n);
      } else {
        expect(Token::K::Colon, "':'");
        Type ty = parse_type(f.sig);
        (kw == "fun" ? f.sig.funs : f.sig.vars).emplace(n, std::move(ty));
      }
      expect(Token::K::Dot, "'.'");
    }
    while (!at(Token::K::End)) {
      ParsedQuery q;
      q.pos = cur.pos;
      if (at_id("name")) {
        advance();
        q.name = expect_name("a query name");
      }
      if (at_id("unify")) {
        advance();
        q.kind = QueryKind::Unify;
        q.lhs = parse_term(f.sig);
        expect(Token::K::UnifyEq, "'=?'");
        q.rhs = parse_term(f.sig);
      } else if (at_id("match")) {
        advance();
        q.kind = QueryKind::Match;
        q.lhs = parse_term(f.sig);
        expect(Token::K::MatchEq, "'<=?'");
        q.rhs = parse_term(f.sig);
      } else if (at_id("dhp")) {
        advance();
        q.kind = QueryKind::Dhp;
        q.lhs = parse_term(f.sig);
      } else {
        fail(ParseError::Kind::Syntax, cur.pos,
             "expected a declaration or a query");
      }
      expect(Token::K::Dot, "'.'");
      f.queries.push_back(std::move(q));
    }
    return f;
  }
};

// ------------------------------------------------------------ elaboration --

void collect_raw_ids(const RawTerm& r, std::set<std::string>& out) {
  for (const auto& b : r.binders) out.insert(b.name);
  for (const auto& a : r.spine) {
    if (a.group)
      collect_raw_ids(*a.group, out);
    else
      out.insert(a.id);
  }
}

struct Elab {
  const Signature& sig;
  std::vector<TypedVar> env;
  NameGen gen;

  Elab(const Signature& s, const RawTerm& root) : sig(s) {
    std::set<std::string> avoid = s.sorts;
    for (const auto& [n, ty] : s.funs) avoid.insert(n);
    for (const auto& [n, ty] : s.vars) avoid.insert(n);
    collect_raw_ids(root, avoid);
    gen = NameGen(std::move(avoid));
  }

  TypedVar push_binder(const RawBinder& b, const Type& ty) {
    if (sig.funs.count(b.name) || sig.vars.count(b.name))
      fail(ParseError::Kind::Duplicate, b.pos,
           "binder '" + b.name + "' collides with a declaration");
    if (b.type && *b.type != ty)
      fail(ParseError::Kind::TypeMismatch, b.pos,
           "binder '" + b.name + "' is annotated with a different type");
    TypedVar v{b.name, ty};
    env.push_back(v);
    return v;
  }

  // leading parenthesized applications are spliced into the spine
  static std::vector<RawAtom> flatten(std::vector<RawAtom> spine) {
    while (!spine.empty() && spine[0].group && spine[0].group->binders.empty()) {
      std::vector<RawAtom> s = spine[0].group->spine;
      s.insert(s.end(), spine.begin() + 1, spine.end());
      spine = std::move(s);
    }
    return spine;
  }

  Head resolve(const RawAtom& a) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->name == a.id) return Head{HeadKind::Var, a.id, it->type};
    if (const Type* ty = sig.var_type(a.id))
      return Head{HeadKind::Var, a.id, *ty};
    if (const Type* ty = sig.fun_type(a.id))
      return Head{HeadKind::Fun, a.id, *ty};
    fail(ParseError::Kind::Unknown, a.pos, "unknown identifier '" + a.id + "'");
  }

  RawTerm atom_term(const RawAtom& a) const {
    if (a.group) return *a.group;
    RawTerm r;
    r.pos = a.pos;
    r.spine.push_back(a);
    return r;
  }

  // check mode: the full expected type is known
  Term check(const RawTerm& r, const Type& expected) {
    if (r.binders.size() > expected.args.size())
      fail(ParseError::Kind::TypeMismatch, r.pos,
           "more binders than the expected type provides");
    std::vector<TypedVar> binders;
    for (std::size_t i = 0; i < r.binders.size(); ++i)
      binders.push_back(push_binder(r.binders[i], expected.args[i]));
    Type rest;
    rest.args.assign(expected.args.begin() + r.binders.size(),
                     expected.args.end());
    rest.result = expected.result;

    std::vector<RawAtom> spine = flatten(r.spine);
    Term out;
    if (spine[0].group) {
      if (spine.size() > 1)
        fail(ParseError::Kind::BetaRedex, spine[0].pos,
             "an abstraction cannot be applied");
      Term inner = check(*spine[0].group, rest);
      binders.insert(binders.end(), inner.binders.begin(),
                     inner.binders.end());
      out = mk_term(std::move(binders), inner.head, std::move(inner.args));
    } else {
      out = spine_term(spine, std::move(binders), &rest);
    }
    env.resize(env.size() - r.binders.size());
    return out;
  }

  // infer mode: binders must carry annotations
  Term infer(const RawTerm& r) {
    std::vector<TypedVar> binders;
    for (const auto& b : r.binders) {
      if (!b.type)
        fail(ParseError::Kind::UntypeableBinder, b.pos,
             "binder '" + b.name + "' needs a type annotation here");
      binders.push_back(push_binder(b, *b.type));
    }
    std::vector<RawAtom> spine = flatten(r.spine);
    Term out;
    if (spine[0].group) {
      if (spine.size() > 1)
        fail(ParseError::Kind::BetaRedex, spine[0].pos,
             "an abstraction cannot be applied");
      Term inner = infer(*spine[0].group);
      binders.insert(binders.end(), inner.binders.begin(),
                     inner.binders.end());
      out = mk_term(std::move(binders), inner.head, std::move(inner.args));
    } else {
      out = spine_term(spine, std::move(binders), nullptr);
    }
    env.resize(env.size() - r.binders.size());
    return out;
  }

  // Elaborates head + arguments; `rest` constrains the leftover argument
  // types in check mode and is null in infer mode.  Underapplied heads grow
  // fresh eta-binders.
  Term spine_term(const std::vector<RawAtom>& spine,
                  std::vector<TypedVar> binders, const Type* rest) {
    Head h = resolve(spine[0]);
    std::size_t k = spine.size() - 1;
    std::size_t n = h.type.args.size();
    if (k > n)
      fail(ParseError::Kind::TypeMismatch, spine[0].pos,
           "'" + spine[0].id + "' is applied to too many arguments");
    if (rest) {
      bool ok = n - k == rest->args.size() && h.type.result == rest->result;
      for (std::size_t j = 0; ok && j < rest->args.size(); ++j)
        ok = h.type.args[k + j] == rest->args[j];
      if (!ok)
        fail(ParseError::Kind::TypeMismatch, spine[0].pos,
             "'" + spine[0].id + "' does not fit the expected type here");
    }
    std::vector<Term> args;
    for (std::size_t i = 0; i < k; ++i)
      args.push_back(check(atom_term(spine[i + 1]), h.type.args[i]));
    for (std::size_t j = k; j < n; ++j) {
      TypedVar z{gen.fresh("z"), h.type.args[j]};
      args.push_back(eta_expand(z, gen));
      binders.push_back(z);
    }
    return mk_term(std::move(binders), std::move(h), std::move(args));
  }
};

Term finish(Term t, const Type& expected, const Signature& sig) {
  t = ensure_distinct_binders(t, {});
  typecheck(t, expected, sig);
  return t;
}

}  // namespace

ParsedFile parse_file(const std::string& text) {
  return Parser(text).run();
}

Term elaborate(const RawTerm& raw, const Type& expected, const Signature& sig) {
  Elab e(sig, raw);
  return finish(e.check(raw, expected), expected, sig);
}

Term elaborate_infer(const RawTerm& raw, const Signature& sig) {
  Elab e(sig, raw);
  Term t = e.infer(raw);
  Type ty = t.type();
  return finish(std::move(t), ty, sig);
}

Query elaborate_query(const ParsedQuery& q, const Signature& sig) {
  Query out;
  out.kind = q.kind;
  out.name = q.name;
  if (q.kind == QueryKind::Dhp) {
    out.lhs = elaborate_infer(*q.lhs, sig);
    out.rhs = out.lhs;
    return out;
  }
  try {
    out.lhs = elaborate_infer(*q.lhs, sig);
  } catch (const ParseError& e) {
    if (e.kind != ParseError::Kind::UntypeableBinder) throw;
    out.rhs = elaborate_infer(*q.rhs, sig);
    out.lhs = elaborate(*q.lhs, out.rhs.type(), sig);
    return out;
  }
  out.rhs = elaborate(*q.rhs, out.lhs.type(), sig);
  return out;
}

}  // namespace dhpu
