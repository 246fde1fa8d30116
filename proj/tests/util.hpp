// Shared test fixtures: parse a signature once, then parse terms on demand in
// the surface syntax instead of building Term values by hand.
#pragma once

#include <string>
#include <utility>

#include "dhpu/parser.hpp"
#include "dhpu/term.hpp"

namespace dhpu::testutil {

struct Env {
  std::string decls;
  Signature sig;

  explicit Env(std::string d) : decls(std::move(d)), sig(parse_file(decls).sig) {}

  // infer mode: every binder must be annotated
  Term term(const std::string& text) const {
    ParsedFile f = parse_file(decls + "\nname q dhp " + text + " .");
    return elaborate_infer(*f.queries.at(0).lhs, f.sig);
  }

  // check mode: binder annotations may be omitted
  Term term(const std::string& text, const Type& expected) const {
    ParsedFile f = parse_file(decls + "\nname q dhp " + text + " .");
    return elaborate(*f.queries.at(0).lhs, expected, f.sig);
  }
};

inline Type ar(std::vector<Type> args, std::string res) {
  return Type{std::move(args), std::move(res)};
}

}  // namespace dhpu::testutil
