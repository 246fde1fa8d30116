#include "dhpu/driver.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dhpu/dhp.hpp"
#include "dhpu/match.hpp"
#include "dhpu/oracle.hpp"
#include "dhpu/parser.hpp"
#include "dhpu/printer.hpp"
#include "dhpu/unify.hpp"

namespace dhpu {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string input;
  std::string query;
  int max_steps = 64;
  std::optional<int> max_solutions;
  std::string dhp_check = "strict";
  std::string traversal = "bfs";
  std::string format = "text";
  bool trace = false;
  int image_size = 3;
  int fresh_vars = 0;
};

CheckMode mode_of(const std::string& s) {
  if (s == "strict") return CheckMode::Strict;
  if (s == "lenient") return CheckMode::Lenient;
  return CheckMode::Off;
}

std::string query_label(const Query& q, std::size_t index) {
  return q.name.empty() ? "query " + std::to_string(index + 1) : q.name;
}

json subst_json(const Subst& th) {
  json o = json::object();
  for (const auto& [n, entry] : th) o[n] = print_term(entry.second);
  return o;
}

json trace_json(const std::vector<TraceStep>& steps) {
  json arr = json::array();
  for (const auto& st : steps) {
    json step;
    step["rule"] = rule_name(st.rule);
    json eqs = json::array();
    for (const auto& [l, r] : st.equations) eqs.push_back(json::array({l, r}));
    step["equations"] = std::move(eqs);
    step["accumulated"] = subst_json(st.accumulated);
    arr.push_back(std::move(step));
  }
  return arr;
}

std::string rules_line(const std::vector<TraceStep>& steps) {
  std::string s;
  for (const auto& st : steps) {
    if (!s.empty()) s += ", ";
    s += rule_name(st.rule);
  }
  return s;
}

struct Report {
  int exit_code = 0;
  json body;
  std::string text;
};

Report report_outcome(const Query& q, std::size_t index, const Outcome& res,
                      bool with_trace) {
  Report rep;
  bool complete = res.status == SearchStatus::Complete;
  rep.exit_code = complete ? 0 : 2;

  rep.body["status"] = complete ? "complete" : "bounded";
  json sols = json::array();
  for (const auto& s : res.solutions) sols.push_back(subst_json(s.subst));
  rep.body["solutions"] = std::move(sols);
  if (with_trace) {
    json traces = json::array();
    for (const auto& s : res.solutions) traces.push_back(trace_json(s.trace));
    rep.body["trace"] = std::move(traces);
  }

  std::ostringstream os;
  os << query_label(q, index) << ": unify\n";
  os << "status: " << (complete ? "complete" : "bounded") << "\n";
  os << "solutions: " << res.solutions.size() << "\n";
  for (std::size_t i = 0; i < res.solutions.size(); ++i) {
    os << "  " << (i + 1) << ": " << print_subst(res.solutions[i].subst)
       << "\n";
    if (with_trace)
      os << "     trace: " << rules_line(res.solutions[i].trace) << "\n";
  }
  rep.text = os.str();
  return rep;
}

Report report_match(const Query& q, std::size_t index,
                    const MatchResult& res) {
  Report rep;
  rep.body["status"] = "complete";
  json sols = json::array();
  for (const auto& th : res.substs) sols.push_back(subst_json(th));
  rep.body["solutions"] = std::move(sols);

  std::ostringstream os;
  os << query_label(q, index) << ": match\n";
  os << "status: complete\n";
  os << "solutions: " << res.substs.size() << "\n";
  for (std::size_t i = 0; i < res.substs.size(); ++i)
    os << "  " << (i + 1) << ": " << print_subst(res.substs[i]) << "\n";
  rep.text = os.str();
  return rep;
}

Report report_dhp(const Query& q, std::size_t index, const DhpReport& res) {
  Report rep;
  rep.body["status"] = "complete";
  rep.body["accepted"] = res.accepted;
  json vs = json::array();
  for (const auto& v : res.violations) {
    json o;
    o["condition"] = condition_name(v.condition);
    o["path"] = v.path;
    o["witness"] = v.witness;
    vs.push_back(std::move(o));
  }
  rep.body["violations"] = std::move(vs);

  std::ostringstream os;
  os << query_label(q, index) << ": dhp\n";
  os << "accepted: " << (res.accepted ? "yes" : "no") << "\n";
  for (const auto& v : res.violations) {
    os << "  condition " << condition_name(v.condition) << " at path [";
    for (std::size_t i = 0; i < v.path.size(); ++i)
      os << (i ? ", " : "") << v.path[i];
    os << "], argument " << v.argument;
    if (!v.witness.empty()) os << ", witness " << v.witness;
    os << "\n";
  }
  rep.text = os.str();
  return rep;
}

EngineConfig engine_config(const Options& opt) {
  EngineConfig cfg;
  cfg.check_mode = mode_of(opt.dhp_check);
  cfg.traversal = opt.traversal == "iddfs" ? Traversal::IterativeDeepening
                                           : Traversal::BreadthFirst;
  cfg.max_steps = opt.max_steps;
  cfg.max_solutions = opt.max_solutions;
  cfg.record_trace = opt.trace;
  return cfg;
}

int run_queries(const Options& opt, QueryKind kind, bool oracle_mode) {
  std::ifstream in(opt.input);
  if (!in) {
    std::cerr << "cannot open input file '" << opt.input << "'\n";
    return 3;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  ParsedFile file = parse_file(buf.str());
  int exit_code = 0;
  std::size_t ran = 0;
  for (std::size_t i = 0; i < file.queries.size(); ++i) {
    const ParsedQuery& pq = file.queries[i];
    if (pq.kind != kind) continue;
    if (!opt.query.empty() && pq.name != opt.query) continue;
    Query q = elaborate_query(pq, file.sig);
    ran++;

    Report rep;
    if (kind == QueryKind::Dhp) {
      rep = report_dhp(q, i, check_dhp(q.lhs, mode_of(opt.dhp_check)));
    } else if (kind == QueryKind::Match) {
      rep = report_match(q, i, match(q.lhs, q.rhs, mode_of(opt.dhp_check)));
    } else {
      Outcome res = enumerate_unifiers({{q.lhs, q.rhs}}, engine_config(opt));
      rep = report_outcome(q, i, res, opt.trace);
      if (oracle_mode) {
        EnumBudget budget{opt.image_size, opt.fresh_vars, file.sig};
        std::vector<Subst> found;
        for (const auto& s : res.solutions) found.push_back(s.subst);
        CompletenessReport cr =
            check_csu_completeness(found, {{q.lhs, q.rhs}}, budget);
        json oj;
        oj["complete"] = cr.complete;
        json cs = json::array();
        for (const auto& d : cr.counterexamples) cs.push_back(subst_json(d));
        oj["counterexamples"] = std::move(cs);
        rep.body["oracle"] = std::move(oj);
        std::ostringstream os;
        os << "oracle: " << (cr.complete ? "complete" : "incomplete") << "\n";
        for (const auto& d : cr.counterexamples)
          os << "  missed: " << print_subst(d) << "\n";
        rep.text += os.str();
      }
    }

    if (opt.format == "json")
      std::cout << rep.body.dump() << "\n";
    else
      std::cout << rep.text;
    exit_code = std::max(exit_code, rep.exit_code);
  }
  if (ran == 0) {
    std::cerr << "no matching query in '" << opt.input << "'\n";
    return 3;
  }
  return exit_code;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"deterministic higher-order pattern unification"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", opt.input, "problem file")->required();
    sub->add_option("--query", opt.query, "run only the query with this name");
    sub->add_option("--format", opt.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--dhp-check", opt.dhp_check, "pattern condition mode")
        ->check(CLI::IsMember({"strict", "lenient", "off"}));
  };
  auto add_engine = [&](CLI::App* sub) {
    sub->add_option("--max-steps", opt.max_steps, "derivation depth bound");
    sub->add_option("--max-solutions", opt.max_solutions,
                    "stop after this many unifiers");
    sub->add_option("--traversal", opt.traversal, "bfs or iddfs")
        ->check(CLI::IsMember({"bfs", "iddfs"}));
    sub->add_flag("--trace", opt.trace, "record rule applications");
  };

  CLI::App* c_check = app.add_subcommand("check", "decide pattern conditions");
  add_common(c_check);
  CLI::App* c_match = app.add_subcommand("match", "deterministic matching");
  add_common(c_match);
  CLI::App* c_unify = app.add_subcommand("unify", "enumerate unifiers");
  add_common(c_unify);
  add_engine(c_unify);
  CLI::App* c_oracle = app.add_subcommand("oracle", "");
  c_oracle->group("");  // hidden: brute-force cross-check of unify
  add_common(c_oracle);
  add_engine(c_oracle);
  c_oracle->add_option("--image-size", opt.image_size,
                       "oracle image size bound");
  c_oracle->add_option("--fresh-vars", opt.fresh_vars,
                       "oracle fresh variable budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 3;
  }

  try {
    if (app.got_subcommand(c_check))
      return run_queries(opt, QueryKind::Dhp, false);
    if (app.got_subcommand(c_match))
      return run_queries(opt, QueryKind::Match, false);
    if (app.got_subcommand(c_unify))
      return run_queries(opt, QueryKind::Unify, false);
    return run_queries(opt, QueryKind::Unify, true);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const PatternRejected& e) {
    std::cerr << e.what() << "\n";
    for (const auto& v : e.report.violations) {
      std::cerr << "  condition " << condition_name(v.condition)
                << ", argument " << v.argument;
      if (!v.witness.empty()) std::cerr << ", witness " << v.witness;
      std::cerr << "\n";
    }
    return 3;
  } catch (const TypeError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace dhpu
