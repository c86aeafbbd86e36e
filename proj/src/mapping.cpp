// Copyright (c) 2026, the acx authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "acx/mapping.hpp"

#include <algorithm>

namespace acx {

CostCounter& CostCounter::operator+=(const CostCounter& o) {
  bindings_enumerated += o.bindings_enumerated;
  state_items_inspected += o.state_items_inspected;
  commands_emitted += o.commands_emitted;
  queries_consulted += o.queries_consulted;
  return *this;
}

void DependenceEvidence::merge(const DependenceEvidence& o) {
  consulted_queries = consulted_queries || o.consulted_queries;
  consulted_raw = consulted_raw || o.consulted_raw;
}

bool QueryDeciderRule::single_query_form() const {
  return kind == Kind::AsFormula && body.kind == Formula::Kind::Query;
}

// --- state mapping ------------------------------------------------------------

namespace {

// Enumerates all pattern bindings over the source state, invoking f per
// complete environment. Bound variables filter instead of rebinding.
void enumerate_pattern(const State& s, const std::vector<StatePattern>& pattern,
                       std::size_t i, Env& env,
                       const std::function<void(const Env&)>& f) {
  if (i == pattern.size()) {
    f(env);
    return;
  }
  const StatePattern& p = pattern[i];
  if (p.over_sort) {
    auto it = s.universes.find(p.name);
    if (it == s.universes.end()) return;
    const std::string& v = p.vars[0];
    auto bound = env.find(v);
    if (bound != env.end()) {
      if (it->second.count(bound->second)) enumerate_pattern(s, pattern, i + 1, env, f);
      return;
    }
    for (const Atom& a : it->second) {
      env[v] = a;
      enumerate_pattern(s, pattern, i + 1, env, f);
    }
    env.erase(v);
    return;
  }
  auto it = s.relations.find(p.name);
  if (it == s.relations.end()) return;
  for (const Tuple& row : it->second) {
    Env saved = env;
    bool ok = true;
    for (std::size_t k = 0; k < p.vars.size() && ok; ++k) {
      auto bound = env.find(p.vars[k]);
      if (bound != env.end()) {
        ok = bound->second == row[k];
      } else {
        env[p.vars[k]] = row[k];
      }
    }
    if (ok) enumerate_pattern(s, pattern, i + 1, env, f);
    env = std::move(saved);
  }
}

}  // namespace

State map_state(const MappingDef& m, const State& s) {
  const SystemDef& tgt = *m.target;
  State out;
  // Universe emissions first so tuple emissions always see their atoms.
  for (bool universes_pass : {true, false}) {
    for (const StateMappingRule& rule : m.state_rules) {
      Env env;
      enumerate_pattern(s, rule.pattern, 0, env, [&](const Env& e) {
        for (const StateEmit& emit : rule.emits) {
          if (emit.universe != universes_pass) continue;
          if (emit.universe) {
            out.universes[emit.name].insert(eval_term(emit.terms[0], e));
          } else {
            Tuple row;
            row.reserve(emit.terms.size());
            for (const Term& t : emit.terms) row.push_back(eval_term(t, e));
            out.relations[emit.name].insert(std::move(row));
          }
        }
      });
    }
  }
  auto issues = validate_state(tgt, out, "mapped state");
  if (!issues.empty()) {
    ErrorCode code = issues[0].code == ErrorCode::UnknownRelation ||
                             issues[0].code == ErrorCode::UnknownSort
                         ? ErrorCode::RuleEmitsUnknownRelation
                         : issues[0].code;
    throw Error(code, issues[0].str());
  }
  out.normalize();
  return out;
}

// --- command mapping ----------------------------------------------------------

namespace {

struct StepInterp {
  const MappingDef& m;
  const State& st;  // target state
  CommandImage& out;

  bool query_true(const std::string& name, const std::vector<Atom>& args) {
    out.cost.queries_consulted += 1;
    out.evidence.consulted_queries = true;
    return entails(*m.target, st, name, args);
  }

  void run(const std::vector<CommandStep>& body, Env& env) {
    for (const CommandStep& step : body) run_step(step, env);
  }

  void run_step(const CommandStep& step, Env& env) {
    switch (step.kind) {
      case CommandStep::Kind::Emit: {
        Ground g;
        g.name = step.command;
        g.args.reserve(step.terms.size());
        for (const Term& t : step.terms) g.args.push_back(eval_term(t, env));
        out.cost.commands_emitted += 1;
        out.commands.push_back(std::move(g));
        return;
      }
      case CommandStep::Kind::Foreach:
        if (step.over_query) {
          foreach_query(step, env);
        } else {
          foreach_relation(step, env);
        }
        return;
      case CommandStep::Kind::When: {
        EvalHooks hooks;
        hooks.query = [this](const std::string& n, const std::vector<Atom>& a) {
          return query_true(n, a);
        };
        hooks.on_member = [this] {
          out.cost.state_items_inspected += 1;
          out.evidence.consulted_raw = true;
        };
        hooks.on_binding = [this] { out.cost.bindings_enumerated += 1; };
        if (eval_formula(*m.target, st, step.condition, env, &hooks)) {
          run(step.body, env);
        }
        return;
      }
    }
  }

  // Binders are the pattern positions holding variables unbound on entry.
  void foreach_query(const CommandStep& step, Env& env) {
    const QueryDef& q = m.target->queries.at(step.name);
    std::vector<std::size_t> binder_pos;
    std::vector<const std::set<Atom>*> domains;
    static const std::set<Atom> kEmpty;
    std::set<std::string> binder_names;
    for (std::size_t i = 0; i < step.pattern.size(); ++i) {
      const Term& t = step.pattern[i];
      if (t.kind == Term::Kind::Var && !env.count(t.name) &&
          binder_names.insert(t.name).second) {
        binder_pos.push_back(i);
        auto u = st.universes.find(q.params[i].second);
        domains.push_back(u == st.universes.end() ? &kEmpty : &u->second);
      }
    }
    std::vector<Atom> chosen(binder_pos.size());
    enumerate_candidates(step, env, binder_pos, domains, chosen, 0);
  }

  void enumerate_candidates(const CommandStep& step, Env& env,
                            const std::vector<std::size_t>& binder_pos,
                            const std::vector<const std::set<Atom>*>& domains,
                            std::vector<Atom>& chosen, std::size_t d) {
    if (d < binder_pos.size()) {
      for (const Atom& a : *domains[d]) {
        chosen[d] = a;
        enumerate_candidates(step, env, binder_pos, domains, chosen, d + 1);
      }
      return;
    }
    out.cost.bindings_enumerated += 1;
    Env saved = env;
    for (std::size_t k = 0; k < binder_pos.size(); ++k) {
      env[step.pattern[binder_pos[k]].name] = chosen[k];
    }
    std::vector<Atom> args;
    args.reserve(step.pattern.size());
    for (const Term& t : step.pattern) args.push_back(eval_term(t, env));
    if (query_true(step.name, args)) run(step.body, env);
    env = std::move(saved);
  }

  void foreach_relation(const CommandStep& step, Env& env) {
    out.evidence.consulted_raw = true;
    auto it = st.relations.find(step.name);
    if (it == st.relations.end()) return;
    for (const Tuple& row : it->second) {
      out.cost.state_items_inspected += 1;
      out.cost.bindings_enumerated += 1;
      Env saved = env;
      bool ok = true;
      for (std::size_t i = 0; i < step.pattern.size() && ok; ++i) {
        const Term& t = step.pattern[i];
        if (t.kind == Term::Kind::Var && !saved.count(t.name)) {
          // Unbound on entry to this row: bind (first occurrence) or filter.
          auto cur = env.find(t.name);
          if (cur == env.end()) {
            env[t.name] = row[i];
          } else {
            ok = cur->second == row[i];
          }
        } else {
          ok = eval_term(t, env) == row[i];
        }
      }
      if (ok) run(step.body, env);
      env = std::move(saved);
    }
  }
};

}  // namespace

CommandImage map_command(const MappingDef& m, const Ground& source_command,
                         const State& target_state) {
  auto it = m.command_rules.find(source_command.name);
  if (it == m.command_rules.end()) {
    throw Error(ErrorCode::UnknownCommand,
                "no command rule for '" + source_command.name + "'");
  }
  const CommandMappingRule& rule = it->second;
  if (rule.params.size() != source_command.args.size()) {
    throw Error(ErrorCode::ArityMismatch,
                "command rule '" + source_command.name + "' expects " +
                    std::to_string(rule.params.size()) + " argument(s), got " +
                    std::to_string(source_command.args.size()));
  }
  CommandImage out;
  Env env;
  for (std::size_t i = 0; i < rule.params.size(); ++i) {
    env[rule.params[i]] = source_command.args[i];
  }
  StepInterp interp{m, target_state, out};
  interp.run(rule.body, env);
  return out;
}

// --- query deciding -----------------------------------------------------------

QueryDecision decide_query(const MappingDef& m, const Ground& source_query,
                           const State& target_state) {
  auto it = m.query_rules.find(source_query.name);
  if (it == m.query_rules.end()) {
    throw Error(ErrorCode::UnknownQuery,
                "no query rule for '" + source_query.name + "'");
  }
  const QueryDeciderRule& rule = it->second;
  if (rule.params.size() != source_query.args.size()) {
    throw Error(ErrorCode::ArityMismatch,
                "query rule '" + source_query.name + "' expects " +
                    std::to_string(rule.params.size()) + " argument(s), got " +
                    std::to_string(source_query.args.size()));
  }
  for (const Atom& a : source_query.args) {
    bool present = false;
    for (const auto& [_, atoms] : target_state.universes) {
      if (atoms.count(a)) {
        present = true;
        break;
      }
    }
    if (!present) {
      throw Error(ErrorCode::UntranslatableAtom,
                  "argument " + a.str() + " of " + source_query.str() +
                      " has no image in the target state");
    }
  }

  QueryDecision out;
  Env env;
  for (std::size_t i = 0; i < rule.params.size(); ++i) {
    env[rule.params[i]] = source_query.args[i];
  }
  EvalHooks hooks;
  hooks.query = [&](const std::string& n, const std::vector<Atom>& a) {
    out.cost.queries_consulted += 1;
    out.evidence.consulted_queries = true;
    return entails(*m.target, target_state, n, a);
  };
  hooks.on_member = [&] {
    out.cost.state_items_inspected += 1;
    out.evidence.consulted_raw = true;
  };
  hooks.on_binding = [&] { out.cost.bindings_enumerated += 1; };
  out.value = eval_formula(*m.target, target_state, rule.body, env, &hooks);
  return out;
}

// --- parsing and validation ----------------------------------------------------

namespace {

struct MappingValidator {
  const MappingDef& m;
  std::vector<ValidationIssue> issues;

  void error(ErrorCode c, const std::string& where, const std::string& msg) {
    issues.push_back({c, where, msg, false});
  }

  void check_term_vars(const Term& t, const std::set<std::string>& bound,
                       const std::string& where) {
    if (t.kind == Term::Kind::Var) {
      if (!bound.count(t.name)) {
        error(ErrorCode::UnboundVariable, where,
              "variable '" + t.name + "' is not bound");
      }
    } else if (t.kind == Term::Kind::Make) {
      for (const auto& a : t.args) check_term_vars(a, bound, where);
    }
  }

  // allow_query / allow_member / allow_exists select the expression class.
  void check_expr(const Formula& f, std::set<std::string> bound,
                  const std::string& where, bool allow_query, bool allow_member,
                  bool allow_exists) {
    switch (f.kind) {
      case Formula::Kind::Member: {
        if (!allow_member) {
          error(ErrorCode::Invalid, where,
                "raw member atoms are not allowed in this expression");
        }
        auto it = m.target->relations.find(f.name);
        if (it == m.target->relations.end()) {
          error(ErrorCode::UnknownRelation, where,
                "target relation '" + f.name + "' is not declared");
        } else if (it->second.size() != f.terms.size()) {
          error(ErrorCode::ArityMismatch, where,
                "target relation '" + f.name + "' has arity " +
                    std::to_string(it->second.size()));
        }
        for (const auto& t : f.terms) check_term_vars(t, bound, where);
        return;
      }
      case Formula::Kind::Query: {
        if (!allow_query) {
          error(ErrorCode::Invalid, where,
                "query atoms are not allowed in this expression");
        }
        auto it = m.target->queries.find(f.name);
        if (it == m.target->queries.end()) {
          error(ErrorCode::UnknownQuery, where,
                "target query '" + f.name + "' is not declared");
        } else if (it->second.params.size() != f.terms.size()) {
          error(ErrorCode::ArityMismatch, where,
                "target query '" + f.name + "' has arity " +
                    std::to_string(it->second.params.size()));
        }
        for (const auto& t : f.terms) check_term_vars(t, bound, where);
        return;
      }
      case Formula::Kind::Distinct:
        for (const auto& t : f.terms) check_term_vars(t, bound, where);
        return;
      case Formula::Kind::Not:
      case Formula::Kind::And:
      case Formula::Kind::Or:
        for (const auto& c : f.children) {
          check_expr(c, bound, where, allow_query, allow_member, allow_exists);
        }
        return;
      case Formula::Kind::Exists:
        if (!allow_exists) {
          error(ErrorCode::Invalid, where,
                "quantifiers are not allowed in this expression");
        }
        if (!m.target->sorts.count(f.sort)) {
          error(ErrorCode::UnknownSort, where,
                "target sort '" + f.sort + "' is not declared");
        }
        bound.insert(f.var);
        check_expr(f.children[0], bound, where, allow_query, allow_member,
                   allow_exists);
        return;
    }
  }

  void check_steps(const std::vector<CommandStep>& body,
                   std::set<std::string> bound, const std::string& where) {
    for (const CommandStep& step : body) {
      switch (step.kind) {
        case CommandStep::Kind::Emit: {
          auto it = m.target->commands.find(step.command);
          if (it == m.target->commands.end()) {
            error(ErrorCode::UnknownCommand, where,
                  "target command '" + step.command + "' is not declared");
          } else if (it->second.params.size() != step.terms.size()) {
            error(ErrorCode::ArityMismatch, where,
                  "target command '" + step.command + "' has arity " +
                      std::to_string(it->second.params.size()));
          }
          for (const auto& t : step.terms) check_term_vars(t, bound, where);
          break;
        }
        case CommandStep::Kind::Foreach: {
          std::size_t want = 0;
          if (step.over_query) {
            auto it = m.target->queries.find(step.name);
            if (it == m.target->queries.end()) {
              error(ErrorCode::UnknownQuery, where,
                    "target query '" + step.name + "' is not declared");
            } else {
              want = it->second.params.size();
            }
          } else {
            auto it = m.target->relations.find(step.name);
            if (it == m.target->relations.end()) {
              error(ErrorCode::UnknownRelation, where,
                    "target relation '" + step.name + "' is not declared");
            } else {
              want = it->second.size();
            }
          }
          if (want != 0 && step.pattern.size() != want) {
            error(ErrorCode::ArityMismatch, where,
                  "foreach pattern over '" + step.name + "' needs " +
                      std::to_string(want) + " position(s)");
          }
          auto inner = bound;
          for (const Term& t : step.pattern) {
            if (t.kind == Term::Kind::Var) {
              inner.insert(t.name);  // binder or filter, both fine
            } else {
              check_term_vars(t, bound, where);
            }
          }
          check_steps(step.body, inner, where);
          break;
        }
        case CommandStep::Kind::When:
          check_expr(step.condition, bound, where, true, true, true);
          check_steps(step.body, bound, where);
          break;
      }
    }
  }

  void run() {
    const SystemDef& src = *m.source;
    for (const auto& [name, _] : src.commands) {
      if (!m.command_rules.count(name)) {
        error(ErrorCode::MissingCommandRule, "mapping " + m.name,
              "no rule for source command '" + name + "'");
      }
    }
    for (const auto& [name, _] : src.queries) {
      if (!m.query_rules.count(name)) {
        error(ErrorCode::MissingQueryRule, "mapping " + m.name,
              "no rule for source query '" + name + "'");
      }
    }
    for (std::size_t r = 0; r < m.state_rules.size(); ++r) {
      const std::string where = "state rule " + std::to_string(r + 1);
      const StateMappingRule& rule = m.state_rules[r];
      std::set<std::string> bound;
      for (const StatePattern& p : rule.pattern) {
        if (p.over_sort) {
          if (!src.sorts.count(p.name)) {
            error(ErrorCode::UnknownSort, where,
                  "source sort '" + p.name + "' is not declared");
          }
          bound.insert(p.vars[0]);
        } else {
          auto it = src.relations.find(p.name);
          if (it == src.relations.end()) {
            error(ErrorCode::UnknownRelation, where,
                  "source relation '" + p.name + "' is not declared");
          } else if (it->second.size() != p.vars.size()) {
            error(ErrorCode::ArityMismatch, where,
                  "pattern over '" + p.name + "' needs " +
                      std::to_string(it->second.size()) + " variable(s)");
          }
          for (const auto& v : p.vars) bound.insert(v);
        }
      }
      for (const StateEmit& e : rule.emits) {
        if (e.universe) {
          if (!m.target->sorts.count(e.name)) {
            error(ErrorCode::RuleEmitsUnknownRelation, where,
                  "target sort '" + e.name + "' is not declared");
          }
          if (e.terms.size() != 1) {
            error(ErrorCode::ArityMismatch, where,
                  "universe emission takes exactly one term");
          }
        } else {
          auto it = m.target->relations.find(e.name);
          if (it == m.target->relations.end()) {
            error(ErrorCode::RuleEmitsUnknownRelation, where,
                  "target relation '" + e.name + "' is not declared");
          } else if (it->second.size() != e.terms.size()) {
            error(ErrorCode::ArityMismatch, where,
                  "target relation '" + e.name + "' has arity " +
                      std::to_string(it->second.size()));
          }
        }
        for (const auto& t : e.terms) check_term_vars(t, bound, where);
      }
    }
    for (const auto& [name, rule] : m.command_rules) {
      const std::string where = "command rule " + name;
      auto it = src.commands.find(name);
      if (it == src.commands.end()) {
        error(ErrorCode::UnknownCommand, where,
              "source command '" + name + "' is not declared");
        continue;
      }
      if (rule.params.size() != it->second.params.size()) {
        error(ErrorCode::ArityMismatch, where,
              "source command '" + name + "' has arity " +
                  std::to_string(it->second.params.size()));
      }
      std::set<std::string> bound(rule.params.begin(), rule.params.end());
      check_steps(rule.body, bound, where);
    }
    for (const auto& [name, rule] : m.query_rules) {
      const std::string where = "query rule " + name;
      auto it = src.queries.find(name);
      if (it == src.queries.end()) {
        error(ErrorCode::UnknownQuery, where,
              "source query '" + name + "' is not declared");
        continue;
      }
      if (rule.params.size() != it->second.params.size()) {
        error(ErrorCode::ArityMismatch, where,
              "source query '" + name + "' has arity " +
                  std::to_string(it->second.params.size()));
      }
      std::set<std::string> bound(rule.params.begin(), rule.params.end());
      switch (rule.kind) {
        case QueryDeciderRule::Kind::AsFormula:
          check_expr(rule.body, bound, where, true, false, false);
          break;
        case QueryDeciderRule::Kind::EvalTheory:
          check_expr(rule.body, bound, where, true, false, true);
          break;
        case QueryDeciderRule::Kind::EvalState:
          check_expr(rule.body, bound, where, false, true, true);
          break;
      }
    }
    for (const auto& [from, to] : m.request_transform) {
      auto s = src.queries.find(from);
      if (s == src.queries.end() || !s->second.is_request) {
        error(ErrorCode::RequestNotQuery, "request_transform",
              "'" + from + "' is not a source request");
      }
      auto t = m.target->queries.find(to);
      if (t == m.target->queries.end() || !t->second.is_request) {
        error(ErrorCode::RequestNotQuery, "request_transform",
              "'" + to + "' is not a target request");
      }
    }
  }
};

Term pattern_term_from_json(const Json& j) {
  // Pattern positions: bare strings are variables (binders when unbound).
  return term_from_json(j);
}

std::vector<CommandStep> steps_from_json(const Json& arr,
                                         const std::string& where);

CommandStep step_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) {
    throw Error(ErrorCode::Parse,
                where + ": step must be a one-key object, got " + j.dump());
  }
  const std::string key = j.begin().key();
  const Json& v = j.begin().value();
  CommandStep step;
  if (key == "emit") {
    if (!v.is_array() || v.empty() || !v[0].is_string()) {
      throw Error(ErrorCode::Parse,
                  where + ": emit needs [\"command\", terms...]");
    }
    step.kind = CommandStep::Kind::Emit;
    step.command = v[0].get<std::string>();
    for (std::size_t i = 1; i < v.size(); ++i) {
      step.terms.push_back(term_from_json(v[i]));
    }
    return step;
  }
  if (key == "foreach") {
    if (!v.is_object() || !v.contains("body")) {
      throw Error(ErrorCode::Parse,
                  where + ": foreach needs a pattern and a 'body'");
    }
    step.kind = CommandStep::Kind::Foreach;
    const bool has_q = v.contains("query");
    const bool has_r = v.contains("relation");
    if (has_q == has_r) {
      throw Error(ErrorCode::Parse,
                  where + ": foreach needs exactly one of 'query'/'relation'");
    }
    const Json& pat = has_q ? v["query"] : v["relation"];
    if (!pat.is_array() || pat.empty() || !pat[0].is_string()) {
      throw Error(ErrorCode::Parse,
                  where + ": foreach pattern needs [\"name\", terms...]");
    }
    step.over_query = has_q;
    step.name = pat[0].get<std::string>();
    for (std::size_t i = 1; i < pat.size(); ++i) {
      step.pattern.push_back(pattern_term_from_json(pat[i]));
    }
    step.body = steps_from_json(v["body"], where);
    return step;
  }
  if (key == "when") {
    if (!v.is_object() || !v.contains("cond") || !v.contains("body")) {
      throw Error(ErrorCode::Parse, where + ": when needs 'cond' and 'body'");
    }
    step.kind = CommandStep::Kind::When;
    step.condition = formula_from_json(v["cond"], true);
    step.body = steps_from_json(v["body"], where);
    return step;
  }
  throw Error(ErrorCode::Parse, where + ": unknown step '" + key + "'");
}

std::vector<CommandStep> steps_from_json(const Json& arr,
                                         const std::string& where) {
  if (!arr.is_array()) {
    throw Error(ErrorCode::Parse, where + ": body must be an array of steps");
  }
  std::vector<CommandStep> out;
  for (const auto& s : arr) out.push_back(step_from_json(s, where));
  return out;
}

Json step_to_json(const CommandStep& step) {
  switch (step.kind) {
    case CommandStep::Kind::Emit: {
      Json arr = Json::array();
      arr.push_back(step.command);
      for (const auto& t : step.terms) arr.push_back(term_to_json(t));
      return Json{{"emit", arr}};
    }
    case CommandStep::Kind::Foreach: {
      Json pat = Json::array();
      pat.push_back(step.name);
      for (const auto& t : step.pattern) pat.push_back(term_to_json(t));
      Json body = Json::array();
      for (const auto& s : step.body) body.push_back(step_to_json(s));
      Json f;
      f[step.over_query ? "query" : "relation"] = std::move(pat);
      f["body"] = std::move(body);
      return Json{{"foreach", std::move(f)}};
    }
    case CommandStep::Kind::When: {
      Json body = Json::array();
      for (const auto& s : step.body) body.push_back(step_to_json(s));
      return Json{{"when", Json{{"cond", formula_to_json(step.condition)},
                                {"body", std::move(body)}}}};
    }
  }
  throw Error(ErrorCode::Invalid, "corrupt step");
}

std::vector<std::string> names_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) {
    throw Error(ErrorCode::Parse, where + ": params must be an array of names");
  }
  std::vector<std::string> out;
  for (const auto& p : j) {
    if (!p.is_string()) {
      throw Error(ErrorCode::Parse, where + ": params must be strings");
    }
    out.push_back(p.get<std::string>());
  }
  return out;
}

}  // namespace

MappingDef mapping_from_json(const Json& j,
                             std::shared_ptr<const SystemDef> source,
                             std::shared_ptr<const SystemDef> target,
                             std::vector<ValidationIssue>* warnings) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "mapping must be an object");
  MappingDef m;
  m.source = std::move(source);
  m.target = std::move(target);
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw Error(ErrorCode::Parse, "mapping name");
    m.name = j["name"].get<std::string>();
  }
  std::vector<ValidationIssue> issues;

  if (j.contains("state_rules")) {
    if (!j["state_rules"].is_array()) {
      throw Error(ErrorCode::Parse, "'state_rules' must be an array");
    }
    for (const auto& rj : j["state_rules"]) {
      const std::string where =
          "state rule " + std::to_string(m.state_rules.size() + 1);
      StateMappingRule rule;
      if (rj.contains("match")) {
        if (!rj["match"].is_array()) {
          throw Error(ErrorCode::Parse, where + ": 'match' must be an array");
        }
        for (const auto& pj : rj["match"]) {
          StatePattern p;
          if (pj.contains("sort")) {
            p.over_sort = true;
            if (!pj["sort"].is_string() || !pj.contains("var") ||
                !pj["var"].is_string()) {
              throw Error(ErrorCode::Parse,
                          where + ": sort pattern needs 'sort' and 'var'");
            }
            p.name = pj["sort"].get<std::string>();
            p.vars.push_back(pj["var"].get<std::string>());
          } else if (pj.contains("relation")) {
            if (!pj["relation"].is_string() || !pj.contains("args")) {
              throw Error(ErrorCode::Parse,
                          where + ": relation pattern needs 'relation', 'args'");
            }
            p.name = pj["relation"].get<std::string>();
            p.vars = names_from_json(pj["args"], where);
          } else {
            throw Error(ErrorCode::Parse,
                        where + ": pattern needs 'sort' or 'relation'");
          }
          rule.pattern.push_back(std::move(p));
        }
      }
      if (!rj.contains("emit") || !rj["emit"].is_array()) {
        throw Error(ErrorCode::Parse, where + ": needs an 'emit' array");
      }
      for (const auto& ej : rj["emit"]) {
        if (!ej.is_object() || ej.size() != 1) {
          throw Error(ErrorCode::Parse,
                      where + ": emission must be a one-key object");
        }
        StateEmit e;
        const std::string key = ej.begin().key();
        const Json& v = ej.begin().value();
        if (key == "universe") {
          e.universe = true;
        } else if (key == "tuple") {
          e.universe = false;
        } else {
          throw Error(ErrorCode::Parse,
                      where + ": emission must be 'universe' or 'tuple'");
        }
        if (!v.is_array() || v.size() < 2 || !v[0].is_string()) {
          throw Error(ErrorCode::Parse,
                      where + ": emission needs [\"name\", terms...]");
        }
        e.name = v[0].get<std::string>();
        for (std::size_t i = 1; i < v.size(); ++i) {
          e.terms.push_back(term_from_json(v[i]));
        }
        rule.emits.push_back(std::move(e));
      }
      m.state_rules.push_back(std::move(rule));
    }
  }

  if (j.contains("command_rules")) {
    if (!j["command_rules"].is_array()) {
      throw Error(ErrorCode::Parse, "'command_rules' must be an array");
    }
    for (const auto& rj : j["command_rules"]) {
      if (!rj.is_object() || !rj.contains("command") ||
          !rj["command"].is_string()) {
        throw Error(ErrorCode::Parse, "command rule needs a 'command' name");
      }
      CommandMappingRule rule;
      rule.command = rj["command"].get<std::string>();
      const std::string where = "command rule " + rule.command;
      rule.params = names_from_json(
          rj.contains("params") ? rj["params"] : Json::array(), where);
      rule.body = steps_from_json(
          rj.contains("body") ? rj["body"] : Json::array(), where);
      if (!m.command_rules.emplace(rule.command, rule).second) {
        issues.push_back({ErrorCode::DuplicateRule, where,
                          "second rule for the same command", false});
      }
    }
  }

  if (j.contains("query_rules")) {
    if (!j["query_rules"].is_array()) {
      throw Error(ErrorCode::Parse, "'query_rules' must be an array");
    }
    for (const auto& rj : j["query_rules"]) {
      if (!rj.is_object() || !rj.contains("query") || !rj["query"].is_string()) {
        throw Error(ErrorCode::Parse, "query rule needs a 'query' name");
      }
      QueryDeciderRule rule;
      rule.query = rj["query"].get<std::string>();
      const std::string where = "query rule " + rule.query;
      rule.params = names_from_json(
          rj.contains("params") ? rj["params"] : Json::array(), where);
      if (!rj.contains("decide") || !rj["decide"].is_object() ||
          rj["decide"].size() != 1) {
        throw Error(ErrorCode::Parse,
                    where + ": needs a one-key 'decide' object");
      }
      const std::string key = rj["decide"].begin().key();
      const Json& body = rj["decide"].begin().value();
      if (key == "formula") {
        rule.kind = QueryDeciderRule::Kind::AsFormula;
      } else if (key == "theory") {
        rule.kind = QueryDeciderRule::Kind::EvalTheory;
      } else if (key == "state") {
        rule.kind = QueryDeciderRule::Kind::EvalState;
      } else {
        throw Error(ErrorCode::Parse,
                    where + ": decide must be 'formula', 'theory' or 'state'");
      }
      rule.body = formula_from_json(body, true);
      if (!m.query_rules.emplace(rule.query, rule).second) {
        issues.push_back({ErrorCode::DuplicateRule, where,
                          "second rule for the same query", false});
      }
    }
  }

  if (j.contains("request_transform")) {
    if (!j["request_transform"].is_object()) {
      throw Error(ErrorCode::Parse, "'request_transform' must be an object");
    }
    for (const auto& [from, to] : j["request_transform"].items()) {
      if (!to.is_string()) {
        throw Error(ErrorCode::Parse, "'request_transform' values must be names");
      }
      m.request_transform[from] = to.get<std::string>();
    }
  }

  MappingValidator v{m, std::move(issues)};
  v.run();
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warns;
  for (auto& i : v.issues) (i.warning ? warns : errors).push_back(i);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  if (warnings) *warnings = std::move(warns);
  return m;
}

Json mapping_to_json(const MappingDef& m) {
  Json j;
  j["name"] = m.name;
  j["source"] = m.source->name;
  j["target"] = m.target->name;
  j["state_rules"] = Json::array();
  for (const auto& rule : m.state_rules) {
    Json rj;
    rj["match"] = Json::array();
    for (const auto& p : rule.pattern) {
      if (p.over_sort) {
        rj["match"].push_back(Json{{"sort", p.name}, {"var", p.vars[0]}});
      } else {
        rj["match"].push_back(Json{{"relation", p.name}, {"args", p.vars}});
      }
    }
    rj["emit"] = Json::array();
    for (const auto& e : rule.emits) {
      Json arr = Json::array();
      arr.push_back(e.name);
      for (const auto& t : e.terms) arr.push_back(term_to_json(t));
      rj["emit"].push_back(Json{{e.universe ? "universe" : "tuple", arr}});
    }
    j["state_rules"].push_back(std::move(rj));
  }
  j["command_rules"] = Json::array();
  for (const auto& [name, rule] : m.command_rules) {
    Json rj;
    rj["command"] = name;
    rj["params"] = rule.params;
    rj["body"] = Json::array();
    for (const auto& s : rule.body) rj["body"].push_back(step_to_json(s));
    j["command_rules"].push_back(std::move(rj));
  }
  j["query_rules"] = Json::array();
  for (const auto& [name, rule] : m.query_rules) {
    Json rj;
    rj["query"] = name;
    rj["params"] = rule.params;
    const char* key = rule.kind == QueryDeciderRule::Kind::AsFormula ? "formula"
                      : rule.kind == QueryDeciderRule::Kind::EvalTheory
                          ? "theory"
                          : "state";
    rj["decide"] = Json{{key, formula_to_json(rule.body)}};
    j["query_rules"].push_back(std::move(rj));
  }
  if (!m.request_transform.empty()) {
    j["request_transform"] = Json::object();
    for (const auto& [from, to] : m.request_transform) {
      j["request_transform"][from] = to;
    }
  }
  return j;
}

MappingDef identity_mapping(std::shared_ptr<const SystemDef> sys) {
  MappingDef m;
  m.name = "identity-" + sys->name;
  m.source = sys;
  m.target = sys;
  for (const auto& sort : sys->sorts) {
    StateMappingRule rule;
    rule.pattern.push_back(StatePattern{true, sort, {"x"}});
    rule.emits.push_back(StateEmit{true, sort, {Term::var("x")}});
    m.state_rules.push_back(std::move(rule));
  }
  for (const auto& [name, sig] : sys->relations) {
    StateMappingRule rule;
    StatePattern p;
    p.over_sort = false;
    p.name = name;
    StateEmit e;
    e.universe = false;
    e.name = name;
    for (std::size_t i = 0; i < sig.size(); ++i) {
      std::string v = "x" + std::to_string(i + 1);
      p.vars.push_back(v);
      e.terms.push_back(Term::var(v));
    }
    rule.pattern.push_back(std::move(p));
    rule.emits.push_back(std::move(e));
    m.state_rules.push_back(std::move(rule));
  }
  for (const auto& [name, cmd] : sys->commands) {
    CommandMappingRule rule;
    rule.command = name;
    CommandStep step;
    step.kind = CommandStep::Kind::Emit;
    step.command = name;
    for (const auto& [v, _] : cmd.params) {
      rule.params.push_back(v);
      step.terms.push_back(Term::var(v));
    }
    rule.body.push_back(std::move(step));
    m.command_rules.emplace(name, std::move(rule));
  }
  for (const auto& [name, q] : sys->queries) {
    QueryDeciderRule rule;
    rule.query = name;
    rule.kind = QueryDeciderRule::Kind::AsFormula;
    std::vector<Term> terms;
    for (const auto& [v, _] : q.params) {
      rule.params.push_back(v);
      terms.push_back(Term::var(v));
    }
    rule.body = Formula::query(name, std::move(terms));
    m.query_rules.emplace(name, std::move(rule));
  }
  return m;
}

namespace {

void scan_steps(const std::vector<CommandStep>& body, MappingShape& shape) {
  for (const CommandStep& step : body) {
    switch (step.kind) {
      case CommandStep::Kind::Emit:
        break;
      case CommandStep::Kind::Foreach:
        shape.commands_use_foreach_or_when = true;
        if (step.over_query) {
          shape.commands_consult_queries = true;
        } else {
          shape.commands_consult_raw = true;
        }
        scan_steps(step.body, shape);
        break;
      case CommandStep::Kind::When: {
        shape.commands_use_foreach_or_when = true;
        // Walk the condition for raw vs query consultation.
        std::vector<const Formula*> stack{&step.condition};
        while (!stack.empty()) {
          const Formula* f = stack.back();
          stack.pop_back();
          if (f->kind == Formula::Kind::Member) shape.commands_consult_raw = true;
          if (f->kind == Formula::Kind::Query) {
            shape.commands_consult_queries = true;
          }
          for (const auto& c : f->children) stack.push_back(&c);
        }
        scan_steps(step.body, shape);
        break;
      }
    }
  }
}

}  // namespace

MappingShape mapping_shape(const MappingDef& m) {
  MappingShape shape;
  for (const auto& rule : m.state_rules) {
    shape.max_state_rule_join =
        std::max(shape.max_state_rule_join, static_cast<int>(rule.pattern.size()));
  }
  for (const auto& [_, rule] : m.command_rules) scan_steps(rule.body, shape);
  for (const auto& [name, rule] : m.query_rules) {
    shape.decider_kinds[name] = rule.kind;
  }
  return shape;
}

}  // namespace acx
