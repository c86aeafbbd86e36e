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

#include "acx/core.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace acx {

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == '+';
}

// Grammar: atom := ident | ident '(' atom (',' atom)* ')'
struct AtomParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit AtomParser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::Parse, "bad atom '" + text + "': " + what +
                                      " at offset " + std::to_string(pos));
  }

  std::string ident() {
    std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    if (pos == start) fail("expected identifier");
    return text.substr(start, pos - start);
  }

  std::string atom() {
    std::string head = ident();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      std::string out = head + "(";
      out += atom();
      while (pos < text.size() && text[pos] == ',') {
        ++pos;
        out += ",";
        out += atom();
      }
      if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
      ++pos;
      out += ")";
      return out;
    }
    return head;
  }
};

}  // namespace

Atom::Atom(const std::string& text) {
  AtomParser p(text);
  repr_ = p.atom();
  if (p.pos != text.size()) p.fail("trailing characters");
}

Atom Atom::derived(const std::string& tag, const std::vector<Atom>& args) {
  for (char c : tag) {
    if (!ident_char(c)) {
      throw Error(ErrorCode::Parse, "bad constructor tag '" + tag + "'");
    }
  }
  std::string r = tag + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) r += ",";
    r += args[i].str();
  }
  r += ")";
  Atom a;
  a.repr_ = std::move(r);
  return a;
}

bool State::operator<(const State& o) const {
  if (universes != o.universes) return universes < o.universes;
  return relations < o.relations;
}

bool State::has_atom(const std::string& sort, const Atom& a) const {
  auto it = universes.find(sort);
  return it != universes.end() && it->second.count(a) > 0;
}

std::optional<std::string> State::sort_of(const Atom& a) const {
  std::optional<std::string> found;
  for (const auto& [sort, atoms] : universes) {
    if (atoms.count(a)) {
      if (found) return std::nullopt;
      found = sort;
    }
  }
  return found;
}

void State::normalize() {
  for (auto it = universes.begin(); it != universes.end();) {
    it = it->second.empty() ? universes.erase(it) : std::next(it);
  }
  for (auto it = relations.begin(); it != relations.end();) {
    it = it->second.empty() ? relations.erase(it) : std::next(it);
  }
}

std::size_t state_size(const State& s) {
  std::size_t n = 0;
  for (const auto& [_, atoms] : s.universes) n += atoms.size();
  for (const auto& [_, rows] : s.relations) n += rows.size();
  return n;
}

Term Term::var(std::string n) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  return t;
}

Term Term::constant(Atom a) {
  Term t;
  t.kind = Kind::Const;
  t.value = std::move(a);
  return t;
}

Term Term::make(std::string tag, std::vector<Term> as) {
  Term t;
  t.kind = Kind::Make;
  t.name = std::move(tag);
  t.args = std::move(as);
  return t;
}

Formula Formula::member(std::string rel, std::vector<Term> ts) {
  Formula f;
  f.kind = Kind::Member;
  f.name = std::move(rel);
  f.terms = std::move(ts);
  return f;
}

Formula Formula::query(std::string q, std::vector<Term> ts) {
  Formula f;
  f.kind = Kind::Query;
  f.name = std::move(q);
  f.terms = std::move(ts);
  return f;
}

Formula Formula::distinct(Term a, Term b) {
  Formula f;
  f.kind = Kind::Distinct;
  f.terms = {std::move(a), std::move(b)};
  return f;
}

Formula Formula::lnot(Formula f) {
  Formula r;
  r.kind = Kind::Not;
  r.children = {std::move(f)};
  return r;
}

Formula Formula::land(std::vector<Formula> fs) {
  Formula r;
  r.kind = Kind::And;
  r.children = std::move(fs);
  return r;
}

Formula Formula::lor(std::vector<Formula> fs) {
  Formula r;
  r.kind = Kind::Or;
  r.children = std::move(fs);
  return r;
}

Formula Formula::exists(std::string var, std::string sort, Formula body) {
  Formula r;
  r.kind = Kind::Exists;
  r.var = std::move(var);
  r.sort = std::move(sort);
  r.children = {std::move(body)};
  return r;
}

bool Formula::uses_negation() const {
  if (kind == Kind::Not) return true;
  return std::any_of(children.begin(), children.end(),
                     [](const Formula& f) { return f.uses_negation(); });
}

bool Formula::uses_query_atoms() const {
  if (kind == Kind::Query) return true;
  return std::any_of(children.begin(), children.end(),
                     [](const Formula& f) { return f.uses_query_atoms(); });
}

std::vector<std::string> SystemDef::request_names() const {
  std::vector<std::string> out;
  for (const auto& [name, q] : queries) {
    if (q.is_request) out.push_back(name);
  }
  return out;
}

bool Ground::operator<(const Ground& o) const {
  if (name != o.name) return name < o.name;
  return args < o.args;
}

std::string Ground::str() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].str();
  }
  out += ")";
  return out;
}

// --- evaluation --------------------------------------------------------------

Atom eval_term(const Term& t, const Env& env) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = env.find(t.name);
      if (it == env.end()) {
        throw Error(ErrorCode::UnboundVariable, "variable '" + t.name + "'");
      }
      return it->second;
    }
    case Term::Kind::Const:
      return t.value;
    case Term::Kind::Make: {
      std::vector<Atom> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(eval_term(a, env));
      return Atom::derived(t.name, args);
    }
  }
  throw Error(ErrorCode::Invalid, "corrupt term");
}

namespace {

std::vector<Atom> eval_terms(const std::vector<Term>& ts, const Env& env) {
  std::vector<Atom> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(eval_term(t, env));
  return out;
}

}  // namespace

bool eval_formula(const SystemDef& sys, const State& s, const Formula& f,
                  Env& env, const EvalHooks* hooks) {
  (void)sys;  // reserved for schema-aware diagnostics
  switch (f.kind) {
    case Formula::Kind::Member: {
      if (hooks && hooks->on_member) hooks->on_member();
      auto it = s.relations.find(f.name);
      if (it == s.relations.end()) return false;
      return it->second.count(eval_terms(f.terms, env)) > 0;
    }
    case Formula::Kind::Query: {
      if (!hooks || !hooks->query) {
        throw Error(ErrorCode::Invalid,
                    "query atom '" + f.name + "' outside a mapping expression");
      }
      return hooks->query(f.name, eval_terms(f.terms, env));
    }
    case Formula::Kind::Distinct: {
      auto args = eval_terms(f.terms, env);
      return args[0] != args[1];
    }
    case Formula::Kind::Not:
      return !eval_formula(sys, s, f.children[0], env, hooks);
    case Formula::Kind::And:
      for (const auto& c : f.children) {
        if (!eval_formula(sys, s, c, env, hooks)) return false;
      }
      return true;
    case Formula::Kind::Or:
      for (const auto& c : f.children) {
        if (eval_formula(sys, s, c, env, hooks)) return true;
      }
      return false;
    case Formula::Kind::Exists: {
      auto it = s.universes.find(f.sort);
      if (it == s.universes.end()) return false;
      for (const Atom& a : it->second) {
        if (hooks && hooks->on_binding) hooks->on_binding();
        auto saved = env.find(f.var);
        Atom old;
        bool had = saved != env.end();
        if (had) old = saved->second;
        env[f.var] = a;
        bool ok = eval_formula(sys, s, f.children[0], env, hooks);
        if (had) {
          env[f.var] = old;
        } else {
          env.erase(f.var);
        }
        if (ok) return true;
      }
      return false;
    }
  }
  throw Error(ErrorCode::Invalid, "corrupt formula");
}

namespace {

Env bind_params(const Params& params, const std::vector<Atom>& args,
                const std::string& what) {
  if (params.size() != args.size()) {
    throw Error(ErrorCode::ArityMismatch,
                what + " expects " + std::to_string(params.size()) +
                    " argument(s), got " + std::to_string(args.size()));
  }
  Env env;
  for (std::size_t i = 0; i < params.size(); ++i) env[params[i].first] = args[i];
  return env;
}

}  // namespace

bool entails(const SystemDef& sys, const State& s, const std::string& query,
             const std::vector<Atom>& args) {
  auto it = sys.queries.find(query);
  if (it == sys.queries.end()) {
    throw Error(ErrorCode::UnknownQuery, "no query named '" + query + "'");
  }
  Env env = bind_params(it->second.params, args, "query '" + query + "'");
  return eval_formula(sys, s, it->second.body, env);
}

State step(const SystemDef& sys, const State& s, const std::string& command,
           const std::vector<Atom>& args) {
  auto it = sys.commands.find(command);
  if (it == sys.commands.end()) {
    throw Error(ErrorCode::UnknownCommand, "no command named '" + command + "'");
  }
  const CommandDef& cmd = it->second;
  Env env = bind_params(cmd.params, args, "command '" + command + "'");
  for (std::size_t i = 0; i < cmd.params.size(); ++i) {
    if (!s.has_atom(cmd.params[i].second, args[i])) {
      throw Error(ErrorCode::SortMismatch,
                  "command '" + command + "': argument " + args[i].str() +
                      " is not in sort " + cmd.params[i].second);
    }
  }

  if (!eval_formula(sys, s, cmd.guard, env)) {
    State out = s;  // totality via guards
    out.normalize();
    return out;
  }

  State out = s;
  for (const Effect& e : cmd.effects) {
    switch (e.kind) {
      case Effect::Kind::Add: {
        Tuple row = eval_terms(e.terms, env);
        const auto& sig = sys.relations.at(e.relation);
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (!out.has_atom(sig[i], row[i])) {
            throw Error(ErrorCode::SortMismatch,
                        "command '" + command + "': tuple component " +
                            row[i].str() + " is not in sort " + sig[i]);
          }
        }
        out.relations[e.relation].insert(std::move(row));
        break;
      }
      case Effect::Kind::Remove: {
        Tuple row = eval_terms(e.terms, env);
        auto rel = out.relations.find(e.relation);
        if (rel != out.relations.end()) rel->second.erase(row);
        break;
      }
      case Effect::Kind::Fresh: {
        Atom a = Atom::derived(e.tag, eval_terms(e.terms, env));
        out.universes[e.sort].insert(a);
        env[e.var] = a;
        break;
      }
    }
  }
  out.normalize();
  return out;
}

TraceResult run_trace(const SystemDef& sys, const State& s,
                      const std::vector<Ground>& commands) {
  TraceResult r;
  r.final = s;
  r.intermediates.reserve(commands.size());
  for (const Ground& g : commands) {
    r.final = step(sys, r.final, g.name, g.args);
    r.intermediates.push_back(r.final);
  }
  return r;
}

// --- ground enumeration -------------------------------------------------------

namespace {

// All sort-correct argument tuples, lexicographic in canonical atom order.
std::vector<std::vector<Atom>> arg_tuples(const State& s, const Params& params) {
  std::vector<std::vector<Atom>> out{{}};
  for (const auto& [_, sort] : params) {
    auto uit = s.universes.find(sort);
    if (uit == s.universes.end() || uit->second.empty()) return {};
    std::vector<std::vector<Atom>> next;
    next.reserve(out.size() * uit->second.size());
    for (const auto& prefix : out) {
      for (const Atom& a : uit->second) {
        auto row = prefix;
        row.push_back(a);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::map<std::string, bool> theory(const SystemDef& sys, const State& s) {
  std::map<std::string, bool> out;
  for (const auto& [name, q] : sys.queries) {
    for (const auto& args : arg_tuples(s, q.params)) {
      Ground g{name, args};
      out[g.str()] = entails(sys, s, name, args);
    }
  }
  return out;
}

std::vector<Ground> ground_queries(const SystemDef& sys, const State& s,
                                   bool requests_only) {
  std::vector<Ground> out;
  for (const auto& [name, q] : sys.queries) {
    if (requests_only && !q.is_request) continue;
    for (auto& args : arg_tuples(s, q.params)) out.push_back({name, std::move(args)});
  }
  return out;
}

std::vector<Ground> allowed(const SystemDef& sys, const State& s) {
  std::vector<Ground> out;
  for (const auto& [name, q] : sys.queries) {
    if (!q.is_request) continue;
    for (auto& args : arg_tuples(s, q.params)) {
      if (entails(sys, s, name, args)) out.push_back({name, std::move(args)});
    }
  }
  return out;
}

std::set<std::string> allowed_keys(const SystemDef& sys, const State& s) {
  std::set<std::string> out;
  for (const Ground& g : allowed(sys, s)) out.insert(g.str());
  return out;
}

std::vector<Ground> ground_commands(const SystemDef& sys, const State& s) {
  std::vector<Ground> out;
  for (const auto& [name, cmd] : sys.commands) {
    for (auto& args : arg_tuples(s, cmd.params)) out.push_back({name, std::move(args)});
  }
  return out;
}

// --- validation ----------------------------------------------------------------

namespace {

struct Validator {
  const SystemDef& sys;
  std::vector<ValidationIssue> issues;

  void error(ErrorCode c, const std::string& where, const std::string& msg) {
    issues.push_back({c, where, msg, false});
  }
  void warn(ErrorCode c, const std::string& where, const std::string& msg) {
    issues.push_back({c, where, msg, true});
  }

  void check_term(const Term& t, const std::set<std::string>& bound,
                  const std::string& where) {
    switch (t.kind) {
      case Term::Kind::Var:
        if (!bound.count(t.name)) {
          error(ErrorCode::UnboundVariable, where,
                "variable '" + t.name + "' is not bound");
        }
        break;
      case Term::Kind::Const:
        break;
      case Term::Kind::Make:
        for (const auto& a : t.args) check_term(a, bound, where);
        break;
    }
  }

  void check_formula(const Formula& f, std::set<std::string> bound,
                     const std::string& where, bool allow_query_atoms) {
    switch (f.kind) {
      case Formula::Kind::Member: {
        auto it = sys.relations.find(f.name);
        if (it == sys.relations.end()) {
          error(ErrorCode::UnknownRelation, where,
                "relation '" + f.name + "' is not declared");
        } else if (it->second.size() != f.terms.size()) {
          error(ErrorCode::ArityMismatch, where,
                "relation '" + f.name + "' has arity " +
                    std::to_string(it->second.size()) + ", got " +
                    std::to_string(f.terms.size()));
        }
        for (const auto& t : f.terms) check_term(t, bound, where);
        break;
      }
      case Formula::Kind::Query:
      case Formula::Kind::Distinct:
        if (!allow_query_atoms) {
          error(ErrorCode::Invalid, where,
                "query/distinct atoms are only valid in mapping expressions");
        }
        for (const auto& t : f.terms) check_term(t, bound, where);
        break;
      case Formula::Kind::Not:
      case Formula::Kind::And:
      case Formula::Kind::Or:
        for (const auto& c : f.children) {
          check_formula(c, bound, where, allow_query_atoms);
        }
        break;
      case Formula::Kind::Exists: {
        if (!sys.sorts.count(f.sort)) {
          error(ErrorCode::UnknownSort, where,
                "quantifier sort '" + f.sort + "' is not declared");
        }
        bound.insert(f.var);
        check_formula(f.children[0], bound, where, allow_query_atoms);
        break;
      }
    }
  }

  void check_params(const Params& ps, const std::string& where) {
    std::set<std::string> seen;
    for (const auto& [v, sort] : ps) {
      if (!seen.insert(v).second) {
        error(ErrorCode::DuplicateName, where, "parameter '" + v + "' repeats");
      }
      if (!sys.sorts.count(sort)) {
        error(ErrorCode::UnknownSort, where,
              "parameter sort '" + sort + "' is not declared");
      }
    }
  }

  void run() {
    for (const auto& [name, sig] : sys.relations) {
      if (sys.sorts.count(name)) {
        error(ErrorCode::DuplicateName, "relation " + name,
              "name collides with a sort");
      }
      for (const auto& s : sig) {
        if (!sys.sorts.count(s)) {
          error(ErrorCode::UnknownSort, "relation " + name,
                "signature sort '" + s + "' is not declared");
        }
      }
    }
    for (const auto& [name, q] : sys.queries) {
      const std::string where = "query " + name;
      check_params(q.params, where);
      std::set<std::string> bound;
      for (const auto& [v, _] : q.params) bound.insert(v);
      check_formula(q.body, bound, where, false);
      if (q.is_request && q.body.uses_negation()) {
        warn(ErrorCode::Invalid, where, "request body uses negation");
      }
    }
    for (const auto& [name, c] : sys.commands) {
      const std::string where = "command " + name;
      if (sys.queries.count(name)) {
        error(ErrorCode::DuplicateName, where, "name collides with a query");
      }
      check_params(c.params, where);
      if (c.actor && *c.actor >= c.params.size()) {
        error(ErrorCode::Invalid, where,
              "actor index " + std::to_string(*c.actor) + " is out of range");
      }
      std::set<std::string> bound;
      for (const auto& [v, _] : c.params) bound.insert(v);
      check_formula(c.guard, bound, where, false);
      for (const Effect& e : c.effects) {
        switch (e.kind) {
          case Effect::Kind::Add:
          case Effect::Kind::Remove: {
            auto it = sys.relations.find(e.relation);
            if (it == sys.relations.end()) {
              error(ErrorCode::UnknownRelation, where,
                    "effect relation '" + e.relation + "' is not declared");
            } else if (it->second.size() != e.terms.size()) {
              error(ErrorCode::ArityMismatch, where,
                    "effect on '" + e.relation + "' has arity " +
                        std::to_string(e.terms.size()) + ", expected " +
                        std::to_string(it->second.size()));
            }
            for (const auto& t : e.terms) check_term(t, bound, where);
            break;
          }
          case Effect::Kind::Fresh:
            if (!sys.sorts.count(e.sort)) {
              error(ErrorCode::UnknownSort, where,
                    "fresh sort '" + e.sort + "' is not declared");
            }
            for (const auto& t : e.terms) check_term(t, bound, where);
            bound.insert(e.var);
            break;
        }
      }
    }
    if (sys.admins) {
      auto it = sys.relations.find(*sys.admins);
      if (it == sys.relations.end()) {
        error(ErrorCode::UnknownRelation, "admins",
              "admin relation '" + *sys.admins + "' is not declared");
      } else if (it->second.size() != 1) {
        error(ErrorCode::ArityMismatch, "admins",
              "admin relation '" + *sys.admins + "' must be unary");
      }
    }
    for (auto& i : validate_state(sys, sys.init, "init")) issues.push_back(i);
  }
};

}  // namespace

std::vector<ValidationIssue> validate_state(const SystemDef& sys, const State& s,
                                            const std::string& where) {
  std::vector<ValidationIssue> issues;
  auto error = [&](ErrorCode c, const std::string& msg) {
    issues.push_back({c, where, msg, false});
  };
  std::map<Atom, std::string> atom_sort;
  for (const auto& [sort, atoms] : s.universes) {
    if (!sys.sorts.count(sort)) {
      error(ErrorCode::UnknownSort, "universe sort '" + sort + "' is not declared");
      continue;
    }
    for (const Atom& a : atoms) {
      auto [it, fresh] = atom_sort.emplace(a, sort);
      if (!fresh) {
        error(ErrorCode::InvalidState, "atom " + a.str() + " appears in sorts " +
                                           it->second + " and " + sort);
      }
    }
  }
  for (const auto& [rel, rows] : s.relations) {
    auto it = sys.relations.find(rel);
    if (it == sys.relations.end()) {
      error(ErrorCode::UnknownRelation, "relation '" + rel + "' is not declared");
      continue;
    }
    const auto& sig = it->second;
    for (const Tuple& row : rows) {
      if (row.size() != sig.size()) {
        error(ErrorCode::ArityMismatch,
              "row " + Ground{rel, row}.str() + " has arity " +
                  std::to_string(row.size()) + ", expected " +
                  std::to_string(sig.size()));
        continue;
      }
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (!s.has_atom(sig[i], row[i])) {
          error(ErrorCode::SortMismatch,
                "row " + Ground{rel, row}.str() + ": component " +
                    row[i].str() + " is not in sort " + sig[i]);
        }
      }
    }
  }
  return issues;
}

ValidatedSystem validate_system(const SystemDef& raw) {
  Validator v{raw, {}};
  v.run();
  std::vector<ValidationIssue> warnings;
  std::vector<ValidationIssue> errors;
  for (auto& i : v.issues) (i.warning ? warnings : errors).push_back(i);
  if (!errors.empty()) {
    for (auto& w : warnings) errors.push_back(w);
    throw ValidationError(std::move(errors));
  }
  return ValidatedSystem{raw, std::move(warnings)};
}

}  // namespace acx
