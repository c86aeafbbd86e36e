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

#include "acx/json_io.hpp"

#include <fstream>
#include <sstream>

namespace acx {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::Parse, what);
}

void expect(bool ok, const std::string& what) {
  if (!ok) parse_fail(what);
}

std::string str_field(const Json& j, const char* key, const std::string& where) {
  expect(j.contains(key) && j[key].is_string(),
         where + ": expected string field '" + std::string(key) + "'");
  return j[key].get<std::string>();
}

}  // namespace

Json atom_to_json(const Atom& a) { return a.str(); }

Atom atom_from_json(const Json& j) {
  expect(j.is_string(), "atom must be a string, got " + j.dump());
  return Atom(j.get<std::string>());
}

Json term_to_json(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
      return t.name;
    case Term::Kind::Const:
      return Json{{"atom", t.value.str()}};
    case Term::Kind::Make: {
      Json args = Json::array();
      args.push_back(t.name);
      for (const auto& a : t.args) args.push_back(term_to_json(a));
      return Json{{"make", args}};
    }
  }
  parse_fail("corrupt term");
}

Term term_from_json(const Json& j, bool allow_make) {
  if (j.is_string()) return Term::var(j.get<std::string>());
  expect(j.is_object() && j.size() == 1,
         "term must be a variable string, {\"atom\":...} or {\"make\":[...]}, got " +
             j.dump());
  if (j.contains("atom")) return Term::constant(atom_from_json(j["atom"]));
  if (j.contains("make")) {
    expect(allow_make, "constructor terms are not allowed here: " + j.dump());
    const Json& m = j["make"];
    expect(m.is_array() && !m.empty() && m[0].is_string(),
           "make term needs [\"tag\", args...], got " + j.dump());
    std::vector<Term> args;
    for (std::size_t i = 1; i < m.size(); ++i) {
      args.push_back(term_from_json(m[i], allow_make));
    }
    return Term::make(m[0].get<std::string>(), std::move(args));
  }
  parse_fail("unknown term form " + j.dump());
}

namespace {

std::vector<Term> terms_from_json(const Json& arr, std::size_t first,
                                  const std::string& where) {
  std::vector<Term> out;
  for (std::size_t i = first; i < arr.size(); ++i) {
    try {
      out.push_back(term_from_json(arr[i]));
    } catch (const Error& e) {
      parse_fail(where + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

Json formula_to_json(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Member:
    case Formula::Kind::Query: {
      Json arr = Json::array();
      arr.push_back(f.name);
      for (const auto& t : f.terms) arr.push_back(term_to_json(t));
      return Json{{f.kind == Formula::Kind::Member ? "member" : "query", arr}};
    }
    case Formula::Kind::Distinct:
      return Json{{"distinct", {term_to_json(f.terms[0]), term_to_json(f.terms[1])}}};
    case Formula::Kind::Not:
      return Json{{"not", formula_to_json(f.children[0])}};
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      Json arr = Json::array();
      for (const auto& c : f.children) arr.push_back(formula_to_json(c));
      return Json{{f.kind == Formula::Kind::And ? "and" : "or", arr}};
    }
    case Formula::Kind::Exists:
      return Json{{"exists", {f.var, f.sort, formula_to_json(f.children[0])}}};
  }
  parse_fail("corrupt formula");
}

Formula formula_from_json(const Json& j, bool mapping_expr) {
  if (j.is_boolean()) {
    return j.get<bool>() ? Formula::land({}) : Formula::lor({});
  }
  expect(j.is_object() && j.size() == 1,
         "formula must be a one-key object or boolean, got " + j.dump());
  const std::string key = j.begin().key();
  const Json& v = j.begin().value();
  if (key == "member" || key == "query") {
    expect(v.is_array() && !v.empty() && v[0].is_string(),
           key + " atom needs [\"name\", terms...], got " + j.dump());
    if (key == "query") {
      expect(mapping_expr, "query atoms are only valid in mapping expressions");
      return Formula::query(v[0].get<std::string>(),
                            terms_from_json(v, 1, "query atom"));
    }
    return Formula::member(v[0].get<std::string>(),
                           terms_from_json(v, 1, "member atom"));
  }
  if (key == "distinct") {
    expect(mapping_expr, "distinct atoms are only valid in mapping expressions");
    expect(v.is_array() && v.size() == 2,
           "distinct needs exactly two terms, got " + j.dump());
    return Formula::distinct(term_from_json(v[0]), term_from_json(v[1]));
  }
  if (key == "not") return Formula::lnot(formula_from_json(v, mapping_expr));
  if (key == "and" || key == "or") {
    expect(v.is_array(), key + " needs an array, got " + j.dump());
    std::vector<Formula> fs;
    for (const auto& c : v) fs.push_back(formula_from_json(c, mapping_expr));
    return key == "and" ? Formula::land(std::move(fs))
                        : Formula::lor(std::move(fs));
  }
  if (key == "exists") {
    expect(v.is_array() && v.size() == 3 && v[0].is_string() && v[1].is_string(),
           "exists needs [\"var\", \"sort\", body], got " + j.dump());
    return Formula::exists(v[0].get<std::string>(), v[1].get<std::string>(),
                           formula_from_json(v[2], mapping_expr));
  }
  parse_fail("unknown formula form '" + key + "'");
}

Json state_to_json(const State& s) {
  Json universes = Json::object();
  for (const auto& [sort, atoms] : s.universes) {
    Json arr = Json::array();
    for (const Atom& a : atoms) arr.push_back(a.str());
    universes[sort] = std::move(arr);
  }
  Json relations = Json::object();
  for (const auto& [rel, rows] : s.relations) {
    Json arr = Json::array();
    for (const Tuple& row : rows) {
      Json t = Json::array();
      for (const Atom& a : row) t.push_back(a.str());
      arr.push_back(std::move(t));
    }
    relations[rel] = std::move(arr);
  }
  return Json{{"universes", std::move(universes)},
              {"relations", std::move(relations)}};
}

State state_from_json(const Json& j) {
  expect(j.is_object(), "state must be an object, got " + j.dump());
  State s;
  if (j.contains("universes")) {
    expect(j["universes"].is_object(), "state universes must be an object");
    for (const auto& [sort, arr] : j["universes"].items()) {
      expect(arr.is_array(), "universe '" + sort + "' must be an array");
      auto& set = s.universes[sort];
      for (const auto& a : arr) set.insert(atom_from_json(a));
    }
  }
  if (j.contains("relations")) {
    expect(j["relations"].is_object(), "state relations must be an object");
    for (const auto& [rel, arr] : j["relations"].items()) {
      expect(arr.is_array(), "relation '" + rel + "' must be an array");
      auto& rows = s.relations[rel];
      for (const auto& row : arr) {
        expect(row.is_array(), "relation '" + rel + "' rows must be arrays");
        Tuple t;
        for (const auto& a : row) t.push_back(atom_from_json(a));
        rows.insert(std::move(t));
      }
    }
  }
  s.normalize();
  return s;
}

namespace {

Params params_from_json(const Json& j, const std::string& where) {
  expect(j.is_array(), where + ": params must be an array of [var, sort] pairs");
  Params out;
  for (const auto& p : j) {
    expect(p.is_array() && p.size() == 2 && p[0].is_string() && p[1].is_string(),
           where + ": each param must be a [var, sort] pair, got " + p.dump());
    out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return out;
}

Json params_to_json(const Params& ps) {
  Json out = Json::array();
  for (const auto& [v, s] : ps) out.push_back(Json::array({v, s}));
  return out;
}

Effect effect_from_json(const Json& j, const std::string& where) {
  expect(j.is_object() && j.size() == 1,
         where + ": effect must be a one-key object, got " + j.dump());
  const std::string key = j.begin().key();
  const Json& v = j.begin().value();
  Effect e;
  if (key == "add" || key == "remove") {
    expect(v.is_array() && !v.empty() && v[0].is_string(),
           where + ": " + key + " needs [\"relation\", terms...]");
    e.kind = key == "add" ? Effect::Kind::Add : Effect::Kind::Remove;
    e.relation = v[0].get<std::string>();
    e.terms = terms_from_json(v, 1, where);
    return e;
  }
  if (key == "fresh") {
    expect(v.is_array() && v.size() >= 3 && v[0].is_string() &&
               v[1].is_string() && v[2].is_string(),
           where + ": fresh needs [\"var\", \"sort\", \"tag\", terms...]");
    e.kind = Effect::Kind::Fresh;
    e.var = v[0].get<std::string>();
    e.sort = v[1].get<std::string>();
    e.tag = v[2].get<std::string>();
    e.terms = terms_from_json(v, 3, where);
    return e;
  }
  parse_fail(where + ": unknown effect '" + key + "'");
}

Json effect_to_json(const Effect& e) {
  Json arr = Json::array();
  switch (e.kind) {
    case Effect::Kind::Add:
    case Effect::Kind::Remove:
      arr.push_back(e.relation);
      for (const auto& t : e.terms) arr.push_back(term_to_json(t));
      return Json{{e.kind == Effect::Kind::Add ? "add" : "remove", arr}};
    case Effect::Kind::Fresh:
      arr.push_back(e.var);
      arr.push_back(e.sort);
      arr.push_back(e.tag);
      for (const auto& t : e.terms) arr.push_back(term_to_json(t));
      return Json{{"fresh", arr}};
  }
  parse_fail("corrupt effect");
}

}  // namespace

Json system_to_json(const SystemDef& sys) {
  Json j;
  j["name"] = sys.name;
  j["sorts"] = Json::array();
  for (const auto& s : sys.sorts) j["sorts"].push_back(s);
  j["relations"] = Json::object();
  for (const auto& [name, sig] : sys.relations) j["relations"][name] = sig;
  j["queries"] = Json::array();
  for (const auto& [name, q] : sys.queries) {
    Json qj;
    qj["name"] = name;
    qj["params"] = params_to_json(q.params);
    qj["request"] = q.is_request;
    qj["body"] = formula_to_json(q.body);
    j["queries"].push_back(std::move(qj));
  }
  j["commands"] = Json::array();
  for (const auto& [name, c] : sys.commands) {
    Json cj;
    cj["name"] = name;
    cj["params"] = params_to_json(c.params);
    if (c.actor) cj["actor"] = *c.actor;
    cj["guard"] = formula_to_json(c.guard);
    cj["effects"] = Json::array();
    for (const auto& e : c.effects) cj["effects"].push_back(effect_to_json(e));
    j["commands"].push_back(std::move(cj));
  }
  j["init"] = state_to_json(sys.init);
  if (sys.admins) j["admins"] = *sys.admins;
  return j;
}

ValidatedSystem system_from_json(const Json& j) {
  expect(j.is_object(), "system must be a JSON object");
  SystemDef sys;
  sys.name = j.contains("name") ? str_field(j, "name", "system") : "";
  std::vector<ValidationIssue> issues;

  expect(j.contains("sorts") && j["sorts"].is_array(),
         "system needs a 'sorts' array");
  for (const auto& s : j["sorts"]) {
    expect(s.is_string(), "sorts must be strings");
    if (!sys.sorts.insert(s.get<std::string>()).second) {
      issues.push_back({ErrorCode::DuplicateName, "sorts",
                        "sort '" + s.get<std::string>() + "' repeats", false});
    }
  }

  if (j.contains("relations")) {
    expect(j["relations"].is_object(), "'relations' must be an object");
    for (const auto& [name, sig] : j["relations"].items()) {
      expect(sig.is_array(), "relation '" + name + "' signature must be an array");
      std::vector<std::string> sorts;
      for (const auto& s : sig) {
        expect(s.is_string(), "relation '" + name + "' signature must be strings");
        sorts.push_back(s.get<std::string>());
      }
      sys.relations[name] = std::move(sorts);
    }
  }

  if (j.contains("queries")) {
    expect(j["queries"].is_array(), "'queries' must be an array");
    for (const auto& qj : j["queries"]) {
      expect(qj.is_object(), "each query must be an object");
      QueryDef q;
      q.name = str_field(qj, "name", "query");
      const std::string where = "query " + q.name;
      q.params = params_from_json(qj.contains("params") ? qj["params"]
                                                        : Json::array(),
                                  where);
      if (qj.contains("request")) {
        expect(qj["request"].is_boolean(), where + ": 'request' must be boolean");
        q.is_request = qj["request"].get<bool>();
      }
      expect(qj.contains("body"), where + ": missing 'body'");
      try {
        q.body = formula_from_json(qj["body"], false);
      } catch (const Error& e) {
        parse_fail(where + ": " + e.what());
      }
      if (!sys.queries.emplace(q.name, q).second) {
        issues.push_back(
            {ErrorCode::DuplicateName, where, "query name repeats", false});
      }
    }
  }

  if (j.contains("commands")) {
    expect(j["commands"].is_array(), "'commands' must be an array");
    for (const auto& cj : j["commands"]) {
      expect(cj.is_object(), "each command must be an object");
      CommandDef c;
      c.name = str_field(cj, "name", "command");
      const std::string where = "command " + c.name;
      c.params = params_from_json(cj.contains("params") ? cj["params"]
                                                        : Json::array(),
                                  where);
      if (cj.contains("actor")) {
        expect(cj["actor"].is_number_unsigned(),
               where + ": 'actor' must be a parameter index");
        c.actor = cj["actor"].get<std::size_t>();
      }
      if (cj.contains("guard")) {
        try {
          c.guard = formula_from_json(cj["guard"], false);
        } catch (const Error& e) {
          parse_fail(where + ": " + e.what());
        }
      }
      if (cj.contains("effects")) {
        expect(cj["effects"].is_array(), where + ": 'effects' must be an array");
        for (const auto& ej : cj["effects"]) {
          c.effects.push_back(effect_from_json(ej, where));
        }
      }
      if (!sys.commands.emplace(c.name, c).second) {
        issues.push_back(
            {ErrorCode::DuplicateName, where, "command name repeats", false});
      }
    }
  }

  if (j.contains("init")) sys.init = state_from_json(j["init"]);
  if (j.contains("admins")) sys.admins = str_field(j, "admins", "system");

  if (j.contains("requests")) {
    expect(j["requests"].is_array(), "'requests' must be an array of query names");
    for (const auto& r : j["requests"]) {
      expect(r.is_string(), "'requests' must be an array of query names");
      auto it = sys.queries.find(r.get<std::string>());
      if (it == sys.queries.end()) {
        issues.push_back({ErrorCode::RequestNotQuery, "requests",
                          "'" + r.get<std::string>() + "' is not a query", false});
      } else {
        it->second.is_request = true;
      }
    }
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  return validate_system(sys);
}

ValidatedSystem system_from_string(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(e.what());
  }
  return system_from_json(j);
}

ValidatedSystem system_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return system_from_string(buf.str());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Parse) throw;
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

Json ground_to_json(const Ground& g) {
  Json args = Json::array();
  for (const Atom& a : g.args) args.push_back(a.str());
  return Json{{"name", g.name}, {"args", std::move(args)}};
}

Ground ground_from_json(const Json& j) {
  expect(j.is_object() && j.contains("name") && j["name"].is_string(),
         "ground instance needs a 'name'");
  Ground g;
  g.name = j["name"].get<std::string>();
  if (j.contains("args")) {
    expect(j["args"].is_array(), "ground args must be an array");
    for (const auto& a : j["args"]) g.args.push_back(atom_from_json(a));
  }
  return g;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace acx
