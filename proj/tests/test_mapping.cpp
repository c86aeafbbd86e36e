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

#include <string>
#include <vector>

#include "doctest.h"

#include "acx/corpus.hpp"
#include "acx/explore.hpp"
#include "acx/json_io.hpp"
#include "acx/mapping.hpp"

#include "support.hpp"

using namespace acx;
using acx::testing::mapping_of;
using acx::testing::system_of;

namespace {

State acl_state(std::vector<const char*> users, std::vector<const char*> objs,
                std::vector<std::pair<const char*, const char*>> rows) {
  State s;
  for (const char* u : users) s.universes["U"].insert(Atom(u));
  for (const char* o : objs) s.universes["O"].insert(Atom(o));
  for (auto& [u, o] : rows) s.relations["ACL"].insert({Atom(u), Atom(o)});
  s.normalize();
  return s;
}

}  // namespace

TEST_CASE("the shipped identity mapping equals the generated one") {
  MappingDef generated = identity_mapping(builtin_system("acl"));
  MappingDef shipped = builtin_mapping("identity-acl");
  CHECK(dump_canonical(mapping_to_json(generated)) ==
        dump_canonical(mapping_to_json(shipped)));
}

TEST_CASE("state mapping builds the role-per-user image") {
  MappingDef m = builtin_mapping("acl-to-rbac");

  State src = acl_state({"a", "b"}, {}, {});
  State img = map_state(m, src);
  CHECK(img.universes.at("U") == std::set<Atom>{Atom("a"), Atom("b")});
  CHECK(img.universes.at("R") ==
        std::set<Atom>{Atom("role_of(a)"), Atom("role_of(b)")});
  CHECK(img.relations.at("UR") ==
        std::set<Tuple>{{Atom("a"), Atom("role_of(a)")},
                        {Atom("b"), Atom("role_of(b)")}});
  CHECK(img.universes.count("P") == 0);  // no objects, no permissions

  State granted = acl_state({"a"}, {"o"}, {{"a", "o"}});
  State img2 = map_state(m, granted);
  CHECK(img2.universes.at("P") == std::set<Atom>{Atom("o")});
  CHECK(img2.relations.at("PA") ==
        std::set<Tuple>{{Atom("role_of(a)"), Atom("o")}});

  // The state mapping is a function: equal inputs, equal images.
  CHECK(map_state(m, granted) == img2);
}

TEST_CASE("command mapping emits the published sequences") {
  MappingDef m = builtin_mapping("acl-to-rbac");
  State tgt = map_state(m, acl_state({"a"}, {"o"}, {}));

  CommandImage img = map_command(m, {"grant", {Atom("a"), Atom("o")}}, tgt);
  REQUIRE(img.commands.size() == 1);
  CHECK(img.commands[0].str() == "assignPerm(role_of(a),o)");
  CHECK(img.cost.commands_emitted == img.commands.size());
  CHECK_FALSE(img.evidence.consulted_queries);
  CHECK_FALSE(img.evidence.consulted_raw);

  CommandImage rev = map_command(m, {"revoke", {Atom("a"), Atom("o")}}, tgt);
  REQUIRE(rev.commands.size() == 1);
  CHECK(rev.commands[0].str() == "revokePerm(role_of(a),o)");

  // A state-blind rule emits the same sequence against any target state.
  State other = map_state(m, acl_state({"a", "b"}, {"o", "p"}, {{"b", "p"}}));
  CHECK(map_command(m, {"grant", {Atom("a"), Atom("o")}}, other).commands ==
        img.commands);
}

TEST_CASE("query deciders agree with source entailment through the image") {
  MappingDef m = builtin_mapping("acl-to-rbac");
  for (const auto& rows :
       std::vector<std::vector<std::pair<const char*, const char*>>>{
           {}, {{"a", "o"}}, {{"a", "o"}, {"b", "o"}}, {{"b", "p"}}}) {
    State src = acl_state({"a", "b"}, {"o", "p"}, rows);
    State img = map_state(m, src);
    for (const Ground& q : ground_queries(*m.source, src, false)) {
      QueryDecision d = decide_query(m, q, img);
      CHECK(d.value == entails(*m.source, src, q.name, q.args));
    }
  }
}

TEST_CASE("when and distinct gate command emission") {
  MappingDef m = builtin_mapping("acl-transfer-clean");
  State tgt = acl_state({"a", "b"}, {"o"}, {{"a", "o"}});

  // Moving a held right: revoke first, then grant.
  CommandImage move =
      map_command(m, {"transfer", {Atom("a"), Atom("b"), Atom("o")}}, tgt);
  REQUIRE(move.commands.size() == 2);
  CHECK(move.commands[0].str() == "revoke(a,o)");
  CHECK(move.commands[1].str() == "grant(b,o)");
  CHECK(move.evidence.consulted_queries);

  // Self-transfer trips the distinct() condition and emits nothing.
  CHECK(map_command(m, {"transfer", {Atom("a"), Atom("a"), Atom("o")}}, tgt)
            .commands.empty());

  // Transferring a right the donor lacks emits nothing.
  CHECK(map_command(m, {"transfer", {Atom("b"), Atom("a"), Atom("o")}}, tgt)
            .commands.empty());
}

TEST_CASE("foreach iterates rows in canonical order with deduped binders") {
  auto src = testing::plain_source();
  auto tgt = testing::hidden_bit_target();
  MappingDef m = mapping_of(std::string(R"({
    "name": "sweep", "source": "plain", "target": "hidden",)") +
                                testing::kPlainToHiddenBase + R"(,
    "command_rules": [
      {"command": "touch", "params": ["x"],
       "body": [{"foreach": {"relation": ["Hid", "y"],
                             "body": [{"emit": ["addPub", "y"]}]}}]}
    ]
  })", src, tgt);

  State t;
  t.universes["X"] = {Atom("a"), Atom("b"), Atom("c")};
  t.relations["Hid"] = {{Atom("c")}, {Atom("a")}};
  CommandImage img = map_command(m, {"touch", {Atom("a")}}, t);
  REQUIRE(img.commands.size() == 2);
  CHECK(img.commands[0].str() == "addPub(a)");
  CHECK(img.commands[1].str() == "addPub(c)");
  CHECK(img.evidence.consulted_raw);
  CHECK(img.cost.state_items_inspected > 0);
}

TEST_CASE("mapping shape classifies rule texture") {
  MappingShape plain = mapping_shape(builtin_mapping("acl-to-rbac"));
  CHECK_FALSE(plain.commands_use_foreach_or_when);
  CHECK_FALSE(plain.commands_consult_raw);
  CHECK_FALSE(plain.commands_consult_queries);
  CHECK(plain.max_state_rule_join == 1);

  MappingShape cond = mapping_shape(builtin_mapping("acl-transfer-clean"));
  CHECK(cond.commands_use_foreach_or_when);
  CHECK(cond.commands_consult_queries);
  CHECK_FALSE(cond.commands_consult_raw);
}

TEST_CASE("mapping validation demands full rule coverage") {
  auto src = testing::plain_source();
  auto tgt = testing::hidden_bit_target();

  auto issues_of = [&](const std::string& text) {
    try {
      mapping_of(text, src, tgt);
      return std::vector<ValidationIssue>{};
    } catch (const ValidationError& e) {
      return e.issues();
    }
  };

  auto has = [](const std::vector<ValidationIssue>& issues, ErrorCode code) {
    for (const auto& i : issues) {
      if (i.code == code) return true;
    }
    return false;
  };

  // No rule for the only command.
  std::string no_cmd = std::string(R"({
    "name": "m", "source": "plain", "target": "hidden",)") +
                       testing::kPlainToHiddenBase + "}";
  CHECK(has(issues_of(no_cmd), ErrorCode::MissingCommandRule));

  // No rule for the only query.
  CHECK(has(issues_of(R"({
    "name": "m", "source": "plain", "target": "hidden",
    "state_rules": [{"match": [{"sort": "X", "var": "x"}],
                     "emit": [{"universe": ["X", "x"]}]}],
    "command_rules": [{"command": "touch", "params": ["x"],
                       "body": [{"emit": ["addPub", "x"]}]}]
  })"),
            ErrorCode::MissingQueryRule));

  // Emitting into a relation the target does not declare.
  CHECK(has(issues_of(R"({
    "name": "m", "source": "plain", "target": "hidden",
    "state_rules": [
      {"match": [{"sort": "X", "var": "x"}],
       "emit": [{"universe": ["X", "x"]}, {"tuple": ["Nope", "x"]}]}
    ],
    "command_rules": [{"command": "touch", "params": ["x"],
                       "body": [{"emit": ["addPub", "x"]}]}],
    "query_rules": [{"query": "q", "params": ["x"],
                     "decide": {"formula": {"query": ["q", "x"]}}}]
  })"),
            ErrorCode::RuleEmitsUnknownRelation));
}

TEST_CASE("duplicate rules for one command are rejected") {
  auto src = testing::plain_source();
  auto tgt = testing::hidden_bit_target();
  try {
    mapping_of(std::string(R"({
      "name": "m", "source": "plain", "target": "hidden",)") +
                   testing::kPlainToHiddenBase + R"(,
      "command_rules": [
        {"command": "touch", "params": ["x"],
         "body": [{"emit": ["addPub", "x"]}]},
        {"command": "touch", "params": ["x"], "body": []}
      ]
    })",
               src, tgt);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    REQUIRE_FALSE(e.issues().empty());
    CHECK(e.issues()[0].code == ErrorCode::DuplicateRule);
  }
}
