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

#include "doctest.h"

#include "acx/corpus.hpp"
#include "acx/json_io.hpp"

#include "support.hpp"

using namespace acx;

TEST_CASE("atoms round-trip through JSON") {
  for (const char* text : {"u1", "role_of(u1)", "f(g(a),b)"}) {
    Atom a(text);
    CHECK(atom_from_json(atom_to_json(a)) == a);
    CHECK(atom_to_json(a).get<std::string>() == text);
  }
  CHECK_THROWS_AS(atom_from_json(Json(42)), Error);
}

TEST_CASE("states round-trip and serialize canonically") {
  State s;
  s.universes["U"] = {Atom("u2"), Atom("u1")};
  s.relations["ACL"] = {{Atom("u2"), Atom("o1")}, {Atom("u1"), Atom("o1")}};

  Json j = state_to_json(s);
  CHECK(state_from_json(j) == s);
  // Canonical dump: equal values, equal bytes.
  State copy = s;
  CHECK(dump_canonical(state_to_json(copy)) == dump_canonical(j));
  // Sets serialize sorted.
  CHECK(j["universes"]["U"][0] == "u1");
  CHECK(j["universes"]["U"][1] == "u2");
}

TEST_CASE("empty state entries do not survive deserialization") {
  State s = state_from_json(Json::parse(
      R"({"universes": {"U": ["u1"], "O": []}, "relations": {"ACL": []}})"));
  CHECK(s.universes.count("O") == 0);
  CHECK(s.relations.count("ACL") == 0);
  CHECK(s.universes.at("U").size() == 1);
}

TEST_CASE("formulas round-trip including mapping-only atoms") {
  Formula f = Formula::exists(
      "r", "R",
      Formula::land({Formula::member("UR", {Term::var("u"), Term::var("r")}),
                     Formula::lnot(Formula::member(
                         "PA", {Term::var("r"), Term::var("p")}))}));
  CHECK(formula_from_json(formula_to_json(f)) == f);

  Formula q = Formula::lor(
      {Formula::query("auth", {Term::var("u"), Term::var("o")}),
       Formula::distinct(Term::var("u"), Term::var("v"))});
  CHECK(formula_from_json(formula_to_json(q), true) == q);
  // Query atoms are illegal outside mapping expressions.
  CHECK_THROWS_AS(formula_from_json(formula_to_json(q), false), Error);

  CHECK(formula_from_json(Json(true)) == Formula::land({}));
  CHECK(formula_from_json(Json(false)) == Formula::lor({}));
}

TEST_CASE("systems round-trip through their JSON form") {
  for (const std::string& id : builtin_system_ids()) {
    auto sys = builtin_system(id);
    ValidatedSystem again = system_from_json(system_to_json(*sys));
    CHECK(again.def == *sys);
    CHECK(dump_canonical(system_to_json(again.def)) ==
          dump_canonical(system_to_json(*sys)));
  }
}

TEST_CASE("mappings round-trip through their JSON form") {
  for (const std::string& id : builtin_mapping_ids()) {
    MappingDef m = builtin_mapping(id);
    MappingDef again = mapping_from_json(mapping_to_json(m), m.source, m.target);
    CHECK(dump_canonical(mapping_to_json(again)) ==
          dump_canonical(mapping_to_json(m)));
  }
}

TEST_CASE("parse errors carry a usable location") {
  try {
    system_from_string("{\"name\": ");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).size() > 10);
  }

  CHECK_THROWS_AS(state_from_json(Json::parse(R"({"universes": []})")), Error);
  CHECK_THROWS_AS(
      system_from_json(Json::parse(R"({"name": 3, "sorts": []})")), Error);
}
