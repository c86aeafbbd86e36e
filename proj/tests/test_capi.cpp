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
//
// Exercises the shared-library surface alone: only acx/acx.h, opaque
// handles and status codes. JSON outputs are inspected with the vendored
// parser, which is not part of the library under test.

#include <string>

#include "acx/acx.h"
#include "doctest.h"
#include "json.hpp"

namespace {

// Owns a char* returned through an out parameter.
struct CStr {
  char* p = nullptr;
  ~CStr() { acx_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
  char** out() { return &p; }
};

struct SysH {
  acx_system* p = nullptr;
  ~SysH() { acx_system_free(p); }
  acx_system** out() { return &p; }
};

struct MapH {
  acx_mapping* p = nullptr;
  ~MapH() { acx_mapping_free(p); }
  acx_mapping** out() { return &p; }
};

nlohmann::json parsed(const CStr& s) {
  REQUIRE(s.p != nullptr);
  return nlohmann::json::parse(s.str());
}

}  // namespace

TEST_CASE("version string") {
  REQUIRE(acx_version() != nullptr);
  CHECK(std::string(acx_version()) == "1.0.0");
}

TEST_CASE("system handles load, serialize and round-trip") {
  SysH sys;
  CStr diag;
  REQUIRE(acx_system_builtin("acl", sys.out(), diag.out()) == ACX_OK);
  REQUIRE(sys.p != nullptr);
  CHECK(std::string(acx_system_name(sys.p)) == "acl");

  CStr json;
  REQUIRE(acx_system_to_json(sys.p, json.out()) == ACX_OK);
  const nlohmann::json j = parsed(json);
  CHECK(j["name"].get<std::string>() == "acl");

  SysH again;
  CStr diag2;
  REQUIRE(acx_system_from_json(json.p, again.out(), diag2.out()) == ACX_OK);
  CHECK(std::string(acx_system_name(again.p)) == "acl");

  CStr json2;
  REQUIRE(acx_system_to_json(again.p, json2.out()) == ACX_OK);
  CHECK(json.str() == json2.str());
}

TEST_CASE("system loading error paths") {
  SysH sys;
  CStr diag;
  CHECK(acx_system_from_json("this is not json", sys.out(), diag.out()) ==
        ACX_ERR_PARSE);
  CHECK(diag.p != nullptr);
  CHECK(sys.p == nullptr);

  SysH missing;
  CStr diag2;
  CHECK(acx_system_builtin("no-such-system", missing.out(), diag2.out()) ==
        ACX_ERR_NOT_FOUND);
  CHECK(diag2.str().find("no-such-system") != std::string::npos);

  SysH nofile;
  CStr diag3;
  CHECK(acx_system_from_file("/nonexistent/path.json", nofile.out(),
                             diag3.out()) != ACX_OK);

  CHECK(acx_system_builtin(nullptr, missing.out(), nullptr) ==
        ACX_ERR_BAD_ARGUMENT);
  CHECK(acx_system_builtin("acl", nullptr, nullptr) == ACX_ERR_BAD_ARGUMENT);
  CHECK(acx_system_to_json(nullptr, diag3.out()) == ACX_ERR_BAD_ARGUMENT);
  CHECK(acx_system_name(nullptr) == nullptr);
  acx_system_free(nullptr);
  acx_string_free(nullptr);
}

TEST_CASE("exploration reports states, edges and truncation") {
  SysH sys;
  REQUIRE(acx_system_builtin("acl", sys.out(), nullptr) == ACX_OK);

  CStr json;
  CStr diag;
  REQUIRE(acx_explore(sys.p, "2,1,6", json.out(), diag.out()) == ACX_OK);
  const nlohmann::json j = parsed(json);
  CHECK(j["system"].get<std::string>() == "acl");
  CHECK(j["bound"].get<std::string>() == "2,1,6");
  CHECK(j["states"].get<int>() == 16);
  CHECK(j["edges"].get<int>() == 128);
  CHECK(j["truncated"].get<bool>() == false);
  CHECK(j["state_list"].size() == 16);

  // NULL bound means the default, which is the same 2,1,6.
  CStr json_default;
  REQUIRE(acx_explore(sys.p, nullptr, json_default.out(), nullptr) == ACX_OK);
  CHECK(parsed(json_default)["states"].get<int>() == 16);

  CStr bad;
  CStr diag2;
  CHECK(acx_explore(sys.p, "two,one,six", bad.out(), diag2.out()) ==
        ACX_ERR_BAD_ARGUMENT);
  CHECK(diag2.p != nullptr);
  CHECK(acx_explore(nullptr, "2,1,6", bad.out(), nullptr) ==
        ACX_ERR_BAD_ARGUMENT);
}

TEST_CASE("mapping handles load and serialize") {
  MapH m;
  CStr diag;
  REQUIRE(acx_mapping_builtin("acl-to-rbac", m.out(), diag.out()) == ACX_OK);
  CHECK(std::string(acx_mapping_name(m.p)) == "acl-to-rbac");

  CStr json;
  REQUIRE(acx_mapping_to_json(m.p, json.out()) == ACX_OK);
  const nlohmann::json j = parsed(json);
  CHECK(j["source"].get<std::string>() == "acl");
  CHECK(j["target"].get<std::string>() == "rbac");

  MapH by_ref;
  REQUIRE(acx_mapping_resolve("identity-acl", by_ref.out(), nullptr) == ACX_OK);
  CHECK(std::string(acx_mapping_name(by_ref.p)) == "identity-acl");

  SysH sys;
  REQUIRE(acx_system_builtin("acl", sys.out(), nullptr) == ACX_OK);
  MapH ident;
  REQUIRE(acx_mapping_identity(sys.p, ident.out(), nullptr) == ACX_OK);
  CHECK(std::string(acx_mapping_name(ident.p)) == "identity-acl");

  // The constructed identity and the shipped one serialize identically.
  CStr ident_json;
  CStr shipped_json;
  REQUIRE(acx_mapping_to_json(ident.p, ident_json.out()) == ACX_OK);
  REQUIRE(acx_mapping_to_json(by_ref.p, shipped_json.out()) == ACX_OK);
  CHECK(ident_json.str() == shipped_json.str());

  MapH missing;
  CStr diag2;
  CHECK(acx_mapping_builtin("acl", missing.out(), diag2.out()) ==
        ACX_ERR_NOT_FOUND);
  CHECK(acx_mapping_name(nullptr) == nullptr);
  CHECK(acx_mapping_to_json(nullptr, diag2.out()) == ACX_ERR_BAD_ARGUMENT);
  acx_mapping_free(nullptr);
}

TEST_CASE("checking returns a report and a verdict status") {
  MapH ident;
  REQUIRE(acx_mapping_builtin("identity-acl", ident.out(), nullptr) == ACX_OK);

  CStr report;
  CStr diag;
  REQUIRE(acx_check(ident.p, "SCs,QPa", nullptr, report.out(), diag.out()) ==
          ACX_OK);
  nlohmann::json j = parsed(report);
  CHECK(j["mapping"].get<std::string>() == "identity-acl");
  for (const auto& r : j["results"]) {
    CHECK(r["verdict"].get<std::string>() == "holds");
  }

  MapH to_rbac;
  REQUIRE(acx_mapping_builtin("acl-to-rbac", to_rbac.out(), nullptr) == ACX_OK);

  CStr failing;
  REQUIRE(acx_check(to_rbac.p, "SCs", "2,2,6", failing.out(), nullptr) ==
          ACX_ERR_CHECK_FAILED);
  nlohmann::json fj = parsed(failing);
  REQUIRE(fj["results"].size() == 1);
  CHECK(fj["results"][0]["verdict"].get<std::string>() == "fails");

  // A property with nothing to grade comes back inapplicable, not failed.
  CStr inapplicable;
  REQUIRE(acx_check(to_rbac.p, "CAa", nullptr, inapplicable.out(), nullptr) ==
          ACX_ERR_INAPPLICABLE);
  CHECK(parsed(inapplicable)["results"][0]["verdict"].get<std::string>() ==
        "inapplicable");

  CStr bad;
  CStr diag2;
  CHECK(acx_check(to_rbac.p, "XYZ", nullptr, bad.out(), diag2.out()) ==
        ACX_ERR_BAD_ARGUMENT);
  CHECK(diag2.str().find("XYZ") != std::string::npos);

  CStr diag3;
  CHECK(acx_check(to_rbac.p, "SCa", "1,2", bad.out(), diag3.out()) ==
        ACX_ERR_BAD_ARGUMENT);
  CHECK(acx_check(nullptr, "SCa", nullptr, bad.out(), nullptr) ==
        ACX_ERR_BAD_ARGUMENT);
}

TEST_CASE("reports render as text and counterexamples replay") {
  MapH to_rbac;
  REQUIRE(acx_mapping_builtin("acl-to-rbac", to_rbac.out(), nullptr) == ACX_OK);

  CStr report;
  REQUIRE(acx_check(to_rbac.p, "SCs,SCa", "2,2,6", report.out(), nullptr) ==
          ACX_ERR_CHECK_FAILED);

  CStr text;
  CStr diag;
  REQUIRE(acx_report_text(report.p, text.out(), diag.out()) == ACX_OK);
  CHECK(text.str().find("acl-to-rbac") != std::string::npos);

  int ok = 0;
  CStr diag2;
  REQUIRE(acx_replay(to_rbac.p, report.p, &ok, diag2.out()) == ACX_OK);
  CHECK(ok == 1);

  CStr diag3;
  CHECK(acx_report_text("{broken", text.out(), diag3.out()) == ACX_ERR_PARSE);
  CHECK(acx_replay(to_rbac.p, "{broken", &ok, nullptr) == ACX_ERR_PARSE);
  CHECK(acx_replay(nullptr, report.p, &ok, nullptr) == ACX_ERR_BAD_ARGUMENT);
  CHECK(acx_replay(to_rbac.p, report.p, nullptr, nullptr) ==
        ACX_ERR_BAD_ARGUMENT);
}

TEST_CASE("lattice queries over the C surface") {
  CHECK(acx_lattice_implies("SCs", "SCa") == 1);
  CHECK(acx_lattice_implies("SCa", "SCs") == 0);
  CHECK(acx_lattice_implies("CDi", "CCc") == 1);
  CHECK(acx_lattice_implies("R↔", "Rfwd") == 1);
  CHECK(acx_lattice_implies("bogus", "SCa") == -1);
  CHECK(acx_lattice_implies(nullptr, "SCa") == -1);

  CStr tags;
  CStr diag;
  REQUIRE(acx_lattice_decompose("ALS", tags.out(), diag.out()) == ACX_OK);
  CHECK(tags.str() == "SCs QPa R↔");

  CStr canon;
  REQUIRE(acx_lattice_canonical("TL-SMR", canon.out(), nullptr) == ACX_OK);
  CHECK(canon.str() == "SCq QD1 R↔ SSp");

  CStr none;
  CStr diag2;
  CHECK(acx_lattice_canonical("Ganta", none.out(), diag2.out()) ==
        ACX_ERR_NOT_FOUND);
  CHECK(diag2.str().find("canonical") != std::string::npos);

  CStr unknown;
  CStr diag3;
  CHECK(acx_lattice_decompose("RBAC96", unknown.out(), diag3.out()) ==
        ACX_ERR_NOT_FOUND);

  CStr closure;
  REQUIRE(acx_lattice_closure("CDi", closure.out(), nullptr) == ACX_OK);
  CHECK(closure.str() == "CDi CDt CDs CCc CCl CC∞ CSc CS∞");

  CStr ordering;
  REQUIRE(acx_lattice_compare("Rbi", "Rfwd", ordering.out(), nullptr) ==
          ACX_OK);
  CHECK(ordering.str() == "StrictlyStronger");

  CStr ordering2;
  REQUIRE(acx_lattice_compare("SCq QD1 Rbi", "SCq QDt Rfwd SSl",
                              ordering2.out(), nullptr) == ACX_OK);
  CHECK(ordering2.str() == "Incomparable");

  CStr bad;
  CStr diag4;
  CHECK(acx_lattice_closure("CDi,nope", bad.out(), diag4.out()) ==
        ACX_ERR_BAD_ARGUMENT);
  CHECK(diag4.str().find("nope") != std::string::npos);

  CStr catalog;
  REQUIRE(acx_catalog_json(catalog.out()) == ACX_OK);
  const nlohmann::json cj = nlohmann::json::parse(catalog.str());
  CHECK(cj["simulations"].size() == 10);
  CHECK(cj["implications"].size() == 25);
}
