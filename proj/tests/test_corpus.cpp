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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "acx/corpus.hpp"
#include "acx/error.hpp"
#include "acx/json_io.hpp"
#include "acx/lattice.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

// Scratch directory for override tests; wiped on destruction.
struct TempCorpus {
  fs::path dir;

  TempCorpus() {
    dir = fs::temp_directory_path() / "acx-corpus-test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempCorpus() {
    unsetenv("ACX_CORPUS");
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p;
  }

  void activate() const { setenv("ACX_CORPUS", dir.string().c_str(), 1); }
};

}  // namespace

TEST_CASE("the built-in id lists are exactly the shipped corpus") {
  const std::vector<std::string> systems = {"acl", "rbac", "acl-transfer"};
  const std::vector<std::string> mappings = {
      "acl-to-rbac", "identity-acl", "acl-transfer-clean",
      "acl-transfer-contaminating"};
  CHECK(acx::builtin_system_ids() == systems);
  CHECK(acx::builtin_mapping_ids() == mappings);
}

TEST_CASE("every built-in system loads, validates and keeps its id as name") {
  for (const auto& id : acx::builtin_system_ids()) {
    CAPTURE(id);
    const auto sys = acx::builtin_system(id);
    REQUIRE(sys != nullptr);
    CHECK(sys->name == id);
    CHECK_FALSE(sys->sorts.empty());
    CHECK_FALSE(sys->queries.empty());
    CHECK_FALSE(sys->commands.empty());
    // Every system distinguishes at least one query as a request.
    bool any_request = false;
    for (const auto& [name, q] : sys->queries) any_request |= q.is_request;
    CHECK(any_request);
  }
}

TEST_CASE("every built-in mapping loads with the expected endpoints") {
  struct Row {
    std::string id, source, target;
  };
  const std::vector<Row> rows = {
      {"acl-to-rbac", "acl", "rbac"},
      {"identity-acl", "acl", "acl"},
      {"acl-transfer-clean", "acl-transfer", "acl"},
      {"acl-transfer-contaminating", "acl-transfer", "acl"},
  };
  for (const auto& row : rows) {
    CAPTURE(row.id);
    const acx::MappingDef m = acx::builtin_mapping(row.id);
    CHECK(m.name == row.id);
    CHECK(m.source->name == row.source);
    CHECK(m.target->name == row.target);
    // The serialized form revalidates cleanly against the same endpoints.
    std::vector<acx::ValidationIssue> warnings;
    const acx::MappingDef again = acx::mapping_from_json(
        acx::mapping_to_json(m), m.source, m.target, &warnings);
    CHECK(again.name == m.name);
    for (const auto& w : warnings) {
      CAPTURE(w.str());
      CHECK(w.warning);
    }
  }
}

TEST_CASE("corpus text is the raw JSON for each shipped file") {
  for (const auto& id : acx::builtin_system_ids()) {
    CAPTURE(id);
    const nlohmann::json j = nlohmann::json::parse(acx::corpus_text(id));
    CHECK(j["name"].get<std::string>() == id);
  }
  for (const auto& id : acx::builtin_mapping_ids()) {
    CAPTURE(id);
    const nlohmann::json j = nlohmann::json::parse(acx::corpus_text(id));
    CHECK(j["name"].get<std::string>() == id);
  }
}

TEST_CASE("the shipped catalog file matches the lattice byte for byte") {
  CHECK(acx::corpus_text("catalog") == acx::lattice::catalog_json());
}

TEST_CASE("unknown corpus ids are rejected") {
  for (const char* id : {"nope", "", "acl2", "catalog.json"}) {
    CAPTURE(id);
    try {
      acx::corpus_text(id);
      FAIL_CHECK("expected an error for '" << id << "'");
    } catch (const acx::Error& e) {
      CHECK(e.code() == acx::ErrorCode::NotFound);
    }
  }
  CHECK_THROWS_AS(acx::builtin_system("acl-to-rbac"), acx::Error);
  CHECK_THROWS_AS(acx::builtin_mapping("acl"), acx::Error);
}

TEST_CASE("references resolve as ids or as paths") {
  TempCorpus tmp;

  const auto by_id = acx::resolve_system("acl");
  CHECK(by_id->name == "acl");

  const fs::path sys_path = tmp.write("plain-acl.json", acx::corpus_text("acl"));
  const auto by_path = acx::resolve_system(sys_path.string());
  CHECK(by_path->name == "acl");
  CHECK(acx::dump_canonical(acx::system_to_json(*by_path)) ==
        acx::dump_canonical(acx::system_to_json(*by_id)));

  const acx::MappingDef by_mapping_id = acx::resolve_mapping("identity-acl");
  CHECK(by_mapping_id.name == "identity-acl");

  const fs::path map_path =
      tmp.write("identity.json", acx::corpus_text("identity-acl"));
  const acx::MappingDef by_mapping_path = acx::resolve_mapping(map_path.string());
  CHECK(by_mapping_path.name == "identity-acl");
  CHECK(acx::dump_canonical(acx::mapping_to_json(by_mapping_path)) ==
        acx::dump_canonical(acx::mapping_to_json(by_mapping_id)));

  CHECK_THROWS_AS(acx::resolve_system((tmp.dir / "missing.json").string()),
                  acx::Error);
  CHECK_THROWS_AS(acx::mapping_from_file((tmp.dir / "missing.json").string()),
                  acx::Error);
}

TEST_CASE("a mapping file may reference its systems by relative path") {
  TempCorpus tmp;
  tmp.write("base.json", acx::corpus_text("acl"));

  nlohmann::json j = nlohmann::json::parse(acx::corpus_text("identity-acl"));
  j["source"] = "base.json";
  j["target"] = "base.json";
  const fs::path map_path = tmp.write("by-path.json", j.dump());

  const acx::MappingDef m = acx::mapping_from_file(map_path.string());
  CHECK(m.source->name == "acl");
  CHECK(m.target->name == "acl");
}

TEST_CASE("ACX_CORPUS overrides shipped files and falls back per file") {
  TempCorpus tmp;

  // Override acl.json with a renamed copy; leave everything else shipped.
  nlohmann::json j = nlohmann::json::parse(acx::corpus_text("acl"));
  j["name"] = "acl-tweaked";
  tmp.write("acl.json", j.dump());
  tmp.activate();

  CHECK(acx::builtin_system("acl")->name == "acl-tweaked");
  // rbac.json is absent from the override directory: embedded copy wins.
  CHECK(acx::builtin_system("rbac")->name == "rbac");

  unsetenv("ACX_CORPUS");
  CHECK(acx::builtin_system("acl")->name == "acl");
}
