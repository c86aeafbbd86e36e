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
// Fixture systems and mappings shared by the unit suites. Everything is
// plain JSON run through the normal loaders, so the fixtures double as
// parser exercise.

#ifndef ACX_TESTS_SUPPORT_HPP_
#define ACX_TESTS_SUPPORT_HPP_

#include <memory>
#include <string>

#include "acx/corpus.hpp"
#include "acx/explore.hpp"
#include "acx/json_io.hpp"
#include "acx/mapping.hpp"
#include "acx/props.hpp"

namespace acx::testing {

inline std::shared_ptr<const SystemDef> system_of(const std::string& text) {
  return std::make_shared<const SystemDef>(system_from_string(text).def);
}

inline MappingDef mapping_of(const std::string& text,
                             std::shared_ptr<const SystemDef> src,
                             std::shared_ptr<const SystemDef> tgt) {
  return mapping_from_json(Json::parse(text), std::move(src), std::move(tgt));
}

inline CheckResult run_one(const MappingDef& m, Tag tag,
                           const RunBound& rb = RunBound{}) {
  Tag corr = tag_dimension(tag) == Dimension::SC ? tag : Tag::SCa;
  SimulationDef sim{&m, corr};
  Context ctx = build_context(sim, rb);
  return check_tag(ctx, tag);
}

// One sort, one visible relation, one hidden relation. The only query reads
// Pub, so states differing in Hid alone are theory-equal.
inline std::shared_ptr<const SystemDef> hidden_bit_target() {
  return system_of(R"({
    "name": "hidden",
    "sorts": ["X"],
    "relations": {"Pub": ["X"], "Hid": ["X"]},
    "queries": [
      {"name": "q", "params": [["x", "X"]], "request": true,
       "body": {"member": ["Pub", "x"]}}
    ],
    "commands": [
      {"name": "addPub", "params": [["x", "X"]], "actor": 0, "guard": true,
       "effects": [{"add": ["Pub", "x"]}]},
      {"name": "addHid", "params": [["x", "X"]], "actor": 0, "guard": true,
       "effects": [{"add": ["Hid", "x"]}]}
    ],
    "init": {}
  })");
}

// Matching one-relation source for mappings onto hidden_bit_target.
inline std::shared_ptr<const SystemDef> plain_source() {
  return system_of(R"({
    "name": "plain",
    "sorts": ["X"],
    "relations": {"S": ["X"]},
    "queries": [
      {"name": "q", "params": [["x", "X"]], "request": true,
       "body": {"member": ["S", "x"]}}
    ],
    "commands": [
      {"name": "touch", "params": [["x", "X"]], "actor": 0, "guard": true,
       "effects": [{"add": ["S", "x"]}]}
    ],
    "init": {}
  })");
}

// Identity-shaped state and query rules for plain_source -> hidden target.
inline const char* kPlainToHiddenBase = R"(
    "state_rules": [
      {"match": [{"sort": "X", "var": "x"}],
       "emit": [{"universe": ["X", "x"]}]},
      {"match": [{"relation": "S", "args": ["x"]}],
       "emit": [{"tuple": ["Pub", "x"]}]}
    ],
    "query_rules": [
      {"query": "q", "params": ["x"], "decide": {"formula": {"query": ["q", "x"]}}}
    ]
)";

}  // namespace acx::testing

#endif  // ACX_TESTS_SUPPORT_HPP_
