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
// JSON forms of systems, states and formulas. Serialization is canonical:
// object keys sorted, set-like arrays sorted, atoms rendered as strings
// ("u1", "role_of(u1)"), so equal values produce identical bytes.

#ifndef ACX_JSON_IO_HPP_
#define ACX_JSON_IO_HPP_

#include <string>

#include "json.hpp"

#include "acx/core.hpp"

namespace acx {

using Json = nlohmann::json;

Json atom_to_json(const Atom& a);
Atom atom_from_json(const Json& j);

Json term_to_json(const Term& t);
// `allow_make` rejects constructor terms where the grammar forbids them.
Term term_from_json(const Json& j, bool allow_make = true);

Json formula_to_json(const Formula& f);
// `mapping_expr` additionally admits Query and Distinct atoms.
Formula formula_from_json(const Json& j, bool mapping_expr = false);

Json state_to_json(const State& s);
State state_from_json(const Json& j);

Json system_to_json(const SystemDef& sys);
// Parses and validates; throws ValidationError / Error{Parse}.
ValidatedSystem system_from_json(const Json& j);
ValidatedSystem system_from_string(const std::string& text);
ValidatedSystem system_from_file(const std::string& path);

Json ground_to_json(const Ground& g);
Ground ground_from_json(const Json& j);

std::string dump_canonical(const Json& j);  // 2-space indent, sorted keys

}  // namespace acx

#endif  // ACX_JSON_IO_HPP_
