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
// The built-in corpus: small well-known systems and the mappings between
// them that exercise every checker. The JSON shipped under corpus/ is
// compiled in; ACX_CORPUS overrides it with a directory of the same files.

#ifndef ACX_CORPUS_HPP_
#define ACX_CORPUS_HPP_

#include <memory>
#include <string>
#include <vector>

#include "acx/mapping.hpp"

namespace acx {

// "acl", "rbac", "acl-transfer"
std::vector<std::string> builtin_system_ids();

// "acl-to-rbac", "identity-acl", "acl-transfer-clean",
// "acl-transfer-contaminating"
std::vector<std::string> builtin_mapping_ids();

// Throws Error{NotFound} for unknown ids.
std::shared_ptr<const SystemDef> builtin_system(const std::string& id);
MappingDef builtin_mapping(const std::string& id);

// Raw JSON text of a corpus file ("acl" -> contents of acl.json), honoring
// ACX_CORPUS. Throws Error{NotFound}.
std::string corpus_text(const std::string& id);

// Loads a mapping file, resolving its source/target references as corpus
// ids or as paths relative to the mapping file's directory.
MappingDef mapping_from_file(const std::string& path,
                             std::vector<ValidationIssue>* warnings = nullptr);

// Resolves an argument that may be a file path or a builtin id.
std::shared_ptr<const SystemDef> resolve_system(const std::string& ref);
MappingDef resolve_mapping(const std::string& ref);

}  // namespace acx

#endif  // ACX_CORPUS_HPP_
