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

#include "acx/corpus.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acx/json_io.hpp"
#include "corpus_data.hpp"

namespace acx {

namespace {

bool looks_like_path(const std::string& ref) {
  return ref.find('/') != std::string::npos ||
         ref.find('\\') != std::string::npos ||
         (ref.size() > 5 && ref.rfind(".json") == ref.size() - 5);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool is_one_of(const std::string& id, const std::vector<std::string>& ids) {
  for (const auto& i : ids) {
    if (i == id) return true;
  }
  return false;
}

// Resolves a mapping's source/target reference: a builtin system id, or a
// path taken relative to the mapping file's directory.
std::shared_ptr<const SystemDef> resolve_system_ref(const std::string& ref,
                                                    const std::string& base_dir) {
  if (!looks_like_path(ref) && is_one_of(ref, builtin_system_ids())) {
    return builtin_system(ref);
  }
  std::filesystem::path p(ref);
  if (p.is_relative() && !base_dir.empty()) {
    p = std::filesystem::path(base_dir) / p;
  }
  ValidatedSystem vs = system_from_file(p.string());
  return std::make_shared<const SystemDef>(std::move(vs.def));
}

MappingDef mapping_from_json_text(const std::string& text,
                                  const std::string& base_dir,
                                  const std::string& where,
                                  std::vector<ValidationIssue>* warnings) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, where + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
      !j["source"].is_string() || !j["target"].is_string()) {
    throw Error(ErrorCode::Parse,
                where + ": a mapping file needs 'source' and 'target' system "
                        "references");
  }
  auto source = resolve_system_ref(j["source"].get<std::string>(), base_dir);
  auto target = resolve_system_ref(j["target"].get<std::string>(), base_dir);
  return mapping_from_json(j, std::move(source), std::move(target), warnings);
}

}  // namespace

std::vector<std::string> builtin_system_ids() {
  return {"acl", "rbac", "acl-transfer"};
}

std::vector<std::string> builtin_mapping_ids() {
  return {"acl-to-rbac", "identity-acl", "acl-transfer-clean",
          "acl-transfer-contaminating"};
}

std::string corpus_text(const std::string& id) {
  if (const char* dir = std::getenv("ACX_CORPUS")) {
    if (auto text = read_file(std::string(dir) + "/" + id + ".json")) {
      return *text;
    }
  }
  for (std::size_t i = 0; i < detail::kCorpusFileCount; ++i) {
    if (id == detail::kCorpusFiles[i].id) return detail::kCorpusFiles[i].text;
  }
  throw Error(ErrorCode::NotFound, "no corpus entry named '" + id + "'");
}

std::shared_ptr<const SystemDef> builtin_system(const std::string& id) {
  if (!is_one_of(id, builtin_system_ids())) {
    throw Error(ErrorCode::NotFound, "no built-in system named '" + id + "'");
  }
  ValidatedSystem vs = system_from_string(corpus_text(id));
  return std::make_shared<const SystemDef>(std::move(vs.def));
}

MappingDef builtin_mapping(const std::string& id) {
  if (!is_one_of(id, builtin_mapping_ids())) {
    throw Error(ErrorCode::NotFound, "no built-in mapping named '" + id + "'");
  }
  return mapping_from_json_text(corpus_text(id), "", "mapping '" + id + "'",
                                nullptr);
}

MappingDef mapping_from_file(const std::string& path,
                             std::vector<ValidationIssue>* warnings) {
  auto text = read_file(path);
  if (!text) throw Error(ErrorCode::NotFound, "cannot read '" + path + "'");
  std::string dir = std::filesystem::path(path).parent_path().string();
  return mapping_from_json_text(*text, dir, path, warnings);
}

std::shared_ptr<const SystemDef> resolve_system(const std::string& ref) {
  if (!looks_like_path(ref) && is_one_of(ref, builtin_system_ids())) {
    return builtin_system(ref);
  }
  ValidatedSystem vs = system_from_file(ref);
  return std::make_shared<const SystemDef>(std::move(vs.def));
}

MappingDef resolve_mapping(const std::string& ref) {
  if (!looks_like_path(ref) && is_one_of(ref, builtin_mapping_ids())) {
    return builtin_mapping(ref);
  }
  return mapping_from_file(ref);
}

}  // namespace acx
