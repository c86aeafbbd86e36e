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

#include "acx/acx.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "acx/corpus.hpp"
#include "acx/props.hpp"

struct acx_system {
  std::shared_ptr<const acx::SystemDef> def;
};

struct acx_mapping {
  acx::MappingDef def;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** slot, const std::string& s) {
  if (slot) *slot = dup_string(s);
}

std::string issues_text(const std::vector<acx::ValidationIssue>& issues) {
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += "\n";
    out += i.str();
  }
  return out;
}

acx_status status_of(const acx::Error& e) {
  switch (e.code()) {
    case acx::ErrorCode::Parse:
      return ACX_ERR_PARSE;
    case acx::ErrorCode::NotFound:
    case acx::ErrorCode::UnknownSimulation:
    case acx::ErrorCode::NoCanonicalData:
      return ACX_ERR_NOT_FOUND;
    case acx::ErrorCode::UnknownTag:
      return ACX_ERR_BAD_ARGUMENT;
    default:
      return ACX_ERR_VALIDATION;
  }
}

// Wraps a body returning acx_status; converts exceptions to statuses and
// routes their text to the diagnostics slot.
template <typename F>
acx_status guarded(char** diagnostics, F&& body) {
  if (diagnostics) *diagnostics = nullptr;
  try {
    return body();
  } catch (const acx::ValidationError& e) {
    put(diagnostics, issues_text(e.issues()));
    return ACX_ERR_VALIDATION;
  } catch (const acx::Error& e) {
    put(diagnostics, e.what());
    return status_of(e);
  } catch (const std::exception& e) {
    put(diagnostics, e.what());
    return ACX_ERR_INTERNAL;
  }
}

bool parse_bound(const char* text, acx::RunBound* out) {
  if (!text) return true;  // keep default
  acx::RunBound b;
  unsigned long a = 0, s = 0, d = 0;
  char extra = 0;
  if (std::sscanf(text, "%lu,%lu,%lu%c", &a, &s, &d, &extra) != 3) return false;
  b.atoms_per_sort = a;
  b.max_new_atoms = s;
  b.max_depth = d;
  *out = b;
  return true;
}

bool parse_tag_list(const std::string& text, std::vector<acx::Tag>* out,
                    std::string* bad) {
  std::string cur;
  auto flush = [&]() {
    if (cur.empty()) return true;
    auto t = acx::parse_tag(cur);
    if (!t) {
      *bad = cur;
      return false;
    }
    out->push_back(*t);
    cur.clear();
    return true;
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n') {
      if (!flush()) return false;
    } else {
      cur += c;
    }
  }
  return flush();
}

acx_status load_props(const char* props, std::vector<acx::Tag>* out,
                      char** diagnostics) {
  if (!props || std::string(props) == "all") {
    *out = acx::checkable_tags();
    return ACX_OK;
  }
  std::string bad;
  if (!parse_tag_list(props, out, &bad) || out->empty()) {
    put(diagnostics, out->empty() && bad.empty()
                         ? "empty property list"
                         : "unknown property tag '" + bad + "'");
    return ACX_ERR_BAD_ARGUMENT;
  }
  return ACX_OK;
}

acx_status load_set(const char* text, acx::lattice::PropertySet* out,
                    char** diagnostics) {
  std::vector<acx::Tag> tags;
  acx_status st = load_props(text, &tags, diagnostics);
  if (st != ACX_OK) return st;
  out->insert(tags.begin(), tags.end());
  return ACX_OK;
}

acx_status report_status(const acx::Report& rep) {
  bool inapplicable = false;
  for (const auto& r : rep.results) {
    if (r.verdict == acx::Verdict::Fails ||
        (r.verdict == acx::Verdict::Evidence && !r.evidence_holds)) {
      return ACX_ERR_CHECK_FAILED;
    }
    if (r.verdict == acx::Verdict::Inapplicable) inapplicable = true;
  }
  return inapplicable ? ACX_ERR_INAPPLICABLE : ACX_OK;
}

}  // namespace

extern "C" {

void acx_string_free(char* s) { std::free(s); }

const char* acx_version(void) { return "1.0.0"; }

/* ---- systems ---- */

acx_status acx_system_from_json(const char* json_text, acx_system** out,
                                char** diagnostics) {
  if (!json_text || !out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    acx::ValidatedSystem vs = acx::system_from_string(json_text);
    if (!vs.warnings.empty()) put(diagnostics, issues_text(vs.warnings));
    *out = new acx_system{
        std::make_shared<const acx::SystemDef>(std::move(vs.def))};
    return ACX_OK;
  });
}

acx_status acx_system_from_file(const char* path, acx_system** out,
                                char** diagnostics) {
  if (!path || !out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    acx::ValidatedSystem vs = acx::system_from_file(path);
    if (!vs.warnings.empty()) put(diagnostics, issues_text(vs.warnings));
    *out = new acx_system{
        std::make_shared<const acx::SystemDef>(std::move(vs.def))};
    return ACX_OK;
  });
}

acx_status acx_system_builtin(const char* id, acx_system** out,
                              char** diagnostics) {
  if (!id || !out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    *out = new acx_system{acx::builtin_system(id)};
    return ACX_OK;
  });
}

acx_status acx_system_resolve(const char* ref, acx_system** out,
                              char** diagnostics) {
  if (!ref || !out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    *out = new acx_system{acx::resolve_system(ref)};
    return ACX_OK;
  });
}

acx_status acx_system_to_json(const acx_system* sys, char** json_out) {
  if (!sys || !json_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(nullptr, [&] {
    put(json_out, acx::dump_canonical(acx::system_to_json(*sys->def)));
    return ACX_OK;
  });
}

const char* acx_system_name(const acx_system* sys) {
  return sys ? sys->def->name.c_str() : nullptr;
}

void acx_system_free(acx_system* sys) { delete sys; }

acx_status acx_explore(const acx_system* sys, const char* bound,
                       char** json_out, char** diagnostics) {
  if (!sys || !json_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    acx::RunBound rb;
    if (!parse_bound(bound, &rb)) {
      put(diagnostics, "bound must be 'atoms,fresh,depth'");
      return ACX_ERR_BAD_ARGUMENT;
    }
    acx::State start = acx::seed_state(*sys->def, rb.atoms_per_sort);
    acx::ReachSet reach = acx::reachable(*sys->def, start, rb.bound());
    acx::Json j;
    j["system"] = sys->def->name;
    j["bound"] = rb.str();
    j["states"] = reach.states.size();
    j["edges"] = reach.edges.size();
    j["truncated"] = reach.truncated;
    acx::Json arr = acx::Json::array();
    for (const auto& s : reach.states) arr.push_back(acx::state_to_json(s));
    j["state_list"] = std::move(arr);
    put(json_out, acx::dump_canonical(j));
    return ACX_OK;
  });
}

/* ---- mappings ---- */

acx_status acx_mapping_from_file(const char* path, acx_mapping** out,
                                 char** diagnostics) {
  if (!path || !out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    std::vector<acx::ValidationIssue> warnings;
    acx::MappingDef m = acx::mapping_from_file(path, &warnings);
    if (!warnings.empty()) put(diagnostics, issues_text(warnings));
    *out = new acx_mapping{std::move(m)};
    return ACX_OK;
  });
}

acx_status acx_mapping_builtin(const char* id, acx_mapping** out,
                               char** diagnostics) {
  if (!id || !out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    *out = new acx_mapping{acx::builtin_mapping(id)};
    return ACX_OK;
  });
}

acx_status acx_mapping_resolve(const char* ref, acx_mapping** out,
                               char** diagnostics) {
  if (!ref || !out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    *out = new acx_mapping{acx::resolve_mapping(ref)};
    return ACX_OK;
  });
}

acx_status acx_mapping_identity(const acx_system* sys, acx_mapping** out,
                                char** diagnostics) {
  if (!sys || !out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    *out = new acx_mapping{acx::identity_mapping(sys->def)};
    return ACX_OK;
  });
}

acx_status acx_mapping_to_json(const acx_mapping* m, char** json_out) {
  if (!m || !json_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(nullptr, [&] {
    put(json_out, acx::dump_canonical(acx::mapping_to_json(m->def)));
    return ACX_OK;
  });
}

const char* acx_mapping_name(const acx_mapping* m) {
  return m ? m->def.name.c_str() : nullptr;
}

void acx_mapping_free(acx_mapping* m) { delete m; }

/* ---- property checking ---- */

acx_status acx_check(const acx_mapping* m, const char* props,
                     const char* bound, char** report_out,
                     char** diagnostics) {
  if (!m || !report_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    std::vector<acx::Tag> tags;
    acx_status st = load_props(props, &tags, diagnostics);
    if (st != ACX_OK) return st;
    acx::RunBound rb;
    if (!parse_bound(bound, &rb)) {
      put(diagnostics, "bound must be 'atoms,fresh,depth'");
      return ACX_ERR_BAD_ARGUMENT;
    }
    acx::Report rep = acx::check_property_set(m->def, rb, tags);
    put(report_out, acx::dump_canonical(acx::report_to_json(rep)));
    return report_status(rep);
  });
}

acx_status acx_report_text(const char* report_json, char** text_out,
                           char** diagnostics) {
  if (!report_json || !text_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    acx::Json j;
    try {
      j = acx::Json::parse(report_json);
    } catch (const acx::Json::parse_error& e) {
      put(diagnostics, e.what());
      return ACX_ERR_PARSE;
    }
    put(text_out, acx::report_text(acx::report_from_json(j)));
    return ACX_OK;
  });
}

acx_status acx_replay(const acx_mapping* m, const char* report_json,
                      int* ok_out, char** diagnostics) {
  if (!m || !report_json || !ok_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    acx::Json j;
    try {
      j = acx::Json::parse(report_json);
    } catch (const acx::Json::parse_error& e) {
      put(diagnostics, e.what());
      return ACX_ERR_PARSE;
    }
    acx::Report rep = acx::report_from_json(j);
    bool all = true;
    std::string failed;
    for (const auto& r : rep.results) {
      if (r.verdict != acx::Verdict::Fails) continue;
      if (!acx::replay(m->def, r)) {
        all = false;
        if (!failed.empty()) failed += ", ";
        failed += acx::tag_ascii(r.property);
      }
    }
    *ok_out = all ? 1 : 0;
    if (!all) put(diagnostics, "counterexamples did not reproduce: " + failed);
    return ACX_OK;
  });
}

/* ---- property lattice ---- */

int acx_lattice_implies(const char* a, const char* b) {
  if (!a || !b) return -1;
  auto ta = acx::parse_tag(a);
  auto tb = acx::parse_tag(b);
  if (!ta || !tb) return -1;
  return acx::lattice::implies(*ta, *tb) ? 1 : 0;
}

acx_status acx_lattice_decompose(const char* simulation, char** tags_out,
                                 char** diagnostics) {
  if (!simulation || !tags_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    const acx::lattice::CatalogEntry& e = acx::lattice::catalog_entry(simulation);
    put(tags_out, acx::lattice::tags_text(e.decomposition));
    return ACX_OK;
  });
}

acx_status acx_lattice_canonical(const char* simulation, char** tags_out,
                                 char** diagnostics) {
  if (!simulation || !tags_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    const acx::lattice::CatalogEntry& e = acx::lattice::catalog_entry(simulation);
    if (!e.canonical) {
      throw acx::Error(acx::ErrorCode::NoCanonicalData,
                       "the surveyed sources report no canonical usage for '" +
                           e.name + "'");
    }
    put(tags_out, acx::lattice::tags_text(*e.canonical));
    return ACX_OK;
  });
}

acx_status acx_lattice_closure(const char* tags, char** tags_out,
                               char** diagnostics) {
  if (!tags || !tags_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    acx::lattice::PropertySet p;
    acx_status st = load_set(tags, &p, diagnostics);
    if (st != ACX_OK) return st;
    put(tags_out, acx::lattice::set_text(acx::lattice::closure(p)));
    return ACX_OK;
  });
}

acx_status acx_lattice_compare(const char* tags_a, const char* tags_b,
                               char** ordering_out, char** diagnostics) {
  if (!tags_a || !tags_b || !ordering_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(diagnostics, [&] {
    acx::lattice::PropertySet a;
    acx::lattice::PropertySet b;
    acx_status st = load_set(tags_a, &a, diagnostics);
    if (st != ACX_OK) return st;
    st = load_set(tags_b, &b, diagnostics);
    if (st != ACX_OK) return st;
    put(ordering_out,
        acx::lattice::ordering_name(acx::lattice::compare_sets(a, b)));
    return ACX_OK;
  });
}

acx_status acx_catalog_json(char** json_out) {
  if (!json_out) return ACX_ERR_BAD_ARGUMENT;
  return guarded(nullptr, [&] {
    put(json_out, acx::lattice::catalog_json());
    return ACX_OK;
  });
}

}  // extern "C"
