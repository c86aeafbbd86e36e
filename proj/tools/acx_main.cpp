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
// Command line front end. Everything goes through the C API in acx/acx.h;
// exit codes: 0 all requested checks pass, 1 a check fails, 2 bad input or
// an undecidable request.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "acx/acx.h"

namespace {

// Owns a string returned by the C API.
struct CStr {
  char* p = nullptr;
  ~CStr() { acx_string_free(p); }
  std::string str() const { return p ? p : ""; }
  char** slot() { return &p; }
};

int exit_code(acx_status st) {
  switch (st) {
    case ACX_OK:
      return 0;
    case ACX_ERR_CHECK_FAILED:
      return 1;
    default:
      return 2;
  }
}

void print_diag(const CStr& diag, bool failure) {
  if (!diag.p || diag.str().empty()) {
    if (failure) std::cerr << "error: unspecified failure\n";
    return;
  }
  std::cerr << (failure ? "error: " : "warning: ") << diag.str() << "\n";
}

using SystemPtr = std::unique_ptr<acx_system, decltype(&acx_system_free)>;
using MappingPtr = std::unique_ptr<acx_mapping, decltype(&acx_mapping_free)>;

SystemPtr make_system(acx_system* s) { return SystemPtr(s, &acx_system_free); }
MappingPtr make_mapping(acx_mapping* m) {
  return MappingPtr(m, &acx_mapping_free);
}

int run_validate(const std::string& ref) {
  CStr sys_diag;
  acx_system* sys = nullptr;
  acx_status st = acx_system_resolve(ref.c_str(), &sys, sys_diag.slot());
  if (st == ACX_OK) {
    auto owned = make_system(sys);
    print_diag(sys_diag, false);
    std::cout << "system '" << acx_system_name(sys) << "' is valid\n";
    return 0;
  }
  CStr map_diag;
  acx_mapping* map = nullptr;
  if (acx_mapping_resolve(ref.c_str(), &map, map_diag.slot()) == ACX_OK) {
    auto owned = make_mapping(map);
    print_diag(map_diag, false);
    std::cout << "mapping '" << acx_mapping_name(map) << "' is valid\n";
    return 0;
  }
  print_diag(sys_diag.p ? sys_diag : map_diag, true);
  return exit_code(st);
}

int run_explore(const std::string& ref, const std::string& bound, bool json) {
  CStr diag;
  acx_system* sys = nullptr;
  acx_status st = acx_system_resolve(ref.c_str(), &sys, diag.slot());
  if (st != ACX_OK) {
    print_diag(diag, true);
    return exit_code(st);
  }
  auto owned = make_system(sys);
  CStr out;
  CStr ediag;
  st = acx_explore(sys, bound.empty() ? nullptr : bound.c_str(), out.slot(),
                   ediag.slot());
  if (st != ACX_OK) {
    print_diag(ediag, true);
    return exit_code(st);
  }
  if (json) {
    std::cout << out.str();
    return 0;
  }
  // Compact summary: pull the scalar fields out of the JSON by hand so the
  // front end stays independent of any JSON library.
  std::string text = out.str();
  auto field = [&](const std::string& key) -> std::string {
    auto pos = text.find("\"" + key + "\":");
    if (pos == std::string::npos) return "?";
    pos += key.size() + 3;
    while (pos < text.size() && text[pos] == ' ') ++pos;
    std::string v;
    if (pos < text.size() && text[pos] == '"') {
      ++pos;
      while (pos < text.size() && text[pos] != '"') v += text[pos++];
      return v;
    }
    while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' &&
           text[pos] != '}') {
      v += text[pos++];
    }
    return v;
  };
  std::cout << "system " << acx_system_name(sys) << ": " << field("states")
            << " state(s), " << field("edges") << " edge(s) at bound "
            << field("bound") << (field("truncated") == "true"
                                      ? " [truncated]\n"
                                      : "\n");
  return 0;
}

int run_check(const std::string& ref, const std::string& identity_ref,
              const std::string& props, const std::string& bound, bool json,
              const std::string& report_path) {
  acx_mapping* map = nullptr;
  CStr diag;
  acx_status st;
  if (!identity_ref.empty()) {
    acx_system* sys = nullptr;
    st = acx_system_resolve(identity_ref.c_str(), &sys, diag.slot());
    if (st != ACX_OK) {
      print_diag(diag, true);
      return exit_code(st);
    }
    auto owned = make_system(sys);
    CStr mdiag;
    st = acx_mapping_identity(sys, &map, mdiag.slot());
    if (st != ACX_OK) {
      print_diag(mdiag, true);
      return exit_code(st);
    }
  } else {
    st = acx_mapping_resolve(ref.c_str(), &map, diag.slot());
    if (st != ACX_OK) {
      print_diag(diag, true);
      return exit_code(st);
    }
    print_diag(diag, false);
  }
  auto owned = make_mapping(map);

  CStr report;
  CStr cdiag;
  st = acx_check(map, props.empty() ? "all" : props.c_str(),
                 bound.empty() ? nullptr : bound.c_str(), report.slot(),
                 cdiag.slot());
  if (!report.p) {
    print_diag(cdiag, true);
    return exit_code(st);
  }
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    out << report.str();
    if (!out) {
      std::cerr << "error: cannot write '" << report_path << "'\n";
      return 2;
    }
  }
  if (json) {
    std::cout << report.str();
  } else {
    CStr text;
    CStr tdiag;
    if (acx_report_text(report.p, text.slot(), tdiag.slot()) == ACX_OK) {
      std::cout << text.str();
    } else {
      print_diag(tdiag, true);
      return 2;
    }
  }
  return exit_code(st);
}

int run_replay(const std::string& ref, const std::string& report_path) {
  CStr diag;
  acx_mapping* map = nullptr;
  acx_status st = acx_mapping_resolve(ref.c_str(), &map, diag.slot());
  if (st != ACX_OK) {
    print_diag(diag, true);
    return exit_code(st);
  }
  auto owned = make_mapping(map);
  std::ifstream in(report_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << report_path << "'\n";
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  int ok = 0;
  CStr rdiag;
  st = acx_replay(map, buf.str().c_str(), &ok, rdiag.slot());
  if (st != ACX_OK) {
    print_diag(rdiag, true);
    return exit_code(st);
  }
  if (ok) {
    std::cout << "every counterexample reproduces\n";
    return 0;
  }
  print_diag(rdiag, true);
  return 1;
}

int run_report(const std::string& report_path) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << report_path << "'\n";
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  CStr text;
  CStr diag;
  acx_status st = acx_report_text(buf.str().c_str(), text.slot(), diag.slot());
  if (st != ACX_OK) {
    print_diag(diag, true);
    return exit_code(st);
  }
  std::cout << text.str();
  return 0;
}

// A scheme name resolves through the catalog; anything else is read as a
// tag list.
bool resolve_tag_set(const std::string& arg, bool canonical, std::string* out,
                     int* code) {
  CStr tags;
  CStr diag;
  acx_status st =
      canonical ? acx_lattice_canonical(arg.c_str(), tags.slot(), diag.slot())
                : acx_lattice_decompose(arg.c_str(), tags.slot(), diag.slot());
  if (st == ACX_OK) {
    *out = tags.str();
    return true;
  }
  if (canonical && st == ACX_ERR_NOT_FOUND && arg.find(',') == std::string::npos &&
      acx_lattice_implies(arg.c_str(), arg.c_str()) != 1) {
    // Canonical lookup failed for a real scheme name: surface the message.
    print_diag(diag, true);
    *code = 2;
    return false;
  }
  if (acx_lattice_implies(arg.c_str(), arg.c_str()) == 1 ||
      arg.find(',') != std::string::npos || arg.find(' ') != std::string::npos) {
    *out = arg;  // a tag list
    return true;
  }
  print_diag(diag, true);
  *code = 2;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"access control expressiveness workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(acx_version()));

  std::string ref;
  std::string bound;
  std::string props;
  std::string identity_ref;
  std::string report_path;
  std::string arg_a;
  std::string arg_b;
  bool as_json = false;
  bool canonical = false;
  bool all_entries = false;

  auto* validate = app.add_subcommand("validate", "validate a system or mapping");
  validate->add_option("ref", ref, "file path or built-in id")->required();

  auto* explore = app.add_subcommand("explore", "bounded reachability of a system");
  explore->add_option("system", ref, "file path or built-in id")->required();
  explore->add_option("--bound", bound, "atoms,fresh,depth (default 2,1,6)");
  explore->add_flag("--json", as_json, "emit the full JSON result");

  auto* check = app.add_subcommand("check", "check simulation properties of a mapping");
  check->add_option("mapping", ref, "mapping file or built-in id");
  check->add_option("--identity", identity_ref,
                    "check the identity mapping of this system instead");
  check->add_option("--props", props, "comma-separated tags, or 'all'");
  check->add_option("--bound", bound, "atoms,fresh,depth (default 2,1,6)");
  check->add_option("--report", report_path, "also write the JSON report here");
  check->add_flag("--json", as_json, "print the JSON report instead of text");

  auto* replay = app.add_subcommand("replay", "re-execute a report's counterexamples");
  replay->add_option("mapping", ref, "mapping file or built-in id")->required();
  replay->add_option("report", report_path, "report JSON file")->required();

  auto* report = app.add_subcommand("report", "render a saved JSON report as text");
  report->add_option("report", report_path, "report JSON file")->required();

  auto* lattice = app.add_subcommand("lattice", "query the property lattice");
  lattice->require_subcommand(1);

  auto* decompose = lattice->add_subcommand(
      "decompose", "published property decomposition of a simulation");
  decompose->add_option("simulation", arg_a, "scheme name, e.g. ALS");
  decompose->add_flag("--all", all_entries, "list every catalog entry");
  decompose->add_flag("--json", as_json, "emit the machine-readable catalog");

  auto* canonical_cmd = lattice->add_subcommand(
      "canonical", "property set of a simulation's canonical usage");
  canonical_cmd->add_option("simulation", arg_a, "scheme name")->required();

  auto* compare = lattice->add_subcommand(
      "compare", "dominance between two schemes or tag sets");
  compare->add_option("left", arg_a, "scheme name or tag list")->required();
  compare->add_option("right", arg_b, "scheme name or tag list")->required();
  compare->add_flag("--canonical", canonical,
                    "compare canonical usage instead of decompositions");

  auto* closure_cmd = lattice->add_subcommand(
      "closure", "every property level a tag set implies");
  closure_cmd->add_option("tags", arg_a, "tag list")->required();

  CLI11_PARSE(app, argc, argv);

  if (*validate) return run_validate(ref);
  if (*explore) return run_explore(ref, bound, as_json);
  if (*check) {
    if (ref.empty() && identity_ref.empty()) {
      std::cerr << "error: check needs a mapping or --identity <system>\n";
      return 2;
    }
    return run_check(ref, identity_ref, props, bound, as_json, report_path);
  }
  if (*replay) return run_replay(ref, report_path);
  if (*report) return run_report(report_path);

  if (*decompose) {
    if (as_json) {
      CStr json;
      if (acx_catalog_json(json.slot()) != ACX_OK) return 2;
      std::cout << json.str() << "\n";
      return 0;
    }
    if (all_entries) {
      for (const char* name :
           {"ALS", "CDMw", "CDMs", "Ganta", "HMG+", "HMG+a", "HMG+s", "HMG+p",
            "SMG", "TL-SMR"}) {
        CStr tags;
        CStr diag;
        if (acx_lattice_decompose(name, tags.slot(), diag.slot()) != ACX_OK) {
          print_diag(diag, true);
          return 2;
        }
        std::cout << name << ": " << tags.str() << "\n";
      }
      return 0;
    }
    if (arg_a.empty()) {
      std::cerr << "error: decompose needs a simulation name or --all\n";
      return 2;
    }
    CStr tags;
    CStr diag;
    acx_status st = acx_lattice_decompose(arg_a.c_str(), tags.slot(), diag.slot());
    if (st != ACX_OK) {
      print_diag(diag, true);
      return exit_code(st);
    }
    std::cout << tags.str() << "\n";
    return 0;
  }

  if (*canonical_cmd) {
    CStr tags;
    CStr diag;
    acx_status st = acx_lattice_canonical(arg_a.c_str(), tags.slot(), diag.slot());
    if (st != ACX_OK) {
      print_diag(diag, true);
      return exit_code(st);
    }
    std::cout << tags.str() << "\n";
    return 0;
  }

  if (*compare) {
    std::string left;
    std::string right;
    int code = 2;
    if (!resolve_tag_set(arg_a, canonical, &left, &code)) return code;
    if (!resolve_tag_set(arg_b, canonical, &right, &code)) return code;
    CStr result;
    CStr diag;
    acx_status st = acx_lattice_compare(left.c_str(), right.c_str(),
                                        result.slot(), diag.slot());
    if (st != ACX_OK) {
      print_diag(diag, true);
      return exit_code(st);
    }
    std::cout << result.str() << "\n";
    return 0;
  }

  if (*closure_cmd) {
    CStr tags;
    CStr diag;
    acx_status st = acx_lattice_closure(arg_a.c_str(), tags.slot(), diag.slot());
    if (st != ACX_OK) {
      print_diag(diag, true);
      return exit_code(st);
    }
    std::cout << tags.str() << "\n";
    return 0;
  }

  return 2;
}
