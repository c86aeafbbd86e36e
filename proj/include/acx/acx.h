/* Copyright (c) 2026, the acx authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * C interface to the access-control expressiveness workbench. Handles are
 * opaque; every fallible call returns an acx_status and, where a char**
 * diagnostics parameter is given, a malloc'd message the caller releases
 * with acx_string_free. Diagnostics carry warnings on success and the error
 * text on failure; pass NULL to discard them.
 */

#ifndef ACX_ACX_H_
#define ACX_ACX_H_

#include <stddef.h>

#if defined(_WIN32)
#define ACX_API __declspec(dllexport)
#elif defined(__GNUC__)
#define ACX_API __attribute__((visibility("default")))
#else
#define ACX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct acx_system acx_system;
typedef struct acx_mapping acx_mapping;

typedef enum acx_status {
  ACX_OK = 0,
  ACX_ERR_PARSE = 1,        /* malformed input text */
  ACX_ERR_VALIDATION = 2,   /* well-formed but ill-typed definitions */
  ACX_ERR_NOT_FOUND = 3,    /* unknown id, file, or simulation name */
  ACX_ERR_CHECK_FAILED = 4, /* some requested property does not pass */
  ACX_ERR_INAPPLICABLE = 5, /* some requested property cannot be decided */
  ACX_ERR_BAD_ARGUMENT = 6, /* NULL handle, bad tag list, bad bound */
  ACX_ERR_INTERNAL = 7
} acx_status;

/* Releases a string returned through any char** out parameter. */
ACX_API void acx_string_free(char* s);

ACX_API const char* acx_version(void);

/* ---- systems ------------------------------------------------------------ */

ACX_API acx_status acx_system_from_json(const char* json_text,
                                        acx_system** out, char** diagnostics);
ACX_API acx_status acx_system_from_file(const char* path, acx_system** out,
                                        char** diagnostics);
/* Built-in ids: "acl", "rbac", "acl-transfer". */
ACX_API acx_status acx_system_builtin(const char* id, acx_system** out,
                                      char** diagnostics);
/* Resolves a built-in id or a file path. */
ACX_API acx_status acx_system_resolve(const char* ref, acx_system** out,
                                      char** diagnostics);
ACX_API acx_status acx_system_to_json(const acx_system* sys, char** json_out);
/* Borrowed pointer, valid while the handle lives. */
ACX_API const char* acx_system_name(const acx_system* sys);
ACX_API void acx_system_free(acx_system* sys);

/* Bounded reachability from the seeded initial state. `bound` is
 * "atoms,fresh,depth" (NULL for the default 2,1,6). The JSON result lists
 * state and edge counts, the states, and whether the bound truncated. */
ACX_API acx_status acx_explore(const acx_system* sys, const char* bound,
                               char** json_out, char** diagnostics);

/* ---- mappings ------------------------------------------------------------ */

ACX_API acx_status acx_mapping_from_file(const char* path, acx_mapping** out,
                                         char** diagnostics);
/* Built-in ids: "acl-to-rbac", "identity-acl", "acl-transfer-clean",
 * "acl-transfer-contaminating". */
ACX_API acx_status acx_mapping_builtin(const char* id, acx_mapping** out,
                                       char** diagnostics);
/* Resolves a built-in id or a file path. */
ACX_API acx_status acx_mapping_resolve(const char* ref, acx_mapping** out,
                                       char** diagnostics);
/* The identity mapping of a system onto itself. */
ACX_API acx_status acx_mapping_identity(const acx_system* sys,
                                        acx_mapping** out, char** diagnostics);
ACX_API acx_status acx_mapping_to_json(const acx_mapping* m, char** json_out);
ACX_API const char* acx_mapping_name(const acx_mapping* m);
ACX_API void acx_mapping_free(acx_mapping* m);

/* ---- property checking ---------------------------------------------------- */

/* Runs the requested property levels against the mapping under bounded
 * exploration. `props` is a comma- or space-separated tag list ("SCa,QPa,
 * CS1,Rfwd"; unicode spellings also accepted) or "all"; `bound` as in
 * acx_explore. *report_out receives the JSON report whenever checking ran
 * (ACX_OK, ACX_ERR_CHECK_FAILED, ACX_ERR_INAPPLICABLE). */
ACX_API acx_status acx_check(const acx_mapping* m, const char* props,
                             const char* bound, char** report_out,
                             char** diagnostics);

/* Renders a JSON report as the human-readable table. */
ACX_API acx_status acx_report_text(const char* report_json, char** text_out,
                                   char** diagnostics);

/* Re-executes every failing counterexample in the report against the
 * mapping. *ok_out is 1 iff each one reproduces its violation. */
ACX_API acx_status acx_replay(const acx_mapping* m, const char* report_json,
                              int* ok_out, char** diagnostics);

/* ---- property lattice ------------------------------------------------------ */

/* 1 iff holding tag `a` guarantees holding tag `b`. -1 on unknown tags. */
ACX_API int acx_lattice_implies(const char* a, const char* b);

/* Published decomposition of a surveyed simulation ("ALS", "TL-SMR", ...)
 * as space-joined tags in the published order. */
ACX_API acx_status acx_lattice_decompose(const char* simulation,
                                         char** tags_out, char** diagnostics);

/* Property set of the simulation's canonical usage; ACX_ERR_NOT_FOUND with
 * an explanatory message when the surveyed sources report none. */
ACX_API acx_status acx_lattice_canonical(const char* simulation,
                                         char** tags_out, char** diagnostics);

/* Every property level the tag list implies, dimension-major. */
ACX_API acx_status acx_lattice_closure(const char* tags, char** tags_out,
                                       char** diagnostics);

/* Dominance between two tag lists: "Equal", "StrictlyStronger" (a over b),
 * "StrictlyWeaker", or "Incomparable". */
ACX_API acx_status acx_lattice_compare(const char* tags_a, const char* tags_b,
                                       char** ordering_out,
                                       char** diagnostics);

/* The survey catalog and implication rules as JSON. */
ACX_API acx_status acx_catalog_json(char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* ACX_ACX_H_ */
