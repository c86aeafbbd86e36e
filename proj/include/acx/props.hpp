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
// One checker per property dimension. Verdicts are explicit about their
// strength: Holds is relative to the bound, Fails always carries a
// counterexample that replays, Evidence is a statistical claim and never
// upgrades to Holds, Inapplicable is distinct from failure.

#ifndef ACX_PROPS_HPP_
#define ACX_PROPS_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acx/explore.hpp"
#include "acx/json_io.hpp"
#include "acx/lattice.hpp"

namespace acx {

enum class Verdict { Holds, Fails, Evidence, Inapplicable };

std::string verdict_name(Verdict v, bool evidence_holds);

// A replayable witness. `kind` selects the replay procedure; the state /
// command / trace fields carry exactly what re-execution needs.
struct Counterexample {
  std::string kind;
  std::optional<State> source_state;
  std::optional<State> target_state;
  std::optional<State> target_state2;   // distinguishing pairs
  std::optional<Ground> command;        // ground source command
  std::vector<Ground> trace;            // emitted target commands
  std::optional<Ground> target_command; // native target step (reachability)
  std::optional<std::string> instance;  // query/request instance at issue
  std::optional<std::size_t> index;     // failing trace position (1-based)
  std::optional<Ground> query;          // ground query/request instance
  std::optional<Tag> correspondence;    // level corresponds() ran at
  std::string detail;                   // human-readable reason

  bool operator==(const Counterexample&) const = default;
};

struct Sample {
  double size = 0;
  double value = 0;

  bool operator==(const Sample&) const = default;
};

struct CheckResult {
  Tag property = Tag::SCa;
  Verdict verdict = Verdict::Holds;
  bool evidence_holds = false;       // Evidence only
  RunBound bound;
  std::optional<Counterexample> counterexample;
  std::vector<Sample> samples;             // Evidence / storage fits
  std::map<std::string, double> fitted;    // "c", "k", "degree", "max" ...
  CostCounter stats;
  std::vector<std::string> notes;          // BoundTooSmall etc.

  bool passed() const {
    return verdict == Verdict::Holds ||
           (verdict == Verdict::Evidence && evidence_holds);
  }
};

// --- individual checkers ----------------------------------------------------
// Each takes the shared exploration context; `level` picks the dimension's
// level under test. Checkers for trivially unconstrained levels (SSinf, CDs,
// CCinf, CSinf, QDs, QCinf) return Holds without work.

CheckResult check_correspondence(Context& ctx, Tag level);       // SCs/SCq/SCa
CheckResult check_storage(Context& ctx, Tag level);              // SSl/SSp
CheckResult check_command_dependence(Context& ctx, Tag level);   // CDi/CDt
CheckResult check_command_complexity(Context& ctx, Tag level);   // CCc/CCl
CheckResult check_stuttering(Context& ctx, Tag level);           // CS1/CSc
CheckResult check_trace_structure(Context& ctx, Tag level);      // CT1/q/a/s
CheckResult check_actor(Context& ctx, Tag level);                // CAtop/CAa
CheckResult check_query_dependence(Context& ctx, Tag level);     // QD1/i/t
CheckResult check_query_complexity(Context& ctx, Tag level);     // QCc
CheckResult check_query_preservation(Context& ctx, Tag level);   // QPf/a/w
CheckResult check_reachability(Context& ctx, Tag level);         // Rfwd/Rbi

CheckResult check_tag(Context& ctx, Tag tag);

// --- driver -----------------------------------------------------------------

struct Report {
  std::string mapping_name;
  std::string source_name;
  std::string target_name;
  RunBound bound;
  Tag correspondence = Tag::SCa;
  std::vector<CheckResult> results;
  // Exploration statistics.
  std::size_t source_states = 0;
  std::size_t source_edges = 0;
  std::size_t pairs = 0;
  std::size_t target_pool = 0;
  bool truncated = false;

  bool all_pass() const;
  // Strongest level per dimension whose check passed.
  std::map<Dimension, Tag> strongest() const;
};

// Runs every requested property. The simulation's correspondence level is
// the strongest SC tag requested (SCa when none). Tags are checked in the
// given order.
Report check_property_set(const MappingDef& m, const RunBound& rb,
                          const std::vector<Tag>& props);

// Every level the checkers can decide, strongest first per dimension.
const std::vector<Tag>& checkable_tags();

// Re-executes a Fails counterexample; true iff the violation reproduces.
bool replay(const MappingDef& m, const CheckResult& r);

// --- report serialization ----------------------------------------------------

Json report_to_json(const Report& r);
Report report_from_json(const Json& j);
std::string report_text(const Report& r);

Json check_result_to_json(const CheckResult& r);
CheckResult check_result_from_json(const Json& j);

}  // namespace acx

#endif  // ACX_PROPS_HPP_
