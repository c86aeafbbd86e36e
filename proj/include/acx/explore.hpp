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
// Bounded exhaustive exploration: reachable state graphs, the paired
// source/target walk that follows a mapping, and the correspondence tests
// the reachability checkers are built from.

#ifndef ACX_EXPLORE_HPP_
#define ACX_EXPLORE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acx/mapping.hpp"
#include "acx/tags.hpp"

namespace acx {

// Exploration bound. max_atoms_per_sort caps universe growth (Fresh effects
// that would exceed it are skipped and the result is marked truncated);
// max_depth counts command applications from the start state.
struct Bound {
  std::size_t max_atoms_per_sort = 3;
  std::size_t max_depth = 6;

  bool operator==(const Bound&) const = default;
};

// CLI-facing bound triple: seed every sort up to `atoms_per_sort` named
// atoms, allow `max_new_atoms` further Fresh atoms per sort, explore to
// `max_depth`.
struct RunBound {
  std::size_t atoms_per_sort = 2;
  std::size_t max_new_atoms = 1;
  std::size_t max_depth = 6;

  Bound bound() const { return Bound{atoms_per_sort + max_new_atoms, max_depth}; }
  std::string str() const;

  bool operator==(const RunBound&) const = default;
};

struct ReachEdge {
  State from;
  Ground command;
  State to;
};

// Reachable fragment. Each contained state at depth < max_depth has every
// successor contained; truncated reports honestly when the bound cut
// anything off (depth frontier with unseen successors, or skipped Fresh).
struct ReachSet {
  std::set<State> states;
  std::vector<ReachEdge> edges;
  bool truncated = false;
};

// BFS over all ground command instances in canonical order.
ReachSet reachable(const SystemDef& sys, const State& start, const Bound& b);

// Pads every sort universe of the initial state up to n atoms, naming new
// atoms lowercase(sort)+index. Never removes atoms.
State seed_state(const SystemDef& sys, std::size_t n);

// A mapping together with the correspondence level its simulation claims.
// The correspondence is one of SCs / SCq / SCa.
struct SimulationDef {
  const MappingDef* mapping = nullptr;
  Tag correspondence = Tag::SCa;
};

// Does the target state correspond to the source state at the simulation's
// level? SCs: every source universe and relation appears in the target with
// identical contents. SCq / SCa: the mapping decides every source query /
// request instance exactly as the source state entails it. On failure *why
// receives a one-line reason and *witness the offending instance.
bool corresponds(const SimulationDef& sim, const State& source_state,
                 const State& target_state, std::string* why = nullptr,
                 std::string* witness = nullptr);

// One explored source step together with its target image.
struct PairEdge {
  std::size_t pair = 0;  // index into Context::pairs
  Ground command;        // ground source command
  std::vector<Ground> trace;
  CostCounter cost;
  DependenceEvidence evidence;
  std::size_t next_pair = 0;
  bool trace_error = false;      // running the trace threw
  std::string trace_error_text;
};

struct PairNode {
  State source;
  State target;
  bool corresponding = false;
  std::size_t depth = 0;
};

// Everything the property checkers share: the source reach set from the
// seeded initial state, the paired walk that follows the mapping, and the
// pool of target states (images, trace intermediates, plus one native step).
struct Context {
  State source_init;
  State target_init;
  ReachSet source;
  std::vector<PairNode> pairs;
  std::vector<PairEdge> pair_edges;
  std::set<State> target_pool;
  bool truncated = false;
  CostCounter cost;  // aggregate mapping work

  const SystemDef& src() const;
  const SystemDef& tgt() const;
  const MappingDef& map() const;
  const MappingDef* mapping = nullptr;
  Tag correspondence = Tag::SCa;
  RunBound run_bound;
  std::map<State, ReachSet> reach_memo;  // per-start source reach sets
};

Context build_context(const SimulationDef& sim, const RunBound& rb);

// Reachable states from `from` in the source system, memoized per context.
const ReachSet& source_reach_from(Context& ctx, const State& from);

// Is some source state reachable from `from` within the bound corresponding
// to `want`? Breadth-first with early exit; *truncated reports when the
// bound cut the search off before an answer was sure.
bool source_witness_exists(const SimulationDef& sim, const Bound& b,
                           const State& from, const State& want,
                           bool* truncated = nullptr);

}  // namespace acx

#endif  // ACX_EXPLORE_HPP_
