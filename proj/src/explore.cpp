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

#include "acx/explore.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace acx {

std::string RunBound::str() const {
  return std::to_string(atoms_per_sort) + "," + std::to_string(max_new_atoms) +
         "," + std::to_string(max_depth);
}

namespace {

bool within_universe_cap(const State& s, std::size_t cap) {
  for (const auto& [_, atoms] : s.universes) {
    if (atoms.size() > cap) return false;
  }
  return true;
}

}  // namespace

ReachSet reachable(const SystemDef& sys, const State& start, const Bound& b) {
  ReachSet out;
  if (!within_universe_cap(start, b.max_atoms_per_sort)) {
    out.truncated = true;
    return out;
  }
  out.states.insert(start);
  std::deque<std::pair<State, std::size_t>> queue{{start, 0}};
  while (!queue.empty()) {
    auto [s, depth] = queue.front();
    queue.pop_front();
    const bool frontier = depth == b.max_depth;
    for (const Ground& g : ground_commands(sys, s)) {
      State next = step(sys, s, g.name, g.args);
      if (!within_universe_cap(next, b.max_atoms_per_sort)) {
        out.truncated = true;
        continue;
      }
      if (frontier) {
        // Not expanded; only report whether the depth bound cut anything.
        if (!out.states.count(next)) out.truncated = true;
        continue;
      }
      out.edges.push_back({s, g, next});
      if (out.states.insert(next).second) queue.emplace_back(next, depth + 1);
    }
  }
  return out;
}

State seed_state(const SystemDef& sys, std::size_t n) {
  State s = sys.init;
  for (const auto& sort : sys.sorts) {
    auto& universe = s.universes[sort];
    std::string base;
    for (char c : sort) {
      base += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    std::size_t idx = 1;
    while (universe.size() < n) {
      Atom candidate(base + std::to_string(idx++));
      bool used = false;
      for (const auto& [_, atoms] : s.universes) {
        if (atoms.count(candidate)) {
          used = true;
          break;
        }
      }
      if (!used) universe.insert(candidate);
    }
  }
  s.normalize();
  return s;
}

bool corresponds(const SimulationDef& sim, const State& source_state,
                 const State& target_state, std::string* why,
                 std::string* witness) {
  const MappingDef& m = *sim.mapping;
  const SystemDef& src = *m.source;
  auto fail = [&](const std::string& reason, const std::string& instance) {
    if (why) *why = reason;
    if (witness) *witness = instance;
    return false;
  };

  if (sim.correspondence == Tag::SCs) {
    static const std::set<Atom> kNoAtoms;
    static const std::set<Tuple> kNoRows;
    for (const auto& sort : src.sorts) {
      auto sit = source_state.universes.find(sort);
      const auto& want = sit == source_state.universes.end() ? kNoAtoms : sit->second;
      auto tit = target_state.universes.find(sort);
      const auto& got = tit == target_state.universes.end() ? kNoAtoms : tit->second;
      if (want != got) {
        return fail("target universe '" + sort +
                        "' differs from the source universe",
                    sort);
      }
    }
    for (const auto& [rel, _] : src.relations) {
      auto sit = source_state.relations.find(rel);
      const auto& want = sit == source_state.relations.end() ? kNoRows : sit->second;
      auto tit = target_state.relations.find(rel);
      const auto& got = tit == target_state.relations.end() ? kNoRows : tit->second;
      if (want != got) {
        return fail("target relation '" + rel +
                        "' differs from the source relation",
                    rel);
      }
    }
    return true;
  }

  const bool requests_only = sim.correspondence != Tag::SCq;
  for (const Ground& g : ground_queries(src, source_state, requests_only)) {
    bool source_truth = entails(src, source_state, g.name, g.args);
    bool target_truth;
    try {
      target_truth = decide_query(m, g, target_state).value;
    } catch (const Error& e) {
      return fail(e.what(), g.str());
    }
    if (source_truth != target_truth) {
      return fail(std::string("the mapping decides ") + g.str() + " as " +
                      (target_truth ? "true" : "false") + " but the source state " +
                      (source_truth ? "entails" : "does not entail") + " it",
                  g.str());
    }
  }
  return true;
}

const SystemDef& Context::src() const { return *mapping->source; }
const SystemDef& Context::tgt() const { return *mapping->target; }
const MappingDef& Context::map() const { return *mapping; }

Context build_context(const SimulationDef& sim, const RunBound& rb) {
  Context ctx;
  ctx.mapping = sim.mapping;
  ctx.correspondence = sim.correspondence;
  ctx.run_bound = rb;
  const MappingDef& m = *sim.mapping;
  const SystemDef& src = *m.source;
  const SystemDef& tgt = *m.target;
  const Bound b = rb.bound();

  ctx.source_init = seed_state(src, rb.atoms_per_sort);
  ctx.target_init = map_state(m, ctx.source_init);
  ctx.source = reachable(src, ctx.source_init, b);
  ctx.truncated = ctx.source.truncated;

  std::map<std::pair<State, State>, std::size_t> index;
  auto intern = [&](const State& sS, const State& sT, std::size_t depth) {
    auto key = std::make_pair(sS, sT);
    auto it = index.find(key);
    if (it != index.end()) return std::make_pair(it->second, false);
    std::size_t id = ctx.pairs.size();
    index.emplace(std::move(key), id);
    PairNode node;
    node.source = sS;
    node.target = sT;
    node.corresponding = corresponds(sim, sS, sT);
    node.depth = depth;
    ctx.pairs.push_back(std::move(node));
    return std::make_pair(id, true);
  };

  ctx.target_pool.insert(ctx.target_init);
  intern(ctx.source_init, ctx.target_init, 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t at = queue.front();
    queue.pop_front();
    const std::size_t depth = ctx.pairs[at].depth;
    if (depth == rb.max_depth) {
      continue;  // source truncation already accounts for the frontier
    }
    // Copies: ctx.pairs may reallocate while we expand.
    const State sS = ctx.pairs[at].source;
    const State sT = ctx.pairs[at].target;
    for (const Ground& g : ground_commands(src, sS)) {
      State nextS = step(src, sS, g.name, g.args);
      if (!within_universe_cap(nextS, b.max_atoms_per_sort)) {
        ctx.truncated = true;
        continue;
      }
      PairEdge edge;
      edge.pair = at;
      edge.command = g;
      try {
        CommandImage img = map_command(m, g, sT);
        edge.trace = std::move(img.commands);
        edge.cost = img.cost;
        edge.evidence = img.evidence;
        ctx.cost += edge.cost;
      } catch (const Error& e) {
        edge.trace_error = true;
        edge.trace_error_text = e.what();
        ctx.pair_edges.push_back(std::move(edge));
        continue;
      }
      State nextT;
      try {
        TraceResult tr = run_trace(tgt, sT, edge.trace);
        nextT = std::move(tr.final);
        for (State& mid : tr.intermediates) {
          if (within_universe_cap(mid, b.max_atoms_per_sort)) {
            ctx.target_pool.insert(std::move(mid));
          }
        }
      } catch (const Error& e) {
        edge.trace_error = true;
        edge.trace_error_text = e.what();
        ctx.pair_edges.push_back(std::move(edge));
        continue;
      }
      if (!within_universe_cap(nextT, b.max_atoms_per_sort)) {
        ctx.truncated = true;
        ctx.pair_edges.push_back(std::move(edge));
        continue;
      }
      auto [nid, fresh] = intern(nextS, nextT, depth + 1);
      edge.next_pair = nid;
      ctx.pair_edges.push_back(std::move(edge));
      if (fresh) queue.push_back(nid);
    }
  }

  // One native target step from every pooled state widens the pool enough to
  // separate theory-equal states for the dependence checkers.
  std::vector<State> snapshot(ctx.target_pool.begin(), ctx.target_pool.end());
  for (const State& s : snapshot) {
    for (const Ground& g : ground_commands(tgt, s)) {
      State next = step(tgt, s, g.name, g.args);
      if (within_universe_cap(next, b.max_atoms_per_sort)) {
        ctx.target_pool.insert(std::move(next));
      }
    }
  }
  return ctx;
}

const ReachSet& source_reach_from(Context& ctx, const State& from) {
  auto it = ctx.reach_memo.find(from);
  if (it != ctx.reach_memo.end()) return it->second;
  ReachSet r = reachable(ctx.src(), from, ctx.run_bound.bound());
  return ctx.reach_memo.emplace(from, std::move(r)).first->second;
}

bool source_witness_exists(const SimulationDef& sim, const Bound& b,
                           const State& from, const State& want,
                           bool* truncated) {
  const SystemDef& src = *sim.mapping->source;
  std::set<State> seen{from};
  std::deque<std::pair<State, std::size_t>> queue{{from, 0}};
  while (!queue.empty()) {
    auto [s, depth] = queue.front();
    queue.pop_front();
    if (corresponds(sim, s, want)) return true;
    if (depth == b.max_depth) {
      if (truncated) *truncated = true;  // unexpanded frontier
      continue;
    }
    for (const Ground& g : ground_commands(src, s)) {
      State next = step(src, s, g.name, g.args);
      if (!within_universe_cap(next, b.max_atoms_per_sort)) {
        if (truncated) *truncated = true;
        continue;
      }
      if (seen.insert(next).second) queue.emplace_back(next, depth + 1);
    }
  }
  return false;
}

}  // namespace acx
