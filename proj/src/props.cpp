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

#include "acx/props.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>

namespace acx {

std::string verdict_name(Verdict v, bool evidence_holds) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Evidence:
      return evidence_holds ? "evidence-holds" : "evidence-fails";
    case Verdict::Inapplicable:
      return "inapplicable";
  }
  return "unknown";
}

namespace {

constexpr double kSlack = 1e-9;

CheckResult base_result(const Context& ctx, Tag level) {
  CheckResult r;
  r.property = level;
  r.bound = ctx.run_bound;
  if (ctx.truncated) {
    r.notes.push_back(
        "BoundTooSmall: exploration was truncated; the verdict is relative "
        "to the explored fragment");
  }
  return r;
}

CheckResult unconstrained(const Context& ctx, Tag level) {
  CheckResult r = base_result(ctx, level);
  r.verdict = Verdict::Holds;
  r.notes.push_back("this level imposes no constraint");
  return r;
}

bool is_unconstrained(Tag t) {
  return t == Tag::SSinf || t == Tag::CDs || t == Tag::CCinf ||
         t == Tag::CSinf || t == Tag::QDs || t == Tag::QCinf;
}

std::string trace_text(const std::vector<Ground>& trace) {
  std::string out = "[";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) out += "; ";
    out += trace[i].str();
  }
  return out + "]";
}

// Ground source command instances over the seeded initial universes: every
// explored state contains those atoms, so the instances are meaningful
// against the whole pool.
std::vector<Ground> shared_source_commands(const Context& ctx) {
  return ground_commands(ctx.src(), ctx.source_init);
}

std::vector<Ground> shared_source_queries(const Context& ctx) {
  return ground_queries(ctx.src(), ctx.source_init, false);
}

std::vector<const State*> pool_vector(const Context& ctx) {
  std::vector<const State*> out;
  out.reserve(ctx.target_pool.size());
  for (const State& s : ctx.target_pool) out.push_back(&s);
  return out;
}

std::string image_text(const CommandImage& img) { return trace_text(img.commands); }

}  // namespace

// --- state correspondence -----------------------------------------------------

CheckResult check_correspondence(Context& ctx, Tag level) {
  CheckResult r = base_result(ctx, level);
  SimulationDef sim{ctx.mapping, level};
  for (const State& sS : ctx.source.states) {
    State image;
    std::string why;
    std::string witness;
    try {
      image = map_state(ctx.map(), sS);
    } catch (const Error& e) {
      r.verdict = Verdict::Fails;
      Counterexample cx;
      cx.kind = "side_condition";
      cx.source_state = sS;
      cx.correspondence = level;
      cx.detail = std::string("mapping the state failed: ") + e.what();
      r.counterexample = std::move(cx);
      return r;
    }
    if (!corresponds(sim, sS, image, &why, &witness)) {
      r.verdict = Verdict::Fails;
      Counterexample cx;
      cx.kind = "side_condition";
      cx.source_state = sS;
      cx.target_state = image;
      cx.instance = witness;
      cx.correspondence = level;
      cx.detail = why;
      r.counterexample = std::move(cx);
      return r;
    }
  }
  r.verdict = Verdict::Holds;
  r.notes.push_back("checked " + std::to_string(ctx.source.states.size()) +
                    " explored source state(s) against their images");
  return r;
}

// --- storage ------------------------------------------------------------------

CheckResult check_storage(Context& ctx, Tag level) {
  if (is_unconstrained(level)) return unconstrained(ctx, level);
  CheckResult r = base_result(ctx, level);
  const MappingShape shape = mapping_shape(ctx.map());
  const int degree = shape.max_state_rule_join;
  r.fitted["degree"] = degree;

  for (const State& sS : ctx.source.states) {
    double in = static_cast<double>(state_size(sS));
    double out = static_cast<double>(state_size(map_state(ctx.map(), sS)));
    r.samples.push_back({in, out});
  }
  std::sort(r.samples.begin(), r.samples.end(),
            [](const Sample& a, const Sample& b) { return a.size < b.size; });

  double c = 0;
  {
    // Fit on the two smallest distinct sizes.
    std::set<double> seen;
    for (const Sample& s : r.samples) {
      if (s.size <= 0) continue;
      c = std::max(c, s.value / s.size);
      seen.insert(s.size);
      if (seen.size() == 2) break;
    }
  }
  bool linear_ok = true;
  for (const Sample& s : r.samples) {
    if (s.value > c * s.size + kSlack) linear_ok = false;
  }

  if (level == Tag::SSl) {
    if (degree <= 1) {
      r.verdict = Verdict::Holds;
      r.fitted["c"] = c;
      r.notes.push_back(
          "static analysis: every state rule joins at most one source "
          "set or relation, so the image grows at most linearly");
    } else {
      r.verdict = Verdict::Evidence;
      r.evidence_holds = linear_ok;
      r.fitted["c"] = c;
      r.notes.push_back("state rules join up to " + std::to_string(degree) +
                        " patterns; linearity tested on sampled sizes only");
    }
    return r;
  }

  // SSp: a fixed-width join of input sets is polynomial by construction.
  r.verdict = Verdict::Holds;
  double k = 1;
  for (const Sample& s : r.samples) {
    if (s.size >= 2 && s.value >= 1) {
      k = std::max(k, std::log(s.value) / std::log(s.size));
    }
  }
  r.fitted["k"] = k;
  r.notes.push_back("static analysis: state rules are joins of width " +
                    std::to_string(degree <= 0 ? 1 : degree) +
                    ", so the image is polynomial in the source size");
  return r;
}

// --- command dependence ---------------------------------------------------------

CheckResult check_command_dependence(Context& ctx, Tag level) {
  if (is_unconstrained(level)) return unconstrained(ctx, level);
  CheckResult r = base_result(ctx, level);
  const MappingShape shape = mapping_shape(ctx.map());
  if (!shape.commands_use_foreach_or_when) {
    r.notes.push_back("command rule bodies are straight-line emissions");
  } else {
    r.notes.push_back(std::string("command rules consult ") +
                      (shape.commands_consult_raw ? "raw state"
                       : shape.commands_consult_queries
                           ? "target queries"
                           : "only their arguments"));
  }

  auto pool = pool_vector(ctx);
  const auto instances = shared_source_commands(ctx);

  auto image_of = [&](const Ground& g, const State& t) {
    CommandImage img = map_command(ctx.map(), g, t);
    r.stats += img.cost;
    return img;
  };

  if (level == Tag::CDi) {
    for (const Ground& g : instances) {
      if (pool.empty()) break;
      CommandImage baseline = image_of(g, *pool[0]);
      for (std::size_t i = 1; i < pool.size(); ++i) {
        CommandImage other = image_of(g, *pool[i]);
        if (other.commands != baseline.commands) {
          r.verdict = Verdict::Fails;
          Counterexample cx;
          cx.kind = "command_dependence";
          cx.command = g;
          cx.target_state = *pool[0];
          cx.target_state2 = *pool[i];
          cx.trace = baseline.commands;
          cx.detail = "the command maps to " + image_text(baseline) +
                      " in one explored target state and to " +
                      image_text(other) + " in another";
          r.counterexample = std::move(cx);
          return r;
        }
      }
    }
    r.verdict = Verdict::Holds;
    r.notes.push_back("outputs identical across " +
                      std::to_string(pool.size()) + " explored target state(s)");
    return r;
  }

  // CDt: outputs must agree on theory-equal target states.
  std::map<std::map<std::string, bool>, const State*> groups;
  for (const State* t : pool) {
    auto th = theory(ctx.tgt(), *t);
    auto [it, fresh] = groups.emplace(std::move(th), t);
    if (fresh) continue;
    for (const Ground& g : instances) {
      CommandImage a = image_of(g, *it->second);
      CommandImage b = image_of(g, *t);
      if (a.commands != b.commands) {
        r.verdict = Verdict::Fails;
        Counterexample cx;
        cx.kind = "command_dependence";
        cx.command = g;
        cx.target_state = *it->second;
        cx.target_state2 = *t;
        cx.trace = a.commands;
        cx.detail = "two theory-equal target states map the command to " +
                    image_text(a) + " and " + image_text(b);
        r.counterexample = std::move(cx);
        return r;
      }
    }
  }
  r.verdict = Verdict::Holds;
  r.notes.push_back("outputs agree across " + std::to_string(pool.size()) +
                    " explored target state(s) in " +
                    std::to_string(groups.size()) + " theory class(es)");
  return r;
}

// --- complexity ladders ---------------------------------------------------------

namespace {

State saturate(const SystemDef& sys, const State& seed) {
  State s = seed;
  for (const auto& [rel, sig] : sys.relations) {
    std::vector<Tuple> rows{{}};
    for (const auto& sort : sig) {
      auto it = s.universes.find(sort);
      if (it == s.universes.end() || it->second.empty()) {
        rows.clear();
        break;
      }
      std::vector<Tuple> next;
      for (const auto& prefix : rows) {
        for (const Atom& a : it->second) {
          Tuple t = prefix;
          t.push_back(a);
          next.push_back(std::move(t));
        }
      }
      rows = std::move(next);
    }
    for (auto& row : rows) s.relations[rel].insert(std::move(row));
  }
  return s;
}

// Worst-case interpreter cost per sampled size, for the CC and QC ladders.
// `measure` maps a target state to the worst cost over the fixed instances.
std::vector<Sample> cost_ladder(Context& ctx,
                                const std::function<double(const State&)>& measure) {
  std::vector<Sample> samples;
  for (std::size_t k = 1; k <= 6; ++k) {
    State seed = seed_state(ctx.src(), k);
    for (bool saturated : {false, true}) {
      State src_state = saturated ? saturate(ctx.src(), seed) : seed;
      State tgt_state = map_state(ctx.map(), src_state);
      samples.push_back({static_cast<double>(state_size(tgt_state)),
                         measure(tgt_state)});
    }
  }
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.size < b.size; });
  // Equal sizes with different worst costs collapse to the worst.
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    if (!out.empty() && out.back().size == s.size) {
      out.back().value = std::max(out.back().value, s.value);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

void fit_constant(CheckResult& r) {
  double lo = r.samples.empty() ? 0 : r.samples[0].value;
  double hi = lo;
  for (const Sample& s : r.samples) {
    lo = std::min(lo, s.value);
    hi = std::max(hi, s.value);
  }
  r.fitted["max"] = hi;
  r.evidence_holds = hi - lo <= kSlack;
}

void fit_linear(CheckResult& r) {
  double c = 0;
  std::set<double> seen;
  for (const Sample& s : r.samples) {
    if (s.size <= 0) continue;
    c = std::max(c, s.value / s.size);
    seen.insert(s.size);
    if (seen.size() == 2) break;
  }
  r.fitted["c"] = c;
  r.evidence_holds = true;
  for (const Sample& s : r.samples) {
    if (s.value > c * s.size + kSlack) r.evidence_holds = false;
  }
}

}  // namespace

CheckResult check_command_complexity(Context& ctx, Tag level) {
  if (is_unconstrained(level)) return unconstrained(ctx, level);
  CheckResult r = base_result(ctx, level);
  r.verdict = Verdict::Evidence;
  const auto instances = ground_commands(ctx.src(), seed_state(ctx.src(), 1));
  r.samples = cost_ladder(ctx, [&](const State& t) {
    double worst = 0;
    for (const Ground& g : instances) {
      CommandImage img = map_command(ctx.map(), g, t);
      r.stats += img.cost;
      worst = std::max(worst,
                       static_cast<double>(img.cost.bindings_enumerated +
                                           img.cost.state_items_inspected));
    }
    return worst;
  });
  if (level == Tag::CCc) {
    fit_constant(r);
    r.notes.push_back("worst interpreter cost per command across sampled sizes");
  } else {
    fit_linear(r);
    r.notes.push_back("linear bound fitted on the two smallest sampled sizes");
  }
  return r;
}

CheckResult check_query_complexity(Context& ctx, Tag level) {
  if (is_unconstrained(level)) return unconstrained(ctx, level);
  CheckResult r = base_result(ctx, level);
  r.verdict = Verdict::Evidence;
  const auto instances = ground_queries(ctx.src(), seed_state(ctx.src(), 1), false);
  r.samples = cost_ladder(ctx, [&](const State& t) {
    double worst = 0;
    for (const Ground& g : instances) {
      QueryDecision d;
      try {
        d = decide_query(ctx.map(), g, t);
      } catch (const Error&) {
        continue;  // instance not expressible against this state
      }
      r.stats += d.cost;
      worst = std::max(worst, static_cast<double>(d.cost.bindings_enumerated +
                                                  d.cost.state_items_inspected +
                                                  d.cost.queries_consulted));
    }
    return worst;
  });
  fit_constant(r);
  r.notes.push_back("worst decider cost per query across sampled sizes");
  return r;
}

// --- stuttering -----------------------------------------------------------------

CheckResult check_stuttering(Context& ctx, Tag level) {
  if (is_unconstrained(level)) return unconstrained(ctx, level);
  CheckResult r = base_result(ctx, level);
  std::size_t worst = 0;
  for (const PairEdge& e : ctx.pair_edges) {
    worst = std::max(worst, e.trace.size());
    if (level == Tag::CS1 && e.trace.size() > 1) {
      r.verdict = Verdict::Fails;
      Counterexample cx;
      cx.kind = "stuttering";
      cx.source_state = ctx.pairs[e.pair].source;
      cx.target_state = ctx.pairs[e.pair].target;
      cx.command = e.command;
      cx.trace = e.trace;
      cx.detail = "the command maps to " + std::to_string(e.trace.size()) +
                  " target commands: " + trace_text(e.trace);
      r.counterexample = std::move(cx);
      return r;
    }
  }
  r.verdict = Verdict::Holds;
  r.fitted["c"] = static_cast<double>(worst);
  r.notes.push_back("longest emitted command sequence: " + std::to_string(worst));
  return r;
}

// --- trace structure -------------------------------------------------------------

CheckResult check_trace_structure(Context& ctx, Tag level) {
  CheckResult r = base_result(ctx, level);
  SimulationDef sim{ctx.mapping, ctx.correspondence};
  bool any_multi = false;

  for (const PairEdge& e : ctx.pair_edges) {
    if (!ctx.pairs[e.pair].corresponding || e.trace_error) continue;
    if (e.trace.size() <= 1) continue;  // single-command traces are vacuous
    any_multi = true;
    const State& sS = ctx.pairs[e.pair].source;
    const State& sT = ctx.pairs[e.pair].target;
    TraceResult tr = run_trace(ctx.tgt(), sT, e.trace);
    const std::size_t m = e.trace.size();
    auto state_at = [&](std::size_t i) -> const State& {
      return i == 0 ? sT : tr.intermediates[i - 1];
    };
    auto fail = [&](std::size_t index, const std::string& detail,
                    std::optional<Ground> instance) {
      r.verdict = Verdict::Fails;
      Counterexample cx;
      cx.kind = "trace_shape";
      cx.source_state = sS;
      cx.target_state = sT;
      cx.command = e.command;
      cx.trace = e.trace;
      cx.index = index;
      cx.correspondence = ctx.correspondence;
      if (instance) {
        cx.instance = instance->str();
        cx.query = std::move(instance);
      }
      cx.detail = detail;
      r.counterexample = std::move(cx);
    };

    if (level == Tag::CT1) {
      State nextS = step(ctx.src(), sS, e.command.name, e.command.args);
      bool suffix = false;
      for (std::size_t i = 1; i <= m; ++i) {
        const State& mid = state_at(i);
        bool pre = !suffix && corresponds(sim, sS, mid);
        bool post = corresponds(sim, nextS, mid);
        if (!suffix) {
          if (pre) continue;
          if (post) {
            suffix = true;
            continue;
          }
        } else if (post) {
          continue;
        }
        fail(i, "trace state " + std::to_string(i) +
                    " corresponds to neither the source state nor its "
                    "successor, so no lock-step split exists",
             std::nullopt);
        return r;
      }
    } else if (level == Tag::CTq || level == Tag::CTa) {
      State universe;
      for (std::size_t i = 0; i <= m; ++i) {
        for (const auto& [sort, atoms] : state_at(i).universes) {
          universe.universes[sort].insert(atoms.begin(), atoms.end());
        }
      }
      const bool requests_only = level == Tag::CTa;
      for (const Ground& q :
           ground_queries(ctx.tgt(), universe, requests_only)) {
        bool final_value = entails(ctx.tgt(), state_at(m), q.name, q.args);
        bool prev = entails(ctx.tgt(), sT, q.name, q.args);
        for (std::size_t i = 1; i <= m; ++i) {
          bool cur = entails(ctx.tgt(), state_at(i), q.name, q.args);
          if (cur != prev && cur != final_value) {
            fail(i, q.str() + " flips to " + (cur ? "true" : "false") +
                        " at trace position " + std::to_string(i) +
                        " but ends the trace " +
                        (final_value ? "true" : "false"),
                 q);
            return r;
          }
          prev = cur;
        }
      }
    } else if (level == Tag::CTs) {
      auto start_allowed = allowed_keys(ctx.tgt(), sT);
      auto end_allowed = allowed_keys(ctx.tgt(), state_at(m));
      for (std::size_t i = 1; i + 1 <= m; ++i) {
        auto mid = allowed_keys(ctx.tgt(), state_at(i));
        bool in_start = std::includes(start_allowed.begin(), start_allowed.end(),
                                      mid.begin(), mid.end());
        bool in_end = std::includes(end_allowed.begin(), end_allowed.end(),
                                    mid.begin(), mid.end());
        if (!in_start && !in_end) {
          std::string extra;
          for (const auto& k : mid) {
            if (!start_allowed.count(k) || !end_allowed.count(k)) {
              if (!extra.empty()) extra += ", ";
              extra += k;
            }
          }
          fail(i, "trace state " + std::to_string(i) +
                      " grants requests beyond both endpoints: " + extra,
               std::nullopt);
          return r;
        }
      }
    }
  }
  r.verdict = Verdict::Holds;
  if (!any_multi) {
    r.notes.push_back(
        "every emitted trace has length at most one, so the level holds "
        "vacuously");
  }
  return r;
}

// --- actor preservation -----------------------------------------------------------

namespace {

std::optional<Atom> actor_of(const SystemDef& sys, const Ground& g) {
  auto it = sys.commands.find(g.name);
  if (it == sys.commands.end() || !it->second.actor) return std::nullopt;
  return g.args[*it->second.actor];
}

bool any_command_without_actor(const SystemDef& sys) {
  for (const auto& [_, c] : sys.commands) {
    if (!c.actor) return true;
  }
  return false;
}

bool in_admins(const SystemDef& sys, const State& s, const Atom& a) {
  auto it = s.relations.find(*sys.admins);
  if (it == s.relations.end()) return false;
  return it->second.count(Tuple{a}) > 0;
}

}  // namespace

CheckResult check_actor(Context& ctx, Tag level) {
  CheckResult r = base_result(ctx, level);
  if (any_command_without_actor(ctx.src()) ||
      any_command_without_actor(ctx.tgt())) {
    r.verdict = Verdict::Inapplicable;
    r.notes.push_back(
        "NoActorDeclared: some command declares no actor parameter");
    return r;
  }
  if (level == Tag::CAa && (!ctx.src().admins || !ctx.tgt().admins)) {
    r.verdict = Verdict::Inapplicable;
    r.notes.push_back(
        "no administrator relation is designated on both systems");
    return r;
  }

  for (const PairEdge& e : ctx.pair_edges) {
    auto src_actor = actor_of(ctx.src(), e.command);
    const State& sS = ctx.pairs[e.pair].source;
    const State& sT = ctx.pairs[e.pair].target;
    TraceResult tr;
    if (level == Tag::CAa && !e.trace_error) {
      tr = run_trace(ctx.tgt(), sT, e.trace);
    }
    for (std::size_t i = 0; i < e.trace.size(); ++i) {
      auto tgt_actor = actor_of(ctx.tgt(), e.trace[i]);
      if (!src_actor || !tgt_actor) continue;
      bool violation = false;
      std::string detail;
      if (level == Tag::CAtop) {
        violation = *tgt_actor != *src_actor;
        detail = "emitted command " + e.trace[i].str() + " runs as " +
                 tgt_actor->str() + " but the source command " +
                 e.command.str() + " runs as " + src_actor->str();
      } else {
        if (e.trace_error) continue;
        // Actor admin status is read in the state the command fires in.
        const State& pre = i == 0 ? sT : tr.intermediates[i - 1];
        violation = in_admins(ctx.tgt(), pre, *tgt_actor) &&
                    !in_admins(ctx.src(), sS, *src_actor);
        detail = "emitted command " + e.trace[i].str() +
                 " runs as administrator " + tgt_actor->str() +
                 " but the source actor " + src_actor->str() +
                 " is not an administrator";
      }
      if (violation) {
        r.verdict = Verdict::Fails;
        Counterexample cx;
        cx.kind = "actor";
        cx.source_state = sS;
        cx.target_state = sT;
        cx.command = e.command;
        cx.trace = e.trace;
        cx.index = i + 1;
        cx.detail = detail;
        r.counterexample = std::move(cx);
        return r;
      }
    }
  }
  r.verdict = Verdict::Holds;
  return r;
}

// --- query decider dependence -------------------------------------------------

namespace {

struct Transcript {
  bool value = false;
  bool failed = false;
  std::vector<std::pair<Ground, bool>> consulted;
};

Transcript decide_with_transcript(const MappingDef& m, const Ground& q,
                                  const State& t, CostCounter* stats) {
  Transcript out;
  auto it = m.query_rules.find(q.name);
  if (it == m.query_rules.end()) {
    out.failed = true;
    return out;
  }
  const QueryDeciderRule& rule = it->second;
  if (rule.params.size() != q.args.size()) {
    out.failed = true;
    return out;
  }
  Env env;
  for (std::size_t i = 0; i < rule.params.size(); ++i) {
    env[rule.params[i]] = q.args[i];
  }
  EvalHooks hooks;
  hooks.query = [&](const std::string& n, const std::vector<Atom>& a) {
    bool v = entails(*m.target, t, n, a);
    out.consulted.emplace_back(Ground{n, a}, v);
    if (stats) stats->queries_consulted += 1;
    return v;
  };
  hooks.on_member = [&] {
    if (stats) stats->state_items_inspected += 1;
  };
  hooks.on_binding = [&] {
    if (stats) stats->bindings_enumerated += 1;
  };
  try {
    out.value = eval_formula(*m.target, t, rule.body, env, &hooks);
  } catch (const Error&) {
    out.failed = true;
  }
  return out;
}

bool agrees_on(const SystemDef& tgt, const State& t,
               const std::vector<std::pair<Ground, bool>>& consulted) {
  for (const auto& [g, v] : consulted) {
    if (entails(tgt, t, g.name, g.args) != v) return false;
  }
  return true;
}

}  // namespace

CheckResult check_query_dependence(Context& ctx, Tag level) {
  if (is_unconstrained(level)) return unconstrained(ctx, level);
  CheckResult r = base_result(ctx, level);

  if (level == Tag::QD1) {
    for (const auto& [name, rule] : ctx.map().query_rules) {
      if (!rule.single_query_form()) {
        r.verdict = Verdict::Fails;
        Counterexample cx;
        cx.kind = "decider_shape";
        cx.instance = name;
        cx.detail = "the decider for '" + name +
                    "' is not a single target query application";
        r.counterexample = std::move(cx);
        return r;
      }
    }
  }
  if (level == Tag::QD1 || level == Tag::QDi) {
    // The decision may depend only on the values of the target queries the
    // decider consults: any state agreeing on a run's transcript must yield
    // the same decision.
    auto pool = pool_vector(ctx);
    for (const Ground& q : shared_source_queries(ctx)) {
      std::vector<Transcript> runs;
      runs.reserve(pool.size());
      for (const State* t : pool) {
        runs.push_back(decide_with_transcript(ctx.map(), q, *t, &r.stats));
      }
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (runs[i].failed) continue;
        for (std::size_t j = 0; j < pool.size(); ++j) {
          if (i == j || runs[j].failed) continue;
          if (runs[i].value == runs[j].value) continue;
          if (agrees_on(ctx.tgt(), *pool[j], runs[i].consulted)) {
            r.verdict = Verdict::Fails;
            Counterexample cx;
            cx.kind = "query_dependence";
            cx.query = q;
            cx.instance = q.str();
            cx.target_state = *pool[i];
            cx.target_state2 = *pool[j];
            cx.detail =
                "both states give the same answers to every target query "
                "the decider consulted, yet the decisions differ";
            r.counterexample = std::move(cx);
            return r;
          }
        }
      }
    }
    r.verdict = Verdict::Holds;
    return r;
  }

  // QDt: theory-equal states must decide alike.
  std::map<std::map<std::string, bool>, const State*> groups;
  for (const State& t : ctx.target_pool) {
    auto th = theory(ctx.tgt(), t);
    auto [it, fresh] = groups.emplace(std::move(th), &t);
    if (fresh) continue;
    for (const Ground& q : shared_source_queries(ctx)) {
      Transcript a = decide_with_transcript(ctx.map(), q, *it->second, &r.stats);
      Transcript b = decide_with_transcript(ctx.map(), q, t, &r.stats);
      if (a.failed || b.failed) continue;
      if (a.value != b.value) {
        r.verdict = Verdict::Fails;
        Counterexample cx;
        cx.kind = "query_dependence";
        cx.query = q;
        cx.instance = q.str();
        cx.target_state = *it->second;
        cx.target_state2 = t;
        cx.detail = "two theory-equal target states decide the query differently";
        r.counterexample = std::move(cx);
        return r;
      }
    }
  }
  r.verdict = Verdict::Holds;
  r.notes.push_back(std::to_string(ctx.target_pool.size()) +
                    " explored target state(s) in " +
                    std::to_string(groups.size()) + " theory class(es)");
  return r;
}

// --- query preservation ----------------------------------------------------------

namespace {

// Identical name and arity on the target side; QPa additionally demands the
// target query be a request.
bool signature_matches(const SystemDef& src, const SystemDef& tgt,
                       const QueryDef& q, bool as_request, std::string* why) {
  auto it = tgt.queries.find(q.name);
  if (it == tgt.queries.end()) {
    if (why) *why = "target declares no query named '" + q.name + "'";
    return false;
  }
  if (it->second.params.size() != q.params.size()) {
    if (why) *why = "'" + q.name + "' has a different arity in the target";
    return false;
  }
  if (as_request && !it->second.is_request) {
    if (why) *why = "'" + q.name + "' is not a request in the target";
    return false;
  }
  (void)src;
  return true;
}

}  // namespace

CheckResult check_query_preservation(Context& ctx, Tag level) {
  CheckResult r = base_result(ctx, level);
  const SystemDef& src = ctx.src();
  const SystemDef& tgt = ctx.tgt();

  if (level == Tag::QPf || level == Tag::QPa) {
    const bool requests_only = level == Tag::QPa;
    std::vector<const QueryDef*> checked;
    for (const auto& [name, q] : src.queries) {
      if (requests_only && !q.is_request) continue;
      std::string why;
      if (ctx.map().request_transform.count(name) ||
          !signature_matches(src, tgt, q, requests_only, &why)) {
        r.verdict = Verdict::Inapplicable;
        r.notes.push_back(
            "SignatureMismatch: " +
            (why.empty() ? "'" + name + "' is renamed by the mapping" : why));
        return r;
      }
      checked.push_back(&q);
    }
    for (const State& t : ctx.target_pool) {
      for (const QueryDef* q : checked) {
        // Instances are enumerated through the target signature; the decider
        // receives them as ground source queries.
        const QueryDef& tq = tgt.queries.at(q->name);
        for (const Ground& inst :
             ground_queries(tgt, t, false)) {
          if (inst.name != tq.name) continue;
          bool target_truth = entails(tgt, t, inst.name, inst.args);
          bool decided;
          try {
            QueryDecision d = decide_query(ctx.map(), inst, t);
            r.stats += d.cost;
            decided = d.value;
          } catch (const Error& e) {
            r.verdict = Verdict::Fails;
            Counterexample cx;
            cx.kind = "query_preservation";
            cx.target_state = t;
            cx.query = inst;
            cx.instance = inst.str();
            cx.detail = std::string("deciding the instance failed: ") + e.what();
            r.counterexample = std::move(cx);
            return r;
          }
          if (decided != target_truth) {
            r.verdict = Verdict::Fails;
            Counterexample cx;
            cx.kind = "query_preservation";
            cx.target_state = t;
            cx.query = inst;
            cx.instance = inst.str();
            cx.detail = "the decider answers " +
                        std::string(decided ? "true" : "false") +
                        " but the target state " +
                        (target_truth ? "entails" : "does not entail") +
                        " the identical instance";
            r.counterexample = std::move(cx);
            return r;
          }
        }
      }
    }
    r.verdict = Verdict::Holds;
    r.notes.push_back("compared the decider against target entailment on " +
                      std::to_string(ctx.target_pool.size()) +
                      " explored target state(s)");
    return r;
  }

  // QPw. The request transformation f: explicit entries first, identity on
  // request names the target also declares.
  std::map<std::string, std::string> f = ctx.map().request_transform;
  for (const auto& [name, q] : src.queries) {
    if (!q.is_request || f.count(name)) continue;
    auto it = tgt.queries.find(name);
    if (it != tgt.queries.end() && it->second.is_request &&
        it->second.params.size() == q.params.size()) {
      f[name] = name;
    }
  }
  for (const auto& [name, q] : src.queries) {
    if (q.is_request && !f.count(name)) {
      r.verdict = Verdict::Inapplicable;
      r.notes.push_back("no request transformation covers source request '" +
                        name + "'");
      return r;
    }
  }

  for (const State& t : ctx.target_pool) {
    // Condition 1: a true decision implies the transformed request holds.
    for (const auto& [rS, rT] : f) {
      for (const Ground& inst : ground_queries(tgt, t, true)) {
        if (inst.name != rT) continue;
        Ground source_inst{rS, inst.args};
        bool decided;
        try {
          QueryDecision d = decide_query(ctx.map(), source_inst, t);
          r.stats += d.cost;
          decided = d.value;
        } catch (const Error&) {
          continue;
        }
        if (decided && !entails(tgt, t, rT, inst.args)) {
          r.verdict = Verdict::Fails;
          Counterexample cx;
          cx.kind = "query_preservation_w";
          cx.index = 1;
          cx.target_state = t;
          cx.query = source_inst;
          cx.instance = source_inst.str();
          cx.detail = "the decider grants " + source_inst.str() +
                      " but the target state does not entail " +
                      Ground{rT, inst.args}.str();
          r.counterexample = std::move(cx);
          return r;
        }
      }
    }
    // Condition 2: every granted target request has a decider-true preimage.
    for (const Ground& granted : allowed(tgt, t)) {
      bool covered = false;
      for (const auto& [rS, rT] : f) {
        if (rT != granted.name) continue;
        try {
          QueryDecision d =
              decide_query(ctx.map(), Ground{rS, granted.args}, t);
          r.stats += d.cost;
          if (d.value) {
            covered = true;
            break;
          }
        } catch (const Error&) {
          continue;
        }
      }
      if (!covered) {
        r.verdict = Verdict::Fails;
        Counterexample cx;
        cx.kind = "query_preservation_w";
        cx.index = 2;
        cx.target_state = t;
        cx.query = granted;
        cx.instance = granted.str();
        cx.detail = "the target state grants " + granted.str() +
                    " but no source request the decider affirms maps to it";
        r.counterexample = std::move(cx);
        return r;
      }
    }
  }
  r.verdict = Verdict::Holds;
  return r;
}

// --- reachability -----------------------------------------------------------------

CheckResult check_reachability(Context& ctx, Tag level) {
  CheckResult r = base_result(ctx, level);
  SimulationDef sim{ctx.mapping, ctx.correspondence};

  // Forward: each mapped trace must end in a state corresponding to the
  // stepped source state.
  for (const PairEdge& e : ctx.pair_edges) {
    if (!ctx.pairs[e.pair].corresponding) continue;
    const State& sS = ctx.pairs[e.pair].source;
    const State& sT = ctx.pairs[e.pair].target;
    auto fail = [&](const std::string& detail) {
      r.verdict = Verdict::Fails;
      Counterexample cx;
      cx.kind = "forward_step";
      cx.source_state = sS;
      cx.target_state = sT;
      cx.command = e.command;
      cx.trace = e.trace;
      cx.correspondence = ctx.correspondence;
      cx.detail = detail;
      r.counterexample = std::move(cx);
    };
    if (e.trace_error) {
      fail("running the emitted trace failed: " + e.trace_error_text);
      return r;
    }
    State nextS = step(ctx.src(), sS, e.command.name, e.command.args);
    State nextT = run_trace(ctx.tgt(), sT, e.trace).final;
    std::string why;
    std::string witness;
    if (!corresponds(sim, nextS, nextT, &why, &witness)) {
      fail("after " + e.command.str() + " the trace " + trace_text(e.trace) +
           " ends in a non-corresponding state: " + why);
      return r;
    }
  }

  if (level == Tag::Rfwd) {
    r.verdict = Verdict::Holds;
    return r;
  }

  // Backward: every native target step from a corresponding pair must have a
  // reachable source witness.
  std::set<std::pair<State, State>> done;
  for (const PairNode& p : ctx.pairs) {
    if (!p.corresponding) continue;
    if (!done.emplace(p.source, p.target).second) continue;
    for (const Ground& g : ground_commands(ctx.tgt(), p.target)) {
      State nextT = step(ctx.tgt(), p.target, g.name, g.args);
      bool truncated_here = false;
      if (source_witness_exists(sim, ctx.run_bound.bound(), p.source, nextT,
                                &truncated_here)) {
        continue;
      }
      r.verdict = Verdict::Fails;
      Counterexample cx;
      cx.kind = "backward_step";
      cx.source_state = p.source;
      cx.target_state = p.target;
      cx.target_command = g;
      cx.correspondence = ctx.correspondence;
      cx.detail = "the native target step " + g.str() +
                  " reaches a state no source state within depth " +
                  std::to_string(ctx.run_bound.max_depth) + " corresponds to";
      r.counterexample = std::move(cx);
      if (truncated_here) {
        r.notes.push_back(
            "BoundTooSmall: the witness search was truncated; a deeper "
            "bound might find a witness");
      }
      return r;
    }
  }
  r.verdict = Verdict::Holds;
  return r;
}

// --- replay ------------------------------------------------------------------------

namespace {

std::map<std::string, std::string> request_map(const MappingDef& m) {
  std::map<std::string, std::string> f = m.request_transform;
  for (const auto& [name, q] : m.source->queries) {
    if (!q.is_request || f.count(name)) continue;
    auto it = m.target->queries.find(name);
    if (it != m.target->queries.end() && it->second.is_request &&
        it->second.params.size() == q.params.size()) {
      f[name] = name;
    }
  }
  return f;
}

}  // namespace

bool replay(const MappingDef& m, const CheckResult& r) {
  if (r.verdict != Verdict::Fails) return true;
  if (!r.counterexample) return false;
  const Counterexample& cx = *r.counterexample;
  const SystemDef& src = *m.source;
  const SystemDef& tgt = *m.target;
  const Tag corr = cx.correspondence.value_or(Tag::SCa);
  SimulationDef sim{&m, corr};

  try {
    if (cx.kind == "side_condition") {
      if (!cx.source_state) return false;
      SimulationDef at{&m, cx.correspondence.value_or(r.property)};
      State image;
      try {
        image = map_state(m, *cx.source_state);
      } catch (const Error&) {
        return true;
      }
      return !corresponds(at, *cx.source_state, image);
    }

    if (cx.kind == "query_preservation") {
      if (!cx.target_state || !cx.query) return false;
      bool truth = entails(tgt, *cx.target_state, cx.query->name, cx.query->args);
      bool decided;
      try {
        decided = decide_query(m, *cx.query, *cx.target_state).value;
      } catch (const Error&) {
        return true;
      }
      return decided != truth;
    }

    if (cx.kind == "query_preservation_w") {
      if (!cx.target_state || !cx.query || !cx.index) return false;
      const State& t = *cx.target_state;
      auto f = request_map(m);
      if (*cx.index == 1) {
        auto it = f.find(cx.query->name);
        if (it == f.end()) return false;
        bool decided;
        try {
          decided = decide_query(m, *cx.query, t).value;
        } catch (const Error&) {
          return false;
        }
        return decided && !entails(tgt, t, it->second, cx.query->args);
      }
      // Condition 2: the granted target request has no decider-true preimage.
      if (!entails(tgt, t, cx.query->name, cx.query->args)) return false;
      for (const auto& [rS, rT] : f) {
        if (rT != cx.query->name) continue;
        try {
          if (decide_query(m, Ground{rS, cx.query->args}, t).value) return false;
        } catch (const Error&) {
          continue;
        }
      }
      return true;
    }

    if (cx.kind == "command_dependence") {
      if (!cx.command || !cx.target_state || !cx.target_state2) return false;
      if (r.property == Tag::CDt &&
          theory(tgt, *cx.target_state) != theory(tgt, *cx.target_state2)) {
        return false;
      }
      CommandImage a = map_command(m, *cx.command, *cx.target_state);
      CommandImage b = map_command(m, *cx.command, *cx.target_state2);
      return a.commands != b.commands;
    }

    if (cx.kind == "stuttering") {
      if (!cx.command || !cx.target_state) return false;
      return map_command(m, *cx.command, *cx.target_state).commands.size() > 1;
    }

    if (cx.kind == "trace_shape") {
      if (!cx.source_state || !cx.target_state || !cx.command || !cx.index) {
        return false;
      }
      const State& sS = *cx.source_state;
      const State& sT = *cx.target_state;
      CommandImage img = map_command(m, *cx.command, sT);
      if (img.commands != cx.trace) return false;
      TraceResult tr = run_trace(tgt, sT, cx.trace);
      const std::size_t mlen = cx.trace.size();
      const std::size_t i = *cx.index;
      if (i < 1 || i > mlen) return false;
      auto state_at = [&](std::size_t k) -> const State& {
        return k == 0 ? sT : tr.intermediates[k - 1];
      };
      if (r.property == Tag::CT1) {
        State nextS = step(src, sS, cx.command->name, cx.command->args);
        return !corresponds(sim, sS, state_at(i)) &&
               !corresponds(sim, nextS, state_at(i));
      }
      if (r.property == Tag::CTq || r.property == Tag::CTa) {
        if (!cx.query) return false;
        bool final_value =
            entails(tgt, state_at(mlen), cx.query->name, cx.query->args);
        bool prev = entails(tgt, state_at(i - 1), cx.query->name, cx.query->args);
        bool cur = entails(tgt, state_at(i), cx.query->name, cx.query->args);
        return cur != prev && cur != final_value;
      }
      if (r.property == Tag::CTs) {
        auto start_allowed = allowed_keys(tgt, sT);
        auto end_allowed = allowed_keys(tgt, state_at(mlen));
        auto mid = allowed_keys(tgt, state_at(i));
        return !std::includes(start_allowed.begin(), start_allowed.end(),
                              mid.begin(), mid.end()) &&
               !std::includes(end_allowed.begin(), end_allowed.end(),
                              mid.begin(), mid.end());
      }
      return false;
    }

    if (cx.kind == "actor") {
      if (!cx.source_state || !cx.target_state || !cx.command || !cx.index) {
        return false;
      }
      CommandImage img = map_command(m, *cx.command, *cx.target_state);
      if (img.commands != cx.trace) return false;
      const std::size_t i = *cx.index;
      if (i < 1 || i > cx.trace.size()) return false;
      auto src_actor = actor_of(src, *cx.command);
      auto tgt_actor = actor_of(tgt, cx.trace[i - 1]);
      if (!src_actor || !tgt_actor) return false;
      if (r.property == Tag::CAtop) return *tgt_actor != *src_actor;
      if (!src.admins || !tgt.admins) return false;
      TraceResult tr = run_trace(tgt, *cx.target_state, cx.trace);
      const State& pre =
          i == 1 ? *cx.target_state : tr.intermediates[i - 2];
      return in_admins(tgt, pre, *tgt_actor) &&
             !in_admins(src, *cx.source_state, *src_actor);
    }

    if (cx.kind == "decider_shape") {
      if (!cx.instance) return false;
      auto it = m.query_rules.find(*cx.instance);
      return it != m.query_rules.end() && !it->second.single_query_form();
    }

    if (cx.kind == "query_dependence") {
      if (!cx.query || !cx.target_state || !cx.target_state2) return false;
      if (r.property == Tag::QDt) {
        if (theory(tgt, *cx.target_state) != theory(tgt, *cx.target_state2)) {
          return false;
        }
        Transcript a = decide_with_transcript(m, *cx.query, *cx.target_state, nullptr);
        Transcript b = decide_with_transcript(m, *cx.query, *cx.target_state2, nullptr);
        return !a.failed && !b.failed && a.value != b.value;
      }
      Transcript a = decide_with_transcript(m, *cx.query, *cx.target_state, nullptr);
      Transcript b = decide_with_transcript(m, *cx.query, *cx.target_state2, nullptr);
      return !a.failed && !b.failed && a.value != b.value &&
             agrees_on(tgt, *cx.target_state2, a.consulted);
    }

    if (cx.kind == "forward_step") {
      if (!cx.source_state || !cx.target_state || !cx.command) return false;
      CommandImage img;
      try {
        img = map_command(m, *cx.command, *cx.target_state);
      } catch (const Error&) {
        return true;
      }
      if (img.commands != cx.trace) return false;
      State nextT;
      try {
        nextT = run_trace(tgt, *cx.target_state, cx.trace).final;
      } catch (const Error&) {
        return true;
      }
      State nextS = step(src, *cx.source_state, cx.command->name, cx.command->args);
      return !corresponds(sim, nextS, nextT);
    }

    if (cx.kind == "backward_step") {
      if (!cx.source_state || !cx.target_state || !cx.target_command) return false;
      State nextT = step(tgt, *cx.target_state, cx.target_command->name,
                         cx.target_command->args);
      return !source_witness_exists(sim, r.bound.bound(), *cx.source_state, nextT);
    }

    if (cx.kind == "checker_error") {
      SimulationDef at{&m, corr};
      Context ctx = build_context(at, r.bound);
      try {
        return check_tag(ctx, r.property).verdict == Verdict::Fails;
      } catch (const Error&) {
        return true;
      }
    }
  } catch (const Error&) {
    return false;  // replay must not mask a stale counterexample as valid
  }
  return false;
}

// --- dispatch ----------------------------------------------------------------------

CheckResult check_tag(Context& ctx, Tag tag) {
  switch (tag_dimension(tag)) {
    case Dimension::SC:
      return check_correspondence(ctx, tag);
    case Dimension::SS:
      return check_storage(ctx, tag);
    case Dimension::CD:
      return check_command_dependence(ctx, tag);
    case Dimension::CC:
      return check_command_complexity(ctx, tag);
    case Dimension::CS:
      return check_stuttering(ctx, tag);
    case Dimension::CT:
      return check_trace_structure(ctx, tag);
    case Dimension::CA:
      return check_actor(ctx, tag);
    case Dimension::QD:
      return check_query_dependence(ctx, tag);
    case Dimension::QC:
      return check_query_complexity(ctx, tag);
    case Dimension::QP:
      return check_query_preservation(ctx, tag);
    case Dimension::R:
      return check_reachability(ctx, tag);
  }
  throw Error(ErrorCode::UnknownTag, "unhandled property tag");
}

const std::vector<Tag>& checkable_tags() { return all_tags(); }

}  // namespace acx
