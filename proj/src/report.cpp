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

#include <sstream>

#include "acx/props.hpp"

namespace acx {

bool Report::all_pass() const {
  for (const CheckResult& r : results) {
    if (!r.passed()) return false;
  }
  return true;
}

std::map<Dimension, Tag> Report::strongest() const {
  std::map<Dimension, Tag> out;
  for (const CheckResult& r : results) {
    if (!r.passed()) continue;
    Dimension d = tag_dimension(r.property);
    auto it = out.find(d);
    if (it == out.end() || tag_rank(r.property) < tag_rank(it->second) ||
        (tag_rank(r.property) == tag_rank(it->second) &&
         static_cast<int>(r.property) < static_cast<int>(it->second))) {
      out[d] = r.property;
    }
  }
  return out;
}

Report check_property_set(const MappingDef& m, const RunBound& rb,
                          const std::vector<Tag>& props) {
  Tag corr = Tag::SCa;
  bool have_sc = false;
  for (Tag t : props) {
    if (tag_dimension(t) != Dimension::SC) continue;
    if (!have_sc || tag_rank(t) < tag_rank(corr)) corr = t;
    have_sc = true;
  }
  SimulationDef sim{&m, corr};
  Context ctx = build_context(sim, rb);

  Report rep;
  rep.mapping_name = m.name;
  rep.source_name = m.source->name;
  rep.target_name = m.target->name;
  rep.bound = rb;
  rep.correspondence = corr;
  rep.source_states = ctx.source.states.size();
  rep.source_edges = ctx.source.edges.size();
  rep.pairs = ctx.pairs.size();
  rep.target_pool = ctx.target_pool.size();
  rep.truncated = ctx.truncated;

  for (Tag t : props) {
    CheckResult res;
    try {
      res = check_tag(ctx, t);
    } catch (const Error& e) {
      res = CheckResult{};
      res.property = t;
      res.bound = rb;
      res.verdict = Verdict::Fails;
      Counterexample cx;
      cx.kind = "checker_error";
      cx.correspondence = corr;
      cx.detail = e.what();
      res.counterexample = std::move(cx);
    }
    rep.results.push_back(std::move(res));
  }
  return rep;
}

// --- serialization ------------------------------------------------------------

namespace {

Json bound_to_json(const RunBound& b) {
  return Json{{"atoms_per_sort", b.atoms_per_sort},
              {"max_new_atoms", b.max_new_atoms},
              {"max_depth", b.max_depth}};
}

RunBound bound_from_json(const Json& j) {
  RunBound b;
  b.atoms_per_sort = j.at("atoms_per_sort").get<std::size_t>();
  b.max_new_atoms = j.at("max_new_atoms").get<std::size_t>();
  b.max_depth = j.at("max_depth").get<std::size_t>();
  return b;
}

Json cost_to_json(const CostCounter& c) {
  return Json{{"bindings_enumerated", c.bindings_enumerated},
              {"state_items_inspected", c.state_items_inspected},
              {"commands_emitted", c.commands_emitted},
              {"queries_consulted", c.queries_consulted}};
}

CostCounter cost_from_json(const Json& j) {
  CostCounter c;
  c.bindings_enumerated = j.at("bindings_enumerated").get<std::size_t>();
  c.state_items_inspected = j.at("state_items_inspected").get<std::size_t>();
  c.commands_emitted = j.at("commands_emitted").get<std::size_t>();
  c.queries_consulted = j.at("queries_consulted").get<std::size_t>();
  return c;
}

std::string verdict_key(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Fails:
      return "fails";
    case Verdict::Evidence:
      return "evidence";
    case Verdict::Inapplicable:
      return "inapplicable";
  }
  return "holds";
}

Verdict verdict_from_key(const std::string& s) {
  if (s == "holds") return Verdict::Holds;
  if (s == "fails") return Verdict::Fails;
  if (s == "evidence") return Verdict::Evidence;
  if (s == "inapplicable") return Verdict::Inapplicable;
  throw Error(ErrorCode::Parse, "unknown verdict '" + s + "'");
}

Tag required_tag(const std::string& s) {
  auto t = parse_tag(s);
  if (!t) throw Error(ErrorCode::UnknownTag, "unknown property tag '" + s + "'");
  return *t;
}

Json counterexample_to_json(const Counterexample& cx) {
  Json j;
  j["kind"] = cx.kind;
  j["detail"] = cx.detail;
  if (cx.source_state) j["source_state"] = state_to_json(*cx.source_state);
  if (cx.target_state) j["target_state"] = state_to_json(*cx.target_state);
  if (cx.target_state2) j["target_state2"] = state_to_json(*cx.target_state2);
  if (cx.command) j["command"] = ground_to_json(*cx.command);
  if (!cx.trace.empty()) {
    Json arr = Json::array();
    for (const Ground& g : cx.trace) arr.push_back(ground_to_json(g));
    j["trace"] = std::move(arr);
  }
  if (cx.target_command) j["target_command"] = ground_to_json(*cx.target_command);
  if (cx.instance) j["instance"] = *cx.instance;
  if (cx.index) j["index"] = *cx.index;
  if (cx.query) j["query"] = ground_to_json(*cx.query);
  if (cx.correspondence) j["correspondence"] = tag_ascii(*cx.correspondence);
  return j;
}

Counterexample counterexample_from_json(const Json& j) {
  Counterexample cx;
  cx.kind = j.at("kind").get<std::string>();
  cx.detail = j.value("detail", std::string{});
  if (j.contains("source_state")) cx.source_state = state_from_json(j["source_state"]);
  if (j.contains("target_state")) cx.target_state = state_from_json(j["target_state"]);
  if (j.contains("target_state2")) cx.target_state2 = state_from_json(j["target_state2"]);
  if (j.contains("command")) cx.command = ground_from_json(j["command"]);
  if (j.contains("trace")) {
    for (const Json& g : j["trace"]) cx.trace.push_back(ground_from_json(g));
  }
  if (j.contains("target_command")) {
    cx.target_command = ground_from_json(j["target_command"]);
  }
  if (j.contains("instance")) cx.instance = j["instance"].get<std::string>();
  if (j.contains("index")) cx.index = j["index"].get<std::size_t>();
  if (j.contains("query")) cx.query = ground_from_json(j["query"]);
  if (j.contains("correspondence")) {
    cx.correspondence = required_tag(j["correspondence"].get<std::string>());
  }
  return cx;
}

}  // namespace

Json check_result_to_json(const CheckResult& r) {
  Json j;
  j["property"] = tag_ascii(r.property);
  j["verdict"] = verdict_key(r.verdict);
  if (r.verdict == Verdict::Evidence) j["evidence_holds"] = r.evidence_holds;
  j["bound"] = bound_to_json(r.bound);
  if (r.counterexample) j["counterexample"] = counterexample_to_json(*r.counterexample);
  if (!r.samples.empty()) {
    Json arr = Json::array();
    for (const Sample& s : r.samples) {
      arr.push_back(Json{{"size", s.size}, {"value", s.value}});
    }
    j["samples"] = std::move(arr);
  }
  if (!r.fitted.empty()) j["fitted"] = r.fitted;
  j["stats"] = cost_to_json(r.stats);
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

CheckResult check_result_from_json(const Json& j) {
  CheckResult r;
  r.property = required_tag(j.at("property").get<std::string>());
  r.verdict = verdict_from_key(j.at("verdict").get<std::string>());
  r.evidence_holds = j.value("evidence_holds", false);
  r.bound = bound_from_json(j.at("bound"));
  if (j.contains("counterexample")) {
    r.counterexample = counterexample_from_json(j["counterexample"]);
  }
  if (j.contains("samples")) {
    for (const Json& s : j["samples"]) {
      r.samples.push_back({s.at("size").get<double>(), s.at("value").get<double>()});
    }
  }
  if (j.contains("fitted")) {
    r.fitted = j["fitted"].get<std::map<std::string, double>>();
  }
  if (j.contains("stats")) r.stats = cost_from_json(j["stats"]);
  if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
  return r;
}

Json report_to_json(const Report& r) {
  Json j;
  j["kind"] = "acx-report";
  j["version"] = 1;
  j["mapping"] = r.mapping_name;
  j["source"] = r.source_name;
  j["target"] = r.target_name;
  j["bound"] = bound_to_json(r.bound);
  j["correspondence"] = tag_ascii(r.correspondence);
  j["exploration"] = Json{{"source_states", r.source_states},
                          {"source_edges", r.source_edges},
                          {"pairs", r.pairs},
                          {"target_pool", r.target_pool},
                          {"truncated", r.truncated}};
  Json arr = Json::array();
  for (const CheckResult& res : r.results) arr.push_back(check_result_to_json(res));
  j["results"] = std::move(arr);
  return j;
}

Report report_from_json(const Json& j) {
  if (j.value("kind", std::string{}) != "acx-report") {
    throw Error(ErrorCode::Parse, "not an acx report");
  }
  Report r;
  r.mapping_name = j.at("mapping").get<std::string>();
  r.source_name = j.at("source").get<std::string>();
  r.target_name = j.at("target").get<std::string>();
  r.bound = bound_from_json(j.at("bound"));
  r.correspondence = required_tag(j.at("correspondence").get<std::string>());
  const Json& ex = j.at("exploration");
  r.source_states = ex.at("source_states").get<std::size_t>();
  r.source_edges = ex.at("source_edges").get<std::size_t>();
  r.pairs = ex.at("pairs").get<std::size_t>();
  r.target_pool = ex.at("target_pool").get<std::size_t>();
  r.truncated = ex.at("truncated").get<bool>();
  for (const Json& res : j.at("results")) {
    r.results.push_back(check_result_from_json(res));
  }
  return r;
}

std::string report_text(const Report& r) {
  std::ostringstream out;
  out << "mapping " << r.mapping_name << ": " << r.source_name << " -> "
      << r.target_name << "\n";
  out << "bound " << r.bound.str() << "; correspondence "
      << tag_name(r.correspondence) << "\n";
  out << "explored " << r.source_states << " source state(s), "
      << r.source_edges << " edge(s), " << r.pairs << " pair(s), "
      << r.target_pool << " target state(s)";
  if (r.truncated) out << " [truncated]";
  out << "\n";
  for (const CheckResult& res : r.results) {
    out << "  " << tag_name(res.property);
    for (std::size_t pad = tag_name(res.property).size(); pad < 6; ++pad) {
      out << ' ';
    }
    out << verdict_name(res.verdict, res.evidence_holds);
    bool first = true;
    auto annotate = [&](const std::string& text) {
      out << (first ? "  (" : "; ") << text;
      first = false;
    };
    for (const auto& [key, value] : res.fitted) {
      std::ostringstream v;
      v << value;
      annotate(key + "=" + v.str());
    }
    if (res.counterexample) annotate(res.counterexample->detail);
    if (!res.notes.empty() && res.verdict != Verdict::Fails) {
      annotate(res.notes.front());
    }
    if (!first) out << ")";
    out << "\n";
  }
  if (r.all_pass()) {
    out << "all requested properties hold at this bound\n";
  } else {
    out << "some requested properties fail\n";
  }
  return out.str();
}

}  // namespace acx
