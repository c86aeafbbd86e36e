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

#include "acx/lattice.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace acx::lattice {

namespace {

constexpr std::size_t N = kTagCount;

std::size_t idx(Tag t) { return static_cast<std::size_t>(t); }
Tag tag_at(std::size_t i) { return static_cast<Tag>(i); }

// Within-dimension successor edges. CT1 > CTq > CTa form the ordered branch;
// CTs sits beside them, comparable to nothing else in CT. CTq > CTa holds
// because requests are queries, and CT1 > CTq because lock-step traces admit
// no intermediate query flips at all.
struct EdgeList {
  std::vector<std::pair<Tag, Tag>> edges;

  EdgeList() {
    auto chain = [&](std::initializer_list<Tag> tags) {
      const Tag* prev = nullptr;
      for (const Tag& t : tags) {
        if (prev) edges.emplace_back(*prev, t);
        prev = &t;
      }
    };
    chain({Tag::SCs, Tag::SCq, Tag::SCa});
    chain({Tag::SSl, Tag::SSp, Tag::SSinf});
    chain({Tag::CDi, Tag::CDt, Tag::CDs});
    chain({Tag::CCc, Tag::CCl, Tag::CCinf});
    chain({Tag::CS1, Tag::CSc, Tag::CSinf});
    chain({Tag::CT1, Tag::CTq, Tag::CTa});
    chain({Tag::CAtop, Tag::CAa});
    chain({Tag::QD1, Tag::QDi, Tag::QDt, Tag::QDs});
    chain({Tag::QCc, Tag::QCinf});
    chain({Tag::QPf, Tag::QPa, Tag::QPw});
    chain({Tag::Rbi, Tag::Rfwd});
    for (const auto& rule : implication_rules()) {
      edges.emplace_back(rule.premise, rule.conclusion);
    }
  }
};

// Reflexive-transitive closure of the edge list.
const std::array<std::array<bool, N>, N>& implies_matrix() {
  static const std::array<std::array<bool, N>, N> m = [] {
    std::array<std::array<bool, N>, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i][i] = true;
    for (const auto& [a, b] : EdgeList().edges) r[idx(a)][idx(b)] = true;
    for (std::size_t k = 0; k < N; ++k) {
      for (std::size_t i = 0; i < N; ++i) {
        if (!r[i][k]) continue;
        for (std::size_t j = 0; j < N; ++j) {
          if (r[k][j]) r[i][j] = true;
        }
      }
    }
    return r;
  }();
  return m;
}

}  // namespace

bool implies(Tag a, Tag b) { return implies_matrix()[idx(a)][idx(b)]; }

PropertySet closure(const PropertySet& p) {
  PropertySet out;
  for (Tag t : p) {
    for (std::size_t j = 0; j < N; ++j) {
      if (implies_matrix()[idx(t)][j]) out.insert(tag_at(j));
    }
  }
  return out;
}

PropertySet strongest_levels(const PropertySet& p) {
  PropertySet full = closure(p);
  PropertySet out;
  for (Tag t : full) {
    bool dominated = false;
    for (Tag u : full) {
      if (u != t && tag_dimension(u) == tag_dimension(t) && implies(u, t)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.insert(t);
  }
  return out;
}

Ordering compare_sets(const PropertySet& a, const PropertySet& b) {
  const PropertySet ea = closure(a);
  const PropertySet eb = closure(b);
  const bool a_covers_b = std::includes(ea.begin(), ea.end(), eb.begin(), eb.end());
  const bool b_covers_a = std::includes(eb.begin(), eb.end(), ea.begin(), ea.end());
  if (a_covers_b && b_covers_a) return Ordering::Equal;
  if (a_covers_b) return Ordering::StrictlyStronger;
  if (b_covers_a) return Ordering::StrictlyWeaker;
  return Ordering::Incomparable;
}

std::string ordering_name(Ordering o) {
  switch (o) {
    case Ordering::Equal: return "Equal";
    case Ordering::StrictlyStronger: return "StrictlyStronger";
    case Ordering::StrictlyWeaker: return "StrictlyWeaker";
    case Ordering::Incomparable: return "Incomparable";
  }
  return "?";
}

const std::vector<ImplicationRule>& implication_rules() {
  static const std::vector<ImplicationRule> rules = {
      {Tag::CDi, Tag::CCc,
       "a state-independent command mapping runs in constant time in the "
       "state size"},
      {Tag::CCc, Tag::CSc,
       "a constant-time command mapping can only emit a bounded number of "
       "commands"},
      {Tag::QDi, Tag::QCc,
       "a state-independent query decider runs in constant time in the "
       "state size"},
      {Tag::QPf, Tag::QCc,
       "deciding by the identity is a constant-time procedure"},
      {Tag::QPf, Tag::QD1,
       "the identity sends each query to exactly one query"},
  };
  return rules;
}

const std::vector<CatalogEntry>& catalog() {
  using T = Tag;
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    auto plus = [](std::vector<Tag> base, std::initializer_list<Tag> extra) {
      for (Tag t : extra) base.push_back(t);
      return base;
    };
    // Decompositions as published in the survey table; canonical usages only
    // where the surveyed sources pin one down.
    std::vector<Tag> als{T::SCs, T::QPa, T::Rbi};
    v.push_back({"ALS", als, plus(als, {T::QPf}),
                 "Ammann, Lipton and Sandhu (1996)"});
    std::vector<Tag> cdmw{T::SCa, T::QPa, T::CDi, T::Rfwd};
    v.push_back({"CDMw", cdmw, plus(cdmw, {T::QPf}),
                 "Chander, Dean and Mitchell (2001), weak form"});
    std::vector<Tag> cdms{T::SCa, T::QPa, T::CDi, T::CS1, T::Rfwd};
    v.push_back({"CDMs", cdms, plus(cdms, {T::QPf}),
                 "Chander, Dean and Mitchell (2001), strong form"});
    v.push_back({"Ganta", {T::SCa, T::QPa, T::CTs, T::Rbi}, std::nullopt,
                 "Ganta (1996)"});
    std::vector<Tag> hmg{T::SCq, T::QDt, T::Rfwd};
    v.push_back({"HMG+", hmg, plus(hmg, {T::SSl}),
                 "Hinrichs, Martinoia, Garrison, Lee, Panebianco and "
                 "Zuck (2013)"});
    v.push_back({"HMG+a", plus(hmg, {T::QPa}), std::nullopt,
                 "Hinrichs et al. (2013), authorization-preserving variant"});
    v.push_back({"HMG+s", plus(hmg, {T::CTa}), std::nullopt,
                 "Hinrichs et al. (2013), safe variant"});
    v.push_back({"HMG+p", plus(hmg, {T::CAa}), std::nullopt,
                 "Hinrichs et al. (2013), administration-preserving variant"});
    std::vector<Tag> smg{T::SCa, T::Rfwd};
    v.push_back({"SMG", smg, plus(smg, {T::QPf}),
                 "Sandhu, Munawer and Ganta line of reductions (1992-2000)"});
    std::vector<Tag> tlsmr{T::SCq, T::QD1, T::Rbi};
    v.push_back({"TL-SMR", tlsmr, plus(tlsmr, {T::SSp}),
                 "Tripunitara and Li (2007), state-matching reductions"});
    return v;
  }();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::UnknownSimulation, "no catalog entry named '" + name + "'");
}

PropertySet decompose_named(const std::string& name) {
  const auto& e = catalog_entry(name);
  return PropertySet(e.decomposition.begin(), e.decomposition.end());
}

PropertySet canonical_usage(const std::string& name) {
  const auto& e = catalog_entry(name);
  if (!e.canonical) {
    throw Error(ErrorCode::NoCanonicalData,
                "the surveyed sources report no canonical usage for '" + name + "'");
  }
  return PropertySet(e.canonical->begin(), e.canonical->end());
}

std::string tags_text(const std::vector<Tag>& tags) {
  std::ostringstream os;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) os << ' ';
    os << tag_name(tags[i]);
  }
  return os.str();
}

std::string set_text(const PropertySet& p) {
  std::vector<Tag> ordered;
  for (Tag t : all_tags()) {
    if (p.count(t)) ordered.push_back(t);
  }
  return tags_text(ordered);
}

std::string catalog_json() {
  nlohmann::json j;
  j["simulations"] = nlohmann::json::array();
  for (const auto& e : catalog()) {
    nlohmann::json row;
    row["name"] = e.name;
    row["citation"] = e.citation;
    row["decomposition"] = nlohmann::json::array();
    for (Tag t : e.decomposition) row["decomposition"].push_back(tag_ascii(t));
    if (e.canonical) {
      row["canonical"] = nlohmann::json::array();
      for (Tag t : *e.canonical) row["canonical"].push_back(tag_ascii(t));
    }
    j["simulations"].push_back(row);
  }
  j["implications"] = nlohmann::json::array();
  auto edge = [](Tag a, Tag b, const std::string& src) {
    nlohmann::json e;
    e["premise"] = tag_ascii(a);
    e["conclusion"] = tag_ascii(b);
    e["source"] = src;
    return e;
  };
  for (Tag t : all_tags()) {
    for (Tag u : all_tags()) {
      if (t == u || tag_dimension(t) != tag_dimension(u)) continue;
      // Direct within-dimension successors only, to keep the list minimal.
      if (implies(t, u) && tag_rank(u) == tag_rank(t) + 1 &&
          !(t == Tag::CTs || u == Tag::CTs)) {
        j["implications"].push_back(
            edge(t, u, "strictness order within the dimension"));
      }
    }
  }
  for (const auto& r : implication_rules()) {
    j["implications"].push_back(edge(r.premise, r.conclusion, r.source));
  }
  return j.dump(2) + "\n";
}

}  // namespace acx::lattice
