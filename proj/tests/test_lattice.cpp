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

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acx/error.hpp"
#include "acx/lattice.hpp"
#include "acx/tags.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

using acx::Dimension;
using acx::Tag;
using acx::lattice::Ordering;
using acx::lattice::PropertySet;
using acx::lattice::canonical_usage;
using acx::lattice::catalog;
using acx::lattice::catalog_entry;
using acx::lattice::closure;
using acx::lattice::compare_sets;
using acx::lattice::decompose_named;
using acx::lattice::implies;
using acx::lattice::ordering_name;
using acx::lattice::set_text;
using acx::lattice::strongest_levels;
using acx::lattice::tags_text;

PropertySet set_of(std::initializer_list<Tag> tags) { return PropertySet(tags); }

bool subset(const PropertySet& inner, const PropertySet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

Ordering cmp(const std::string& a, const std::string& b) {
  return compare_sets(decompose_named(a), decompose_named(b));
}

Ordering mirrored(Ordering o) {
  switch (o) {
    case Ordering::StrictlyStronger: return Ordering::StrictlyWeaker;
    case Ordering::StrictlyWeaker: return Ordering::StrictlyStronger;
    default: return o;
  }
}

std::optional<acx::ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const acx::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

const std::vector<std::string>& simulation_names() {
  static const std::vector<std::string> names = {
      "ALS",   "CDMw",  "CDMs",  "Ganta", "HMG+",
      "HMG+a", "HMG+s", "HMG+p", "SMG",   "TL-SMR"};
  return names;
}

}  // namespace

TEST_CASE("implication is reflexive, antisymmetric and transitive") {
  const auto& tags = acx::all_tags();
  for (Tag a : tags) CHECK(implies(a, a));
  for (Tag a : tags) {
    for (Tag b : tags) {
      if (a != b && implies(a, b)) CHECK_FALSE(implies(b, a));
    }
  }
  for (Tag a : tags) {
    for (Tag b : tags) {
      if (!implies(a, b)) continue;
      for (Tag c : tags) {
        if (implies(b, c)) CHECK(implies(a, c));
      }
    }
  }
}

TEST_CASE("within a dimension stricter levels imply weaker ones") {
  const std::vector<std::vector<Tag>> chains = {
      {Tag::SCs, Tag::SCq, Tag::SCa},
      {Tag::SSl, Tag::SSp, Tag::SSinf},
      {Tag::CDi, Tag::CDt, Tag::CDs},
      {Tag::CCc, Tag::CCl, Tag::CCinf},
      {Tag::CS1, Tag::CSc, Tag::CSinf},
      {Tag::CT1, Tag::CTq, Tag::CTa},
      {Tag::CAtop, Tag::CAa},
      {Tag::QD1, Tag::QDi, Tag::QDt, Tag::QDs},
      {Tag::QCc, Tag::QCinf},
      {Tag::QPf, Tag::QPa, Tag::QPw},
      {Tag::Rbi, Tag::Rfwd},
  };
  for (const auto& chain : chains) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
      for (std::size_t j = i + 1; j < chain.size(); ++j) {
        CHECK(implies(chain[i], chain[j]));
        CHECK_FALSE(implies(chain[j], chain[i]));
      }
    }
  }
  CHECK_FALSE(implies(Tag::SCa, Tag::SCq));
}

TEST_CASE("the safety branch of the trace dimension is incomparable") {
  for (Tag t : {Tag::CT1, Tag::CTq, Tag::CTa}) {
    CHECK_FALSE(implies(t, Tag::CTs));
    CHECK_FALSE(implies(Tag::CTs, t));
  }
}

TEST_CASE("cross-dimension implication rules") {
  CHECK(implies(Tag::CDi, Tag::CCc));
  CHECK(implies(Tag::CCc, Tag::CSc));
  CHECK(implies(Tag::QDi, Tag::QCc));
  CHECK(implies(Tag::QPf, Tag::QCc));
  CHECK(implies(Tag::QPf, Tag::QD1));

  // Chained across two rules.
  CHECK(implies(Tag::CDi, Tag::CSc));

  // Weaker levels get no free ride.
  CHECK_FALSE(implies(Tag::CDt, Tag::CCc));
  CHECK_FALSE(implies(Tag::QDt, Tag::QCc));
  CHECK_FALSE(implies(Tag::QPa, Tag::QD1));
  CHECK_FALSE(implies(Tag::QPa, Tag::QCc));

  // No rule runs against the arrow.
  CHECK_FALSE(implies(Tag::CCc, Tag::CDi));
  CHECK_FALSE(implies(Tag::QCc, Tag::QDi));
  CHECK_FALSE(implies(Tag::QD1, Tag::QPf));

  const auto& rules = acx::lattice::implication_rules();
  CHECK(rules.size() == 5);
  for (const auto& rule : rules) {
    CHECK(implies(rule.premise, rule.conclusion));
    CHECK(acx::tag_dimension(rule.premise) != acx::tag_dimension(rule.conclusion));
    CHECK_FALSE(rule.source.empty());
  }
}

TEST_CASE("closure lists every consequence of a set") {
  const PropertySet cd = closure(set_of({Tag::CDi}));
  CHECK(cd.count(Tag::CCc) == 1);
  CHECK(cd.count(Tag::CSc) == 1);
  CHECK(cd == set_of({Tag::CDi, Tag::CDt, Tag::CDs, Tag::CCc, Tag::CCl,
                      Tag::CCinf, Tag::CSc, Tag::CSinf}));
  CHECK(set_text(cd) == "CDi CDt CDs CCc CCl CC∞ CSc CS∞");

  const PropertySet qp = closure(set_of({Tag::QPf}));
  CHECK(qp.count(Tag::QD1) == 1);
  CHECK(qp.count(Tag::QCc) == 1);
  CHECK(qp == set_of({Tag::QD1, Tag::QDi, Tag::QDt, Tag::QDs, Tag::QCc,
                      Tag::QCinf, Tag::QPf, Tag::QPa, Tag::QPw}));

  CHECK(closure(set_of({Tag::QDi})).count(Tag::QCc) == 1);
  CHECK(closure(set_of({Tag::Rbi})) == set_of({Tag::Rbi, Tag::Rfwd}));
  CHECK(closure({}).empty());
}

TEST_CASE("closure is extensive, monotone and idempotent") {
  const std::vector<PropertySet> samples = {
      {},
      set_of({Tag::SCa}),
      set_of({Tag::SCs, Tag::QPa, Tag::Rbi}),
      set_of({Tag::CDi, Tag::QPf}),
      set_of({Tag::CT1, Tag::CTs}),
      closure(set_of({Tag::QPf})),
  };
  for (const auto& p : samples) {
    const PropertySet c = closure(p);
    CHECK(subset(p, c));
    CHECK(closure(c) == c);
  }
  const PropertySet smaller = closure(set_of({Tag::SCq}));
  const PropertySet larger = closure(set_of({Tag::SCq, Tag::QD1}));
  CHECK(subset(smaller, larger));
}

TEST_CASE("strongest_levels keeps one level per ordered dimension") {
  CHECK(strongest_levels(set_of({Tag::CDi})) ==
        set_of({Tag::CDi, Tag::CCc, Tag::CSc}));
  CHECK(strongest_levels(set_of({Tag::QPf})) ==
        set_of({Tag::QD1, Tag::QCc, Tag::QPf}));
  CHECK(strongest_levels(set_of({Tag::SCs, Tag::SCq, Tag::SCa})) ==
        set_of({Tag::SCs}));

  // The safety branch survives next to the ordered trace branch.
  CHECK(strongest_levels(set_of({Tag::CT1, Tag::CTs})) ==
        set_of({Tag::CT1, Tag::CTs}));
  CHECK(strongest_levels(set_of({Tag::CTa, Tag::CTs})) ==
        set_of({Tag::CTa, Tag::CTs}));

  for (const auto& name : simulation_names()) {
    CAPTURE(name);
    const PropertySet s = strongest_levels(decompose_named(name));
    std::map<Dimension, int> per_dimension;
    for (Tag t : s) per_dimension[acx::tag_dimension(t)]++;
    for (const auto& [dim, n] : per_dimension) {
      if (dim == Dimension::CT) {
        CHECK(n <= 2);
      } else {
        CHECK(n == 1);
      }
    }
  }
}

TEST_CASE("the catalog holds the ten surveyed rows in order") {
  const auto& cat = catalog();
  REQUIRE(cat.size() == 10);
  using V = std::vector<Tag>;
  const std::vector<std::pair<std::string, V>> rows = {
      {"ALS", {Tag::SCs, Tag::QPa, Tag::Rbi}},
      {"CDMw", {Tag::SCa, Tag::QPa, Tag::CDi, Tag::Rfwd}},
      {"CDMs", {Tag::SCa, Tag::QPa, Tag::CDi, Tag::CS1, Tag::Rfwd}},
      {"Ganta", {Tag::SCa, Tag::QPa, Tag::CTs, Tag::Rbi}},
      {"HMG+", {Tag::SCq, Tag::QDt, Tag::Rfwd}},
      {"HMG+a", {Tag::SCq, Tag::QDt, Tag::Rfwd, Tag::QPa}},
      {"HMG+s", {Tag::SCq, Tag::QDt, Tag::Rfwd, Tag::CTa}},
      {"HMG+p", {Tag::SCq, Tag::QDt, Tag::Rfwd, Tag::CAa}},
      {"SMG", {Tag::SCa, Tag::Rfwd}},
      {"TL-SMR", {Tag::SCq, Tag::QD1, Tag::Rbi}},
  };
  REQUIRE(rows.size() == cat.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CAPTURE(rows[i].first);
    CHECK(cat[i].name == rows[i].first);
    CHECK(cat[i].decomposition == rows[i].second);
    CHECK_FALSE(cat[i].citation.empty());
  }
}

TEST_CASE("decompositions render with the published spellings") {
  auto text = [](const std::string& name) {
    return tags_text(catalog_entry(name).decomposition);
  };
  CHECK(text("ALS") == "SCs QPa R↔");
  CHECK(text("CDMw") == "SCa QPa CDi R→");
  CHECK(text("CDMs") == "SCa QPa CDi CS1 R→");
  CHECK(text("Ganta") == "SCa QPa CTs R↔");
  CHECK(text("HMG+") == "SCq QDt R→");
  CHECK(text("HMG+a") == "SCq QDt R→ QPa");
  CHECK(text("HMG+s") == "SCq QDt R→ CTa");
  CHECK(text("HMG+p") == "SCq QDt R→ CAa");
  CHECK(text("SMG") == "SCa R→");
  CHECK(text("TL-SMR") == "SCq QD1 R↔");
}

TEST_CASE("canonical usages strengthen the published rows") {
  CHECK(canonical_usage("ALS") ==
        set_of({Tag::SCs, Tag::QPf, Tag::QPa, Tag::Rbi}));
  CHECK(canonical_usage("CDMw") ==
        set_of({Tag::SCa, Tag::QPf, Tag::QPa, Tag::CDi, Tag::Rfwd}));
  CHECK(canonical_usage("CDMs") ==
        set_of({Tag::SCa, Tag::QPf, Tag::QPa, Tag::CDi, Tag::CS1, Tag::Rfwd}));
  CHECK(canonical_usage("HMG+") ==
        set_of({Tag::SCq, Tag::SSl, Tag::QDt, Tag::Rfwd}));
  CHECK(canonical_usage("SMG") == set_of({Tag::SCa, Tag::QPf, Tag::Rfwd}));
  CHECK(canonical_usage("TL-SMR") ==
        set_of({Tag::SCq, Tag::SSp, Tag::QD1, Tag::Rbi}));

  for (const char* name : {"Ganta", "HMG+a", "HMG+s", "HMG+p"}) {
    CAPTURE(name);
    CHECK(code_of([&] { canonical_usage(name); }) ==
          acx::ErrorCode::NoCanonicalData);
  }

  for (const auto& e : catalog()) {
    if (!e.canonical) continue;
    CAPTURE(e.name);
    const PropertySet d = decompose_named(e.name);
    const PropertySet c(e.canonical->begin(), e.canonical->end());
    CHECK(subset(d, c));
  }
}

TEST_CASE("the pairwise strength table matches the survey") {
  const auto& names = simulation_names();

  for (const auto& n : names) {
    CAPTURE(n);
    CHECK(cmp(n, n) == Ordering::Equal);
  }
  for (const auto& a : names) {
    for (const auto& b : names) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(cmp(b, a) == mirrored(cmp(a, b)));
    }
  }

  // SMG sits strictly below every other surveyed simulation.
  for (const auto& n : names) {
    if (n == "SMG") continue;
    CAPTURE(n);
    CHECK(cmp("SMG", n) == Ordering::StrictlyWeaker);
  }

  CHECK(cmp("CDMs", "CDMw") == Ordering::StrictlyStronger);
  for (const char* variant : {"HMG+a", "HMG+s", "HMG+p"}) {
    CAPTURE(variant);
    CHECK(cmp(variant, "HMG+") == Ordering::StrictlyStronger);
  }
  CHECK(cmp("TL-SMR", "HMG+") == Ordering::StrictlyStronger);
  CHECK(cmp("TL-SMR", "SMG") == Ordering::StrictlyStronger);
  for (const char* other : {"CDMw", "CDMs", "ALS", "Ganta"}) {
    CAPTURE(other);
    CHECK(cmp("TL-SMR", other) == Ordering::Incomparable);
  }
}

TEST_CASE("canonical TL-SMR and canonical HMG+ are incomparable") {
  const PropertySet tl = canonical_usage("TL-SMR");
  const PropertySet hm = canonical_usage("HMG+");
  CHECK(compare_sets(tl, hm) == Ordering::Incomparable);

  // The wedge: bidirectional reachability against linear storage.
  const PropertySet ctl = closure(tl);
  const PropertySet chm = closure(hm);
  CHECK(ctl.count(Tag::Rbi) == 1);
  CHECK(ctl.count(Tag::SSp) == 1);
  CHECK(ctl.count(Tag::SSl) == 0);
  CHECK(chm.count(Tag::Rfwd) == 1);
  CHECK(chm.count(Tag::SSl) == 1);
  CHECK(chm.count(Tag::Rbi) == 0);
  CHECK(chm.count(Tag::QD1) == 0);
}

TEST_CASE("set comparison is dominance on closures") {
  CHECK(compare_sets(set_of({Tag::SCs}), set_of({Tag::SCa})) ==
        Ordering::StrictlyStronger);
  CHECK(compare_sets(set_of({Tag::SCa}), set_of({Tag::SCs})) ==
        Ordering::StrictlyWeaker);
  CHECK(compare_sets(set_of({Tag::SCa}), set_of({Tag::QPa})) ==
        Ordering::Incomparable);
  CHECK(compare_sets(set_of({Tag::QPf}),
                     set_of({Tag::QPa, Tag::QD1, Tag::QCc})) ==
        Ordering::StrictlyStronger);
  // A set equals its own closure.
  const PropertySet p = set_of({Tag::CDi, Tag::SCq});
  CHECK(compare_sets(p, closure(p)) == Ordering::Equal);
}

TEST_CASE("ordering names") {
  CHECK(ordering_name(Ordering::Equal) == "Equal");
  CHECK(ordering_name(Ordering::StrictlyStronger) == "StrictlyStronger");
  CHECK(ordering_name(Ordering::StrictlyWeaker) == "StrictlyWeaker");
  CHECK(ordering_name(Ordering::Incomparable) == "Incomparable");
}

TEST_CASE("unknown simulation names are rejected") {
  CHECK(code_of([] { catalog_entry("RBAC96"); }) ==
        acx::ErrorCode::UnknownSimulation);
  CHECK(code_of([] { decompose_named(""); }) ==
        acx::ErrorCode::UnknownSimulation);
  CHECK(code_of([] { canonical_usage("tl-smr"); }) ==
        acx::ErrorCode::UnknownSimulation);
}

TEST_CASE("the machine readable catalog mirrors the in-memory one") {
  const nlohmann::json j = nlohmann::json::parse(acx::lattice::catalog_json());
  REQUIRE(j.contains("simulations"));
  REQUIRE(j.contains("implications"));
  REQUIRE(j["simulations"].size() == 10);
  CHECK(j["implications"].size() == 25);

  for (std::size_t i = 0; i < j["simulations"].size(); ++i) {
    const auto& row = j["simulations"][i];
    const auto& entry = catalog()[i];
    CHECK(row["name"].get<std::string>() == entry.name);
    CHECK(row["citation"].get<std::string>() == entry.citation);
    REQUIRE(row["decomposition"].size() == entry.decomposition.size());
    for (std::size_t k = 0; k < entry.decomposition.size(); ++k) {
      CHECK(row["decomposition"][k].get<std::string>() ==
            acx::tag_ascii(entry.decomposition[k]));
    }
    CHECK(row.contains("canonical") == entry.canonical.has_value());
  }

  for (const auto& e : j["implications"]) {
    const auto premise = acx::parse_tag(e["premise"].get<std::string>());
    const auto conclusion = acx::parse_tag(e["conclusion"].get<std::string>());
    REQUIRE(premise.has_value());
    REQUIRE(conclusion.has_value());
    CHECK(implies(*premise, *conclusion));
    CHECK_FALSE(e["source"].get<std::string>().empty());
  }
}

TEST_CASE("both tag spellings parse and render consistently") {
  for (Tag t : acx::all_tags()) {
    CAPTURE(acx::tag_ascii(t));
    const auto by_ascii = acx::parse_tag(acx::tag_ascii(t));
    const auto by_display = acx::parse_tag(acx::tag_name(t));
    REQUIRE(by_ascii.has_value());
    REQUIRE(by_display.has_value());
    CHECK(*by_ascii == t);
    CHECK(*by_display == t);
  }
  CHECK_FALSE(acx::parse_tag("SCx").has_value());
  CHECK_FALSE(acx::parse_tag("").has_value());
  CHECK(acx::parse_tag("R↔") == Tag::Rbi);
  CHECK(acx::parse_tag("Rbi") == Tag::Rbi);
  CHECK(acx::parse_tag("CA⊤") == Tag::CAtop);
  CHECK(acx::parse_tag("SS∞") == Tag::SSinf);
}
