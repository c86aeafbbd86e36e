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

#ifndef ACX_LATTICE_HPP_
#define ACX_LATTICE_HPP_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acx/error.hpp"
#include "acx/tags.hpp"

namespace acx::lattice {

// A set of property levels. closure() rewrites it to its full consequence
// set; strongest_levels() projects the strongest level per dimension.
using PropertySet = std::set<Tag>;

// True iff holding `a` guarantees holding `b`. Reflexive and transitive.
// Encodes the within-dimension strictness orders plus the cross-dimension
// rules listed in implication_rules().
bool implies(Tag a, Tag b);

// Every tag implied by some member of p (downward closure). Idempotent,
// monotone, and the normal form set comparison runs on.
PropertySet closure(const PropertySet& p);

// Members of closure(p) not implied by another member of their own
// dimension. One level per totally ordered dimension; CTs can sit next to a
// CT1/CTq/CTa level since that pair is incomparable.
PropertySet strongest_levels(const PropertySet& p);

enum class Ordering {
  Equal,
  StrictlyStronger,  // left dominates right
  StrictlyWeaker,    // right dominates left
  Incomparable,
};

// Dominance on closures: a set dominates another iff every guarantee of the
// weaker set is implied by some member of the stronger one.
Ordering compare_sets(const PropertySet& a, const PropertySet& b);

std::string ordering_name(Ordering o);

// One cross-dimension implication, with a one-line justification.
struct ImplicationRule {
  Tag premise;
  Tag conclusion;
  std::string source;
};

// The cross-dimension rules only; within-dimension edges come from the
// strictness ranks in tags.hpp.
const std::vector<ImplicationRule>& implication_rules();

// A surveyed simulation: its published decomposition into property levels
// and, where the survey reported one, the strengthened property set its
// canonical usage satisfies.
struct CatalogEntry {
  std::string name;
  std::vector<Tag> decomposition;                 // published order
  std::optional<std::vector<Tag>> canonical;      // full set, superset of decomposition
  std::string citation;
};

const std::vector<CatalogEntry>& catalog();

// Lookup by simulation name. Throws Error{UnknownSimulation}.
const CatalogEntry& catalog_entry(const std::string& name);

// Published decomposition as a set (pre-closure). Throws Error{UnknownSimulation}.
PropertySet decompose_named(const std::string& name);

// Property set of the simulation's canonical usage (pre-closure).
// Throws Error{UnknownSimulation} or Error{NoCanonicalData}.
PropertySet canonical_usage(const std::string& name);

// Tags joined with single spaces, display spelling, in the given order.
std::string tags_text(const std::vector<Tag>& tags);

// PropertySet in enumeration order (dimension-major, strongest first).
std::string set_text(const PropertySet& p);

// Machine readable catalog: the ten entries plus every implication edge.
std::string catalog_json();

}  // namespace acx::lattice

#endif  // ACX_LATTICE_HPP_
