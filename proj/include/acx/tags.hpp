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

#ifndef ACX_TAGS_HPP_
#define ACX_TAGS_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace acx {

// Dimensions of simulation properties. Every checkable property belongs to
// exactly one dimension; within a dimension levels are ordered from most to
// least strict (CT is the one partially ordered dimension).
enum class Dimension : std::uint8_t {
  SC,  // state correspondence
  SS,  // state storage growth
  CD,  // command mapping dependence
  CC,  // command mapping complexity
  CS,  // command stuttering width
  CT,  // trace structure
  CA,  // actor preservation
  QD,  // query decider dependence
  QC,  // query decider complexity
  QP,  // query preservation
  R,   // reachability
};

// One property level. The enumeration is closed: checkers, the lattice and
// the report format all share it.
enum class Tag : std::uint8_t {
  SCs, SCq, SCa,
  SSl, SSp, SSinf,
  CDi, CDt, CDs,
  CCc, CCl, CCinf,
  CS1, CSc, CSinf,
  CT1, CTq, CTa, CTs,
  CAtop, CAa,
  QD1, QDi, QDt, QDs,
  QCc, QCinf,
  QPf, QPa, QPw,
  Rbi, Rfwd,
};

inline constexpr std::size_t kTagCount = 32;

Dimension tag_dimension(Tag t);

// Display spelling, e.g. "R<->" is rendered "R↔". Used in text output
// and in the lattice catalog.
std::string_view tag_name(Tag t);

// ASCII spelling accepted on the command line, e.g. "Rbi", "CAtop", "SSinf".
std::string_view tag_ascii(Tag t);

std::string_view dimension_name(Dimension d);

// Accepts both the ASCII and the display spelling.
std::optional<Tag> parse_tag(std::string_view s);

const std::vector<Tag>& all_tags();

// Rank of a level inside its dimension, 0 = strictest. CTs gets its own
// branch: it is not comparable to CT1/CTq/CTa.
int tag_rank(Tag t);

}  // namespace acx

#endif  // ACX_TAGS_HPP_
