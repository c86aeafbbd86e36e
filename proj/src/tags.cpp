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

#include "acx/tags.hpp"

#include <array>

namespace acx {

namespace {

struct TagInfo {
  Tag tag;
  Dimension dim;
  int rank;  // 0 = strictest within the dimension branch
  std::string_view display;
  std::string_view ascii;
};

// CTs carries rank 0 on its own branch; tag_rank alone never orders CT
// levels across branches (see lattice.cpp).
constexpr std::array<TagInfo, kTagCount> kTags{{
    {Tag::SCs, Dimension::SC, 0, "SCs", "SCs"},
    {Tag::SCq, Dimension::SC, 1, "SCq", "SCq"},
    {Tag::SCa, Dimension::SC, 2, "SCa", "SCa"},
    {Tag::SSl, Dimension::SS, 0, "SSl", "SSl"},
    {Tag::SSp, Dimension::SS, 1, "SSp", "SSp"},
    {Tag::SSinf, Dimension::SS, 2, "SS∞", "SSinf"},
    {Tag::CDi, Dimension::CD, 0, "CDi", "CDi"},
    {Tag::CDt, Dimension::CD, 1, "CDt", "CDt"},
    {Tag::CDs, Dimension::CD, 2, "CDs", "CDs"},
    {Tag::CCc, Dimension::CC, 0, "CCc", "CCc"},
    {Tag::CCl, Dimension::CC, 1, "CCl", "CCl"},
    {Tag::CCinf, Dimension::CC, 2, "CC∞", "CCinf"},
    {Tag::CS1, Dimension::CS, 0, "CS1", "CS1"},
    {Tag::CSc, Dimension::CS, 1, "CSc", "CSc"},
    {Tag::CSinf, Dimension::CS, 2, "CS∞", "CSinf"},
    {Tag::CT1, Dimension::CT, 0, "CT1", "CT1"},
    {Tag::CTq, Dimension::CT, 1, "CTq", "CTq"},
    {Tag::CTa, Dimension::CT, 2, "CTa", "CTa"},
    {Tag::CTs, Dimension::CT, 0, "CTs", "CTs"},
    {Tag::CAtop, Dimension::CA, 0, "CA⊤", "CAtop"},
    {Tag::CAa, Dimension::CA, 1, "CAa", "CAa"},
    {Tag::QD1, Dimension::QD, 0, "QD1", "QD1"},
    {Tag::QDi, Dimension::QD, 1, "QDi", "QDi"},
    {Tag::QDt, Dimension::QD, 2, "QDt", "QDt"},
    {Tag::QDs, Dimension::QD, 3, "QDs", "QDs"},
    {Tag::QCc, Dimension::QC, 0, "QCc", "QCc"},
    {Tag::QCinf, Dimension::QC, 1, "QC∞", "QCinf"},
    {Tag::QPf, Dimension::QP, 0, "QPf", "QPf"},
    {Tag::QPa, Dimension::QP, 1, "QPa", "QPa"},
    {Tag::QPw, Dimension::QP, 2, "QPw", "QPw"},
    {Tag::Rbi, Dimension::R, 0, "R↔", "Rbi"},
    {Tag::Rfwd, Dimension::R, 1, "R→", "Rfwd"},
}};

const TagInfo& info(Tag t) { return kTags[static_cast<std::size_t>(t)]; }

}  // namespace

Dimension tag_dimension(Tag t) { return info(t).dim; }
std::string_view tag_name(Tag t) { return info(t).display; }
std::string_view tag_ascii(Tag t) { return info(t).ascii; }
int tag_rank(Tag t) { return info(t).rank; }

std::string_view dimension_name(Dimension d) {
  switch (d) {
    case Dimension::SC: return "SC";
    case Dimension::SS: return "SS";
    case Dimension::CD: return "CD";
    case Dimension::CC: return "CC";
    case Dimension::CS: return "CS";
    case Dimension::CT: return "CT";
    case Dimension::CA: return "CA";
    case Dimension::QD: return "QD";
    case Dimension::QC: return "QC";
    case Dimension::QP: return "QP";
    case Dimension::R: return "R";
  }
  return "?";
}

std::optional<Tag> parse_tag(std::string_view s) {
  for (const auto& t : kTags) {
    if (s == t.ascii || s == t.display) return t.tag;
  }
  return std::nullopt;
}

const std::vector<Tag>& all_tags() {
  static const std::vector<Tag> tags = [] {
    std::vector<Tag> v;
    v.reserve(kTagCount);
    for (const auto& t : kTags) v.push_back(t.tag);
    return v;
  }();
  return tags;
}

}  // namespace acx
