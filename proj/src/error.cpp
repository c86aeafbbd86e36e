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

#include "acx/error.hpp"

#include <sstream>

namespace acx {

std::string error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::UnknownSort: return "UnknownSort";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::UnknownQuery: return "UnknownQuery";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::UnknownSimulation: return "UnknownSimulation";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::SortMismatch: return "SortMismatch";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::RequestNotQuery: return "RequestNotQuery";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::MissingCommandRule: return "MissingCommandRule";
    case ErrorCode::MissingQueryRule: return "MissingQueryRule";
    case ErrorCode::DuplicateRule: return "DuplicateRule";
    case ErrorCode::RuleEmitsUnknownRelation: return "RuleEmitsUnknownRelation";
    case ErrorCode::UntranslatableAtom: return "UntranslatableAtom";
    case ErrorCode::NoCanonicalData: return "NoCanonicalData";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Invalid: return "Invalid";
  }
  return "Unknown";
}

std::string ValidationIssue::str() const {
  std::ostringstream os;
  os << (warning ? "warning" : "error") << " [" << error_code_name(code) << "] "
     << where << ": " << message;
  return os.str();
}

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::ostringstream os;
  std::size_t errors = 0;
  for (const auto& i : issues) {
    if (!i.warning) ++errors;
  }
  os << errors << " validation error(s)";
  for (const auto& i : issues) {
    if (!i.warning) os << "\n  " << i.str();
  }
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(ErrorCode::Invalid, join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace acx
