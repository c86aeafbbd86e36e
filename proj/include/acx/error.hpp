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

#ifndef ACX_ERROR_HPP_
#define ACX_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace acx {

enum class ErrorCode {
  Parse,            // malformed JSON or malformed atom/term syntax
  UnknownSort,
  UnknownRelation,
  UnknownQuery,
  UnknownCommand,
  UnknownSimulation,
  UnknownTag,
  ArityMismatch,
  SortMismatch,
  DuplicateName,
  UnboundVariable,
  RequestNotQuery,
  InvalidState,
  MissingCommandRule,
  MissingQueryRule,
  DuplicateRule,
  RuleEmitsUnknownRelation,
  UntranslatableAtom,
  NoCanonicalData,
  NotFound,
  Invalid,          // catch-all for malformed requests
};

std::string error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(error_code_name(code) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// One problem found while validating a definition. `where` names the
// offending declaration.
struct ValidationIssue {
  ErrorCode code;
  std::string where;
  std::string message;
  bool warning = false;

  std::string str() const;
};

// Thrown when validation finds at least one non-warning issue; carries the
// complete list so callers can report everything at once.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);

  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

}  // namespace acx

#endif  // ACX_ERROR_HPP_
