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
//
// The declarative mapping language: how a source system's states, commands
// and queries translate into a target system. Interpreting a rule also
// meters its work and records what it consulted, which is the raw material
// for the dependence and complexity checkers.

#ifndef ACX_MAPPING_HPP_
#define ACX_MAPPING_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "acx/core.hpp"
#include "acx/json_io.hpp"

namespace acx {

// Work done by one interpreter call.
struct CostCounter {
  std::size_t bindings_enumerated = 0;   // candidate bindings tried in loops
  std::size_t state_items_inspected = 0; // raw atoms/tuples read
  std::size_t commands_emitted = 0;
  std::size_t queries_consulted = 0;     // target query evaluations

  CostCounter& operator+=(const CostCounter& o);
};

// What a rule actually consulted while running.
struct DependenceEvidence {
  bool consulted_queries = false;  // theory-level information
  bool consulted_raw = false;      // raw state beyond the query interface

  void merge(const DependenceEvidence& o);
};

// One conjunct of a state rule pattern: bind a variable over a sort, or bind
// variables over the rows of a relation.
struct StatePattern {
  bool over_sort = false;
  std::string name;                // sort or relation
  std::vector<std::string> vars;   // 1 for sorts, arity-many for relations
};

// One emission of a state rule.
struct StateEmit {
  bool universe = false;     // else tuple
  std::string name;          // target sort or target relation
  std::vector<Term> terms;   // 1 for universes, arity-many for tuples
};

// For every assignment of the pattern variables (a join over the source
// state), add the emissions to the target state. No pattern = emit once.
struct StateMappingRule {
  std::vector<StatePattern> pattern;
  std::vector<StateEmit> emits;
};

// Command rule bodies are ordered step lists.
struct CommandStep {
  enum class Kind { Emit, Foreach, When };
  Kind kind = Kind::Emit;

  // Emit
  std::string command;
  std::vector<Term> terms;

  // Foreach: bind the free variables of a target query or relation pattern,
  // in canonical atom order, and run the body per binding.
  bool over_query = false;       // else over a relation
  std::string name;
  std::vector<Term> pattern;     // terms; unbound vars become binders

  // When: run the body iff the condition holds. Conditions are formulas over
  // target query atoms, raw Member atoms, and Distinct.
  Formula condition = Formula::land({});

  std::vector<CommandStep> body;  // Foreach / When
};

struct CommandMappingRule {
  std::string command;              // source command
  std::vector<std::string> params;  // rebinds the source arguments
  std::vector<CommandStep> body;
};

// How a source query is decided against a target state.
struct QueryDeciderRule {
  enum class Kind {
    AsFormula,   // boolean expression over target query atoms
    EvalTheory,  // formula over query atoms, quantifiers allowed
    EvalState,   // formula over raw relation atoms, quantifiers allowed
  };
  std::string query;                // source query
  std::vector<std::string> params;
  Kind kind = Kind::AsFormula;
  Formula body;

  // AsFormula whose body is exactly one positive query application.
  bool single_query_form() const;
};

struct MappingDef {
  std::string name;
  std::shared_ptr<const SystemDef> source;
  std::shared_ptr<const SystemDef> target;
  std::vector<StateMappingRule> state_rules;
  std::map<std::string, CommandMappingRule> command_rules;  // by source command
  std::map<std::string, QueryDeciderRule> query_rules;      // by source query
  // Optional request renaming, source request name -> target request name.
  std::map<std::string, std::string> request_transform;
};

// --- interpretation ---------------------------------------------------------

// Image of a source state. Deterministic; validates the result against the
// target schema. Throws Error{RuleEmitsUnknownRelation, SortMismatch}.
State map_state(const MappingDef& m, const State& s);

struct CommandImage {
  std::vector<Ground> commands;
  CostCounter cost;            // commands_emitted == commands.size()
  DependenceEvidence evidence;
};

// Target command sequence for one ground source command against a target
// state. Throws Error{UnknownCommand, ArityMismatch} for ill-formed calls.
CommandImage map_command(const MappingDef& m, const Ground& source_command,
                         const State& target_state);

struct QueryDecision {
  bool value = false;
  CostCounter cost;
  DependenceEvidence evidence;
};

// Decides a ground source query against a target state. Every argument atom
// must have an image in the target state. Throws Error{UnknownQuery,
// ArityMismatch, UntranslatableAtom}.
QueryDecision decide_query(const MappingDef& m, const Ground& source_query,
                           const State& target_state);

// --- construction -----------------------------------------------------------

// Parses and validates a mapping. Source/target are resolved by the caller.
// Throws ValidationError with MissingCommandRule / MissingQueryRule /
// DuplicateRule / RuleEmitsUnknownRelation and friends.
MappingDef mapping_from_json(const Json& j,
                             std::shared_ptr<const SystemDef> source,
                             std::shared_ptr<const SystemDef> target,
                             std::vector<ValidationIssue>* warnings = nullptr);

Json mapping_to_json(const MappingDef& m);

// The identity mapping of a system onto itself: states copy over, commands
// map to themselves, queries decide by their own entailment.
MappingDef identity_mapping(std::shared_ptr<const SystemDef> sys);

// Static shape summaries used by the dependence/storage checkers.
struct MappingShape {
  bool commands_use_foreach_or_when = false;
  bool commands_consult_raw = false;      // relation loops or Member conditions
  bool commands_consult_queries = false;
  int max_state_rule_join = 0;            // widest pattern join
  std::map<std::string, QueryDeciderRule::Kind> decider_kinds;
};

MappingShape mapping_shape(const MappingDef& m);

}  // namespace acx

#endif  // ACX_MAPPING_HPP_
