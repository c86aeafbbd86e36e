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
// Finite relational state machines: states made of sorted universes and
// relations, guarded commands that rewrite them, and queries evaluated by
// formula entailment. This is the ground everything else stands on.

#ifndef ACX_CORE_HPP_
#define ACX_CORE_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "acx/error.hpp"

namespace acx {

// An element of a universe. Identity is the canonical string: plain atoms
// render as their identifier, derived atoms as "tag(arg,...)" and compare
// structurally through that rendering. Derived atoms give Fresh effects and
// mapping rules deterministic element construction.
class Atom {
 public:
  Atom() = default;
  // Parses the canonical form; throws Error{Parse} on bad syntax.
  explicit Atom(const std::string& text);

  static Atom derived(const std::string& tag, const std::vector<Atom>& args);

  const std::string& str() const { return repr_; }
  bool is_derived() const { return repr_.find('(') != std::string::npos; }

  bool operator==(const Atom& o) const { return repr_ == o.repr_; }
  bool operator!=(const Atom& o) const { return repr_ != o.repr_; }
  bool operator<(const Atom& o) const { return repr_ < o.repr_; }

 private:
  std::string repr_;
};

using Tuple = std::vector<Atom>;

// A machine state: one finite set of atoms per sort plus one finite set of
// tuples per relation. Two states are equal iff all universes and all
// relations are equal. Map/set storage fixes a canonical iteration order.
struct State {
  std::map<std::string, std::set<Atom>> universes;
  std::map<std::string, std::set<Tuple>> relations;

  bool operator==(const State&) const = default;
  bool operator<(const State& o) const;

  bool has_atom(const std::string& sort, const Atom& a) const;
  // Sort of an atom if it is present in exactly one universe.
  std::optional<std::string> sort_of(const Atom& a) const;

  // Drops empty universe and relation entries so that semantically equal
  // states compare equal. Every producer of states normalizes.
  void normalize();
};

// Size of a state: the sum of all universe and relation cardinalities.
std::size_t state_size(const State& s);

// A term inside formulas, effects and mapping rules: a variable reference,
// an atom literal, or a derived-atom constructor applied to sub-terms.
struct Term {
  enum class Kind { Var, Const, Make };
  Kind kind = Kind::Var;
  std::string name;         // variable name, or constructor tag
  Atom value;               // Const only
  std::vector<Term> args;   // Make only

  static Term var(std::string n);
  static Term constant(Atom a);
  static Term make(std::string tag, std::vector<Term> as);

  bool operator==(const Term&) const = default;
};

// Formula tree. Member atoms test relation rows; Query atoms apply a named
// query (allowed only in mapping expressions, never in system definitions);
// Distinct tests atom identity of its two terms (mapping rule conditions
// only). Exists draws candidates from the named sort's universe.
struct Formula {
  enum class Kind { Member, Query, Distinct, Not, And, Or, Exists };
  Kind kind = Kind::And;
  std::string name;               // relation (Member) or query (Query)
  std::string var;                // Exists binder
  std::string sort;               // Exists binder sort
  std::vector<Term> terms;        // Member / Query / Distinct
  std::vector<Formula> children;  // Not: 1, And/Or: n, Exists: 1

  bool operator==(const Formula&) const = default;

  static Formula member(std::string rel, std::vector<Term> ts);
  static Formula query(std::string q, std::vector<Term> ts);
  static Formula distinct(Term a, Term b);
  static Formula lnot(Formula f);
  static Formula land(std::vector<Formula> fs);  // empty = true
  static Formula lor(std::vector<Formula> fs);   // empty = false
  static Formula exists(std::string var, std::string sort, Formula body);

  bool uses_negation() const;
  bool uses_query_atoms() const;
};

using Params = std::vector<std::pair<std::string, std::string>>;  // (var, sort)

struct QueryDef {
  std::string name;
  Params params;
  Formula body;
  bool is_request = false;

  bool operator==(const QueryDef&) const = default;
};

// One state-rewriting effect. Effects apply in order; Fresh constructs the
// derived atom tag(args...) and adds it to the sort's universe, binding it
// for later effects.
struct Effect {
  enum class Kind { Add, Remove, Fresh };
  Kind kind = Kind::Add;
  std::string relation;      // Add / Remove
  std::vector<Term> terms;   // Add / Remove tuple, Fresh constructor args
  std::string var;           // Fresh binder
  std::string sort;          // Fresh target sort
  std::string tag;           // Fresh constructor tag

  bool operator==(const Effect&) const = default;
};

// A total command: if the guard fails the command is the identity.
struct CommandDef {
  std::string name;
  Params params;
  std::optional<std::size_t> actor;  // index into params
  Formula guard = Formula::land({});
  std::vector<Effect> effects;

  bool operator==(const CommandDef&) const = default;
};

struct SystemDef {
  std::string name;
  std::set<std::string> sorts;
  std::map<std::string, std::vector<std::string>> relations;  // signature
  std::map<std::string, QueryDef> queries;   // requests carry is_request
  std::map<std::string, CommandDef> commands;
  State init;
  std::optional<std::string> admins;  // unary relation naming administrators

  std::vector<std::string> request_names() const;

  bool operator==(const SystemDef&) const = default;
};

// A ground command or query instance.
struct Ground {
  std::string name;
  std::vector<Atom> args;

  bool operator==(const Ground&) const = default;
  bool operator<(const Ground& o) const;
  std::string str() const;  // "name(a,b)"
};

// --- validation ------------------------------------------------------------

struct ValidatedSystem {
  SystemDef def;
  std::vector<ValidationIssue> warnings;
};

// Checks every declaration and the initial state; throws ValidationError
// carrying the full issue list when anything is wrong. Warnings (such as
// negation inside a request body) never fail validation.
ValidatedSystem validate_system(const SystemDef& raw);

// Schema-validates a state against a system; returns issues (empty = valid).
std::vector<ValidationIssue> validate_state(const SystemDef& sys, const State& s,
                                            const std::string& where);

// --- semantics --------------------------------------------------------------

using Env = std::map<std::string, Atom>;

// Evaluation hooks: `query` answers Query atoms (mapping expressions only),
// `on_member` fires per Member/Distinct atom test, `on_binding` fires per
// Exists candidate tried. Null members are skipped.
struct EvalHooks {
  std::function<bool(const std::string&, const std::vector<Atom>&)> query;
  std::function<void()> on_member;
  std::function<void()> on_binding;
};

// Evaluates a term under an environment; throws Error{UnboundVariable}.
Atom eval_term(const Term& t, const Env& env);

// Evaluates a formula against a state. Membership in an absent relation or
// universe is false, so evaluation is total over well-formed formulas.
bool eval_formula(const SystemDef& sys, const State& s, const Formula& f,
                  Env& env, const EvalHooks* hooks = nullptr);

// True iff the state satisfies the named query at the given arguments.
// Total for any atoms: arguments absent from their universes simply make
// membership tests false. Throws Error{UnknownQuery, ArityMismatch}.
bool entails(const SystemDef& sys, const State& s, const std::string& query,
             const std::vector<Atom>& args);

// Applies one command. Guard failure returns the state unchanged. Throws
// Error{UnknownCommand, ArityMismatch, SortMismatch} for ill-formed ground
// instances (arguments must inhabit their declared sorts).
State step(const SystemDef& sys, const State& s, const std::string& command,
           const std::vector<Atom>& args);

struct TraceResult {
  State final;
  std::vector<State> intermediates;  // state after each prefix, length = n
};

// Runs a command sequence; intermediates[i] is the state after i+1 commands,
// final equals the last intermediate (or the start state for empty input).
TraceResult run_trace(const SystemDef& sys, const State& s,
                      const std::vector<Ground>& commands);

// The theory of a state: every query instance over sort-correct argument
// tuples drawn from the state's universes, mapped to its truth value.
std::map<std::string, bool> theory(const SystemDef& sys, const State& s);

// Ground request instances the state grants.
std::vector<Ground> allowed(const SystemDef& sys, const State& s);

std::set<std::string> allowed_keys(const SystemDef& sys, const State& s);

// All ground instances of queries (or requests only) over the state.
std::vector<Ground> ground_queries(const SystemDef& sys, const State& s,
                                   bool requests_only);

// All ground command instances over the state's universes.
std::vector<Ground> ground_commands(const SystemDef& sys, const State& s);

}  // namespace acx

#endif  // ACX_CORE_HPP_
