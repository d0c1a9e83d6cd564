#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "til/clausal.hpp"

namespace til {

// Idempotent typed variable bindings with occurs check.
class Substitution {
 public:
  bool bind(const std::string& var, const TypePtr& var_type, const Term& term);
  Term apply(const Term& t) const;
  Literal apply(const Literal& l) const;
  std::vector<Literal> apply(const std::vector<Literal>& ls) const;
  const std::map<std::string, Term>& bindings() const { return map_; }
  bool empty() const { return map_.empty(); }
  std::optional<Term> lookup(const std::string& var) const;
  std::string show() const;

 private:
  std::map<std::string, Term> map_;
};

// Most general unifier of two atoms (signs ignored); requires matching
// predicate and arity. Opaque construction constants unify only with an
// alpha-equivalent constant, never with a variable of non-construction type.
std::optional<Substitution> unify(const Literal& a, const Literal& b);
bool unify_terms(const Term& a, const Term& b, Substitution& s);

struct ProofStep {
  Clause resolvent;
  std::string parent1;
  std::string parent2;
  Substitution unifier;
  std::string label;
};

enum class ProofStatus { Proved, Exhausted, LimitReached };

struct Limits {
  int max_clauses = 10000;
  int max_depth = 50;
  bool parallel = false;
  // Keep saturating after the first refutation (bounded by the limits) and
  // record every empty clause, for answer enumeration.
  bool find_all_refutations = false;
};

struct Refutation {
  std::string label;                 // label of the empty clause's step
  std::vector<Term> query_bindings;  // distinct ground bindings in its derivation
};

struct ProofResult {
  ProofStatus status = ProofStatus::Exhausted;
  std::vector<ProofStep> steps;
  std::vector<Refutation> refutations;
  // Bindings of the query variable from the first refutation, when unique.
  Substitution answer;
  std::string query_var;
};

// All binary resolvents of two clauses (renamed apart internally), with the
// unifier applied and set-semantics factoring.
std::vector<std::pair<Clause, Substitution>> resolve_step(const Clause& c1,
                                                          const Clause& c2);

// Set-of-support, breadth-first, deterministic. Goal clauses seed the
// support; every kept clause is recorded as a step. `query_var` names the
// answer variable inside the goal clauses, if any.
ProofResult prove(const std::vector<Clause>& kb, const std::vector<Clause>& goal,
                  const Limits& limits, const std::string& query_var = "");

// Distinct definite answers: bindings from refutations whose derivations
// instantiated the query variable to exactly one ground term.
std::vector<Term> answer_who(const ProofResult& result, const std::string& query_var);

// One step per line: LABEL) CLAUSE  <- P1 + P2, SUBSTITUTION
std::string trace_text(const ProofResult& result);

}  // namespace til
