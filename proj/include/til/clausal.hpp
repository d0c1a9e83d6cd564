#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "til/construction.hpp"

namespace til {

class ClausalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  enum class Kind { Var, Const, Skolem };
  Kind kind = Kind::Const;
  std::string name;  // Var and Skolem
  TypePtr type;
  Entity constant;          // Const
  std::vector<Term> args;   // Skolem

  static Term var(std::string name, TypePtr type);
  static Term constant(Entity e);
  static Term skolem(std::string name, std::vector<Term> args, TypePtr type);

  bool is_ground() const;
  std::string show() const;
  bool operator==(const Term& o) const;
};

struct Literal {
  bool positive = true;
  std::string predicate;  // extensionalized: the implicit w,t pair is suppressed
  std::vector<Term> args;

  Literal flipped() const {
    Literal l = *this;
    l.positive = !l.positive;
    return l;
  }
  std::string show() const;
  bool operator==(const Literal& o) const;
  bool operator<(const Literal& o) const;
};

struct Clause {
  std::vector<Literal> literals;  // kept sorted, duplicates removed
  std::string label;
  ConstrPtr origin;
  int depth = 0;
  std::vector<Term> answers;  // ground query-variable bindings along the derivation

  static Clause of(std::vector<Literal> lits);
  bool empty() const { return literals.empty(); }
  bool is_tautology() const;
  std::string show() const;
  // Key invariant under variable renaming, for duplicate elimination.
  std::string canonical_key() const;
};

// Single steps of the transformation, in pipeline order.

// [\w \t C] => C with w,t free (implicitly universal). Throws ClausalError
// on any other shape; only the outermost pair is stripped.
ConstrPtr strip_lambda_wt(const ConstrPtr& c);

// Removes Forall/Exists whose bound variable has no free occurrence in the
// class body.
ConstrPtr drop_vacuous_quantifiers(const ConstrPtr& c);

// Rewrites Implies and Equiv into And/Or/Not.
ConstrPtr eliminate_impl_equiv(const ConstrPtr& c);

// Negation normal form: de Morgan, double negation, quantifier duals.
ConstrPtr to_nnf(const ConstrPtr& c);

// A transformation run: shared binder-renaming pool (x, y, z, u, q, ...)
// and Skolem counter, so labels and names are reproducible.
class ClausalTransform {
 public:
  ClausalTransform();

  // Binders made pairwise distinct across the whole run; names kept when
  // still unused, else drawn from the pool.
  ConstrPtr rename_apart(const ConstrPtr& c);

  // Existential quantifiers replaced by Skolem constants/functions of the
  // governing universal variables. Input must be in NNF.
  ConstrPtr skolemize(const ConstrPtr& c);

  // Prenex universals, distribute, extract clauses.
  std::vector<Clause> to_clauses(const ConstrPtr& c);

  // Whole pipeline for one proposition (must be a \w \t closure).
  std::vector<Clause> proposition(const ConstrPtr& c);

  // Labels per the source order: one letter per assertion, numeric suffix
  // only when an assertion yields several clauses.
  std::vector<Clause> assertions(const std::vector<ConstrPtr>& props);

  struct Goal {
    std::vector<Clause> clauses;
    // Final name of the outermost existential variable of the question, if
    // any (the answer variable).
    std::optional<std::string> query_var;
    TypePtr query_var_type;
  };

  // Negates the question and clausalizes it; labelled with the next letter.
  Goal negated_question(const ConstrPtr& question);

  // The question taken positively (for refuting it), same letter labelling.
  std::vector<Clause> positive_question(const ConstrPtr& question);

  int assertions_labelled() const { return label_index_; }

 private:
  std::vector<Clause> labelled(const ConstrPtr& prop, bool negate);

  std::vector<std::string> pool_;
  std::set<std::string> used_names_;
  int skolem_counter_ = 0;
  int label_index_ = 0;
  std::optional<std::string> last_query_var_;
  TypePtr last_query_var_type_;
};

std::string clause_set_text(const std::vector<Clause>& clauses);

}  // namespace til
