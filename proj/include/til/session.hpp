#pragma once

#include <optional>
#include <string>
#include <vector>

#include "til/clausal.hpp"
#include "til/reduce.hpp"
#include "til/resolve.hpp"
#include "til/syntax.hpp"
#include "til/typing.hpp"

namespace til {

enum class Answer { Yes, No, Unknown, NoTruthValue };

const char* to_string(Answer a);

struct AskOutcome {
  Answer answer = Answer::Unknown;
  std::string trace;
  std::vector<Clause> clauses;  // KB + goal clauses used
  ProofResult proof;
};

struct WhoOutcome {
  Answer answer = Answer::No;
  std::vector<std::string> names;
  std::string trace;
};

// A loaded knowledge base with its symbol table, typed assertions, derived
// clause cache and optional finite model.
class Session {
 public:
  static Session from_kb(KbFile kb);
  static Session load(const std::string& path);
  void save(const std::string& path) const;

  const KbFile& kb() const { return kb_; }
  const ModelPtr& model() const { return model_; }
  Limits limits;

  ConstrPtr parse_input(const std::string& text) const;

  // Clauses of all assertions, labelled in source order; cached.
  const std::vector<Clause>& kb_clauses() const;

  // Adds one more declaration line (REPL); invalidates the clause cache.
  void add_line(const std::string& line);

  AskOutcome ask(const ConstrPtr& question) const;
  WhoOutcome who(const ConstrPtr& question, const std::string& var) const;

  std::string typecheck_text(const ConstrPtr& c) const;
  std::string context_text(const ConstrPtr& c, const std::string& format) const;
  std::string clausal_text(const std::optional<ConstrPtr>& c) const;
  std::string eval_text(const ConstrPtr& c) const;

  // Evaluates a proposition at the model's designated world/time pair.
  EvalResult evaluate_at_actual(const ConstrPtr& proposition) const;

 private:
  KbFile kb_;
  ModelPtr model_;
  mutable std::optional<std::vector<Clause>> clause_cache_;
  mutable int goal_letter_ = 0;
};

}  // namespace til
