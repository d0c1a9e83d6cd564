#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "til/construction.hpp"
#include "til/symbol_table.hpp"

namespace til {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, Span span)
      : std::runtime_error(msg + " (line " + std::to_string(span.line) +
                           ", column " + std::to_string(span.column) + ")"),
        span_(span) {}
  const Span& span() const { return span_; }

 private:
  Span span_;
};

// Types: o | iota | tau | omega | *n | (RESULT ARG...) | NAME alias,
// with the postfix sugar T@tw expanding to ((T tau) omega).
TypePtr parse_type(const std::string& text,
                   const std::map<std::string, TypePtr>& aliases = {});

// Free-variable declarations visible to the parser (from `var` lines).
using VarEnv = std::map<std::string, Variable>;

// Constructions:
//   'X        trivialization (X a symbol, literal, or bracketed form)
//   [H A...]  composition; [X] with a single inner form is grouping
//   \x:T B    closure (\w, \t and digit-suffixed variants default to
//             omega/tau when unannotated); consecutive binders nest
//   ^1 X  ^2 X   execution and double execution
//   C_wt      sugar for [[C w] t] against the nearest enclosing \w \t pair
ConstrPtr parse(const std::string& text, const SymbolTable& symbols,
                const VarEnv& vars = {},
                const std::map<std::string, TypePtr>& aliases = {});

// Canonical text. parse(print(c)) reproduces c exactly for every
// construction the parser can produce (the printer normalises multi-binder
// closures to the nested form the parser uses).
std::string print(const ConstrPtr& c);
std::string print_entity(const Entity& e);

// One declaration of a knowledge-base file, in source order.
struct Declaration {
  enum class Kind {
    TypeAlias,   // type Name : TYPE
    EntityDecl,  // entity Name : TYPE
    VarDecl,     // var x : TYPE
    Assert,      // assert CONSTRUCTION
    Query,       // query CONSTRUCTION
    Worlds,      // world W1 W2 ...
    Times,       // time NUM ...
    Numbers,     // number NUM ...  (tau quantification scope)
    Actual,      // actual W NUM
    Interp,      // interp Name @ W NUM : ARG... = RESULT
    Default,     // default Name = RESULT
  };
  Kind kind;
  std::string name;
  TypePtr type;
  ConstrPtr construction;
  std::vector<std::string> words;
  std::vector<Number> numbers;
  std::vector<Entity> entities;  // Interp: args; Default/Interp: last is result
  bool result_undefined = false;
  int line = 0;
};

struct KbFile {
  std::vector<Declaration> declarations;
  SymbolTable symbols;
  VarEnv vars;
  std::map<std::string, TypePtr> aliases;
  std::vector<ConstrPtr> assertions;
  std::vector<ConstrPtr> queries;
};

// Line-oriented, UTF-8, '#' comments. Declarations must precede use.
KbFile parse_kb(const std::string& text);
KbFile load_kb_file(const std::string& path);

// Canonical text of a knowledge base; parse_kb(print_kb(kb)) is stable.
std::string print_kb(const KbFile& kb);

}  // namespace til
