#pragma once

#include <stdexcept>
#include <vector>

#include "til/construction.hpp"
#include "til/syntax.hpp"

namespace til {

class TypeError : public std::runtime_error {
 public:
  TypeError(std::string msg, Span span)
      : std::runtime_error(span.known()
                               ? msg + " (line " + std::to_string(span.line) +
                                     ", column " + std::to_string(span.column) + ")"
                               : msg),
        span_(span) {}
  const Span& span() const { return span_; }

 private:
  Span span_;
};

struct TypeDerivation {
  ConstrPtr node;
  TypePtr assigned;
  std::string rule;
  std::vector<TypeDerivation> children;
};

// Assigns every node its type. Displayed payloads are typed too (as
// children of their trivialization, which itself gets *n). Polymorphic
// constants are instantiated from their use site; standalone they are a
// type error. Double execution resolves only over a displayed construction
// or an annotated variable.
TypeDerivation infer(const ConstrPtr& c);

// All asserted and queried constructions must construct propositions,
// i.e. type ((o tau) omega).
std::vector<TypeDerivation> check_kb(const KbFile& kb);

TypePtr proposition_type();

// Indented one-node-per-line rendering: construction : type [rule].
std::string derivation_text(const TypeDerivation& d);

}  // namespace til
