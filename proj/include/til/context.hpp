#pragma once

#include <string>
#include <vector>

#include "til/construction.hpp"

namespace til {

enum class ContextKind { Hyperintensional, Intensional, Extensional };
enum class Supposition { Extensional, Intensional, NotApplicable };

struct ContextAnnotation {
  Path path;
  ConstrPtr node;
  ContextKind kind;
  Supposition supposition;
  bool generic = false;
};

const char* to_string(ContextKind k);

// Labels every occurrence. Displayed payloads are hyperintensional and
// dominate their subconstructions; double execution over a trivialized
// construction cancels one level of display. An executed occurrence has
// extensional supposition exactly when it heads a composition supplying its
// argument tuple, and is extensional when moreover no variable of that
// tuple is bound by an enclosing unapplied closure (the top-level \w \t
// wrapper of an empirical proposition does not count as one).
std::vector<ContextAnnotation> classify(const ConstrPtr& c);

enum class AnnotationFormat { Xml, Text };

std::string export_annotations(const ConstrPtr& root,
                               const std::vector<ContextAnnotation>& annotations,
                               AnnotationFormat format);

}  // namespace til
