#pragma once

#include <map>
#include <optional>
#include <string>

#include "til/construction.hpp"

namespace til {

// Named objects available to the parser: logical constants, arithmetic,
// and whatever a knowledge base declares. Reserved builtin names cannot be
// redeclared.
class SymbolTable {
 public:
  // Table prepopulated with the logical vocabulary: And, Or, Not, Implies,
  // Equiv, =, Forall, Exists, All, Sub, Tr, Istar, if-then-else,
  // if-then-else-fail, Cot, + - * /, True, False, pi.
  static SymbolTable with_builtins();

  void declare(const std::string& name, Entity e);
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }
  std::optional<Entity> lookup(const std::string& name) const;
  bool is_reserved(const std::string& name) const;

  const std::map<std::string, Entity>& entries() const { return entries_; }

 private:
  std::map<std::string, Entity> entries_;
};

}  // namespace til
