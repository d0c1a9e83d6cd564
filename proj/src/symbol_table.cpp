#include "til/symbol_table.hpp"

#include <set>
#include <stdexcept>

namespace til {

namespace {

const std::set<std::string>& reserved_names() {
  static const std::set<std::string> names = {
      "And", "Or", "Not", "Implies", "Equiv", "=", "Forall", "Exists",
      "All", "Sub", "Tr", "Istar", "if-then-else", "if-then-else-fail",
      "Cot", "+", "-", "*", "/", "True", "False", "pi"};
  return names;
}

}  // namespace

SymbolTable SymbolTable::with_builtins() {
  SymbolTable t;
  auto o = Type::truth();
  auto tau = Type::real();
  auto fixed = [&](const std::string& name, TypePtr type) {
    t.entries_.emplace(name, Entity::builtin(name, std::move(type)));
  };
  auto poly = [&](const std::string& name) {
    t.entries_.emplace(name, Entity::builtin(name, nullptr));
  };
  fixed("And", Type::fn(o, {o, o}));
  fixed("Or", Type::fn(o, {o, o}));
  fixed("Implies", Type::fn(o, {o, o}));
  fixed("Equiv", Type::fn(o, {o, o}));
  fixed("Not", Type::fn(o, {o}));
  poly("=");
  poly("Forall");
  poly("Exists");
  // Restricted quantifier on sets of individuals: maps S to the class of
  // supersets of S.
  auto set_i = Type::fn(o, {Type::individual()});
  fixed("All", Type::fn(Type::fn(o, {set_i}), {set_i}));
  poly("Sub");
  poly("Tr");
  poly("Istar");
  poly("if-then-else");
  poly("if-then-else-fail");
  fixed("Cot", Type::fn(tau, {tau}));
  fixed("+", Type::fn(tau, {tau, tau}));
  fixed("-", Type::fn(tau, {tau, tau}));
  fixed("*", Type::fn(tau, {tau, tau}));
  fixed("/", Type::fn(tau, {tau, tau}));
  t.entries_.emplace("True", Entity::truth(true));
  t.entries_.emplace("False", Entity::truth(false));
  t.entries_.emplace("pi", Entity::number(Number::pi(Rational(1))));
  return t;
}

void SymbolTable::declare(const std::string& name, Entity e) {
  if (is_reserved(name))
    throw std::invalid_argument("cannot redeclare reserved name '" + name + "'");
  auto [it, inserted] = entries_.emplace(name, std::move(e));
  if (!inserted) throw std::invalid_argument("duplicate declaration of '" + name + "'");
}

std::optional<Entity> SymbolTable::lookup(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool SymbolTable::is_reserved(const std::string& name) const {
  return reserved_names().count(name) != 0;
}

}  // namespace til
