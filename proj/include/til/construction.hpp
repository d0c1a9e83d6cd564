#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "til/number.hpp"
#include "til/types.hpp"

namespace til {

class Construction;
using ConstrPtr = std::shared_ptr<const Construction>;

// Source location for diagnostics; zero-initialised on synthesised nodes.
struct Span {
  size_t start = 0;
  size_t end = 0;
  int line = 0;
  int column = 0;
  bool known() const { return line > 0; }
};

struct Variable {
  std::string name;
  TypePtr type;
  // Set only for variables ranging over some *n, recording what the
  // doubly executed variable constructs.
  TypePtr constructs;
};

bool operator==(const Variable& a, const Variable& b);
bool operator<(const Variable& a, const Variable& b);

struct TruthValue {
  bool value;
};
struct Individual {
  std::string name;
};
struct World {
  std::string name;
};
struct TimePoint {
  Number value;
};
// A named constant: either one of the logical/arithmetic functions wired
// into the evaluator's registry, or an empirical intension interpreted by
// a finite model. Polymorphic names carry no fixed type; their instance is
// determined at each use site.
struct BuiltinRef {
  std::string name;
  TypePtr type;  // null for per-use-typed names
};

class Entity {
 public:
  using Node = std::variant<TruthValue, Individual, Number, World, TimePoint,
                            BuiltinRef, ConstrPtr>;

  Entity() : v_(TruthValue{false}) {}
  explicit Entity(Node n) : v_(std::move(n)) {}

  static Entity truth(bool b) { return Entity(TruthValue{b}); }
  static Entity individual(std::string name) { return Entity(Individual{std::move(name)}); }
  static Entity number(Number n) { return Entity(std::move(n)); }
  static Entity world(std::string name) { return Entity(World{std::move(name)}); }
  static Entity time(Number n) { return Entity(TimePoint{std::move(n)}); }
  static Entity builtin(std::string name, TypePtr type) {
    return Entity(BuiltinRef{std::move(name), std::move(type)});
  }
  static Entity construction(ConstrPtr c) { return Entity(Node(std::move(c))); }

  const TruthValue* truth_value() const { return std::get_if<TruthValue>(&v_); }
  const Individual* individual_value() const { return std::get_if<Individual>(&v_); }
  const Number* number_value() const { return std::get_if<Number>(&v_); }
  const World* world_value() const { return std::get_if<World>(&v_); }
  const TimePoint* time_value() const { return std::get_if<TimePoint>(&v_); }
  const BuiltinRef* builtin_ref() const { return std::get_if<BuiltinRef>(&v_); }
  ConstrPtr construction_value() const {
    const auto* p = std::get_if<ConstrPtr>(&v_);
    return p ? *p : nullptr;
  }

  // The entity's type; *n for constructions. May be null for polymorphic
  // builtin names, whose type exists only per instantiation.
  TypePtr type() const;

  // Construction payloads compare by alpha-equivalence: distinct displayed
  // procedures stay distinct, bound renaming does not.
  bool operator==(const Entity& o) const;
  bool operator!=(const Entity& o) const { return !(*this == o); }

 private:
  Node v_;
};

// The six construction variants. Values are immutable and shared; every
// transformation produces new nodes.
class Construction {
 public:
  struct Triv {
    Entity payload;
  };
  struct Comp {
    ConstrPtr head;
    std::vector<ConstrPtr> args;  // nonempty
  };
  struct Close {
    std::vector<Variable> params;  // nonempty, pairwise distinct
    ConstrPtr body;
  };
  struct Exec1 {
    Entity payload;
  };
  struct Exec2 {
    ConstrPtr inner;
  };
  using Node = std::variant<Variable, Triv, Comp, Close, Exec1, Exec2>;

  explicit Construction(Node n, Span s = {}) : node_(std::move(n)), span(s) {}

  static ConstrPtr var(Variable v, Span s = {});
  static ConstrPtr var(std::string name, TypePtr type, Span s = {});
  static ConstrPtr triv(Entity payload, Span s = {});
  static ConstrPtr comp(ConstrPtr head, std::vector<ConstrPtr> args, Span s = {});
  static ConstrPtr close(std::vector<Variable> params, ConstrPtr body, Span s = {});
  static ConstrPtr exec1(Entity payload, Span s = {});
  static ConstrPtr exec2(ConstrPtr inner, Span s = {});

  const Variable* variable() const { return std::get_if<Variable>(&node_); }
  const Triv* triv_node() const { return std::get_if<Triv>(&node_); }
  const Comp* comp_node() const { return std::get_if<Comp>(&node_); }
  const Close* close_node() const { return std::get_if<Close>(&node_); }
  const Exec1* exec1_node() const { return std::get_if<Exec1>(&node_); }
  const Exec2* exec2_node() const { return std::get_if<Exec2>(&node_); }

  const Node& node() const { return node_; }

  Span span;

 private:
  Node node_;
};

// Child index path from a root construction to a subnode. Children:
// Comp: 0 = head, 1..n = args; Close: 0 = body; Triv/Exec1 with a
// construction payload: 0; Exec2: 0.
using Path = std::vector<int>;

// Least n such that the construction is of order n. Polymorphic builtin
// constants count at their minimal instance.
int order_of(const Construction& c);
int order_of(const ConstrPtr& c);

// Order of the least type an entity belongs to (so a construction of order
// n counts as n+1, the order of *n).
int entity_order(const Entity& e);

// Preorder traversal including the root; descends into displayed
// construction payloads.
std::vector<std::pair<Path, ConstrPtr>> subconstructions(const ConstrPtr& c);

ConstrPtr node_at(const ConstrPtr& root, const Path& path);

// Variables with at least one executed occurrence (display cancelled by an
// intervening Double Execution counts as executed) that is not bound by an
// enclosing Closure. Displayed occurrences are Trivialization-bound and
// excluded.
std::vector<Variable> free_variables(const ConstrPtr& c);

// Equality up to renaming of lambda-bound variables. Binding does not reach
// into displayed payloads: those compare with fresh scopes of their own.
bool alpha_equivalent(const ConstrPtr& a, const ConstrPtr& b);

// Renames one binder and its executed occurrences within the body
// (capture-naive: caller picks a fresh name).
ConstrPtr rename_executed(const ConstrPtr& c, const std::string& from,
                          const std::string& to);

bool structurally_equal(const ConstrPtr& a, const ConstrPtr& b);

}  // namespace til
