#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "til/construction.hpp"
#include "til/syntax.hpp"

namespace til {

class Value;
struct FunctionValue;
using FunctionPtr = std::shared_ptr<const FunctionValue>;

enum class ImproperReason {
  UndefinedApplication,
  NonConstructionExecuted,
  SingularizerEmptyOrMany,
  Propagated,
};

struct ImproperInfo {
  ImproperReason reason;
  Path at;  // failing node
};

// Failing to construct anything is an outcome, never an exception.
class EvalResult {
 public:
  static EvalResult value(Value v);
  static EvalResult improper(ImproperReason r, Path at = {});
  static EvalResult improper(ImproperInfo i);

  bool ok() const { return improper_ == nullptr; }
  const Value& get() const { return *value_; }
  const ImproperInfo& why() const { return *improper_; }

 private:
  std::shared_ptr<const Value> value_;
  std::shared_ptr<const ImproperInfo> improper_;
};

// Runtime values: entities, or functions produced by closures, intension
// lookups, and the builtin registry.
class Value {
 public:
  Value() : v_(Entity()) {}
  explicit Value(Entity e) : v_(std::move(e)) {}
  explicit Value(FunctionPtr f) : v_(std::move(f)) {}

  const Entity* entity() const { return std::get_if<Entity>(&v_); }
  FunctionPtr function() const {
    const auto* p = std::get_if<FunctionPtr>(&v_);
    return p ? *p : nullptr;
  }
  bool truth_is(bool b) const {
    const auto* e = entity();
    return e && e->truth_value() && e->truth_value()->value == b;
  }

 private:
  std::variant<Entity, FunctionPtr> v_;
};

struct FunctionValue {
  size_t arity = 0;
  std::vector<TypePtr> arg_types;  // may hold nulls when unknown
  TypePtr result_type;             // may be null
  std::function<EvalResult(const std::vector<Value>&)> apply;
  // Defining closure, when the function came from one; lets the
  // singularizer read candidate constructions out of the class body.
  ConstrPtr source;
};

// Immutable variable assignment.
class Valuation {
 public:
  Valuation() = default;
  Valuation bind(const std::string& name, Value v) const {
    Valuation out = *this;
    out.m_[name] = std::move(v);
    return out;
  }
  const Value* find(const std::string& name) const {
    auto it = m_.find(name);
    return it == m_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, Value> m_;
};

// Finite interpretation of the empirical vocabulary: enumerated worlds,
// times, individuals and numbers-in-scope, plus lookup tables per intension
// with explicitly representable undefined cells.
class Model {
 public:
  struct Row {
    std::string world;
    Number time;
    std::vector<Entity> args;
    std::optional<Entity> result;  // nullopt = explicitly undefined
  };
  struct Table {
    std::vector<Row> rows;
    std::optional<Entity> fallback;  // result for absent cells; nullopt = undefined
  };

  std::vector<std::string> worlds;
  std::vector<Number> times;
  std::vector<std::string> individuals;
  std::vector<Number> numbers;  // tau quantification scope (besides times)
  std::optional<std::pair<std::string, Number>> actual;
  std::map<std::string, Table> interp;

  // Enumerable values of a type: o, iota, omega, and tau (times plus
  // declared numbers). Null for everything else.
  std::optional<std::vector<Value>> domain(const TypePtr& t) const;

  static std::shared_ptr<const Model> from_kb(const KbFile& kb);
};

using ModelPtr = std::shared_ptr<const Model>;

// Def.-style evaluation: strict compositions over partial functions,
// trivialization yields its payload unchanged, closures produce functions,
// execution runs displayed constructions. Total on well-formed input.
EvalResult evaluate(const ConstrPtr& c, const Valuation& v, const ModelPtr& m);

// Substitutes `what` for every occurrence of `target` (a variable or a
// trivialization) in `into`, displayed occurrences included; clashing
// binders are renamed first.
ConstrPtr substitute(const ConstrPtr& what, const ConstrPtr& target,
                     const ConstrPtr& into);

// Trivialization of an entity.
ConstrPtr trivialize(const Entity& e);

// Lambda-calculus substitution: replaces executed occurrences of a variable
// only (display-aware, shadow-aware, capture-avoiding).
ConstrPtr replace_executed_occurrences(const ConstrPtr& c, const Variable& target,
                                       const ConstrPtr& replacement);

// [[\x1..xn Y] D1..Dn] rewritten to the double-executed substitution form
// that runs each argument once and fails when any argument fails.
// Throws std::invalid_argument unless the head is a closure of matching
// arity.
ConstrPtr beta_by_value(const ConstrPtr& comp);

// Renaming-only reduction: every argument must be a variable of the
// parameter's type. Throws std::invalid_argument otherwise.
ConstrPtr beta_by_name_restricted(const ConstrPtr& comp);

// The unique member of a class of constructions, improper when empty or
// many-valued.
EvalResult singularize(const std::vector<ConstrPtr>& members);

// Builds ^2 ['Istar \c [P And [c = 'S]]].
ConstrPtr if_then_else_fail(const ConstrPtr& condition, const ConstrPtr& branch);
// Builds ^2 ['Istar \c [[P And [c = 'C]] Or [[Not P] And [c = 'D]]]].
ConstrPtr if_then_else(const ConstrPtr& condition, const ConstrPtr& then_branch,
                       const ConstrPtr& else_branch);

enum class Quantifier { Forall, Exists, All };

// Forall/Exists evaluate a class over its enumerated domain; All maps a set
// of individuals to the class of its supersets.
EvalResult quantify(Quantifier q, const Value& cls, const Model& m);

// Fresh name: `base` extended with a numeric suffix until it avoids every
// name occurring in the given constructions.
std::string fresh_name(const std::string& base, const std::vector<ConstrPtr>& avoid);

}  // namespace til
