#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace til {

class Type;
using TypePtr = std::shared_ptr<const Type>;

// The four ground types: truth values, individuals, reals (doubling as
// times), and possible worlds.
enum class BaseKind { Truth, Individual, Real, World };

struct BaseType {
  BaseKind kind;
};

// (result arg1 ... argm): m-ary partial mappings, m >= 1.
struct FuncType {
  TypePtr result;
  std::vector<TypePtr> args;
};

// *n: the collection of constructions of order n, n >= 1.
struct OrderType {
  int order;
};

class Type {
 public:
  explicit Type(BaseType b) : node_(b) {}
  explicit Type(FuncType f) : node_(std::move(f)) {}
  explicit Type(OrderType o) : node_(o) {}

  static TypePtr truth();
  static TypePtr individual();
  static TypePtr real();
  static TypePtr world();
  static TypePtr base(BaseKind k);
  static TypePtr fn(TypePtr result, std::vector<TypePtr> args);
  static TypePtr order(int n);

  const BaseType* base() const { return std::get_if<BaseType>(&node_); }
  const FuncType* func() const { return std::get_if<FuncType>(&node_); }
  const OrderType* construction_order() const { return std::get_if<OrderType>(&node_); }

  bool operator==(const Type& o) const;
  bool operator!=(const Type& o) const { return !(*this == o); }

  // Order of the type in the ramified hierarchy: ground and purely
  // first-order functional types are 1, *n is n+1, functional types take
  // the maximum over their components.
  int type_order() const;

  std::string show() const;

 private:
  std::variant<BaseType, FuncType, OrderType> node_;
};

bool type_equal(const TypePtr& a, const TypePtr& b);

// Structural equality extended with order subsumption: a construction of
// order m belongs to *n for every n >= m.
bool assignable(const TypePtr& actual, const TypePtr& expected);

}  // namespace til
