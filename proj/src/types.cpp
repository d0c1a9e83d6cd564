#include "til/types.hpp"

#include <algorithm>

namespace til {

TypePtr Type::truth() {
  static TypePtr t = std::make_shared<Type>(BaseType{BaseKind::Truth});
  return t;
}

TypePtr Type::individual() {
  static TypePtr t = std::make_shared<Type>(BaseType{BaseKind::Individual});
  return t;
}

TypePtr Type::real() {
  static TypePtr t = std::make_shared<Type>(BaseType{BaseKind::Real});
  return t;
}

TypePtr Type::world() {
  static TypePtr t = std::make_shared<Type>(BaseType{BaseKind::World});
  return t;
}

TypePtr Type::base(BaseKind k) {
  switch (k) {
    case BaseKind::Truth: return truth();
    case BaseKind::Individual: return individual();
    case BaseKind::Real: return real();
    case BaseKind::World: return world();
  }
  return truth();
}

TypePtr Type::fn(TypePtr result, std::vector<TypePtr> args) {
  return std::make_shared<Type>(FuncType{std::move(result), std::move(args)});
}

TypePtr Type::order(int n) { return std::make_shared<Type>(OrderType{n}); }

bool Type::operator==(const Type& o) const {
  if (node_.index() != o.node_.index()) return false;
  if (const auto* b = base()) return b->kind == o.base()->kind;
  if (const auto* n = construction_order()) return n->order == o.construction_order()->order;
  const auto* f = func();
  const auto* g = o.func();
  if (f->args.size() != g->args.size()) return false;
  if (!type_equal(f->result, g->result)) return false;
  for (size_t i = 0; i < f->args.size(); ++i)
    if (!type_equal(f->args[i], g->args[i])) return false;
  return true;
}

int Type::type_order() const {
  if (base()) return 1;
  if (const auto* n = construction_order()) return n->order + 1;
  const auto* f = func();
  int m = f->result->type_order();
  for (const auto& a : f->args) m = std::max(m, a->type_order());
  return m;
}

std::string Type::show() const {
  if (const auto* b = base()) {
    switch (b->kind) {
      case BaseKind::Truth: return "o";
      case BaseKind::Individual: return "iota";
      case BaseKind::Real: return "tau";
      case BaseKind::World: return "omega";
    }
  }
  if (const auto* n = construction_order()) return "*" + std::to_string(n->order);
  const auto* f = func();
  std::string s = "(" + f->result->show();
  for (const auto& a : f->args) s += " " + a->show();
  return s + ")";
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool assignable(const TypePtr& actual, const TypePtr& expected) {
  if (type_equal(actual, expected)) return true;
  if (!actual || !expected) return false;
  const auto* m = actual->construction_order();
  const auto* n = expected->construction_order();
  return m && n && m->order <= n->order;
}

}  // namespace til
