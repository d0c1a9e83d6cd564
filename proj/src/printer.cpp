#include "til/syntax.hpp"

namespace til {

namespace {

class Printer {
 public:
  std::string unit(const ConstrPtr& c) {
    if (const auto* v = c->variable()) return v->name;
    if (const auto* t = c->triv_node()) return "'" + payload(t->payload);
    if (const auto* e1 = c->exec1_node()) return "^1 '" + payload(e1->payload);
    if (const auto* e2 = c->exec2_node()) return "^2 " + unit(e2->inner);
    if (const auto* cl = c->close_node()) return closure(*cl);
    return composition(*c->comp_node());
  }

 private:
  std::string closure(const Construction::Close& cl) {
    std::string out;
    for (const auto& p : cl.params) {
      binders_.push_back(p);
      out += "\\" + p.name;
      TypePtr at = auto_variable_type_name(p.name);
      if (!at || !type_equal(at, p.type)) out += ":" + p.type->show();
      out += " ";
    }
    out += unit(cl.body);
    for (size_t i = 0; i < cl.params.size(); ++i) binders_.pop_back();
    return out;
  }

  // Closures need brackets wherever they occur as a sub-unit.
  std::string element(const ConstrPtr& c) {
    if (c->close_node()) return "[" + unit(c) + "]";
    return unit(c);
  }

  std::string composition(const Construction::Comp& comp) {
    // Re-apply the _wt sugar for [[C w] t] against the nearest enclosing
    // \w \t binders.
    if (comp.args.size() == 1) {
      if (const auto* tv = comp.args[0]->variable()) {
        if (const auto* inner = comp.head->comp_node(); inner && inner->args.size() == 1) {
          if (const auto* wv = inner->args[0]->variable()) {
            const Variable* w = nearest(BaseKind::World);
            const Variable* t = nearest(BaseKind::Real);
            if (w && t && wv->name == w->name && tv->name == t->name &&
                type_is(wv->type, BaseKind::World) && type_is(tv->type, BaseKind::Real))
              return element(inner->head) + "_wt";
          }
        }
      }
    }
    std::string out = "[" + element(comp.head);
    for (const auto& a : comp.args) out += " " + element(a);
    return out + "]";
  }

  std::string payload(const Entity& e) {
    if (const auto* t = e.truth_value()) return t->value ? "True" : "False";
    if (const auto* i = e.individual_value()) return i->name;
    if (const auto* n = e.number_value()) return n->show();
    if (const auto* w = e.world_value()) return w->name;
    if (const auto* tp = e.time_value()) return tp->value.show();
    if (const auto* b = e.builtin_ref()) return b->name;
    ConstrPtr c = e.construction_value();
    if (c->variable()) return unit(c);
    if (c->triv_node()) return unit(c);
    return "[" + unit(c) + "]";
  }

  static bool type_is(const TypePtr& t, BaseKind k) {
    return t && t->base() && t->base()->kind == k;
  }

  static TypePtr auto_variable_type_name(const std::string& name) {
    if (name.empty()) return nullptr;
    char c = name[0];
    if (c != 'w' && c != 't') return nullptr;
    for (size_t i = 1; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return nullptr;
    return c == 'w' ? Type::world() : Type::real();
  }

  const Variable* nearest(BaseKind k) const {
    for (auto it = binders_.rbegin(); it != binders_.rend(); ++it)
      if (type_is(it->type, k)) return &*it;
    return nullptr;
  }

  std::vector<Variable> binders_;
};

}  // namespace

std::string print(const ConstrPtr& c) {
  Printer p;
  return p.unit(c);
}

std::string print_entity(const Entity& e) {
  if (const auto* t = e.truth_value()) return t->value ? "true" : "false";
  if (const auto* i = e.individual_value()) return i->name;
  if (const auto* n = e.number_value()) return n->show();
  if (const auto* w = e.world_value()) return w->name;
  if (const auto* tp = e.time_value()) return tp->value.show();
  if (const auto* b = e.builtin_ref()) return b->name;
  ConstrPtr c = e.construction_value();
  std::string inner = print(c);
  if (c->variable() || c->triv_node()) return "'" + inner;
  return "'[" + inner + "]";
}

}  // namespace til
