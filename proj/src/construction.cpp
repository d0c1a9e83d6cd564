#include "til/construction.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace til {

bool operator==(const Variable& a, const Variable& b) {
  return a.name == b.name && type_equal(a.type, b.type);
}

bool operator<(const Variable& a, const Variable& b) {
  if (a.name != b.name) return a.name < b.name;
  return (a.type ? a.type->show() : "") < (b.type ? b.type->show() : "");
}

// Minimal instance orders for the per-use-typed builtin names.
static int builtin_min_order(const std::string& name) {
  if (name == "Sub" || name == "Tr" || name == "Istar" ||
      name == "if-then-else" || name == "if-then-else-fail")
    return 2;
  return 1;
}

TypePtr Entity::type() const {
  if (truth_value()) return Type::truth();
  if (individual_value()) return Type::individual();
  if (number_value()) return Type::real();
  if (world_value()) return Type::world();
  if (time_value()) return Type::real();
  if (const auto* b = builtin_ref()) return b->type;
  if (auto c = construction_value()) return Type::order(order_of(c));
  return nullptr;
}

bool Entity::operator==(const Entity& o) const {
  if (v_.index() != o.v_.index()) {
    // Times double as numbers.
    const TimePoint* t = time_value() ? time_value() : o.time_value();
    const Number* n = number_value() ? number_value() : o.number_value();
    return t && n && t->value == *n;
  }
  if (const auto* t = truth_value()) return t->value == o.truth_value()->value;
  if (const auto* i = individual_value()) return i->name == o.individual_value()->name;
  if (const auto* n = number_value()) return *n == *o.number_value();
  if (const auto* w = world_value()) return w->name == o.world_value()->name;
  if (const auto* t = time_value()) return t->value == o.time_value()->value;
  if (const auto* b = builtin_ref()) return b->name == o.builtin_ref()->name;
  return alpha_equivalent(construction_value(), o.construction_value());
}

ConstrPtr Construction::var(Variable v, Span s) {
  return std::make_shared<Construction>(Node(std::move(v)), s);
}
ConstrPtr Construction::var(std::string name, TypePtr type, Span s) {
  return var(Variable{std::move(name), std::move(type), nullptr}, s);
}
ConstrPtr Construction::triv(Entity payload, Span s) {
  return std::make_shared<Construction>(Node(Triv{std::move(payload)}), s);
}
ConstrPtr Construction::comp(ConstrPtr head, std::vector<ConstrPtr> args, Span s) {
  return std::make_shared<Construction>(Node(Comp{std::move(head), std::move(args)}), s);
}
ConstrPtr Construction::close(std::vector<Variable> params, ConstrPtr body, Span s) {
  return std::make_shared<Construction>(Node(Close{std::move(params), std::move(body)}), s);
}
ConstrPtr Construction::exec1(Entity payload, Span s) {
  return std::make_shared<Construction>(Node(Exec1{std::move(payload)}), s);
}
ConstrPtr Construction::exec2(ConstrPtr inner, Span s) {
  return std::make_shared<Construction>(Node(Exec2{std::move(inner)}), s);
}

int entity_order(const Entity& e) {
  if (auto c = e.construction_value()) return order_of(c) + 1;
  if (const auto* b = e.builtin_ref())
    return b->type ? b->type->type_order() : builtin_min_order(b->name);
  TypePtr t = e.type();
  return t ? t->type_order() : 1;
}

int order_of(const Construction& c) {
  if (const auto* v = c.variable()) return v->type ? v->type->type_order() : 1;
  if (const auto* t = c.triv_node()) return entity_order(t->payload);
  if (const auto* e1 = c.exec1_node()) return entity_order(e1->payload);
  if (const auto* e2 = c.exec2_node()) return order_of(e2->inner) + 1;
  if (const auto* a = c.comp_node()) {
    int m = order_of(a->head);
    for (const auto& g : a->args) m = std::max(m, order_of(g));
    return m;
  }
  const auto* cl = c.close_node();
  int m = cl->body ? order_of(cl->body) : 1;
  for (const auto& p : cl->params)
    m = std::max(m, p.type ? p.type->type_order() : 1);
  return m;
}

int order_of(const ConstrPtr& c) { return order_of(*c); }

static void collect_sub(const ConstrPtr& c, Path& path,
                        std::vector<std::pair<Path, ConstrPtr>>& out) {
  out.emplace_back(path, c);
  auto descend = [&](int i, const ConstrPtr& child) {
    path.push_back(i);
    collect_sub(child, path, out);
    path.pop_back();
  };
  if (const auto* t = c->triv_node()) {
    if (auto p = t->payload.construction_value()) descend(0, p);
  } else if (const auto* e1 = c->exec1_node()) {
    if (auto p = e1->payload.construction_value()) descend(0, p);
  } else if (const auto* e2 = c->exec2_node()) {
    descend(0, e2->inner);
  } else if (const auto* a = c->comp_node()) {
    descend(0, a->head);
    for (size_t i = 0; i < a->args.size(); ++i) descend(static_cast<int>(i) + 1, a->args[i]);
  } else if (const auto* cl = c->close_node()) {
    descend(0, cl->body);
  }
}

std::vector<std::pair<Path, ConstrPtr>> subconstructions(const ConstrPtr& c) {
  std::vector<std::pair<Path, ConstrPtr>> out;
  Path path;
  collect_sub(c, path, out);
  return out;
}

ConstrPtr node_at(const ConstrPtr& root, const Path& path) {
  ConstrPtr cur = root;
  for (int i : path) {
    if (!cur) return nullptr;
    if (const auto* t = cur->triv_node()) {
      cur = i == 0 ? t->payload.construction_value() : nullptr;
    } else if (const auto* e1 = cur->exec1_node()) {
      cur = i == 0 ? e1->payload.construction_value() : nullptr;
    } else if (const auto* e2 = cur->exec2_node()) {
      cur = i == 0 ? e2->inner : nullptr;
    } else if (const auto* a = cur->comp_node()) {
      if (i == 0)
        cur = a->head;
      else if (i >= 1 && static_cast<size_t>(i) <= a->args.size())
        cur = a->args[i - 1];
      else
        cur = nullptr;
    } else if (const auto* cl = cur->close_node()) {
      cur = i == 0 ? cl->body : nullptr;
    } else {
      cur = nullptr;
    }
  }
  return cur;
}

namespace {

// Executed-occurrence walk: displayed payloads are skipped except where the
// Exec2-over-Trivialization pattern cancels the display.
void collect_free(const ConstrPtr& c, std::set<std::string>& bound,
                  std::map<std::string, Variable>& out) {
  if (const auto* v = c->variable()) {
    if (!bound.count(v->name)) out.emplace(v->name, *v);
    return;
  }
  if (c->triv_node()) return;  // displayed: Trivialization-bound
  if (const auto* e1 = c->exec1_node()) {
    if (auto p = e1->payload.construction_value()) collect_free(p, bound, out);
    return;
  }
  if (const auto* e2 = c->exec2_node()) {
    if (const auto* t = e2->inner->triv_node()) {
      if (auto p = t->payload.construction_value()) {
        collect_free(p, bound, out);
        return;
      }
    }
    collect_free(e2->inner, bound, out);
    return;
  }
  if (const auto* a = c->comp_node()) {
    collect_free(a->head, bound, out);
    for (const auto& g : a->args) collect_free(g, bound, out);
    return;
  }
  if (const auto* cl = c->close_node()) {
    std::vector<std::string> added;
    for (const auto& p : cl->params)
      if (bound.insert(p.name).second) added.push_back(p.name);
    collect_free(cl->body, bound, out);
    for (const auto& n : added) bound.erase(n);
  }
}

bool alpha_eq(const ConstrPtr& a, const ConstrPtr& b,
              std::map<std::string, int>& la, std::map<std::string, int>& lb,
              int depth);

bool entity_alpha_eq(const Entity& a, const Entity& b) {
  auto ca = a.construction_value();
  auto cb = b.construction_value();
  if (ca || cb) {
    if (!ca || !cb) return false;
    // Fresh scopes: outer binders cannot reach displayed occurrences.
    std::map<std::string, int> la, lb;
    return alpha_eq(ca, cb, la, lb, 0);
  }
  return a == b;
}

bool alpha_eq(const ConstrPtr& a, const ConstrPtr& b,
              std::map<std::string, int>& la, std::map<std::string, int>& lb,
              int depth) {
  if (a == b && la.empty() && lb.empty()) return true;
  if (a->node().index() != b->node().index()) return false;
  if (const auto* va = a->variable()) {
    const auto* vb = b->variable();
    auto ia = la.find(va->name);
    auto ib = lb.find(vb->name);
    if ((ia == la.end()) != (ib == lb.end())) return false;
    if (ia != la.end()) return ia->second == ib->second && type_equal(va->type, vb->type);
    return va->name == vb->name && type_equal(va->type, vb->type);
  }
  if (const auto* ta = a->triv_node())
    return entity_alpha_eq(ta->payload, b->triv_node()->payload);
  if (const auto* ea = a->exec1_node())
    return entity_alpha_eq(ea->payload, b->exec1_node()->payload);
  if (const auto* xa = a->exec2_node())
    return alpha_eq(xa->inner, b->exec2_node()->inner, la, lb, depth);
  if (const auto* ca = a->comp_node()) {
    const auto* cb = b->comp_node();
    if (ca->args.size() != cb->args.size()) return false;
    if (!alpha_eq(ca->head, cb->head, la, lb, depth)) return false;
    for (size_t i = 0; i < ca->args.size(); ++i)
      if (!alpha_eq(ca->args[i], cb->args[i], la, lb, depth)) return false;
    return true;
  }
  const auto* cla = a->close_node();
  const auto* clb = b->close_node();
  if (cla->params.size() != clb->params.size()) return false;
  std::map<std::string, int> la2 = la, lb2 = lb;
  for (size_t i = 0; i < cla->params.size(); ++i) {
    if (!type_equal(cla->params[i].type, clb->params[i].type)) return false;
    la2[cla->params[i].name] = depth + static_cast<int>(i);
    lb2[clb->params[i].name] = depth + static_cast<int>(i);
  }
  return alpha_eq(cla->body, clb->body, la2, lb2, depth + static_cast<int>(cla->params.size()));
}

}  // namespace

std::vector<Variable> free_variables(const ConstrPtr& c) {
  std::set<std::string> bound;
  std::map<std::string, Variable> out;
  collect_free(c, bound, out);
  std::vector<Variable> res;
  res.reserve(out.size());
  for (auto& [_, v] : out) res.push_back(v);
  return res;
}

bool alpha_equivalent(const ConstrPtr& a, const ConstrPtr& b) {
  if (!a || !b) return a == b;
  std::map<std::string, int> la, lb;
  return alpha_eq(a, b, la, lb, 0);
}

ConstrPtr rename_executed(const ConstrPtr& c, const std::string& from,
                          const std::string& to) {
  if (const auto* v = c->variable()) {
    if (v->name == from)
      return Construction::var(Variable{to, v->type, v->constructs}, c->span);
    return c;
  }
  if (c->triv_node()) return c;
  if (const auto* e1 = c->exec1_node()) {
    if (auto p = e1->payload.construction_value()) {
      auto p2 = rename_executed(p, from, to);
      if (p2 == p) return c;
      return Construction::exec1(Entity::construction(p2), c->span);
    }
    return c;
  }
  if (const auto* e2 = c->exec2_node()) {
    if (const auto* t = e2->inner->triv_node()) {
      if (auto p = t->payload.construction_value()) {
        auto p2 = rename_executed(p, from, to);
        if (p2 == p) return c;
        return Construction::exec2(Construction::triv(Entity::construction(p2)), c->span);
      }
    }
    auto i2 = rename_executed(e2->inner, from, to);
    if (i2 == e2->inner) return c;
    return Construction::exec2(i2, c->span);
  }
  if (const auto* a = c->comp_node()) {
    auto h2 = rename_executed(a->head, from, to);
    std::vector<ConstrPtr> args2;
    bool changed = h2 != a->head;
    args2.reserve(a->args.size());
    for (const auto& g : a->args) {
      auto g2 = rename_executed(g, from, to);
      changed = changed || g2 != g;
      args2.push_back(g2);
    }
    if (!changed) return c;
    return Construction::comp(h2, std::move(args2), c->span);
  }
  const auto* cl = c->close_node();
  for (const auto& p : cl->params)
    if (p.name == from) return c;  // shadowed
  auto b2 = rename_executed(cl->body, from, to);
  if (b2 == cl->body) return c;
  return Construction::close(cl->params, b2, c->span);
}

bool structurally_equal(const ConstrPtr& a, const ConstrPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node().index() != b->node().index()) return false;
  if (const auto* va = a->variable()) {
    const auto* vb = b->variable();
    return va->name == vb->name && type_equal(va->type, vb->type);
  }
  auto entity_eq = [](const Entity& x, const Entity& y) {
    auto cx = x.construction_value();
    auto cy = y.construction_value();
    if (cx || cy) return structurally_equal(cx, cy);
    return x == y;
  };
  if (const auto* ta = a->triv_node()) return entity_eq(ta->payload, b->triv_node()->payload);
  if (const auto* ea = a->exec1_node()) return entity_eq(ea->payload, b->exec1_node()->payload);
  if (const auto* xa = a->exec2_node()) return structurally_equal(xa->inner, b->exec2_node()->inner);
  if (const auto* ca = a->comp_node()) {
    const auto* cb = b->comp_node();
    if (ca->args.size() != cb->args.size()) return false;
    if (!structurally_equal(ca->head, cb->head)) return false;
    for (size_t i = 0; i < ca->args.size(); ++i)
      if (!structurally_equal(ca->args[i], cb->args[i])) return false;
    return true;
  }
  const auto* cla = a->close_node();
  const auto* clb = b->close_node();
  if (cla->params.size() != clb->params.size()) return false;
  for (size_t i = 0; i < cla->params.size(); ++i)
    if (!(cla->params[i] == clb->params[i])) return false;
  return structurally_equal(cla->body, clb->body);
}

}  // namespace til
