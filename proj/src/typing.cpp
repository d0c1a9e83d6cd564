#include "til/typing.hpp"

#include <algorithm>

namespace til {

namespace {

bool is_poly_builtin(const std::string& name) {
  return name == "=" || name == "Forall" || name == "Exists" || name == "Sub" ||
         name == "Tr" || name == "Istar" || name == "if-then-else" ||
         name == "if-then-else-fail";
}

[[noreturn]] void mismatch(const std::string& what, const TypePtr& expected,
                           const TypePtr& actual, Span span) {
  throw TypeError(what + ": expected " + (expected ? expected->show() : "?") +
                      ", got " + (actual ? actual->show() : "?"),
                  span);
}

TypeDerivation infer_node(const ConstrPtr& c);

TypeDerivation infer_displayed(const ConstrPtr& payload) {
  TypeDerivation d = infer_node(payload);
  return d;
}

const Construction::Triv* displayed_construction(const ConstrPtr& c, ConstrPtr* out) {
  const auto* t = c->triv_node();
  if (!t) return nullptr;
  auto p = t->payload.construction_value();
  if (!p) return nullptr;
  *out = p;
  return t;
}

TypeDerivation infer_poly_comp(const ConstrPtr& c, const Construction::Comp& comp,
                               const std::string& name) {
  std::vector<TypeDerivation> arg_ds;
  // if-then-else(-fail) branches are displayed constructions selected for
  // execution; their payloads determine the result type.
  auto branch_type = [&](const ConstrPtr& arg) -> std::pair<TypePtr, TypeDerivation> {
    ConstrPtr payload;
    if (!displayed_construction(arg, &payload))
      throw TypeError("'" + name + "' selects among displayed constructions; "
                      "this argument is not a trivialized construction",
                      arg->span);
    TypeDerivation d = infer_node(arg);
    TypePtr t = d.children.empty() ? nullptr : d.children[0].assigned;
    return {t, std::move(d)};
  };

  TypePtr result;
  TypePtr head_type;
  if (name == "=") {
    if (comp.args.size() != 2)
      throw TypeError("'=' takes 2 arguments, got " + std::to_string(comp.args.size()),
                      c->span);
    auto d1 = infer_node(comp.args[0]);
    auto d2 = infer_node(comp.args[1]);
    TypePtr alpha;
    if (assignable(d1.assigned, d2.assigned)) alpha = d2.assigned;
    else if (assignable(d2.assigned, d1.assigned)) alpha = d1.assigned;
    else mismatch("'=' needs arguments of one type", d1.assigned, d2.assigned, c->span);
    result = Type::truth();
    head_type = Type::fn(result, {alpha, alpha});
    arg_ds.push_back(std::move(d1));
    arg_ds.push_back(std::move(d2));
  } else if (name == "Forall" || name == "Exists") {
    if (comp.args.size() != 1)
      throw TypeError("'" + name + "' takes 1 argument", c->span);
    auto d = infer_node(comp.args[0]);
    const FuncType* f = d.assigned ? d.assigned->func() : nullptr;
    if (!f || f->args.size() != 1 || !type_equal(f->result, Type::truth()))
      throw TypeError("'" + name + "' needs a class (o alpha), got " +
                          (d.assigned ? d.assigned->show() : "?"),
                      comp.args[0]->span);
    result = Type::truth();
    head_type = Type::fn(result, {d.assigned});
    arg_ds.push_back(std::move(d));
  } else if (name == "Sub") {
    if (comp.args.size() != 3)
      throw TypeError("'Sub' takes 3 arguments", c->span);
    int n = 1;
    for (const auto& a : comp.args) {
      auto d = infer_node(a);
      const OrderType* o = d.assigned ? d.assigned->construction_order() : nullptr;
      if (!o)
        throw TypeError("'Sub' operates on constructions, got " +
                            (d.assigned ? d.assigned->show() : "?"),
                        a->span);
      n = std::max(n, o->order);
      arg_ds.push_back(std::move(d));
    }
    result = Type::order(n);
    head_type = Type::fn(result, {result, result, result});
  } else if (name == "Tr") {
    if (comp.args.size() != 1)
      throw TypeError("'Tr' takes 1 argument", c->span);
    auto d = infer_node(comp.args[0]);
    if (!d.assigned) throw TypeError("cannot type 'Tr' argument", comp.args[0]->span);
    result = Type::order(d.assigned->type_order());
    head_type = Type::fn(result, {d.assigned});
    arg_ds.push_back(std::move(d));
  } else if (name == "Istar") {
    if (comp.args.size() != 1)
      throw TypeError("'Istar' takes 1 argument", c->span);
    auto d = infer_node(comp.args[0]);
    const FuncType* f = d.assigned ? d.assigned->func() : nullptr;
    const OrderType* o =
        f && f->args.size() == 1 && type_equal(f->result, Type::truth())
            ? f->args[0]->construction_order()
            : nullptr;
    if (!o)
      throw TypeError("'Istar' needs a class of constructions (o *n), got " +
                          (d.assigned ? d.assigned->show() : "?"),
                      comp.args[0]->span);
    result = Type::order(o->order);
    head_type = Type::fn(result, {d.assigned});
    arg_ds.push_back(std::move(d));
  } else if (name == "if-then-else-fail") {
    if (comp.args.size() != 2)
      throw TypeError("'if-then-else-fail' takes a condition and a displayed construction",
                      c->span);
    auto dp = infer_node(comp.args[0]);
    if (!type_equal(dp.assigned, Type::truth()))
      mismatch("condition of 'if-then-else-fail'", Type::truth(), dp.assigned,
               comp.args[0]->span);
    auto [bt, db] = branch_type(comp.args[1]);
    result = bt;
    head_type = Type::fn(result, {Type::truth(), db.assigned});
    arg_ds.push_back(std::move(dp));
    arg_ds.push_back(std::move(db));
  } else {  // if-then-else
    if (comp.args.size() != 3)
      throw TypeError("'if-then-else' takes a condition and two displayed constructions",
                      c->span);
    auto dp = infer_node(comp.args[0]);
    if (!type_equal(dp.assigned, Type::truth()))
      mismatch("condition of 'if-then-else'", Type::truth(), dp.assigned,
               comp.args[0]->span);
    auto [t1, d1] = branch_type(comp.args[1]);
    auto [t2, d2] = branch_type(comp.args[2]);
    if (!type_equal(t1, t2))
      mismatch("'if-then-else' branches", t1, t2, comp.args[2]->span);
    result = t1;
    head_type = Type::fn(result, {Type::truth(), d1.assigned, d2.assigned});
    arg_ds.push_back(std::move(dp));
    arg_ds.push_back(std::move(d1));
    arg_ds.push_back(std::move(d2));
  }

  TypeDerivation head{comp.head, head_type, "trivialization", {}};
  TypeDerivation d{c, result, "composition", {}};
  d.children.push_back(std::move(head));
  for (auto& a : arg_ds) d.children.push_back(std::move(a));
  return d;
}

TypeDerivation infer_node(const ConstrPtr& c) {
  if (const auto* v = c->variable()) {
    if (!v->type) throw TypeError("variable '" + v->name + "' has no type", c->span);
    return {c, v->type, "variable", {}};
  }
  if (const auto* t = c->triv_node()) {
    if (auto payload = t->payload.construction_value()) {
      TypeDerivation inner = infer_displayed(payload);
      return {c, Type::order(order_of(payload)), "trivialization", {std::move(inner)}};
    }
    const auto* b = t->payload.builtin_ref();
    if (b && !b->type && is_poly_builtin(b->name))
      throw TypeError("polymorphic constant '" + b->name +
                          "' is typed only at an applied use site",
                      c->span);
    TypePtr ty = t->payload.type();
    if (!ty) throw TypeError("cannot type trivialized entity", c->span);
    return {c, ty, "trivialization", {}};
  }
  if (const auto* e1 = c->exec1_node()) {
    auto payload = e1->payload.construction_value();
    if (!payload)
      throw TypeError("only a construction can be executed", c->span);
    TypeDerivation inner = infer_node(payload);
    TypePtr ty = inner.assigned;
    return {c, ty, "execution", {std::move(inner)}};
  }
  if (const auto* e2 = c->exec2_node()) {
    ConstrPtr displayed;
    if (displayed_construction(e2->inner, &displayed)) {
      TypeDerivation inner = infer_node(e2->inner);
      TypePtr ty = inner.children[0].assigned;
      return {c, ty, "double-execution", {std::move(inner)}};
    }
    if (const auto* v = e2->inner->variable(); v && v->constructs) {
      TypeDerivation inner = infer_node(e2->inner);
      return {c, v->constructs, "double-execution", {std::move(inner)}};
    }
    throw TypeError(
        "double execution needs a displayed construction or an annotated variable",
        c->span);
  }
  if (const auto* cl = c->close_node()) {
    if (cl->params.empty()) throw TypeError("closure without parameters", c->span);
    for (size_t i = 0; i < cl->params.size(); ++i)
      for (size_t j = i + 1; j < cl->params.size(); ++j)
        if (cl->params[i].name == cl->params[j].name)
          throw TypeError("closure parameters must be pairwise distinct", c->span);
    TypeDerivation body = infer_node(cl->body);
    std::vector<TypePtr> args;
    for (const auto& p : cl->params) {
      if (!p.type) throw TypeError("parameter '" + p.name + "' has no type", c->span);
      args.push_back(p.type);
    }
    TypePtr ty = Type::fn(body.assigned, std::move(args));
    return {c, ty, "closure", {std::move(body)}};
  }

  const auto* comp = c->comp_node();
  if (const auto* headTriv = comp->head->triv_node()) {
    if (const auto* b = headTriv->payload.builtin_ref();
        b && !b->type && is_poly_builtin(b->name))
      return infer_poly_comp(c, *comp, b->name);
  }
  TypeDerivation head = infer_node(comp->head);
  const FuncType* f = head.assigned ? head.assigned->func() : nullptr;
  if (!f)
    throw TypeError("composition head is not functional (got " +
                        (head.assigned ? head.assigned->show() : "?") + ")",
                    comp->head->span);
  if (f->args.size() != comp->args.size())
    throw TypeError("arity mismatch: head takes " + std::to_string(f->args.size()) +
                        " argument(s), got " + std::to_string(comp->args.size()),
                    c->span);
  TypeDerivation d{c, f->result, "composition", {}};
  d.children.push_back(std::move(head));
  for (size_t i = 0; i < comp->args.size(); ++i) {
    TypeDerivation a = infer_node(comp->args[i]);
    if (!assignable(a.assigned, f->args[i]))
      mismatch("argument " + std::to_string(i + 1), f->args[i], a.assigned,
               comp->args[i]->span);
    d.children.push_back(std::move(a));
  }
  return d;
}

}  // namespace

TypeDerivation infer(const ConstrPtr& c) { return infer_node(c); }

TypePtr proposition_type() {
  return Type::fn(Type::fn(Type::truth(), {Type::real()}), {Type::world()});
}

std::vector<TypeDerivation> check_kb(const KbFile& kb) {
  std::vector<TypeDerivation> out;
  auto check_one = [&](const ConstrPtr& c, const char* what) {
    TypeDerivation d = infer(c);
    if (!type_equal(d.assigned, proposition_type()))
      throw TypeError(std::string(what) + " must construct a proposition " +
                          proposition_type()->show() + ", got " + d.assigned->show() +
                          ": " + print(c),
                      c->span);
    out.push_back(std::move(d));
  };
  for (const auto& a : kb.assertions) check_one(a, "an assertion");
  for (const auto& q : kb.queries) check_one(q, "a query");
  return out;
}

namespace {

void render(const TypeDerivation& d, int depth, std::string& out) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += print(d.node) + " : " + (d.assigned ? d.assigned->show() : "?") + "  [" +
         d.rule + "]\n";
  for (const auto& ch : d.children) render(ch, depth + 1, out);
}

}  // namespace

std::string derivation_text(const TypeDerivation& d) {
  std::string out;
  render(d, 0, out);
  return out;
}

}  // namespace til
