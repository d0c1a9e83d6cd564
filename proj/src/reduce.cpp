#include "til/reduce.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace til {

EvalResult EvalResult::value(Value v) {
  EvalResult r;
  r.value_ = std::make_shared<Value>(std::move(v));
  return r;
}
EvalResult EvalResult::improper(ImproperReason reason, Path at) {
  EvalResult r;
  r.improper_ = std::make_shared<ImproperInfo>(ImproperInfo{reason, std::move(at)});
  return r;
}
EvalResult EvalResult::improper(ImproperInfo i) {
  EvalResult r;
  r.improper_ = std::make_shared<ImproperInfo>(std::move(i));
  return r;
}

// ---------------------------------------------------------------------------
// Names

namespace {

void collect_names(const ConstrPtr& c, std::set<std::string>& out) {
  if (const auto* v = c->variable()) {
    out.insert(v->name);
    return;
  }
  auto entity_names = [&](const Entity& e) {
    if (const auto* i = e.individual_value()) out.insert(i->name);
    if (const auto* w = e.world_value()) out.insert(w->name);
    if (const auto* b = e.builtin_ref()) out.insert(b->name);
    if (auto p = e.construction_value()) collect_names(p, out);
  };
  if (const auto* t = c->triv_node()) {
    entity_names(t->payload);
  } else if (const auto* e1 = c->exec1_node()) {
    entity_names(e1->payload);
  } else if (const auto* e2 = c->exec2_node()) {
    collect_names(e2->inner, out);
  } else if (const auto* a = c->comp_node()) {
    collect_names(a->head, out);
    for (const auto& g : a->args) collect_names(g, out);
  } else if (const auto* cl = c->close_node()) {
    for (const auto& p : cl->params) out.insert(p.name);
    collect_names(cl->body, out);
  }
}

}  // namespace

std::string fresh_name(const std::string& base, const std::vector<ConstrPtr>& avoid) {
  std::set<std::string> used;
  for (const auto& c : avoid)
    if (c) collect_names(c, used);
  if (!used.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!used.count(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Substitution machinery

namespace {

// Renames binders whose name is in `avoid` (plus their executed
// occurrences), everywhere including displayed payload interiors.
ConstrPtr rename_clashing_binders(const ConstrPtr& c, const std::set<std::string>& avoid,
                                  std::set<std::string>& used) {
  auto rec_entity = [&](const Entity& e) -> Entity {
    if (auto p = e.construction_value())
      return Entity::construction(rename_clashing_binders(p, avoid, used));
    return e;
  };
  if (c->variable()) return c;
  if (const auto* t = c->triv_node()) {
    if (!t->payload.construction_value()) return c;
    return Construction::triv(rec_entity(t->payload), c->span);
  }
  if (const auto* e1 = c->exec1_node()) {
    if (!e1->payload.construction_value()) return c;
    return Construction::exec1(rec_entity(e1->payload), c->span);
  }
  if (const auto* e2 = c->exec2_node())
    return Construction::exec2(rename_clashing_binders(e2->inner, avoid, used), c->span);
  if (const auto* a = c->comp_node()) {
    std::vector<ConstrPtr> args;
    args.reserve(a->args.size());
    for (const auto& g : a->args) args.push_back(rename_clashing_binders(g, avoid, used));
    return Construction::comp(rename_clashing_binders(a->head, avoid, used),
                              std::move(args), c->span);
  }
  const auto* cl = c->close_node();
  std::vector<Variable> params = cl->params;
  ConstrPtr body = cl->body;
  for (auto& p : params) {
    if (!avoid.count(p.name)) continue;
    std::string next = p.name;
    int i = 1;
    while (avoid.count(next) || used.count(next)) next = p.name + std::to_string(i++);
    used.insert(next);
    body = rename_executed(body, p.name, next);
    p.name = next;
  }
  return Construction::close(std::move(params),
                             rename_clashing_binders(body, avoid, used), c->span);
}

ConstrPtr replace_everywhere(const ConstrPtr& c, const ConstrPtr& target,
                             const ConstrPtr& replacement) {
  if (structurally_equal(c, target)) return replacement;
  auto rec = [&](const ConstrPtr& x) { return replace_everywhere(x, target, replacement); };
  auto rec_entity = [&](const Entity& e) -> Entity {
    if (auto p = e.construction_value()) return Entity::construction(rec(p));
    return e;
  };
  if (c->variable()) return c;
  if (const auto* t = c->triv_node()) {
    if (!t->payload.construction_value()) return c;
    return Construction::triv(rec_entity(t->payload), c->span);
  }
  if (const auto* e1 = c->exec1_node()) {
    if (!e1->payload.construction_value()) return c;
    return Construction::exec1(rec_entity(e1->payload), c->span);
  }
  if (const auto* e2 = c->exec2_node())
    return Construction::exec2(rec(e2->inner), c->span);
  if (const auto* a = c->comp_node()) {
    std::vector<ConstrPtr> args;
    args.reserve(a->args.size());
    for (const auto& g : a->args) args.push_back(rec(g));
    return Construction::comp(rec(a->head), std::move(args), c->span);
  }
  const auto* cl = c->close_node();
  return Construction::close(cl->params, rec(cl->body), c->span);
}

// Replaces executed occurrences of a variable; display-aware, shadow-aware,
// and capture-avoiding against the replacement's free names.
ConstrPtr replace_var_executed(const ConstrPtr& c, const Variable& var,
                               const ConstrPtr& replacement,
                               const std::set<std::string>& repl_free) {
  if (const auto* v = c->variable())
    return v->name == var.name ? replacement : c;
  if (c->triv_node()) return c;
  if (const auto* e1 = c->exec1_node()) {
    if (auto p = e1->payload.construction_value())
      return Construction::exec1(
          Entity::construction(replace_var_executed(p, var, replacement, repl_free)),
          c->span);
    return c;
  }
  if (const auto* e2 = c->exec2_node()) {
    if (const auto* t = e2->inner->triv_node()) {
      if (auto p = t->payload.construction_value())
        return Construction::exec2(
            Construction::triv(Entity::construction(
                replace_var_executed(p, var, replacement, repl_free))),
            c->span);
    }
    return Construction::exec2(
        replace_var_executed(e2->inner, var, replacement, repl_free), c->span);
  }
  if (const auto* a = c->comp_node()) {
    std::vector<ConstrPtr> args;
    args.reserve(a->args.size());
    for (const auto& g : a->args)
      args.push_back(replace_var_executed(g, var, replacement, repl_free));
    return Construction::comp(
        replace_var_executed(a->head, var, replacement, repl_free), std::move(args),
        c->span);
  }
  const auto* cl = c->close_node();
  for (const auto& p : cl->params)
    if (p.name == var.name) return c;  // shadowed
  std::vector<Variable> params = cl->params;
  ConstrPtr body = cl->body;
  for (auto& p : params) {
    if (!repl_free.count(p.name)) continue;
    std::string next = fresh_name(p.name + "0", {body, replacement});
    body = rename_executed(body, p.name, next);
    p.name = next;
  }
  return Construction::close(
      std::move(params), replace_var_executed(body, var, replacement, repl_free),
      c->span);
}

}  // namespace

ConstrPtr substitute(const ConstrPtr& what, const ConstrPtr& target,
                     const ConstrPtr& into) {
  if (!target->variable() && !target->triv_node())
    throw std::invalid_argument("substitution target must be a variable or a trivialization");
  std::set<std::string> avoid;
  for (const auto& v : free_variables(what)) avoid.insert(v.name);
  if (const auto* v = target->variable()) avoid.insert(v->name);
  std::set<std::string> used;
  collect_names(into, used);
  collect_names(what, used);
  ConstrPtr prepared = rename_clashing_binders(into, avoid, used);
  return replace_everywhere(prepared, target, what);
}

ConstrPtr trivialize(const Entity& e) { return Construction::triv(e); }

ConstrPtr replace_executed_occurrences(const ConstrPtr& c, const Variable& target,
                                       const ConstrPtr& replacement) {
  std::set<std::string> repl_free;
  for (const auto& v : free_variables(replacement)) repl_free.insert(v.name);
  return replace_var_executed(c, target, replacement, repl_free);
}

ConstrPtr beta_by_value(const ConstrPtr& comp) {
  const auto* a = comp->comp_node();
  if (!a) throw std::invalid_argument("not a composition");
  const auto* cl = a->head->close_node();
  if (!cl) throw std::invalid_argument("composition head is not a closure");
  if (cl->params.size() != a->args.size())
    throw std::invalid_argument("arity mismatch: closure takes " +
                                std::to_string(cl->params.size()) + " argument(s), got " +
                                std::to_string(a->args.size()));
  Entity sub = Entity::builtin("Sub", nullptr);
  Entity tr = Entity::builtin("Tr", nullptr);
  ConstrPtr acc = Construction::triv(Entity::construction(cl->body));
  for (size_t i = cl->params.size(); i-- > 0;) {
    ConstrPtr trD = Construction::comp(Construction::triv(tr), {a->args[i]});
    ConstrPtr x = Construction::triv(
        Entity::construction(Construction::var(cl->params[i])));
    acc = Construction::comp(Construction::triv(sub), {trD, x, acc});
  }
  return Construction::exec2(acc);
}

ConstrPtr beta_by_name_restricted(const ConstrPtr& comp) {
  const auto* a = comp->comp_node();
  if (!a) throw std::invalid_argument("not a composition");
  const auto* cl = a->head->close_node();
  if (!cl) throw std::invalid_argument("composition head is not a closure");
  if (cl->params.size() != a->args.size())
    throw std::invalid_argument("arity mismatch");
  std::vector<Variable> arg_vars;
  for (size_t i = 0; i < a->args.size(); ++i) {
    const auto* v = a->args[i]->variable();
    if (!v)
      throw std::invalid_argument(
          "restricted by-name conversion substitutes variables only; argument " +
          std::to_string(i + 1) + " is not a variable");
    if (!type_equal(v->type, cl->params[i].type))
      throw std::invalid_argument("argument variable '" + v->name +
                                  "' does not range over the parameter's type");
    arg_vars.push_back(*v);
  }
  // Simultaneous substitution via unique temporaries.
  ConstrPtr body = cl->body;
  std::vector<Variable> temps;
  for (size_t i = 0; i < cl->params.size(); ++i) {
    Variable tmp{fresh_name("v" + std::to_string(i), {body, comp}), cl->params[i].type,
                 nullptr};
    temps.push_back(tmp);
    body = replace_var_executed(body, cl->params[i], Construction::var(tmp), {tmp.name});
  }
  for (size_t i = 0; i < temps.size(); ++i)
    body = replace_var_executed(body, temps[i], Construction::var(arg_vars[i]),
                                {arg_vars[i].name});
  return body;
}

EvalResult singularize(const std::vector<ConstrPtr>& members) {
  std::vector<ConstrPtr> distinct;
  for (const auto& m : members) {
    bool seen = false;
    for (const auto& d : distinct)
      if (alpha_equivalent(m, d)) seen = true;
    if (!seen) distinct.push_back(m);
  }
  if (distinct.size() == 1)
    return EvalResult::value(Value(Entity::construction(distinct[0])));
  return EvalResult::improper(ImproperReason::SingularizerEmptyOrMany);
}

ConstrPtr if_then_else_fail(const ConstrPtr& condition, const ConstrPtr& branch) {
  Variable c{fresh_name("c", {condition, branch}), Type::order(order_of(branch)),
             nullptr};
  ConstrPtr eq = Construction::comp(
      Construction::triv(Entity::builtin("=", nullptr)),
      {Construction::var(c), Construction::triv(Entity::construction(branch))});
  ConstrPtr body = Construction::comp(Construction::triv(Entity::builtin("And", nullptr)),
                                      {condition, eq});
  ConstrPtr cls = Construction::close({c}, body);
  return Construction::exec2(Construction::comp(
      Construction::triv(Entity::builtin("Istar", nullptr)), {cls}));
}

ConstrPtr if_then_else(const ConstrPtr& condition, const ConstrPtr& then_branch,
                       const ConstrPtr& else_branch) {
  int n = std::max(order_of(then_branch), order_of(else_branch));
  Variable c{fresh_name("c", {condition, then_branch, else_branch}), Type::order(n),
             nullptr};
  auto btriv = [](const char* name) {
    return Construction::triv(Entity::builtin(name, nullptr));
  };
  auto eq = [&](const ConstrPtr& branch) {
    return Construction::comp(
        btriv("="),
        {Construction::var(c), Construction::triv(Entity::construction(branch))});
  };
  ConstrPtr pos = Construction::comp(btriv("And"), {condition, eq(then_branch)});
  ConstrPtr neg = Construction::comp(
      btriv("And"),
      {Construction::comp(btriv("Not"), {condition}), eq(else_branch)});
  ConstrPtr body = Construction::comp(btriv("Or"), {pos, neg});
  return Construction::exec2(
      Construction::comp(btriv("Istar"), {Construction::close({c}, body)}));
}

// ---------------------------------------------------------------------------
// Model

std::optional<std::vector<Value>> Model::domain(const TypePtr& t) const {
  if (!t || !t->base()) return std::nullopt;
  std::vector<Value> out;
  switch (t->base()->kind) {
    case BaseKind::Truth:
      out.emplace_back(Entity::truth(true));
      out.emplace_back(Entity::truth(false));
      return out;
    case BaseKind::Individual:
      for (const auto& i : individuals) out.emplace_back(Entity::individual(i));
      return out;
    case BaseKind::World:
      for (const auto& w : worlds) out.emplace_back(Entity::world(w));
      return out;
    case BaseKind::Real: {
      std::vector<Number> all = times;
      for (const auto& n : numbers) {
        bool seen = false;
        for (const auto& t2 : all) seen = seen || t2 == n;
        if (!seen) all.push_back(n);
      }
      for (const auto& n : all) out.emplace_back(Entity::number(n));
      return out;
    }
  }
  return std::nullopt;
}

std::shared_ptr<const Model> Model::from_kb(const KbFile& kb) {
  auto m = std::make_shared<Model>();
  for (const auto& [name, e] : kb.symbols.entries())
    if (e.individual_value()) m->individuals.push_back(name);
  bool any = false;
  for (const auto& d : kb.declarations) {
    switch (d.kind) {
      case Declaration::Kind::Worlds:
        for (const auto& w : d.words) m->worlds.push_back(w);
        any = true;
        break;
      case Declaration::Kind::Times:
        for (const auto& n : d.numbers) m->times.push_back(n);
        any = true;
        break;
      case Declaration::Kind::Numbers:
        for (const auto& n : d.numbers) m->numbers.push_back(n);
        any = true;
        break;
      case Declaration::Kind::Actual:
        m->actual = {d.words[0], d.numbers[0]};
        any = true;
        break;
      case Declaration::Kind::Interp: {
        Row row;
        row.world = d.words[0];
        row.time = d.numbers[0];
        size_t nargs = d.entities.size() - (d.result_undefined ? 0 : 1);
        row.args.assign(d.entities.begin(), d.entities.begin() + nargs);
        if (!d.result_undefined) row.result = d.entities.back();
        m->interp[d.name].rows.push_back(std::move(row));
        any = true;
        break;
      }
      case Declaration::Kind::Default:
        if (!d.result_undefined) m->interp[d.name].fallback = d.entities.back();
        else m->interp[d.name].fallback.reset();
        any = true;
        break;
      default:
        break;
    }
  }
  if (!m->actual && !m->worlds.empty() && !m->times.empty())
    m->actual = {m->worlds[0], m->times[0]};
  if (!any) return nullptr;
  return m;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool entity_time_number(const Entity& e, Number& out) {
  if (const auto* n = e.number_value()) {
    out = *n;
    return true;
  }
  if (const auto* t = e.time_value()) {
    out = t->value;
    return true;
  }
  return false;
}

struct Evaluator {
  ModelPtr model;

  EvalResult eval(const ConstrPtr& c, const Valuation& v, Path path) {
    if (const auto* var = c->variable()) {
      const Value* bound = v.find(var->name);
      if (!bound) return EvalResult::improper(ImproperReason::UndefinedApplication, path);
      return EvalResult::value(*bound);
    }
    if (const auto* t = c->triv_node()) return lift(t->payload, path);
    if (const auto* cl = c->close_node()) return make_closure(c, *cl, v);
    if (const auto* e1 = c->exec1_node()) {
      auto payload = e1->payload.construction_value();
      if (!payload)
        return EvalResult::improper(ImproperReason::NonConstructionExecuted, path);
      Path p2 = path;
      p2.push_back(0);
      return eval(payload, v, std::move(p2));
    }
    if (const auto* e2 = c->exec2_node()) {
      Path p2 = path;
      p2.push_back(0);
      EvalResult inner = eval(e2->inner, v, p2);
      if (!inner.ok())
        return EvalResult::improper({ImproperReason::Propagated, inner.why().at});
      const Entity* e = inner.get().entity();
      ConstrPtr produced = e ? e->construction_value() : nullptr;
      if (!produced)
        return EvalResult::improper(ImproperReason::NonConstructionExecuted, path);
      return eval(produced, v, std::move(p2));
    }
    return eval_comp(c, v, std::move(path));
  }

  EvalResult eval_comp(const ConstrPtr& c, const Valuation& v, Path path) {
    const auto* a = c->comp_node();
    // The conditional selectors are definitional: expand to the
    // double-executed singularizer form and run that.
    if (const auto* ht = a->head->triv_node()) {
      if (const auto* b = ht->payload.builtin_ref()) {
        if (b->name == "if-then-else-fail" || b->name == "if-then-else") {
          ConstrPtr expanded = expand_conditional(b->name, *a, path);
          if (!expanded)
            return EvalResult::improper(ImproperReason::UndefinedApplication, path);
          return eval(expanded, v, std::move(path));
        }
      }
    }
    Path hp = path;
    hp.push_back(0);
    EvalResult head = eval(a->head, v, std::move(hp));
    if (!head.ok())
      return EvalResult::improper({ImproperReason::Propagated, head.why().at});
    std::vector<Value> args;
    args.reserve(a->args.size());
    for (size_t i = 0; i < a->args.size(); ++i) {
      Path ap = path;
      ap.push_back(static_cast<int>(i) + 1);
      EvalResult r = eval(a->args[i], v, std::move(ap));
      if (!r.ok())
        return EvalResult::improper({ImproperReason::Propagated, r.why().at});
      args.push_back(r.get());
    }
    FunctionPtr f = head.get().function();
    if (!f || f->arity != args.size())
      return EvalResult::improper(ImproperReason::UndefinedApplication, path);
    EvalResult out = f->apply(args);
    if (!out.ok() && out.why().at.empty())
      return EvalResult::improper({out.why().reason, path});
    return out;
  }

  ConstrPtr expand_conditional(const std::string& name, const Construction::Comp& a,
                               const Path&) {
    auto displayed = [](const ConstrPtr& arg) -> ConstrPtr {
      if (const auto* t = arg->triv_node()) return t->payload.construction_value();
      return nullptr;
    };
    if (name == "if-then-else-fail") {
      if (a.args.size() != 2) return nullptr;
      ConstrPtr s = displayed(a.args[1]);
      if (!s) return nullptr;
      return if_then_else_fail(a.args[0], s);
    }
    if (a.args.size() != 3) return nullptr;
    ConstrPtr c1 = displayed(a.args[1]);
    ConstrPtr c2 = displayed(a.args[2]);
    if (!c1 || !c2) return nullptr;
    return if_then_else(a.args[0], c1, c2);
  }

  EvalResult make_closure(const ConstrPtr& node, const Construction::Close& cl,
                          const Valuation& v) {
    auto fn = std::make_shared<FunctionValue>();
    fn->arity = cl.params.size();
    for (const auto& p : cl.params) fn->arg_types.push_back(p.type);
    fn->source = node;
    Valuation captured = v;
    std::vector<Variable> params = cl.params;
    ConstrPtr body = cl.body;
    Evaluator self{model};
    fn->apply = [self, captured, params, body](const std::vector<Value>& args) {
      Valuation v2 = captured;
      for (size_t i = 0; i < params.size(); ++i) v2 = v2.bind(params[i].name, args[i]);
      return self.eval(body, v2, {});
    };
    return EvalResult::value(Value(fn));
  }

  // --- entities -> values ---------------------------------------------

  EvalResult lift(const Entity& e, const Path& path) {
    if (const auto* b = e.builtin_ref()) return lift_builtin(*b, path);
    return EvalResult::value(Value(e));
  }

  EvalResult lift_builtin(const BuiltinRef& b, const Path& path);

  // --- empirical intensions ---------------------------------------------

  // Flattens (..((r a..) b..) tau) omega into per-level argument lists.
  static bool flatten_intension(const TypePtr& t,
                                std::vector<std::vector<TypePtr>>& levels) {
    const FuncType* f = t ? t->func() : nullptr;
    if (!f) return false;
    // outermost: ( (inner tau) omega )
    if (f->args.size() != 1 || !type_equal(f->args[0], Type::world())) return false;
    const FuncType* g = f->result->func();
    if (!g || g->args.size() != 1 || !type_equal(g->args[0], Type::real())) return false;
    levels.push_back({Type::world()});
    levels.push_back({Type::real()});
    TypePtr cur = g->result;
    while (cur && cur->func()) {
      levels.push_back(cur->func()->args);
      cur = cur->func()->result;
    }
    return true;
  }

  EvalResult intension_value(const std::string& name, const TypePtr& type,
                             const Path& path) {
    std::vector<std::vector<TypePtr>> levels;
    if (!flatten_intension(type, levels))
      return EvalResult::improper(ImproperReason::UndefinedApplication, path);
    return EvalResult::value(intension_level(name, levels, 0, {}));
  }

  Value intension_level(const std::string& name,
                        const std::vector<std::vector<TypePtr>>& levels, size_t idx,
                        std::vector<Entity> collected) const {
    auto fn = std::make_shared<FunctionValue>();
    fn->arity = levels[idx].size();
    fn->arg_types = levels[idx];
    ModelPtr m = model;
    std::string n = name;
    fn->apply = [m, n, levels, idx, collected](const std::vector<Value>& args)
        -> EvalResult {
      std::vector<Entity> next = collected;
      for (const auto& a : args) {
        const Entity* e = a.entity();
        if (!e) return EvalResult::improper(ImproperReason::UndefinedApplication);
        next.push_back(*e);
      }
      if (idx + 1 < levels.size()) {
        Evaluator ev{m};
        return EvalResult::value(ev.intension_level(n, levels, idx + 1, std::move(next)));
      }
      if (!m) return EvalResult::improper(ImproperReason::UndefinedApplication);
      auto it = m->interp.find(n);
      if (it == m->interp.end())
        return EvalResult::improper(ImproperReason::UndefinedApplication);
      const auto* w = next[0].world_value();
      Number t;
      if (!w || !entity_time_number(next[1], t))
        return EvalResult::improper(ImproperReason::UndefinedApplication);
      for (const auto& row : it->second.rows) {
        if (row.world != w->name || !(row.time == t)) continue;
        if (row.args.size() != next.size() - 2) continue;
        bool match = true;
        for (size_t i = 0; i < row.args.size(); ++i)
          if (!(row.args[i] == next[i + 2])) match = false;
        if (!match) continue;
        if (!row.result)
          return EvalResult::improper(ImproperReason::UndefinedApplication);
        return EvalResult::value(Value(*row.result));
      }
      if (it->second.fallback) return EvalResult::value(Value(*it->second.fallback));
      return EvalResult::improper(ImproperReason::UndefinedApplication);
    };
    return Value(fn);
  }
};

// --- builtin registry -------------------------------------------------

FunctionPtr make_fn(size_t arity,
                    std::function<EvalResult(const std::vector<Value>&)> apply,
                    std::vector<TypePtr> arg_types = {}, TypePtr result = nullptr) {
  auto fn = std::make_shared<FunctionValue>();
  fn->arity = arity;
  fn->arg_types = std::move(arg_types);
  if (fn->arg_types.empty()) fn->arg_types.assign(arity, nullptr);
  fn->result_type = std::move(result);
  fn->apply = std::move(apply);
  return fn;
}

EvalResult truth_result(bool b) {
  return EvalResult::value(Value(Entity::truth(b)));
}

std::optional<bool> as_truth(const Value& v) {
  const Entity* e = v.entity();
  if (!e || !e->truth_value()) return std::nullopt;
  return e->truth_value()->value;
}

std::optional<Number> as_number(const Value& v) {
  const Entity* e = v.entity();
  if (!e) return std::nullopt;
  Number n;
  if (!entity_time_number(*e, n)) return std::nullopt;
  return n;
}

EvalResult apply_class(const FunctionPtr& cls, const Value& element) {
  return cls->apply({element});
}

// Membership in a class given by a (possibly partial) characteristic
// function: undefined cells are non-members.
bool class_contains(const FunctionPtr& cls, const Value& element) {
  EvalResult r = apply_class(cls, element);
  return r.ok() && r.get().truth_is(true);
}

EvalResult quantify_over(Quantifier q, const FunctionPtr& cls, const Model& m) {
  if (q == Quantifier::All) {
    auto superset_of = std::make_shared<FunctionValue>();
    superset_of->arity = 1;
    superset_of->arg_types = {Type::fn(Type::truth(), {Type::individual()})};
    auto inds = m.domain(Type::individual());
    FunctionPtr s = cls;
    std::vector<Value> individuals = inds ? *inds : std::vector<Value>{};
    superset_of->apply = [s, individuals](const std::vector<Value>& args) -> EvalResult {
      FunctionPtr a = args[0].function();
      if (!a) return EvalResult::improper(ImproperReason::UndefinedApplication);
      for (const auto& ind : individuals)
        if (class_contains(s, ind) && !class_contains(a, ind)) return truth_result(false);
      return truth_result(true);
    };
    return EvalResult::value(Value(superset_of));
  }
  TypePtr elem = cls->arg_types.empty() ? nullptr : cls->arg_types[0];
  auto dom = m.domain(elem);
  if (!dom) return EvalResult::improper(ImproperReason::UndefinedApplication);
  if (q == Quantifier::Forall) {
    for (const auto& d : *dom)
      if (!class_contains(cls, d)) return truth_result(false);
    return truth_result(true);
  }
  for (const auto& d : *dom)
    if (class_contains(cls, d)) return truth_result(true);
  return truth_result(false);
}

// Candidate constructions of a singularizer class: the displayed sides of
// equations [c = 'X] over the class's bound variable.
void collect_candidates(const ConstrPtr& c, const std::string& var,
                        std::vector<ConstrPtr>& out) {
  if (const auto* a = c->comp_node()) {
    if (const auto* ht = a->head->triv_node()) {
      if (const auto* b = ht->payload.builtin_ref();
          b && b->name == "=" && a->args.size() == 2) {
        for (int i = 0; i < 2; ++i) {
          const auto* v = a->args[i]->variable();
          const auto* t = a->args[1 - i]->triv_node();
          if (v && v->name == var && t) {
            if (auto p = t->payload.construction_value()) out.push_back(p);
          }
        }
      }
    }
    collect_candidates(a->head, var, out);
    for (const auto& g : a->args) collect_candidates(g, var, out);
    return;
  }
  if (const auto* cl = c->close_node()) {
    for (const auto& p : cl->params)
      if (p.name == var) return;
    collect_candidates(cl->body, var, out);
    return;
  }
  if (const auto* e2 = c->exec2_node()) collect_candidates(e2->inner, var, out);
}

EvalResult istar_apply(const Value& cls) {
  FunctionPtr f = cls.function();
  if (!f) return EvalResult::improper(ImproperReason::UndefinedApplication);
  std::vector<ConstrPtr> members;
  if (f->source && f->source->close_node()) {
    const auto* cl = f->source->close_node();
    std::vector<ConstrPtr> candidates;
    collect_candidates(cl->body, cl->params[0].name, candidates);
    for (const auto& cand : candidates)
      if (class_contains(f, Value(Entity::construction(cand)))) members.push_back(cand);
  }
  return singularize(members);
}

EvalResult Evaluator::lift_builtin(const BuiltinRef& b, const Path& path) {
  const std::string& n = b.name;
  auto binary_truth = [&](auto op) {
    return EvalResult::value(Value(make_fn(2, [op](const std::vector<Value>& a) -> EvalResult {
      auto x = as_truth(a[0]);
      auto y = as_truth(a[1]);
      if (!x || !y) return EvalResult::improper(ImproperReason::UndefinedApplication);
      return truth_result(op(*x, *y));
    })));
  };
  if (n == "And") return binary_truth([](bool x, bool y) { return x && y; });
  if (n == "Or") return binary_truth([](bool x, bool y) { return x || y; });
  if (n == "Implies") return binary_truth([](bool x, bool y) { return !x || y; });
  if (n == "Equiv") return binary_truth([](bool x, bool y) { return x == y; });
  if (n == "Not")
    return EvalResult::value(Value(make_fn(1, [](const std::vector<Value>& a) -> EvalResult {
      auto x = as_truth(a[0]);
      if (!x) return EvalResult::improper(ImproperReason::UndefinedApplication);
      return truth_result(!*x);
    })));
  if (n == "=")
    return EvalResult::value(Value(make_fn(2, [](const std::vector<Value>& a) -> EvalResult {
      const Entity* x = a[0].entity();
      const Entity* y = a[1].entity();
      if (!x || !y) return EvalResult::improper(ImproperReason::UndefinedApplication);
      Number nx, ny;
      if (entity_time_number(*x, nx) && entity_time_number(*y, ny))
        return truth_result(nx == ny);
      return truth_result(*x == *y);
    })));
  if (n == "+" || n == "-" || n == "*" || n == "/") {
    char op = n[0];
    return EvalResult::value(Value(make_fn(2, [op](const std::vector<Value>& a) -> EvalResult {
      auto x = as_number(a[0]);
      auto y = as_number(a[1]);
      if (!x || !y) return EvalResult::improper(ImproperReason::UndefinedApplication);
      std::optional<Number> r;
      switch (op) {
        case '+': r = add(*x, *y); break;
        case '-': r = subtract(*x, *y); break;
        case '*': r = multiply(*x, *y); break;
        case '/': r = divide(*x, *y); break;
      }
      if (!r) return EvalResult::improper(ImproperReason::UndefinedApplication);
      return EvalResult::value(Value(Entity::number(*r)));
    })));
  }
  if (n == "Cot")
    return EvalResult::value(Value(make_fn(1, [](const std::vector<Value>& a) -> EvalResult {
      auto x = as_number(a[0]);
      if (!x) return EvalResult::improper(ImproperReason::UndefinedApplication);
      auto r = cotangent(*x);
      if (!r) return EvalResult::improper(ImproperReason::UndefinedApplication);
      return EvalResult::value(Value(Entity::number(*r)));
    })));
  if (n == "Forall" || n == "Exists" || n == "All") {
    Quantifier q = n == "Forall" ? Quantifier::Forall
                   : n == "Exists" ? Quantifier::Exists
                                   : Quantifier::All;
    ModelPtr m = model;
    return EvalResult::value(Value(make_fn(1, [q, m](const std::vector<Value>& a) -> EvalResult {
      if (!m) return EvalResult::improper(ImproperReason::UndefinedApplication);
      FunctionPtr cls = a[0].function();
      if (!cls) return EvalResult::improper(ImproperReason::UndefinedApplication);
      return quantify_over(q, cls, *m);
    })));
  }
  if (n == "Sub")
    return EvalResult::value(Value(make_fn(3, [](const std::vector<Value>& a) -> EvalResult {
      ConstrPtr c1 = a[0].entity() ? a[0].entity()->construction_value() : nullptr;
      ConstrPtr c2 = a[1].entity() ? a[1].entity()->construction_value() : nullptr;
      ConstrPtr c3 = a[2].entity() ? a[2].entity()->construction_value() : nullptr;
      if (!c1 || !c2 || !c3 || (!c2->variable() && !c2->triv_node()))
        return EvalResult::improper(ImproperReason::UndefinedApplication);
      return EvalResult::value(Value(Entity::construction(substitute(c1, c2, c3))));
    })));
  if (n == "Tr")
    return EvalResult::value(Value(make_fn(1, [](const std::vector<Value>& a) -> EvalResult {
      const Entity* e = a[0].entity();
      if (!e) return EvalResult::improper(ImproperReason::UndefinedApplication);
      return EvalResult::value(Value(Entity::construction(trivialize(*e))));
    })));
  if (n == "Istar")
    return EvalResult::value(Value(make_fn(1, [](const std::vector<Value>& a) -> EvalResult {
      return istar_apply(a[0]);
    })));
  if (n == "if-then-else" || n == "if-then-else-fail")
    // Meaningful only as a composition head (expanded there).
    return EvalResult::value(Value(make_fn(0, [](const std::vector<Value>&) -> EvalResult {
      return EvalResult::improper(ImproperReason::UndefinedApplication);
    })));
  // Empirical intension: value determined by the model's tables.
  if (b.type && b.type->func()) return intension_value(n, b.type, path);
  // A declared non-functional constant denotes itself.
  return EvalResult::value(Value(Entity::builtin(b.name, b.type)));
}

}  // namespace

EvalResult evaluate(const ConstrPtr& c, const Valuation& v, const ModelPtr& m) {
  Evaluator ev{m};
  return ev.eval(c, v, {});
}

EvalResult quantify(Quantifier q, const Value& cls, const Model& m) {
  FunctionPtr f = cls.function();
  if (!f) return EvalResult::improper(ImproperReason::UndefinedApplication);
  return quantify_over(q, f, m);
}

}  // namespace til
