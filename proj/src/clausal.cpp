#include "til/clausal.hpp"

#include <algorithm>
#include <map>

#include "til/reduce.hpp"
#include "til/syntax.hpp"

namespace til {

namespace {

bool is_builtin(const ConstrPtr& c, const char* name) {
  const auto* t = c->triv_node();
  if (!t) return false;
  const auto* b = t->payload.builtin_ref();
  return b && b->name == name;
}

bool is_logical_name(const std::string& n) {
  return n == "And" || n == "Or" || n == "Not" || n == "Implies" || n == "Equiv" ||
         n == "Forall" || n == "Exists" || n == "All" || n == "=" || n == "Sub" ||
         n == "Tr" || n == "Istar" || n == "if-then-else" || n == "if-then-else-fail";
}

ConstrPtr btriv(const char* name) {
  TypePtr o = Type::truth();
  if (std::string(name) == "Not")
    return Construction::triv(Entity::builtin("Not", Type::fn(o, {o})));
  if (std::string(name) == "Forall" || std::string(name) == "Exists")
    return Construction::triv(Entity::builtin(name, nullptr));
  return Construction::triv(Entity::builtin(name, Type::fn(o, {o, o})));
}

ConstrPtr mk_not(const ConstrPtr& a) { return Construction::comp(btriv("Not"), {a}); }
ConstrPtr mk_bin(const char* name, const ConstrPtr& a, const ConstrPtr& b) {
  return Construction::comp(btriv(name), {a, b});
}

// Matches [Forall \v B] / [Exists \v B].
bool match_quant(const ConstrPtr& c, bool& universal, Variable& v, ConstrPtr& body) {
  const auto* a = c->comp_node();
  if (!a || a->args.size() != 1) return false;
  if (is_builtin(a->head, "Forall")) universal = true;
  else if (is_builtin(a->head, "Exists")) universal = false;
  else return false;
  const auto* cl = a->args[0]->close_node();
  if (!cl || cl->params.size() != 1) return false;
  v = cl->params[0];
  body = cl->body;
  return true;
}

bool match_unary(const ConstrPtr& c, const char* name, ConstrPtr& arg) {
  const auto* a = c->comp_node();
  if (!a || a->args.size() != 1 || !is_builtin(a->head, name)) return false;
  arg = a->args[0];
  return true;
}

bool match_binary(const ConstrPtr& c, const char* name, ConstrPtr& lhs, ConstrPtr& rhs) {
  const auto* a = c->comp_node();
  if (!a || a->args.size() != 2 || !is_builtin(a->head, name)) return false;
  lhs = a->args[0];
  rhs = a->args[1];
  return true;
}

bool var_is(const ConstrPtr& c, BaseKind k) {
  const auto* v = c->variable();
  return v && v->type && v->type->base() && v->type->base()->kind == k;
}

}  // namespace

// ---------------------------------------------------------------------------
// Terms, literals, clauses

Term Term::var(std::string name, TypePtr type) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(name);
  t.type = std::move(type);
  return t;
}
Term Term::constant(Entity e) {
  Term t;
  t.kind = Kind::Const;
  t.constant = std::move(e);
  t.type = t.constant.type();
  return t;
}
Term Term::skolem(std::string name, std::vector<Term> args, TypePtr type) {
  Term t;
  t.kind = Kind::Skolem;
  t.name = std::move(name);
  t.args = std::move(args);
  t.type = std::move(type);
  return t;
}

bool Term::is_ground() const {
  if (kind == Kind::Var) return false;
  for (const auto& a : args)
    if (!a.is_ground()) return false;
  return true;
}

std::string Term::show() const {
  switch (kind) {
    case Kind::Var: return name;
    case Kind::Const: return print_entity(constant);
    case Kind::Skolem: {
      if (args.empty()) return name;
      std::string s = name + "(";
      for (size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i].show();
      return s + ")";
    }
  }
  return "";
}

bool Term::operator==(const Term& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Var: return name == o.name && type_equal(type, o.type);
    case Kind::Const: return constant == o.constant;
    case Kind::Skolem: {
      if (name != o.name || args.size() != o.args.size()) return false;
      for (size_t i = 0; i < args.size(); ++i)
        if (!(args[i] == o.args[i])) return false;
      return true;
    }
  }
  return false;
}

std::string Literal::show() const {
  std::string s = positive ? "" : "~";
  s += predicate;
  if (!args.empty()) {
    s += "(";
    for (size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i].show();
    s += ")";
  }
  return s;
}

bool Literal::operator==(const Literal& o) const {
  if (positive != o.positive || predicate != o.predicate || args.size() != o.args.size())
    return false;
  for (size_t i = 0; i < args.size(); ++i)
    if (!(args[i] == o.args[i])) return false;
  return true;
}

bool Literal::operator<(const Literal& o) const {
  if (predicate != o.predicate) return predicate < o.predicate;
  if (positive != o.positive) return positive && !o.positive;
  return show() < o.show();
}

Clause Clause::of(std::vector<Literal> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end(),
                         [](const Literal& a, const Literal& b) { return a == b; }),
             lits.end());
  Clause c;
  c.literals = std::move(lits);
  return c;
}

bool Clause::is_tautology() const {
  for (const auto& l : literals)
    for (const auto& m : literals)
      if (l.positive != m.positive && l.predicate == m.predicate && l.args == m.args)
        return true;
  return false;
}

std::string Clause::show() const {
  if (literals.empty()) return "[]";
  std::string s;
  for (size_t i = 0; i < literals.size(); ++i)
    s += (i ? " | " : "") + literals[i].show();
  return s;
}

namespace {

void key_term(const Term& t, std::map<std::string, int>& vars, std::string& out) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto [it, fresh] = vars.emplace(t.name, static_cast<int>(vars.size()));
      (void)fresh;
      out += "?" + std::to_string(it->second);
      break;
    }
    case Term::Kind::Const:
      out += print_entity(t.constant);
      break;
    case Term::Kind::Skolem:
      out += t.name + "(";
      for (const auto& a : t.args) {
        key_term(a, vars, out);
        out += ",";
      }
      out += ")";
      break;
  }
}

}  // namespace

std::string Clause::canonical_key() const {
  std::map<std::string, int> vars;
  std::string out;
  for (const auto& l : literals) {
    out += l.positive ? "+" : "-";
    out += l.predicate + "(";
    for (const auto& a : l.args) {
      key_term(a, vars, out);
      out += ",";
    }
    out += ");";
  }
  return out;
}

std::string clause_set_text(const std::vector<Clause>& clauses) {
  std::string out;
  for (const auto& c : clauses) out += c.label + ") " + c.show() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline steps

ConstrPtr strip_lambda_wt(const ConstrPtr& c) {
  const auto* outer = c->close_node();
  if (outer && outer->params.size() == 2) {
    const auto& w = outer->params[0];
    const auto& t = outer->params[1];
    if (w.type && w.type->base() && w.type->base()->kind == BaseKind::World &&
        t.type && t.type->base() && t.type->base()->kind == BaseKind::Real)
      return outer->body;
  }
  if (outer && outer->params.size() == 1) {
    const auto& w = outer->params[0];
    const auto* inner = outer->body->close_node();
    if (w.type && w.type->base() && w.type->base()->kind == BaseKind::World &&
        inner && inner->params.size() == 1 && inner->params[0].type &&
        inner->params[0].type->base() &&
        inner->params[0].type->base()->kind == BaseKind::Real)
      return inner->body;
  }
  throw ClausalError("expected a proposition of the shape \\w \\t [...], got " + print(c));
}

ConstrPtr drop_vacuous_quantifiers(const ConstrPtr& c) {
  bool universal;
  Variable v;
  ConstrPtr body;
  if (match_quant(c, universal, v, body)) {
    ConstrPtr body2 = drop_vacuous_quantifiers(body);
    bool occurs = false;
    for (const auto& fv : free_variables(body2)) occurs = occurs || fv.name == v.name;
    if (!occurs) return body2;
    return Construction::comp(btriv(universal ? "Forall" : "Exists"),
                              {Construction::close({v}, body2)}, c->span);
  }
  if (const auto* a = c->comp_node()) {
    std::vector<ConstrPtr> args;
    for (const auto& g : a->args) args.push_back(drop_vacuous_quantifiers(g));
    return Construction::comp(drop_vacuous_quantifiers(a->head), std::move(args), c->span);
  }
  if (const auto* cl = c->close_node())
    return Construction::close(cl->params, drop_vacuous_quantifiers(cl->body), c->span);
  return c;
}

ConstrPtr eliminate_impl_equiv(const ConstrPtr& c) {
  if (const auto* a = c->comp_node()) {
    std::vector<ConstrPtr> args;
    for (const auto& g : a->args) args.push_back(eliminate_impl_equiv(g));
    ConstrPtr head = eliminate_impl_equiv(a->head);
    ConstrPtr out = Construction::comp(head, args, c->span);
    ConstrPtr lhs, rhs;
    if (match_binary(out, "Implies", lhs, rhs)) return mk_bin("Or", mk_not(lhs), rhs);
    if (match_binary(out, "Equiv", lhs, rhs))
      return mk_bin("And", mk_bin("Or", mk_not(lhs), rhs),
                    mk_bin("Or", mk_not(rhs), lhs));
    return out;
  }
  if (const auto* cl = c->close_node())
    return Construction::close(cl->params, eliminate_impl_equiv(cl->body), c->span);
  return c;
}

namespace {

ConstrPtr nnf(const ConstrPtr& c, bool positive) {
  ConstrPtr arg, lhs, rhs;
  if (match_unary(c, "Not", arg)) return nnf(arg, !positive);
  if (match_binary(c, "And", lhs, rhs))
    return mk_bin(positive ? "And" : "Or", nnf(lhs, positive), nnf(rhs, positive));
  if (match_binary(c, "Or", lhs, rhs))
    return mk_bin(positive ? "Or" : "And", nnf(lhs, positive), nnf(rhs, positive));
  bool universal;
  Variable v;
  ConstrPtr body;
  if (match_quant(c, universal, v, body)) {
    bool resulting = positive ? universal : !universal;
    return Construction::comp(btriv(resulting ? "Forall" : "Exists"),
                              {Construction::close({v}, nnf(body, positive))}, c->span);
  }
  return positive ? c : mk_not(c);
}

}  // namespace

ConstrPtr to_nnf(const ConstrPtr& c) { return nnf(c, true); }

// ---------------------------------------------------------------------------
// The stateful run

ClausalTransform::ClausalTransform()
    : pool_({"x", "y", "z", "u", "q", "r", "s", "v"}) {}

namespace {

void seed_names(const ConstrPtr& c, std::set<std::string>& used) {
  for (const auto& v : free_variables(c)) used.insert(v.name);
}

}  // namespace

ConstrPtr ClausalTransform::rename_apart(const ConstrPtr& c) {
  seed_names(c, used_names_);
  struct Walker {
    std::set<std::string>& used;
    const std::vector<std::string>& pool;

    std::string next_name() {
      for (const auto& p : pool)
        if (!used.count(p)) return p;
      for (int i = 1;; ++i)
        for (const auto& p : pool)
          if (!used.count(p + std::to_string(i))) return p + std::to_string(i);
    }

    ConstrPtr walk(const ConstrPtr& c) {
      if (const auto* cl = c->close_node()) {
        std::vector<Variable> params = cl->params;
        ConstrPtr body = cl->body;
        for (auto& p : params) {
          if (!used.count(p.name)) {
            used.insert(p.name);
            continue;
          }
          std::string fresh = next_name();
          used.insert(fresh);
          body = rename_executed(body, p.name, fresh);
          p.name = fresh;
        }
        return Construction::close(std::move(params), walk(body), c->span);
      }
      if (const auto* a = c->comp_node()) {
        std::vector<ConstrPtr> args;
        for (const auto& g : a->args) args.push_back(walk(g));
        return Construction::comp(walk(a->head), std::move(args), c->span);
      }
      if (const auto* e2 = c->exec2_node())
        return Construction::exec2(walk(e2->inner), c->span);
      return c;
    }
  } walker{used_names_, pool_};
  return walker.walk(c);
}

namespace {

void check_quantified_type(const Variable& v) {
  const auto* b = v.type ? v.type->base() : nullptr;
  if (!b || (b->kind != BaseKind::Individual && b->kind != BaseKind::Real))
    throw ClausalError("quantification over type " +
                       (v.type ? v.type->show() : std::string("?")) +
                       " is outside the clausal fragment (iota and tau only)");
}

}  // namespace

ConstrPtr ClausalTransform::skolemize(const ConstrPtr& c) {
  struct Walker {
    int& counter;
    std::vector<Variable> universals;

    ConstrPtr walk(const ConstrPtr& c) {
      bool universal;
      Variable v;
      ConstrPtr body;
      if (match_quant(c, universal, v, body)) {
        check_quantified_type(v);
        if (universal) {
          universals.push_back(v);
          ConstrPtr out = Construction::comp(
              btriv("Forall"), {Construction::close({v}, walk(body))}, c->span);
          universals.pop_back();
          return out;
        }
        std::string name = "sk" + std::to_string(++counter);
        ConstrPtr sk;
        if (universals.empty()) {
          sk = Construction::triv(Entity::builtin(name, v.type));
        } else {
          std::vector<TypePtr> arg_types;
          std::vector<ConstrPtr> args;
          for (const auto& u : universals) {
            arg_types.push_back(u.type);
            args.push_back(Construction::var(u));
          }
          sk = Construction::comp(
              Construction::triv(Entity::builtin(name, Type::fn(v.type, arg_types))),
              std::move(args));
        }
        ConstrPtr replaced = replace_executed_occurrences(body, v, sk);
        return walk(replaced);
      }
      ConstrPtr lhs, rhs;
      if (match_binary(c, "And", lhs, rhs)) return mk_bin("And", walk(lhs), walk(rhs));
      if (match_binary(c, "Or", lhs, rhs)) return mk_bin("Or", walk(lhs), walk(rhs));
      return c;
    }
  } walker{skolem_counter_, {}};
  return walker.walk(c);
}

namespace {

// Pulls every remaining universal quantifier off the matrix (input renamed
// apart and skolemized, so this is sound).
ConstrPtr strip_universals(const ConstrPtr& c, std::vector<Variable>& vars) {
  bool universal;
  Variable v;
  ConstrPtr body;
  if (match_quant(c, universal, v, body)) {
    if (!universal)
      throw ClausalError("existential quantifier survived skolemization: " + print(c));
    check_quantified_type(v);
    vars.push_back(v);
    return strip_universals(body, vars);
  }
  ConstrPtr lhs, rhs;
  if (match_binary(c, "And", lhs, rhs))
    return mk_bin("And", strip_universals(lhs, vars), strip_universals(rhs, vars));
  if (match_binary(c, "Or", lhs, rhs))
    return mk_bin("Or", strip_universals(lhs, vars), strip_universals(rhs, vars));
  return c;
}

Term term_of(const ConstrPtr& c) {
  if (const auto* v = c->variable()) {
    const auto* b = v->type ? v->type->base() : nullptr;
    if (!b || (b->kind != BaseKind::Individual && b->kind != BaseKind::Real))
      throw ClausalError("term variable '" + v->name + "' has unsupported type " +
                         (v->type ? v->type->show() : std::string("?")));
    return Term::var(v->name, v->type);
  }
  if (const auto* t = c->triv_node()) return Term::constant(t->payload);
  if (const auto* a = c->comp_node()) {
    const auto* ht = a->head->triv_node();
    const auto* b = ht ? ht->payload.builtin_ref() : nullptr;
    if (b && !is_logical_name(b->name)) {
      std::vector<Term> args;
      for (const auto& g : a->args) args.push_back(term_of(g));
      TypePtr result = b->type && b->type->func() ? b->type->func()->result : b->type;
      return Term::skolem(b->name, std::move(args), result);
    }
  }
  throw ClausalError("not a term of the clausal fragment: " + print(c));
}

// Atom forms: [P_wt a1..ak] / bare P_wt / [P a1..ak] with P non-logical.
Literal literal_of(const ConstrPtr& c, bool positive) {
  ConstrPtr arg;
  if (match_unary(c, "Not", arg)) return literal_of(arg, !positive);

  auto extensionalized_name = [](const ConstrPtr& x) -> const BuiltinRef* {
    const auto* outer = x->comp_node();
    if (!outer || outer->args.size() != 1 || !var_is(outer->args[0], BaseKind::Real))
      return nullptr;
    const auto* inner = outer->head->comp_node();
    if (!inner || inner->args.size() != 1 || !var_is(inner->args[0], BaseKind::World))
      return nullptr;
    const auto* ht = inner->head->triv_node();
    return ht ? ht->payload.builtin_ref() : nullptr;
  };

  Literal lit;
  lit.positive = positive;
  if (const BuiltinRef* b = extensionalized_name(c)) {
    lit.predicate = b->name;
    return lit;
  }
  const auto* a = c->comp_node();
  if (a) {
    if (const BuiltinRef* b = extensionalized_name(a->head)) {
      lit.predicate = b->name;
      for (const auto& g : a->args) lit.args.push_back(term_of(g));
      return lit;
    }
    const auto* ht = a->head->triv_node();
    const auto* b = ht ? ht->payload.builtin_ref() : nullptr;
    if (b && !is_logical_name(b->name)) {
      lit.predicate = b->name;
      for (const auto& g : a->args) lit.args.push_back(term_of(g));
      return lit;
    }
  }
  throw ClausalError("not an atom of the clausal fragment: " + print(c));
}

void cnf(const ConstrPtr& c, std::vector<std::vector<Literal>>& out) {
  ConstrPtr lhs, rhs;
  if (match_binary(c, "And", lhs, rhs)) {
    cnf(lhs, out);
    cnf(rhs, out);
    return;
  }
  if (match_binary(c, "Or", lhs, rhs)) {
    std::vector<std::vector<Literal>> left, right;
    cnf(lhs, left);
    cnf(rhs, right);
    std::vector<std::vector<Literal>> cross;
    for (const auto& l : left)
      for (const auto& r : right) {
        std::vector<Literal> merged = l;
        merged.insert(merged.end(), r.begin(), r.end());
        cross.push_back(std::move(merged));
      }
    out.insert(out.end(), cross.begin(), cross.end());
    return;
  }
  out.push_back({literal_of(c, true)});
}

}  // namespace

std::vector<Clause> ClausalTransform::to_clauses(const ConstrPtr& c) {
  std::vector<Variable> vars;
  ConstrPtr matrix = strip_universals(c, vars);
  std::vector<std::vector<Literal>> lists;
  cnf(matrix, lists);
  std::vector<Clause> out;
  for (auto& l : lists) {
    Clause cl = Clause::of(std::move(l));
    cl.origin = c;
    out.push_back(std::move(cl));
  }
  return out;
}

std::vector<Clause> ClausalTransform::proposition(const ConstrPtr& c) {
  ConstrPtr s = strip_lambda_wt(c);
  s = drop_vacuous_quantifiers(s);
  s = rename_apart(s);
  s = eliminate_impl_equiv(s);
  s = to_nnf(s);
  s = skolemize(s);
  return to_clauses(s);
}

std::vector<Clause> ClausalTransform::labelled(const ConstrPtr& prop, bool negate) {
  ConstrPtr s = strip_lambda_wt(prop);
  s = drop_vacuous_quantifiers(s);
  s = rename_apart(s);

  last_query_var_.reset();
  last_query_var_type_ = nullptr;
  bool universal;
  Variable qv;
  ConstrPtr qbody;
  if (match_quant(s, universal, qv, qbody) && !universal) {
    last_query_var_ = qv.name;
    last_query_var_type_ = qv.type;
  }

  if (negate) s = mk_not(s);
  s = eliminate_impl_equiv(s);
  s = to_nnf(s);
  s = skolemize(s);
  std::vector<Clause> clauses = to_clauses(s);

  std::string letter;
  int idx = label_index_++;
  if (idx < 26) letter = std::string(1, static_cast<char>('A' + idx));
  else letter = "C" + std::to_string(idx + 1);
  for (size_t i = 0; i < clauses.size(); ++i) {
    clauses[i].label =
        clauses.size() == 1 ? letter : letter + std::to_string(i + 1);
    clauses[i].origin = prop;
  }
  return clauses;
}

std::vector<Clause> ClausalTransform::assertions(const std::vector<ConstrPtr>& props) {
  std::vector<Clause> out;
  for (const auto& p : props) {
    auto cs = labelled(p, false);
    out.insert(out.end(), cs.begin(), cs.end());
  }
  return out;
}

ClausalTransform::Goal ClausalTransform::negated_question(const ConstrPtr& question) {
  Goal g;
  g.clauses = labelled(question, true);
  g.query_var = last_query_var_;
  g.query_var_type = last_query_var_type_;
  return g;
}

std::vector<Clause> ClausalTransform::positive_question(const ConstrPtr& question) {
  return labelled(question, false);
}

}  // namespace til
