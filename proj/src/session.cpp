#include "til/session.hpp"

#include <fstream>
#include <sstream>

#include "til/context.hpp"

namespace til {

const char* to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "Yes";
    case Answer::No: return "No";
    case Answer::Unknown: return "Unknown";
    case Answer::NoTruthValue: return "NoTruthValue";
  }
  return "";
}

Session Session::from_kb(KbFile kb) {
  Session s;
  s.kb_ = std::move(kb);
  check_kb(s.kb_);
  s.model_ = Model::from_kb(s.kb_);
  return s;
}

Session Session::load(const std::string& path) { return from_kb(load_kb_file(path)); }

void Session::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << print_kb(kb_);
}

ConstrPtr Session::parse_input(const std::string& text) const {
  return parse(text, kb_.symbols, kb_.vars, kb_.aliases);
}

const std::vector<Clause>& Session::kb_clauses() const {
  if (!clause_cache_) {
    ClausalTransform t;
    clause_cache_ = t.assertions(kb_.assertions);
  }
  return *clause_cache_;
}

void Session::add_line(const std::string& line) {
  std::string text = print_kb(kb_) + line + "\n";
  kb_ = parse_kb(text);
  check_kb(kb_);
  model_ = Model::from_kb(kb_);
  clause_cache_.reset();
}

EvalResult Session::evaluate_at_actual(const ConstrPtr& proposition) const {
  if (!model_ || !model_->actual)
    return EvalResult::improper(ImproperReason::UndefinedApplication);
  const auto* outer = proposition->close_node();
  if (!outer)
    return EvalResult::improper(ImproperReason::UndefinedApplication);
  Valuation v;
  ConstrPtr body;
  Value world{Entity::world(model_->actual->first)};
  Value time{Entity::number(model_->actual->second)};
  if (outer->params.size() == 2) {
    v = v.bind(outer->params[0].name, world).bind(outer->params[1].name, time);
    body = outer->body;
  } else if (outer->params.size() == 1 && outer->body->close_node() &&
             outer->body->close_node()->params.size() == 1) {
    const auto* inner = outer->body->close_node();
    v = v.bind(outer->params[0].name, world).bind(inner->params[0].name, time);
    body = inner->body;
  } else {
    return EvalResult::improper(ImproperReason::UndefinedApplication);
  }
  return evaluate(body, v, model_);
}

namespace {

// The matrix of a presupposition-carrying question: [if-then-else-fail P 'S].
bool has_presupposition(const ConstrPtr& question) {
  const auto* outer = question->close_node();
  if (!outer) return false;
  ConstrPtr body = outer->body;
  if (const auto* inner = body->close_node()) body = inner->body;
  const auto* a = body->comp_node();
  if (!a) return false;
  const auto* ht = a->head->triv_node();
  const auto* b = ht ? ht->payload.builtin_ref() : nullptr;
  return b && b->name == "if-then-else-fail";
}

}  // namespace

AskOutcome Session::ask(const ConstrPtr& question) const {
  TypeDerivation d = infer(question);
  if (!type_equal(d.assigned, proposition_type()))
    throw TypeError("a question must construct a proposition, got " + d.assigned->show(),
                    question->span);

  AskOutcome out;
  if (model_ && has_presupposition(question)) {
    EvalResult r = evaluate_at_actual(question);
    if (!r.ok()) {
      out.answer = Answer::NoTruthValue;
      out.trace = "presupposition failed: no truth value";
      return out;
    }
    out.answer = r.get().truth_is(true) ? Answer::Yes : Answer::No;
    out.trace = "evaluated against the model";
    return out;
  }

  {
    ClausalTransform t;
    std::vector<Clause> clauses = t.assertions(kb_.assertions);
    ClausalTransform::Goal goal = t.negated_question(question);
    ProofResult proof =
        prove(clauses, goal.clauses, limits, goal.query_var.value_or(""));
    out.clauses = clauses;
    out.clauses.insert(out.clauses.end(), goal.clauses.begin(), goal.clauses.end());
    out.trace = trace_text(proof);
    if (proof.status == ProofStatus::Proved) {
      out.answer = Answer::Yes;
      out.proof = std::move(proof);
      return out;
    }
    if (proof.status == ProofStatus::LimitReached) {
      out.answer = Answer::Unknown;
      out.proof = std::move(proof);
      return out;
    }
  }
  {
    // Refuting the question itself answers No.
    ClausalTransform t;
    std::vector<Clause> clauses = t.assertions(kb_.assertions);
    std::vector<Clause> goal = t.positive_question(question);
    ProofResult proof = prove(clauses, goal, limits, "");
    if (proof.status == ProofStatus::Proved) {
      out.answer = Answer::No;
      out.trace = trace_text(proof);
      out.proof = std::move(proof);
      return out;
    }
    out.answer = Answer::Unknown;
  }
  return out;
}

WhoOutcome Session::who(const ConstrPtr& question, const std::string& var) const {
  TypeDerivation d = infer(question);
  if (!type_equal(d.assigned, proposition_type()))
    throw TypeError("a question must construct a proposition, got " + d.assigned->show(),
                    question->span);

  // The original existential variable, for witness verification.
  std::optional<Variable> original_var;
  ConstrPtr matrix;
  {
    const auto* outer = question->close_node();
    ConstrPtr body = outer ? outer->body : nullptr;
    if (body && body->close_node()) body = body->close_node()->body;
    if (body) {
      const auto* a = body->comp_node();
      if (a && a->args.size() == 1) {
        const auto* ht = a->head->triv_node();
        const auto* b = ht ? ht->payload.builtin_ref() : nullptr;
        const auto* cl = a->args[0]->close_node();
        if (b && b->name == "Exists" && cl && cl->params.size() == 1) {
          original_var = cl->params[0];
          matrix = cl->body;
        }
      }
    }
  }
  if (!var.empty() && original_var && original_var->name != var)
    throw std::invalid_argument("the question quantifies '" + original_var->name +
                                "', not '" + var + "'");

  ClausalTransform t;
  std::vector<Clause> clauses = t.assertions(kb_.assertions);
  ClausalTransform::Goal goal = t.negated_question(question);
  Limits all = limits;
  all.find_all_refutations = true;
  ProofResult proof = prove(clauses, goal.clauses, all, goal.query_var.value_or(""));

  WhoOutcome out;
  out.trace = trace_text(proof);
  if (proof.status != ProofStatus::Proved) {
    out.answer = proof.status == ProofStatus::Exhausted ? Answer::No : Answer::Unknown;
    return out;
  }
  out.answer = Answer::Yes;

  auto add_name = [&](const std::string& n) {
    for (const auto& e : out.names)
      if (e == n) return;
    out.names.push_back(n);
  };
  for (const auto& term : answer_who(proof, proof.query_var))
    if (term.kind == Term::Kind::Const) add_name(print_entity(term.constant));

  // Indefinite refutations contribute candidates only when the model
  // confirms them as witnesses.
  if (model_ && original_var && matrix) {
    const auto* outer = question->close_node();
    for (const auto& r : proof.refutations) {
      if (r.query_bindings.size() < 2) continue;
      for (const auto& term : r.query_bindings) {
        if (term.kind != Term::Kind::Const) continue;
        ConstrPtr witness = replace_executed_occurrences(
            matrix, *original_var, Construction::triv(term.constant));
        ConstrPtr prop;
        if (outer->params.size() == 1 && outer->body->close_node()) {
          prop = Construction::close(outer->params,
                                     Construction::close(
                                         outer->body->close_node()->params, witness));
        } else {
          prop = Construction::close(outer->params, witness);
        }
        EvalResult v = evaluate_at_actual(prop);
        if (v.ok() && v.get().truth_is(true)) add_name(print_entity(term.constant));
      }
    }
  }
  return out;
}

std::string Session::typecheck_text(const ConstrPtr& c) const {
  return derivation_text(infer(c));
}

std::string Session::context_text(const ConstrPtr& c, const std::string& format) const {
  auto annotations = classify(c);
  return export_annotations(
      c, annotations,
      format == "text" ? AnnotationFormat::Text : AnnotationFormat::Xml);
}

std::string Session::clausal_text(const std::optional<ConstrPtr>& c) const {
  ClausalTransform t;
  if (c) {
    std::vector<Clause> clauses = t.assertions({*c});
    return clause_set_text(clauses);
  }
  std::vector<Clause> clauses = t.assertions(kb_.assertions);
  if (!kb_.queries.empty()) {
    auto goal = t.negated_question(kb_.queries.front());
    clauses.insert(clauses.end(), goal.clauses.begin(), goal.clauses.end());
  }
  return clause_set_text(clauses);
}

namespace {

const char* reason_name(ImproperReason r) {
  switch (r) {
    case ImproperReason::UndefinedApplication: return "undefined-application";
    case ImproperReason::NonConstructionExecuted: return "non-construction-executed";
    case ImproperReason::SingularizerEmptyOrMany: return "singularizer-empty-or-many";
    case ImproperReason::Propagated: return "propagated";
  }
  return "";
}

}  // namespace

std::string Session::eval_text(const ConstrPtr& c) const {
  EvalResult r = [&] {
    TypePtr ty;
    try {
      ty = infer(c).assigned;
    } catch (const TypeError&) {
      ty = nullptr;
    }
    if (model_ && ty && type_equal(ty, proposition_type()))
      return evaluate_at_actual(c);
    return evaluate(c, Valuation{}, model_);
  }();
  if (!r.ok()) return std::string("IMPROPER: ") + reason_name(r.why().reason);
  if (const Entity* e = r.get().entity()) {
    if (auto p = e->construction_value()) return "CONSTRUCTION: " + print(p);
    return print_entity(*e);
  }
  return "<function>";
}

}  // namespace til
