#include "til/resolve.hpp"

#include <algorithm>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace til {

namespace {

bool occurs_in(const std::string& var, const Term& t) {
  if (t.kind == Term::Kind::Var) return t.name == var;
  for (const auto& a : t.args)
    if (occurs_in(var, a)) return true;
  return false;
}

}  // namespace

bool Substitution::bind(const std::string& var, const TypePtr& var_type,
                        const Term& term) {
  Term resolved = apply(term);
  if (resolved.kind == Term::Kind::Var && resolved.name == var) return true;
  if (occurs_in(var, resolved)) return false;
  if (var_type && resolved.type && !assignable(resolved.type, var_type) &&
      !assignable(var_type, resolved.type))
    return false;
  // Keep idempotence: rewrite existing bindings with the new one.
  Substitution one;
  one.map_[var] = resolved;
  for (auto& [v, t] : map_) t = one.apply(t);
  map_[var] = resolved;
  return true;
}

Term Substitution::apply(const Term& t) const {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = map_.find(t.name);
      if (it == map_.end()) return t;
      return apply(it->second);
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::Skolem: {
      Term out = t;
      for (auto& a : out.args) a = apply(a);
      return out;
    }
  }
  return t;
}

Literal Substitution::apply(const Literal& l) const {
  Literal out = l;
  for (auto& a : out.args) a = apply(a);
  return out;
}

std::vector<Literal> Substitution::apply(const std::vector<Literal>& ls) const {
  std::vector<Literal> out;
  out.reserve(ls.size());
  for (const auto& l : ls) out.push_back(apply(l));
  return out;
}

std::optional<Term> Substitution::lookup(const std::string& var) const {
  auto it = map_.find(var);
  if (it == map_.end()) return std::nullopt;
  return apply(it->second);
}

std::string Substitution::show() const {
  std::string out;
  for (const auto& [v, t] : map_) {
    if (!out.empty()) out += ", ";
    out += t.show() + "/" + v;
  }
  return out;
}

bool unify_terms(const Term& a, const Term& b, Substitution& s) {
  Term x = s.apply(a);
  Term y = s.apply(b);
  if (x.kind == Term::Kind::Var) {
    if (y.kind == Term::Kind::Var && x.name == y.name) return true;
    // Opaque displayed constructions only match other constructions.
    if (y.kind == Term::Kind::Const && y.constant.construction_value() &&
        !(x.type && x.type->construction_order()))
      return false;
    return s.bind(x.name, x.type, y);
  }
  if (y.kind == Term::Kind::Var) return unify_terms(y, x, s);
  if (x.kind != y.kind) return false;
  if (x.kind == Term::Kind::Const) return x.constant == y.constant;
  if (x.name != y.name || x.args.size() != y.args.size()) return false;
  for (size_t i = 0; i < x.args.size(); ++i)
    if (!unify_terms(x.args[i], y.args[i], s)) return false;
  return true;
}

std::optional<Substitution> unify(const Literal& a, const Literal& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution s;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!unify_terms(a.args[i], b.args[i], s)) return std::nullopt;
  return s;
}

namespace {

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (const auto& a : t.args) collect_vars(a, out);
}

void collect_vars(const Clause& c, std::set<std::string>& out) {
  for (const auto& l : c.literals)
    for (const auto& a : l.args) collect_vars(a, out);
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& m) {
  Term out = t;
  if (out.kind == Term::Kind::Var) {
    auto it = m.find(out.name);
    if (it != m.end()) out.name = it->second;
    return out;
  }
  for (auto& a : out.args) a = rename_term(a, m);
  return out;
}

// Renames c2's variables apart from c1's, returning the renamed clause and
// the mapping.
Clause standardize_apart(const Clause& c1, const Clause& c2,
                         std::map<std::string, std::string>& mapping) {
  std::set<std::string> taken;
  collect_vars(c1, taken);
  std::set<std::string> own;
  collect_vars(c2, own);
  Clause out = c2;
  for (const auto& v : own) {
    if (!taken.count(v)) continue;
    std::string fresh = v + "_";
    int i = 0;
    while (taken.count(fresh) || own.count(fresh)) fresh = v + "_" + std::to_string(++i);
    mapping[v] = fresh;
    taken.insert(fresh);
  }
  if (!mapping.empty())
    for (auto& l : out.literals)
      for (auto& a : l.args) a = rename_term(a, mapping);
  return out;
}

std::vector<std::pair<Clause, Substitution>> resolvents_of(
    const Clause& c1, const Clause& c2_renamed) {
  std::vector<std::pair<Clause, Substitution>> out;
  for (size_t i = 0; i < c1.literals.size(); ++i) {
    for (size_t j = 0; j < c2_renamed.literals.size(); ++j) {
      const Literal& l1 = c1.literals[i];
      const Literal& l2 = c2_renamed.literals[j];
      if (l1.positive == l2.positive) continue;
      auto mgu = unify(l1, l2);
      if (!mgu) continue;
      std::vector<Literal> lits;
      for (size_t k = 0; k < c1.literals.size(); ++k)
        if (k != i) lits.push_back(mgu->apply(c1.literals[k]));
      for (size_t k = 0; k < c2_renamed.literals.size(); ++k)
        if (k != j) lits.push_back(mgu->apply(c2_renamed.literals[k]));
      out.emplace_back(Clause::of(std::move(lits)), *mgu);
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<Clause, Substitution>> resolve_step(const Clause& c1,
                                                          const Clause& c2) {
  std::map<std::string, std::string> mapping;
  Clause c2r = standardize_apart(c1, c2, mapping);
  return resolvents_of(c1, c2r);
}

namespace {

struct Candidate {
  Clause clause;
  Substitution mgu;
  std::string parent1, parent2;
};

// Answer bindings inherited from both parents plus whatever the unifier
// settles for the query variable (original name on the support side,
// renamed on the usable side).
std::vector<Term> merge_answers(const Clause& support, const Clause& usable,
                                const Substitution& mgu,
                                const std::map<std::string, std::string>& renames,
                                const std::string& query_var) {
  std::vector<Term> out = support.answers;
  auto add = [&](const Term& t) {
    if (!t.is_ground()) return;
    for (const auto& e : out)
      if (e == t) return;
    out.push_back(t);
  };
  for (const auto& t : usable.answers) add(t);
  if (!query_var.empty()) {
    if (auto t = mgu.lookup(query_var)) add(*t);
    auto it = renames.find(query_var);
    if (it != renames.end())
      if (auto t = mgu.lookup(it->second)) add(*t);
  }
  return out;
}

}  // namespace

ProofResult prove(const std::vector<Clause>& kb, const std::vector<Clause>& goal,
                  const Limits& limits, const std::string& query_var) {
  ProofResult result;
  result.query_var = query_var;

  std::vector<Clause> all;
  std::set<std::string> seen;
  for (const auto& c : kb) {
    all.push_back(c);
    seen.insert(c.canonical_key());
  }
  size_t support_begin = all.size();
  for (const auto& c : goal) {
    all.push_back(c);
    seen.insert(c.canonical_key());
  }

  int next_label = 1;
  bool proved = false;
  bool limited = false;

  for (size_t qi = support_begin; qi < all.size() && !limited; ++qi) {
    if (proved && !limits.find_all_refutations) break;
    const Clause support = all[qi];  // copy: `all` may reallocate
    const size_t usable_count = all.size();

    std::vector<std::vector<Candidate>> buckets(usable_count);
    auto generate = [&](size_t uj) {
      const Clause& usable = all[uj];
      std::map<std::string, std::string> renames;
      Clause renamed = standardize_apart(support, usable, renames);
      for (auto& [clause, mgu] : resolvents_of(support, renamed)) {
        if (clause.is_tautology()) continue;
        Candidate cand;
        cand.clause = std::move(clause);
        cand.clause.depth = std::max(support.depth, usable.depth) + 1;
        cand.clause.answers = merge_answers(support, renamed, mgu, renames, query_var);
        cand.mgu = mgu;
        cand.parent1 = support.label;
        cand.parent2 = usable.label;
        buckets[uj].push_back(std::move(cand));
      }
    };

    if (limits.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
      for (size_t uj = 0; uj < usable_count; ++uj) generate(uj);
#else
      for (size_t uj = 0; uj < usable_count; ++uj) generate(uj);
#endif
    } else {
      for (size_t uj = 0; uj < usable_count; ++uj) generate(uj);
    }

    // Sequential merge in generation order keeps the trace independent of
    // the thread schedule.
    for (size_t uj = 0; uj < usable_count && !limited; ++uj) {
      for (auto& cand : buckets[uj]) {
        if (cand.clause.depth > limits.max_depth) continue;
        std::string key = cand.clause.canonical_key();
        if (seen.count(key)) continue;
        seen.insert(key);
        cand.clause.label = "R" + std::to_string(next_label++);
        result.steps.push_back(
            {cand.clause, cand.parent1, cand.parent2, cand.mgu, cand.clause.label});
        if (cand.clause.empty()) {
          Refutation r;
          r.label = cand.clause.label;
          r.query_bindings = cand.clause.answers;
          result.refutations.push_back(std::move(r));
          proved = true;
          if (!limits.find_all_refutations) break;
        } else {
          all.push_back(cand.clause);
        }
        if (static_cast<int>(all.size()) > limits.max_clauses) {
          limited = true;
          break;
        }
      }
      if (proved && !limits.find_all_refutations) break;
    }
  }

  if (proved) {
    result.status = ProofStatus::Proved;
    const auto& first = result.refutations.front();
    if (!query_var.empty() && first.query_bindings.size() == 1) {
      Substitution s;
      s.bind(query_var, nullptr, first.query_bindings.front());
      result.answer = s;
    }
  } else {
    result.status = limited ? ProofStatus::LimitReached : ProofStatus::Exhausted;
  }
  return result;
}

std::vector<Term> answer_who(const ProofResult& result, const std::string& query_var) {
  std::vector<Term> out;
  if (query_var.empty()) return out;
  for (const auto& r : result.refutations) {
    if (r.query_bindings.size() != 1) continue;
    const Term& t = r.query_bindings.front();
    bool seen = false;
    for (const auto& e : out) seen = seen || e == t;
    if (!seen) out.push_back(t);
  }
  return out;
}

std::string trace_text(const ProofResult& result) {
  std::string out;
  for (const auto& s : result.steps) {
    out += s.label + ") " + s.resolvent.show() + "  <- " + s.parent1 + " + " + s.parent2;
    std::string sub = s.unifier.show();
    if (!sub.empty()) out += ", " + sub;
    out += "\n";
  }
  return out;
}

}  // namespace til
