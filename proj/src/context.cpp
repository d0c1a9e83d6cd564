#include "til/context.hpp"

#include <map>
#include <set>

#include "til/syntax.hpp"

namespace til {

const char* to_string(ContextKind k) {
  switch (k) {
    case ContextKind::Hyperintensional: return "HYPERINTENSIONAL";
    case ContextKind::Intensional: return "INTENSIONAL";
    case ContextKind::Extensional: return "EXTENSIONAL";
  }
  return "";
}

namespace {

struct Binder {
  Variable var;
  ConstrPtr closure;
  bool consumed;  // fed by an application chain
  bool root_wt;   // part of the top-level \w \t wrapper
};

class Classifier {
 public:
  explicit Classifier(const ConstrPtr& root) : root_(root) {
    mark_root_wt_chain();
  }

  std::vector<ContextAnnotation> run() {
    Path path;
    // applied_levels of the whole construction is zero by definition.
    walk(root_, path, false, false, 0);
    return std::move(out_);
  }

 private:
  // The maximal leading chain of closures binding only omega/tau variables;
  // an empirical proposition keeps evaluating its matrix at the given pair,
  // so these binders do not genericize their body.
  void mark_root_wt_chain() {
    ConstrPtr cur = root_;
    while (cur) {
      const auto* cl = cur->close_node();
      if (!cl) break;
      bool all_wt = true;
      for (const auto& p : cl->params) {
        const auto* b = p.type ? p.type->base() : nullptr;
        if (!b || (b->kind != BaseKind::World && b->kind != BaseKind::Real))
          all_wt = false;
      }
      if (!all_wt) break;
      root_wt_closures_.insert(cur.get());
      cur = cl->body;
    }
  }

  void annotate(const Path& path, const ConstrPtr& node, ContextKind kind,
                Supposition sup, bool generic) {
    out_.push_back({path, node, kind, sup, generic});
  }

  // Variables of the argument tuple that occur executed and unbound within
  // the arguments themselves.
  static void tuple_variables(const std::vector<ConstrPtr>& args,
                              std::set<std::string>& names) {
    for (const auto& a : args)
      for (const auto& v : free_variables(a)) names.insert(v.name);
  }

  // `head_of` is the composition this node heads (null otherwise);
  // `applied_levels` counts how many applications are already stacked on
  // this occurrence from enclosing head positions.
  void walk(const ConstrPtr& c, Path& path, bool displayed,
            bool is_head, int applied_levels,
            const Construction::Comp* head_of = nullptr) {
    if (displayed) {
      annotate(path, c, ContextKind::Hyperintensional, Supposition::NotApplicable,
               false);
      descend_displayed(c, path);
      return;
    }

    Supposition sup = is_head ? Supposition::Extensional : Supposition::Intensional;
    bool generic = false;
    if (is_head && head_of) {
      std::set<std::string> names;
      tuple_variables(head_of->args, names);
      for (const auto& n : names) {
        const Binder* b = find_binder(n);
        if (b && !b->root_wt && !b->consumed) {
          generic = true;
          break;
        }
      }
    }
    ContextKind kind = (sup == Supposition::Extensional && !generic)
                           ? ContextKind::Extensional
                           : ContextKind::Intensional;
    annotate(path, c, kind, sup, generic);

    if (const auto* a = c->comp_node()) {
      path.push_back(0);
      walk(a->head, path, false, true, applied_levels + 1, a);
      path.pop_back();
      for (size_t i = 0; i < a->args.size(); ++i) {
        path.push_back(static_cast<int>(i) + 1);
        walk(a->args[i], path, false, false, 0);
        path.pop_back();
      }
      return;
    }
    if (const auto* cl = c->close_node()) {
      // Binders of a closure already sitting under enough applications are
      // consumed by those applications.
      bool consumed_here = applied_levels > 0;
      for (const auto& p : cl->params)
        binders_.push_back(
            {p, c, consumed_here, root_wt_closures_.count(c.get()) != 0});
      path.push_back(0);
      // The body of an applied closure chain passes the remaining
      // applications down to a directly nested closure.
      int remaining = applied_levels > 0 ? applied_levels - 1 : 0;
      const bool body_is_closure = cl->body->close_node() != nullptr;
      walk(cl->body, path, false, false, body_is_closure ? remaining : 0);
      path.pop_back();
      for (size_t i = 0; i < cl->params.size(); ++i) binders_.pop_back();
      return;
    }
    if (const auto* t = c->triv_node()) {
      if (auto p = t->payload.construction_value()) {
        path.push_back(0);
        walk(p, path, true, false, 0);
        path.pop_back();
      }
      return;
    }
    if (const auto* e1 = c->exec1_node()) {
      if (auto p = e1->payload.construction_value()) {
        path.push_back(0);
        walk(p, path, false, false, 0);
        path.pop_back();
      }
      return;
    }
    if (const auto* e2 = c->exec2_node()) {
      // ^2 over a displayed construction cancels the display: the payload
      // occurs executed, embedded at the position of the whole ^2 node.
      if (const auto* t = e2->inner->triv_node()) {
        if (auto p = t->payload.construction_value()) {
          path.push_back(0);
          annotate(path, e2->inner, ContextKind::Intensional,
                   Supposition::Intensional, false);
          path.push_back(0);
          walk(p, path, false, is_head, applied_levels, head_of);
          path.pop_back();
          path.pop_back();
          return;
        }
      }
      path.push_back(0);
      walk(e2->inner, path, false, false, 0);
      path.pop_back();
      return;
    }
  }

  void descend_displayed(const ConstrPtr& c, Path& path) {
    auto rec = [&](int i, const ConstrPtr& child) {
      path.push_back(i);
      walk(child, path, true, false, 0);
      path.pop_back();
    };
    if (const auto* t = c->triv_node()) {
      if (auto p = t->payload.construction_value()) rec(0, p);
    } else if (const auto* e1 = c->exec1_node()) {
      if (auto p = e1->payload.construction_value()) rec(0, p);
    } else if (const auto* e2 = c->exec2_node()) {
      rec(0, e2->inner);
    } else if (const auto* a = c->comp_node()) {
      rec(0, a->head);
      for (size_t i = 0; i < a->args.size(); ++i)
        rec(static_cast<int>(i) + 1, a->args[i]);
    } else if (const auto* cl = c->close_node()) {
      rec(0, cl->body);
    }
  }

  const Binder* find_binder(const std::string& name) const {
    for (auto it = binders_.rbegin(); it != binders_.rend(); ++it)
      if (it->var.name == name) return &*it;
    return nullptr;
  }

  ConstrPtr root_;
  std::vector<ContextAnnotation> out_;
  std::vector<Binder> binders_;
  std::set<const Construction*> root_wt_closures_;
};

// ---------------------------------------------------------------------------

struct Exporter {
  const std::map<const Construction*, const ContextAnnotation*>& by_node;
  AnnotationFormat format;
  std::string out;

  void emit(const ConstrPtr& c, int depth) {
    // Closures are transparent: the exported tree shows compositions,
    // trivializations, executions, and variables.
    if (const auto* cl = c->close_node()) {
      emit(cl->body, depth);
      return;
    }
    auto it = by_node.find(c.get());
    const char* ctx = it != by_node.end() ? to_string(it->second->kind) : "";
    std::string indent(static_cast<size_t>(depth) * 2, ' ');

    std::vector<ConstrPtr> children;
    const char* element = "Construction";
    std::string attr;
    if (const auto* v = c->variable()) {
      element = "Variable";
      attr = "name=\"" + v->name + "\"";
    } else if (const auto* t = c->triv_node()) {
      element = "Trivialisation";
      attr = "construction=\"" + print(c) + "\"";
      if (auto p = t->payload.construction_value()) children.push_back(p);
    } else if (const auto* a = c->comp_node()) {
      element = "Composition";
      attr = "construction=\"" + print(c) + "\"";
      children.push_back(a->head);
      for (const auto& g : a->args) children.push_back(g);
    } else if (const auto* e1 = c->exec1_node()) {
      element = "Execution";
      attr = "construction=\"" + print(c) + "\"";
      if (auto p = e1->payload.construction_value()) children.push_back(p);
    } else if (const auto* e2 = c->exec2_node()) {
      element = "DoubleExecution";
      attr = "construction=\"" + print(c) + "\"";
      children.push_back(e2->inner);
    }

    if (format == AnnotationFormat::Text) {
      out += indent + element + " context=" + ctx + " " +
             (c->variable() ? c->variable()->name : print(c)) + "\n";
      for (const auto& ch : children) emit(ch, depth + 1);
      return;
    }
    if (children.empty()) {
      out += indent + "<" + element + " context=\"" + ctx + "\" " + attr + "/>\n";
      return;
    }
    out += indent + "<" + element + " context=\"" + ctx + "\" " + attr + ">\n";
    for (const auto& ch : children) emit(ch, depth + 1);
    out += indent + "</" + element + ">\n";
  }
};

}  // namespace

std::vector<ContextAnnotation> classify(const ConstrPtr& c) {
  return Classifier(c).run();
}

std::string export_annotations(const ConstrPtr& root,
                               const std::vector<ContextAnnotation>& annotations,
                               AnnotationFormat format) {
  std::map<const Construction*, const ContextAnnotation*> by_node;
  for (const auto& a : annotations) by_node.emplace(a.node.get(), &a);
  Exporter ex{by_node, format, {}};
  ex.emit(root, 0);
  return ex.out;
}

}  // namespace til
