#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "til/context.hpp"
#include "til/session.hpp"

using nlohmann::json;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitNoTruthValue = 3;
constexpr int kExitInputError = 4;

int answer_exit_code(til::Answer a) {
  switch (a) {
    case til::Answer::Yes: return kExitYes;
    case til::Answer::No: return kExitNo;
    case til::Answer::Unknown: return kExitUnknown;
    case til::Answer::NoTruthValue: return kExitNoTruthValue;
  }
  return kExitUnknown;
}

struct Options {
  std::string kb_path;
  std::string construction;
  std::string format = "text";
  std::string who_var;
  til::Limits limits;
};

til::Session open_session(const Options& opt) {
  til::Session s = til::Session::load(opt.kb_path);
  s.limits = opt.limits;
  return s;
}

til::ConstrPtr question_of(const til::Session& s, const Options& opt) {
  if (!opt.construction.empty()) return s.parse_input(opt.construction);
  if (!s.kb().queries.empty()) return s.kb().queries.front();
  throw std::runtime_error("no question given and the knowledge base declares none");
}

json step_json(const til::ProofStep& s) {
  json j;
  j["label"] = s.label;
  j["clause"] = s.resolvent.show();
  j["parents"] = {s.parent1, s.parent2};
  j["substitution"] = s.unifier.show();
  return j;
}

int run_ask(const Options& opt) {
  til::Session s = open_session(opt);
  til::AskOutcome out = s.ask(question_of(s, opt));
  if (opt.format == "json-lines") {
    for (const auto& step : out.proof.steps) std::cout << step_json(step) << "\n";
    json j;
    j["answer"] = til::to_string(out.answer);
    std::cout << j << "\n";
  } else {
    if (!out.trace.empty()) std::cout << out.trace;
    std::cout << til::to_string(out.answer) << "\n";
  }
  return answer_exit_code(out.answer);
}

int run_who(const Options& opt) {
  til::Session s = open_session(opt);
  til::WhoOutcome out = s.who(question_of(s, opt), opt.who_var);
  if (opt.format == "json-lines") {
    json j;
    j["answer"] = til::to_string(out.answer);
    j["names"] = out.names;
    std::cout << j << "\n";
  } else {
    for (const auto& n : out.names) std::cout << n << "\n";
    if (out.names.empty()) std::cout << "(none)\n";
  }
  return out.names.empty() ? kExitNo : kExitYes;
}

int run_typecheck(const Options& opt) {
  til::Session s = open_session(opt);
  if (opt.construction.empty()) {
    auto derivations = til::check_kb(s.kb());
    for (const auto& d : derivations) std::cout << til::derivation_text(d) << "\n";
    return kExitYes;
  }
  std::cout << s.typecheck_text(s.parse_input(opt.construction));
  return kExitYes;
}

int run_context(const Options& opt) {
  til::Session s = open_session(opt);
  til::ConstrPtr c = s.parse_input(opt.construction);
  if (opt.format == "json-lines") {
    for (const auto& a : til::classify(c)) {
      json j;
      j["construction"] = til::print(a.node);
      j["context"] = til::to_string(a.kind);
      std::cout << j << "\n";
    }
    return kExitYes;
  }
  std::cout << s.context_text(c, opt.format);
  return kExitYes;
}

int run_clausal(const Options& opt) {
  til::Session s = open_session(opt);
  std::optional<til::ConstrPtr> c;
  if (!opt.construction.empty()) c = s.parse_input(opt.construction);
  std::cout << s.clausal_text(c);
  return kExitYes;
}

int run_eval(const Options& opt) {
  til::Session s = open_session(opt);
  std::cout << s.eval_text(s.parse_input(opt.construction)) << "\n";
  return kExitYes;
}

void repl_help() {
  std::cout << "Commands:\n"
               "  :ask CONSTRUCTION        prove a question against the KB\n"
               "  :who VAR CONSTRUCTION    answer variable bindings\n"
               "  :typecheck CONSTRUCTION  type derivation tree\n"
               "  :context CONSTRUCTION    context annotations (xml)\n"
               "  :clausal                 clause set of the KB (+ negated query)\n"
               "  :eval CONSTRUCTION       evaluate against the model\n"
               "  :save PATH / :load PATH  persist or replace the session\n"
               "  :quit\n"
               "Anything else is a KB declaration (entity/var/assert/query/...).\n";
}

int run_repl(Options opt) {
  til::Session s = opt.kb_path.empty() ? til::Session::from_kb(til::parse_kb(""))
                                       : til::Session::load(opt.kb_path);
  s.limits = opt.limits;
  std::string line;
  std::cout << "tilk> " << std::flush;
  while (std::getline(std::cin, line)) {
    try {
      if (line == ":quit" || line == ":q") break;
      if (line == ":help" || line == ":h") {
        repl_help();
      } else if (line.rfind(":ask ", 0) == 0) {
        til::AskOutcome out = s.ask(s.parse_input(line.substr(5)));
        if (!out.trace.empty()) std::cout << out.trace;
        std::cout << til::to_string(out.answer) << "\n";
      } else if (line.rfind(":who ", 0) == 0) {
        std::string rest = line.substr(5);
        auto sp = rest.find(' ');
        if (sp == std::string::npos) throw std::runtime_error("usage: :who VAR QUESTION");
        til::WhoOutcome out = s.who(s.parse_input(rest.substr(sp + 1)), rest.substr(0, sp));
        for (const auto& n : out.names) std::cout << n << "\n";
        if (out.names.empty()) std::cout << "(none)\n";
      } else if (line.rfind(":typecheck ", 0) == 0) {
        std::cout << s.typecheck_text(s.parse_input(line.substr(11)));
      } else if (line.rfind(":context ", 0) == 0) {
        std::cout << s.context_text(s.parse_input(line.substr(9)), "xml");
      } else if (line == ":clausal") {
        std::cout << s.clausal_text(std::nullopt);
      } else if (line.rfind(":eval ", 0) == 0) {
        std::cout << s.eval_text(s.parse_input(line.substr(6))) << "\n";
      } else if (line.rfind(":save ", 0) == 0) {
        s.save(line.substr(6));
      } else if (line.rfind(":load ", 0) == 0) {
        s = til::Session::load(line.substr(6));
        s.limits = opt.limits;
      } else if (!line.empty() && line[0] == ':') {
        std::cout << "unknown command; :help lists them\n";
      } else if (!line.empty()) {
        s.add_line(line);
      }
    } catch (const std::exception& e) {
      std::cout << "error: " << e.what() << "\n";
    }
    std::cout << "tilk> " << std::flush;
  }
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tilk - a reasoning engine for Transparent Intensional Logic"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool kb_required) {
    sub->add_option("-f,--file", opt.kb_path, "knowledge base file")
        ->required(kb_required);
    sub->add_option("--format", opt.format, "text|xml|json-lines")
        ->check(CLI::IsMember({"text", "xml", "json-lines"}));
    sub->add_option("--max-clauses", opt.limits.max_clauses, "kept-clause limit")
        ->envname("TILK_MAX_CLAUSES");
    sub->add_option("--max-depth", opt.limits.max_depth, "derivation depth limit")
        ->envname("TILK_MAX_DEPTH");
    sub->add_flag("--parallel", opt.limits.parallel,
                  "parallel resolvent generation (same trace)");
  };

  auto* ask = app.add_subcommand("ask", "prove a yes/no question");
  add_common(ask, true);
  ask->add_option("question", opt.construction, "question construction");

  auto* who = app.add_subcommand("who", "answer bindings of a question variable");
  add_common(who, true);
  who->add_option("-v,--var", opt.who_var, "query variable");
  who->add_option("question", opt.construction, "question construction");

  auto* typecheck = app.add_subcommand("typecheck", "type derivation tree");
  add_common(typecheck, true);
  typecheck->add_option("construction", opt.construction, "construction");

  auto* context = app.add_subcommand("context", "context-recognition annotations");
  add_common(context, true);
  context->add_option("construction", opt.construction, "construction")->required();
  context->get_option("--format")->default_str("xml");

  auto* clausal = app.add_subcommand("clausal", "clausal form");
  add_common(clausal, true);
  clausal->add_option("construction", opt.construction, "construction");

  auto* eval = app.add_subcommand("eval", "evaluate against the model");
  add_common(eval, true);
  eval->add_option("construction", opt.construction, "construction")->required();

  auto* repl = app.add_subcommand("repl", "interactive session");
  add_common(repl, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (context->parsed() && opt.format == "text" &&
        context->get_option("--format")->empty())
      opt.format = "xml";
    if (ask->parsed()) return run_ask(opt);
    if (who->parsed()) return run_who(opt);
    if (typecheck->parsed()) return run_typecheck(opt);
    if (context->parsed()) return run_context(opt);
    if (clausal->parsed()) return run_clausal(opt);
    if (eval->parsed()) return run_eval(opt);
    if (repl->parsed()) return run_repl(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitYes;
}
