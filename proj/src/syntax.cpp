#include "til/syntax.hpp"

#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>

namespace til {

namespace {

enum class Tok {
  LBracket, RBracket, LParen, RParen, Quote, Lambda, Colon,
  Exec1, Exec2, ExtWt, AtTw, StarOrder, Num, Ident, Eq, At, End,
};

struct Token {
  Tok kind;
  std::string text;
  Number num;
  int order = 0;
  Span span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '?';
}

class Lexer {
 public:
  Lexer(const std::string& text, int first_line) : text_(text), line_(first_line) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      if (!pending_.empty()) {
        out.push_back(pending_.front());
        pending_.pop_front();
        continue;
      }
      skip_space();
      if (pos_ >= text_.size()) break;
      out.push_back(next());
    }
    while (!pending_.empty()) {
      out.push_back(pending_.front());
      pending_.pop_front();
    }
    out.push_back({Tok::End, "", {}, 0, here()});
    return out;
  }

 private:
  Span here() const { return Span{pos_, pos_, line_, col_}; }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  char peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  Token make(Tok k, size_t len, std::string text = "") {
    Token t{k, std::move(text), {}, 0, here()};
    t.span.end = t.span.start + len;
    for (size_t i = 0; i < len; ++i) advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, here()); }

  long long scan_digits() {
    std::string d;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      d += peek();
      advance();
    }
    return std::stoll(d);
  }

  Token number(bool negative) {
    Span start = here();
    if (negative) advance();  // '-'
    bool has_digits = std::isdigit(static_cast<unsigned char>(peek())) != 0;
    long long whole = 0;
    if (has_digits) whole = scan_digits();
    Token t{Tok::Num, "", {}, 0, start};
    if (has_digits && peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      std::string s = std::to_string(whole) + ".";
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) { s += peek(); advance(); }
      if (peek() == 'e' || peek() == 'E') {
        s += peek(); advance();
        if (peek() == '+' || peek() == '-') { s += peek(); advance(); }
        while (std::isdigit(static_cast<unsigned char>(peek()))) { s += peek(); advance(); }
      }
      double d = std::stod(s);
      t.num = Number::real(negative ? -d : d);
      t.span.end = pos_;
      return t;
    }
    bool is_pi = false;
    if (peek() == 'p' && peek(1) == 'i' && !ident_char(peek(2))) {
      is_pi = true;
      advance();
      advance();
    }
    long long num = has_digits ? whole : 1;
    long long den = 1;
    if (peek() == '/' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      den = scan_digits();
      if (den == 0) fail("zero denominator in numeric literal");
    }
    Rational r(negative ? -num : num, den);
    t.num = is_pi ? Number::pi(r) : Number::exact(r);
    t.span.end = pos_;
    return t;
  }

  Token next() {
    char c = peek();
    switch (c) {
      case '[': return make(Tok::LBracket, 1);
      case ']': return make(Tok::RBracket, 1);
      case '(': return make(Tok::LParen, 1);
      case ')': return make(Tok::RParen, 1);
      case '\'': return make(Tok::Quote, 1);
      case '\\': return make(Tok::Lambda, 1);
      case ':': return make(Tok::Colon, 1);
      case '=': return make(Tok::Eq, 1, "=");
      case '@':
        if (peek(1) == 't' && peek(2) == 'w' && !ident_char(peek(3)))
          return make(Tok::AtTw, 3);
        return make(Tok::At, 1, "@");
      case '^':
        if (peek(1) == '1') return make(Tok::Exec1, 2);
        if (peek(1) == '2') return make(Tok::Exec2, 2);
        fail("expected ^1 or ^2");
        break;
      case '*':
        if (std::isdigit(static_cast<unsigned char>(peek(1)))) {
          Token t{Tok::StarOrder, "", {}, 0, here()};
          advance();
          t.order = static_cast<int>(scan_digits());
          t.span.end = pos_;
          if (t.order < 1) fail("construction order must be >= 1");
          return t;
        }
        return make(Tok::Ident, 1, "*");
      case '+': return make(Tok::Ident, 1, "+");
      case '/': return make(Tok::Ident, 1, "/");
      case '-':
        if (std::isdigit(static_cast<unsigned char>(peek(1))) ||
            (peek(1) == 'p' && peek(2) == 'i' && !ident_char(peek(3))))
          return number(true);
        return make(Tok::Ident, 1, "-");
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number(false);
    if (c == 'p' && peek(1) == 'i' &&
        (( !ident_char(peek(2)) && peek(2) != '/') ||
         (peek(2) == '/' && std::isdigit(static_cast<unsigned char>(peek(3))))))
      return number(false);
    if (ident_start(c)) {
      Token t{Tok::Ident, "", {}, 0, here()};
      std::string s;
      while (ident_char(peek())) {
        s += peek();
        advance();
      }
      t.span.end = pos_;
      if (s == "_wt") return Token{Tok::ExtWt, "", {}, 0, t.span};
      // Split one trailing extensionalization suffix off the identifier.
      if (s.size() > 3 && s.compare(s.size() - 3, 3, "_wt") == 0) {
        t.text = s.substr(0, s.size() - 3);
        Span es{t.span.end - 3, t.span.end, t.span.line, t.span.column};
        t.span.end -= 3;
        pending_.push_back({Tok::ExtWt, "", {}, 0, es});
        return t;
      }
      t.text = s;
      return t;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_;
  int col_ = 1;
  std::deque<Token> pending_;
};

std::vector<Token> lex(const std::string& text, int first_line = 1) {
  return Lexer(text, first_line).run();
}

// ---------------------------------------------------------------------------

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& take() {
    const Token& t = peek();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) throw ParseError("expected " + what, peek().span);
    return take();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().span);
  }
  bool done() const { return at(Tok::End); }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Types

TypePtr parse_type_expr(Cursor& cur, const std::map<std::string, TypePtr>& aliases) {
  TypePtr t;
  const Token& tok = cur.peek();
  switch (tok.kind) {
    case Tok::Ident: {
      cur.take();
      if (tok.text == "o") t = Type::truth();
      else if (tok.text == "iota") t = Type::individual();
      else if (tok.text == "tau") t = Type::real();
      else if (tok.text == "omega") t = Type::world();
      else {
        auto it = aliases.find(tok.text);
        if (it == aliases.end())
          throw ParseError("unknown type name '" + tok.text + "'", tok.span);
        t = it->second;
      }
      break;
    }
    case Tok::StarOrder:
      cur.take();
      t = Type::order(tok.order);
      break;
    case Tok::LParen: {
      cur.take();
      TypePtr result = parse_type_expr(cur, aliases);
      std::vector<TypePtr> args;
      while (!cur.at(Tok::RParen)) {
        if (cur.done()) cur.fail("unterminated functional type");
        args.push_back(parse_type_expr(cur, aliases));
      }
      cur.take();
      if (args.empty())
        throw ParseError("a functional type needs at least one argument type", tok.span);
      t = Type::fn(result, std::move(args));
      break;
    }
    default:
      cur.fail("expected a type");
  }
  while (cur.accept(Tok::AtTw))
    t = Type::fn(Type::fn(t, {Type::real()}), {Type::world()});
  return t;
}

// ---------------------------------------------------------------------------
// Constructions

// \w, \t and digit-suffixed variants default to omega/tau.
TypePtr auto_variable_type(const std::string& name) {
  if (name.empty()) return nullptr;
  char c = name[0];
  if (c != 'w' && c != 't') return nullptr;
  for (size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return nullptr;
  return c == 'w' ? Type::world() : Type::real();
}

class ConstructionParser {
 public:
  ConstructionParser(Cursor& cur, const SymbolTable& symbols, const VarEnv& vars,
                     const std::map<std::string, TypePtr>& aliases)
      : cur_(cur), symbols_(symbols), vars_(vars), aliases_(aliases) {}

  ConstrPtr parse_unit() {
    const Token& t = cur_.peek();
    if (t.kind == Tok::Exec1 || t.kind == Tok::Exec2) {
      cur_.take();
      ConstrPtr operand = parse_unit();
      if (t.kind == Tok::Exec2) return Construction::exec2(operand, t.span);
      if (const auto* tr = operand->triv_node())
        return Construction::exec1(tr->payload, t.span);
      return Construction::exec1(Entity::construction(operand), t.span);
    }
    ConstrPtr c = parse_quoted();
    while (cur_.at(Tok::ExtWt)) {
      Span s = cur_.take().span;
      c = extensionalize(c, s);
    }
    return c;
  }

 private:
  ConstrPtr parse_quoted() {
    if (cur_.at(Tok::Quote)) {
      Span s = cur_.take().span;
      return Construction::triv(parse_payload(), s);
    }
    return parse_atom();
  }

  Entity parse_payload() {
    const Token& t = cur_.peek();
    switch (t.kind) {
      case Tok::Num:
        cur_.take();
        return Entity::number(t.num);
      case Tok::Ident:
      case Tok::Eq: {
        cur_.take();
        // Binders shadow the symbol table inside their scope.
        if (const Variable* v = find_binder(t.text))
          return Entity::construction(Construction::var(*v, t.span));
        auto it = vars_.find(t.text);
        if (it != vars_.end())
          return Entity::construction(Construction::var(it->second, t.span));
        if (auto e = symbols_.lookup(t.text)) return *e;
        if (TypePtr at = auto_variable_type(t.text))
          return Entity::construction(
              Construction::var(Variable{t.text, at, nullptr}, t.span));
        throw ParseError("unknown symbol '" + t.text + "'", t.span);
      }
      case Tok::Quote: {
        cur_.take();
        return Entity::construction(Construction::triv(parse_payload(), t.span));
      }
      case Tok::LBracket:
      case Tok::Lambda:
        return Entity::construction(parse_atom());
      default:
        cur_.fail("expected a symbol, literal, or bracketed form after '");
    }
  }

  ConstrPtr parse_atom() {
    const Token& t = cur_.peek();
    switch (t.kind) {
      case Tok::LBracket: {
        cur_.take();
        std::vector<ConstrPtr> items;
        while (!cur_.at(Tok::RBracket)) {
          if (cur_.done()) throw ParseError("unterminated '['", t.span);
          items.push_back(parse_unit());
        }
        cur_.take();
        if (items.empty()) throw ParseError("empty brackets", t.span);
        if (items.size() == 1) return items[0];  // grouping
        ConstrPtr head = items[0];
        items.erase(items.begin());
        return Construction::comp(head, std::move(items), t.span);
      }
      case Tok::Lambda: {
        cur_.take();
        const Token& name = cur_.expect(Tok::Ident, "a variable name after \\");
        TypePtr type;
        if (cur_.accept(Tok::Colon)) {
          type = parse_type_expr(cur_, aliases_);
        } else if (auto it = vars_.find(name.text); it != vars_.end()) {
          type = it->second.type;
        } else {
          type = auto_variable_type(name.text);
        }
        if (!type)
          throw ParseError("variable '" + name.text +
                               "' needs a type annotation or declaration",
                           name.span);
        Variable v{name.text, type, nullptr};
        binders_.push_back(v);
        ConstrPtr body = parse_unit();
        binders_.pop_back();
        return Construction::close({v}, body, t.span);
      }
      case Tok::Ident: {
        cur_.take();
        if (const Variable* v = find_binder(t.text))
          return Construction::var(*v, t.span);
        if (auto it = vars_.find(t.text); it != vars_.end())
          return Construction::var(it->second, t.span);
        if (TypePtr at = auto_variable_type(t.text))
          return Construction::var(Variable{t.text, at, nullptr}, t.span);
        if (symbols_.contains(t.text))
          throw ParseError("'" + t.text +
                               "' names an entity; a construction of it must be "
                               "trivialized (write '" + t.text + ")",
                           t.span);
        throw ParseError("unknown variable '" + t.text + "'", t.span);
      }
      case Tok::Num:
        throw ParseError("a bare number is not a construction; write '" +
                             t.num.show(),
                         t.span);
      default:
        cur_.fail("expected a construction");
    }
  }

  const Variable* find_binder(const std::string& name) const {
    for (auto it = binders_.rbegin(); it != binders_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  ConstrPtr extensionalize(ConstrPtr c, Span s) {
    const Variable* w = nullptr;
    const Variable* t = nullptr;
    for (auto it = binders_.rbegin(); it != binders_.rend(); ++it) {
      if (!w && it->type && it->type->base() &&
          it->type->base()->kind == BaseKind::World)
        w = &*it;
      if (!t && it->type && it->type->base() &&
          it->type->base()->kind == BaseKind::Real)
        t = &*it;
    }
    if (!w || !t)
      throw ParseError("the _wt sugar needs enclosing \\w \\t binders", s);
    return Construction::comp(
        Construction::comp(c, {Construction::var(*w, s)}, s),
        {Construction::var(*t, s)}, s);
  }

  Cursor& cur_;
  const SymbolTable& symbols_;
  const VarEnv& vars_;
  const std::map<std::string, TypePtr>& aliases_;
  std::vector<Variable> binders_;
};

}  // namespace

TypePtr parse_type(const std::string& text,
                   const std::map<std::string, TypePtr>& aliases) {
  Cursor cur(lex(text));
  TypePtr t = parse_type_expr(cur, aliases);
  if (!cur.done()) cur.fail("trailing input after type");
  return t;
}

ConstrPtr parse(const std::string& text, const SymbolTable& symbols,
                const VarEnv& vars, const std::map<std::string, TypePtr>& aliases) {
  Cursor cur(lex(text));
  ConstructionParser p(cur, symbols, vars, aliases);
  ConstrPtr c = p.parse_unit();
  if (!cur.done()) cur.fail("trailing input after construction");
  return c;
}

// ---------------------------------------------------------------------------
// Knowledge-base files

namespace {

Entity parse_interp_entity(Cursor& cur, const SymbolTable& symbols,
                           const std::map<std::string, TypePtr>& aliases) {
  const Token& t = cur.peek();
  if (t.kind == Tok::Num) {
    cur.take();
    return Entity::number(t.num);
  }
  if (t.kind == Tok::Ident) {
    cur.take();
    if (t.text == "true") return Entity::truth(true);
    if (t.text == "false") return Entity::truth(false);
    if (auto e = symbols.lookup(t.text)) return *e;
    throw ParseError("unknown symbol '" + t.text + "'", t.span);
  }
  if (t.kind == Tok::Quote) {
    VarEnv none;
    ConstructionParser p(cur, symbols, none, aliases);
    ConstrPtr c = p.parse_unit();
    if (const auto* tr = c->triv_node()) return tr->payload;
    return Entity::construction(c);
  }
  throw ParseError("expected a value", t.span);
}

}  // namespace

KbFile parse_kb(const std::string& text) {
  KbFile kb;
  kb.symbols = SymbolTable::with_builtins();

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Cursor cur(lex(line, line_no));
    if (cur.done()) continue;
    const Token& head = cur.expect(Tok::Ident, "a declaration keyword");
    Declaration d;
    d.line = line_no;
    auto parse_named_type = [&] {
      d.name = cur.expect(Tok::Ident, "a name").text;
      cur.expect(Tok::Colon, "':'");
      d.type = parse_type_expr(cur, kb.aliases);
    };
    if (head.text == "type") {
      d.kind = Declaration::Kind::TypeAlias;
      parse_named_type();
      if (kb.aliases.count(d.name))
        throw ParseError("duplicate type alias '" + d.name + "'", head.span);
      kb.aliases[d.name] = d.type;
    } else if (head.text == "entity") {
      d.kind = Declaration::Kind::EntityDecl;
      parse_named_type();
      Entity e;
      if (d.type->base() && d.type->base()->kind == BaseKind::Individual)
        e = Entity::individual(d.name);
      else if (d.type->base() && d.type->base()->kind == BaseKind::World)
        e = Entity::world(d.name);
      else
        e = Entity::builtin(d.name, d.type);
      try {
        kb.symbols.declare(d.name, e);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(ex.what(), head.span);
      }
    } else if (head.text == "var") {
      d.kind = Declaration::Kind::VarDecl;
      parse_named_type();
      if (kb.vars.count(d.name) || kb.symbols.contains(d.name))
        throw ParseError("duplicate declaration of '" + d.name + "'", head.span);
      kb.vars[d.name] = Variable{d.name, d.type, nullptr};
    } else if (head.text == "assert" || head.text == "query") {
      d.kind = head.text == "assert" ? Declaration::Kind::Assert
                                     : Declaration::Kind::Query;
      ConstructionParser p(cur, kb.symbols, kb.vars, kb.aliases);
      d.construction = p.parse_unit();
      if (d.kind == Declaration::Kind::Assert)
        kb.assertions.push_back(d.construction);
      else
        kb.queries.push_back(d.construction);
    } else if (head.text == "world") {
      d.kind = Declaration::Kind::Worlds;
      while (cur.at(Tok::Ident)) {
        d.words.push_back(cur.take().text);
        if (!kb.symbols.contains(d.words.back()))
          kb.symbols.declare(d.words.back(), Entity::world(d.words.back()));
      }
      if (d.words.empty()) cur.fail("expected world names");
    } else if (head.text == "time" || head.text == "number") {
      d.kind = head.text == "time" ? Declaration::Kind::Times
                                   : Declaration::Kind::Numbers;
      while (cur.at(Tok::Num)) d.numbers.push_back(cur.take().num);
      if (d.numbers.empty() && cur.at(Tok::Ident) && cur.peek().text == "pi") {
        // `number pi` is common enough to accept the bare word.
      }
      while (cur.at(Tok::Ident) && cur.peek().text == "pi") {
        cur.take();
        d.numbers.push_back(Number::pi(Rational(1)));
      }
      if (d.numbers.empty()) cur.fail("expected numeric literals");
    } else if (head.text == "actual") {
      d.kind = Declaration::Kind::Actual;
      d.words.push_back(cur.expect(Tok::Ident, "a world name").text);
      d.numbers.push_back(cur.expect(Tok::Num, "a time").num);
    } else if (head.text == "interp") {
      d.kind = Declaration::Kind::Interp;
      d.name = cur.expect(Tok::Ident, "an intension name").text;
      cur.expect(Tok::At, "'@'");
      d.words.push_back(cur.expect(Tok::Ident, "a world name").text);
      d.numbers.push_back(cur.expect(Tok::Num, "a time").num);
      cur.expect(Tok::Colon, "':'");
      while (!cur.at(Tok::Eq) && !cur.done())
        d.entities.push_back(parse_interp_entity(cur, kb.symbols, kb.aliases));
      cur.expect(Tok::Eq, "'='");
      if (cur.at(Tok::Ident) && cur.peek().text == "undef") {
        cur.take();
        d.result_undefined = true;
      } else {
        d.entities.push_back(parse_interp_entity(cur, kb.symbols, kb.aliases));
      }
    } else if (head.text == "default") {
      d.kind = Declaration::Kind::Default;
      d.name = cur.expect(Tok::Ident, "an intension name").text;
      cur.expect(Tok::Eq, "'='");
      if (cur.at(Tok::Ident) && cur.peek().text == "undef") {
        cur.take();
        d.result_undefined = true;
      } else {
        d.entities.push_back(parse_interp_entity(cur, kb.symbols, kb.aliases));
      }
    } else {
      throw ParseError("unknown declaration '" + head.text + "'", head.span);
    }
    if (!cur.done()) cur.fail("trailing input after declaration");
    kb.declarations.push_back(std::move(d));
  }
  return kb;
}

KbFile load_kb_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_kb(ss.str());
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string print_kb(const KbFile& kb) {
  std::string out;
  for (const auto& d : kb.declarations) {
    switch (d.kind) {
      case Declaration::Kind::TypeAlias:
        out += "type " + d.name + " : " + d.type->show();
        break;
      case Declaration::Kind::EntityDecl:
        out += "entity " + d.name + " : " + d.type->show();
        break;
      case Declaration::Kind::VarDecl:
        out += "var " + d.name + " : " + d.type->show();
        break;
      case Declaration::Kind::Assert:
        out += "assert " + print(d.construction);
        break;
      case Declaration::Kind::Query:
        out += "query " + print(d.construction);
        break;
      case Declaration::Kind::Worlds:
        out += "world";
        for (const auto& w : d.words) out += " " + w;
        break;
      case Declaration::Kind::Times:
      case Declaration::Kind::Numbers:
        out += d.kind == Declaration::Kind::Times ? "time" : "number";
        for (const auto& n : d.numbers) out += " " + n.show();
        break;
      case Declaration::Kind::Actual:
        out += "actual " + d.words[0] + " " + d.numbers[0].show();
        break;
      case Declaration::Kind::Interp: {
        out += "interp " + d.name + " @ " + d.words[0] + " " + d.numbers[0].show() + " :";
        size_t nargs = d.entities.size() - (d.result_undefined ? 0 : 1);
        for (size_t i = 0; i < nargs; ++i) out += " " + print_entity(d.entities[i]);
        out += " = ";
        out += d.result_undefined ? "undef" : print_entity(d.entities.back());
        break;
      }
      case Declaration::Kind::Default:
        out += "default " + d.name + " = " +
               (d.result_undefined ? "undef" : print_entity(d.entities.back()));
        break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace til
