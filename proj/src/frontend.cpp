#include "structsim/frontend.hpp"

#include <charconv>
#include <cstdint>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace structsim {

// ---------------------------------------------------------------- lexer ----

namespace {

enum class Tok : uint8_t { Ident, Int, Double, Str, Punct, End };

struct LTok {
  Tok kind;
  std::string text;
  int line = 0;
  int col = 0;
};

struct Lexer {
  const std::string& src;
  const std::string& path;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg, path, line, col); }

  char peek(size_t ahead = 0) const {
    return pos + ahead < src.size() ? src[pos + ahead] : '\0';
  }

  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (peek() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        advance();
        advance();
        while (peek() && !(peek() == '*' && peek(1) == '/')) advance();
        if (!peek()) fail("unterminated block comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::vector<LTok> run() {
    std::vector<LTok> out;
    for (;;) {
      skip_trivia();
      int tl = line, tc = col;
      char c = peek();
      if (!c) {
        out.push_back({Tok::End, "", tl, tc});
        return out;
      }
      if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string t;
        while (isalnum(static_cast<unsigned char>(peek())) || peek() == '_') t += advance();
        out.push_back({Tok::Ident, t, tl, tc});
      } else if (isdigit(static_cast<unsigned char>(c))) {
        std::string t;
        bool isDouble = false;
        while (isdigit(static_cast<unsigned char>(peek()))) t += advance();
        if (peek() == '.' && isdigit(static_cast<unsigned char>(peek(1)))) {
          isDouble = true;
          t += advance();
          while (isdigit(static_cast<unsigned char>(peek()))) t += advance();
        }
        out.push_back({isDouble ? Tok::Double : Tok::Int, t, tl, tc});
      } else if (c == '"') {
        advance();
        std::string t;
        while (peek() && peek() != '"') {
          char d = advance();
          if (d == '\\') {
            char e = advance();
            switch (e) {
              case 'n': t += '\n'; break;
              case 't': t += '\t'; break;
              case '"': t += '"'; break;
              case '\\': t += '\\'; break;
              default: fail("unknown escape");
            }
          } else if (d == '\n') {
            fail("unterminated string");
          } else {
            t += d;
          }
        }
        if (!peek()) fail("unterminated string");
        advance();
        out.push_back({Tok::Str, t, tl, tc});
      } else {
        static const char* two[] = {"==", "!=", "<=", ">=", "&&", "||", "++", "--"};
        std::string t(1, advance());
        std::string t2 = t + std::string(1, peek());
        for (const char* op : two) {
          if (t2 == op) {
            advance();
            t = t2;
            break;
          }
        }
        static const std::string singles = "(){};,.=<>+-*/%!";
        if (t.size() == 1 && singles.find(t[0]) == std::string::npos)
          fail("unexpected character '" + t + "'");
        out.push_back({Tok::Punct, t, tl, tc});
      }
    }
  }
};

const std::set<std::string> kReserved = {
    "Optional", "println", "readLine", "sqrt",   "abs",   "min",    "max",
    "of",       "ofNullable", "get",   "orElse", "this",  "true",   "false",
    "new",      "class",  "if",       "else",    "for",   "while",  "return",
    "throw",    "static", "final",    "var",     "void",  "int",    "double",
    "boolean",  "String"};

const std::set<std::string> kPrimitiveTypes = {"int", "double", "boolean", "String",
                                               "var", "Optional"};

bool canonical_int(const std::string& in, std::string& out) {
  long long v = 0;
  auto res = std::from_chars(in.data(), in.data() + in.size(), v);
  if (res.ec != std::errc() || res.ptr != in.data() + in.size()) return false;
  out = std::to_string(v);
  return true;
}

std::string canonical_double(const std::string& in) {
  double v = std::strtod(in.c_str(), nullptr);
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  // Keep an explicit decimal form so the literal re-lexes as a double.
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
  return s;
}

// --------------------------------------------------------------- parser ----

struct Parser {
  Ast& ast;
  const std::string& path;
  std::vector<LTok> toks;
  size_t pos = 0;
  std::string class_name; // empty in bare units

  const LTok& cur() const { return toks[pos]; }
  const LTok& ahead(size_t n) const { return toks[std::min(pos + n, toks.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError(msg + " (found '" + cur().text + "')", path, cur().line, cur().col);
  }

  bool at_punct(const std::string& p) const { return cur().kind == Tok::Punct && cur().text == p; }
  bool at_word(const std::string& w) const { return cur().kind == Tok::Ident && cur().text == w; }

  LTok take() { return toks[pos++]; }

  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'");
    ++pos;
  }

  std::string expect_ident() {
    if (cur().kind != Tok::Ident) fail("expected identifier");
    return take().text;
  }

  NodeId make(NodeKind k, const LTok& t) {
    NodeId n = ast.make(k);
    ast.at(n).span = {t.line, t.col};
    return n;
  }

  // unit := classDecl | member+
  void parse_into_unit(NodeId unit) {
    if (at_word("class")) {
      NodeId c = parse_class();
      ast.add_child(unit, c);
      if (cur().kind != Tok::End) fail("one top-level class per file");
    } else {
      // Bare members (classless snippet).
      while (cur().kind != Tok::End) ast.add_child(unit, parse_member());
      if (ast.at(unit).children.empty()) fail("empty source file");
    }
  }

  NodeId parse_class() {
    const LTok& t = cur();
    ++pos; // class
    NodeId c = make(NodeKind::ClassDecl, t);
    ast.at(c).name = expect_ident();
    class_name = ast.at(c).name;
    expect_punct("{");
    while (!at_punct("}")) ast.add_child(c, parse_member());
    expect_punct("}");
    class_name.clear();
    return c;
  }

  NodeId parse_member() {
    const LTok& t = cur();
    bool isStatic = false, isFinal = false;
    while (at_word("static") || at_word("final")) {
      if (at_word("static")) isStatic = true;
      else isFinal = true;
      ++pos;
    }
    if (cur().kind != Tok::Ident) fail("expected member declaration");
    // Constructor: ClassName '('
    if (!class_name.empty() && cur().text == class_name && ahead(1).kind == Tok::Punct &&
        ahead(1).text == "(") {
      if (isStatic || isFinal) fail("constructors take no modifiers");
      NodeId ctor = make(NodeKind::ConstructorDecl, t);
      ast.at(ctor).name = take().text;
      parse_params(ctor);
      ast.add_child(ctor, parse_block());
      return ctor;
    }
    std::string type = expect_ident();
    std::string name = expect_ident();
    if (at_punct("(")) {
      NodeId m = make(NodeKind::MethodDecl, t);
      ast.at(m).type_name = type;
      ast.at(m).name = name;
      if (isStatic || isFinal) fail("methods take no modifiers");
      parse_params(m);
      ast.add_child(m, parse_block());
      return m;
    }
    NodeId f = make(NodeKind::FieldDecl, t);
    ast.at(f).type_name = type;
    ast.at(f).name = name;
    ast.at(f).is_static = isStatic;
    ast.at(f).is_final = isFinal;
    if (at_punct("=")) {
      ++pos;
      NodeId init = parse_expr();
      if (isStatic && isFinal && ast.at(init).kind != NodeKind::Literal)
        fail("static final initializer must be a literal");
      ast.add_child(f, init);
    }
    expect_punct(";");
    return f;
  }

  void parse_params(NodeId owner) {
    expect_punct("(");
    while (!at_punct(")")) {
      const LTok& t = cur();
      NodeId p = make(NodeKind::ParamDecl, t);
      ast.at(p).type_name = expect_ident();
      ast.at(p).name = expect_ident();
      ast.add_child(owner, p);
      if (!at_punct(")")) expect_punct(",");
    }
    ++pos;
  }

  NodeId parse_block() {
    const LTok& t = cur();
    expect_punct("{");
    NodeId b = make(NodeKind::Block, t);
    while (!at_punct("}")) ast.add_child(b, parse_stmt());
    ++pos;
    return b;
  }

  NodeId parse_stmt() {
    const LTok& t = cur();
    if (at_punct("{")) return parse_block();
    if (at_word("if")) return parse_if();
    if (at_word("while")) {
      ++pos;
      NodeId w = make(NodeKind::WhileStmt, t);
      expect_punct("(");
      ast.add_child(w, parse_expr());
      expect_punct(")");
      ast.add_child(w, parse_block());
      return w;
    }
    if (at_word("for")) {
      ++pos;
      NodeId f = make(NodeKind::ForStmt, t);
      expect_punct("(");
      ast.add_child(f, parse_simple_stmt(/*wantDecl=*/true));
      expect_punct(";");
      ast.add_child(f, parse_expr());
      expect_punct(";");
      NodeId upd = parse_simple_stmt(/*wantDecl=*/false);
      if (ast.at(upd).kind == NodeKind::LocalVarDecl) fail("for-update cannot declare");
      ast.add_child(f, upd);
      expect_punct(")");
      ast.add_child(f, parse_block());
      return f;
    }
    if (at_word("return")) {
      ++pos;
      NodeId r = make(NodeKind::ReturnStmt, t);
      if (!at_punct(";")) ast.add_child(r, parse_expr());
      expect_punct(";");
      return r;
    }
    if (at_word("throw")) {
      ++pos;
      NodeId th = make(NodeKind::ThrowStmt, t);
      if (!at_word("new")) fail("throw requires a new expression");
      NodeId e = parse_unary();
      if (ast.at(e).kind != NodeKind::New) fail("throw requires a new expression");
      ast.add_child(th, e);
      expect_punct(";");
      return th;
    }
    NodeId s = parse_simple_stmt(/*wantDecl=*/true);
    expect_punct(";");
    return s;
  }

  NodeId parse_if() {
    const LTok& t = cur();
    ++pos;
    NodeId n = make(NodeKind::IfStmt, t);
    expect_punct("(");
    ast.add_child(n, parse_expr());
    expect_punct(")");
    ast.add_child(n, parse_block());
    if (at_word("else")) {
      ++pos;
      if (at_word("if")) {
        // else-if chains are canonicalized as an else block holding the if.
        NodeId wrap = make(NodeKind::Block, cur());
        ast.add_child(wrap, parse_if());
        ast.add_child(n, wrap);
      } else {
        ast.add_child(n, parse_block());
      }
    }
    return n;
  }

  // Declaration, assignment or expression statement, without the trailing
  // semicolon (shared between plain statements and for-clauses).
  NodeId parse_simple_stmt(bool wantDecl) {
    const LTok& t = cur();
    if (wantDecl && cur().kind == Tok::Ident && ahead(1).kind == Tok::Ident &&
        !kReserved.count(ahead(1).text)) {
      NodeId d = make(NodeKind::LocalVarDecl, t);
      ast.at(d).type_name = expect_ident();
      ast.at(d).name = expect_ident();
      if (at_punct("=")) {
        ++pos;
        ast.add_child(d, parse_expr());
      }
      return d;
    }
    NodeId e = parse_expr();
    if (at_punct("=")) {
      ++pos;
      NodeKind k = ast.at(e).kind;
      if (k != NodeKind::NameRef && k != NodeKind::FieldAccess)
        fail("assignment target must be a variable or field");
      NodeId a = make(NodeKind::Assign, t);
      ast.add_child(a, e);
      ast.add_child(a, parse_expr());
      return a;
    }
    NodeKind k = ast.at(e).kind;
    bool ok = k == NodeKind::Call || k == NodeKind::New || k == NodeKind::OptionalUnwrap ||
              (k == NodeKind::UnaryOp && (ast.at(e).op == "++pre" || ast.at(e).op == "++post" ||
                                          ast.at(e).op == "--pre" || ast.at(e).op == "--post"));
    if (!ok) fail("expression is not a statement");
    NodeId s = make(NodeKind::ExprStmt, t);
    ast.add_child(s, e);
    return s;
  }

  NodeId parse_expr() { return parse_or(); }

  NodeId binop(const LTok& t, const std::string& op, NodeId l, NodeId r) {
    NodeId n = make(NodeKind::BinaryOp, t);
    ast.at(n).op = op;
    ast.add_child(n, l);
    ast.add_child(n, r);
    return n;
  }

  NodeId parse_or() {
    NodeId l = parse_and();
    while (at_punct("||")) {
      LTok t = take();
      l = binop(t, "||", l, parse_and());
    }
    return l;
  }

  NodeId parse_and() {
    NodeId l = parse_eq();
    while (at_punct("&&")) {
      LTok t = take();
      l = binop(t, "&&", l, parse_eq());
    }
    return l;
  }

  NodeId parse_eq() {
    NodeId l = parse_rel();
    if (at_punct("==") || at_punct("!=")) {
      LTok t = take();
      l = binop(t, t.text, l, parse_rel());
    }
    return l;
  }

  NodeId parse_rel() {
    NodeId l = parse_add();
    if (at_punct("<") || at_punct("<=") || at_punct(">") || at_punct(">=")) {
      LTok t = take();
      l = binop(t, t.text, l, parse_add());
    }
    return l;
  }

  NodeId parse_add() {
    NodeId l = parse_mul();
    while (at_punct("+") || at_punct("-")) {
      LTok t = take();
      l = binop(t, t.text, l, parse_mul());
    }
    return l;
  }

  NodeId parse_mul() {
    NodeId l = parse_unary();
    while (at_punct("*") || at_punct("/") || at_punct("%")) {
      LTok t = take();
      l = binop(t, t.text, l, parse_unary());
    }
    return l;
  }

  void require_lvalue(NodeId e, const LTok& t) {
    NodeKind k = ast.at(e).kind;
    if (k != NodeKind::NameRef && k != NodeKind::FieldAccess)
      throw SyntaxError("++/-- requires a variable or field", path, t.line, t.col);
  }

  NodeId parse_unary() {
    const LTok t = cur();
    if (at_punct("!")) {
      ++pos;
      NodeId n = make(NodeKind::UnaryOp, t);
      ast.at(n).op = "!";
      ast.add_child(n, parse_unary());
      return n;
    }
    if (at_punct("-")) {
      ++pos;
      NodeId inner = parse_unary();
      // Fold unary minus on literals so -5 has one canonical form.
      if (ast.at(inner).kind == NodeKind::Literal &&
          (ast.at(inner).lit_type == LitType::Int || ast.at(inner).lit_type == LitType::Double) &&
          ast.at(inner).literal[0] != '-') {
        ast.at(inner).literal = "-" + ast.at(inner).literal;
        return inner;
      }
      NodeId n = make(NodeKind::UnaryOp, t);
      ast.at(n).op = "neg";
      ast.add_child(n, inner);
      return n;
    }
    if (at_punct("++") || at_punct("--")) {
      std::string op = take().text + "pre";
      NodeId operand = parse_postfix();
      require_lvalue(operand, t);
      NodeId n = make(NodeKind::UnaryOp, t);
      ast.at(n).op = op;
      ast.add_child(n, operand);
      return n;
    }
    return parse_postfix();
  }

  NodeId parse_postfix() {
    NodeId e = parse_primary();
    for (;;) {
      const LTok t = cur();
      if (at_punct(".")) {
        ++pos;
        std::string member = expect_ident();
        if (at_punct("(")) {
          if (ast.at(e).kind == NodeKind::NameRef && ast.at(e).name == "Optional" &&
              (member == "of" || member == "ofNullable")) {
            NodeId w = make(NodeKind::OptionalWrap, t);
            ast.at(w).op = member;
            ++pos;
            ast.add_child(w, parse_expr());
            expect_punct(")");
            e = w;
          } else if (member == "get" || member == "orElse") {
            NodeId u = make(NodeKind::OptionalUnwrap, t);
            ast.at(u).op = member;
            ast.add_child(u, e);
            ++pos;
            if (member == "orElse") ast.add_child(u, parse_expr());
            expect_punct(")");
            if (member == "orElse" && ast.at(u).children.size() != 2)
              fail("orElse takes one argument");
            e = u;
          } else {
            NodeId c = make(NodeKind::Call, t);
            ast.at(c).name = member;
            ast.at(c).has_receiver = true;
            ast.add_child(c, e);
            parse_args(c);
            e = c;
          }
        } else {
          NodeId fa = make(NodeKind::FieldAccess, t);
          ast.at(fa).name = member;
          ast.add_child(fa, e);
          e = fa;
        }
      } else if (at_punct("++") || at_punct("--")) {
        require_lvalue(e, t);
        std::string op = take().text + "post";
        NodeId n = make(NodeKind::UnaryOp, t);
        ast.at(n).op = op;
        ast.add_child(n, e);
        e = n;
      } else {
        return e;
      }
    }
  }

  void parse_args(NodeId call) {
    expect_punct("(");
    while (!at_punct(")")) {
      ast.add_child(call, parse_expr());
      if (!at_punct(")")) expect_punct(",");
    }
    ++pos;
  }

  NodeId parse_primary() {
    const LTok t = cur();
    if (cur().kind == Tok::Int) {
      NodeId n = make(NodeKind::Literal, t);
      std::string canon;
      if (!canonical_int(take().text, canon)) fail("integer literal out of range");
      ast.at(n).literal = canon;
      ast.at(n).lit_type = LitType::Int;
      return n;
    }
    if (cur().kind == Tok::Double) {
      NodeId n = make(NodeKind::Literal, t);
      ast.at(n).literal = canonical_double(take().text);
      ast.at(n).lit_type = LitType::Double;
      return n;
    }
    if (cur().kind == Tok::Str) {
      NodeId n = make(NodeKind::Literal, t);
      ast.at(n).literal = take().text;
      ast.at(n).lit_type = LitType::String;
      return n;
    }
    if (at_word("true") || at_word("false")) {
      NodeId n = make(NodeKind::Literal, t);
      ast.at(n).literal = take().text;
      ast.at(n).lit_type = LitType::Bool;
      return n;
    }
    if (at_punct("(")) {
      ++pos;
      NodeId e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (at_word("new")) {
      ++pos;
      NodeId n = make(NodeKind::New, t);
      ast.at(n).name = expect_ident();
      parse_args(n);
      return n;
    }
    if (at_word("this")) {
      ++pos;
      expect_punct(".");
      std::string member = expect_ident();
      if (at_punct("(")) {
        // this.m(...) is the same as m(...).
        NodeId c = make(NodeKind::Call, t);
        ast.at(c).name = member;
        parse_args(c);
        return c;
      }
      NodeId fa = make(NodeKind::FieldAccess, t);
      ast.at(fa).name = member;
      ast.at(fa).is_static = false;
      // Implicit receiver: no child.
      return fa;
    }
    if (cur().kind == Tok::Ident) {
      std::string name = take().text;
      if (kReserved.count(name) && name != "Optional" && !is_builtin(name))
        fail("unexpected keyword '" + name + "'");
      if (at_punct("(")) {
        NodeId c = make(NodeKind::Call, t);
        ast.at(c).name = name;
        parse_args(c);
        return c;
      }
      NodeId n = make(NodeKind::NameRef, t);
      ast.at(n).name = name;
      return n;
    }
    fail("expected expression");
  }
};

} // namespace

bool is_builtin(const std::string& name) {
  return name == "println" || name == "readLine" || name == "sqrt" || name == "abs" ||
         name == "min" || name == "max";
}

bool is_pure_builtin(const std::string& name) {
  return name == "sqrt" || name == "abs" || name == "min" || name == "max";
}

Ast parse_unit(const std::vector<SourceFile>& files) {
  if (files.empty()) throw SyntaxError("no source files");
  Ast ast;
  NodeId unit = ast.make(NodeKind::Unit);
  ast.root = unit;
  for (const auto& f : files) {
    Lexer lex{f.text, f.path};
    Parser p{ast, f.path};
    p.toks = lex.run();
    p.parse_into_unit(unit);
  }
  return ast;
}

Ast parse_source(const std::string& text, const std::string& path) {
  return parse_unit({{path, text}});
}

// ------------------------------------------------------------- resolver ----

namespace {

struct Resolver {
  Ast& ast;

  std::unordered_map<std::string, NodeId> classes;
  std::vector<std::unordered_map<std::string, NodeId>> scopes;
  NodeId current_class = kNoNode; // ClassDecl or Unit for bare members

  [[noreturn]] void fail(NodeId n, const std::string& msg) {
    throw ResolutionError(msg, "", ast.at(n).span.line, ast.at(n).span.col);
  }

  void check_name(NodeId n, const std::string& name) {
    if (kReserved.count(name)) fail(n, "'" + name + "' is reserved");
  }

  static bool is_member(NodeKind k) {
    return k == NodeKind::FieldDecl || k == NodeKind::MethodDecl ||
           k == NodeKind::ConstructorDecl;
  }

  std::vector<NodeId> members_of(NodeId classLike) const {
    std::vector<NodeId> out;
    for (NodeId c : ast.at(classLike).children)
      if (is_member(ast.at(c).kind)) out.push_back(c);
    return out;
  }

  NodeId find_member(NodeId classLike, const std::string& name, NodeKind kind) const {
    for (NodeId m : members_of(classLike))
      if (ast.at(m).kind == kind && ast.at(m).name == name) return m;
    return kNoNode;
  }

  void check_type(NodeId n, const std::string& t, bool allowVoid) {
    if (t == "void") {
      if (!allowVoid) fail(n, "void is not a value type");
      return;
    }
    if (kPrimitiveTypes.count(t) || classes.count(t)) return;
    fail(n, "unknown type '" + t + "'");
  }

  void run() {
    NodeId unit = ast.root;
    bool bare = false;
    for (NodeId c : ast.at(unit).children) {
      if (ast.at(c).kind == NodeKind::ClassDecl) {
        if (!classes.emplace(ast.at(c).name, c).second)
          fail(c, "duplicate class '" + ast.at(c).name + "'");
        check_name(c, ast.at(c).name);
      } else {
        bare = true;
      }
    }
    if (bare && !classes.empty())
      fail(unit, "cannot mix classes and bare members in one submission");
    if (bare) {
      resolve_class_like(unit);
    } else {
      for (NodeId c : ast.at(unit).children) resolve_class_like(c);
    }
  }

  void resolve_class_like(NodeId classLike) {
    current_class = classLike;
    std::unordered_map<std::string, NodeId> names;
    int ctors = 0;
    for (NodeId m : members_of(classLike)) {
      const Node& mn = ast.at(m);
      if (mn.kind == NodeKind::ConstructorDecl) {
        if (++ctors > 1) fail(m, "at most one constructor per class");
        continue;
      }
      check_name(m, mn.name);
      if (!names.emplace(mn.name, m).second)
        fail(m, "duplicate member '" + mn.name + "'");
    }
    for (NodeId m : members_of(classLike)) {
      const Node& mn = ast.at(m);
      switch (mn.kind) {
        case NodeKind::FieldDecl:
          check_type(m, mn.type_name, false);
          if (!mn.children.empty()) {
            scopes.clear();
            resolve_expr(mn.children[0]);
          }
          break;
        case NodeKind::MethodDecl:
          check_type(m, mn.type_name, true);
          resolve_callable(m);
          break;
        case NodeKind::ConstructorDecl:
          resolve_callable(m);
          break;
        default:
          break;
      }
    }
  }

  void resolve_callable(NodeId m) {
    scopes.clear();
    scopes.emplace_back();
    const auto& kids = ast.at(m).children;
    for (size_t i = 0; i + 1 < kids.size(); ++i) {
      NodeId p = kids[i];
      check_name(p, ast.at(p).name);
      check_type(p, ast.at(p).type_name, false);
      if (!scopes.back().emplace(ast.at(p).name, p).second)
        fail(p, "duplicate parameter '" + ast.at(p).name + "'");
    }
    resolve_block(kids.back());
    scopes.clear();
  }

  NodeId lookup_local(const std::string& name) const {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return kNoNode;
  }

  void resolve_block(NodeId b) {
    scopes.emplace_back();
    for (NodeId s : ast.at(b).children) resolve_stmt(s);
    scopes.pop_back();
  }

  void resolve_stmt(NodeId s) {
    Node& n = ast.at(s);
    switch (n.kind) {
      case NodeKind::Block:
        resolve_block(s);
        break;
      case NodeKind::LocalVarDecl: {
        check_name(s, n.name);
        check_type(s, n.type_name, false);
        for (NodeId c : n.children) resolve_expr(c);
        if (lookup_local(n.name) != kNoNode)
          fail(s, "'" + n.name + "' shadows a local or parameter");
        scopes.back().emplace(n.name, s);
        break;
      }
      case NodeKind::Assign:
        resolve_expr(n.children[0]);
        resolve_expr(n.children[1]);
        break;
      case NodeKind::IfStmt:
        resolve_expr(n.children[0]);
        resolve_block(n.children[1]);
        if (n.children.size() > 2) resolve_block(n.children[2]);
        break;
      case NodeKind::WhileStmt:
        resolve_expr(n.children[0]);
        resolve_block(n.children[1]);
        break;
      case NodeKind::ForStmt: {
        scopes.emplace_back(); // for-init scope spans the whole loop
        resolve_stmt(n.children[0]);
        resolve_expr(n.children[1]);
        resolve_stmt(n.children[2]);
        resolve_block(n.children[3]);
        scopes.pop_back();
        break;
      }
      case NodeKind::ReturnStmt:
        if (!n.children.empty()) resolve_expr(n.children[0]);
        break;
      case NodeKind::ThrowStmt: {
        NodeId e = n.children[0];
        Node& en = ast.at(e);
        auto it = classes.find(en.name);
        if (it != classes.end()) en.resolved = it->second;
        // Unknown names are allowed here: exception types are opaque.
        for (NodeId a : en.children) resolve_expr(a);
        if (en.resolved != kNoNode) check_new_arity(e);
        break;
      }
      case NodeKind::ExprStmt:
        resolve_expr(n.children[0]);
        break;
      default:
        fail(s, "unexpected statement node");
    }
  }

  void check_new_arity(NodeId e) {
    const Node& en = ast.at(e);
    NodeId klass = en.resolved;
    size_t want = 0;
    for (NodeId m : members_of(klass))
      if (ast.at(m).kind == NodeKind::ConstructorDecl) want = ast.at(m).children.size() - 1;
    if (en.children.size() != want)
      fail(e, "constructor of '" + en.name + "' takes " + std::to_string(want) + " arguments");
  }

  // Declared class of an expression, when statically known.
  NodeId static_class_of(NodeId e) const {
    const Node& n = ast.at(e);
    if (n.kind == NodeKind::NameRef && n.resolved != kNoNode) {
      auto it = classes.find(ast.at(n.resolved).type_name);
      if (it != classes.end()) return it->second;
    }
    if (n.kind == NodeKind::FieldAccess && n.resolved != kNoNode) {
      auto it = classes.find(ast.at(n.resolved).type_name);
      if (it != classes.end()) return it->second;
    }
    if (n.kind == NodeKind::New && n.resolved != kNoNode) return n.resolved;
    return kNoNode;
  }

  void resolve_expr(NodeId e) {
    Node& n = ast.at(e);
    switch (n.kind) {
      case NodeKind::Literal:
        break;
      case NodeKind::NameRef: {
        NodeId local = lookup_local(n.name);
        if (local != kNoNode) {
          n.resolved = local;
          break;
        }
        NodeId field = find_member(current_class, n.name, NodeKind::FieldDecl);
        if (field != kNoNode) {
          // Canonical form: bare field reads become implicit field accesses.
          n.kind = NodeKind::FieldAccess;
          n.resolved = field;
          break;
        }
        if (classes.count(n.name)) fail(e, "class name '" + n.name + "' is not a value");
        fail(e, "unresolved name '" + n.name + "'");
        break;
      }
      case NodeKind::FieldAccess: {
        if (n.children.empty()) {
          // this.f
          NodeId field = find_member(current_class, n.name, NodeKind::FieldDecl);
          if (field == kNoNode) fail(e, "unresolved field '" + n.name + "'");
          n.resolved = field;
          break;
        }
        NodeId recv = n.children[0];
        const Node& rn = ast.at(recv);
        if (rn.kind == NodeKind::NameRef && lookup_local(rn.name) == kNoNode &&
            classes.count(rn.name)) {
          // Static constant access Owner.NAME: drop the class-name receiver;
          // printing restores the qualifier from the resolved owner.
          NodeId owner = classes.at(rn.name);
          NodeId field = find_member(owner, n.name, NodeKind::FieldDecl);
          if (field == kNoNode || !ast.at(field).is_static)
            fail(e, "unresolved static field '" + rn.name + "." + n.name + "'");
          ast.at(recv).alive = false;
          n.children.clear();
          n.resolved = field;
          n.is_static = true;
          break;
        }
        resolve_expr(recv);
        NodeId klass = static_class_of(recv);
        if (klass != kNoNode) {
          NodeId field = find_member(klass, n.name, NodeKind::FieldDecl);
          if (field == kNoNode) fail(e, "unresolved field '" + n.name + "'");
          n.resolved = field;
        }
        break;
      }
      case NodeKind::Call: {
        size_t firstArg = n.has_receiver ? 1 : 0;
        for (size_t i = firstArg; i < n.children.size(); ++i) resolve_expr(n.children[i]);
        size_t argc = n.children.size() - firstArg;
        if (!n.has_receiver) {
          if (is_builtin(n.name)) {
            size_t want = (n.name == "readLine") ? 0 : (n.name == "min" || n.name == "max") ? 2 : 1;
            if (argc != want)
              fail(e, "builtin '" + n.name + "' takes " + std::to_string(want) + " arguments");
            break;
          }
          NodeId m = find_member(current_class, n.name, NodeKind::MethodDecl);
          if (m == kNoNode) fail(e, "unresolved method '" + n.name + "'");
          if (argc != ast.at(m).children.size() - 1)
            fail(e, "method '" + n.name + "' takes " +
                        std::to_string(ast.at(m).children.size() - 1) + " arguments");
          n.resolved = m;
          break;
        }
        NodeId recv = n.children[0];
        if (ast.at(recv).kind == NodeKind::NameRef && lookup_local(ast.at(recv).name) == kNoNode &&
            classes.count(ast.at(recv).name))
          fail(e, "MiniJ has no static methods");
        resolve_expr(recv);
        NodeId klass = static_class_of(recv);
        if (klass != kNoNode) {
          NodeId m = find_member(klass, n.name, NodeKind::MethodDecl);
          if (m == kNoNode) fail(e, "unresolved method '" + n.name + "'");
          if (argc != ast.at(m).children.size() - 1)
            fail(e, "method '" + n.name + "' takes " +
                        std::to_string(ast.at(m).children.size() - 1) + " arguments");
          n.resolved = m;
        }
        // Receivers of unknown static type stay dynamic.
        break;
      }
      case NodeKind::New: {
        auto it = classes.find(n.name);
        if (it == classes.end()) fail(e, "unresolved class '" + n.name + "'");
        n.resolved = it->second;
        for (NodeId a : n.children) resolve_expr(a);
        check_new_arity(e);
        break;
      }
      case NodeKind::UnaryOp:
      case NodeKind::OptionalWrap:
      case NodeKind::OptionalUnwrap:
      case NodeKind::BinaryOp:
        for (NodeId c : n.children) resolve_expr(c);
        break;
      default:
        fail(e, "unexpected expression node");
    }
  }
};

} // namespace

void resolve(Ast& ast) {
  Resolver r{ast};
  r.run();
}

// ------------------------------------------------------- pretty printer ----

namespace {

int precedence(const Ast& ast, NodeId e) {
  const Node& n = ast.at(e);
  switch (n.kind) {
    case NodeKind::BinaryOp: {
      const std::string& op = n.op;
      if (op == "||") return 1;
      if (op == "&&") return 2;
      if (op == "==" || op == "!=") return 3;
      if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
      if (op == "+" || op == "-") return 5;
      return 6;
    }
    case NodeKind::UnaryOp:
      return (n.op == "++post" || n.op == "--post") ? 8 : 7;
    default:
      return 9;
  }
}

struct Printer {
  const Ast& ast;
  std::string out;
  int depth = 0;

  void nl() {
    out += '\n';
    out.append(static_cast<size_t>(depth) * 2, ' ');
  }

  void print_unit(NodeId unit) {
    bool first = true;
    for (NodeId c : ast.at(unit).children) {
      if (!first) out += "\n";
      first = false;
      if (ast.at(c).kind == NodeKind::ClassDecl) print_class(c);
      else print_member(c);
      out += "\n";
    }
  }

  void print_class(NodeId c) {
    out += "class " + ast.at(c).name + " {";
    ++depth;
    for (NodeId m : ast.at(c).children) {
      nl();
      print_member(m);
    }
    --depth;
    nl();
    out += "}";
  }

  void print_member(NodeId m) {
    const Node& n = ast.at(m);
    switch (n.kind) {
      case NodeKind::FieldDecl:
        if (n.is_static) out += "static ";
        if (n.is_final) out += "final ";
        out += n.type_name + " " + n.name;
        if (!n.children.empty()) {
          out += " = ";
          print_expr(n.children[0], 0);
        }
        out += ";";
        break;
      case NodeKind::MethodDecl:
        out += n.type_name + " " + n.name + "(";
        print_params(m);
        out += ") ";
        print_block(n.children.back());
        break;
      case NodeKind::ConstructorDecl:
        out += n.name + "(";
        print_params(m);
        out += ") ";
        print_block(n.children.back());
        break;
      default:
        out += "/* ? */";
    }
  }

  void print_params(NodeId m) {
    const auto& kids = ast.at(m).children;
    for (size_t i = 0; i + 1 < kids.size(); ++i) {
      if (i) out += ", ";
      out += ast.at(kids[i]).type_name + " " + ast.at(kids[i]).name;
    }
  }

  void print_block(NodeId b) {
    out += "{";
    ++depth;
    for (NodeId s : ast.at(b).children) {
      nl();
      print_stmt(s);
    }
    --depth;
    nl();
    out += "}";
  }

  void print_stmt(NodeId s) {
    const Node& n = ast.at(s);
    switch (n.kind) {
      case NodeKind::Block:
        print_block(s);
        break;
      case NodeKind::LocalVarDecl:
        out += n.type_name + " " + n.name;
        if (!n.children.empty()) {
          out += " = ";
          print_expr(n.children[0], 0);
        }
        out += ";";
        break;
      case NodeKind::Assign:
        print_expr(n.children[0], 0);
        out += " = ";
        print_expr(n.children[1], 0);
        out += ";";
        break;
      case NodeKind::IfStmt:
        out += "if (";
        print_expr(n.children[0], 0);
        out += ") ";
        print_block(n.children[1]);
        if (n.children.size() > 2) {
          out += " else ";
          print_block(n.children[2]);
        }
        break;
      case NodeKind::WhileStmt:
        out += "while (";
        print_expr(n.children[0], 0);
        out += ") ";
        print_block(n.children[1]);
        break;
      case NodeKind::ForStmt:
        out += "for (";
        print_stmt_inline(n.children[0]);
        out += "; ";
        print_expr(n.children[1], 0);
        out += "; ";
        print_stmt_inline(n.children[2]);
        out += ") ";
        print_block(n.children[3]);
        break;
      case NodeKind::ReturnStmt:
        out += "return";
        if (!n.children.empty()) {
          out += " ";
          print_expr(n.children[0], 0);
        }
        out += ";";
        break;
      case NodeKind::ThrowStmt:
        out += "throw ";
        print_expr(n.children[0], 0);
        out += ";";
        break;
      case NodeKind::ExprStmt:
        print_expr(n.children[0], 0);
        out += ";";
        break;
      default:
        out += "/* ? */;";
    }
  }

  // Statement without trailing semicolon (for-clauses).
  void print_stmt_inline(NodeId s) {
    std::string saved = std::move(out);
    out.clear();
    print_stmt(s);
    std::string inner = std::move(out);
    if (!inner.empty() && inner.back() == ';') inner.pop_back();
    out = std::move(saved);
    out += inner;
  }

  void print_expr(NodeId e, int parentPrec) {
    const Node& n = ast.at(e);
    int prec = precedence(ast, e);
    bool paren = prec < parentPrec;
    if (paren) out += "(";
    switch (n.kind) {
      case NodeKind::Literal:
        switch (n.lit_type) {
          case LitType::String: {
            out += '"';
            for (char c : n.literal) {
              switch (c) {
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                default: out += c;
              }
            }
            out += '"';
            break;
          }
          default:
            out += n.literal;
        }
        break;
      case NodeKind::NameRef:
        out += n.name;
        break;
      case NodeKind::FieldAccess:
        if (!n.children.empty()) {
          print_expr(n.children[0], 8);
          out += "." + n.name;
        } else if (n.resolved != kNoNode && ast.at(n.resolved).is_static) {
          NodeId owner = ast.at(n.resolved).parent;
          if (owner != kNoNode && ast.at(owner).kind == NodeKind::ClassDecl)
            out += ast.at(owner).name + "." + n.name;
          else
            out += "this." + n.name; // bare-unit static: no qualifier exists
        } else {
          out += "this." + n.name;
        }
        break;
      case NodeKind::Call: {
        size_t firstArg = 0;
        if (n.has_receiver) {
          print_expr(n.children[0], 8);
          out += ".";
          firstArg = 1;
        }
        out += n.name + "(";
        for (size_t i = firstArg; i < n.children.size(); ++i) {
          if (i > firstArg) out += ", ";
          print_expr(n.children[i], 0);
        }
        out += ")";
        break;
      }
      case NodeKind::New:
        out += "new " + n.name + "(";
        for (size_t i = 0; i < n.children.size(); ++i) {
          if (i) out += ", ";
          print_expr(n.children[i], 0);
        }
        out += ")";
        break;
      case NodeKind::OptionalWrap:
        out += "Optional." + n.op + "(";
        print_expr(n.children[0], 0);
        out += ")";
        break;
      case NodeKind::OptionalUnwrap:
        print_expr(n.children[0], 8);
        out += "." + n.op + "(";
        if (n.children.size() > 1) print_expr(n.children[1], 0);
        out += ")";
        break;
      case NodeKind::UnaryOp:
        if (n.op == "!") {
          out += "!";
          print_expr(n.children[0], 7);
        } else if (n.op == "neg") {
          out += "-";
          print_expr(n.children[0], 7);
        } else if (n.op == "++pre" || n.op == "--pre") {
          out += n.op.substr(0, 2);
          print_expr(n.children[0], 8);
        } else {
          print_expr(n.children[0], 8);
          out += n.op.substr(0, 2);
        }
        break;
      case NodeKind::BinaryOp:
        print_expr(n.children[0], prec);
        out += " " + n.op + " ";
        // Right operand needs parens at equal precedence (left associativity).
        print_expr(n.children[1], prec + 1);
        break;
      default:
        out += "/*?*/";
    }
    if (paren) out += ")";
  }
};

} // namespace

std::string pretty_print(const Ast& ast, NodeId root) {
  Printer p{ast};
  const Node& n = ast.at(root);
  if (n.kind == NodeKind::Unit) p.print_unit(root);
  else if (n.kind == NodeKind::ClassDecl) p.print_class(root);
  else if (is_statement(n.kind)) p.print_stmt(root);
  else p.print_expr(root, 0);
  return p.out;
}

std::string pretty_print_unit(const Ast& ast) { return pretty_print(ast, ast.root) ; }

NodeId enclosing_class(const Ast& ast, NodeId n) {
  for (NodeId cur = n; cur != kNoNode; cur = ast.at(cur).parent)
    if (ast.at(cur).kind == NodeKind::ClassDecl || ast.at(cur).kind == NodeKind::Unit) return cur;
  return kNoNode;
}

NodeId enclosing_callable(const Ast& ast, NodeId n) {
  for (NodeId cur = n; cur != kNoNode; cur = ast.at(cur).parent)
    if (ast.at(cur).kind == NodeKind::MethodDecl || ast.at(cur).kind == NodeKind::ConstructorDecl)
      return cur;
  return kNoNode;
}

NodeId body_of(const Ast& ast, NodeId callable) { return ast.at(callable).children.back(); }

bool is_constant_field(const Ast& ast, NodeId n) {
  return ast.at(n).kind == NodeKind::FieldDecl && ast.at(n).is_static && ast.at(n).is_final;
}

bool is_statement(NodeKind k) {
  switch (k) {
    case NodeKind::Block:
    case NodeKind::LocalVarDecl:
    case NodeKind::Assign:
    case NodeKind::IfStmt:
    case NodeKind::ForStmt:
    case NodeKind::WhileStmt:
    case NodeKind::ReturnStmt:
    case NodeKind::ThrowStmt:
    case NodeKind::ExprStmt:
      return true;
    default:
      return false;
  }
}

} // namespace structsim
