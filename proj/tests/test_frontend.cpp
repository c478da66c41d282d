#include <doctest.h>

#include <string>
#include <vector>

#include "structsim/corpus.hpp"
#include "structsim/errors.hpp"
#include "structsim/frontend.hpp"
#include "structsim/linearize.hpp"

using namespace structsim;

namespace {

std::string reprint(const std::string& src) {
  Ast ast = parse_source(src);
  return pretty_print_unit(ast);
}

} // namespace

TEST_CASE("pretty print is a fixed point of parse") {
  std::vector<std::string> sources = {
      "void main() {\n  println(1);\n}\n",
      "class A {\n  int f;\n  void main() {\n    this.f = 2;\n    println(this.f);\n  }\n}\n",
      "void main() {\n  for (int i = 0; i < 3; i++) {\n    println(i);\n  }\n}\n",
      "void main() {\n  int x = readLine();\n  if (x < 0) {\n    println(\"neg\");\n"
      "  } else {\n    println(\"pos\");\n  }\n}\n",
  };
  for (const std::string& s : sources) {
    std::string once = reprint(s);
    CHECK(once == s); // already canonical
    CHECK(reprint(once) == once);
  }
}

TEST_CASE("every corpus and fixture file round-trips") {
  std::vector<std::string> roots = {
      std::string(STRUCTSIM_DATA_DIR) + "/corpus",
      std::string(STRUCTSIM_DATA_DIR) + "/fixtures/table1",
  };
  for (const std::string& root : roots) {
    for (const Submission& s : load_corpus(root)) {
      Ast ast = parse_submission(s);
      Submission once = print_submission(ast, s.id);
      Ast again = parse_submission(once);
      // Reprinting the reparse must be byte-identical (printer fixed point)
      // and token-identical (same structure).
      Submission twice = print_submission(again, s.id);
      REQUIRE(twice.files.size() == once.files.size());
      for (size_t i = 0; i < once.files.size(); ++i)
        CHECK(twice.files[i].text == once.files[i].text);
      Cpg c1 = build_cpg(std::move(ast));
      Cpg c2 = build_cpg(std::move(again));
      CHECK(tokenize(c1, LinearizeMode::Baseline).tokens ==
            tokenize(c2, LinearizeMode::Baseline).tokens);
    }
  }
}

TEST_CASE("precedence prints with minimal parentheses") {
  CHECK(reprint("void main() { println(2 * (3 + 4)); }") ==
        "void main() {\n  println(2 * (3 + 4));\n}\n");
  CHECK(reprint("void main() { println((2 * 3) + 4); }") ==
        "void main() {\n  println(2 * 3 + 4);\n}\n");
  CHECK(reprint("void main() { println(1 - (2 - 3)); }") ==
        "void main() {\n  println(1 - (2 - 3));\n}\n");
  CHECK(reprint("void main() { println((1 - 2) - 3); }") ==
        "void main() {\n  println(1 - 2 - 3);\n}\n");
  CHECK(reprint("void main() { if (!(1 < 2) || (3 > 2 && 1 == 1)) { println(1); } }") ==
        "void main() {\n  if (!(1 < 2) || 3 > 2 && 1 == 1) {\n    println(1);\n  }\n}\n");
}

TEST_CASE("unary minus folds into numeric literals") {
  CHECK(reprint("void main() { println(-5); }") == "void main() {\n  println(-5);\n}\n");
  CHECK(reprint("void main() { println(-5.5); }") ==
        "void main() {\n  println(-5.5);\n}\n");
  // Applied to a non-literal it stays an operator.
  CHECK(reprint("void main() { int a = 1; println(-a); }") ==
        "void main() {\n  int a = 1;\n  println(-a);\n}\n");
}

TEST_CASE("string escapes survive the round trip") {
  std::string src = "void main() {\n  println(\"a\\\"b\\n\\\\\");\n}\n";
  CHECK(reprint(src) == src);
}

TEST_CASE("syntax errors carry path, line and column") {
  try {
    parse_source("void main( {\n}", "bad.minij");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.kind() == "SyntaxError");
    CHECK(e.path() == "bad.minij");
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("bad.minij:1:") != std::string::npos);
  }
}

TEST_CASE("parser rejects malformed programs") {
  CHECK_THROWS_AS(parse_source("void main() { int 3 = 4; }"), SyntaxError);
  CHECK_THROWS_AS(parse_source("void main() { println(1) }"), SyntaxError);
  CHECK_THROWS_AS(parse_source("void main() { 1 + 2; }"), SyntaxError);
  CHECK_THROWS_AS(parse_source("void main() { throw 3; }"), SyntaxError);
  CHECK_THROWS_AS(parse_source(""), SyntaxError);
  CHECK_THROWS_AS(parse_source("void main() { for (int i = 0; i < 3; int j = 1) {} }"),
                  SyntaxError);
}

TEST_CASE("one top-level class per file") {
  CHECK_THROWS_AS(parse_source("class A {\n}\nclass B {\n}\n"), SyntaxError);
  // The same two classes are fine as separate files of one unit.
  Ast ast = parse_unit({{"A.minij", "class A {\n}\n"}, {"B.minij", "class B {\n}\n"}});
  resolve(ast);
  int classes = 0;
  for (NodeId c : ast.at(ast.root).children)
    classes += ast.at(c).kind == NodeKind::ClassDecl;
  CHECK(classes == 2);
}

TEST_CASE("resolver binds uses to declarations") {
  Ast ast = parse_source("void main() {\n  int a = 3;\n  println(a + a);\n}\n");
  resolve(ast);
  NodeId decl = kNoNode;
  std::vector<NodeId> uses;
  ast.walk(ast.root, [&](NodeId n) {
    if (ast.at(n).kind == NodeKind::LocalVarDecl) decl = n;
    if (ast.at(n).kind == NodeKind::NameRef && ast.at(n).name == "a") uses.push_back(n);
  });
  REQUIRE(decl != kNoNode);
  REQUIRE(uses.size() == 2);
  for (NodeId u : uses) CHECK(ast.at(u).resolved == decl);
}

TEST_CASE("resolver rejects bad programs") {
  auto resolve_src = [](const std::string& s) {
    Ast ast = parse_source(s);
    resolve(ast);
    return ast;
  };
  CHECK_THROWS_AS(resolve_src("void main() { println(q); }"), ResolutionError);
  CHECK_THROWS_AS(resolve_src("void main() { int a = 1; int a = 2; }"), ResolutionError);
  CHECK_THROWS_AS(resolve_src("void f() {\n}\nvoid f() {\n}\n"), ResolutionError);
  CHECK_THROWS_AS(resolve_src("void main(int x, int x) { println(x); }"), ResolutionError);
  CHECK_THROWS_AS(resolve_src("int main() { return unknown(); }"), ResolutionError);
  // Shadowing a local is rejected even from a nested scope.
  CHECK_THROWS_AS(
      resolve_src("void main() {\n  int a = 1;\n  if (a < 2) {\n    int a = 2;\n"
                  "    println(a);\n  }\n}\n"),
      ResolutionError);
  // A fresh name in a nested scope is fine.
  Ast ok = resolve_src("void main() {\n  int a = 1;\n  if (a < 2) {\n    int b = a;\n"
                       "    println(b);\n  }\n}\n");
  CHECK(ok.at(ok.root).kind == NodeKind::Unit);
}

TEST_CASE("scope ends with the block") {
  Ast ast = parse_source(
      "void main() {\n  if (1 < 2) {\n    int t = 3;\n    println(t);\n  }\n"
      "  if (2 < 3) {\n    int t = 4;\n    println(t);\n  }\n}\n");
  resolve(ast); // two distinct t declarations, no clash
  std::vector<NodeId> decls;
  ast.walk(ast.root, [&](NodeId n) {
    if (ast.at(n).kind == NodeKind::LocalVarDecl) decls.push_back(n);
  });
  CHECK(decls.size() == 2);
}

TEST_CASE("field initializers are restricted to literals on constants") {
  CHECK_THROWS_AS(parse_source("class A {\n  static final int K = 1 + 2;\n}\n"),
                  SyntaxError);
  Ast ok = parse_source("class A {\n  static final int K = 3;\n}\n");
  resolve(ok);
}

TEST_CASE("submission loading sorts files and rejects duplicates") {
  Submission s = load_submission(std::string(STRUCTSIM_DATA_DIR) + "/corpus/p17");
  REQUIRE(s.files.size() == 2);
  CHECK(s.files[0].path < s.files[1].path);
  CHECK(s.id == "p17");
}
