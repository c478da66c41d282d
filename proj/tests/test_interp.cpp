#include <doctest.h>

#include <string>
#include <vector>

#include "structsim/errors.hpp"
#include "structsim/frontend.hpp"
#include "structsim/interp.hpp"

using namespace structsim;

namespace {

std::vector<std::string> run(const std::string& src,
                             const std::vector<std::string>& input = {},
                             InterpOptions opt = {}) {
  Ast ast = parse_source(src);
  resolve(ast);
  return interpret_program(ast, input, opt);
}

} // namespace

TEST_CASE("integer arithmetic truncates and modulo follows C semantics") {
  CHECK(run("void main() { println(7 / 2); }") == std::vector<std::string>{"3"});
  CHECK(run("void main() { println(-7 / 2); }") == std::vector<std::string>{"-3"});
  CHECK(run("void main() { println(7 % 3); }") == std::vector<std::string>{"1"});
  CHECK(run("void main() { println(-7 % 3); }") == std::vector<std::string>{"-1"});
  CHECK(run("void main() { println(2 + 3 * 4); }") == std::vector<std::string>{"14"});
}

TEST_CASE("division by zero faults instead of crashing") {
  auto out = run("void main() { println(1 / 0); }");
  REQUIRE(out.size() == 1);
  CHECK(out[0].rfind("fault:", 0) == 0);
  auto m = run("void main() { println(1 % 0); }");
  CHECK(m[0].rfind("fault:", 0) == 0);
}

TEST_CASE("double formatting is stable and shortest-roundtrip") {
  CHECK(run("void main() { println(sqrt(2.0) + 1.0); }") ==
        std::vector<std::string>{"2.414213562373095"});
  CHECK(run("void main() { println(1.0 / 2.0); }") == std::vector<std::string>{"0.5"});
  CHECK(run("void main() { println(3.0); }") == std::vector<std::string>{"3"});
  CHECK(run("void main() { println(1 / 2.0); }") == std::vector<std::string>{"0.5"});
}

TEST_CASE("strings concatenate with + and compare with == and !=") {
  CHECK(run("void main() { println(\"a\" + \"b\"); }") == std::vector<std::string>{"ab"});
  CHECK(run("void main() { println(\"n=\" + 4); }") == std::vector<std::string>{"n=4"});
  CHECK(run("void main() { println(\"v \" + 1.5); }") == std::vector<std::string>{"v 1.5"});
  CHECK(run("void main() { if (\"x\" == \"x\") { println(1); } }") ==
        std::vector<std::string>{"1"});
  CHECK(run("void main() { if (\"x\" != \"y\") { println(2); } }") ==
        std::vector<std::string>{"2"});
}

TEST_CASE("logical operators short-circuit") {
  // The right operand would fault; short-circuit must skip it.
  CHECK(run("void main() { int z = 0; if (z != 0 && 1 / z > 0) { println(1); } else"
            " { println(2); } }") == std::vector<std::string>{"2"});
  CHECK(run("void main() { int z = 0; if (z == 0 || 1 / z > 0) { println(1); } }") ==
        std::vector<std::string>{"1"});
}

TEST_CASE("unary operators") {
  CHECK(run("void main() { int a = 5; println(-a); }") == std::vector<std::string>{"-5"});
  CHECK(run("void main() { println(!(1 < 2)); }") == std::vector<std::string>{"false"});
  CHECK(run("void main() { double d = 2.5; println(-d); }") ==
        std::vector<std::string>{"-2.5"});
}

TEST_CASE("pre and post increment differ in expression value") {
  CHECK(run("void main() { int i = 3; println(i++); println(i); }") ==
        std::vector<std::string>{"3", "4"});
  CHECK(run("void main() { int i = 3; println(++i); println(i); }") ==
        std::vector<std::string>{"4", "4"});
  CHECK(run("void main() { int i = 3; println(i--); println(--i); }") ==
        std::vector<std::string>{"3", "1"});
}

TEST_CASE("control flow: if, while, for") {
  CHECK(run("void main() { int s = 0; for (int i = 1; i <= 4; i++) { s = s + i; }"
            " println(s); }") == std::vector<std::string>{"10"});
  CHECK(run("void main() { int n = 3; while (n > 0) { println(n); n--; } }") ==
        std::vector<std::string>{"3", "2", "1"});
  CHECK(run("void main() { if (1 < 2) { println(\"t\"); } else { println(\"f\"); } }") ==
        std::vector<std::string>{"t"});
}

TEST_CASE("readLine lexes ints, doubles and strings by form") {
  CHECK(run("void main() { println(readLine() + 1); }", {"41"}) ==
        std::vector<std::string>{"42"});
  CHECK(run("void main() { println(readLine() + 1.0); }", {"2.5"}) ==
        std::vector<std::string>{"3.5"});
  CHECK(run("void main() { println(readLine() + \"!\"); }", {"hey"}) ==
        std::vector<std::string>{"hey!"});
  auto out = run("void main() { println(readLine()); println(readLine()); }", {"only"});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == "only");
  CHECK(out[1].rfind("fault:", 0) == 0); // missing input is a fault
}

TEST_CASE("builtins preserve numeric types") {
  CHECK(run("void main() { println(min(3, 4)); }") == std::vector<std::string>{"3"});
  CHECK(run("void main() { println(max(3, 4.5)); }") == std::vector<std::string>{"4.5"});
  CHECK(run("void main() { println(abs(-3)); }") == std::vector<std::string>{"3"});
  CHECK(run("void main() { println(abs(-3.5)); }") == std::vector<std::string>{"3.5"});
  CHECK(run("void main() { println(sqrt(9.0)); }") == std::vector<std::string>{"3"});
}

TEST_CASE("optional wrap and unwrap evaluate through") {
  CHECK(run("void main() { println(Optional.of(5).get()); }") ==
        std::vector<std::string>{"5"});
  CHECK(run("void main() { println(Optional.of(6).orElse(0)); }") ==
        std::vector<std::string>{"6"});
}

TEST_CASE("objects: fields, methods, constructors, dispatch") {
  const char* cell = R"(class Cell {
  int v;

  Cell(int v0) {
    this.v = v0;
  }

  int doubled() {
    return this.v * 2;
  }
}
)";
  const char* driver = R"(class Driver {
  void main() {
    Cell c = new Cell(21);
    println(c.doubled());
    c.v = 5;
    println(c.v);
  }
}
)";
  Ast ast = parse_unit({{"Cell.minij", cell}, {"Driver.minij", driver}});
  resolve(ast);
  CHECK(interpret_program(ast, {}) == std::vector<std::string>{"42", "5"});
}

TEST_CASE("classes cannot mix with bare members in one unit") {
  CHECK_THROWS_AS((void)[] {
    Ast ast = parse_unit({{"a.minij", "class A {\n}\n"},
                          {"b.minij", "void main() {\n  println(1);\n}\n"}});
    resolve(ast);
    return ast;
  }(), ResolutionError);
}

TEST_CASE("entry method inside a class constructs the receiver") {
  CHECK(run("class App {\n  int n;\n\n  void main() {\n    this.n = 7;\n"
            "    println(this.n);\n  }\n}\n") == std::vector<std::string>{"7"});
}

TEST_CASE("missing entry point is a fault") {
  auto out = run("void helper() { println(1); }");
  REQUIRE(out.size() == 1);
  CHECK(out[0].rfind("fault:", 0) == 0);
}

TEST_CASE("throw surfaces as a fault line") {
  auto out = run("void main() { throw new Boom(); }");
  REQUIRE(out.size() == 1);
  CHECK(out[0].rfind("fault:", 0) == 0);
}

TEST_CASE("step budget stops runaway loops") {
  InterpOptions opt;
  opt.step_budget = 500;
  auto out = run("void main() { int i = 0; while (0 < 1) { i++; } }", {}, opt);
  REQUIRE(out.size() == 1);
  CHECK(out[0].rfind("fault:", 0) == 0);
  CHECK(out[0].find("budget") != std::string::npos);
}

TEST_CASE("interpret_many and io_equal treat faults as comparable output") {
  Ast a = parse_source("void main() { println(readLine() + 1); }");
  resolve(a);
  ProgramIO io1 = interpret_many(a, {{"1"}, {"2"}});
  ProgramIO io2 = interpret_many(a, {{"1"}, {"2"}});
  CHECK(io_equal(io1, io2));
  ProgramIO io3 = interpret_many(a, {{"1"}, {"3"}});
  CHECK(!io_equal(io1, io3));

  Ast f = parse_source("void main() { println(1 / 0); }");
  resolve(f);
  CHECK(io_equal(interpret_many(f, {{}}), interpret_many(f, {{}})));
}
