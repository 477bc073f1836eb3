#include "doctest.h"

#include "pispan/canonical.hpp"
#include "pispan/error.hpp"
#include "pispan/process.hpp"

using namespace pispan;

TEST_CASE("process printing round-trips") {
  for (const char* text : {"0", "a!()", "tick.a?(x, y).x!(y)", "new a in (a!(s(0)) | !a?(n).0)",
                           "match n { 0 => r!(0) ; s(m) => r!(mult(n, m)) }", "3 : (a!() | b?().0)"}) {
    INFO(text);
    Process p = parse_process(text);
    CHECK(parse_process(p.str()) == p);
  }
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_process("a!(\n  )) |");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
    CHECK(e.column() >= 1);
  }
  CHECK_THROWS_AS(parse_process("a!(nosuchfn(0))"), Error);
}

TEST_CASE("free names") {
  Process p = parse_process("new a in (a!(b) | c?(x).x!(d))");
  CHECK(free_names(p) == std::set<std::string>{"b", "c", "d"});
}

TEST_CASE("substitution") {
  Process body = parse_process("x!(y)");
  CHECK(substitute(body, {"x", "y"}, {Expr::var("a"), Expr::numeral(2)}) == parse_process("a!(s(s(0)))"));
  CHECK_THROWS_AS(substitute(body, {"x"}, {Expr::var("a"), Expr::var("b")}), Error);
  try {
    substitute(body, {"x", "y"}, {Expr::numeral(1), Expr::var("b")});
    FAIL("numeral in channel position");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllFormedSubstitution);
  }

  // The bound y must be renamed away from the incoming y.
  Process capture = parse_process("new y in x!(y)");
  Process out = substitute(capture, {"x"}, {Expr::var("y")});
  CHECK(free_names(out) == std::set<std::string>{"y"});
  CHECK(out.body().name() == "y");
  CHECK(out.body().args().front().name() != "y");
}

TEST_CASE("structural congruence") {
  auto same = [](const char* a, const char* b) { return congruent(parse_process(a), parse_process(b)); };
  CHECK(same("a!() | b!()", "b!() | a!()"));
  CHECK(same("(a!() | b!()) | c!()", "a!() | (b!() | c!())"));
  CHECK(same("a!() | 0", "a!()"));
  CHECK(same("new x in x!()", "new y in y!()"));
  CHECK(same("new x in (x!() | a!())", "a!() | new x in x!()"));
  CHECK(same("2 : (a!() | b!())", "2 : a!() | 2 : b!()"));
  CHECK(same("1 : 2 : a!()", "3 : a!()"));
  CHECK(same("2 : (a!() | 0)", "2 : a!() | 2 : 0"));
  CHECK(same("3 : a!() | 1 : 0", "3 : a!()"));
  CHECK_FALSE(same("1 : 0", "0"));
  CHECK_FALSE(same("a!()", "b!()"));
  CHECK_FALSE(same("new x in (x!() | x?().0)", "new x in x!() | new y in y?().0"));
}
