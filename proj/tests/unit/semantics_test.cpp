#include "doctest.h"

#include "pispan/error.hpp"
#include "pispan/harness.hpp"
#include "pispan/semantics.hpp"

using namespace pispan;

TEST_CASE("expression evaluation") {
  CHECK(eval_expr(parse_expr("mult(s(s(0)), s(s(s(0))))")) == 6);
  CHECK(eval_expr(parse_expr("add(s(0), s(0))")) == 2);
  try {
    eval_expr(Expr::var("x"));
    FAIL("open expression");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OpenExpression);
  }
  try {
    eval_expr(Expr::app("nosuchfn", {}));
    FAIL("unknown symbol");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownSymbol);
  }
}

TEST_CASE("standard and annotated steps") {
  CHECK(standard_step(parse_process("tick.a!()")).empty());
  auto ticked = annotated_step(parse_process("tick.a!()"));
  REQUIRE(ticked.size() == 1);
  CHECK(ticked[0] == canonicalize(parse_process("1 : a!()")));

  // Communication takes the later of the two partners.
  auto comm = annotated_step(parse_process("1 : a!(s(0)) | 2 : a?(x).b!(x)"));
  REQUIRE(comm.size() == 1);
  CHECK(comm[0] == canonicalize(parse_process("2 : b!(s(0))")));

  auto branch = standard_step(parse_process("match s(0) { 0 => a!() ; s(m) => b!(m) }"));
  REQUIRE(branch.size() == 1);
  CHECK(branch[0] == canonicalize(parse_process("b!(0)")));

  // A replicated input survives communication.
  auto served = standard_step(parse_process("!a?().b!() | a!()"));
  REQUIRE(served.size() == 1);
  CHECK(served[0] == canonicalize(parse_process("!a?().b!() | b!()")));
}

TEST_CASE("local complexity") {
  CHECK(local_complexity(parse_process("0")) == 0);
  CHECK(local_complexity(parse_process("2 : a!() | 5 : 0 | 1 : b!()")) == 5);
}

TEST_CASE("global span") {
  CHECK(global_span(load_process("semaphore.pi")).value == 3);
  CHECK(global_span(load_process("semaphore3.pi")).value == 4);
  CHECK(global_span(load_process("deadlock.pi")).value == 0);
  CHECK(global_span(load_process("motivating.pi")).value == 4);
  CHECK(global_span(load_process("servers.pi")).value == 2);
  CHECK(global_span(parse_process("tick.tick.0 | tick.0")).value == 2);

  SpanResult cut = global_span(load_process("semaphore.pi"), 2);
  CHECK_FALSE(cut.exact);
  CHECK(cut.value <= 3);
}
