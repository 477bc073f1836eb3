#include "doctest.h"

#include "pispan/error.hpp"
#include "pispan/harness.hpp"
#include "pispan/lexer.hpp"
#include "pispan/usage.hpp"

using namespace pispan;

namespace {

std::string ground(const Interval& i) {
  return "[" + to_string(eval_index(i.lo, {})) + "," + to_string(eval_index(i.hi, {})) + "]";
}

Interval iv(const char* text) {
  Cursor c(text);
  return parse_interval(c);
}

Capacity cap(const char* text) {
  Cursor c(text);
  return parse_capacity(c);
}

Outcome verdict(const char* text) { return reliable({}, {}, parse_usage(text)).outcome; }

}  // namespace

TEST_CASE("interval algebra") {
  CHECK(ground(iplus(iv("[1,3]"), cap("[5,7]"))) == "[8,8]");
  CHECK(ground(iplus(iv("[0,0]"), cap("[1,1]"))) == "[1,1]");
  CHECK(ground(iplus(iv("[1,1]"), cap("<1>"))) == "[0,2]");
  CHECK(ground(iplus(iv("[1,1]"), cap("[0,1]"))) == "[1,2]");
  CHECK(ground(seq_complexity(cap("[inf,inf]"), iv("[2,5]"))) == "[0,0]");
  CHECK(ground(seq_complexity(cap("<2>"), iv("[1,3]"))) == "[0,5]");
  CHECK(ground(ilub(iv("[4,8]"), iv("[5,7]"))) == "[5,8]");
  CHECK(ground(add(iv("[1,2]"), iv("[3,4]"))) == "[4,6]");
}

TEST_CASE("usage printing round-trips") {
  for (const char* text : {"0", "In[1,1]<1>.Out[1,1]<0>", "!In[0,0]<2> | Out[0,2]<1>", "(Out[0,2]<1> + In[1,1][0,1])",
                           "Out[i-1,i-1]<0> | In[0,0][i-1,i-1]",
                           "In[1,1]<1> | (Out[0,2]<1> + In[1,1][0,1].Out[0,0]<0>) | (Out[0,0]<0> | In[0,0]<0>) + 0"}) {
    INFO(text);
    Usage u = parse_usage(text);
    CHECK(parse_usage(u.str()) == u);
  }
  CHECK_THROWS_AS(parse_usage("In[1,1]"), ParseError);
}

TEST_CASE("delay") {
  Usage u = parse_usage("In[1,2]<1>.Out[0,0]<0> | Out[0,0]<3>");
  CHECK(usage_congruent(delay(iv("[2,2]"), u), parse_usage("In[3,4]<1>.Out[0,0]<0> | Out[2,2]<3>")));
  CHECK(usage_congruent(parse_usage("0 | Out[0,0]<1> | 0"), parse_usage("Out[0,0]<1>")));
  CHECK(usage_congruent(parse_usage("!Out[0,0]<1> | !Out[0,0]<1>"), parse_usage("!Out[0,0]<1>")));
}

TEST_CASE("reliability") {
  CHECK(verdict("Out[0,0]<0> | In[0,0]<0>") == Outcome::Proven);
  CHECK(verdict("In[1,1]<1>.Out[1,1]<0> | In[1,1]<1>.Out[1,1]<0> | Out[0,0][1,1]") == Outcome::Proven);

  Reliability r = reliable({}, {}, load_usage("ex32.usg").usage);
  CHECK(r.outcome == Outcome::Refuted);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.trace.back() == "Error");

  UsageFile reply = load_usage("reply.usg");
  CHECK(reliable(reply.indices, reply.constraints, reply.usage).outcome == Outcome::Proven);
}

TEST_CASE("delay invariance needs point delays") {
  // The input must be served by time 0; stretching the delay to [0,1]
  // lets the output arrive after that deadline.
  Usage u = parse_usage("In[0,0][0,0] | Out[0,0]<0>");
  CHECK(reliable({}, {}, u).outcome == Outcome::Proven);
  CHECK(reliable({}, {}, delay(iv("[1,1]"), u)).outcome == Outcome::Proven);
  CHECK(reliable({}, {}, delay(iv("[0,1]"), u)).outcome == Outcome::Refuted);
}

TEST_CASE("subusage") {
  CHECK(subusage({}, {}, load_usage("u.usg").usage, Usage::zero()).is_proven());
  CHECK(subusage({}, {}, parse_usage("Out[1,2]<1>"), parse_usage("Out[1,1]<2>")).is_proven());
  CHECK(subusage({}, {}, parse_usage("Out[0,0]<0> + In[0,0]<0>"), parse_usage("In[0,0]<0>")).is_proven());
  CHECK(subusage({}, {}, parse_usage("!Out[0,0]<0>"), parse_usage("Out[0,0]<0> | !Out[0,0]<0>")).is_proven());
  CHECK_FALSE(subusage({}, {}, parse_usage("Out[0,0]<2>"), parse_usage("Out[0,0]<1>")).is_proven());
  CHECK_FALSE(subusage({}, {}, Usage::zero(), parse_usage("Out[0,0]<0>")).is_proven());

  const VarSet phi{"i"};
  CHECK(subusage(phi, {}, parse_usage("Out[i,i+1]<0>"), parse_usage("Out[i+1,i+1]<0>")).is_proven());
}
