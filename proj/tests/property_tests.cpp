#include "doctest.h"

#include <sstream>

#include "pispan/semantics.hpp"
#include "pispan/types.hpp"
#include "support/generators.hpp"
#include "support/properties.hpp"
#include "support/reference_span.hpp"

using namespace pispan;
using namespace pispan::testing;

namespace {

void require_ok(const PropertyStats& st) {
  INFO(st.summary());
  CHECK(st.ok());
}

}  // namespace

TEST_CASE("local complexity is monotone") { require_ok(prop_local_monotonicity()); }
TEST_CASE("point delays commute with usage reduction") { require_ok(prop_delay_invariance()); }
TEST_CASE("subusage survives delay") { require_ok(prop_subusage_delay()); }
TEST_CASE("subusage preserves reliability") { require_ok(prop_reliability_preserved_by_subusage()); }
TEST_CASE("index substitution") { require_ok(prop_index_coherence()); }
TEST_CASE("type composition algebra") { require_ok(prop_par_types_algebra()); }

TEST_CASE("explorer agrees with the naive oracle") {
  Rng rng(kSeed + 10);
  std::size_t compared = 0;
  for (int n = 0; n < 300; ++n) {
    Process p = gen_process(rng, 4);
    SpanResult fast = global_span(p);
    auto slow = reference_span(p);
    if (!slow || !fast.exact) continue;
    ++compared;
    INFO(p.str());
    CHECK(fast.value == *slow);
  }
  CHECK(compared >= 250);
}

TEST_CASE("canonical forms") {
  Rng rng(kSeed + 11);
  for (int n = 0; n < 300; ++n) {
    Process p = gen_process(rng, 4);
    CanonicalForm f = canonicalize(p);
    INFO(p.str());
    CHECK(canonicalize(f.embed()).key == f.key);
    Process q = shuffle_congruent(rng, p);
    INFO(q.str());
    CHECK(canonicalize(q).key == f.key);
    CHECK(global_span(q).value == global_span(p).value);
  }
}

TEST_CASE("span and annotations") {
  Rng rng(kSeed + 12);
  for (int n = 0; n < 300; ++n) {
    Process p = gen_process(rng, 4);
    std::uint64_t m = rng.range(1, 4);
    SpanResult base = global_span(p);
    REQUIRE(base.exact);
    INFO(p.str());
    CHECK(global_span(Process::annot(m, p)).value == base.value + m);
    CHECK(base.value >= local_complexity(p));
  }
}

TEST_CASE("entailment verdicts agree with evaluation") {
  Rng rng(kSeed + 13);
  const std::vector<std::string> vars{"i", "j"};
  const VarSet phi{"i", "j"};
  std::size_t decided = 0;
  for (int n = 0; n < 300; ++n) {
    ConstraintSet assume;
    if (rng.chance(0.5)) assume.push_back(Constraint::le(gen_index(rng, vars, 1), gen_index(rng, vars, 1)));
    Constraint goal = rng.chance(0.5) ? Constraint::le(gen_index(rng, vars, 2), gen_index(rng, vars, 2))
                                      : Constraint::eq(gen_index(rng, vars, 2), gen_index(rng, vars, 2));
    Verdict v = entails(phi, assume, goal);
    std::ostringstream what;
    for (const auto& a : assume) what << a.str() << ", ";
    what << "|= " << goal.str();
    INFO(what.str());
    if (v.is_proven()) {
      ++decided;
      for (std::uint64_t i = 0; i <= 6; ++i)
        for (std::uint64_t j = 0; j <= 6; ++j) {
          Valuation rho{{"i", i}, {"j", j}};
          if (holds(assume, rho)) CHECK(holds(goal, rho));
        }
    } else if (v.is_refuted()) {
      ++decided;
      REQUIRE(v.witness.has_value());
      CHECK(holds(assume, *v.witness));
      CHECK_FALSE(holds(goal, *v.witness));
    }
  }
  CHECK(decided >= 200);
}

TEST_CASE("index arithmetic") {
  Rng rng(kSeed + 14);
  for (int n = 0; n < 300; ++n) {
    std::uint64_t a = rng.below(20), b = rng.below(20);
    Extended d = eval_index(Index::sub(Index::var("a"), Index::var("b")), {{"a", a}, {"b", b}});
    CHECK(d == Extended::of(a > b ? a - b : 0));
  }
  CHECK(eval_index(Index::sub(Index::infinity(), Index::infinity()), {}) == Extended::of(0));
  CHECK(eval_index(Index::fact(Index::constant(0)), {}) == Extended::of(0));
  CHECK(eval_index(Index::fact(Index::constant(4)), {}) == Extended::of(0));
}

TEST_CASE("interval operators") {
  Rng rng(kSeed + 15);
  auto ground = [](const Interval& i) { return std::make_pair(eval_index(i.lo, {}), eval_index(i.hi, {})); };
  for (int n = 0; n < 300; ++n) {
    Interval a = gen_interval(rng), b = gen_interval(rng), c = gen_interval(rng);
    CHECK(ground(ilub(a, b)) == ground(ilub(b, a)));
    CHECK(ground(ilub(a, a)) == ground(a));
    CHECK(ground(ilub(ilub(a, b), c)) == ground(ilub(a, ilub(b, c))));
    // A (+) [I,J] = [hi(A)+I, lo(A)+J] and A (+) J = [0, lo(A)+J].
    std::uint64_t alo = a.lo.value(), ahi = a.hi.value(), i = b.lo.value(), j = b.hi.value();
    CHECK(ground(iplus(a, Capacity::interval(b.lo, b.hi))) ==
          std::make_pair(Extended::of(ahi + i), Extended::of(alo + j)));
    CHECK(ground(iplus(a, Capacity::upper(b.hi))) == std::make_pair(Extended::of(0), Extended::of(alo + j)));
  }
}

TEST_CASE("type relations") {
  Rng rng(kSeed + 16);
  std::size_t stepped = 0;
  for (int n = 0; n < 300; ++n) {
    Type t = gen_chan_type(rng, {});
    Type s = gen_chan_type(rng, {});
    INFO(t.str());
    CHECK(subtype({}, {}, t, t).is_proven());

    Interval a = gen_interval(rng);
    CHECK(usage_congruent(delay_type(a, par_types(t, s)).usage(),
                          par_types(delay_type(a, t), delay_type(a, s)).usage()));

    Context g{{"a", t}};
    Reliability r = type_reliable({}, {}, t);
    if (r.outcome != Outcome::Proven) continue;
    for (const auto& next : context_step({}, {}, g)) {
      Reliability rn = type_reliable({}, {}, next.at("a"));
      if (rn.outcome == Outcome::Unknown) continue;
      ++stepped;
      INFO(next.at("a").str());
      CHECK(rn.outcome == Outcome::Proven);
    }
  }
  CHECK(stepped >= 100);
}
