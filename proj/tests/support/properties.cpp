#include "properties.hpp"

#include <set>
#include <sstream>

#include "generators.hpp"
#include "pispan/semantics.hpp"
#include "pispan/types.hpp"

namespace pispan::testing {

std::string PropertyStats::summary() const {
  std::ostringstream s;
  s << name << ": " << checked() << " checked, " << skipped << " skipped (" << static_cast<int>(skip_rate() * 100)
    << "%), " << failures << " failed";
  if (!first_failure.empty()) s << "; first failure: " << first_failure;
  return s.str();
}

namespace {

void record_failure(PropertyStats& st, const std::string& what) {
  if (st.failures++ == 0) st.first_failure = what;
}

std::set<std::string> next_keys(const std::vector<UsageStep>& steps, const Interval* shift, bool& error,
                                 bool& blocked) {
  std::set<std::string> keys;
  for (const auto& s : steps) {
    if (s.kind == UsageStep::Kind::Error) error = true;
    if (s.kind == UsageStep::Kind::Blocked) blocked = true;
    if (s.kind != UsageStep::Kind::Next) continue;
    keys.insert(normalize(shift ? delay(*shift, s.next) : s.next).str());
  }
  return keys;
}

}  // namespace

PropertyStats prop_local_monotonicity(std::size_t cases) {
  PropertyStats st{"local complexity never decreases along annotated reduction"};
  Rng rng(kSeed + 1);
  for (std::size_t n = 0; n < cases; ++n) {
    ++st.cases;
    CanonicalForm form = canonicalize(gen_process(rng, 4));
    // Random walk; every successor of every visited state is checked.
    for (int step = 0; step < 6; ++step) {
      std::uint64_t here = local_complexity(form.embed());
      auto next = successors(form, StepMode::Annotated);
      bool bad = false;
      for (const auto& q : next) {
        if (local_complexity(q.embed()) < here) {
          record_failure(st, form.key + " => " + q.key);
          bad = true;
          break;
        }
      }
      if (bad || next.empty()) break;
      form = next[rng.below(next.size())];
    }
  }
  return st;
}

PropertyStats prop_delay_invariance(std::size_t cases) {
  PropertyStats st{"usage reduction and reliability are invariant under delay"};
  Rng rng(kSeed + 2);
  for (std::size_t n = 0; n < cases; ++n) {
    ++st.cases;
    Usage u = gen_usage(rng, 4, 2);
    Index d = Index::constant(rng.below(4));
    Interval shift{d, d};
    Usage du = delay(shift, u);

    bool err1 = false, err2 = false, blk1 = false, blk2 = false;
    auto lhs = next_keys(usage_step({}, {}, u), &shift, err1, blk1);
    auto rhs = next_keys(usage_step({}, {}, du), nullptr, err2, blk2);
    Reliability r1 = reliable({}, {}, u);
    Reliability r2 = reliable({}, {}, du);
    if (blk1 || blk2 || r1.outcome == Outcome::Unknown || r2.outcome == Outcome::Unknown) {
      ++st.skipped;
      continue;
    }
    if (lhs != rhs || err1 != err2) {
      record_failure(st, "steps of " + u.str() + " delayed by " + shift.str());
    } else if (r1.outcome != r2.outcome) {
      record_failure(st, "reliability of " + u.str() + " changes under delay " + shift.str());
    }
  }
  return st;
}

PropertyStats prop_subusage_delay(std::size_t cases) {
  PropertyStats st{"proven subusage is preserved by delay"};
  Rng rng(kSeed + 3);
  for (std::size_t n = 0; n < cases; ++n) {
    ++st.cases;
    Usage u = gen_usage(rng, 4, 2);
    Usage v = coarsen(rng, u);
    if (rng.chance(0.5)) v = coarsen(rng, v);
    if (!subusage({}, {}, u, v).is_proven()) {
      ++st.skipped;
      continue;
    }
    Interval shift = gen_interval(rng);
    Verdict shifted = subusage({}, {}, delay(shift, u), delay(shift, v));
    if (!shifted.is_proven()) record_failure(st, u.str() + " [= " + v.str() + " but not after delay " + shift.str());
  }
  return st;
}

PropertyStats prop_reliability_preserved_by_subusage(std::size_t cases) {
  PropertyStats st{"reliability is preserved by proven subusage"};
  Rng rng(kSeed + 4);
  for (std::size_t n = 0; n < cases; ++n) {
    ++st.cases;
    // Draw until a reliable usage turns up.
    Usage u;
    Reliability ru;
    for (int attempt = 0; attempt < 200; ++attempt) {
      u = gen_usage(rng, 4, 2);
      ru = reliable({}, {}, u);
      if (ru.outcome == Outcome::Proven) break;
    }
    Usage v = coarsen(rng, u);
    if (rng.chance(0.5)) v = coarsen(rng, v);
    if (ru.outcome != Outcome::Proven || !subusage({}, {}, u, v).is_proven()) {
      ++st.skipped;
      continue;
    }
    Reliability rv = reliable({}, {}, v);
    if (rv.outcome == Outcome::Unknown) {
      ++st.skipped;
    } else if (rv.outcome == Outcome::Refuted) {
      record_failure(st, u.str() + " is reliable, " + v.str() + " is not");
    }
  }
  return st;
}

PropertyStats prop_index_coherence(std::size_t cases) {
  PropertyStats st{"index substitution agrees with evaluation"};
  Rng rng(kSeed + 5);
  const std::vector<std::string> vars{"i", "j"};
  for (std::size_t n = 0; n < cases; ++n) {
    ++st.cases;
    Index body = gen_index(rng, vars, 3);
    Index repl = gen_index(rng, vars, 2);
    Valuation rho{{"i", rng.below(5)}, {"j", rng.below(5)}};
    Extended r = eval_index(repl, rho);
    if (r.infinite) {
      ++st.skipped;
      continue;
    }
    Valuation updated = rho;
    updated["i"] = r.value;
    Extended lhs = eval_index(subst_index(body, "i", repl), rho);
    Extended rhs = eval_index(body, updated);
    Extended simplified = eval_index(simplify(body), rho);
    if (!(lhs == rhs)) {
      record_failure(st, body.str() + " [i := " + repl.str() + "] at i=" + std::to_string(rho["i"]) +
                             ", j=" + std::to_string(rho["j"]));
    } else if (!(simplified == eval_index(body, rho))) {
      record_failure(st, "simplify changes the value of " + body.str());
    }
  }
  return st;
}

PropertyStats prop_par_types_algebra(std::size_t cases) {
  PropertyStats st{"parallel composition of types is commutative and associative"};
  Rng rng(kSeed + 6);
  for (std::size_t n = 0; n < cases; ++n) {
    ++st.cases;
    std::vector<Type> payload;
    if (rng.chance(0.5)) payload.push_back(Type::nat(Index::constant(0), Index::constant(rng.below(3))));
    Type a = gen_chan_type(rng, payload);
    Type b = gen_chan_type(rng, payload);
    Type c = gen_chan_type(rng, payload);
    bool comm = usage_congruent(par_types(a, b).usage(), par_types(b, a).usage());
    bool assoc = usage_congruent(par_types(par_types(a, b), c).usage(), par_types(a, par_types(b, c)).usage());
    bool skeleton = par_types(a, b).skeleton() == a.skeleton();
    if (!comm || !assoc || !skeleton) record_failure(st, a.str() + " ; " + b.str() + " ; " + c.str());
  }
  return st;
}

}  // namespace pispan::testing
