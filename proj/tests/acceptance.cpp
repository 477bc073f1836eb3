// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "pispan/harness.hpp"
#include "support/properties.hpp"

using namespace pispan;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome_ {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [FAILED]");
  }
};

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt_ms(double ms) {
  std::ostringstream s;
  s.precision(3);
  s << ms << " ms";
  return s.str();
}

Extended ground(const Index& i) { return eval_index(i, {}); }

std::string ext(const Extended& e) { return to_string(e); }

void criterion1(Outcome_& o) {
  Process p = load_process("semaphore.pi");
  auto start = Clock::now();
  SpanResult r = global_span(p);
  double ms = millis_since(start);
  o.check(r.value == 3 && r.exact, "semaphore span " + std::to_string(r.value) + (r.exact ? " exact" : " inexact"));
  o.check(ms <= 100.0, "took " + fmt_ms(ms) + " (limit 100 ms)");
}

void criterion2(Outcome_& o) {
  const Process token = Process::output("a", {}, Process::nil());
  const Process client = Process::input("a", {}, Process::tick(Process::output("a", {}, Process::nil())));
  for (unsigned n = 1; n <= 6; ++n) {
    std::vector<Process> parts(n, client);
    parts.push_back(token);
    auto start = Clock::now();
    SpanResult r = global_span(Process::par_all(parts));
    double ms = millis_since(start);
    o.check(r.value == n && r.exact && ms <= 1000.0,
            "n=" + std::to_string(n) + ": " + std::to_string(r.value) + (r.exact ? " exact" : " inexact") + " in " +
                fmt_ms(ms));
  }
}

void criterion3(Outcome_& o) {
  auto verdict = [](const std::string& file) {
    UsageFile f = load_usage(file);
    return reliable(f.indices, f.constraints, f.usage);
  };
  Reliability a = verdict("ex31.usg");
  o.check(a.outcome == Outcome::Proven, std::string("ex31 ") + to_string(a.outcome));
  Reliability b = verdict("ex32.usg");
  bool traced = !b.trace.empty() && b.trace.back() == "Error";
  o.check(b.outcome == Outcome::Refuted && traced,
          std::string("ex32 ") + to_string(b.outcome) + " with " + std::to_string(b.trace.size()) + "-step trace" +
              (traced ? " ending in Error" : ""));
  Reliability c = verdict("ex32_fixed.usg");
  o.check(c.outcome == Outcome::Proven, std::string("ex32 with capacity 2 ") + to_string(c.outcome));
}

bool same_interval(const Interval& got, const std::string& lo, const std::string& hi) {
  return simplify(got.lo) == simplify(parse_index(lo)) && simplify(got.hi) == simplify(parse_index(hi));
}

void criterion4(Outcome_& o) {
  auto checked = [&](const std::string& file, const std::string& lo, const std::string& hi) -> std::optional<CheckResult> {
    try {
      LoadedDerivation d = load_derivation(file);
      CheckResult r = check_derivation(d.script, d.process);
      Interval k{simplify(r.complexity.lo), simplify(r.complexity.hi)};
      o.check(same_interval(k, lo, hi), file + " accepted with " + k.str());
      return r;
    } catch (const std::exception& e) {
      o.check(false, file + " rejected: " + e.what());
      return std::nullopt;
    }
  };
  checked("semaphore.deriv", "1", "3");
  checked("deadlock.deriv", "0", "0");
  if (auto r = checked("factorial.deriv", "0", "k")) {
    // The replicated input and the server body directly below it.
    bool found = false;
    for (std::size_t k = 0; k + 1 < r->trace.size(); ++k) {
      const TraceEntry& t = r->trace[k];
      if (t.rule != "iserv") continue;
      const TraceEntry& body = r->trace[k + 1];
      found = true;
      o.check(same_interval(t.complexity, "0", "0"), "factorial server " + t.complexity.str());
      o.check(same_interval(body.complexity, "0", "i"), "factorial body " + body.complexity.str());
    }
    o.check(found, "factorial derivation has a server node");
  }
}

void criterion5(Outcome_& o) {
  struct Entry {
    std::string file;
    std::function<std::uint64_t(const Valuation&)> expected_span;
  };
  std::vector<Entry> entries{
      {"semaphore.deriv", [](const Valuation&) { return 3; }},
      {"deadlock.deriv", [](const Valuation&) { return 0; }},
      {"factorial.deriv", [](const Valuation& rho) { return rho.at("k"); }},
      {"servers.deriv", [](const Valuation&) { return 2; }},
  };
  for (const auto& e : entries) {
    LoadedDerivation d = load_derivation(e.file);
    auto vals = default_valuations(d.script.indices, d.script.constraints);
    SoundnessReport r = run_soundness(d.script, d.process, vals);
    if (!r.accepted) {
      o.check(false, e.file + " rejected: " + r.error);
      continue;
    }
    std::ostringstream runs;
    bool spans_ok = true;
    for (const auto& run : r.runs) {
      spans_ok = spans_ok && run.exact && run.span == e.expected_span(run.valuation);
      runs << (runs.tellp() > 0 ? ", " : "") << "n=" << run.span << " <= " << ext(run.upper);
      if (run.lower_checked) runs << " and " << ext(run.lower) << " <= " << run.span;
    }
    o.check(r.pass() && spans_ok && r.unreliable.empty(), e.file + " " + runs.str());
  }
}

void criterion6(Outcome_& o) {
  using namespace pispan::testing;
  for (auto* prop : {prop_local_monotonicity, prop_delay_invariance, prop_subusage_delay,
                     prop_reliability_preserved_by_subusage, prop_index_coherence, prop_par_types_algebra}) {
    PropertyStats st = prop(kDefaultCases);
    o.check(st.ok(), st.summary());
  }
}

void criterion7(Outcome_& o) {
  auto iv = [](std::uint64_t lo, std::uint64_t hi) { return Interval{Index::constant(lo), Index::constant(hi)}; };
  auto is = [](const Interval& got, const std::string& lo, const std::string& hi) {
    return ext(ground(got.lo)) == lo && ext(ground(got.hi)) == hi;
  };
  auto show = [](const Interval& got) { return "[" + ext(ground(got.lo)) + "," + ext(ground(got.hi)) + "]"; };
  Interval r1 = iplus(iv(1, 3), Capacity::interval(Index::constant(5), Index::constant(7)));
  o.check(is(r1, "8", "8"), "[1,3]+[5,7]=" + show(r1));
  Interval r2 = iplus(iv(0, 0), Capacity::interval(Index::constant(1), Index::constant(1)));
  o.check(is(r2, "1", "1"), "[0,0]+[1,1]=" + show(r2));
  Interval r3 = iplus(iv(1, 1), Capacity::upper(Index::constant(1)));
  o.check(is(r3, "0", "2"), "[1,1]+1=" + show(r3));
  Interval r4 = iplus(iv(1, 1), Capacity::interval(Index::constant(0), Index::constant(1)));
  o.check(is(r4, "1", "2"), "[1,1]+[0,1]=" + show(r4));
  Interval r5 = seq_complexity(Capacity::interval(Index::infinity(), Index::infinity()), iv(2, 5));
  o.check(is(r5, "0", "0"), "[inf,inf];[2,5]=" + show(r5));
  Interval r6 = ilub(iv(4, 8), iv(5, 7));
  o.check(is(r6, "5", "8"), "[4,8] lub [5,7]=" + show(r6));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome_&)>>> criteria{
      {"span oracle on the semaphore", criterion1},
      {"span of n clients sharing one token", criterion2},
      {"usage reliability examples", criterion3},
      {"derivation scripts accepted with their bounds", criterion4},
      {"checked bounds enclose the oracle span", criterion5},
      {"property suites", criterion6},
      {"interval algebra", criterion7},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome_ o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << k + 1 << " " << criteria[k].first << ": " << o.detail.str()
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
