#include "doctest.h"

#include "pispan/error.hpp"
#include "pispan/harness.hpp"

using namespace pispan;

TEST_CASE("usage files") {
  UsageFile f = parse_usage_file("# reply\n@indices i j\n@constraint i >= 1\nOut[i,j]<0>  # trailing\n");
  CHECK(f.indices == VarSet{"i", "j"});
  REQUIRE(f.constraints.size() == 1);
  CHECK(holds(f.constraints, {{"i", 1}}));
  CHECK(f.usage == parse_usage("Out[i,j]<0>"));
  CHECK_THROWS_AS(parse_usage_file("Out[k,k]<0>"), Error);
}

TEST_CASE("input resolution") {
  CHECK(std::filesystem::exists(resolve_input("semaphore.pi")));
  CHECK(std::filesystem::exists(resolve_input("examples/semaphore.pi")));
  try {
    resolve_input("no/such/file.pi");
    FAIL("missing file");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("valuations") {
  CHECK(default_valuations({}, {}).size() == 1);
  auto vals = default_valuations({"i"}, {parse_constraint("i >= 1")});
  REQUIRE(vals.size() == 3);
  CHECK(vals.front().at("i") == 1);
  CHECK(default_valuations({"i", "j"}, {}, 2).size() == 9);
}

TEST_CASE("soundness runs") {
  LoadedDerivation d = load_derivation("semaphore.deriv");
  SoundnessReport r = run_soundness(d.script, d.process, {{}});
  REQUIRE(r.accepted);
  REQUIRE(r.runs.size() == 1);
  CHECK(r.runs[0].span == 3);
  CHECK(r.runs[0].lower_checked);
  CHECK(r.pass());
  CHECK_FALSE(r.advisory());

  LoadedDerivation f = load_derivation("factorial.deriv");
  SoundnessReport fr = run_soundness(f.script, f.process, {{{"k", 2}}});
  REQUIRE(fr.runs.size() >= 1);
  CHECK(fr.runs[0].span == 2);
  CHECK_FALSE(fr.runs[0].lower_checked);
  CHECK(fr.pass());

  SoundnessReport starved = run_soundness(f.script, f.process, {{{"k", 3}}}, 3);
  CHECK(starved.advisory());
}
