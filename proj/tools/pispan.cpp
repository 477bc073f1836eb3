#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pispan/error.hpp"
#include "pispan/harness.hpp"

using json = nlohmann::json;
using namespace pispan;

namespace {

enum Exit { kOk = 0, kFail = 1, kUnknown = 2, kInputError = 3 };

struct Options {
  std::size_t fuel = 100000;
  unsigned unfold = 2;
  unsigned depth = 8;
  unsigned index_bound = 8;
  bool json = false;
  bool trace = false;
  std::vector<std::string> valuations;
};

UsageConfig usage_config(const Options& o) {
  UsageConfig c;
  c.fuel = o.fuel < 20000 ? o.fuel : 20000;
  c.unfold = o.unfold;
  c.depth = o.depth;
  c.entail.bound = o.index_bound;
  return c;
}

json valuation_json(const Valuation& rho) {
  json j = json::object();
  for (const auto& [k, v] : rho) j[k] = v;
  return j;
}

std::string valuation_str(const Valuation& rho) {
  std::string s;
  for (const auto& [k, v] : rho) s += (s.empty() ? "" : ", ") + k + "=" + std::to_string(v);
  return s;
}

Valuation parse_valuation(const std::string& text) {
  Valuation rho;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parse, "valuation '" + text + "' must look like i=3");
    try {
      rho[item.substr(0, eq)] = std::stoull(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "valuation '" + text + "' has a non-numeric value");
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return rho;
}

int emit(const Options& o, const json& report, const std::string& text, int code) {
  if (o.json) {
    json out = report;
    out["schema"] = 1;
    out["exit"] = code;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << text;
  }
  return code;
}

int run_span(const Options& o, const std::string& file) {
  Process p = load_process(file);
  SpanResult r = global_span(p, o.fuel);
  json j{{"command", "span"}, {"file", file}, {"span", r.value}, {"exact", r.exact}, {"states", r.states_explored}};
  std::string text = "span " + std::to_string(r.value) + (r.exact ? " exact" : " (lower bound, fuel exhausted)") +
                     " [" + std::to_string(r.states_explored) + " states]\n";
  return emit(o, j, text, r.exact ? kOk : kUnknown);
}

int run_usage(const Options& o, const std::string& file) {
  UsageFile f = load_usage(file);
  Reliability r = reliable(f.indices, f.constraints, f.usage, usage_config(o));
  const char* verdict = r.outcome == Outcome::Proven ? "Reliable" : r.outcome == Outcome::Refuted ? "Unreliable" : "Unknown";
  json j{{"command", "usage"}, {"file", file},     {"usage", f.usage.str()}, {"verdict", verdict},
         {"states", r.states},  {"trace", r.trace}, {"note", r.note}};
  std::string text = std::string(verdict) + " [" + std::to_string(r.states) + " states]\n";
  for (const auto& step : r.trace) text += "  " + step + "\n";
  if (!r.note.empty()) text += "note: " + r.note + "\n";
  int code = r.outcome == Outcome::Proven ? kOk : r.outcome == Outcome::Refuted ? kFail : kUnknown;
  return emit(o, j, text, code);
}

int run_subusage(const Options& o, const std::string& lhs, const std::string& rhs) {
  UsageFile u = load_usage(lhs);
  UsageFile v = load_usage(rhs);
  VarSet phi = u.indices;
  phi.insert(v.indices.begin(), v.indices.end());
  ConstraintSet as = u.constraints;
  as.insert(as.end(), v.constraints.begin(), v.constraints.end());
  Verdict r = subusage(phi, as, u.usage, v.usage, usage_config(o));
  json j{{"command", "subusage"}, {"lhs", u.usage.str()}, {"rhs", v.usage.str()},
         {"verdict", to_string(r.outcome)}, {"note", r.note}};
  std::string text = std::string(to_string(r.outcome)) + ": " + u.usage.str() + " [= " + v.usage.str() + "\n";
  if (!r.note.empty()) text += "note: " + r.note + "\n";
  return emit(o, j, text, r.is_proven() ? kOk : r.is_refuted() ? kFail : kUnknown);
}

CheckConfig check_config(const Options& o) {
  CheckConfig c;
  c.usage = usage_config(o);
  return c;
}

int rejection_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Io: return kInputError;
    case ErrorKind::SideConditionUnknown: return kUnknown;
    default: return kFail;
  }
}

int run_typecheck(const Options& o, const std::string& file) {
  LoadedDerivation d = load_derivation(file);
  json j{{"command", "typecheck"}, {"file", file}, {"process", d.process.str()}};
  try {
    CheckResult r = check_derivation(d.script, d.process, check_config(o));
    Interval k{simplify(r.complexity.lo), simplify(r.complexity.hi)};
    j["accepted"] = true;
    j["complexity"] = {k.lo.str(), k.hi.str()};
    json trace = json::array();
    std::string text;
    for (const auto& t : r.trace) {
      trace.push_back({{"depth", t.depth},
                       {"rule", t.rule},
                       {"at", t.where},
                       {"context", t.context},
                       {"complexity", t.complexity.str()}});
      if (o.trace) text += std::string(2 * t.depth, ' ') + t.rule + " " + t.complexity.str() + "  " + t.context + "\n";
    }
    j["trace"] = trace;
    text += "accepted: " + context_str(r.context) + " |- P > " + k.str() + "\n";
    return emit(o, j, text, kOk);
  } catch (const Error& e) {
    int code = rejection_code(e);
    j["accepted"] = false;
    j["error"] = e.what();
    return emit(o, j, std::string("rejected: ") + e.what() + "\n", code == kInputError ? kFail : code);
  }
}

int run_soundness_cmd(const Options& o, const std::string& file) {
  LoadedDerivation d = load_derivation(file);
  std::vector<Valuation> vals;
  for (const auto& v : o.valuations) vals.push_back(parse_valuation(v));
  if (vals.empty()) vals = default_valuations(d.script.indices, d.script.constraints);
  SoundnessReport r = run_soundness(d.script, d.process, vals, o.fuel, check_config(o));

  json j{{"command", "soundness"}, {"file", file}, {"accepted", r.accepted}};
  std::string text;
  if (!r.accepted) {
    j["error"] = r.error;
    j["pass"] = false;
    return emit(o, j, "script rejected: " + r.error + "\nFAIL\n", kFail);
  }
  j["bound"] = {simplify(r.bound.lo).str(), simplify(r.bound.hi).str()};
  j["unreliable"] = r.unreliable;
  text += "bound " + r.bound.str() + "\n";
  for (const auto& name : r.unreliable) text += "context entry '" + name + "' is not proven reliable\n";
  json runs = json::array();
  for (const auto& run : r.runs) {
    std::string lower = run.lower_checked ? (run.lower_ok ? "ok" : "violated") : "not checked";
    runs.push_back({{"valuation", valuation_str(run.valuation)},
                    {"inputs", valuation_json(run.inputs)},
                    {"span", run.span},
                    {"exact", run.exact},
                    {"lower", to_string(run.lower)},
                    {"upper", to_string(run.upper)},
                    {"lower_bound", lower},
                    {"pass", run.pass()}});
    text += "  {" + valuation_str(run.valuation) + "}" + (run.inputs.empty() ? "" : " inputs {" + valuation_str(run.inputs) + "}") +
            ": span " + std::to_string(run.span) + (run.exact ? "" : " (inexact)") + " in [" + to_string(run.lower) + ", " +
            to_string(run.upper) + "], lower bound " + lower + (run.pass() ? "  pass" : "  FAIL") + "\n";
  }
  j["runs"] = runs;
  j["pass"] = r.pass();
  j["advisory"] = r.advisory();
  int code = !r.pass() ? kFail : r.advisory() ? kUnknown : kOk;
  text += code == kOk ? "PASS\n" : code == kFail ? "FAIL\n" : "PASS (advisory: oracle ran out of fuel)\n";
  return emit(o, j, text, code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Span analysis for annotated pi-calculus processes"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--fuel", o.fuel, "State budget for the span oracle and usage exploration")->capture_default_str();
  app.add_option("--unfold", o.unfold, "Replicated-usage unfoldings during reliability checks")->capture_default_str();
  app.add_option("--depth", o.depth, "Search depth for subusage proofs")->capture_default_str();
  app.add_option("--index-bound", o.index_bound, "Largest value tried when refuting index constraints")
      ->capture_default_str();
  app.add_flag("--json", o.json, "Print a JSON report");

  std::string file, other;
  auto* span = app.add_subcommand("span", "Exact span of a process by exhaustive exploration");
  span->add_option("file", file, "Process file")->required();
  auto* usage = app.add_subcommand("usage", "Reliability of a usage");
  usage->add_option("file", file, "Usage file")->required();
  auto* sub = app.add_subcommand("subusage", "Check U [= V");
  sub->add_option("lhs", file, "Usage file for U")->required();
  sub->add_option("rhs", other, "Usage file for V")->required();
  auto* typecheck = app.add_subcommand("typecheck", "Check a typing derivation script");
  typecheck->add_option("file", file, "Derivation file")->required();
  typecheck->add_flag("--trace", o.trace, "Print the checked derivation tree");
  auto* soundness = app.add_subcommand("soundness", "Compare a checked bound against the span oracle");
  soundness->add_option("file", file, "Derivation file")->required();
  soundness->add_option("--valuation", o.valuations, "Index valuation such as k=2 (repeatable)");
  for (auto* s : {span, usage, sub, typecheck, soundness}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*span) return run_span(o, file);
    if (*usage) return run_usage(o, file);
    if (*sub) return run_subusage(o, file, other);
    if (*typecheck) return run_typecheck(o, file);
    if (*soundness) return run_soundness_cmd(o, file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rejection_code(e) == kInputError ? kInputError : kFail;
  }
  return kInputError;
}
