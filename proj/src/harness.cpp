#include "pispan/harness.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pispan/error.hpp"
#include "pispan/lexer.hpp"

#ifndef PISPAN_DEFAULT_CORPUS
#define PISPAN_DEFAULT_CORPUS "corpus"
#endif

namespace pispan {

namespace fs = std::filesystem;

fs::path corpus_dir() {
  if (const char* env = std::getenv("PISPAN_CORPUS"); env && *env) return env;
  return PISPAN_DEFAULT_CORPUS;
}

fs::path resolve_input(const std::string& path) {
  fs::path p(path);
  if (fs::exists(p)) return p;
  fs::path dir = corpus_dir();
  if (p.is_relative() && fs::exists(dir / p)) return dir / p;
  if (fs::exists(dir / p.filename())) return dir / p.filename();
  throw Error(ErrorKind::Io, "cannot find '" + path + "' (also looked in " + dir.string() + ")");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Drops `#` comments so process files can carry notes.
std::string strip_comments(const std::string& text) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    out += line + "\n";
  }
  return out;
}

}  // namespace

Process load_process(const std::string& path) { return parse_process(strip_comments(read_file(resolve_input(path)))); }

UsageFile parse_usage_file(const std::string& text) {
  UsageFile f;
  std::string body;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) {
      body += "\n";
      continue;
    }
    if (line.compare(start, 8, "@indices") == 0) {
      std::istringstream vars(line.substr(start + 8));
      std::string v;
      while (vars >> v) f.indices.insert(v);
      body += "\n";
    } else if (line.compare(start, 11, "@constraint") == 0) {
      try {
        f.constraints.push_back(parse_constraint(line.substr(start + 11)));
      } catch (const ParseError& e) {
        throw ParseError(std::string("in @constraint: ") + e.what(), lineno, 1);
      }
      body += "\n";
    } else if (line[start] == '@') {
      throw ParseError("unknown directive", lineno, static_cast<int>(start) + 1);
    } else {
      body += line + "\n";
    }
  }
  f.usage = parse_usage(body);
  VarSet used;
  free_index_vars(f.usage, used);
  for (const auto& c : f.constraints) {
    free_index_vars(c.lhs, used);
    free_index_vars(c.rhs, used);
  }
  for (const auto& v : used) {
    if (!f.indices.count(v)) throw Error(ErrorKind::UnboundIndexVariable, "'" + v + "' is not declared by @indices");
  }
  return f;
}

UsageFile load_usage(const std::string& path) { return parse_usage_file(read_file(resolve_input(path))); }

LoadedDerivation load_derivation(const std::string& path) {
  fs::path where = resolve_input(path);
  LoadedDerivation d{parse_derivation(read_file(where)), {}};
  if (d.script.process_source) {
    d.process = parse_process(*d.script.process_source);
  } else {
    fs::path target(*d.script.process_file);
    fs::path sibling = where.parent_path() / target;
    d.process = load_process(target.is_relative() && fs::exists(sibling) ? sibling.string() : target.string());
  }
  return d;
}

std::vector<Valuation> default_valuations(const VarSet& indices, const ConstraintSet& constraints,
                                          std::uint64_t max) {
  std::vector<Valuation> out{{}};
  for (const auto& v : indices) {
    std::vector<Valuation> next;
    for (const auto& rho : out) {
      for (std::uint64_t n = 0; n <= max; ++n) {
        Valuation r = rho;
        r[v] = n;
        next.push_back(std::move(r));
      }
    }
    out = std::move(next);
  }
  std::vector<Valuation> kept;
  for (auto& rho : out) {
    if (holds(constraints, rho)) kept.push_back(std::move(rho));
  }
  return kept;
}

bool SoundnessReport::pass() const {
  if (!accepted || !unreliable.empty() || runs.empty()) return false;
  for (const auto& r : runs) {
    if (!r.pass()) return false;
  }
  return true;
}

bool SoundnessReport::advisory() const {
  for (const auto& r : runs) {
    if (!r.exact) return true;
  }
  return false;
}

namespace {

// Largest number of values tried for a Nat input whose bounds differ.
constexpr std::uint64_t kMaxInputChoices = 8;

std::vector<std::map<std::string, std::uint64_t>> input_choices(const Context& ctx, const Valuation& rho) {
  std::vector<std::map<std::string, std::uint64_t>> out{{}};
  for (const auto& [name, t] : ctx) {
    if (!t.is_nat()) continue;
    Extended lo = eval_index(t.lo(), rho);
    Extended hi = eval_index(t.hi(), rho);
    if (lo.infinite) throw Error(ErrorKind::IncompatibleTypes, "'" + name + "' has an infinite lower bound");
    std::uint64_t top = hi.infinite ? lo.value + kMaxInputChoices - 1 : hi.value;
    top = std::min(top, lo.value + kMaxInputChoices - 1);
    std::vector<std::map<std::string, std::uint64_t>> next;
    for (const auto& m : out) {
      for (std::uint64_t v = lo.value; v <= top; ++v) {
        auto n = m;
        n[name] = v;
        next.push_back(std::move(n));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

SoundnessReport run_soundness(const DerivationScript& script, const Process& process,
                              const std::vector<Valuation>& valuations, std::size_t fuel, const CheckConfig& config) {
  SoundnessReport report;
  try {
    report.bound = check_derivation(script, process, config).complexity;
    report.accepted = true;
  } catch (const Error& e) {
    report.error = e.what();
    return report;
  }
  for (const auto& [name, t] : script.context) {
    if (type_reliable(script.indices, script.constraints, t, config.usage).outcome != Outcome::Proven) {
      report.unreliable.push_back(name);
    }
  }
  bool has_integers = false;
  for (const auto& [name, t] : script.context) has_integers = has_integers || t.is_nat();

  for (const auto& rho : valuations) {
    for (const auto& inputs : input_choices(script.context, rho)) {
      std::map<std::string, Expr> sub;
      for (const auto& [name, v] : inputs) sub.emplace(name, Expr::numeral(v));
      Process closed = sub.empty() ? process : substitute(process, sub);
      SpanResult span = global_span(closed, fuel, *config.registry);
      SoundnessRun run;
      run.valuation = rho;
      run.inputs = inputs;
      run.span = span.value;
      run.exact = span.exact;
      run.states = span.states_explored;
      run.lower = eval_index(report.bound.lo, rho);
      run.upper = eval_index(report.bound.hi, rho);
      run.upper_ok = Extended::of(span.value) <= run.upper;
      run.lower_checked = !has_integers && span.exact;
      run.lower_ok = !run.lower_checked || run.lower <= Extended::of(span.value);
      report.runs.push_back(std::move(run));
    }
  }
  return report;
}

}  // namespace pispan
