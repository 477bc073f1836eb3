#include "pispan/semantics.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <unordered_set>

#include "pispan/error.hpp"

namespace pispan {

std::uint64_t eval_expr(const Expr& e, const FunctionRegistry& registry) {
  switch (e.kind()) {
    case Expr::Kind::Zero: return 0;
    case Expr::Kind::Succ: return eval_expr(e.inner(), registry) + 1;
    case Expr::Kind::Var: throw Error(ErrorKind::OpenExpression, "free name '" + e.name() + "' in expression");
    case Expr::Kind::FnApp: {
      const FunctionSymbol* fn = registry.find(e.name());
      if (fn == nullptr) throw Error(ErrorKind::UnknownSymbol, e.name());
      std::vector<std::uint64_t> values;
      for (const auto& a : e.args()) values.push_back(eval_expr(a, registry));
      return fn->eval(values);
    }
  }
  return 0;
}

namespace {

// Which branch a match takes, with the predecessor to bind in the successor
// branch. nullopt when the scrutinee is not a closed value.
std::optional<std::optional<Expr>> match_branch(const Expr& scrutinee, const FunctionRegistry& registry) {
  if (scrutinee.kind() == Expr::Kind::Zero) return std::optional<Expr>{};
  if (scrutinee.kind() == Expr::Kind::Succ) return std::optional<Expr>{scrutinee.inner()};
  try {
    std::uint64_t v = eval_expr(scrutinee, registry);
    if (v == 0) return std::optional<Expr>{};
    return std::optional<Expr>{Expr::numeral(v - 1)};
  } catch (const Error&) {
    return std::nullopt;
  }
}

class Stepper {
 public:
  Stepper(const CanonicalForm& form, StepMode mode, const FunctionRegistry& registry, bool collapse)
      : form_(form), mode_(mode), registry_(registry), collapse_(collapse) {}

  std::vector<CanonicalForm> run() {
    const auto& ts = form_.threads;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const Process& g = ts[i].guard;
      const std::uint64_t w = ts[i].weight;
      switch (g.kind()) {
        case Process::Kind::Tick:
          if (mode_ == StepMode::Annotated) emit({i}, {Thread{w + 1, g.body()}});
          break;
        case Process::Kind::Match: {
          auto branch = match_branch(g.scrutinee(), registry_);
          if (!branch) break;
          if (!*branch) {
            emit({i}, {Thread{w, g.children()[0]}});
          } else {
            emit({i}, {Thread{w, substitute(g.children()[1], {{g.name(), **branch}})}});
          }
          break;
        }
        case Process::Kind::Input:
        case Process::Kind::ReplInput:
          for (std::size_t j = 0; j < ts.size(); ++j) {
            const Process& o = ts[j].guard;
            if (o.kind() != Process::Kind::Output || o.name() != g.name() || o.args().size() != g.params().size()) {
              continue;
            }
            Process received;
            try {
              received = substitute(g.body(), g.params(), o.args());
            } catch (const Error&) {
              continue;  // ill-formed substitution: the pair cannot communicate
            }
            std::uint64_t m = std::max(w, ts[j].weight);
            std::vector<Thread> fresh{Thread{m, Process::par(std::move(received), o.body())}};
            if (g.kind() == Process::Kind::ReplInput) {
              emit({j}, std::move(fresh));
            } else {
              emit({i, j}, std::move(fresh));
            }
          }
          break;
        default: break;
      }
    }
    return std::move(out_);
  }

 private:
  void emit(std::vector<std::size_t> consumed, std::vector<Thread> added) {
    std::vector<Thread> threads;
    for (std::size_t k = 0; k < form_.threads.size(); ++k) {
      if (std::find(consumed.begin(), consumed.end(), k) == consumed.end()) threads.push_back(form_.threads[k]);
    }
    for (auto& t : added) threads.push_back(std::move(t));

    std::vector<std::string> bound = form_.bound;
    if (collapse_) {
      // Residue threads never change again; only the largest one can matter.
      std::uint64_t residue = 0;
      bool any = false;
      std::vector<Thread> kept;
      for (auto& t : threads) {
        if (t.guard.kind() == Process::Kind::Nil) {
          residue = std::max(residue, t.weight);
          any = true;
        } else {
          kept.push_back(std::move(t));
        }
      }
      if (any) kept.push_back({residue, Process::nil()});
      threads = std::move(kept);
      std::set<std::string> used;
      for (const auto& t : threads) free_names(t.guard, used);
      std::erase_if(bound, [&](const std::string& b) { return !used.contains(b); });
    }

    std::vector<Process> parts;
    for (auto& t : threads) parts.push_back(t.weight == 0 ? std::move(t.guard) : Process::annot(t.weight, std::move(t.guard)));
    Process p = Process::par_all(std::move(parts));
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) p = Process::restrict(*it, std::move(p));
    CanonicalForm next = canonicalize(p);
    if (seen_.insert(next.key).second) out_.push_back(std::move(next));
  }

  const CanonicalForm& form_;
  StepMode mode_;
  const FunctionRegistry& registry_;
  bool collapse_;
  std::unordered_set<std::string> seen_;
  std::vector<CanonicalForm> out_;
};

}  // namespace

std::vector<CanonicalForm> successors(const CanonicalForm& form, StepMode mode, const FunctionRegistry& registry) {
  return Stepper(form, mode, registry, false).run();
}

std::vector<CanonicalForm> standard_step(const Process& p) {
  return successors(canonicalize(p), StepMode::Standard);
}

std::vector<CanonicalForm> annotated_step(const Process& p) {
  return successors(canonicalize(p), StepMode::Annotated);
}

std::uint64_t local_complexity(const Process& p) { return canonicalize(p).max_weight(); }

SpanResult global_span(const Process& p, std::size_t fuel, const FunctionRegistry& registry) {
  SpanResult result;
  CanonicalForm start = canonicalize(p);
  std::unordered_set<std::string> visited{start.key};
  std::deque<CanonicalForm> frontier{start};
  result.value = start.max_weight();
  while (!frontier.empty()) {
    CanonicalForm current = std::move(frontier.front());
    frontier.pop_front();
    for (auto& next : Stepper(current, StepMode::Annotated, registry, true).run()) {
      if (visited.contains(next.key)) continue;
      if (visited.size() >= fuel) {
        result.states_explored = visited.size();
        return result;
      }
      visited.insert(next.key);
      result.value = std::max(result.value, next.max_weight());
      frontier.push_back(std::move(next));
    }
  }
  result.exact = true;
  result.states_explored = visited.size();
  return result;
}

}  // namespace pispan
