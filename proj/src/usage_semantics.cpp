#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "pispan/usage.hpp"

namespace pispan {

namespace {

struct Atom {
  std::size_t component;
  bool banged;
  const Usage* action;
};

std::string witness_str(const std::optional<Valuation>& w) {
  if (!w || w->empty()) return "";
  std::string s = " at {";
  bool first = true;
  for (const auto& [k, v] : *w) {
    s += (first ? "" : ", ") + k + "=" + std::to_string(v);
    first = false;
  }
  return s + "}";
}

}  // namespace

std::vector<UsageStep> usage_step(const VarSet& phi, const ConstraintSet& assumptions, const Usage& u,
                                  const UsageConfig& config) {
  std::vector<Usage> comps = components(u);
  std::vector<UsageStep> out;
  std::set<std::string> seen;

  auto rest_without = [&](std::vector<std::size_t> consumed) {
    std::vector<Usage> rest;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      if (std::find(consumed.begin(), consumed.end(), k) == consumed.end()) rest.push_back(comps[k]);
    }
    return rest;
  };
  auto push_next = [&](std::vector<Usage> parts, bool used_bang) {
    Usage next = normalize(Usage::par_all(std::move(parts)));
    if (seen.insert(next.str()).second) out.push_back({UsageStep::Kind::Next, std::move(next), used_bang, {}});
  };

  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const Usage& c = comps[k];
    if (c.kind() == Usage::Kind::Choice) {
      for (const Usage* branch : {&c.left(), &c.right()}) {
        auto parts = rest_without({k});
        parts.push_back(*branch);
        push_next(std::move(parts), false);
      }
    } else if (c.kind() == Usage::Kind::Bang && c.cont().kind() == Usage::Kind::Choice) {
      for (const Usage* branch : {&c.cont().left(), &c.cont().right()}) {
        auto parts = comps;
        parts.push_back(*branch);
        push_next(std::move(parts), true);
      }
    } else if (c.is_action()) {
      atoms.push_back({k, false, &c});
    } else if (c.kind() == Usage::Kind::Bang && c.cont().is_action()) {
      atoms.push_back({k, true, &c.cont()});
    }
  }

  for (const Atom& in : atoms) {
    if (in.action->kind() != Usage::Kind::In) continue;
    for (const Atom& o : atoms) {
      if (o.action->kind() != Usage::Kind::Out) continue;
      const Interval& a = in.action->obligation();
      const Interval& b = o.action->obligation();
      ConstraintSet goals = included(b, iplus(a, in.action->capacity()));
      for (auto& g : included(a, iplus(b, o.action->capacity()))) goals.push_back(std::move(g));
      Verdict v = entails_all(phi, assumptions, goals, config.entail);
      std::string pair = in.action->str() + " with " + o.action->str();
      if (v.is_refuted()) {
        out.push_back({UsageStep::Kind::Error, Usage::zero(), in.banged || o.banged,
                       "timing mismatch between " + pair + witness_str(v.witness)});
        continue;
      }
      if (v.is_unknown()) {
        out.push_back({UsageStep::Kind::Blocked, Usage::zero(), in.banged || o.banged,
                       "undecided side condition for " + pair});
        continue;
      }
      std::vector<std::size_t> consumed;
      if (!in.banged) consumed.push_back(in.component);
      if (!o.banged) consumed.push_back(o.component);
      auto parts = rest_without(consumed);
      parts.push_back(delay(ilub(a, b), Usage::par(in.action->cont(), o.action->cont())));
      // Only a replicated copy that leaves a continuation behind can feed
      // unbounded exploration; consuming one against a plain partner cannot.
      bool generative = (in.banged && in.action->cont().kind() != Usage::Kind::Zero) ||
                        (o.banged && o.action->cont().kind() != Usage::Kind::Zero);
      push_next(std::move(parts), generative);
    }
  }
  return out;
}

Reliability reliable(const VarSet& phi, const ConstraintSet& assumptions, const Usage& u, const UsageConfig& config) {
  Reliability result;
  Usage start = normalize(u);
  std::map<std::string, unsigned> uses{{start.str(), 0}};
  std::map<std::string, std::string> parent;
  std::deque<std::pair<Usage, unsigned>> frontier{{start, 0}};
  bool truncated = false;
  std::string blocked;

  auto trace_to = [&](const std::string& key) {
    std::vector<std::string> rev{key};
    for (auto it = parent.find(key); it != parent.end(); it = parent.find(it->second)) rev.push_back(it->second);
    return std::vector<std::string>(rev.rbegin(), rev.rend());
  };

  while (!frontier.empty()) {
    auto [current, n] = std::move(frontier.front());
    frontier.pop_front();
    const std::string key = current.str();
    if (uses.at(key) < n) continue;  // superseded by a cheaper path
    for (auto& step : usage_step(phi, assumptions, current, config)) {
      if (step.kind == UsageStep::Kind::Error) {
        result.outcome = Outcome::Refuted;
        result.trace = trace_to(key);
        result.trace.push_back("Error");
        result.states = uses.size();
        result.note = step.note;
        return result;
      }
      if (step.kind == UsageStep::Kind::Blocked) {
        if (blocked.empty()) blocked = step.note;
        continue;
      }
      unsigned next_uses = n + (step.used_bang ? 1 : 0);
      std::string next_key = step.next.str();
      auto it = uses.find(next_key);
      if (it != uses.end() && it->second <= next_uses) continue;
      if (next_uses > config.unfold || (it == uses.end() && uses.size() >= config.fuel)) {
        if (it == uses.end()) truncated = true;
        continue;
      }
      uses[next_key] = next_uses;
      if (it == uses.end()) parent[next_key] = key;
      frontier.emplace_back(std::move(step.next), next_uses);
    }
  }
  result.states = uses.size();
  if (!blocked.empty()) {
    result.note = blocked;
  } else if (truncated) {
    result.note = "exploration bound reached (raise --unfold or --fuel)";
  } else {
    result.outcome = Outcome::Proven;
  }
  return result;
}

}  // namespace pispan
