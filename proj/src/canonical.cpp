#include "pispan/canonical.hpp"

#include <algorithm>
#include <map>

namespace pispan {

std::string Thread::str() const {
  return std::to_string(weight) + " : " + (guard.kind() == Process::Kind::Par ? "(" + guard.str() + ")" : guard.str());
}

Process CanonicalForm::embed() const {
  std::vector<Process> parts;
  for (const auto& t : threads) parts.push_back(t.weight == 0 ? t.guard : Process::annot(t.weight, t.guard));
  Process p = Process::par_all(std::move(parts));
  for (auto it = bound.rbegin(); it != bound.rend(); ++it) p = Process::restrict(*it, std::move(p));
  return p;
}

std::uint64_t CanonicalForm::max_weight() const {
  std::uint64_t m = 0;
  for (const auto& t : threads) m = std::max(m, t.weight);
  return m;
}

namespace {

constexpr std::size_t kMaxPermutations = 720;

CanonicalForm canonicalize_at(const Process& p, unsigned depth);

Process canonical_body(const Process& body, unsigned depth) { return canonicalize_at(body, depth).embed(); }

Process canonical_guard(const Process& g, unsigned depth) {
  using K = Process::Kind;
  const std::string prefix = "$" + std::to_string(depth) + ".";
  switch (g.kind()) {
    case K::Input:
    case K::ReplInput: {
      std::vector<std::string> params;
      std::map<std::string, Expr> renaming;
      for (std::size_t k = 0; k < g.params().size(); ++k) {
        params.push_back(prefix + std::to_string(k));
        renaming.emplace(g.params()[k], Expr::var(params.back()));
      }
      Process body = canonical_body(substitute(g.body(), renaming), depth + 1);
      return g.kind() == K::Input ? Process::input(g.name(), std::move(params), std::move(body))
                                  : Process::repl_input(g.name(), std::move(params), std::move(body));
    }
    case K::Output: return Process::output(g.name(), g.args(), canonical_body(g.body(), depth + 1));
    case K::Tick: return Process::tick(canonical_body(g.body(), depth + 1));
    case K::Match: {
      std::string binder = prefix + "0";
      Process succ = substitute(g.children()[1], {{g.name(), Expr::var(binder)}});
      return Process::match(g.scrutinee(), canonical_body(g.children()[0], depth + 1), binder,
                            canonical_body(succ, depth + 1));
    }
    default: return g;
  }
}

struct Flattener {
  unsigned depth;
  std::vector<std::string> temps;
  std::vector<Thread> threads;

  void run(const Process& p, std::uint64_t w) {
    using K = Process::Kind;
    switch (p.kind()) {
      case K::Nil:
        if (w > 0) threads.push_back({w, Process::nil()});
        return;
      case K::Par:
        run(p.left(), w);
        run(p.right(), w);
        return;
      case K::Annot: run(p.body(), w + p.weight()); return;
      case K::New: {
        std::string temp = "?" + std::to_string(depth) + "." + std::to_string(temps.size());
        temps.push_back(temp);
        run(substitute(p.body(), {{p.name(), Expr::var(temp)}}), w);
        return;
      }
      default: threads.push_back({w, canonical_guard(p, depth)}); return;
    }
  }
};

std::vector<std::string> sorted_strings(const std::vector<Thread>& threads, const std::map<std::string, Expr>& renaming) {
  std::vector<std::string> out;
  out.reserve(threads.size());
  for (const auto& t : threads) out.push_back(Thread{t.weight, substitute(t.guard, renaming)}.str());
  std::sort(out.begin(), out.end());
  return out;
}

CanonicalForm canonicalize_at(const Process& p, unsigned depth) {
  Flattener f{depth, {}, {}};
  f.run(p, 0);

  // A residue m:0 is absorbed by any thread n:G with n >= m, since
  // n:G | m:0 == m:((n-m):G | 0) == n:G. At most one residue survives.
  std::uint64_t busiest = 0;
  for (const auto& t : f.threads)
    if (t.guard.kind() != Process::Kind::Nil) busiest = std::max(busiest, t.weight);
  std::vector<Thread> threads;
  const Thread* residue = nullptr;
  for (auto& t : f.threads) {
    if (t.guard.kind() != Process::Kind::Nil) {
      threads.push_back(std::move(t));
    } else if (t.weight > busiest && (!residue || t.weight > residue->weight)) {
      residue = &t;
    }
  }
  if (residue) threads.push_back(*residue);

  const auto& temps = f.temps;
  std::vector<std::vector<std::string>> signature(temps.size());
  for (std::size_t k = 0; k < temps.size(); ++k) {
    std::map<std::string, Expr> anon;
    for (std::size_t m = 0; m < temps.size(); ++m) anon.emplace(temps[m], Expr::var(m == k ? "@" : "_"));
    for (const auto& t : threads) {
      if (!free_names(t.guard).contains(temps[k])) continue;
      signature[k].push_back(Thread{t.weight, substitute(t.guard, anon)}.str());
    }
    std::sort(signature[k].begin(), signature[k].end());
  }

  std::vector<std::size_t> order(temps.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return signature[a] < signature[b]; });

  // Tie classes of equal signature; their internal order is decided by
  // trying every permutation when the product of class sizes is small.
  std::vector<std::pair<std::size_t, std::size_t>> classes;
  std::size_t permutations = 1;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t e = k + 1;
    while (e < order.size() && signature[order[e]] == signature[order[k]]) ++e;
    classes.emplace_back(k, e);
    for (std::size_t n = 2; n <= e - k && permutations <= kMaxPermutations; ++n) permutations *= n;
    k = e;
  }

  auto renaming_for = [&](const std::vector<std::size_t>& ord) {
    std::map<std::string, Expr> r;
    for (std::size_t pos = 0; pos < ord.size(); ++pos) {
      r.emplace(temps[ord[pos]], Expr::var("%" + std::to_string(depth) + "." + std::to_string(pos)));
    }
    return r;
  };

  std::vector<std::size_t> best = order;
  if (permutations > 1 && permutations <= kMaxPermutations) {
    std::vector<std::string> best_strings = sorted_strings(threads, renaming_for(best));
    std::vector<std::size_t> current = order;
    // Odometer over the classes' permutations.
    for (auto& [b, e] : classes) std::sort(current.begin() + b, current.begin() + e);
    while (true) {
      std::vector<std::string> s = sorted_strings(threads, renaming_for(current));
      if (s < best_strings) {
        best_strings = std::move(s);
        best = current;
      }
      std::size_t c = 0;
      for (; c < classes.size(); ++c) {
        auto [b, e] = classes[c];
        if (std::next_permutation(current.begin() + b, current.begin() + e)) break;
      }
      if (c == classes.size()) break;
    }
  }

  auto renaming = renaming_for(best);
  CanonicalForm form;
  for (std::size_t pos = 0; pos < best.size(); ++pos) form.bound.push_back(renaming.at(temps[best[pos]]).name());
  for (const auto& t : threads) form.threads.push_back({t.weight, substitute(t.guard, renaming)});
  std::sort(form.threads.begin(), form.threads.end(),
            [](const Thread& a, const Thread& b) { return a.str() < b.str(); });
  form.key = form.embed().str();
  return form;
}

}  // namespace

CanonicalForm canonicalize(const Process& p) { return canonicalize_at(p, 0); }

bool congruent(const Process& p, const Process& q) { return canonicalize(p) == canonicalize(q); }

}  // namespace pispan
