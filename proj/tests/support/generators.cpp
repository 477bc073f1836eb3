#include "generators.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace pispan::testing {

Index gen_index(Rng& rng, const std::vector<std::string>& vars, unsigned depth) {
  if (depth == 0 || rng.chance(0.35)) {
    if (!vars.empty() && rng.chance(0.6)) return Index::var(rng.pick(vars));
    return Index::constant(rng.below(4));
  }
  Index a = gen_index(rng, vars, depth - 1);
  Index b = gen_index(rng, vars, depth - 1);
  switch (rng.below(6)) {
    case 0: return Index::add(a, b);
    case 1: return Index::mul(a, b);
    case 2: return Index::sub(a, b);
    case 3: return Index::max(a, b);
    case 4: return Index::min(a, b);
    default: return Index::fact(Index::min(a, Index::constant(5)));
  }
}

namespace {

Process gen_guarded(Rng& rng, unsigned depth, bool annotations) {
  auto body = [&] { return gen_process(rng, depth - 1, annotations); };
  static const std::vector<std::string> chans{"a", "b"};
  switch (rng.below(6)) {
    case 0: return Process::tick(depth ? body() : Process::nil());
    case 1: return Process::input(rng.pick(chans), {}, depth ? body() : Process::nil());
    case 2: return Process::output(rng.pick(chans), {}, depth ? body() : Process::nil());
    case 3: return Process::output("c", {Expr::numeral(rng.below(3))}, depth ? body() : Process::nil());
    case 4: {
      Process zero = depth ? body() : Process::nil();
      Process succ = depth ? body() : Process::tick(Process::nil());
      return Process::input("c", {"x"}, Process::match(Expr::var("x"), zero, "y", succ));
    }
    default: {
      Process inner = rng.chance(0.5) ? Process::tick(Process::nil()) : Process::nil();
      return Process::repl_input(rng.pick(chans), {}, inner);
    }
  }
}

}  // namespace

Process gen_process(Rng& rng, unsigned depth, bool annotations) {
  if (depth == 0) return rng.chance(0.3) ? Process::nil() : gen_guarded(rng, 0, annotations);
  switch (rng.below(8)) {
    case 0: return Process::nil();
    case 1:
    case 2: return Process::par(gen_process(rng, depth - 1, annotations), gen_process(rng, depth - 1, annotations));
    case 3: {
      static const std::vector<std::string> names{"a", "b"};
      return Process::restrict(rng.pick(names), gen_process(rng, depth - 1, annotations));
    }
    case 4:
      if (annotations) return Process::annot(rng.range(1, 3), gen_process(rng, depth - 1, annotations));
      [[fallthrough]];
    default: return gen_guarded(rng, depth - 1, annotations);
  }
}

namespace {

void flatten(const Process& p, std::vector<Process>& out) {
  if (p.kind() == Process::Kind::Par) {
    flatten(p.left(), out);
    flatten(p.right(), out);
  } else {
    out.push_back(p);
  }
}

std::string fresh_name(const Process& p, const std::string& base) {
  std::set<std::string> used = free_names(p);
  std::function<void(const Process&)> collect = [&](const Process& q) {
    if (!q.name().empty()) used.insert(q.name());
    for (const auto& x : q.params()) used.insert(x);
    for (const auto& c : q.children()) collect(c);
  };
  collect(p);
  std::string name = base;
  for (unsigned k = 0; used.count(name); ++k) name = base + std::to_string(k);
  return name;
}

}  // namespace

Process shuffle_congruent(Rng& rng, const Process& p) {
  switch (p.kind()) {
    case Process::Kind::Par: {
      std::vector<Process> parts;
      flatten(p, parts);
      for (auto& q : parts) q = shuffle_congruent(rng, q);
      std::shuffle(parts.begin(), parts.end(), rng.engine());
      if (rng.chance(0.3)) parts.push_back(Process::nil());
      // Random bracketing.
      while (parts.size() > 1) {
        std::size_t k = rng.below(parts.size() - 1);
        parts[k] = Process::par(parts[k], parts[k + 1]);
        parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      }
      return parts.front();
    }
    case Process::Kind::New: {
      Process body = shuffle_congruent(rng, p.body());
      if (rng.chance(0.5)) {
        std::string fresh = fresh_name(p, "z");
        body = substitute(body, std::map<std::string, Expr>{{p.name(), Expr::var(fresh)}});
        return Process::restrict(fresh, body);
      }
      return Process::restrict(p.name(), body);
    }
    case Process::Kind::Annot: {
      Process body = shuffle_congruent(rng, p.body());
      if (body.kind() == Process::Kind::Par && rng.chance(0.5)) {
        return Process::par(Process::annot(p.weight(), body.left()), Process::annot(p.weight(), body.right()));
      }
      if (p.weight() > 1 && rng.chance(0.5)) {
        std::uint64_t k = rng.range(1, p.weight() - 1);
        return Process::annot(k, Process::annot(p.weight() - k, body));
      }
      return Process::annot(p.weight(), body);
    }
    default: return p;
  }
}

Interval gen_interval(Rng& rng, std::uint64_t max) {
  std::uint64_t lo = rng.below(max + 1);
  std::uint64_t hi = lo + (rng.chance(0.6) ? 0 : rng.below(2) + 1);
  return {Index::constant(lo), Index::constant(hi)};
}

Capacity gen_capacity(Rng& rng) {
  switch (rng.below(5)) {
    case 0: return Capacity::upper(Index::infinity());
    case 1:
    case 2: return Capacity::upper(Index::constant(rng.below(4)));
    case 3: {
      Interval i = gen_interval(rng, 2);
      return Capacity::interval(i.lo, i.hi);
    }
    default: return Capacity::interval(Index::infinity(), Index::infinity());
  }
}

namespace {

Usage gen_action(Rng& rng, unsigned depth) {
  Usage::Kind dir = rng.chance(0.5) ? Usage::Kind::In : Usage::Kind::Out;
  Usage cont = depth > 0 && rng.chance(0.4) ? gen_action(rng, depth - 1) : Usage::zero();
  return Usage::action(dir, gen_interval(rng), gen_capacity(rng), cont);
}

}  // namespace

Usage gen_usage(Rng& rng, unsigned width, unsigned depth) {
  std::vector<Usage> parts;
  std::uint64_t n = rng.range(1, width);
  for (std::uint64_t k = 0; k < n; ++k) {
    Usage a = gen_action(rng, depth);
    if (rng.chance(0.1)) a = Usage::bang(a);
    if (rng.chance(0.1)) a = Usage::choice(a, gen_action(rng, depth));
    parts.push_back(std::move(a));
  }
  return Usage::par_all(std::move(parts));
}

Usage coarsen(Rng& rng, const Usage& u) {
  std::vector<Usage> parts = components(u);
  if (parts.empty()) return Usage::zero();
  std::size_t k = rng.below(parts.size());
  Usage& c = parts[k];
  switch (rng.below(4)) {
    case 0:  // drop the component
      parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    case 1:  // narrow the obligation, widen the capacity
      if (c.is_action()) {
        const Interval& a = c.obligation();
        Index lo = a.lo.is_const() && a.hi.is_const() && a.lo.value() < a.hi.value()
                       ? Index::constant(a.lo.value() + 1)
                       : a.lo;
        Capacity cap = c.capacity();
        cap.hi = Index::add(cap.hi, Index::constant(rng.below(2)));
        c = Usage::action(c.kind(), {lo, a.hi}, cap, c.cont());
      }
      break;
    case 2:  // project a choice or unfold a bang
      if (c.kind() == Usage::Kind::Choice) {
        Usage branch = rng.chance(0.5) ? c.left() : c.right();
        c = std::move(branch);
      } else if (c.kind() == Usage::Kind::Bang) {
        Usage copy = c.cont();
        parts.push_back(std::move(copy));
      }
      break;
    default:  // drop a continuation
      if (c.is_action()) c = Usage::action(c.kind(), c.obligation(), c.capacity(), Usage::zero());
      break;
  }
  return Usage::par_all(std::move(parts));
}

Type gen_chan_type(Rng& rng, const std::vector<Type>& payload) {
  return Type::chan(payload, gen_usage(rng, 3, 1));
}

}  // namespace pispan::testing
