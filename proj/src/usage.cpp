#include "pispan/usage.hpp"

#include <algorithm>
#include <functional>

#include "pispan/lexer.hpp"

namespace pispan {

std::string Interval::str() const { return "[" + lo.str() + ", " + hi.str() + "]"; }

std::string Capacity::str() const {
  return upper_only ? "<" + hi.str() + ">" : "[" + lo.str() + ", " + hi.str() + "]";
}

Interval iplus(const Interval& a, const Capacity& c) {
  if (c.upper_only) return {Index::constant(0), Index::add(a.lo, c.hi)};
  return {Index::add(a.hi, c.lo), Index::add(a.lo, c.hi)};
}

Interval ilub(const Interval& a, const Interval& b) { return {Index::max(a.lo, b.lo), Index::max(a.hi, b.hi)}; }

Interval add(const Interval& a, const Interval& b) { return {Index::add(a.lo, b.lo), Index::add(a.hi, b.hi)}; }

Interval add(const Interval& a, const Capacity& c) {
  if (c.upper_only) return {a.lo, Index::add(a.hi, c.hi)};
  return add(a, Interval{c.lo, c.hi});
}

Interval seq_complexity(const Capacity& c, const Interval& k) {
  if (!c.upper_only && c.lo.is_infinity() && c.hi.is_infinity()) return Interval::zero();
  return {Index::constant(0), Index::add(c.hi, k.hi)};
}

ConstraintSet included(const Interval& inner, const Interval& outer) {
  return {Constraint::le(outer.lo, inner.lo), Constraint::le(inner.hi, outer.hi)};
}

std::optional<ConstraintSet> capacity_le(const Capacity& small, const Capacity& large) {
  if (small.upper_only && !large.upper_only) return std::nullopt;
  ConstraintSet cs{Constraint::le(small.hi, large.hi)};
  if (!small.upper_only) cs.push_back(Constraint::le(large.lo, small.lo));
  return cs;
}

Usage Usage::par(Usage a, Usage b) {
  Usage u;
  u.kind_ = Kind::Par;
  u.children_ = {std::move(a), std::move(b)};
  return u;
}

Usage Usage::par_all(std::vector<Usage> parts) {
  if (parts.empty()) return zero();
  Usage acc = std::move(parts.front());
  for (std::size_t k = 1; k < parts.size(); ++k) acc = par(std::move(acc), std::move(parts[k]));
  return acc;
}

Usage Usage::action(Kind direction, Interval obligation, Capacity capacity, Usage cont) {
  Usage u;
  u.kind_ = direction;
  u.obligation_ = std::move(obligation);
  u.capacity_ = std::move(capacity);
  u.children_ = {std::move(cont)};
  return u;
}

Usage Usage::in(Interval obligation, Capacity capacity, Usage cont) {
  return action(Kind::In, std::move(obligation), std::move(capacity), std::move(cont));
}

Usage Usage::out(Interval obligation, Capacity capacity, Usage cont) {
  return action(Kind::Out, std::move(obligation), std::move(capacity), std::move(cont));
}

Usage Usage::bang(Usage b) {
  Usage u;
  u.kind_ = Kind::Bang;
  u.children_ = {std::move(b)};
  return u;
}

Usage Usage::choice(Usage a, Usage b) {
  Usage u;
  u.kind_ = Kind::Choice;
  u.children_ = {std::move(a), std::move(b)};
  return u;
}

namespace {

std::string atom_str(const Usage& u) {
  bool wrap = u.kind() == Usage::Kind::Par || u.kind() == Usage::Kind::Choice;
  return wrap ? "(" + u.str() + ")" : u.str();
}

}  // namespace

std::string Usage::str() const {
  switch (kind_) {
    case Kind::Zero: return "0";
    case Kind::Par: {
      const Usage& r = right();
      return left().str() + " | " + (r.kind() == Kind::Par ? "(" + r.str() + ")" : r.str());
    }
    case Kind::Choice: {
      auto side = [](const Usage& u, bool right) {
        bool wrap = u.kind() == Kind::Par || (right && u.kind() == Kind::Choice);
        return wrap ? "(" + u.str() + ")" : u.str();
      };
      return side(left(), false) + " + " + side(right(), true);
    }
    case Kind::In:
    case Kind::Out: {
      std::string s = (kind_ == Kind::In ? "In" : "Out") + obligation_.str() + capacity_.str();
      if (cont().kind() != Kind::Zero) s += "." + atom_str(cont());
      return s;
    }
    case Kind::Bang: return "!" + atom_str(cont());
  }
  return "?";
}

namespace {

Usage map_obligations(const Usage& u, const std::function<Interval(const Interval&)>& f) {
  switch (u.kind()) {
    case Usage::Kind::Zero: return u;
    case Usage::Kind::Par: return Usage::par(map_obligations(u.left(), f), map_obligations(u.right(), f));
    case Usage::Kind::Choice: return Usage::choice(map_obligations(u.left(), f), map_obligations(u.right(), f));
    case Usage::Kind::Bang: return Usage::bang(map_obligations(u.cont(), f));
    case Usage::Kind::In:
    case Usage::Kind::Out: return Usage::action(u.kind(), f(u.obligation()), u.capacity(), u.cont());
  }
  return u;
}

}  // namespace

Usage delay(const Interval& a, const Usage& u) {
  return map_obligations(u, [&](const Interval& b) { return add(a, b); });
}

Usage delay(const Capacity& c, const Usage& u) {
  if (!c.upper_only) return delay(Interval{c.lo, c.hi}, u);
  return map_obligations(u, [&](const Interval& b) { return Interval{b.lo, Index::add(b.hi, c.hi)}; });
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

void collect(const Usage& u, std::vector<Usage>& out);

std::vector<Usage> finish(std::vector<Usage> comps) {
  std::sort(comps.begin(), comps.end(), [](const Usage& a, const Usage& b) { return a.str() < b.str(); });
  std::vector<std::string> banged;
  for (const auto& c : comps) {
    if (c.kind() == Usage::Kind::Bang) banged.push_back(c.cont().str());
  }
  std::vector<Usage> out;
  for (auto& c : comps) {
    if (c.kind() == Usage::Kind::Bang) {
      if (!out.empty() && out.back() == c) continue;
    } else if (std::find(banged.begin(), banged.end(), c.str()) != banged.end()) {
      continue;  // U | !U == !U
    }
    out.push_back(std::move(c));
  }
  return out;
}

void collect(const Usage& u, std::vector<Usage>& out) {
  switch (u.kind()) {
    case Usage::Kind::Zero: return;
    case Usage::Kind::Par:
      collect(u.left(), out);
      collect(u.right(), out);
      return;
    case Usage::Kind::In:
    case Usage::Kind::Out:
      out.push_back(Usage::action(u.kind(), u.obligation(), u.capacity(), normalize(u.cont())));
      return;
    case Usage::Kind::Choice: out.push_back(Usage::choice(normalize(u.left()), normalize(u.right()))); return;
    case Usage::Kind::Bang: {
      std::vector<Usage> inner;
      collect(u.cont(), inner);
      for (auto& c : inner) out.push_back(c.kind() == Usage::Kind::Bang ? std::move(c) : Usage::bang(std::move(c)));
      return;
    }
  }
}

}  // namespace

std::vector<Usage> components(const Usage& u) {
  std::vector<Usage> comps;
  collect(u, comps);
  return finish(std::move(comps));
}

Usage normalize(const Usage& u) { return Usage::par_all(components(u)); }

bool usage_congruent(const Usage& u, const Usage& v) { return normalize(u).str() == normalize(v).str(); }

namespace {

class EquivChecker {
 public:
  EquivChecker(const VarSet& phi, const ConstraintSet& assumptions, const EntailConfig& config)
      : phi_(phi), assumptions_(assumptions), config_(config) {}

  // Both arguments are in normal form.
  Verdict eq(const Usage& a, const Usage& b) {
    if (a.str() == b.str()) return Verdict::proven();
    if (a.kind() != b.kind()) return Verdict::refuted(std::nullopt, "shape differs");
    switch (a.kind()) {
      case Usage::Kind::Zero: return Verdict::proven();
      case Usage::Kind::Bang: return eq(a.cont(), b.cont());
      case Usage::Kind::Choice: return conjoin(eq(a.left(), b.left()), eq(a.right(), b.right()));
      case Usage::Kind::In:
      case Usage::Kind::Out: {
        if (a.capacity().upper_only != b.capacity().upper_only) return Verdict::refuted(std::nullopt, "capacity form");
        ConstraintSet goals{Constraint::eq(a.obligation().lo, b.obligation().lo),
                            Constraint::eq(a.obligation().hi, b.obligation().hi),
                            Constraint::eq(a.capacity().hi, b.capacity().hi)};
        if (!a.capacity().upper_only) goals.push_back(Constraint::eq(a.capacity().lo, b.capacity().lo));
        Verdict v = entails_all(phi_, assumptions_, goals, config_);
        if (!v.is_proven()) return v;
        return eq(a.cont(), b.cont());
      }
      case Usage::Kind::Par: return eq_multiset(components(a), components(b));
    }
    return Verdict::unknown();
  }

  Verdict eq_multiset(const std::vector<Usage>& as, const std::vector<Usage>& bs) {
    if (as.size() != bs.size()) return Verdict::refuted(std::nullopt, "component count differs");
    std::vector<bool> used(bs.size(), false);
    bool unknown = false;
    std::function<bool(std::size_t)> go = [&](std::size_t k) {
      if (k == as.size()) return true;
      for (std::size_t m = 0; m < bs.size(); ++m) {
        if (used[m]) continue;
        Verdict v = eq(as[k], bs[m]);
        if (v.is_unknown()) unknown = true;
        if (!v.is_proven()) continue;
        used[m] = true;
        if (go(k + 1)) return true;
        used[m] = false;
      }
      return false;
    };
    if (go(0)) return Verdict::proven();
    return unknown ? Verdict::unknown("component equality undecided") : Verdict::refuted(std::nullopt, "no matching");
  }

 private:
  const VarSet& phi_;
  const ConstraintSet& assumptions_;
  const EntailConfig& config_;
};

}  // namespace

Verdict usage_equiv(const VarSet& phi, const ConstraintSet& assumptions, const Usage& u, const Usage& v,
                    const EntailConfig& config) {
  return EquivChecker(phi, assumptions, config).eq(normalize(u), normalize(v));
}

void free_index_vars(const Usage& u, VarSet& out) {
  if (u.is_action()) {
    free_index_vars(u.obligation().lo, out);
    free_index_vars(u.obligation().hi, out);
    if (!u.capacity().upper_only) free_index_vars(u.capacity().lo, out);
    free_index_vars(u.capacity().hi, out);
  }
  for (const auto& c : u.children()) free_index_vars(c, out);
}

Usage subst_usage(const Usage& u, const std::map<std::string, Index>& r) {
  switch (u.kind()) {
    case Usage::Kind::Zero: return u;
    case Usage::Kind::Par: return Usage::par(subst_usage(u.left(), r), subst_usage(u.right(), r));
    case Usage::Kind::Choice: return Usage::choice(subst_usage(u.left(), r), subst_usage(u.right(), r));
    case Usage::Kind::Bang: return Usage::bang(subst_usage(u.cont(), r));
    case Usage::Kind::In:
    case Usage::Kind::Out: {
      Interval ob{subst_index(u.obligation().lo, r), subst_index(u.obligation().hi, r)};
      Capacity cap = u.capacity();
      cap.lo = subst_index(cap.lo, r);
      cap.hi = subst_index(cap.hi, r);
      return Usage::action(u.kind(), std::move(ob), std::move(cap), subst_usage(u.cont(), r));
    }
  }
  return u;
}

// ---------------------------------------------------------------------------
// Parsing

Interval parse_interval(Cursor& c) {
  c.expect("[");
  Index lo = parse_index(c);
  c.expect(",");
  Index hi = parse_index(c);
  c.expect("]");
  return {std::move(lo), std::move(hi)};
}

Capacity parse_capacity(Cursor& c) {
  if (c.accept("<")) {
    Index j = parse_index(c);
    c.expect(">");
    return Capacity::upper(std::move(j));
  }
  Interval i = parse_interval(c);
  return Capacity::interval(std::move(i.lo), std::move(i.hi));
}

namespace {

Usage parse_par(Cursor& c);

Usage parse_prefix(Cursor& c) {
  if (c.accept("(")) {
    Usage u = parse_par(c);
    c.expect(")");
    return u;
  }
  if (c.accept("!")) return Usage::bang(parse_prefix(c));
  if (c.accept("0")) return Usage::zero();
  Usage::Kind dir;
  if (c.accept_keyword("In")) {
    dir = Usage::Kind::In;
  } else if (c.accept_keyword("Out")) {
    dir = Usage::Kind::Out;
  } else {
    c.fail("expected usage");
  }
  Interval ob = parse_interval(c);
  Capacity cap = parse_capacity(c);
  Usage cont = c.accept(".") ? parse_prefix(c) : Usage::zero();
  return Usage::action(dir, std::move(ob), std::move(cap), std::move(cont));
}

Usage parse_choice(Cursor& c) {
  Usage acc = parse_prefix(c);
  while (c.accept("+")) acc = Usage::choice(std::move(acc), parse_prefix(c));
  return acc;
}

Usage parse_par(Cursor& c) {
  Usage acc = parse_choice(c);
  while (c.accept("|")) acc = Usage::par(std::move(acc), parse_choice(c));
  return acc;
}

}  // namespace

Usage parse_usage(Cursor& c) { return parse_par(c); }

Usage parse_usage(const std::string& text) {
  Cursor c(text);
  Usage u = parse_par(c);
  if (!c.at_end()) c.fail("unexpected input after usage");
  return u;
}

}  // namespace pispan
