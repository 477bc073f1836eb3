// Three-valued entailment phi; Phi |= C.
//
// Proofs go through a polynomial normal form over N: every index is turned
// into an integer polynomial whose atoms are variables or opaque factorial
// terms. Truncated subtraction, max and min are resolved by recursive proof
// or by case splitting on the comparison of their operands. A goal D >= 0 is
// discharged when D minus a non-negative combination of the hypotheses has
// only non-negative coefficients. Refutation is exhaustive valuation search.

#include <algorithm>
#include <functional>
#include <variant>

#include "pispan/error.hpp"
#include "pispan/index.hpp"

namespace pispan {

namespace {

using Monomial = std::vector<std::string>;

struct Poly {
  std::map<Monomial, std::int64_t> terms;

  static Poly constant(std::int64_t c) {
    Poly p;
    if (c != 0) p.terms[{}] = c;
    return p;
  }
  static Poly atom(const std::string& a) {
    Poly p;
    p.terms[{a}] = 1;
    return p;
  }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms) {
      if ((r.terms[m] += c) == 0) r.terms.erase(m);
    }
    return r;
  }
  Poly scaled(std::int64_t k) const {
    Poly r;
    if (k == 0) return r;
    for (const auto& [m, c] : terms) r.terms[m] = c * k;
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + o.scaled(-1); }
  Poly operator*(const Poly& o) const {
    Poly r;
    for (const auto& [m1, c1] : terms) {
      for (const auto& [m2, c2] : o.terms) {
        Monomial m = m1;
        m.insert(m.end(), m2.begin(), m2.end());
        std::sort(m.begin(), m.end());
        if ((r.terms[m] += c1 * c2) == 0) r.terms.erase(m);
      }
    }
    return r;
  }
  bool nonneg_coefficients() const {
    return std::all_of(terms.begin(), terms.end(), [](const auto& t) { return t.second >= 0; });
  }
  std::string key() const {
    std::string s;
    for (const auto& [m, c] : terms) {
      s += std::to_string(c);
      for (const auto& a : m) s += "*" + a;
      s += ";";
    }
    return s;
  }
};

// Constraint "a >= b" requested as a case split.
struct Split {
  Index greater;
  Index smaller;
};

using Conversion = std::variant<Poly, Split, std::monostate>;

class Prover {
 public:
  explicit Prover(unsigned depth) : depth_(depth) {}

  bool prove(const ConstraintSet& hyps, const Constraint& goal, unsigned depth);

 private:
  Conversion to_poly(const Index& i, const ConstraintSet& hyps, unsigned depth);
  bool provable_ge(const ConstraintSet& hyps, const Index& a, const Index& b, unsigned depth) {
    return depth > 0 && prove(hyps, Constraint::le(b, a), depth - 1);
  }
  bool derive_nonneg(const Poly& goal, const std::vector<Poly>& hyps) const;

  unsigned depth_;
};

Conversion Prover::to_poly(const Index& i, const ConstraintSet& hyps, unsigned depth) {
  using K = Index::Kind;
  switch (i.kind()) {
    case K::Var: return Poly::atom(i.name());
    case K::Const: return Poly::constant(static_cast<std::int64_t>(i.value()));
    case K::Infinity: return std::monostate{};
    default: break;
  }
  const Index& a = i.args()[0];
  auto binary = [&](auto combine) -> Conversion {
    Conversion pa = to_poly(a, hyps, depth);
    if (!std::holds_alternative<Poly>(pa)) return pa;
    Conversion pb = to_poly(i.args()[1], hyps, depth);
    if (!std::holds_alternative<Poly>(pb)) return pb;
    return combine(std::get<Poly>(pa), std::get<Poly>(pb));
  };
  switch (i.kind()) {
    case K::Add: return binary([](const Poly& x, const Poly& y) { return x + y; });
    case K::Mul: return binary([](const Poly& x, const Poly& y) { return x * y; });
    case K::Sub: {
      const Index& b = i.args()[1];
      if (provable_ge(hyps, a, b, depth)) return binary([](const Poly& x, const Poly& y) { return x - y; });
      if (provable_ge(hyps, b, a, depth)) return Poly{};
      return Split{a, b};
    }
    case K::Max:
    case K::Min: {
      const Index& b = i.args()[1];
      bool is_max = i.kind() == K::Max;
      if (provable_ge(hyps, a, b, depth)) return to_poly(is_max ? a : b, hyps, depth);
      if (provable_ge(hyps, b, a, depth)) return to_poly(is_max ? b : a, hyps, depth);
      return Split{a, b};
    }
    case K::Fact: {
      if (provable_ge(hyps, Index::constant(0), a, depth)) return Poly{};
      if (provable_ge(hyps, a, Index::constant(1), depth)) {
        Conversion pa = to_poly(a, hyps, depth);
        if (!std::holds_alternative<Poly>(pa)) return pa;
        Poly pred = std::get<Poly>(pa) - Poly::constant(1);
        return std::get<Poly>(pa) * Poly::atom("fact[" + pred.key() + "]");
      }
      Conversion pa = to_poly(a, hyps, depth);
      if (!std::holds_alternative<Poly>(pa)) return pa;
      return Poly::atom("fact[" + std::get<Poly>(pa).key() + "]");
    }
    default: break;
  }
  return std::monostate{};
}

bool Prover::derive_nonneg(const Poly& goal, const std::vector<Poly>& hyps) const {
  if (goal.nonneg_coefficients()) return true;
  std::size_t n = std::min<std::size_t>(hyps.size(), 7);
  if (n == 0) return false;
  std::vector<int> lambda(n, 0);
  // Enumerate multipliers in {0,1,2}^n.
  for (;;) {
    std::size_t k = 0;
    while (k < n && lambda[k] == 2) lambda[k++] = 0;
    if (k == n) return false;
    ++lambda[k];
    Poly rest = goal;
    for (std::size_t h = 0; h < n; ++h) {
      if (lambda[h] != 0) rest = rest - hyps[h].scaled(lambda[h]);
    }
    if (rest.nonneg_coefficients()) return true;
  }
}

bool Prover::prove(const ConstraintSet& hyps, const Constraint& raw_goal, unsigned depth) {
  if (depth == 0) return false;
  Constraint goal{simplify(raw_goal.lhs), raw_goal.rel, simplify(raw_goal.rhs)};
  const Index& l = goal.lhs;
  const Index& r = goal.rhs;

  for (const auto& h : hyps) {
    if (h.rel == goal.rel && h.lhs == l && h.rhs == r) return true;
    if (goal.rel == Relation::Le && h.rel == Relation::Eq &&
        ((h.lhs == l && h.rhs == r) || (h.lhs == r && h.rhs == l)))
      return true;
  }

  // Infinity: only decided when an endpoint is literally inf.
  bool li = l.is_infinity();
  bool ri = r.is_infinity();
  if (li || ri) {
    bool lf = !l.contains_infinity();
    bool rf = !r.contains_infinity();
    switch (goal.rel) {
      case Relation::Le: return ri;
      case Relation::Lt: return ri && lf;
      case Relation::Eq: return li && ri;
      case Relation::Ne: return (li && rf) || (ri && lf);
    }
  }
  if (l.contains_infinity() || r.contains_infinity()) return false;

  if (goal.rel == Relation::Eq) {
    return prove(hyps, Constraint::le(l, r), depth) && prove(hyps, Constraint::le(r, l), depth);
  }
  if (goal.rel == Relation::Ne) {
    return prove(hyps, Constraint::lt(l, r), depth) || prove(hyps, Constraint::lt(r, l), depth);
  }

  auto split_on = [&](const Split& s) {
    ConstraintSet yes = hyps;
    yes.push_back(Constraint::le(s.smaller, s.greater));
    ConstraintSet no = hyps;
    no.push_back(Constraint::lt(s.greater, s.smaller));
    return prove(yes, goal, depth - 1) && prove(no, goal, depth - 1);
  };

  Conversion pl = to_poly(l, hyps, depth - 1);
  if (auto* s = std::get_if<Split>(&pl)) return split_on(*s);
  if (std::holds_alternative<std::monostate>(pl)) return false;
  Conversion pr = to_poly(r, hyps, depth - 1);
  if (auto* s = std::get_if<Split>(&pr)) return split_on(*s);
  if (std::holds_alternative<std::monostate>(pr)) return false;

  Poly diff = std::get<Poly>(pr) - std::get<Poly>(pl);
  if (goal.rel == Relation::Lt) diff = diff - Poly::constant(1);

  std::vector<Poly> hyp_polys;
  for (const auto& h : hyps) {
    if (h.rel == Relation::Ne) continue;
    Index hl = simplify(h.lhs);
    Index hr = simplify(h.rhs);
    if (hl.is_ground() && hr.is_ground() && !holds(Constraint{hl, h.rel, hr}, {})) return true;
    if (hl.contains_infinity() || hr.contains_infinity()) continue;
    Conversion a = to_poly(hl, {}, 0);
    Conversion b = to_poly(hr, {}, 0);
    if (!std::holds_alternative<Poly>(a) || !std::holds_alternative<Poly>(b)) {
      // Non-polynomial hypotheses are dropped, which only weakens them.
      a = to_poly(hl, hyps, depth - 1);
      b = to_poly(hr, hyps, depth - 1);
      if (!std::holds_alternative<Poly>(a) || !std::holds_alternative<Poly>(b)) continue;
    }
    Poly d = std::get<Poly>(b) - std::get<Poly>(a);
    if (h.rel == Relation::Lt) d = d - Poly::constant(1);
    hyp_polys.push_back(d);
    if (h.rel == Relation::Eq) hyp_polys.push_back(d.scaled(-1));
  }
  if (derive_nonneg(diff, hyp_polys)) return true;
  // Contradictory hypotheses entail everything.
  return derive_nonneg(Poly::constant(-1), hyp_polys);
}

void check_vars(const VarSet& phi, const Constraint& c) {
  VarSet vars;
  free_index_vars(c.lhs, vars);
  free_index_vars(c.rhs, vars);
  for (const auto& v : vars) {
    if (!phi.contains(v)) throw Error(ErrorKind::UnboundIndexVariable, v + " in " + c.str());
  }
}

std::optional<Valuation> search_counterexample(const VarSet& phi, const ConstraintSet& assumptions,
                                               const ConstraintSet& goals, const EntailConfig& config) {
  std::vector<std::string> vars(phi.begin(), phi.end());
  const std::uint64_t range = config.bound + 2;
  std::size_t total = 1;
  for (std::size_t k = 0; k < vars.size() && total <= config.max_valuations; ++k) total *= range;
  total = std::min(total, config.max_valuations);
  Valuation rho;
  for (const auto& v : vars) rho[v] = 0;
  for (std::size_t n = 0; n < total; ++n) {
    std::size_t code = n;
    for (const auto& v : vars) {
      rho[v] = code % range;
      code /= range;
    }
    if (!holds(assumptions, rho)) continue;
    for (const auto& g : goals) {
      if (!holds(g, rho)) return rho;
    }
  }
  return std::nullopt;
}

}  // namespace

Verdict entails(const VarSet& phi, const ConstraintSet& assumptions, const Constraint& c,
                const EntailConfig& config) {
  return entails_all(phi, assumptions, ConstraintSet{c}, config);
}

Verdict entails_all(const VarSet& phi, const ConstraintSet& assumptions, const ConstraintSet& goals,
                    const EntailConfig& config) {
  for (const auto& g : goals) check_vars(phi, g);
  for (const auto& a : assumptions) check_vars(phi, a);

  bool ground = true;
  for (const auto& g : goals) ground = ground && g.lhs.is_ground() && g.rhs.is_ground();
  for (const auto& a : assumptions) ground = ground && a.lhs.is_ground() && a.rhs.is_ground();
  if (ground) {
    if (!holds(assumptions, {})) return Verdict::proven();
    for (const auto& g : goals) {
      if (!holds(g, {})) return Verdict::refuted(Valuation{}, g.str());
    }
    return Verdict::proven();
  }

  Prover prover(config.proof_depth);
  bool all = true;
  for (const auto& g : goals) {
    if (!prover.prove(assumptions, g, config.proof_depth)) {
      all = false;
      break;
    }
  }
  if (all) return Verdict::proven();

  if (auto w = search_counterexample(phi, assumptions, goals, config)) return Verdict::refuted(*w);
  std::string note;
  for (const auto& g : goals) note += (note.empty() ? "" : ", ") + g.str();
  return Verdict::unknown("could not decide " + note);
}

}  // namespace pispan
