#include "pispan/types.hpp"

#include <deque>
#include <set>

#include "pispan/error.hpp"
#include "pispan/lexer.hpp"

namespace pispan {

Type Type::nat(Index lo, Index hi) {
  Type t;
  t.kind_ = Kind::Nat;
  t.bounds_ = {std::move(lo), std::move(hi)};
  return t;
}

Type Type::chan(std::vector<Type> payload, Usage usage) {
  Type t;
  t.kind_ = Kind::Chan;
  t.payload_ = std::move(payload);
  t.usage_ = std::move(usage);
  return t;
}

Type Type::serv(std::vector<std::string> binders, Interval complexity, std::vector<Type> payload, Usage usage) {
  Type t;
  t.kind_ = Kind::Serv;
  t.binders_ = std::move(binders);
  t.bounds_ = std::move(complexity);
  t.payload_ = std::move(payload);
  t.usage_ = std::move(usage);
  return t;
}

Type Type::with_usage(Usage u) const {
  Type t = *this;
  if (kind_ != Kind::Nat) t.usage_ = std::move(u);
  return t;
}

std::string Type::str() const {
  if (kind_ == Kind::Nat) return "Nat[" + bounds_.lo.str() + ", " + bounds_.hi.str() + "]";
  std::string s;
  if (kind_ == Kind::Serv) {
    s = "Serv[";
    for (std::size_t k = 0; k < binders_.size(); ++k) s += (k ? ", " : "") + binders_[k];
    s += "]" + bounds_.str();
  } else {
    s = "Ch";
  }
  s += "(";
  for (std::size_t k = 0; k < payload_.size(); ++k) s += (k ? ", " : "") + payload_[k].str();
  s += ")/";
  bool wrap = usage_.kind() == Usage::Kind::Par || usage_.kind() == Usage::Kind::Choice;
  return s + (wrap ? "(" + usage_.str() + ")" : usage_.str());
}

std::string context_str(const Context& ctx) {
  std::string s;
  for (const auto& [name, t] : ctx) s += (s.empty() ? "" : ", ") + name + " : " + t.str();
  return s.empty() ? "." : s;
}

Type parse_type(Cursor& c) {
  auto payload = [&] {
    std::vector<Type> ts;
    c.expect("(");
    if (!c.accept(")")) {
      do {
        ts.push_back(parse_type(c));
      } while (c.accept(","));
      c.expect(")");
    }
    return ts;
  };
  auto usage = [&] { return c.accept("/") ? parse_usage(c) : Usage::zero(); };

  if (c.accept_keyword("Nat")) {
    c.expect("[");
    Index lo = parse_index(c);
    Index hi = c.accept(",") ? parse_index(c) : lo;
    c.expect("]");
    return Type::nat(std::move(lo), std::move(hi));
  }
  if (c.accept_keyword("Ch")) {
    auto ts = payload();
    return Type::chan(std::move(ts), usage());
  }
  if (c.accept_keyword("Serv")) {
    c.expect("[");
    std::vector<std::string> binders;
    if (!c.accept("]")) {
      do {
        binders.push_back(c.identifier());
      } while (c.accept(","));
      c.expect("]");
    }
    Interval k = parse_interval(c);
    auto ts = payload();
    return Type::serv(std::move(binders), std::move(k), std::move(ts), usage());
  }
  c.fail("expected a type (Nat, Ch or Serv)");
}

Type parse_type(const std::string& text) {
  Cursor c(text);
  Type t = parse_type(c);
  if (!c.at_end()) c.fail("unexpected input after type");
  return t;
}

Type subst_type(const Type& t, const std::map<std::string, Index>& r) {
  switch (t.kind()) {
    case Type::Kind::Nat: return Type::nat(subst_index(t.lo(), r), subst_index(t.hi(), r));
    case Type::Kind::Chan: {
      std::vector<Type> ps;
      for (const auto& p : t.payload()) ps.push_back(subst_type(p, r));
      return Type::chan(std::move(ps), subst_usage(t.usage(), r));
    }
    case Type::Kind::Serv: {
      // Binders shadow the replacement inside payload and complexity.
      std::map<std::string, Index> inner = r;
      for (const auto& b : t.binders()) inner.erase(b);
      std::vector<Type> ps;
      for (const auto& p : t.payload()) ps.push_back(subst_type(p, inner));
      Interval k{subst_index(t.complexity().lo, inner), subst_index(t.complexity().hi, inner)};
      return Type::serv(t.binders(), std::move(k), std::move(ps), subst_usage(t.usage(), r));
    }
  }
  return t;
}

void free_index_vars(const Type& t, VarSet& out) {
  if (t.is_nat()) {
    free_index_vars(t.lo(), out);
    free_index_vars(t.hi(), out);
    return;
  }
  VarSet inner;
  for (const auto& p : t.payload()) free_index_vars(p, inner);
  if (t.kind() == Type::Kind::Serv) {
    free_index_vars(t.complexity().lo, inner);
    free_index_vars(t.complexity().hi, inner);
    for (const auto& b : t.binders()) inner.erase(b);
  }
  out.insert(inner.begin(), inner.end());
  free_index_vars(t.usage(), out);
}

namespace {

// Renames the binders of `s` to those of `t` so both can be compared under
// one extended variable set.
std::optional<Type> align_binders(const Type& t, const Type& s) {
  if (t.binders().size() != s.binders().size()) return std::nullopt;
  std::map<std::string, Index> r;
  for (std::size_t k = 0; k < t.binders().size(); ++k) {
    if (t.binders()[k] != s.binders()[k]) r.emplace(s.binders()[k], Index::var(t.binders()[k]));
  }
  if (r.empty()) return s;
  std::vector<Type> ps;
  for (const auto& p : s.payload()) ps.push_back(subst_type(p, r));
  Interval k{subst_index(s.complexity().lo, r), subst_index(s.complexity().hi, r)};
  return Type::serv(t.binders(), std::move(k), std::move(ps), s.usage());
}

VarSet extend(const VarSet& phi, const std::vector<std::string>& binders) {
  VarSet out = phi;
  out.insert(binders.begin(), binders.end());
  return out;
}

}  // namespace

Verdict subtype(const VarSet& phi, const ConstraintSet& assumptions, const Type& t, const Type& s,
                const UsageConfig& config) {
  if (t.kind() != s.kind()) return Verdict::refuted(std::nullopt, "type constructors differ");
  if (t.is_nat()) {
    return entails_all(phi, assumptions, {Constraint::le(s.lo(), t.lo()), Constraint::le(t.hi(), s.hi())},
                       config.entail);
  }
  Type other = s;
  VarSet inner_phi = phi;
  if (t.kind() == Type::Kind::Serv) {
    auto aligned = align_binders(t, s);
    if (!aligned) return Verdict::refuted(std::nullopt, "server binder counts differ");
    other = *aligned;
    inner_phi = extend(phi, t.binders());
  }
  if (t.payload().size() != other.payload().size()) return Verdict::refuted(std::nullopt, "payload arity differs");
  Verdict v = Verdict::proven();
  for (std::size_t k = 0; k < t.payload().size(); ++k) {
    v = conjoin(v, subtype(inner_phi, assumptions, t.payload()[k], other.payload()[k], config));
    v = conjoin(v, subtype(inner_phi, assumptions, other.payload()[k], t.payload()[k], config));
  }
  if (t.kind() == Type::Kind::Serv) {
    v = conjoin(v, entails_all(inner_phi, assumptions,
                               {Constraint::eq(t.complexity().lo, other.complexity().lo),
                                Constraint::eq(t.complexity().hi, other.complexity().hi)},
                               config.entail));
  }
  if (v.is_refuted()) return v;
  return conjoin(v, subusage(phi, assumptions, t.usage(), s.usage(), config));
}

Verdict same_skeleton(const VarSet& phi, const ConstraintSet& assumptions, const Type& t, const Type& s,
                      const EntailConfig& config) {
  if (t.skeleton() == s.skeleton()) return Verdict::proven();
  if (t.kind() != s.kind()) return Verdict::refuted(std::nullopt, "type constructors differ");
  if (t.is_nat()) {
    return entails_all(phi, assumptions, {Constraint::eq(t.lo(), s.lo()), Constraint::eq(t.hi(), s.hi())}, config);
  }
  Type other = s;
  VarSet inner_phi = phi;
  if (t.kind() == Type::Kind::Serv) {
    auto aligned = align_binders(t, s);
    if (!aligned) return Verdict::refuted(std::nullopt, "server binder counts differ");
    other = *aligned;
    inner_phi = extend(phi, t.binders());
  }
  if (t.payload().size() != other.payload().size()) return Verdict::refuted(std::nullopt, "payload arity differs");
  Verdict v = Verdict::proven();
  for (std::size_t k = 0; k < t.payload().size(); ++k) {
    const Type& a = t.payload()[k];
    const Type& b = other.payload()[k];
    v = conjoin(v, same_skeleton(inner_phi, assumptions, a, b, config));
    if (!a.is_nat()) v = conjoin(v, usage_equiv(inner_phi, assumptions, a.usage(), b.usage(), config));
  }
  if (t.kind() == Type::Kind::Serv) {
    v = conjoin(v, entails_all(inner_phi, assumptions,
                               {Constraint::eq(t.complexity().lo, other.complexity().lo),
                                Constraint::eq(t.complexity().hi, other.complexity().hi)},
                               config));
  }
  return v;
}

Type par_types(const Type& t, const Type& s) {
  if (t.skeleton() != s.skeleton()) {
    throw Error(ErrorKind::IncompatibleTypes, t.skeleton().str() + " vs " + s.skeleton().str());
  }
  if (t.is_nat()) return t;
  return t.with_usage(Usage::par(t.usage(), s.usage()));
}

Type bang_type(const Type& t) { return t.is_nat() ? t : t.with_usage(Usage::bang(t.usage())); }

Type delay_type(const Interval& a, const Type& t) { return t.is_nat() ? t : t.with_usage(delay(a, t.usage())); }

Type delay_type(const Capacity& c, const Type& t) { return t.is_nat() ? t : t.with_usage(delay(c, t.usage())); }

Reliability type_reliable(const VarSet& phi, const ConstraintSet& assumptions, const Type& t,
                          const UsageConfig& config) {
  if (t.is_nat()) return {Outcome::Proven, {}, 0, {}};
  return reliable(phi, assumptions, t.usage(), config);
}

Context par_contexts(const Context& g, const Context& d) {
  Context out = g;
  for (const auto& [name, t] : d) {
    auto it = out.find(name);
    if (it == out.end()) {
      out.emplace(name, t);
      continue;
    }
    try {
      it->second = par_types(it->second, t);
    } catch (const Error& e) {
      throw Error(ErrorKind::IncompatibleTypes, "'" + name + "': " + t.skeleton().str() + " vs " +
                                                    it->second.skeleton().str());
    }
  }
  return out;
}

Context bang_context(const Context& g) {
  Context out;
  for (const auto& [name, t] : g) out.emplace(name, bang_type(t));
  return out;
}

Context delay_context(const Interval& a, const Context& g) {
  Context out;
  for (const auto& [name, t] : g) out.emplace(name, delay_type(a, t));
  return out;
}

Context delay_context(const Capacity& c, const Context& g) {
  Context out;
  for (const auto& [name, t] : g) out.emplace(name, delay_type(c, t));
  return out;
}

std::vector<Context> context_step(const VarSet& phi, const ConstraintSet& assumptions, const Context& g,
                                  const UsageConfig& config) {
  std::vector<Context> out{g};
  for (const auto& [name, t] : g) {
    if (t.is_nat()) continue;
    std::set<std::string> seen{normalize(t.usage()).str()};
    std::deque<Usage> frontier{normalize(t.usage())};
    while (!frontier.empty() && seen.size() < config.fuel) {
      Usage current = std::move(frontier.front());
      frontier.pop_front();
      for (auto& step : usage_step(phi, assumptions, current, config)) {
        if (step.kind != UsageStep::Kind::Next || !seen.insert(step.next.str()).second) continue;
        Context next = g;
        next[name] = t.with_usage(step.next);
        out.push_back(std::move(next));
        frontier.push_back(std::move(step.next));
      }
    }
  }
  return out;
}

}  // namespace pispan
