#include "pispan/index.hpp"

#include <algorithm>
#include <limits>

#include "pispan/error.hpp"
#include "pispan/lexer.hpp"

namespace pispan {

namespace {

constexpr std::uint64_t kMaxFinite = std::numeric_limits<std::uint64_t>::max() - 1;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kMaxFinite - b ? kMaxFinite : a + b;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kMaxFinite / b ? kMaxFinite : a * b;
}

Extended ext_fact(Extended e) {
  if (e.infinite) return Extended::inf();
  // 0! = 0 and n! = n * (n-1)! collapse to zero on every natural.
  std::uint64_t acc = 0;
  for (std::uint64_t k = 1; k <= e.value && k < 64; ++k) acc = sat_mul(k, acc);
  return Extended::of(acc);
}

int precedence(Index::Kind k) {
  switch (k) {
    case Index::Kind::Add:
    case Index::Kind::Sub: return 1;
    case Index::Kind::Mul: return 2;
    default: return 3;
  }
}

std::string wrap(const Index& i, bool paren) { return paren ? "(" + i.str() + ")" : i.str(); }

}  // namespace

std::string to_string(const Extended& e) { return e.infinite ? "inf" : std::to_string(e.value); }

Index Index::var(std::string name) {
  Index i(Kind::Var);
  i.name_ = std::move(name);
  return i;
}

Index Index::constant(std::uint64_t value) {
  Index i(Kind::Const);
  i.value_ = value;
  return i;
}

Index Index::infinity() { return Index(Kind::Infinity); }

Index Index::add(Index a, Index b) {
  if (a.is_infinity() || b.is_infinity()) return infinity();
  if (a.is_const() && b.is_const()) return constant(sat_add(a.value_, b.value_));
  if (a.is_const(0)) return b;
  if (b.is_const(0)) return a;
  if (a.is_const()) std::swap(a, b);
  if (b.is_const()) {
    if (a.kind_ == Kind::Add && a.args_[1].is_const()) {
      return add(a.args_[0], constant(sat_add(a.args_[1].value_, b.value_)));
    }
    Index r(Kind::Add);
    r.args_ = {std::move(a), std::move(b)};
    return r;
  }
  if (b.str() < a.str()) std::swap(a, b);
  Index r(Kind::Add);
  r.args_ = {std::move(a), std::move(b)};
  return r;
}

Index Index::mul(Index a, Index b) {
  if (a.is_const(0) || b.is_const(0)) return constant(0);
  if (a.is_infinity() && b.is_infinity()) return infinity();
  if (a.is_infinity() && b.is_const()) return infinity();
  if (b.is_infinity() && a.is_const()) return infinity();
  if (a.is_const() && b.is_const()) return constant(sat_mul(a.value_, b.value_));
  if (a.is_const(1)) return b;
  if (b.is_const(1)) return a;
  if (b.str() < a.str()) std::swap(a, b);
  Index r(Kind::Mul);
  r.args_ = {std::move(a), std::move(b)};
  return r;
}

Index Index::sub(Index a, Index b) {
  if (b.is_infinity()) return constant(0);
  if (a.is_infinity()) {
    if (b.is_const()) return infinity();
  } else {
    if (a.is_const() && b.is_const()) return constant(a.value_ > b.value_ ? a.value_ - b.value_ : 0);
    if (b.is_const(0)) return a;
    if (a == b) return constant(0);
    if (b.is_const() && a.kind_ == Kind::Add && a.args_[1].is_const()) {
      std::uint64_t c1 = a.args_[1].value_;
      if (c1 >= b.value_) return add(a.args_[0], constant(c1 - b.value_));
      return sub(a.args_[0], constant(b.value_ - c1));
    }
    if (b.is_const() && a.kind_ == Kind::Sub && a.args_[1].is_const()) {
      return sub(a.args_[0], constant(sat_add(a.args_[1].value_, b.value_)));
    }
  }
  Index r(Kind::Sub);
  r.args_ = {std::move(a), std::move(b)};
  return r;
}

Index Index::max(Index a, Index b) {
  if (a.is_infinity() || b.is_infinity()) return infinity();
  if (a.is_const() && b.is_const()) return constant(std::max(a.value_, b.value_));
  if (a == b) return a;
  if (a.is_const(0)) return b;
  if (b.is_const(0)) return a;
  if (b.str() < a.str()) std::swap(a, b);
  Index r(Kind::Max);
  r.args_ = {std::move(a), std::move(b)};
  return r;
}

Index Index::min(Index a, Index b) {
  if (a.is_infinity()) return b;
  if (b.is_infinity()) return a;
  if (a.is_const() && b.is_const()) return constant(std::min(a.value_, b.value_));
  if (a == b) return a;
  if (a.is_const(0) || b.is_const(0)) return constant(0);
  if (b.str() < a.str()) std::swap(a, b);
  Index r(Kind::Min);
  r.args_ = {std::move(a), std::move(b)};
  return r;
}

Index Index::fact(Index a) {
  if (a.is_infinity()) return infinity();
  if (a.is_const()) return constant(ext_fact(Extended::of(a.value_)).value);
  Index r(Kind::Fact);
  r.args_ = {std::move(a)};
  return r;
}

bool Index::contains_infinity() const {
  if (kind_ == Kind::Infinity) return true;
  return std::any_of(args_.begin(), args_.end(), [](const Index& a) { return a.contains_infinity(); });
}

bool Index::is_ground() const {
  if (kind_ == Kind::Var) return false;
  return std::all_of(args_.begin(), args_.end(), [](const Index& a) { return a.is_ground(); });
}

std::string Index::str() const {
  switch (kind_) {
    case Kind::Var: return name_;
    case Kind::Const: return std::to_string(value_);
    case Kind::Infinity: return "inf";
    case Kind::Max: return "max(" + args_[0].str() + "," + args_[1].str() + ")";
    case Kind::Min: return "min(" + args_[0].str() + "," + args_[1].str() + ")";
    case Kind::Fact: return "fact(" + args_[0].str() + ")";
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul: {
      int p = precedence(kind_);
      const char* op = kind_ == Kind::Add ? "+" : kind_ == Kind::Sub ? "-" : "*";
      return wrap(args_[0], precedence(args_[0].kind_) < p) + op + wrap(args_[1], precedence(args_[1].kind_) <= p);
    }
  }
  return "?";
}

bool operator==(const Index& a, const Index& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Index::Kind::Var: return a.name_ == b.name_;
    case Index::Kind::Const: return a.value_ == b.value_;
    case Index::Kind::Infinity: return true;
    default: return a.args_ == b.args_;
  }
}

Extended eval_index(const Index& index, const Valuation& rho) {
  using K = Index::Kind;
  switch (index.kind()) {
    case K::Var: {
      auto it = rho.find(index.name());
      if (it == rho.end()) throw Error(ErrorKind::UnboundIndexVariable, index.name());
      return Extended::of(it->second);
    }
    case K::Const: return Extended::of(index.value());
    case K::Infinity: return Extended::inf();
    default: break;
  }
  Extended a = eval_index(index.args()[0], rho);
  if (index.kind() == K::Fact) return ext_fact(a);
  Extended b = eval_index(index.args()[1], rho);
  switch (index.kind()) {
    case K::Add:
      if (a.infinite || b.infinite) return Extended::inf();
      return Extended::of(sat_add(a.value, b.value));
    case K::Mul:
      if (a == Extended::of(0) || b == Extended::of(0)) return Extended::of(0);
      if (a.infinite || b.infinite) return Extended::inf();
      return Extended::of(sat_mul(a.value, b.value));
    case K::Sub:
      if (b.infinite) return Extended::of(0);
      if (a.infinite) return Extended::inf();
      return Extended::of(a.value > b.value ? a.value - b.value : 0);
    case K::Max: return a < b ? b : a;
    case K::Min: return a < b ? a : b;
    default: break;
  }
  return Extended::of(0);
}

namespace {

Index rebuild(Index::Kind kind, std::vector<Index> args) {
  using K = Index::Kind;
  switch (kind) {
    case K::Add: return Index::add(std::move(args[0]), std::move(args[1]));
    case K::Mul: return Index::mul(std::move(args[0]), std::move(args[1]));
    case K::Sub: return Index::sub(std::move(args[0]), std::move(args[1]));
    case K::Max: return Index::max(std::move(args[0]), std::move(args[1]));
    case K::Min: return Index::min(std::move(args[0]), std::move(args[1]));
    case K::Fact: return Index::fact(std::move(args[0]));
    default: break;
  }
  return Index::constant(0);
}

}  // namespace

Index subst_index(const Index& index, const std::map<std::string, Index>& replacements) {
  switch (index.kind()) {
    case Index::Kind::Var: {
      auto it = replacements.find(index.name());
      return it == replacements.end() ? index : it->second;
    }
    case Index::Kind::Const:
    case Index::Kind::Infinity: return index;
    default: break;
  }
  std::vector<Index> args;
  args.reserve(index.args().size());
  for (const auto& a : index.args()) args.push_back(subst_index(a, replacements));
  return rebuild(index.kind(), std::move(args));
}

Index subst_index(const Index& index, const std::string& var, const Index& replacement) {
  return subst_index(index, std::map<std::string, Index>{{var, replacement}});
}

Index simplify(const Index& index) { return subst_index(index, std::map<std::string, Index>{}); }

void free_index_vars(const Index& index, VarSet& out) {
  if (index.kind() == Index::Kind::Var) out.insert(index.name());
  for (const auto& a : index.args()) free_index_vars(a, out);
}

namespace {

Index parse_sum(Cursor& c);

Index parse_atom(Cursor& c) {
  if (c.accept("(")) {
    Index inner = parse_sum(c);
    c.expect(")");
    return inner;
  }
  if (c.at_number()) return Index::constant(c.number());
  if (c.accept_keyword("inf")) return Index::infinity();
  for (const char* fn : {"max", "min"}) {
    std::size_t save = c.position();
    if (c.accept_keyword(fn)) {
      if (!c.accept("(")) {
        c.reset(save);
        break;
      }
      Index a = parse_sum(c);
      c.expect(",");
      Index b = parse_sum(c);
      c.expect(")");
      return std::string(fn) == "max" ? Index::max(a, b) : Index::min(a, b);
    }
  }
  {
    std::size_t save = c.position();
    if (c.accept_keyword("fact")) {
      if (c.accept("(")) {
        Index a = parse_sum(c);
        c.expect(")");
        return Index::fact(a);
      }
      c.reset(save);
    }
  }
  if (c.at_identifier()) return Index::var(c.identifier());
  c.fail("expected index");
}

Index parse_product(Cursor& c) {
  Index acc = parse_atom(c);
  while (c.accept("*")) acc = Index::mul(acc, parse_atom(c));
  return acc;
}

Index parse_sum(Cursor& c) {
  Index acc = parse_product(c);
  for (;;) {
    if (c.accept("+")) {
      acc = Index::add(acc, parse_product(c));
    } else if (c.peek() == '-' && c.peek_at(1) != '>') {
      c.expect("-");
      acc = Index::sub(acc, parse_product(c));
    } else {
      return acc;
    }
  }
}

}  // namespace

Index parse_index(Cursor& cursor) { return parse_sum(cursor); }

Index parse_index(const std::string& text) {
  Cursor c(text);
  Index i = parse_index(c);
  if (!c.at_end()) c.fail("trailing input after index");
  return i;
}

std::string Constraint::str() const {
  const char* op = "<=";
  switch (rel) {
    case Relation::Le: op = "<="; break;
    case Relation::Lt: op = "<"; break;
    case Relation::Eq: op = "="; break;
    case Relation::Ne: op = "!="; break;
  }
  return lhs.str() + " " + op + " " + rhs.str();
}

bool holds(const Constraint& c, const Valuation& rho) {
  Extended a = eval_index(c.lhs, rho);
  Extended b = eval_index(c.rhs, rho);
  switch (c.rel) {
    case Relation::Le: return a <= b;
    case Relation::Lt: return a < b;
    case Relation::Eq: return a == b;
    case Relation::Ne: return !(a == b);
  }
  return false;
}

bool holds(const ConstraintSet& cs, const Valuation& rho) {
  return std::all_of(cs.begin(), cs.end(), [&](const Constraint& c) { return holds(c, rho); });
}

Constraint subst_constraint(const Constraint& c, const std::map<std::string, Index>& replacements) {
  return {subst_index(c.lhs, replacements), c.rel, subst_index(c.rhs, replacements)};
}

Constraint parse_constraint(Cursor& cursor) {
  Index lhs = parse_index(cursor);
  Constraint c;
  if (cursor.accept("<=")) {
    c = Constraint::le(lhs, parse_index(cursor));
  } else if (cursor.accept(">=")) {
    c = Constraint::le(parse_index(cursor), lhs);
  } else if (cursor.accept("!=")) {
    c = Constraint::ne(lhs, parse_index(cursor));
  } else if (cursor.accept("<")) {
    c = Constraint::lt(lhs, parse_index(cursor));
  } else if (cursor.accept(">")) {
    c = Constraint::lt(parse_index(cursor), lhs);
  } else if (cursor.accept("=")) {
    c = Constraint::eq(lhs, parse_index(cursor));
  } else {
    cursor.fail("expected relation");
  }
  return c;
}

Constraint parse_constraint(const std::string& text) {
  Cursor c(text);
  Constraint r = parse_constraint(c);
  if (!c.at_end()) c.fail("trailing input after constraint");
  return r;
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Proven: return "Proven";
    case Outcome::Refuted: return "Refuted";
    case Outcome::Unknown: return "Unknown";
  }
  return "?";
}

Verdict conjoin(const Verdict& a, const Verdict& b) {
  if (a.is_refuted()) return a;
  if (b.is_refuted()) return b;
  if (a.is_unknown()) return a;
  return b;
}

}  // namespace pispan
