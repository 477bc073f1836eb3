#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pispan {

class Cursor;

// A value of N extended with infinity.
struct Extended {
  bool infinite = false;
  std::uint64_t value = 0;

  static Extended inf() { return {true, 0}; }
  static Extended of(std::uint64_t v) { return {false, v}; }

  friend bool operator==(const Extended&, const Extended&) = default;
  friend bool operator<(const Extended& a, const Extended& b) {
    if (a.infinite) return false;
    if (b.infinite) return true;
    return a.value < b.value;
  }
  friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
};

std::string to_string(const Extended& e);

// Symbolic size/time index over N u {inf}. Terms are small immutable trees;
// the smart constructors below fold constants and absorb infinity.
class Index {
 public:
  enum class Kind { Var, Const, Infinity, Add, Mul, Sub, Max, Min, Fact };

  Index() : Index(Kind::Const) {}

  static Index var(std::string name);
  static Index constant(std::uint64_t value);
  static Index infinity();
  static Index add(Index a, Index b);
  static Index mul(Index a, Index b);
  // Truncated subtraction: a - b = 0 when b >= a.
  static Index sub(Index a, Index b);
  static Index max(Index a, Index b);
  static Index min(Index a, Index b);
  // Follows the recurrence 0! = 0, n! = n * (n-1)!.
  static Index fact(Index a);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::uint64_t value() const { return value_; }
  const std::vector<Index>& args() const { return args_; }

  bool is_const() const { return kind_ == Kind::Const; }
  bool is_const(std::uint64_t v) const { return kind_ == Kind::Const && value_ == v; }
  bool is_infinity() const { return kind_ == Kind::Infinity; }
  bool contains_infinity() const;
  bool is_ground() const;

  std::string str() const;

  friend bool operator==(const Index& a, const Index& b);
  friend bool operator<(const Index& a, const Index& b) { return a.str() < b.str(); }

 private:
  explicit Index(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::string name_;
  std::uint64_t value_ = 0;
  std::vector<Index> args_;
};

using Valuation = std::map<std::string, std::uint64_t>;
using VarSet = std::set<std::string>;

// Interpretation under a valuation; throws UnboundIndexVariable.
Extended eval_index(const Index& index, const Valuation& rho);
Index subst_index(const Index& index, const std::string& var, const Index& replacement);
Index subst_index(const Index& index, const std::map<std::string, Index>& replacements);
Index simplify(const Index& index);
void free_index_vars(const Index& index, VarSet& out);

Index parse_index(Cursor& cursor);
Index parse_index(const std::string& text);

enum class Relation { Le, Lt, Eq, Ne };

struct Constraint {
  Index lhs;
  Relation rel = Relation::Le;
  Index rhs;

  static Constraint le(Index a, Index b) { return {std::move(a), Relation::Le, std::move(b)}; }
  static Constraint lt(Index a, Index b) { return {std::move(a), Relation::Lt, std::move(b)}; }
  static Constraint eq(Index a, Index b) { return {std::move(a), Relation::Eq, std::move(b)}; }
  static Constraint ne(Index a, Index b) { return {std::move(a), Relation::Ne, std::move(b)}; }

  std::string str() const;
};

using ConstraintSet = std::vector<Constraint>;

bool holds(const Constraint& c, const Valuation& rho);
bool holds(const ConstraintSet& cs, const Valuation& rho);
Constraint subst_constraint(const Constraint& c, const std::map<std::string, Index>& replacements);

// Accepts `I <= J`, `I < J`, `I = J`, `I != J`, `I >= J`, `I > J`.
Constraint parse_constraint(Cursor& cursor);
Constraint parse_constraint(const std::string& text);

enum class Outcome { Proven, Refuted, Unknown };

const char* to_string(Outcome outcome);

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::optional<Valuation> witness;
  std::string note;

  static Verdict proven() { return {Outcome::Proven, std::nullopt, {}}; }
  static Verdict refuted(std::optional<Valuation> w = std::nullopt, std::string note = {}) {
    return {Outcome::Refuted, std::move(w), std::move(note)};
  }
  static Verdict unknown(std::string note = {}) { return {Outcome::Unknown, std::nullopt, std::move(note)}; }

  bool is_proven() const { return outcome == Outcome::Proven; }
  bool is_refuted() const { return outcome == Outcome::Refuted; }
  bool is_unknown() const { return outcome == Outcome::Unknown; }
};

// Conjunction of verdicts: any Refuted wins, then any Unknown.
Verdict conjoin(const Verdict& a, const Verdict& b);

struct EntailConfig {
  // Brute-force valuations range over 0..bound plus the probe bound + 1.
  unsigned bound = 8;
  unsigned proof_depth = 6;
  std::size_t max_valuations = 200000;
};

// phi; Phi |= c, three-valued. Proven only from a sound symbolic argument
// (or exhaustive evaluation when phi is empty); Refuted carries a witness.
Verdict entails(const VarSet& phi, const ConstraintSet& assumptions, const Constraint& c,
                const EntailConfig& config = {});
Verdict entails_all(const VarSet& phi, const ConstraintSet& assumptions, const ConstraintSet& goals,
                    const EntailConfig& config = {});

}  // namespace pispan
