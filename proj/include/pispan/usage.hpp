#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pispan/index.hpp"

namespace pispan {

// Closed interval [lo, hi] of indices, used for obligations and complexities.
struct Interval {
  Index lo;
  Index hi;

  static Interval of(Index lo, Index hi) { return {std::move(lo), std::move(hi)}; }
  static Interval point(const Index& v) { return {v, v}; }
  static Interval zero() { return {Index::constant(0), Index::constant(0)}; }

  std::string str() const;
  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

// Either a bare upper bound J (read as [-inf, J]) or an interval [I, J].
// The two forms are never converted into each other.
struct Capacity {
  bool upper_only = true;
  Index lo;  // unused when upper_only
  Index hi;

  static Capacity upper(Index j) { return {true, Index::constant(0), std::move(j)}; }
  static Capacity interval(Index i, Index j) { return {false, std::move(i), std::move(j)}; }

  std::string str() const;
  friend bool operator==(const Capacity& a, const Capacity& b) {
    return a.upper_only == b.upper_only && a.hi == b.hi && (a.upper_only || a.lo == b.lo);
  }
};

// A (+) c
Interval iplus(const Interval& a, const Capacity& c);
// A |_| B, pointwise max
Interval ilub(const Interval& a, const Interval& b);
Interval add(const Interval& a, const Interval& b);
// [I,J] + c; a bare capacity J' only extends the upper end.
Interval add(const Interval& a, const Capacity& c);
// J_c ; K, the complexity contributed by an input or output prefix.
Interval seq_complexity(const Capacity& c, const Interval& k);

// Interval and capacity comparisons as index constraints.
ConstraintSet included(const Interval& inner, const Interval& outer);
// I_c <= J_c; returns nullopt when it can never hold (bare bound vs interval).
std::optional<ConstraintSet> capacity_le(const Capacity& small, const Capacity& large);

class Usage {
 public:
  enum class Kind { Zero, Par, In, Out, Bang, Choice };

  Usage() = default;
  static Usage zero() { return Usage{}; }
  static Usage par(Usage a, Usage b);
  static Usage par_all(std::vector<Usage> parts);
  static Usage in(Interval obligation, Capacity capacity, Usage cont = zero());
  static Usage out(Interval obligation, Capacity capacity, Usage cont = zero());
  static Usage action(Kind direction, Interval obligation, Capacity capacity, Usage cont);
  static Usage bang(Usage u);
  static Usage choice(Usage a, Usage b);

  Kind kind() const { return kind_; }
  bool is_action() const { return kind_ == Kind::In || kind_ == Kind::Out; }
  const Interval& obligation() const { return obligation_; }
  const Capacity& capacity() const { return capacity_; }
  const std::vector<Usage>& children() const { return children_; }
  const Usage& cont() const { return children_.front(); }
  const Usage& left() const { return children_[0]; }
  const Usage& right() const { return children_[1]; }

  std::string str() const;
  friend bool operator==(const Usage& a, const Usage& b) { return a.str() == b.str(); }

 private:
  Kind kind_ = Kind::Zero;
  Interval obligation_ = Interval::zero();
  Capacity capacity_;
  std::vector<Usage> children_;
};

Usage delay(const Interval& a, const Usage& u);
Usage delay(const Capacity& c, const Usage& u);

// Normal form modulo the monoid laws and the replication axioms.
Usage normalize(const Usage& u);
// Parallel components of the normal form.
std::vector<Usage> components(const Usage& u);
bool usage_congruent(const Usage& u, const Usage& v);
// Congruence where index leaves are compared by entailed equality.
Verdict usage_equiv(const VarSet& phi, const ConstraintSet& assumptions, const Usage& u, const Usage& v,
                    const EntailConfig& config = {});

void free_index_vars(const Usage& u, VarSet& out);
Usage subst_usage(const Usage& u, const std::map<std::string, Index>& replacements);

Usage parse_usage(Cursor& cursor);
Usage parse_usage(const std::string& text);
Interval parse_interval(Cursor& cursor);
Capacity parse_capacity(Cursor& cursor);

struct UsageConfig {
  std::size_t fuel = 20000;
  unsigned unfold = 2;
  unsigned depth = 8;
  EntailConfig entail;
};

struct UsageStep {
  enum class Kind { Next, Error, Blocked };
  Kind kind = Kind::Next;
  Usage next;
  // True when the step unfolded a replicated component into new behaviour.
  bool used_bang = false;
  std::string note;
};

std::vector<UsageStep> usage_step(const VarSet& phi, const ConstraintSet& assumptions, const Usage& u,
                                  const UsageConfig& config = {});

struct Reliability {
  // Proven = reliable, Refuted = an error is reachable.
  Outcome outcome = Outcome::Unknown;
  std::vector<std::string> trace;
  std::size_t states = 0;
  std::string note;
};

Reliability reliable(const VarSet& phi, const ConstraintSet& assumptions, const Usage& u,
                     const UsageConfig& config = {});

// U [= V. Proven only from an explicit rule derivation; never Refuted.
Verdict subusage(const VarSet& phi, const ConstraintSet& assumptions, const Usage& u, const Usage& v,
                 const UsageConfig& config = {});

}  // namespace pispan
