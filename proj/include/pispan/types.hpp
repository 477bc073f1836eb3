#pragma once

#include <map>
#include <string>
#include <vector>

#include "pispan/index.hpp"
#include "pispan/usage.hpp"

namespace pispan {

class Type {
 public:
  enum class Kind { Nat, Chan, Serv };

  Type() = default;
  static Type nat(Index lo, Index hi);
  static Type chan(std::vector<Type> payload, Usage usage = Usage::zero());
  static Type serv(std::vector<std::string> binders, Interval complexity, std::vector<Type> payload,
                   Usage usage = Usage::zero());

  Kind kind() const { return kind_; }
  bool is_nat() const { return kind_ == Kind::Nat; }
  const Index& lo() const { return bounds_.lo; }
  const Index& hi() const { return bounds_.hi; }
  const std::vector<std::string>& binders() const { return binders_; }
  // Server complexity K.
  const Interval& complexity() const { return bounds_; }
  const std::vector<Type>& payload() const { return payload_; }
  const Usage& usage() const { return usage_; }

  Type with_usage(Usage u) const;
  // The same type with usage 0.
  Type skeleton() const { return with_usage(Usage::zero()); }

  std::string str() const;
  friend bool operator==(const Type& a, const Type& b) { return a.str() == b.str(); }

 private:
  Kind kind_ = Kind::Nat;
  Interval bounds_ = Interval::zero();
  std::vector<std::string> binders_;
  std::vector<Type> payload_;
  Usage usage_;
};

using Context = std::map<std::string, Type>;

std::string context_str(const Context& ctx);

Type parse_type(Cursor& cursor);
Type parse_type(const std::string& text);

Type subst_type(const Type& t, const std::map<std::string, Index>& replacements);
void free_index_vars(const Type& t, VarSet& out);

Verdict subtype(const VarSet& phi, const ConstraintSet& assumptions, const Type& t, const Type& s,
                const UsageConfig& config = {});
// Equality of the types with usages ignored.
Verdict same_skeleton(const VarSet& phi, const ConstraintSet& assumptions, const Type& t, const Type& s,
                      const EntailConfig& config = {});

// Throws IncompatibleTypes unless both sides have syntactically equal skeletons.
Type par_types(const Type& t, const Type& s);
Type bang_type(const Type& t);
Type delay_type(const Interval& a, const Type& t);
Type delay_type(const Capacity& c, const Type& t);
Reliability type_reliable(const VarSet& phi, const ConstraintSet& assumptions, const Type& t,
                          const UsageConfig& config = {});

// Pointwise lifts; names present on one side only are padded with usage 0.
Context par_contexts(const Context& g, const Context& d);
Context bang_context(const Context& g);
Context delay_context(const Interval& a, const Context& g);
Context delay_context(const Capacity& c, const Context& g);

// The context itself plus every context where exactly one usage has taken
// one or more reduction steps.
std::vector<Context> context_step(const VarSet& phi, const ConstraintSet& assumptions, const Context& g,
                                  const UsageConfig& config = {});

}  // namespace pispan
