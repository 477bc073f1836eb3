#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pispan/process.hpp"
#include "pispan/sexpr.hpp"
#include "pispan/types.hpp"

namespace pispan {

// Typing derivations are checked against a script that records every choice
// the rules leave open (capacities, server instantiations, declared types,
// subsumption targets). Channel usages are synthesized bottom-up from the
// script; Nat types and channel skeletons flow top-down through an
// environment.
//
// Process nodes:
//   (zero)                              0
//   (par [:left CTX] [:right CTX] P Q)  P | Q
//   (tick P)  (annot P)                 tick.P, m:P
//   (ich :cap C P)  (iserv :cap C P)    a?(x).P, !a?(x).P
//   (och :cap C [:args (E...)] P)       a!(e).P on a channel
//   (oserv :cap C :inst (I...) [:args (E...)] P)
//   (case [:expr E] P Q)                match e { 0 => P ; s(x) => Q }
//   (nu :type T P)                      new a in P
//   (sub [:ctx CTX] [:widen CTX] [:k K] P)
// Expression nodes: (var) (zeroe) (succe E) (fne E...) (sube :type T E).
// CTX is a list of ("name" "Type") pairs; C is `J` or `[I, J]`.

struct CheckConfig {
  UsageConfig usage;
  const FunctionRegistry* registry = &FunctionRegistry::standard();
};

struct TraceEntry {
  unsigned depth = 0;
  std::string rule;
  std::string where;
  std::string context;
  Interval complexity;
};

struct CheckResult {
  Interval complexity;
  // Synthesized channel context of the checked node.
  Context context;
  std::vector<TraceEntry> trace;
};

// Types an expression. `script` may be null, in which case the expression
// rules are applied syntactically. Channel-typed names are returned with the
// usage they contribute.
Type check_expr(const VarSet& phi, const ConstraintSet& assumptions, const Context& env, const Expr& e,
                const SExpr* script, const CheckConfig& config = {});

CheckResult check_process(const VarSet& phi, const ConstraintSet& assumptions, const Context& env,
                          const Process& p, const SExpr& script, const CheckConfig& config = {});

// A parsed `.deriv` file.
struct DerivationScript {
  std::optional<std::string> process_file;
  std::optional<std::string> process_source;
  VarSet indices;
  ConstraintSet constraints;
  Context context;
  SExpr root;
};

DerivationScript parse_derivation(const std::string& text);

// Checks `root` against `p` under the declared context: every declared
// channel usage must match the synthesized one up to congruence, and every
// free name must be declared.
CheckResult check_derivation(const DerivationScript& script, const Process& p, const CheckConfig& config = {});

}  // namespace pispan
