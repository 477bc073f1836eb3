#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pispan/canonical.hpp"
#include "pispan/process.hpp"

namespace pispan {

// Ground value of a closed expression. Throws OpenExpression or UnknownSymbol.
std::uint64_t eval_expr(const Expr& e, const FunctionRegistry& registry = FunctionRegistry::standard());

enum class StepMode { Standard, Annotated };

// All one-step successors of a canonical form, each canonicalized, without
// duplicates. Standard mode never fires tick.
std::vector<CanonicalForm> successors(const CanonicalForm& form, StepMode mode,
                                      const FunctionRegistry& registry = FunctionRegistry::standard());

std::vector<CanonicalForm> standard_step(const Process& p);
std::vector<CanonicalForm> annotated_step(const Process& p);

std::uint64_t local_complexity(const Process& p);

struct SpanResult {
  std::uint64_t value = 0;
  bool exact = false;
  std::size_t states_explored = 0;
};

// Maximum local complexity over all annotated-reachable states. When the
// state budget runs out the value is a lower bound and `exact` is false.
SpanResult global_span(const Process& p, std::size_t fuel = 100000,
                       const FunctionRegistry& registry = FunctionRegistry::standard());

}  // namespace pispan
