#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pispan/index.hpp"

namespace pispan {

// Interpreted function symbols usable inside expressions, e.g. `mult`.
// Each carries its ground semantics and a size schema mapping the argument
// bounds [lo_k, hi_k] to the result bounds.
struct FunctionSymbol {
  std::string name;
  std::size_t arity = 0;
  std::function<std::uint64_t(const std::vector<std::uint64_t>&)> eval;
  std::function<std::pair<Index, Index>(const std::vector<std::pair<Index, Index>>&)> size;
};

class FunctionRegistry {
 public:
  // Registry preloaded with `mult` and `add`.
  static const FunctionRegistry& standard();

  void add(FunctionSymbol symbol) { symbols_[symbol.name] = std::move(symbol); }
  const FunctionSymbol* find(const std::string& name) const;

 private:
  std::map<std::string, FunctionSymbol> symbols_;
};

class Expr {
 public:
  enum class Kind { Var, Zero, Succ, FnApp };

  Expr() = default;
  static Expr var(std::string name);
  static Expr zero();
  static Expr succ(Expr e);
  static Expr app(std::string symbol, std::vector<Expr> args);
  static Expr numeral(std::uint64_t n);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::vector<Expr>& args() const { return args_; }
  const Expr& inner() const { return args_.front(); }
  bool is_name() const { return kind_ == Kind::Var; }

  std::string str() const;
  friend bool operator==(const Expr&, const Expr&) = default;

 private:
  Kind kind_ = Kind::Zero;
  std::string name_;
  std::vector<Expr> args_;
};

class Process {
 public:
  enum class Kind { Nil, Par, Input, ReplInput, Output, New, Tick, Match, Annot };

  Process() = default;
  static Process nil();
  static Process par(Process p, Process q);
  static Process input(std::string channel, std::vector<std::string> params, Process body);
  static Process repl_input(std::string channel, std::vector<std::string> params, Process body);
  static Process output(std::string channel, std::vector<Expr> args, Process body);
  static Process restrict(std::string name, Process body);
  static Process tick(Process body);
  static Process match(Expr scrutinee, Process zero_branch, std::string binder, Process succ_branch);
  static Process annot(std::uint64_t weight, Process body);
  // Right-nested parallel composition; nil for an empty list.
  static Process par_all(std::vector<Process> parts);

  Kind kind() const { return kind_; }
  // Subject channel (Input/ReplInput/Output) or bound name (New) or the
  // successor binder (Match).
  const std::string& name() const { return name_; }
  const std::vector<std::string>& params() const { return params_; }
  const std::vector<Expr>& args() const { return args_; }
  const Expr& scrutinee() const { return args_.front(); }
  std::uint64_t weight() const { return weight_; }
  const std::vector<Process>& children() const { return children_; }
  const Process& body() const { return children_.front(); }
  const Process& left() const { return children_[0]; }
  const Process& right() const { return children_[1]; }

  bool is_guard() const;
  bool contains_annot() const;

  std::string str() const;
  friend bool operator==(const Process&, const Process&) = default;

 private:
  Kind kind_ = Kind::Nil;
  std::string name_;
  std::vector<std::string> params_;
  std::vector<Expr> args_;
  std::uint64_t weight_ = 0;
  std::vector<Process> children_;
};

Process parse_process(const std::string& text, const FunctionRegistry& registry = FunctionRegistry::standard());
Expr parse_expr(const std::string& text, const FunctionRegistry& registry = FunctionRegistry::standard());

void free_names(const Expr& e, std::set<std::string>& out);
void free_names(const Process& p, std::set<std::string>& out);
std::set<std::string> free_names(const Process& p);

Expr substitute(const Expr& e, const std::map<std::string, Expr>& sub);
// Simultaneous capture-avoiding substitution of `args` for `params` in `p`.
// Throws ArityMismatch, or IllFormedSubstitution when a non-name expression
// would land in a channel position.
Process substitute(const Process& p, const std::vector<std::string>& params, const std::vector<Expr>& args);
Process substitute(const Process& p, const std::map<std::string, Expr>& sub);

}  // namespace pispan
