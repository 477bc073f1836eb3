#include "pispan/process.hpp"

#include <algorithm>

#include "pispan/error.hpp"
#include "pispan/lexer.hpp"

namespace pispan {

const FunctionRegistry& FunctionRegistry::standard() {
  static const FunctionRegistry registry = [] {
    FunctionRegistry r;
    r.add({"mult", 2, [](const std::vector<std::uint64_t>& v) { return v[0] * v[1]; },
           [](const std::vector<std::pair<Index, Index>>& b) {
             return std::pair{Index::mul(b[0].first, b[1].first), Index::mul(b[0].second, b[1].second)};
           }});
    r.add({"add", 2, [](const std::vector<std::uint64_t>& v) { return v[0] + v[1]; },
           [](const std::vector<std::pair<Index, Index>>& b) {
             return std::pair{Index::add(b[0].first, b[1].first), Index::add(b[0].second, b[1].second)};
           }});
    return r;
  }();
  return registry;
}

const FunctionSymbol* FunctionRegistry::find(const std::string& name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind_ = Kind::Var;
  e.name_ = std::move(name);
  return e;
}

Expr Expr::zero() { return Expr{}; }

Expr Expr::succ(Expr inner) {
  Expr e;
  e.kind_ = Kind::Succ;
  e.args_.push_back(std::move(inner));
  return e;
}

Expr Expr::app(std::string symbol, std::vector<Expr> args) {
  Expr e;
  e.kind_ = Kind::FnApp;
  e.name_ = std::move(symbol);
  e.args_ = std::move(args);
  return e;
}

Expr Expr::numeral(std::uint64_t n) {
  Expr e = zero();
  for (std::uint64_t k = 0; k < n; ++k) e = succ(std::move(e));
  return e;
}

std::string Expr::str() const {
  switch (kind_) {
    case Kind::Var: return name_;
    case Kind::Zero: return "0";
    case Kind::Succ: return "s(" + inner().str() + ")";
    case Kind::FnApp: {
      std::string s = name_ + "(";
      for (std::size_t k = 0; k < args_.size(); ++k) s += (k ? ", " : "") + args_[k].str();
      return s + ")";
    }
  }
  return "?";
}

Process Process::nil() { return Process{}; }

Process Process::par(Process p, Process q) {
  Process r;
  r.kind_ = Kind::Par;
  r.children_ = {std::move(p), std::move(q)};
  return r;
}

Process Process::input(std::string channel, std::vector<std::string> params, Process body) {
  Process r;
  r.kind_ = Kind::Input;
  r.name_ = std::move(channel);
  r.params_ = std::move(params);
  r.children_ = {std::move(body)};
  return r;
}

Process Process::repl_input(std::string channel, std::vector<std::string> params, Process body) {
  Process r = input(std::move(channel), std::move(params), std::move(body));
  r.kind_ = Kind::ReplInput;
  return r;
}

Process Process::output(std::string channel, std::vector<Expr> args, Process body) {
  Process r;
  r.kind_ = Kind::Output;
  r.name_ = std::move(channel);
  r.args_ = std::move(args);
  r.children_ = {std::move(body)};
  return r;
}

Process Process::restrict(std::string name, Process body) {
  Process r;
  r.kind_ = Kind::New;
  r.name_ = std::move(name);
  r.children_ = {std::move(body)};
  return r;
}

Process Process::tick(Process body) {
  Process r;
  r.kind_ = Kind::Tick;
  r.children_ = {std::move(body)};
  return r;
}

Process Process::match(Expr scrutinee, Process zero_branch, std::string binder, Process succ_branch) {
  Process r;
  r.kind_ = Kind::Match;
  r.name_ = std::move(binder);
  r.args_ = {std::move(scrutinee)};
  r.children_ = {std::move(zero_branch), std::move(succ_branch)};
  return r;
}

Process Process::annot(std::uint64_t weight, Process body) {
  Process r;
  r.kind_ = Kind::Annot;
  r.weight_ = weight;
  r.children_ = {std::move(body)};
  return r;
}

Process Process::par_all(std::vector<Process> parts) {
  if (parts.empty()) return nil();
  Process acc = std::move(parts.back());
  for (std::size_t k = parts.size() - 1; k-- > 0;) acc = par(std::move(parts[k]), std::move(acc));
  return acc;
}

bool Process::is_guard() const {
  switch (kind_) {
    case Kind::Input:
    case Kind::ReplInput:
    case Kind::Output:
    case Kind::Tick:
    case Kind::Match: return true;
    default: return false;
  }
}

bool Process::contains_annot() const {
  if (kind_ == Kind::Annot) return true;
  return std::any_of(children_.begin(), children_.end(), [](const Process& c) { return c.contains_annot(); });
}

namespace {

std::string prefix_str(const Process& p) {
  return p.kind() == Process::Kind::Par ? "(" + p.str() + ")" : p.str();
}

std::string continuation(const Process& body) {
  return body.kind() == Process::Kind::Nil ? "" : "." + prefix_str(body);
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? ", " : "") + xs[k];
  return s;
}

}  // namespace

std::string Process::str() const {
  switch (kind_) {
    case Kind::Nil: return "0";
    case Kind::Par: {
      std::string rhs = right().kind() == Kind::Par ? "(" + right().str() + ")" : right().str();
      return left().str() + " | " + rhs;
    }
    case Kind::Input: return name_ + "?(" + join(params_) + ")" + continuation(body());
    case Kind::ReplInput: return "!" + name_ + "?(" + join(params_) + ")" + continuation(body());
    case Kind::Output: {
      std::vector<std::string> xs;
      for (const auto& a : args_) xs.push_back(a.str());
      return name_ + "!(" + join(xs) + ")" + continuation(body());
    }
    case Kind::New: return "new " + name_ + " in " + prefix_str(body());
    case Kind::Tick: return "tick." + prefix_str(body());
    case Kind::Match:
      return "match " + scrutinee().str() + " { 0 => " + children_[0].str() + " ; s(" + name_ +
             ") => " + children_[1].str() + " }";
    case Kind::Annot: return std::to_string(weight_) + " : " + prefix_str(body());
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ProcessParser {
 public:
  ProcessParser(const std::string& text, const FunctionRegistry& registry) : c_(text), registry_(registry) {}

  Process parse_all() {
    Process p = parse_par();
    if (!c_.at_end()) c_.fail("unexpected input");
    return p;
  }

  Expr parse_expr_all() {
    Expr e = parse_expr();
    if (!c_.at_end()) c_.fail("unexpected input");
    return e;
  }

 private:
  Process parse_par() {
    Process acc = parse_prefix();
    while (c_.accept("|")) acc = Process::par(std::move(acc), parse_prefix());
    return acc;
  }

  Process parse_continuation() {
    if (c_.accept(".")) return parse_prefix();
    return Process::nil();
  }

  std::vector<std::string> parse_params() {
    std::vector<std::string> params;
    c_.expect("(");
    if (!c_.accept(")")) {
      do {
        params.push_back(c_.identifier());
      } while (c_.accept(","));
      c_.expect(")");
    }
    return params;
  }

  Process parse_prefix() {
    if (c_.at_number()) {
      std::uint64_t n = c_.number();
      if (c_.accept(":")) return Process::annot(n, parse_prefix());
      if (n != 0) c_.fail("expected ':' after annotation weight");
      return Process::nil();
    }
    if (c_.accept("(")) {
      Process p = parse_par();
      c_.expect(")");
      return p;
    }
    if (c_.accept("!")) {
      std::string channel = c_.identifier();
      c_.expect("?");
      auto params = parse_params();
      return Process::repl_input(std::move(channel), std::move(params), parse_continuation());
    }
    if (c_.accept_keyword("tick")) {
      c_.expect(".");
      return Process::tick(parse_prefix());
    }
    if (c_.accept_keyword("new")) {
      std::string name = c_.identifier();
      if (!c_.accept_keyword("in")) c_.fail("expected 'in'");
      return Process::restrict(std::move(name), parse_prefix());
    }
    if (c_.accept_keyword("match")) {
      Expr e = parse_expr();
      c_.expect("{");
      c_.expect("0");
      c_.expect("=>");
      Process zero = parse_par();
      c_.expect(";");
      if (!c_.accept_keyword("s")) c_.fail("expected 's(x)' branch");
      c_.expect("(");
      std::string binder = c_.identifier();
      c_.expect(")");
      c_.expect("=>");
      Process succ = parse_par();
      c_.expect("}");
      return Process::match(std::move(e), std::move(zero), std::move(binder), std::move(succ));
    }
    if (c_.at_identifier()) {
      std::string channel = c_.identifier();
      if (c_.accept("?")) {
        auto params = parse_params();
        return Process::input(std::move(channel), std::move(params), parse_continuation());
      }
      if (c_.accept("!")) {
        c_.expect("(");
        std::vector<Expr> args;
        if (!c_.accept(")")) {
          do {
            args.push_back(parse_expr());
          } while (c_.accept(","));
          c_.expect(")");
        }
        return Process::output(std::move(channel), std::move(args), parse_continuation());
      }
      c_.fail("expected '?' or '!' after channel name");
    }
    c_.fail("expected process");
  }

  Expr parse_expr() {
    if (c_.at_number()) return Expr::numeral(c_.number());
    std::string name = c_.identifier();
    if (!c_.accept("(")) return Expr::var(std::move(name));
    std::vector<Expr> args;
    if (!c_.accept(")")) {
      do {
        args.push_back(parse_expr());
      } while (c_.accept(","));
      c_.expect(")");
    }
    if (name == "s") {
      if (args.size() != 1) c_.fail("s(...) takes one argument");
      return Expr::succ(std::move(args[0]));
    }
    const FunctionSymbol* fn = registry_.find(name);
    if (fn == nullptr) c_.fail("unknown function symbol '" + name + "'");
    if (fn->arity != args.size()) c_.fail("arity mismatch for '" + name + "'");
    return Expr::app(std::move(name), std::move(args));
  }

  Cursor c_;
  const FunctionRegistry& registry_;
};

}  // namespace

Process parse_process(const std::string& text, const FunctionRegistry& registry) {
  return ProcessParser(text, registry).parse_all();
}

Expr parse_expr(const std::string& text, const FunctionRegistry& registry) {
  return ProcessParser(text, registry).parse_expr_all();
}

// ---------------------------------------------------------------------------
// Free names and substitution

void free_names(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Expr::Kind::Var) out.insert(e.name());
  for (const auto& a : e.args()) free_names(a, out);
}

void free_names(const Process& p, std::set<std::string>& out) {
  using K = Process::Kind;
  auto bound_in = [&](const Process& body, const std::vector<std::string>& bound) {
    std::set<std::string> inner;
    free_names(body, inner);
    for (const auto& b : bound) inner.erase(b);
    out.insert(inner.begin(), inner.end());
  };
  switch (p.kind()) {
    case K::Nil: return;
    case K::Par:
      free_names(p.left(), out);
      free_names(p.right(), out);
      return;
    case K::Input:
    case K::ReplInput:
      out.insert(p.name());
      bound_in(p.body(), p.params());
      return;
    case K::Output:
      out.insert(p.name());
      for (const auto& a : p.args()) free_names(a, out);
      free_names(p.body(), out);
      return;
    case K::New: bound_in(p.body(), {p.name()}); return;
    case K::Tick:
    case K::Annot: free_names(p.body(), out); return;
    case K::Match:
      free_names(p.scrutinee(), out);
      free_names(p.children()[0], out);
      bound_in(p.children()[1], {p.name()});
      return;
  }
}

std::set<std::string> free_names(const Process& p) {
  std::set<std::string> out;
  free_names(p, out);
  return out;
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& sub) {
  switch (e.kind()) {
    case Expr::Kind::Var: {
      auto it = sub.find(e.name());
      return it == sub.end() ? e : it->second;
    }
    case Expr::Kind::Zero: return e;
    case Expr::Kind::Succ: return Expr::succ(substitute(e.inner(), sub));
    case Expr::Kind::FnApp: {
      std::vector<Expr> args;
      for (const auto& a : e.args()) args.push_back(substitute(a, sub));
      return Expr::app(e.name(), std::move(args));
    }
  }
  return e;
}

namespace {

std::string rename_channel(const std::string& name, const std::map<std::string, Expr>& sub) {
  auto it = sub.find(name);
  if (it == sub.end()) return name;
  if (!it->second.is_name()) {
    throw Error(ErrorKind::IllFormedSubstitution,
                "expression '" + it->second.str() + "' substituted for channel '" + name + "'");
  }
  return it->second.name();
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  for (std::size_t k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!avoid.contains(candidate)) return candidate;
  }
}

// Drops shadowed entries and renames binders that would capture a name
// occurring in the substitution range.
void enter_binders(std::vector<std::string>& binders, const Process& body, std::map<std::string, Expr>& sub,
                   std::map<std::string, Expr>& renaming) {
  for (const auto& b : binders) sub.erase(b);
  if (sub.empty()) return;
  std::set<std::string> range;
  for (const auto& [k, v] : sub) free_names(v, range);
  std::set<std::string> avoid = range;
  free_names(body, avoid);
  avoid.insert(binders.begin(), binders.end());
  for (auto& b : binders) {
    if (!range.contains(b)) continue;
    std::string fresh = fresh_name(b, avoid);
    avoid.insert(fresh);
    renaming[b] = Expr::var(fresh);
    b = fresh;
  }
}

Process subst_rec(const Process& p, const std::map<std::string, Expr>& sub) {
  using K = Process::Kind;
  if (sub.empty()) return p;
  auto under = [&](std::vector<std::string> binders, const Process& body,
                   auto build) -> Process {
    std::map<std::string, Expr> inner = sub;
    std::map<std::string, Expr> renaming;
    enter_binders(binders, body, inner, renaming);
    Process renamed = renaming.empty() ? body : subst_rec(body, renaming);
    return build(std::move(binders), subst_rec(renamed, inner));
  };
  switch (p.kind()) {
    case K::Nil: return p;
    case K::Par: return Process::par(subst_rec(p.left(), sub), subst_rec(p.right(), sub));
    case K::Input:
    case K::ReplInput: {
      std::string channel = rename_channel(p.name(), sub);
      bool repl = p.kind() == K::ReplInput;
      return under(p.params(), p.body(), [&](std::vector<std::string> params, Process body) {
        return repl ? Process::repl_input(channel, std::move(params), std::move(body))
                    : Process::input(channel, std::move(params), std::move(body));
      });
    }
    case K::Output: {
      std::string channel = rename_channel(p.name(), sub);
      std::vector<Expr> args;
      for (const auto& a : p.args()) args.push_back(substitute(a, sub));
      return Process::output(channel, std::move(args), subst_rec(p.body(), sub));
    }
    case K::New:
      return under({p.name()}, p.body(), [](std::vector<std::string> names, Process body) {
        return Process::restrict(names[0], std::move(body));
      });
    case K::Tick: return Process::tick(subst_rec(p.body(), sub));
    case K::Annot: return Process::annot(p.weight(), subst_rec(p.body(), sub));
    case K::Match: {
      Expr e = substitute(p.scrutinee(), sub);
      Process zero = subst_rec(p.children()[0], sub);
      return under({p.name()}, p.children()[1], [&](std::vector<std::string> names, Process succ) {
        return Process::match(e, zero, names[0], std::move(succ));
      });
    }
  }
  return p;
}

}  // namespace

Process substitute(const Process& p, const std::map<std::string, Expr>& sub) { return subst_rec(p, sub); }

Process substitute(const Process& p, const std::vector<std::string>& params, const std::vector<Expr>& args) {
  if (params.size() != args.size()) {
    throw Error(ErrorKind::ArityMismatch,
                std::to_string(params.size()) + " parameters, " + std::to_string(args.size()) + " arguments");
  }
  std::map<std::string, Expr> sub;
  for (std::size_t k = 0; k < params.size(); ++k) sub.emplace(params[k], args[k]);
  return subst_rec(p, sub);
}

}  // namespace pispan
