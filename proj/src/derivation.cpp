#include "pispan/derivation.hpp"

#include <algorithm>

#include "pispan/error.hpp"
#include "pispan/lexer.hpp"

namespace pispan {

namespace {

[[noreturn]] void fail(ErrorKind kind, const SExpr& node, const std::string& msg) {
  std::string rule = node.head();
  throw Error(kind, "at " + node.where() + (rule.empty() ? "" : " (" + rule + ")") + ": " + msg);
}

void require(const Verdict& v, const SExpr& node, const std::string& what) {
  if (v.is_proven()) return;
  std::string detail = v.note.empty() ? "" : " [" + v.note + "]";
  if (v.is_refuted()) {
    std::string witness;
    if (v.witness && !v.witness->empty()) {
      for (const auto& [k, n] : *v.witness) witness += (witness.empty() ? " at " : ", ") + k + "=" + std::to_string(n);
    }
    fail(ErrorKind::SideConditionRefuted, node, what + " is false" + witness + detail);
  }
  fail(ErrorKind::SideConditionUnknown, node, what + " could not be decided" + detail);
}

void require_vars(const VarSet& phi, const VarSet& used, const SExpr& node) {
  for (const auto& v : used) {
    if (!phi.count(v)) fail(ErrorKind::UnboundIndexVariable, node, "index variable '" + v + "' is not in scope");
  }
}

template <typename T, typename F>
T parse_text(const SExpr& node, F&& parser) {
  const std::string& text = node.atom();
  try {
    Cursor c(text);
    T value = parser(c);
    if (!c.at_end()) c.fail("unexpected trailing input");
    return value;
  } catch (const ParseError& e) {
    fail(ErrorKind::Parse, node, "in '" + text + "': " + e.what());
  }
}

Capacity parse_cap(const SExpr& node, const VarSet& phi) {
  Capacity c = parse_text<Capacity>(node, [](Cursor& cur) {
    cur.skip_ws();
    if (cur.peek() == '<' || cur.peek() == '[') return parse_capacity(cur);
    return Capacity::upper(parse_index(cur));
  });
  VarSet used;
  free_index_vars(c.hi, used);
  if (!c.upper_only) free_index_vars(c.lo, used);
  require_vars(phi, used, node);
  return c;
}

Interval parse_interval_node(const SExpr& node, const VarSet& phi) {
  Interval k = parse_text<Interval>(node, [](Cursor& cur) { return parse_interval(cur); });
  VarSet used;
  free_index_vars(k.lo, used);
  free_index_vars(k.hi, used);
  require_vars(phi, used, node);
  return k;
}

Index parse_index_node(const SExpr& node, const VarSet& phi) {
  Index i = parse_text<Index>(node, [](Cursor& cur) { return parse_index(cur); });
  VarSet used;
  free_index_vars(i, used);
  require_vars(phi, used, node);
  return i;
}

Type parse_type_node(const SExpr& node, const VarSet& phi) {
  Type t = parse_text<Type>(node, [](Cursor& cur) { return parse_type(cur); });
  VarSet used;
  free_index_vars(t, used);
  require_vars(phi, used, node);
  return t;
}

std::vector<std::pair<std::string, Type>> parse_bindings(const SExpr& node, const VarSet& phi) {
  if (!node.is_list()) fail(ErrorKind::Parse, node, "expected a list of (name type) pairs");
  std::vector<std::pair<std::string, Type>> out;
  for (const auto& item : node.items) {
    if (!item.is_list() || item.items.size() != 2) fail(ErrorKind::Parse, item, "expected (name type)");
    out.emplace_back(item.items[0].atom(), parse_type_node(item.items[1], phi));
  }
  return out;
}

const Type& lookup(const Context& env, const std::string& name, const SExpr& node) {
  auto it = env.find(name);
  if (it == env.end()) fail(ErrorKind::UnboundName, node, "'" + name + "' has no type in scope");
  return it->second;
}

Usage usage_of(const Context& ctx, const std::string& name) {
  auto it = ctx.find(name);
  return it == ctx.end() || it->second.is_nat() ? Usage::zero() : it->second.usage();
}

Usage join(const Usage& v, const Usage& u) {
  if (v.kind() == Usage::Kind::Zero) return u;
  if (u.kind() == Usage::Kind::Zero) return v;
  return Usage::par(v, u);
}

Context without(Context ctx, const std::vector<std::string>& names) {
  for (const auto& n : names) ctx.erase(n);
  return ctx;
}

Context compose(const Context& g, const Context& d, const SExpr& node) {
  try {
    return par_contexts(g, d);
  } catch (const Error& e) {
    fail(ErrorKind::IncompatibleTypes, node, e.what());
  }
}

// Compares two synthesized contexts name by name up to usage congruence.
void require_same_context(const VarSet& phi, const ConstraintSet& assumptions, const Context& expected,
                          const Context& got, const SExpr& node, const CheckConfig& config) {
  std::set<std::string> names;
  for (const auto& [n, t] : expected) names.insert(n);
  for (const auto& [n, t] : got) names.insert(n);
  for (const auto& n : names) {
    Usage a = usage_of(expected, n);
    Usage b = usage_of(got, n);
    Verdict v = usage_equiv(phi, assumptions, a, b, config.usage.entail);
    if (v.is_refuted()) {
      fail(ErrorKind::ContextMismatch, node, "'" + n + "': expected " + a.str() + ", got " + b.str());
    }
    require(v, node, "usage of '" + n + "' equals " + a.str());
  }
}

// Renames server binders that clash with `phi`.
Type freshen_server(const Type& t, const VarSet& phi) {
  std::map<std::string, Index> renaming;
  std::vector<std::string> binders;
  VarSet taken = phi;
  free_index_vars(t, taken);
  for (const auto& b : t.binders()) {
    std::string name = b;
    for (unsigned k = 1; taken.count(name); ++k) name = b + "_" + std::to_string(k);
    taken.insert(name);
    binders.push_back(name);
    if (name != b) renaming.emplace(b, Index::var(name));
  }
  if (renaming.empty()) return t;
  std::vector<Type> payload;
  for (const auto& p : t.payload()) payload.push_back(subst_type(p, renaming));
  Interval k{subst_index(t.complexity().lo, renaming), subst_index(t.complexity().hi, renaming)};
  return Type::serv(std::move(binders), std::move(k), std::move(payload), t.usage());
}

std::vector<const SExpr*> subtrees(const SExpr& node, std::size_t expected) {
  std::vector<const SExpr*> out;
  for (const SExpr* item : node.positional()) {
    if (item->is_list()) out.push_back(item);
  }
  if (out.size() != expected) {
    fail(ErrorKind::RuleMismatch, node,
         "expected " + std::to_string(expected) + " premise(s), found " + std::to_string(out.size()));
  }
  return out;
}

const char* rule_for(const Process& p) {
  switch (p.kind()) {
    case Process::Kind::Nil: return "zero";
    case Process::Kind::Par: return "par";
    case Process::Kind::Input: return "ich";
    case Process::Kind::ReplInput: return "iserv";
    case Process::Kind::Output: return "och/oserv";
    case Process::Kind::New: return "nu";
    case Process::Kind::Tick: return "tick";
    case Process::Kind::Match: return "case";
    case Process::Kind::Annot: return "annot";
  }
  return "?";
}

std::string head_of(const Process& p) {
  std::string s = p.str();
  return s.size() > 40 ? s.substr(0, 37) + "..." : s;
}

class Checker {
 public:
  explicit Checker(const CheckConfig& config) : config_(config) {}

  std::vector<TraceEntry> trace;

  Type expr(const VarSet& phi, const ConstraintSet& as, const Context& env, const Expr& e, const SExpr* script) {
    if (script && script->is_symbol("_")) script = nullptr;
    std::string rule = script ? script->head() : "";
    if (script && !script->is_list()) fail(ErrorKind::Parse, *script, "expected an expression rule");
    if (rule == "sube") {
      const SExpr* target = script->option(":type");
      if (!target) fail(ErrorKind::RuleMismatch, *script, "sube needs :type");
      auto kids = subtrees(*script, 1);
      Type inner = expr(phi, as, env, e, kids[0]);
      Type t = parse_type_node(*target, phi);
      require(subtype(phi, as, inner, t, config_.usage), *script, inner.str() + " <= " + t.str());
      return t;
    }
    auto expect_rule = [&](const char* name) {
      if (script && rule != name) {
        fail(ErrorKind::RuleMismatch, *script, "expression " + e.str() + " needs rule " + name + ", got " + rule);
      }
    };
    auto nat_of = [&](const Type& t, const Expr& sub) {
      if (!t.is_nat()) {
        throw Error(ErrorKind::IncompatibleTypes, "expression " + sub.str() + " has type " + t.str() + ", expected Nat");
      }
      return t;
    };
    switch (e.kind()) {
      case Expr::Kind::Var: {
        expect_rule("var");
        auto it = env.find(e.name());
        if (it == env.end()) throw Error(ErrorKind::UnboundName, "'" + e.name() + "' has no type in scope");
        return it->second;
      }
      case Expr::Kind::Zero:
        expect_rule("zeroe");
        return Type::nat(Index::constant(0), Index::constant(0));
      case Expr::Kind::Succ: {
        expect_rule("succe");
        const SExpr* child = script ? subtrees(*script, 1)[0] : nullptr;
        Type t = nat_of(expr(phi, as, env, e.inner(), child), e.inner());
        return Type::nat(Index::add(t.lo(), Index::constant(1)), Index::add(t.hi(), Index::constant(1)));
      }
      case Expr::Kind::FnApp: {
        expect_rule("fne");
        const FunctionSymbol* f = config_.registry->find(e.name());
        if (!f) throw Error(ErrorKind::UnknownSymbol, e.name());
        std::vector<const SExpr*> kids(e.args().size(), nullptr);
        if (script) kids = subtrees(*script, e.args().size());
        std::vector<std::pair<Index, Index>> bounds;
        for (std::size_t k = 0; k < e.args().size(); ++k) {
          Type t = nat_of(expr(phi, as, env, e.args()[k], kids[k]), e.args()[k]);
          bounds.emplace_back(t.lo(), t.hi());
        }
        auto [lo, hi] = f->size(bounds);
        return Type::nat(std::move(lo), std::move(hi));
      }
    }
    throw Error(ErrorKind::RuleMismatch, "unsupported expression " + e.str());
  }

  CheckResult process(const VarSet& phi, const ConstraintSet& as, const Context& env, const Process& p,
                      const SExpr& node, unsigned depth) {
    if (!node.is_list() || node.head().empty()) fail(ErrorKind::Parse, node, "expected a rule node");
    const std::string rule = node.head();
    std::size_t slot = trace.size();
    trace.push_back({depth, rule, node.where(), {}, Interval::zero()});
    CheckResult r = rule == "sub" ? sub(phi, as, env, p, node, depth) : apply(phi, as, env, p, node, rule, depth);
    trace[slot].context = context_str(r.context);
    trace[slot].complexity = {simplify(r.complexity.lo), simplify(r.complexity.hi)};
    return r;
  }

 private:
  CheckResult sub(const VarSet& phi, const ConstraintSet& as, const Context& env, const Process& p, const SExpr& node,
                  unsigned depth) {
    Context inner_env = env;
    if (const SExpr* widen = node.option(":widen")) {
      for (auto& [name, t] : parse_bindings(*widen, phi)) {
        const Type& old = lookup(env, name, node);
        require(subtype(phi, as, old, t, config_.usage), node, "'" + name + "': " + old.str() + " <= " + t.str());
        inner_env[name] = t;
      }
    }
    CheckResult r = process(phi, as, inner_env, p, *subtrees(node, 1)[0], depth + 1);
    if (const SExpr* ctx = node.option(":ctx")) {
      for (auto& [name, t] : parse_bindings(*ctx, phi)) {
        auto it = r.context.find(name);
        Type base = it != r.context.end() ? it->second : lookup(inner_env, name, node).skeleton();
        if (base.is_nat()) fail(ErrorKind::RuleMismatch, node, "'" + name + "' is not a channel; use :widen");
        require(subtype(phi, as, t, base, config_.usage), node, "'" + name + "': " + t.str() + " <= " + base.str());
        r.context[name] = base.with_usage(t.usage());
      }
    }
    if (const SExpr* k = node.option(":k")) {
      Interval wide = parse_interval_node(*k, phi);
      require(entails_all(phi, as, included(r.complexity, wide), config_.usage.entail), node,
              r.complexity.str() + " included in " + wide.str());
      r.complexity = wide;
    }
    return r;
  }

  CheckResult apply(const VarSet& phi, const ConstraintSet& as, const Context& env, const Process& p,
                    const SExpr& node, const std::string& rule, unsigned depth) {
    auto mismatch = [&] {
      fail(ErrorKind::RuleMismatch, node, "process " + head_of(p) + " needs rule " + rule_for(p) + ", got " + rule);
    };
    switch (p.kind()) {
      case Process::Kind::Nil:
        if (rule != "zero") mismatch();
        return {Interval::zero(), {}, {}};

      case Process::Kind::Par: {
        if (rule != "par") mismatch();
        auto kids = subtrees(node, 2);
        CheckResult l = process(phi, as, env, p.left(), *kids[0], depth + 1);
        CheckResult r = process(phi, as, env, p.right(), *kids[1], depth + 1);
        for (auto [key, got] : {std::pair{":left", &l.context}, std::pair{":right", &r.context}}) {
          if (const SExpr* declared = node.option(key)) {
            Context expected;
            for (auto& [name, t] : parse_bindings(*declared, phi)) expected.emplace(name, t);
            require_same_context(phi, as, expected, *got, node, config_);
          }
        }
        return {ilub(l.complexity, r.complexity), compose(l.context, r.context, node), {}};
      }

      case Process::Kind::Tick:
      case Process::Kind::Annot: {
        if (rule != (p.kind() == Process::Kind::Tick ? "tick" : "annot")) mismatch();
        Index m = Index::constant(p.kind() == Process::Kind::Tick ? 1 : p.weight());
        CheckResult r = process(phi, as, env, p.body(), *subtrees(node, 1)[0], depth + 1);
        return {add(r.complexity, Interval::point(m)), delay_context(Interval::point(m), r.context), {}};
      }

      case Process::Kind::Input:
      case Process::Kind::ReplInput:
        if (rule != (p.kind() == Process::Kind::Input ? "ich" : "iserv")) mismatch();
        return input(phi, as, env, p, node, depth);

      case Process::Kind::Output:
        if (rule != "och" && rule != "oserv") mismatch();
        return output(phi, as, env, p, node, rule == "oserv", depth);

      case Process::Kind::Match:
        if (rule != "case") mismatch();
        return match(phi, as, env, p, node, depth);

      case Process::Kind::New: {
        if (rule != "nu") mismatch();
        const SExpr* declared = node.option(":type");
        if (!declared) fail(ErrorKind::RuleMismatch, node, "nu needs :type");
        Type t = parse_type_node(*declared, phi);
        Context inner = env;
        inner[p.name()] = t;
        CheckResult r = process(phi, as, inner, p.body(), *subtrees(node, 1)[0], depth + 1);
        if (!t.is_nat()) {
          Usage got = usage_of(r.context, p.name());
          Verdict same = usage_equiv(phi, as, t.usage(), got, config_.usage.entail);
          if (same.is_refuted()) {
            fail(ErrorKind::ContextMismatch, node,
                 "'" + p.name() + "': declared " + t.usage().str() + ", body uses " + got.str());
          }
          require(same, node, "usage of '" + p.name() + "' matches its declaration");
          Reliability rel = type_reliable(phi, as, t, config_.usage);
          if (rel.outcome == Outcome::Refuted) {
            std::string path;
            for (const auto& s : rel.trace) path += (path.empty() ? "" : " -> ") + s;
            fail(ErrorKind::SideConditionRefuted, node, "type of '" + p.name() + "' is not reliable: " + path);
          }
          if (rel.outcome == Outcome::Unknown) {
            fail(ErrorKind::SideConditionUnknown, node,
                 "reliability of '" + p.name() + "' undecided: " + rel.note + " (try a larger --unfold or --fuel)");
          }
        }
        r.context.erase(p.name());
        return r;
      }
    }
    fail(ErrorKind::RuleMismatch, node, "unsupported process form");
  }

  // Checks that each channel parameter was used exactly as its payload type says.
  void check_params(const VarSet& phi, const ConstraintSet& as, const Process& p, const std::vector<Type>& payload,
                    const Context& body, const SExpr& node) {
    if (payload.size() != p.params().size()) {
      fail(ErrorKind::RuleMismatch, node,
           "channel carries " + std::to_string(payload.size()) + " value(s), input binds " +
               std::to_string(p.params().size()));
    }
    for (std::size_t k = 0; k < payload.size(); ++k) {
      if (payload[k].is_nat()) continue;
      Usage got = usage_of(body, p.params()[k]);
      Verdict v = usage_equiv(phi, as, payload[k].usage(), got, config_.usage.entail);
      if (v.is_refuted()) {
        fail(ErrorKind::ContextMismatch, node,
             "parameter '" + p.params()[k] + "': payload says " + payload[k].usage().str() + ", body uses " + got.str());
      }
      require(v, node, "usage of parameter '" + p.params()[k] + "'");
    }
  }

  CheckResult input(const VarSet& phi, const ConstraintSet& as, const Context& env, const Process& p,
                    const SExpr& node, unsigned depth) {
    const bool server = p.kind() == Process::Kind::ReplInput;
    const SExpr* cap_node = node.option(":cap");
    if (!cap_node) fail(ErrorKind::RuleMismatch, node, "missing :cap");
    Capacity cap = parse_cap(*cap_node, phi);
    Type chan = lookup(env, p.name(), node);
    if (chan.kind() != (server ? Type::Kind::Serv : Type::Kind::Chan)) {
      fail(ErrorKind::RuleMismatch, node, "'" + p.name() + "' has type " + chan.str());
    }
    VarSet inner_phi = phi;
    if (server) {
      chan = freshen_server(chan, phi);
      inner_phi.insert(chan.binders().begin(), chan.binders().end());
    }
    Context inner = env;
    inner[p.name()] = chan;
    for (std::size_t k = 0; k < p.params().size() && k < chan.payload().size(); ++k) {
      inner[p.params()[k]] = chan.payload()[k];
    }
    CheckResult r = process(inner_phi, as, inner, p.body(), *subtrees(node, 1)[0], depth + 1);
    check_params(inner_phi, as, p, chan.payload(), r.context, node);
    Context rest = without(r.context, p.params());
    Usage u = usage_of(rest, p.name());
    rest.erase(p.name());
    Usage action = Usage::in(Interval::zero(), cap, u);

    if (!server) {
      Context out = delay_context(cap, rest);
      out[p.name()] = chan.skeleton().with_usage(action);
      return {seq_complexity(cap, r.complexity), out, {}};
    }
    require(entails_all(inner_phi, as,
                        {Constraint::eq(r.complexity.lo, chan.complexity().lo),
                         Constraint::eq(r.complexity.hi, chan.complexity().hi)},
                        config_.usage.entail),
            node, "body complexity " + r.complexity.str() + " equals server complexity " + chan.complexity().str());
    VarSet leaked;
    free_index_vars(u, leaked);
    for (const auto& [name, t] : rest) free_index_vars(t, leaked);
    for (const auto& b : chan.binders()) {
      if (leaked.count(b)) {
        fail(ErrorKind::RuleMismatch, node, "server index '" + b + "' escapes into the surrounding context");
      }
    }
    Context out = delay_context(cap, bang_context(rest));
    out[p.name()] = lookup(env, p.name(), node).skeleton().with_usage(Usage::bang(action));
    return {Interval::zero(), out, {}};
  }

  CheckResult output(const VarSet& phi, const ConstraintSet& as, const Context& env, const Process& p,
                     const SExpr& node, bool server, unsigned depth) {
    const SExpr* cap_node = node.option(":cap");
    if (!cap_node) fail(ErrorKind::RuleMismatch, node, "missing :cap");
    Capacity cap = parse_cap(*cap_node, phi);
    const Type& chan = lookup(env, p.name(), node);
    if (chan.kind() != (server ? Type::Kind::Serv : Type::Kind::Chan)) {
      fail(ErrorKind::RuleMismatch, node, "'" + p.name() + "' has type " + chan.str());
    }
    std::vector<Type> payload = chan.payload();
    Interval call = Interval::zero();
    if (server) {
      const SExpr* inst = node.option(":inst");
      if (!inst || !inst->is_list() || inst->items.size() != chan.binders().size()) {
        fail(ErrorKind::RuleMismatch, node,
             "oserv needs :inst with " + std::to_string(chan.binders().size()) + " index(es)");
      }
      std::map<std::string, Index> sigma;
      for (std::size_t k = 0; k < chan.binders().size(); ++k) {
        sigma.emplace(chan.binders()[k], parse_index_node(inst->items[k], phi));
      }
      for (auto& t : payload) t = subst_type(t, sigma);
      call = {subst_index(chan.complexity().lo, sigma), subst_index(chan.complexity().hi, sigma)};
    }
    if (payload.size() != p.args().size()) {
      fail(ErrorKind::RuleMismatch, node,
           "channel carries " + std::to_string(payload.size()) + " value(s), output sends " +
               std::to_string(p.args().size()));
    }
    std::vector<const SExpr*> arg_scripts(p.args().size(), nullptr);
    if (const SExpr* args = node.option(":args")) {
      if (!args->is_list() || args->items.size() != p.args().size()) {
        fail(ErrorKind::RuleMismatch, node, ":args must list one script per argument");
      }
      for (std::size_t k = 0; k < args->items.size(); ++k) arg_scripts[k] = &args->items[k];
    }

    Context sent;
    for (std::size_t k = 0; k < payload.size(); ++k) {
      const Expr& e = p.args()[k];
      const Type& want = payload[k];
      const SExpr* script = arg_scripts[k] && arg_scripts[k]->is_symbol("_") ? nullptr : arg_scripts[k];
      if (want.is_nat()) {
        Type got;
        try {
          got = expr(phi, as, env, e, script);
        } catch (const Error& err) {
          if (err.kind() == ErrorKind::Parse || err.kind() == ErrorKind::SideConditionRefuted ||
              err.kind() == ErrorKind::SideConditionUnknown || err.kind() == ErrorKind::RuleMismatch) {
            throw;
          }
          fail(err.kind(), node, err.what());
        }
        if (!(got == want)) {
          require(subtype(phi, as, got, want, config_.usage), node,
                  "argument " + e.str() + ": " + got.str() + " <= " + want.str());
        }
        continue;
      }
      if (!e.is_name()) fail(ErrorKind::RuleMismatch, node, "argument " + e.str() + " must be a channel name");
      const Type& have = lookup(env, e.name(), node);
      Type carried = want;
      if (script && script->head() == "sube") {
        const SExpr* target = script->option(":type");
        if (!target) fail(ErrorKind::RuleMismatch, *script, "sube needs :type");
        carried = parse_type_node(*target, phi);
        require(subtype(phi, as, carried, want, config_.usage), *script, carried.str() + " <= " + want.str());
      } else if (script && script->head() != "var") {
        fail(ErrorKind::RuleMismatch, *script, "channel argument needs rule var or sube");
      }
      require(same_skeleton(phi, as, have, carried, config_.usage.entail), node,
              "'" + e.name() + "' : " + have.skeleton().str() + " matches " + carried.skeleton().str());
      sent = compose(sent, Context{{e.name(), have.skeleton().with_usage(carried.usage())}}, node);
    }

    CheckResult r = process(phi, as, env, p.body(), *subtrees(node, 1)[0], depth + 1);
    Usage v = usage_of(sent, p.name());
    Usage u = usage_of(r.context, p.name());
    sent.erase(p.name());
    r.context.erase(p.name());
    Context out = delay_context(cap, compose(r.context, sent, node));
    out[p.name()] = chan.skeleton().with_usage(Usage::out(Interval::zero(), cap, join(v, u)));
    Interval k = server ? seq_complexity(cap, ilub(r.complexity, call)) : seq_complexity(cap, r.complexity);
    return {k, out, {}};
  }

  CheckResult match(const VarSet& phi, const ConstraintSet& as, const Context& env, const Process& p,
                    const SExpr& node, unsigned depth) {
    const SExpr* script = node.option(":expr");
    Type t;
    try {
      t = expr(phi, as, env, p.scrutinee(), script);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::SideConditionRefuted || err.kind() == ErrorKind::SideConditionUnknown ||
          err.kind() == ErrorKind::RuleMismatch || err.kind() == ErrorKind::Parse) {
        throw;
      }
      fail(err.kind(), node, err.what());
    }
    if (!t.is_nat()) fail(ErrorKind::IncompatibleTypes, node, "scrutinee has type " + t.str());
    auto kids = subtrees(node, 2);
    ConstraintSet zero_as = as;
    zero_as.push_back(Constraint::le(t.lo(), Index::constant(0)));
    ConstraintSet succ_as = as;
    succ_as.push_back(Constraint::le(Index::constant(1), t.hi()));
    Context succ_env = env;
    succ_env[p.name()] = Type::nat(Index::sub(t.lo(), Index::constant(1)), Index::sub(t.hi(), Index::constant(1)));

    CheckResult z = process(phi, zero_as, env, p.left(), *kids[0], depth + 1);
    CheckResult s = process(phi, succ_as, succ_env, p.right(), *kids[1], depth + 1);
    s.context.erase(p.name());
    require_same_context(phi, as, z.context, s.context, node, config_);
    require(entails_all(phi, as,
                        {Constraint::eq(z.complexity.lo, s.complexity.lo),
                         Constraint::eq(z.complexity.hi, s.complexity.hi)},
                        config_.usage.entail),
            node, "branch complexities " + z.complexity.str() + " and " + s.complexity.str() + " agree");
    return z;
  }

  const CheckConfig& config_;
};

}  // namespace

Type check_expr(const VarSet& phi, const ConstraintSet& assumptions, const Context& env, const Expr& e,
                const SExpr* script, const CheckConfig& config) {
  Checker c(config);
  return c.expr(phi, assumptions, env, e, script);
}

CheckResult check_process(const VarSet& phi, const ConstraintSet& assumptions, const Context& env,
                          const Process& p, const SExpr& script, const CheckConfig& config) {
  Checker c(config);
  CheckResult r = c.process(phi, assumptions, env, p, script, 0);
  r.trace = std::move(c.trace);
  return r;
}

DerivationScript parse_derivation(const std::string& text) {
  SExpr top = parse_sexpr(text);
  if (top.head() != "deriv") throw ParseError("a derivation file must be a (deriv ...) form", top.line, top.column);
  DerivationScript d;
  if (const SExpr* f = top.option(":process")) d.process_file = f->atom();
  if (const SExpr* s = top.option(":source")) d.process_source = s->atom();
  if (!d.process_file && !d.process_source) {
    throw ParseError("derivation needs :process or :source", top.line, top.column);
  }
  if (const SExpr* idx = top.option(":indices")) {
    if (!idx->is_list()) throw ParseError(":indices must be a list", idx->line, idx->column);
    for (const auto& v : idx->items) d.indices.insert(v.atom());
  }
  if (const SExpr* cs = top.option(":constraints")) {
    if (!cs->is_list()) throw ParseError(":constraints must be a list", cs->line, cs->column);
    for (const auto& c : cs->items) {
      Constraint k = parse_text<Constraint>(c, [](Cursor& cur) { return parse_constraint(cur); });
      VarSet used;
      free_index_vars(k.lhs, used);
      free_index_vars(k.rhs, used);
      require_vars(d.indices, used, c);
      d.constraints.push_back(std::move(k));
    }
  }
  if (const SExpr* ctx = top.option(":context")) {
    for (auto& [name, t] : parse_bindings(*ctx, d.indices)) d.context.emplace(name, t);
  }
  auto trees = top.positional();
  if (trees.size() != 1 || !trees[0]->is_list()) {
    throw ParseError("derivation needs exactly one root rule node", top.line, top.column);
  }
  d.root = *trees[0];
  return d;
}

CheckResult check_derivation(const DerivationScript& script, const Process& p, const CheckConfig& config) {
  for (const auto& name : free_names(p)) {
    if (!script.context.count(name)) {
      throw Error(ErrorKind::UnboundName, "free name '" + name + "' is not declared in :context");
    }
  }
  CheckResult r = check_process(script.indices, script.constraints, script.context, p, script.root, config);
  Context declared;
  for (const auto& [name, t] : script.context) {
    if (!t.is_nat()) declared.emplace(name, t);
  }
  require_same_context(script.indices, script.constraints, declared, r.context, script.root, config);
  r.context = declared;
  return r;
}

}  // namespace pispan
