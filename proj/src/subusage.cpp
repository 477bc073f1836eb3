#include <functional>

#include "pispan/usage.hpp"

namespace pispan {

namespace {

constexpr std::size_t kFullSubsetLimit = 4;

// Searches U [= V by decomposing both sides into parallel components and
// matching every component of V against one component of U, optionally
// pulling further U components under a prefix (the absorption rule).
class SubusageSearch {
 public:
  SubusageSearch(const VarSet& phi, const ConstraintSet& assumptions, const UsageConfig& config)
      : phi_(phi), assumptions_(assumptions), config_(config) {}

  bool sub(const Usage& u, const Usage& v, unsigned depth) {
    std::vector<Usage> vs = components(v);
    if (vs.empty()) return true;
    if (usage_equiv(phi_, assumptions_, u, v, config_.entail).is_proven()) return true;
    if (depth == 0) {
      exhausted_ = true;
      return false;
    }
    std::vector<Usage> us = components(u);
    std::vector<bool> consumed(us.size(), false);
    return match(us, vs, 0, consumed, depth - 1);
  }

  bool undecided() const { return unknown_; }
  bool exhausted() const { return exhausted_; }

 private:
  bool holds(const ConstraintSet& goals) {
    Verdict v = entails_all(phi_, assumptions_, goals, config_.entail);
    if (v.is_unknown()) unknown_ = true;
    return v.is_proven();
  }

  // alpha^A_Ic ... [= alpha^B_Jc ... on the prefix alone.
  bool prefix_ok(const Usage& u, const Usage& v) {
    if (u.kind() != v.kind()) return false;
    auto cap = capacity_le(u.capacity(), v.capacity());
    if (!cap) return false;
    ConstraintSet goals = included(v.obligation(), u.obligation());
    goals.insert(goals.end(), cap->begin(), cap->end());
    return holds(goals);
  }

  bool single(const Usage& u, const Usage& v, unsigned depth) {
    if (usage_equiv(phi_, assumptions_, u, v, config_.entail).is_proven()) return true;
    using K = Usage::Kind;
    if (u.kind() == K::Choice) {
      if (v.kind() == K::Choice && sub(u.left(), v.left(), depth) && sub(u.right(), v.right(), depth)) return true;
      return sub(u.left(), v, depth) || sub(u.right(), v, depth);
    }
    if (u.kind() == K::Bang) {
      if (v.kind() == K::Bang) return sub(u.cont(), v.cont(), depth);
      return sub(u.cont(), v, depth);
    }
    if (u.is_action() && v.is_action()) return prefix_ok(u, v) && sub(u.cont(), v.cont(), depth);
    return false;
  }

  // Reverses a delay by D on one component; nullopt unless re-delaying
  // reproduces the component.
  std::optional<Usage> undelay(const Interval& d, const Usage& x) {
    std::function<Usage(const Usage&)> shift = [&](const Usage& w) -> Usage {
      switch (w.kind()) {
        case Usage::Kind::Zero: return w;
        case Usage::Kind::Par: return Usage::par(shift(w.left()), shift(w.right()));
        case Usage::Kind::Choice: return Usage::choice(shift(w.left()), shift(w.right()));
        case Usage::Kind::Bang: return Usage::bang(shift(w.cont()));
        default:
          return Usage::action(w.kind(),
                               {Index::sub(w.obligation().lo, d.lo), Index::sub(w.obligation().hi, d.hi)},
                               w.capacity(), w.cont());
      }
    };
    Usage back = shift(x);
    if (!usage_equiv(phi_, assumptions_, delay(d, back), x, config_.entail).is_proven()) return std::nullopt;
    return back;
  }

  std::vector<std::vector<std::size_t>> absorb_candidates(const std::vector<std::size_t>& avail) {
    std::vector<std::vector<std::size_t>> out;
    if (avail.size() <= kFullSubsetLimit) {
      for (std::size_t mask = 1; mask < (std::size_t{1} << avail.size()); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t b = 0; b < avail.size(); ++b) {
          if (mask & (std::size_t{1} << b)) s.push_back(avail[b]);
        }
        out.push_back(std::move(s));
      }
    } else {
      for (std::size_t a = 0; a < avail.size(); ++a) {
        out.push_back({avail[a]});
        for (std::size_t b = a + 1; b < avail.size(); ++b) out.push_back({avail[a], avail[b]});
      }
    }
    return out;
  }

  bool match(const std::vector<Usage>& us, const std::vector<Usage>& vs, std::size_t k, std::vector<bool>& consumed,
             unsigned depth) {
    if (k == vs.size()) return true;
    const Usage& v = vs[k];
    const bool v_banged = v.kind() == Usage::Kind::Bang;
    for (std::size_t m = 0; m < us.size(); ++m) {
      if (consumed[m]) continue;
      const Usage& u = us[m];
      const bool u_banged = u.kind() == Usage::Kind::Bang;
      if (v_banged && !u_banged) continue;
      auto take = [&](const std::vector<std::size_t>& extra) {
        std::vector<std::size_t> marked;
        for (std::size_t idx : extra) {
          if (us[idx].kind() != Usage::Kind::Bang && !consumed[idx]) {
            consumed[idx] = true;
            marked.push_back(idx);
          }
        }
        bool ok = match(us, vs, k + 1, consumed, depth);
        for (std::size_t idx : marked) consumed[idx] = false;
        return ok;
      };

      if (single(u, v, depth) && take({m})) return true;

      // Absorption: U's prefix plus other components delayed past it.
      const Usage& ua = u_banged ? u.cont() : u;
      const Usage& va = v_banged ? v.cont() : v;
      if (!ua.is_action() || !va.is_action() || !prefix_ok(ua, va)) continue;
      std::vector<std::size_t> avail;
      for (std::size_t o = 0; o < us.size(); ++o) {
        if (o == m || consumed[o]) continue;
        if (v_banged && us[o].kind() != Usage::Kind::Bang) continue;
        avail.push_back(o);
      }
      Interval d = add(ua.obligation(), ua.capacity());
      for (const auto& subset : absorb_candidates(avail)) {
        std::vector<Usage> parts{ua.cont()};
        bool ok = true;
        for (std::size_t o : subset) {
          const Usage& x = v_banged ? us[o].cont() : us[o];
          auto back = undelay(d, x);
          if (!back) {
            ok = false;
            break;
          }
          parts.push_back(*back);
        }
        if (!ok || !sub(Usage::par_all(std::move(parts)), va.cont(), depth)) continue;
        std::vector<std::size_t> extra = subset;
        extra.push_back(m);
        if (take(extra)) return true;
      }
    }
    return false;
  }

  const VarSet& phi_;
  const ConstraintSet& assumptions_;
  const UsageConfig& config_;
  bool unknown_ = false;
  bool exhausted_ = false;
};

}  // namespace

Verdict subusage(const VarSet& phi, const ConstraintSet& assumptions, const Usage& u, const Usage& v,
                 const UsageConfig& config) {
  SubusageSearch search(phi, assumptions, config);
  if (search.sub(u, v, config.depth)) return Verdict::proven();
  if (search.undecided()) return Verdict::unknown("an index side condition was undecided");
  if (search.exhausted()) return Verdict::unknown("no derivation within depth " + std::to_string(config.depth));
  return Verdict::unknown("no derivation found");
}

}  // namespace pispan
