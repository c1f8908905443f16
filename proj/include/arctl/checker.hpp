#pragma once

// Explicit-state satisfaction sets for ARCTL and the recursive witness
// generator.
//
// E<a>G is read over infinite (lasso) paths only: a state whose alpha-paths
// all end in a deadlock does not satisfy E<a>G phi. E<a>X and E<a>U are
// satisfied by finite prefixes. Universal quantifiers are the duals.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "arctl/formula.hpp"
#include "arctl/model.hpp"
#include "arctl/tlace.hpp"

namespace arctl {

/// A generator routine was called on a state that does not satisfy the
/// formula it was asked to explain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class BranchOp { eax, eau, eag };

inline const char* to_string(BranchOp op) {
  switch (op) {
    case BranchOp::eax: return "EaX";
    case BranchOp::eau: return "EaU";
    case BranchOp::eag: return "EaG";
  }
  return "?";
}

struct GenerationParams {
  std::set<BranchOp> branch_ops{BranchOp::eax, BranchOp::eau, BranchOp::eag};
  /// Maximum nesting of generated branches; branches below it are left as
  /// unexpanded annotations.
  std::optional<std::size_t> max_depth;

  bool expands(BranchOp op, std::size_t level) const {
    return branch_ops.count(op) != 0 && (!max_depth || level <= *max_depth);
  }
};

struct Verdict {
  bool holds = true;
  /// Witness of the negated property at `witness_state`.
  std::optional<TlaceNode> counterexample;
  std::optional<StateId> witness_state;
  /// The formula the counter-example explains (NNF of the negation).
  std::optional<Formula> explained;
};

class Checker {
 public:
  explicit Checker(const MixedTransitionSystem& m) : m_(m) {}

  const MixedTransitionSystem& model() const { return m_; }

  /// States satisfying `f`. Accepts any ARCTL formula; CTLK-only
  /// constructs raise UnsupportedOperatorError.
  const StateSet& sat(const Formula& f) {
    if (auto it = sat_cache_.find(f.id()); it != sat_cache_.end())
      return it->second.second;
    StateSet s = compute(f);
    return sat_cache_.emplace(f.id(), std::make_pair(f, std::move(s)))
        .first->second.second;
  }

  bool holds(StateId s, const Formula& f) { return sat(f).test(s.value); }

  /// <s, a1, s1> with s1 |= phi; the least candidate in (action, state)
  /// order.
  Path eax_explain(StateId s, const Formula& phi, const ActionFormula& alpha) {
    const auto& mask = actions(alpha);
    const StateSet& target = sat(phi);
    for (const Step& st : m_.successors(s)) {
      if (mask[st.action.value] && target.test(st.state.value))
        return Path{{s, st.state}, {st.action}, std::nullopt};
    }
    throw PreconditionError("E<" + to_string(alpha) + ">X " + to_string(phi) +
                            " does not hold in '" + m_.state_name(s) + "'");
  }

  /// Shortest path whose inner states satisfy phi and whose last state
  /// satisfies psi.
  Path eau_explain(StateId s, const Formula& phi, const Formula& psi,
                   const ActionFormula& alpha) {
    const auto& mask = actions(alpha);
    const StateSet& left = sat(phi);
    const StateSet& goal = sat(psi);
    if (goal.test(s.value)) return Path{{s}, {}, std::nullopt};
    if (left.test(s.value)) {
      std::vector<std::optional<Step>> parent(m_.state_count());
      StateSet seen = m_.empty_set();
      seen.set(s.value);
      std::deque<StateId> todo{s};
      while (!todo.empty()) {
        const StateId u = todo.front();
        todo.pop_front();
        for (const Step& st : m_.successors(u)) {
          if (!mask[st.action.value] || seen.test(st.state.value)) continue;
          seen.set(st.state.value);
          parent[st.state.value] = Step{st.action, u};
          if (goal.test(st.state.value)) return unwind(s, st.state, parent);
          if (left.test(st.state.value)) todo.push_back(st.state);
        }
      }
    }
    throw PreconditionError("E<" + to_string(alpha) + ">[" + to_string(phi) +
                            " U " + to_string(psi) + "] does not hold in '" +
                            m_.state_name(s) + "'");
  }

  /// Shortest lasso <s0, a1, ..., sm> through phi-states with sm = sk for
  /// the returned loop index k < m. Minimizes m, then the loop state.
  Path eag_explain(StateId s, const Formula& phi, const ActionFormula& alpha) {
    const auto& mask = actions(alpha);
    const StateSet& inside = sat(phi);
    auto fail = [&]() -> PreconditionError {
      return PreconditionError("E<" + to_string(alpha) + ">G " + to_string(phi) +
                               " does not hold in '" + m_.state_name(s) + "'");
    };
    if (!inside.test(s.value)) throw fail();

    const auto from_s = bfs(s, mask, inside);
    std::optional<std::size_t> best;
    StateId entry{0};
    for (StateId u : m_.states()) {
      const auto& du = from_s.dist[u.value];
      if (!du || (best && *du >= *best)) continue;
      // Shortest cycle through u: BFS from u until an edge returns to u.
      auto around = bfs(u, mask, inside);
      std::optional<std::size_t> cycle;
      for (const Step& st : m_.predecessors(u)) {
        if (!mask[st.action.value] || !inside.test(st.state.value)) continue;
        const auto& dv = around.dist[st.state.value];
        if (dv && (!cycle || *dv + 1 < *cycle)) cycle = *dv + 1;
      }
      if (!cycle) continue;
      if (!best || *du + *cycle < *best) {
        best = *du + *cycle;
        entry = u;
      }
    }
    if (!best) throw fail();

    Path stem = unwind(s, entry, from_s.parent);
    // Close the cycle with the least (action, source) edge into `entry`
    // among the shortest.
    const auto around = bfs(entry, mask, inside);
    std::optional<Step> closing;
    std::size_t closing_len = 0;
    for (const Step& st : m_.predecessors(entry)) {
      if (!mask[st.action.value] || !inside.test(st.state.value)) continue;
      const auto& dv = around.dist[st.state.value];
      if (dv && (!closing || *dv + 1 < closing_len)) {
        closing = st;
        closing_len = *dv + 1;
      }
    }
    Path loop = unwind(entry, closing->state, around.parent);
    Path out = std::move(stem);
    const std::size_t k = out.states.size() - 1;
    out.states.insert(out.states.end(), loop.states.begin() + 1, loop.states.end());
    out.actions.insert(out.actions.end(), loop.actions.begin(), loop.actions.end());
    out.states.push_back(entry);
    out.actions.push_back(closing->action);
    out.loop = k;
    return out;
  }

  /// Witness for `phi` (in NNF) at `s`.
  TlaceNode explain(StateId s, const Formula& phi,
                    const GenerationParams& params = {}) {
    if (!(params_key_ == key_of(params))) {
      explain_cache_.clear();
      params_key_ = key_of(params);
    }
    return explain_at(s, phi, params, 0);
  }

 private:
  struct Search {
    std::vector<std::optional<std::size_t>> dist;
    std::vector<std::optional<Step>> parent;  // (action, predecessor)
  };

  using ParamsKey = std::pair<std::set<BranchOp>, std::optional<std::size_t>>;
  static ParamsKey key_of(const GenerationParams& p) {
    return {p.branch_ops, p.max_depth};
  }

  const std::vector<bool>& actions(const ActionFormula& alpha) {
    if (auto it = mask_cache_.find(alpha.id()); it != mask_cache_.end())
      return it->second.second;
    auto mask = action_mask(m_, alpha);
    return mask_cache_.emplace(alpha.id(), std::make_pair(alpha, std::move(mask)))
        .first->second.second;
  }

  /// BFS from `root` over alpha-edges into `inside` states.
  Search bfs(StateId root, const std::vector<bool>& mask, const StateSet& inside) {
    Search out{std::vector<std::optional<std::size_t>>(m_.state_count()),
               std::vector<std::optional<Step>>(m_.state_count())};
    out.dist[root.value] = 0;
    std::deque<StateId> todo{root};
    while (!todo.empty()) {
      const StateId u = todo.front();
      todo.pop_front();
      for (const Step& st : m_.successors(u)) {
        if (!mask[st.action.value] || !inside.test(st.state.value) ||
            out.dist[st.state.value])
          continue;
        out.dist[st.state.value] = *out.dist[u.value] + 1;
        out.parent[st.state.value] = Step{st.action, u};
        todo.push_back(st.state);
      }
    }
    return out;
  }

  static Path unwind(StateId from, StateId to,
                     const std::vector<std::optional<Step>>& parent) {
    Path p;
    StateId cur = to;
    p.states.push_back(cur);
    while (cur != from) {
      const Step& back = *parent[cur.value];
      p.actions.push_back(back.action);
      cur = back.state;
      p.states.push_back(cur);
    }
    std::reverse(p.states.begin(), p.states.end());
    std::reverse(p.actions.begin(), p.actions.end());
    return p;
  }

  // --- satisfaction sets -------------------------------------------------

  StateSet pre(const StateSet& target, const std::vector<bool>& mask) const {
    StateSet out = m_.empty_set();
    for (auto t = target.find_first(); t != StateSet::npos; t = target.find_next(t))
      for (const Step& st : m_.predecessors({static_cast<std::uint32_t>(t)}))
        if (mask[st.action.value]) out.set(st.state.value);
    return out;
  }

  /// Least fixpoint of Z = goal | (left & pre(Z)).
  StateSet until(const StateSet& left, const StateSet& goal,
                 const std::vector<bool>& mask) const {
    StateSet z = goal;
    std::deque<std::uint32_t> todo;
    for (auto t = goal.find_first(); t != StateSet::npos; t = goal.find_next(t))
      todo.push_back(static_cast<std::uint32_t>(t));
    while (!todo.empty()) {
      const std::uint32_t t = todo.front();
      todo.pop_front();
      for (const Step& st : m_.predecessors({t})) {
        if (!mask[st.action.value] || z.test(st.state.value) ||
            !left.test(st.state.value))
          continue;
        z.set(st.state.value);
        todo.push_back(st.state.value);
      }
    }
    return z;
  }

  /// Greatest fixpoint of Z = inv & pre(Z).
  StateSet globally(const StateSet& inv, const std::vector<bool>& mask) const {
    StateSet z = inv;
    std::vector<std::size_t> live(m_.state_count(), 0);
    std::deque<std::uint32_t> dead;
    for (auto s = z.find_first(); s != StateSet::npos; s = z.find_next(s)) {
      for (const Step& st : m_.successors({static_cast<std::uint32_t>(s)}))
        if (mask[st.action.value] && z.test(st.state.value)) ++live[s];
      if (live[s] == 0) dead.push_back(static_cast<std::uint32_t>(s));
    }
    for (std::uint32_t s : dead) z.reset(s);
    while (!dead.empty()) {
      const std::uint32_t t = dead.front();
      dead.pop_front();
      for (const Step& st : m_.predecessors({t})) {
        if (!mask[st.action.value] || !z.test(st.state.value)) continue;
        if (--live[st.state.value] == 0) {
          z.reset(st.state.value);
          dead.push_back(st.state.value);
        }
      }
    }
    return z;
  }

  StateSet compute(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::truth: return m_.full_set();
      case K::falsity: return m_.empty_set();
      case K::atom: return m_.atom_states(f.name());
      case K::negation: return ~sat(f.lhs());
      case K::conjunction: return sat(f.lhs()) & sat(f.rhs());
      case K::disjunction: return sat(f.lhs()) | sat(f.rhs());
      case K::implication: return ~sat(f.lhs()) | sat(f.rhs());
      case K::equivalence: {
        const StateSet& a = sat(f.lhs());
        const StateSet& b = sat(f.rhs());
        return (a & b) | (~a & ~b);
      }
      case K::exists:
      case K::forall:
        if (!f.action()) break;
        return quantified(f);
      case K::knows:
      case K::group:
        break;
    }
    throw UnsupportedOperatorError("'" + to_string(f) +
                                   "' must be reduced to ARCTL first");
  }

  StateSet quantified(const Formula& f) {
    const auto& mask = actions(*f.action());
    const StateSet& a = sat(f.lhs());
    const StateSet all = m_.full_set();
    if (f.kind() == Formula::Kind::exists) {
      switch (f.path_op()) {
        case PathOp::next: return pre(a, mask);
        case PathOp::globally: return globally(a, mask);
        case PathOp::finally: return until(all, a, mask);
        case PathOp::until: return until(a, sat(f.rhs()), mask);
        case PathOp::weak_until:
          return until(a, sat(f.rhs()), mask) | globally(a, mask);
      }
    }
    switch (f.path_op()) {
      case PathOp::next: return ~pre(~a, mask);
      case PathOp::globally: return ~until(all, ~a, mask);
      case PathOp::finally: return ~globally(~a, mask);
      case PathOp::until: {
        const StateSet nb = ~sat(f.rhs());
        return ~(until(nb, ~a & nb, mask) | globally(nb, mask));
      }
      case PathOp::weak_until: {
        const StateSet nb = ~sat(f.rhs());
        return ~until(nb, ~a & nb, mask);
      }
    }
    return m_.empty_set();
  }

  // --- witness generation ------------------------------------------------

  [[noreturn]] void not_satisfied(StateId s, const Formula& phi) const {
    throw PreconditionError("'" + to_string(phi) + "' does not hold in '" +
                            m_.state_name(s) + "'");
  }

  TlaceNode explain_at(StateId s, const Formula& phi,
                       const GenerationParams& params, std::size_t level) {
    const std::size_t key_level = params.max_depth ? level : 0;
    const auto key = std::make_tuple(s.value, phi.id(), key_level);
    if (auto it = explain_cache_.find(key); it != explain_cache_.end())
      return it->second.second;
    TlaceNode n = build(s, phi, params, level);
    explain_cache_.emplace(key, std::make_pair(phi, n));
    return n;
  }

  TlaceNode build(StateId s, const Formula& phi, const GenerationParams& params,
                  std::size_t level) {
    using K = Formula::Kind;
    const std::string& name = m_.state_name(s);
    switch (phi.kind()) {
      case K::truth:
        return TlaceNode::empty(name);
      case K::atom:
      case K::negation: {
        if (!phi.is_literal()) break;
        if (!eval_atom(m_, s, phi)) not_satisfied(s, phi);
        TlaceNode n = TlaceNode::empty(name);
        n.atomics.push_back(phi);
        return n;
      }
      case K::disjunction:
        if (holds(s, phi.lhs())) return explain_at(s, phi.lhs(), params, level);
        return explain_at(s, phi.rhs(), params, level);
      case K::conjunction:
        return merge(explain_at(s, phi.lhs(), params, level),
                     explain_at(s, phi.rhs(), params, level));
      case K::forall: {
        if (!holds(s, phi)) not_satisfied(s, phi);
        TlaceNode n = TlaceNode::empty(name);
        n.universals.push_back(phi);
        return n;
      }
      case K::exists:
        return branch(s, phi, params, level);
      default:
        break;
    }
    if (phi.kind() == K::falsity) not_satisfied(s, phi);
    throw std::invalid_argument("'" + to_string(phi) +
                                "' is not in negative normal form");
  }

  TlaceNode branch(StateId s, const Formula& phi, const GenerationParams& params,
                   std::size_t level) {
    if (!phi.action() || !is_nnf(phi))
      throw std::invalid_argument("'" + to_string(phi) +
                                  "' is not in negative normal form");
    if (!holds(s, phi)) not_satisfied(s, phi);
    const ActionFormula& alpha = *phi.action();
    const BranchOp op = phi.path_op() == PathOp::next    ? BranchOp::eax
                        : phi.path_op() == PathOp::until ? BranchOp::eau
                                                         : BranchOp::eag;
    TlaceNode n = TlaceNode::empty(m_.state_name(s));
    const std::size_t inner = level + 1;
    if (!params.expands(op, inner)) {
      n.branches.push_back({phi, std::nullopt});
      n.truncated = true;
      return n;
    }

    TlacePath p;
    switch (op) {
      case BranchOp::eax: {
        const Path w = eax_explain(s, phi.lhs(), alpha);
        p.nodes.push_back(TlaceNode::empty(m_.state_name(w.states[0])));
        p.nodes.push_back(explain_at(w.states[1], phi.lhs(), params, inner));
        p.actions.push_back(m_.action_name(w.actions[0]));
        break;
      }
      case BranchOp::eau: {
        const Path w = eau_explain(s, phi.lhs(), phi.rhs(), alpha);
        const std::size_t last = w.states.size() - 1;
        for (std::size_t i = 0; i < last; ++i) {
          p.nodes.push_back(explain_at(w.states[i], phi.lhs(), params, inner));
          p.actions.push_back(m_.action_name(w.actions[i]));
        }
        p.nodes.push_back(explain_at(w.states[last], phi.rhs(), params, inner));
        break;
      }
      case BranchOp::eag: {
        const Path w = eag_explain(s, phi.lhs(), alpha);
        const std::size_t last = w.states.size() - 1;
        for (std::size_t i = 0; i < last; ++i) {
          p.nodes.push_back(explain_at(w.states[i], phi.lhs(), params, inner));
          p.actions.push_back(m_.action_name(w.actions[i]));
          if (!p.loop && w.states[i] == w.states[last]) p.loop = i;
        }
        break;
      }
    }
    n.branches.push_back({phi, std::move(p)});
    return n;
  }

  const MixedTransitionSystem& m_;
  std::map<const void*, std::pair<Formula, StateSet>> sat_cache_;
  std::map<const void*, std::pair<ActionFormula, std::vector<bool>>> mask_cache_;
  std::map<std::tuple<std::uint32_t, const void*, std::size_t>,
           std::pair<Formula, TlaceNode>>
      explain_cache_;
  ParamsKey params_key_ = key_of(GenerationParams{});
};

// ---------------------------------------------------------------------------
// Free-function entry points

inline StateSet sat(const MixedTransitionSystem& m, const Formula& f) {
  return Checker(m).sat(f);
}

inline TlaceNode explain(const MixedTransitionSystem& m, StateId s,
                         const Formula& phi, const GenerationParams& params = {}) {
  return Checker(m).explain(s, phi, params);
}

inline Path eax_explain(const MixedTransitionSystem& m, StateId s,
                        const Formula& phi, const ActionFormula& alpha) {
  return Checker(m).eax_explain(s, phi, alpha);
}

inline Path eau_explain(const MixedTransitionSystem& m, StateId s,
                        const Formula& phi, const Formula& psi,
                        const ActionFormula& alpha) {
  return Checker(m).eau_explain(s, phi, psi, alpha);
}

inline Path eag_explain(const MixedTransitionSystem& m, StateId s,
                        const Formula& phi, const ActionFormula& alpha) {
  return Checker(m).eag_explain(s, phi, alpha);
}

/// Holds iff every initial state satisfies `f`; otherwise explains the
/// negation at the first violating initial state.
inline Verdict check(const MixedTransitionSystem& m, const Formula& f,
                     const GenerationParams& params = {}) {
  Checker c(m);
  const Formula nnf = to_nnf(f);
  const StateSet& good = c.sat(nnf);
  Verdict v;
  for (StateId s : m.initial_states()) {
    if (good.test(s.value)) continue;
    const Formula negated = negate_nnf(f);
    v.holds = false;
    v.witness_state = s;
    v.explained = negated;
    v.counterexample = c.explain(s, negated, params);
    break;
  }
  return v;
}

}  // namespace arctl
