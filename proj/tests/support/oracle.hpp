#pragma once

// Test-side oracles. Nothing here calls the checker or the validator: the
// evaluator walks simple paths and lassos of the raw transition list, and
// the reference adequacy check applies the explains rows naively.
//
// Path semantics shared with the library: X and U are satisfied by finite
// prefixes, G needs a lasso. A<a>pi holds when no a-path refutes pi:
//   A X f      refuted by one a-step to a state violating f
//   A G f      refuted by a finite a-path reaching a state violating f
//   A F f      refuted by an a-lasso of states violating f
//   A [f U g]  refuted by a path of !g states ending in !f & !g, or a !g lasso
//   A [f W g]  refuted by a path of !g states ending in !f & !g

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arctl/epistemic.hpp"
#include "arctl/formula.hpp"
#include "arctl/model.hpp"
#include "arctl/tlace.hpp"

namespace oracle {

using arctl::ActionFormula;
using arctl::Formula;
using arctl::PathOp;

// ---------------------------------------------------------------------------
// Raw graphs

struct Edge {
  int action;
  int target;
};

/// A model as plain vectors, built from the declaration-level document.
struct RawModel {
  std::vector<std::string> names;
  std::vector<std::map<std::string, bool>> labels;          // state atoms
  std::vector<std::map<std::string, bool>> action_labels;   // action atoms
  std::vector<std::string> action_names;
  std::vector<std::vector<Edge>> out;
  std::vector<int> initial;
  // Epistemic part: agent -> (state -> view key); empty for plain models.
  std::map<std::string, std::vector<std::string>> views;
  std::vector<bool> reachable;

  int size() const { return static_cast<int>(names.size()); }
};

inline std::vector<bool> forward_reachable(const RawModel& m) {
  std::vector<bool> seen(static_cast<std::size_t>(m.size()), false);
  std::vector<int> stack(m.initial.begin(), m.initial.end());
  for (int s : stack) seen[static_cast<std::size_t>(s)] = true;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (const Edge& e : m.out[static_cast<std::size_t>(s)])
      if (!seen[static_cast<std::size_t>(e.target)]) {
        seen[static_cast<std::size_t>(e.target)] = true;
        stack.push_back(e.target);
      }
  }
  return seen;
}

inline int index_of(const std::vector<std::string>& v, const std::string& x) {
  return static_cast<int>(std::find(v.begin(), v.end(), x) - v.begin());
}

/// Only boolean variables become atoms; documents used here declare no
/// predicate atoms.
inline RawModel raw(const arctl::ModelDocument& d) {
  RawModel m;
  for (const auto& st : d.states) {
    m.names.push_back(st.id);
    std::map<std::string, bool> l;
    for (std::size_t i = 0; i < d.state_vars.size(); ++i)
      if (auto* b = std::get_if<bool>(&st.values[i])) l[d.state_vars[i].name] = *b;
    m.labels.push_back(std::move(l));
  }
  for (const auto& a : d.actions) {
    m.action_names.push_back(a.id);
    std::map<std::string, bool> l;
    for (std::size_t i = 0; i < d.action_vars.size(); ++i) l[d.action_vars[i]] = a.values[i];
    m.action_labels.push_back(std::move(l));
  }
  m.out.assign(m.names.size(), {});
  for (const auto& t : d.transitions)
    m.out[static_cast<std::size_t>(index_of(m.names, t.source))].push_back(
        {index_of(m.action_names, t.action), index_of(m.names, t.target)});
  for (const auto& i : d.initial) m.initial.push_back(index_of(m.names, i));
  m.reachable = forward_reachable(m);
  return m;
}

/// A multi-agent system with a single anonymous action.
inline RawModel raw(const arctl::MasDocument& d) {
  RawModel m = raw(d.model);
  m.action_names = {"step"};
  m.action_labels = {{}};
  for (const auto& [src, dst] : d.transitions)
    m.out[static_cast<std::size_t>(index_of(m.names, src))].push_back(
        {0, index_of(m.names, dst)});
  m.reachable = forward_reachable(m);
  for (const auto& ag : d.agents) {
    std::vector<std::string> keys;
    for (const auto& st : d.model.states) {
      std::string key;
      for (const auto& var : ag.locals) {
        std::size_t v = 0;
        while (d.model.state_vars[v].name != var) ++v;
        key += arctl::to_string(st.values[v]) + "|";
      }
      keys.push_back(key);
    }
    m.views[ag.name] = std::move(keys);
  }
  return m;
}

inline bool eval_action(const RawModel& m, int a, const ActionFormula& f) {
  using K = ActionFormula::Kind;
  switch (f.kind()) {
    case K::truth: return true;
    case K::falsity: return false;
    case K::atom: return m.action_labels.at(static_cast<std::size_t>(a)).at(f.name());
    case K::negation: return !eval_action(m, a, f.operand());
    case K::conjunction: return eval_action(m, a, f.operand(0)) && eval_action(m, a, f.operand(1));
    case K::disjunction: return eval_action(m, a, f.operand(0)) || eval_action(m, a, f.operand(1));
  }
  return false;
}

// ---------------------------------------------------------------------------
// Brute-force evaluator

class Evaluator {
 public:
  explicit Evaluator(const RawModel& m) : m_(m) {}
  explicit Evaluator(RawModel&&) = delete;  // keeps a reference

  /// States satisfying `f`, by path enumeration. Accepts any formula
  /// (negations anywhere, implications, CTLK quantifiers without actions,
  /// K operators when the model carries agent views).
  std::vector<bool> sat(const Formula& f) {
    memo_.clear();
    pinned_.clear();
    std::vector<bool> out;
    for (int s = 0; s < m_.size(); ++s) out.push_back(eval(s, f));
    return out;
  }

  bool holds(int s, const Formula& f) {
    memo_.clear();
    pinned_.clear();
    return eval(s, f);
  }

 private:
  using Pred = std::function<bool(int)>;

  bool allowed(int a, const Formula& q) const {
    return !q.action() || eval_action(m_, a, *q.action());
  }

  /// A simple path from s through `through` states reaching a `goal` state.
  bool reach(int s, const Formula& q, const Pred& through, const Pred& goal,
             std::vector<bool>& on_path) {
    if (goal(s)) return true;
    if (!through(s)) return false;
    on_path[static_cast<std::size_t>(s)] = true;
    bool found = false;
    for (const Edge& e : m_.out[static_cast<std::size_t>(s)]) {
      if (found) break;
      if (!allowed(e.action, q) || on_path[static_cast<std::size_t>(e.target)]) continue;
      found = reach(e.target, q, through, goal, on_path);
    }
    on_path[static_cast<std::size_t>(s)] = false;
    return found;
  }

  /// A lasso from s made of `inside` states.
  bool lasso(int s, const Formula& q, const Pred& inside, std::vector<bool>& on_path) {
    if (!inside(s)) return false;
    on_path[static_cast<std::size_t>(s)] = true;
    bool found = false;
    for (const Edge& e : m_.out[static_cast<std::size_t>(s)]) {
      if (found) break;
      if (!allowed(e.action, q)) continue;
      if (on_path[static_cast<std::size_t>(e.target)])
        found = true;
      else
        found = lasso(e.target, q, inside, on_path);
    }
    on_path[static_cast<std::size_t>(s)] = false;
    return found;
  }

  bool exists_path(int s, const Formula& q) {
    std::vector<bool> on(static_cast<std::size_t>(m_.size()), false);
    auto sat_at = [&](const Formula& f) { return Pred([this, f](int t) { return eval(t, f); }); };
    const Pred always = [](int) { return true; };
    switch (q.path_op()) {
      case PathOp::next:
        for (const Edge& e : m_.out[static_cast<std::size_t>(s)])
          if (allowed(e.action, q) && eval(e.target, q.lhs())) return true;
        return false;
      case PathOp::finally:
        return reach(s, q, always, sat_at(q.lhs()), on);
      case PathOp::until:
        return reach(s, q, sat_at(q.lhs()), sat_at(q.rhs()), on);
      case PathOp::globally:
        return lasso(s, q, sat_at(q.lhs()), on);
      case PathOp::weak_until:
        if (reach(s, q, sat_at(q.lhs()), sat_at(q.rhs()), on)) return true;
        return lasso(s, q, sat_at(q.lhs()), on);
    }
    return false;
  }

  bool refuted(int s, const Formula& q) {
    std::vector<bool> on(static_cast<std::size_t>(m_.size()), false);
    auto fails = [&](const Formula& f) { return Pred([this, f](int t) { return !eval(t, f); }); };
    const Pred always = [](int) { return true; };
    switch (q.path_op()) {
      case PathOp::next:
        for (const Edge& e : m_.out[static_cast<std::size_t>(s)])
          if (allowed(e.action, q) && !eval(e.target, q.lhs())) return true;
        return false;
      case PathOp::globally:
        return reach(s, q, always, fails(q.lhs()), on);
      case PathOp::finally:
        return lasso(s, q, fails(q.lhs()), on);
      case PathOp::until:
      case PathOp::weak_until: {
        const Formula l = q.lhs(), r = q.rhs();
        const Pred not_r = fails(r);
        const Pred bad = [this, l, r](int t) { return !eval(t, l) && !eval(t, r); };
        if (reach(s, q, not_r, bad, on)) return true;
        return q.path_op() == PathOp::until && lasso(s, q, not_r, on);
      }
    }
    return false;
  }

  // Indistinguishability relates reachable states only, so knowledge at an
  // unreachable state is vacuous.
  bool knows(int s, const Formula& f) {
    if (!m_.reachable[static_cast<std::size_t>(s)]) return true;
    const auto& view = m_.views.at(f.name());
    for (int t = 0; t < m_.size(); ++t) {
      if (!m_.reachable[static_cast<std::size_t>(t)]) continue;
      if (view[static_cast<std::size_t>(t)] != view[static_cast<std::size_t>(s)]) continue;
      if (!eval(t, f.lhs())) return false;
    }
    return true;
  }

  bool eval(int s, const Formula& f) {
    auto key = std::make_pair(s, f.id());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    pinned_.push_back(f);
    bool r = compute(s, f);
    memo_[key] = r;
    return r;
  }

  bool compute(int s, const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::truth: return true;
      case K::falsity: return false;
      case K::atom: return m_.labels.at(static_cast<std::size_t>(s)).at(f.name());
      case K::negation: return !eval(s, f.lhs());
      case K::conjunction: return eval(s, f.lhs()) && eval(s, f.rhs());
      case K::disjunction: return eval(s, f.lhs()) || eval(s, f.rhs());
      case K::implication: return !eval(s, f.lhs()) || eval(s, f.rhs());
      case K::equivalence: return eval(s, f.lhs()) == eval(s, f.rhs());
      case K::exists: return exists_path(s, f);
      case K::forall: return !refuted(s, f);
      case K::knows: return knows(s, f);
      case K::group: throw std::logic_error("group knowledge is not evaluated");
    }
    return false;
  }

  const RawModel& m_;
  std::map<std::pair<int, const void*>, bool> memo_;
  std::vector<Formula> pinned_;
};

// ---------------------------------------------------------------------------
// Random instances

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// <= 5 states over atoms p, q; <= 2 actions over action atoms x, y.
inline arctl::ModelDocument random_model(Rng& rng, int max_states = 5) {
  arctl::ModelDocument d;
  d.state_vars = {{"p", arctl::ValueType::boolean}, {"q", arctl::ValueType::boolean}};
  d.action_vars = {"x", "y"};
  const int n = uniform(rng, 1, max_states);
  for (int i = 0; i < n; ++i)
    d.states.push_back({"s" + std::to_string(i), {arctl::Value{coin(rng)}, arctl::Value{coin(rng)}}});
  const int k = uniform(rng, 1, 2);
  for (int i = 0; i < k; ++i) d.actions.push_back({"a" + std::to_string(i), {coin(rng), coin(rng)}});
  const double density = std::uniform_real_distribution<double>(0.1, 0.5)(rng);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < k; ++a)
      for (int t = 0; t < n; ++t)
        if (coin(rng, density))
          d.transitions.push_back({"s" + std::to_string(s), "a" + std::to_string(a), "s" + std::to_string(t)});
  for (int s = 0; s < n; ++s)
    if (coin(rng, 0.4)) d.initial.push_back("s" + std::to_string(s));
  if (d.initial.empty()) d.initial.push_back("s" + std::to_string(uniform(rng, 0, n - 1)));
  return d;
}

inline ActionFormula random_action(Rng& rng) {
  static const char* pool[] = {"TRUE", "TRUE", "x", "!x", "y", "x & y", "x | !y", "!x & !y", "FALSE"};
  return arctl::parse_action_formula(pool[uniform(rng, 0, 8)]);
}

inline Formula random_literal(Rng& rng) {
  switch (uniform(rng, 0, 6)) {
    case 0: return Formula::atom("p");
    case 1: return Formula::negation(Formula::atom("p"));
    case 2: return Formula::atom("q");
    case 3: return Formula::negation(Formula::atom("q"));
    case 4: return Formula::truth();
    case 5: return Formula::falsity();
    default: return Formula::atom(coin(rng) ? "p" : "q");
  }
}

inline PathOp random_op(Rng& rng) {
  static const PathOp ops[] = {PathOp::next, PathOp::globally, PathOp::finally, PathOp::until,
                               PathOp::weak_until};
  return ops[uniform(rng, 0, 4)];
}

/// NNF formula with quantifier depth <= depth.
inline Formula random_nnf(Rng& rng, int depth, int budget = 4) {
  const int r = uniform(rng, 0, 9);
  if (budget <= 0 || (depth == 0 && r < 7) || r < 2) return random_literal(rng);
  if (depth == 0 || r < 4) {
    Formula l = random_nnf(rng, depth, budget - 1);
    Formula rr = random_nnf(rng, depth, budget - 2);
    return coin(rng) ? Formula::conjunction(l, rr) : Formula::disjunction(l, rr);
  }
  const PathOp op = random_op(rng);
  Formula lhs = random_nnf(rng, depth - 1, budget - 1);
  std::optional<Formula> rhs;
  if (arctl::is_binary(op)) rhs = random_nnf(rng, depth - 1, budget - 2);
  // E F and E W are sugar outside NNF.
  return arctl::to_nnf(coin(rng) ? Formula::exists(random_action(rng), op, lhs, rhs)
                                 : Formula::forall(random_action(rng), op, lhs, rhs));
}

/// Any ARCTL formula: negations over compound formulas, -> and <->.
inline Formula random_arctl(Rng& rng, int depth, int budget = 4) {
  const int r = uniform(rng, 0, 11);
  if (budget <= 0 || (depth == 0 && r < 6) || r < 2) return random_literal(rng);
  if (r < 4) return Formula::negation(random_arctl(rng, depth, budget - 1));
  if (depth == 0 || r < 7) {
    Formula l = random_arctl(rng, depth, budget - 1);
    Formula rr = random_arctl(rng, depth, budget - 2);
    switch (uniform(rng, 0, 3)) {
      case 0: return Formula::conjunction(l, rr);
      case 1: return Formula::disjunction(l, rr);
      case 2: return Formula::implication(l, rr);
      default: return Formula::equivalence(l, rr);
    }
  }
  const PathOp op = random_op(rng);
  Formula lhs = random_arctl(rng, depth - 1, budget - 1);
  std::optional<Formula> rhs;
  if (arctl::is_binary(op)) rhs = random_arctl(rng, depth - 1, budget - 2);
  return coin(rng) ? Formula::exists(random_action(rng), op, lhs, rhs)
                   : Formula::forall(random_action(rng), op, lhs, rhs);
}

/// <= 6 states with a total transition relation; agents a and b see
/// (p, la) and (q, lb).
inline arctl::MasDocument random_mas(Rng& rng, int max_states = 6) {
  arctl::MasDocument d;
  auto& m = d.model;
  using arctl::Value;
  using arctl::ValueType;
  m.state_vars = {{"p", ValueType::boolean}, {"q", ValueType::boolean},
                  {"la", ValueType::integer}, {"lb", ValueType::integer}};
  const int n = uniform(rng, 1, max_states);
  for (int i = 0; i < n; ++i)
    m.states.push_back({"s" + std::to_string(i),
                        {Value{coin(rng)}, Value{coin(rng)}, Value{std::int64_t(uniform(rng, 0, 1))},
                         Value{std::int64_t(uniform(rng, 0, 1))}}});
  for (int s = 0; s < n; ++s) {
    bool any = false;
    for (int t = 0; t < n; ++t)
      if (coin(rng, 0.35)) {
        d.transitions.emplace_back("s" + std::to_string(s), "s" + std::to_string(t));
        any = true;
      }
    if (!any)
      d.transitions.emplace_back("s" + std::to_string(s), "s" + std::to_string(uniform(rng, 0, n - 1)));
  }
  for (int s = 0; s < n; ++s)
    if (coin(rng, 0.35)) m.initial.push_back("s" + std::to_string(s));
  if (m.initial.empty()) m.initial.push_back("s0");
  d.agents = {{"a", {"p", "la"}}, {"b", {"q", "lb"}}};
  return d;
}

/// CTLK formula of temporal/epistemic depth <= depth over p, q.
inline Formula random_ctlk(Rng& rng, int depth, int budget = 4) {
  const int r = uniform(rng, 0, 11);
  if (budget <= 0 || (depth == 0 && r < 6) || r < 2) return random_literal(rng);
  if (r < 3) return Formula::negation(random_ctlk(rng, depth, budget - 1));
  if (depth == 0 || r < 5) {
    Formula l = random_ctlk(rng, depth, budget - 1);
    Formula rr = random_ctlk(rng, depth, budget - 2);
    switch (uniform(rng, 0, 2)) {
      case 0: return Formula::conjunction(l, rr);
      case 1: return Formula::disjunction(l, rr);
      default: return Formula::implication(l, rr);
    }
  }
  if (r < 8) return Formula::knows(coin(rng) ? "a" : "b", random_ctlk(rng, depth - 1, budget - 1));
  const PathOp op = random_op(rng);
  Formula lhs = random_ctlk(rng, depth - 1, budget - 1);
  std::optional<Formula> rhs;
  if (arctl::is_binary(op)) rhs = random_ctlk(rng, depth - 1, budget - 2);
  return coin(rng) ? Formula::exists(std::nullopt, op, lhs, rhs)
                   : Formula::forall(std::nullopt, op, lhs, rhs);
}

// ---------------------------------------------------------------------------
// Reference adequacy
//
// consistent + matches + explains over the raw model, with the conjunction
// row tried over every assignment of items to left, right or both.

class Reference {
 public:
  explicit Reference(const RawModel& m) : m_(m), eval_(m) {}
  explicit Reference(RawModel&&) = delete;

  bool adequate(const arctl::TlaceNode& n, const Formula& phi, const std::string& state) {
    return n.state == state && consistent(n) && matches(n) && explains(n, phi);
  }

  bool consistent(const arctl::TlaceNode& n) const {
    for (const auto& b : n.branches) {
      if (!b.path) {
        if (!n.truncated) return false;
        continue;
      }
      const auto& p = *b.path;
      if (p.nodes.empty() || p.nodes[0].state != n.state) return false;
      if (p.loop) {
        if (*p.loop >= p.nodes.size() || p.actions.size() != p.nodes.size()) return false;
      } else if (p.actions.size() + 1 != p.nodes.size()) {
        return false;
      }
      for (const auto& c : p.nodes)
        if (!consistent(c)) return false;
    }
    return true;
  }

  bool matches(const arctl::TlaceNode& n) const {
    if (index_of(m_.names, n.state) >= m_.size()) return false;
    for (const auto& b : n.branches) {
      if (!b.path) continue;
      const auto& p = *b.path;
      for (std::size_t i = 0; i < p.actions.size(); ++i) {
        const auto& to = i + 1 < p.nodes.size() ? p.nodes[i + 1] : p.nodes.at(*p.loop);
        if (!edge(p.nodes[i].state, p.actions[i], to.state)) return false;
      }
      for (const auto& c : p.nodes)
        if (!matches(c)) return false;
    }
    return true;
  }

  bool explains(const arctl::TlaceNode& n, const Formula& phi) {
    using K = Formula::Kind;
    const bool bare = n.atomics.empty() && n.branches.empty() && n.universals.empty();
    switch (phi.kind()) {
      case K::truth:
        return bare;
      case K::atom:
      case K::negation: {
        if (n.atomics.size() != 1 || !n.branches.empty() || !n.universals.empty()) return false;
        if (!(n.atomics[0] == phi)) return false;
        const int s = index_of(m_.names, n.state);
        if (s >= m_.size()) return false;
        const std::string& atom = phi.kind() == K::atom ? phi.name() : phi.lhs().name();
        if (!m_.labels[static_cast<std::size_t>(s)].count(atom)) return false;
        return eval_.holds(s, phi);
      }
      case K::disjunction:
        return explains(n, phi.lhs()) || explains(n, phi.rhs());
      case K::conjunction:
        return split(n, phi);
      case K::forall:
        return n.atomics.empty() && n.branches.empty() && n.universals.size() == 1 &&
               n.universals[0] == phi;
      case K::exists: {
        if (!n.atomics.empty() || !n.universals.empty() || n.branches.size() != 1) return false;
        const auto& b = n.branches[0];
        if (!(b.formula == phi)) return false;
        if (!b.path) return n.truncated;
        return path(*b.path, phi);
      }
      default:
        return false;
    }
  }

 private:
  bool edge(const std::string& s, const std::string& a, const std::string& t) const {
    const int si = index_of(m_.names, s), ai = index_of(m_.action_names, a),
              ti = index_of(m_.names, t);
    if (si >= m_.size() || ti >= m_.size() || ai >= static_cast<int>(m_.action_names.size()))
      return false;
    for (const Edge& e : m_.out[static_cast<std::size_t>(si)])
      if (e.action == ai && e.target == ti) return true;
    return false;
  }

  bool action_ok(const std::string& a, const ActionFormula& alpha) const {
    const int ai = index_of(m_.action_names, a);
    if (ai >= static_cast<int>(m_.action_names.size())) return false;
    for (const auto& atom : alpha.atoms())
      if (!m_.action_labels[static_cast<std::size_t>(ai)].count(atom)) return false;
    return eval_action(m_, ai, alpha);
  }

  bool path(const arctl::TlacePath& p, const Formula& phi) {
    for (const auto& a : p.actions)
      if (!action_ok(a, *phi.action())) return false;
    switch (phi.path_op()) {
      case PathOp::next: {
        if (p.loop || p.nodes.size() != 2) return false;
        const auto& first = p.nodes[0];
        if (!first.atomics.empty() || !first.branches.empty() || !first.universals.empty() ||
            first.truncated)
          return false;
        return explains(p.nodes[1], phi.lhs());
      }
      case PathOp::until:
        if (p.loop) return false;
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
          if (!explains(p.nodes[i], phi.lhs())) return false;
        return explains(p.nodes.back(), phi.rhs());
      case PathOp::globally:
        if (!p.loop) return false;
        for (const auto& c : p.nodes)
          if (!explains(c, phi.lhs())) return false;
        return true;
      default:
        return false;
    }
  }

  bool split(const arctl::TlaceNode& n, const Formula& phi) {
    const std::size_t k = n.atomics.size() + n.branches.size() + n.universals.size();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < k; ++i) combos *= 3;
    for (std::size_t code = 0; code < combos; ++code) {
      arctl::TlaceNode l = arctl::TlaceNode::empty(n.state), r = l;
      l.truncated = r.truncated = n.truncated;
      std::size_t c = code, item = 0;
      auto place = [&](auto add_left, auto add_right) {
        const std::size_t side = c % 3;
        c /= 3;
        ++item;
        if (side != 1) add_left();
        if (side != 0) add_right();
      };
      for (const auto& f : n.atomics)
        place([&] { l.atomics.push_back(f); }, [&] { r.atomics.push_back(f); });
      for (const auto& b : n.branches)
        place([&] { l.branches.push_back(b); }, [&] { r.branches.push_back(b); });
      for (const auto& f : n.universals)
        place([&] { l.universals.push_back(f); }, [&] { r.universals.push_back(f); });
      if (explains(l, phi.lhs()) && explains(r, phi.rhs())) return true;
    }
    return false;
  }

  const RawModel& m_;
  Evaluator eval_;
};

}  // namespace oracle
