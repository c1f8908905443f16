#pragma once

// Tree-like annotated witnesses (TLACEs): nodes carry a state, literal
// annotations, existential branches and universal annotations; branches
// are model paths, possibly closed by a loop marker.
//
// The validators here are independent of the generator in checker.hpp and
// follow the matches / explains relations row by row.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "arctl/formula.hpp"
#include "arctl/model.hpp"

namespace arctl {

struct TlaceNode;

struct TlacePath {
  std::vector<TlaceNode> nodes;
  /// actions[i] leads from nodes[i] to nodes[i + 1]; with a loop there is
  /// one more action, leading from the last node to nodes[*loop].
  std::vector<std::string> actions;
  std::optional<std::size_t> loop;
};

struct TlaceBranch {
  Formula formula;
  /// Empty when expansion was suppressed by the generation parameters.
  std::optional<TlacePath> path;
};

struct TlaceNode {
  std::string state;
  std::vector<Formula> atomics;     // sorted, unique
  std::vector<TlaceBranch> branches;
  std::vector<Formula> universals;  // sorted, unique
  /// Set when some branch of this node was left unexpanded.
  bool truncated = false;

  static TlaceNode empty(std::string state) {
    TlaceNode n;
    n.state = std::move(state);
    return n;
  }
  bool has_no_annotations() const {
    return atomics.empty() && branches.empty() && universals.empty();
  }
};

bool operator==(const TlaceNode& a, const TlaceNode& b);

inline bool operator==(const TlacePath& a, const TlacePath& b) {
  return a.actions == b.actions && a.loop == b.loop && a.nodes == b.nodes;
}
inline bool operator==(const TlaceBranch& a, const TlaceBranch& b) {
  return a.formula == b.formula && a.path == b.path;
}
inline bool operator==(const TlaceNode& a, const TlaceNode& b) {
  return a.state == b.state && a.truncated == b.truncated &&
         a.atomics == b.atomics && a.universals == b.universals &&
         a.branches == b.branches;
}

/// Inserts into a sorted, duplicate-free formula list.
inline void insert_sorted(std::vector<Formula>& set, const Formula& f) {
  auto it = std::lower_bound(set.begin(), set.end(), f, FormulaLess{});
  if (it == set.end() || !(*it == f)) set.insert(it, f);
}

/// Annotations of both nodes, branches concatenated left to right. Both
/// nodes must be on the same state.
inline TlaceNode merge(TlaceNode a, const TlaceNode& b) {
  for (const auto& f : b.atomics) insert_sorted(a.atomics, f);
  for (const auto& f : b.universals) insert_sorted(a.universals, f);
  a.branches.insert(a.branches.end(), b.branches.begin(), b.branches.end());
  a.truncated = a.truncated || b.truncated;
  return a;
}

// ---------------------------------------------------------------------------
// Statistics

struct TlaceStats {
  std::size_t node_count = 0;
  std::size_t branch_count = 0;
  std::size_t max_temporal_depth = 0;
  friend bool operator==(const TlaceStats&, const TlaceStats&) = default;
};

namespace detail {

inline void accumulate_stats(const TlaceNode& n, std::size_t level,
                             TlaceStats& out) {
  ++out.node_count;
  for (const auto& b : n.branches) {
    if (!b.path) continue;
    ++out.branch_count;
    out.max_temporal_depth = std::max(out.max_temporal_depth, level + 1);
    for (const auto& child : b.path->nodes)
      accumulate_stats(child, level + 1, out);
  }
}

}  // namespace detail

/// Loop markers are references and are not counted as nodes; unexpanded
/// branches are not counted as branches.
inline TlaceStats stats(const TlaceNode& n) {
  TlaceStats out;
  detail::accumulate_stats(n, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

/// First failing clause of an adequacy check.
struct ValidationResult {
  enum class Clause { none, state, consistency, matches, explains };
  Clause clause = Clause::none;
  std::string location = "/";
  std::string message;

  bool ok() const { return clause == Clause::none; }
  explicit operator bool() const { return ok(); }
};

inline const char* to_string(ValidationResult::Clause c) {
  using C = ValidationResult::Clause;
  switch (c) {
    case C::none: return "ok";
    case C::state: return "state";
    case C::consistency: return "consistency";
    case C::matches: return "matches";
    case C::explains: return "explains";
  }
  return "?";
}

namespace detail {

inline std::string child_location(const std::string& base, std::size_t branch,
                                  std::size_t node) {
  return (base == "/" ? std::string() : base) + "/branch[" +
         std::to_string(branch) + "]/node[" + std::to_string(node) + "]";
}

inline std::optional<ValidationResult> check_consistency(
    const TlaceNode& n, const std::string& where) {
  using C = ValidationResult::Clause;
  for (std::size_t b = 0; b < n.branches.size(); ++b) {
    const auto& br = n.branches[b];
    const std::string here =
        (where == "/" ? std::string() : where) + "/branch[" + std::to_string(b) + "]";
    if (!br.path) {
      if (!n.truncated)
        return ValidationResult{C::consistency, here,
                                "unexpanded branch on a node not marked truncated"};
      continue;
    }
    const TlacePath& p = *br.path;
    if (p.nodes.empty())
      return ValidationResult{C::consistency, here, "empty path"};
    if (p.nodes.front().state != n.state)
      return ValidationResult{C::consistency, here,
                              "path starts at '" + p.nodes.front().state +
                                  "' instead of '" + n.state + "'"};
    const std::size_t expected = p.nodes.size() - 1 + (p.loop ? 1 : 0);
    if (p.actions.size() != expected)
      return ValidationResult{C::consistency, here,
                              "path has " + std::to_string(p.actions.size()) +
                                  " actions, expected " + std::to_string(expected)};
    if (p.loop && *p.loop >= p.nodes.size())
      return ValidationResult{C::consistency, here,
                              "loop marker refers to no node of the path"};
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
      if (auto r = check_consistency(p.nodes[i], child_location(where, b, i)))
        return r;
  }
  return std::nullopt;
}

inline std::optional<ValidationResult> check_matches(
    const TlaceNode& n, const MixedTransitionSystem& m, const std::string& where) {
  using C = ValidationResult::Clause;
  auto state = m.find_state(n.state);
  if (!state)
    return ValidationResult{C::matches, where,
                            "state '" + n.state + "' is not in the model"};
  for (std::size_t b = 0; b < n.branches.size(); ++b) {
    const auto& br = n.branches[b];
    if (!br.path) continue;
    const TlacePath& p = *br.path;
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
      if (auto r = check_matches(p.nodes[i], m, child_location(where, b, i)))
        return r;
    for (std::size_t i = 0; i < p.actions.size(); ++i) {
      const std::size_t to = i + 1 < p.nodes.size() ? i + 1 : p.loop.value_or(0);
      if (to >= p.nodes.size()) continue;  // reported by consistency
      auto s = m.find_state(p.nodes[i].state);
      auto a = m.find_action(p.actions[i]);
      auto t = m.find_state(p.nodes[to].state);
      if (!a || !s || !t || !m.has_transition(*s, *a, *t))
        return ValidationResult{
            C::matches, child_location(where, b, i),
            "no transition " + p.nodes[i].state + " -" + p.actions[i] + "-> " +
                p.nodes[to].state};
    }
  }
  return std::nullopt;
}

/// explains, with the conjunction row searched over splits of a node's
/// annotations. A sub-node is a mask over the annotation items of the
/// node (atomics, then branches, then universals).
class ExplainsChecker {
 public:
  explicit ExplainsChecker(const MixedTransitionSystem& m) : m_(m) {}

  bool node(const TlaceNode& n, const Formula& phi) {
    NodeContext ctx(n);
    boost::dynamic_bitset<> all(ctx.size());
    all.set();
    return view(ctx, all, phi);
  }

 private:
  struct NodeContext {
    explicit NodeContext(const TlaceNode& n) : node(n) {
      for (const auto& f : n.atomics) keys.push_back(to_string(f));
      for (const auto& b : n.branches) keys.push_back(to_string(b.formula));
      for (const auto& f : n.universals) keys.push_back(to_string(f));
    }
    std::size_t size() const { return keys.size(); }
    std::size_t first_branch() const { return node.atomics.size(); }
    std::size_t first_universal() const {
      return node.atomics.size() + node.branches.size();
    }

    const TlaceNode& node;
    std::vector<std::string> keys;
    std::map<std::pair<const void*, boost::dynamic_bitset<>>, bool> memo;
  };

  using Mask = boost::dynamic_bitset<>;

  /// Annotation keys a node explaining `phi` may carry.
  const std::set<std::string>& vocabulary(const Formula& phi) {
    auto it = vocab_.find(phi.id());
    if (it != vocab_.end()) return it->second;
    std::set<std::string> out;
    collect_vocabulary(phi, out);
    return vocab_.emplace(phi.id(), std::move(out)).first->second;
  }

  static void collect_vocabulary(const Formula& phi, std::set<std::string>& out) {
    using K = Formula::Kind;
    switch (phi.kind()) {
      case K::conjunction:
      case K::disjunction:
        collect_vocabulary(phi.lhs(), out);
        collect_vocabulary(phi.rhs(), out);
        return;
      case K::atom:
      case K::negation:
      case K::exists:
      case K::forall:
        out.insert(to_string(phi));
        return;
      default:
        return;
    }
  }

  bool view(NodeContext& ctx, const Mask& mask, const Formula& phi) {
    auto key = std::make_pair(phi.id(), mask);
    if (auto it = ctx.memo.find(key); it != ctx.memo.end()) return it->second;
    const bool r = evaluate(ctx, mask, phi);
    ctx.memo.emplace(std::move(key), r);
    return r;
  }

  std::vector<std::size_t> items(const Mask& mask) const {
    std::vector<std::size_t> out;
    for (auto i = mask.find_first(); i != Mask::npos; i = mask.find_next(i))
      out.push_back(i);
    return out;
  }

  bool evaluate(NodeContext& ctx, const Mask& mask, const Formula& phi) {
    using K = Formula::Kind;
    const TlaceNode& n = ctx.node;
    const auto present = items(mask);
    switch (phi.kind()) {
      case K::truth:
        return present.empty();
      case K::atom:
      case K::negation: {
        if (!phi.is_literal()) return false;
        if (present.size() != 1 || present[0] >= ctx.first_branch()) return false;
        if (!(n.atomics[present[0]] == phi)) return false;
        auto s = m_.find_state(n.state);
        if (!s || !m_.has_state_atom(phi.kind() == K::atom ? phi.name()
                                                           : phi.lhs().name()))
          return false;
        return eval_atom(m_, *s, phi);
      }
      case K::disjunction:
        return view(ctx, mask, phi.lhs()) || view(ctx, mask, phi.rhs());
      case K::conjunction:
        return split(ctx, present, phi);
      case K::forall:
        if (present.size() != 1 || present[0] < ctx.first_universal()) return false;
        return n.universals[present[0] - ctx.first_universal()] == phi;
      case K::exists: {
        if (present.size() != 1 || present[0] < ctx.first_branch() ||
            present[0] >= ctx.first_universal())
          return false;
        const TlaceBranch& br = n.branches[present[0] - ctx.first_branch()];
        if (!(br.formula == phi)) return false;
        if (!br.path) return n.truncated;
        return path(*br.path, phi);
      }
      default:
        return false;
    }
  }

  /// Each item goes to the left conjunct, the right one, or both.
  bool split(NodeContext& ctx, const std::vector<std::size_t>& present,
             const Formula& phi) {
    const auto& lv = vocabulary(phi.lhs());
    const auto& rv = vocabulary(phi.rhs());
    std::vector<std::vector<int>> choices;
    for (std::size_t i : present) {
      const bool l = lv.count(ctx.keys[i]) != 0;
      const bool r = rv.count(ctx.keys[i]) != 0;
      std::vector<int> c;
      if (l) c.push_back(1);
      if (r) c.push_back(2);
      if (l && r) c.push_back(3);
      if (c.empty()) return false;
      choices.push_back(std::move(c));
    }
    Mask left(ctx.size()), right(ctx.size());
    return assign(ctx, present, choices, 0, left, right, phi);
  }

  bool assign(NodeContext& ctx, const std::vector<std::size_t>& present,
              const std::vector<std::vector<int>>& choices, std::size_t k,
              Mask& left, Mask& right, const Formula& phi) {
    if (k == present.size())
      return view(ctx, left, phi.lhs()) && view(ctx, right, phi.rhs());
    for (int c : choices[k]) {
      left.set(present[k], (c & 1) != 0);
      right.set(present[k], (c & 2) != 0);
      if (assign(ctx, present, choices, k + 1, left, right, phi)) return true;
    }
    left.reset(present[k]);
    right.reset(present[k]);
    return false;
  }

  bool action_ok(const std::string& action, const ActionFormula& alpha) const {
    auto a = m_.find_action(action);
    if (!a) return false;
    try {
      return eval_action(m_, *a, alpha);
    } catch (const UnknownAtomError&) {
      return false;
    }
  }

  bool path(const TlacePath& p, const Formula& phi) {
    if (p.nodes.empty() || !phi.action()) return false;
    const ActionFormula& alpha = *phi.action();
    for (const auto& a : p.actions)
      if (!action_ok(a, alpha)) return false;
    switch (phi.path_op()) {
      case PathOp::next:
        return !p.loop && p.nodes.size() == 2 && p.actions.size() == 1 &&
               p.nodes[0].has_no_annotations() && !p.nodes[0].truncated &&
               node(p.nodes[1], phi.lhs());
      case PathOp::until: {
        if (p.loop || p.actions.size() + 1 != p.nodes.size()) return false;
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
          if (!node(p.nodes[i], phi.lhs())) return false;
        return node(p.nodes.back(), phi.rhs());
      }
      case PathOp::globally: {
        if (!p.loop || p.actions.size() != p.nodes.size()) return false;
        for (const auto& n : p.nodes)
          if (!node(n, phi.lhs())) return false;
        return true;
      }
      default:
        return false;
    }
  }

  const MixedTransitionSystem& m_;
  std::map<const void*, std::set<std::string>> vocab_;
};

}  // namespace detail

inline bool is_consistent(const TlaceNode& n) {
  return !detail::check_consistency(n, "/").has_value();
}

inline bool matches(const TlaceNode& n, const MixedTransitionSystem& m) {
  return !detail::check_matches(n, m, "/").has_value();
}

/// `phi` must be in negative normal form; other formulas have no row.
inline bool explains(const TlaceNode& n, const MixedTransitionSystem& m,
                     const Formula& phi) {
  return detail::ExplainsChecker(m).node(n, phi);
}

/// All adequacy clauses, reporting the first that fails.
inline ValidationResult validate(const TlaceNode& n,
                                 const MixedTransitionSystem& m,
                                 const Formula& phi,
                                 std::optional<std::string> state = {}) {
  using C = ValidationResult::Clause;
  if (state && n.state != *state)
    return {C::state, "/", "witness is for '" + n.state + "', not '" + *state + "'"};
  if (auto r = detail::check_consistency(n, "/")) return *r;
  if (auto r = detail::check_matches(n, m, "/")) return *r;
  if (!explains(n, m, phi))
    return {C::explains, "/", "witness does not explain " + to_string(phi)};
  return {};
}

inline bool is_adequate(const TlaceNode& n, const MixedTransitionSystem& m,
                        const Formula& phi, const std::string& state) {
  return validate(n, m, phi, state).ok();
}

inline bool is_adequate(const TlaceNode& n, const MixedTransitionSystem& m,
                        const Formula& phi) {
  return validate(n, m, phi).ok();
}

}  // namespace arctl
