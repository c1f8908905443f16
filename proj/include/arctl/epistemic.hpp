#pragma once

// Multi-agent systems and the reduction of CTLK to ARCTL: temporal edges
// become RUN actions, their reverses BACK actions, and each agent's
// indistinguishability relation an Agt_<agent> action. Initial states are
// marked with the state atom Init.

#include <deque>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arctl/formula.hpp"
#include "arctl/model.hpp"

namespace arctl {

inline constexpr std::string_view run_action = "RUN";
inline constexpr std::string_view back_action = "BACK";
inline constexpr std::string_view init_atom = "Init";

inline std::string agent_action(std::string_view agent) {
  return "Agt_" + std::string(agent);
}

struct Agent {
  std::string name;
  std::vector<std::string> locals;  // observable state variables
  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Declaration-ordered contents of a multi-agent file. `model` carries the
/// state variables, states, initial states and atoms; its action sections
/// stay empty.
struct MasDocument {
  ModelDocument model;
  std::vector<std::pair<std::string, std::string>> transitions;
  std::vector<Agent> agents;
  friend bool operator==(const MasDocument&, const MasDocument&) = default;
};

class MultiAgentSystem {
 public:
  explicit MultiAgentSystem(MasDocument doc)
      : doc_(std::move(doc)), states_(doc_.model) {
    using K = ModelError::Kind;
    if (doc_.agents.empty())
      throw ModelError(K::schema, "multi-agent system declares no agents");
    succ_.assign(state_count(), {});
    for (const auto& [src, dst] : doc_.transitions) {
      auto s = states_.find_state(src);
      auto t = states_.find_state(dst);
      if (!s) throw ModelError(K::dangling_reference, "transition source '" + src + "' is not declared");
      if (!t) throw ModelError(K::dangling_reference, "transition target '" + dst + "' is not declared");
      succ_[s->value].push_back(*t);
    }
    for (auto& v : succ_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (std::size_t i = 0; i < doc_.agents.size(); ++i) {
      const Agent& ag = doc_.agents[i];
      for (std::size_t j = 0; j < i; ++j)
        if (doc_.agents[j].name == ag.name)
          throw ModelError(K::duplicate, "duplicate agent '" + ag.name + "'");
      std::vector<std::size_t> idx;
      for (const auto& var : ag.locals) {
        const auto& vars = doc_.model.state_vars;
        auto it = std::find_if(vars.begin(), vars.end(),
                               [&](const VariableDecl& d) { return d.name == var; });
        if (it == vars.end())
          throw ModelError(K::dangling_reference, "agent '" + ag.name +
                                                      "' observes undeclared variable '" + var + "'");
        idx.push_back(static_cast<std::size_t>(it - vars.begin()));
      }
      local_index_.push_back(std::move(idx));
    }
    reachable_ = compute_reachable();
  }

  std::size_t state_count() const { return states_.state_count(); }
  std::vector<StateId> states() const { return states_.states(); }
  const std::string& state_name(StateId s) const { return states_.state_name(s); }
  std::optional<StateId> find_state(std::string_view id) const {
    return states_.find_state(id);
  }
  const std::vector<StateId>& initial_states() const { return states_.initial_states(); }
  bool is_initial(StateId s) const { return states_.is_initial(s); }
  const std::vector<StateId>& successors(StateId s) const { return succ_.at(s.value); }
  const std::vector<Agent>& agents() const { return doc_.agents; }
  std::optional<std::size_t> find_agent(std::string_view name) const {
    for (std::size_t i = 0; i < doc_.agents.size(); ++i)
      if (doc_.agents[i].name == name) return i;
    return std::nullopt;
  }

  /// T*(S0).
  const StateSet& reachable() const { return reachable_; }

  /// s ~_agent t: both reachable and equal on the agent's local variables.
  bool equivalent(std::size_t agent, StateId s, StateId t) const {
    if (!reachable_.test(s.value) || !reachable_.test(t.value)) return false;
    const auto& a = doc_.model.states[s.value].values;
    const auto& b = doc_.model.states[t.value].values;
    for (std::size_t v : local_index_.at(agent))
      if (a[v] != b[v]) return false;
    return true;
  }

  const StateSet& atom_states(std::string_view name) const {
    return states_.atom_states(name);
  }
  bool has_atom(std::string_view name) const { return states_.has_state_atom(name); }

  const MasDocument& document() const { return doc_; }

 private:
  StateSet compute_reachable() const {
    StateSet seen = states_.initial_set();
    std::deque<StateId> todo(initial_states().begin(), initial_states().end());
    while (!todo.empty()) {
      const StateId s = todo.front();
      todo.pop_front();
      for (StateId t : succ_[s.value]) {
        if (seen.test(t.value)) continue;
        seen.set(t.value);
        todo.push_back(t);
      }
    }
    return seen;
  }

  MasDocument doc_;
  MixedTransitionSystem states_;  // labels only; no actions
  std::vector<std::vector<StateId>> succ_;
  std::vector<std::vector<std::size_t>> local_index_;
  StateSet reachable_;
};

// ---------------------------------------------------------------------------
// Reduction

struct ActionOrigin {
  enum class Kind { temporal, reverse, epistemic };
  Kind kind;
  std::optional<std::size_t> agent;  // set for epistemic
  friend bool operator==(const ActionOrigin&, const ActionOrigin&) = default;
};

struct ReductionResult {
  MixedTransitionSystem model;
  std::vector<std::string> action_atoms;  // RUN, BACK, Agt_<agent>...
  std::string init_atom;
  std::vector<ActionOrigin> origins;      // indexed by ActionId
};

inline ReductionResult reduce_mas(const MultiAgentSystem& mas) {
  const MasDocument& src = mas.document();
  ModelDocument doc;
  doc.state_vars = src.model.state_vars;
  for (const auto& v : doc.state_vars)
    if (v.name == init_atom)
      throw ModelError(ModelError::Kind::duplicate,
                       "state variable 'Init' is reserved by the reduction");
  doc.state_vars.push_back({std::string(init_atom), ValueType::boolean});
  for (StateId s : mas.states()) {
    ModelDocument::State st = src.model.states[s.value];
    st.values.emplace_back(mas.is_initial(s));
    doc.states.push_back(std::move(st));
  }
  doc.initial = src.model.initial;
  doc.atoms = src.model.atoms;

  std::vector<ActionOrigin> origins{{ActionOrigin::Kind::temporal, {}},
                                    {ActionOrigin::Kind::reverse, {}}};
  doc.action_vars = {std::string(run_action), std::string(back_action)};
  for (std::size_t i = 0; i < mas.agents().size(); ++i) {
    doc.action_vars.push_back(agent_action(mas.agents()[i].name));
    origins.push_back({ActionOrigin::Kind::epistemic, i});
  }
  for (std::size_t i = 0; i < doc.action_vars.size(); ++i) {
    std::vector<bool> label(doc.action_vars.size(), false);
    label[i] = true;
    doc.actions.push_back({doc.action_vars[i], std::move(label)});
  }

  const std::string run(run_action), back(back_action);
  for (StateId s : mas.states())
    for (StateId t : mas.successors(s))
      doc.transitions.push_back({mas.state_name(s), run, mas.state_name(t)});
  for (StateId s : mas.states())
    for (StateId t : mas.successors(s))
      doc.transitions.push_back({mas.state_name(t), back, mas.state_name(s)});

  // Group reachable states by local view; each class is a clique.
  const StateSet& reach = mas.reachable();
  for (std::size_t i = 0; i < mas.agents().size(); ++i) {
    const std::string act = agent_action(mas.agents()[i].name);
    std::vector<std::vector<StateId>> classes;
    for (StateId s : mas.states()) {
      if (!reach.test(s.value)) continue;
      auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) {
        return mas.equivalent(i, c.front(), s);
      });
      if (it == classes.end())
        classes.push_back({s});
      else
        it->push_back(s);
    }
    for (const auto& c : classes)
      for (StateId s : c)
        for (StateId t : c)
          doc.transitions.push_back({mas.state_name(s), act, mas.state_name(t)});
  }

  ReductionResult out{MixedTransitionSystem(std::move(doc)), {}, std::string(init_atom),
                      std::move(origins)};
  out.action_atoms = out.model.action_atoms();
  return out;
}

/// E<BACK>F Init: the state is reachable from an initial state.
inline Formula reachable_formula() {
  return Formula::exists(ActionFormula::atom(std::string(back_action)),
                         PathOp::finally, Formula::atom(std::string(init_atom)));
}

/// CTLK to ARCTL. Implicit temporal quantifiers get the RUN action and
/// K<ag> phi becomes A<Agt_ag>X (Reachable -> phi).
inline Formula reduce_ctlk(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::truth:
    case K::falsity:
    case K::atom:
      return f;
    case K::negation:
      return Formula::negation(reduce_ctlk(f.lhs()));
    case K::conjunction:
      return Formula::conjunction(reduce_ctlk(f.lhs()), reduce_ctlk(f.rhs()));
    case K::disjunction:
      return Formula::disjunction(reduce_ctlk(f.lhs()), reduce_ctlk(f.rhs()));
    case K::implication:
      return Formula::implication(reduce_ctlk(f.lhs()), reduce_ctlk(f.rhs()));
    case K::equivalence:
      return Formula::equivalence(reduce_ctlk(f.lhs()), reduce_ctlk(f.rhs()));
    case K::exists:
    case K::forall: {
      auto action = f.action() ? f.action()
                               : ActionFormula::atom(std::string(run_action));
      std::optional<Formula> rhs;
      if (f.arity() == 2) rhs = reduce_ctlk(f.rhs());
      return f.kind() == K::exists
                 ? Formula::exists(action, f.path_op(), reduce_ctlk(f.lhs()), rhs)
                 : Formula::forall(action, f.path_op(), reduce_ctlk(f.lhs()), rhs);
    }
    case K::knows:
      return Formula::forall(
          ActionFormula::atom(agent_action(f.name())), PathOp::next,
          Formula::implication(reachable_formula(), reduce_ctlk(f.lhs())));
    case K::group:
      throw UnsupportedOperatorError("group knowledge operator '" + f.name() +
                                     "' has no reduction");
  }
  return f;
}

// ---------------------------------------------------------------------------
// Multi-agent file format (format 1): the model format without action
// sections, with [source, target] transitions and an `agents` section.

inline MasDocument parse_mas_document(std::string_view text) {
  using namespace detail;
  const Json j = parse_json_text(text);
  check_format(j);
  MasDocument doc;
  parse_common(j, doc.model);
  const Json& ts = require(j, "transitions", "document");
  if (!ts.is_array()) schema_error("transitions", "expected an array");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    if (!ts[i].is_array() || ts[i].size() != 2)
      schema_error(where, "expected [source, target]");
    doc.transitions.emplace_back(require_string(ts[i][0], where),
                                 require_string(ts[i][1], where));
  }
  const Json& agents = require(j, "agents", "document");
  if (!agents.is_object()) schema_error("agents", "expected an object");
  for (const auto& [name, locals] : agents.items()) {
    if (!locals.is_array()) schema_error("agents." + name, "expected an array");
    Agent ag{name, {}};
    for (const auto& v : locals) ag.locals.push_back(require_string(v, "agents." + name));
    doc.agents.push_back(std::move(ag));
  }
  return doc;
}

inline MultiAgentSystem load_mas(std::string_view text) {
  return MultiAgentSystem(parse_mas_document(text));
}

/// True when the text has an `agents` section, i.e. is a multi-agent file.
inline bool looks_like_mas(std::string_view text) {
  const Json j = detail::parse_json_text(text);
  return j.is_object() && j.contains("agents");
}

inline std::string save_mas(const MultiAgentSystem& mas) {
  const MasDocument& doc = mas.document();
  Json out = Json::object();
  out["format"] = 1;
  detail::emit_common(doc.model, out);
  out["states"] = detail::states_json(doc.model);
  Json initial = Json::array();
  for (StateId s : mas.initial_states()) initial.push_back(mas.state_name(s));
  out["initial"] = std::move(initial);
  Json ts = Json::array();
  for (StateId s : mas.states())
    for (StateId t : mas.successors(s))
      ts.push_back(Json::array({mas.state_name(s), mas.state_name(t)}));
  out["transitions"] = std::move(ts);
  out["atoms"] = detail::atoms_json(doc.model);
  Json agents = Json::object();
  for (const auto& ag : doc.agents) agents[ag.name] = ag.locals;
  out["agents"] = std::move(agents);
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Dining cryptographers
//
// Cryptographers sit in a ring; cryptographer i flips a coin seen by
// herself and her right neighbour, so she sees her own coin and the coin
// of her left neighbour. She then announces whether the two coins differ,
// lying if she paid. Phase 0 fixes the payer (nobody, or one of them),
// phase 1 flips the coins, phase 2 makes the claims and then stutters.

inline std::string cryptographer_name(std::size_t i) {
  return std::string(1, static_cast<char>('a' + i));
}

inline MultiAgentSystem build_crypto_model(std::size_t n_agents = 3) {
  if (n_agents < 3 || n_agents > 8)
    throw std::invalid_argument("between 3 and 8 cryptographers are supported");
  const std::size_t n = n_agents;
  MasDocument doc;
  ModelDocument& m = doc.model;
  auto var = [&](std::size_t i, const char* field) {
    return cryptographer_name(i) + "." + field;
  };
  for (const char* field : {"payer", "coin", "claim"})
    for (std::size_t i = 0; i < n; ++i)
      m.state_vars.push_back({var(i, field), ValueType::boolean});
  m.state_vars.push_back({"phase", ValueType::integer});

  auto left = [&](std::size_t i) { return (i + n - 1) % n; };
  auto payer_label = [&](std::size_t p) {
    return p == n ? std::string("none") : cryptographer_name(p);
  };
  auto coins_label = [&](unsigned coins) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += (coins >> i) & 1u ? 'h' : 't';
    return s;
  };
  auto add_state = [&](std::string id, std::size_t payer, unsigned coins,
                       bool claimed, std::int64_t phase) {
    ModelDocument::State st{std::move(id), {}};
    for (std::size_t i = 0; i < n; ++i) st.values.emplace_back(payer == i);
    for (std::size_t i = 0; i < n; ++i) st.values.emplace_back(((coins >> i) & 1u) != 0);
    for (std::size_t i = 0; i < n; ++i) {
      const bool differ = ((coins >> i) & 1u) != ((coins >> left(i)) & 1u);
      st.values.emplace_back(claimed && (differ != (payer == i)));
    }
    st.values.emplace_back(phase);
    m.states.push_back(std::move(st));
  };

  // Payer order: nobody first, then a, b, c, ...
  std::vector<std::size_t> payers{n};
  for (std::size_t i = 0; i < n; ++i) payers.push_back(i);
  const unsigned outcomes = 1u << n;
  for (std::size_t p : payers) {
    add_state("init." + payer_label(p), p, 0, false, 0);
    m.initial.push_back("init." + payer_label(p));
  }
  for (std::size_t p : payers)
    for (unsigned c = 0; c < outcomes; ++c)
      add_state("flip." + payer_label(p) + "." + coins_label(c), p, c, false, 1);
  for (std::size_t p : payers)
    for (unsigned c = 0; c < outcomes; ++c)
      add_state("claim." + payer_label(p) + "." + coins_label(c), p, c, true, 2);

  for (std::size_t p : payers) {
    const std::string who = payer_label(p);
    for (unsigned c = 0; c < outcomes; ++c) {
      const std::string flip = "flip." + who + "." + coins_label(c);
      const std::string claim = "claim." + who + "." + coins_label(c);
      doc.transitions.emplace_back("init." + who, flip);
      doc.transitions.emplace_back(flip, claim);
      doc.transitions.emplace_back(claim, claim);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    Agent ag{cryptographer_name(i), {var(i, "payer"), var(i, "coin"), var(left(i), "coin")}};
    for (std::size_t j = 0; j < n; ++j) ag.locals.push_back(var(j, "claim"));
    ag.locals.push_back("phase");
    doc.agents.push_back(std::move(ag));
  }

  // odd: an odd number of "different" claims, i.e. a cryptographer paid.
  std::vector<Predicate> odd_cases;
  for (unsigned mask = 0; mask < outcomes; ++mask) {
    if (__builtin_popcount(mask) % 2 == 0) continue;
    std::vector<Predicate> conj;
    for (std::size_t i = 0; i < n; ++i)
      conj.push_back(Predicate::eq(var(i, "claim"), ((mask >> i) & 1u) != 0));
    odd_cases.push_back(Predicate::conjunction(std::move(conj)));
  }
  m.atoms.emplace_back("odd", Predicate::conjunction(
                                  {Predicate::eq("phase", std::int64_t{2}),
                                   Predicate::disjunction(std::move(odd_cases))}));
  return MultiAgentSystem(std::move(doc));
}

}  // namespace arctl
