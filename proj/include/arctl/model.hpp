#pragma once

// Mixed transition systems: states and actions labelled with atomic
// propositions, transition triples, alpha-restricted adjacency, and the
// JSON model document.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <json.hpp>

#include "arctl/formula.hpp"

namespace arctl {

using Json = nlohmann::ordered_json;

struct StateId {
  std::uint32_t value;
  friend auto operator<=>(StateId, StateId) = default;
};

struct ActionId {
  std::uint32_t value;
  friend auto operator<=>(ActionId, ActionId) = default;
};

/// One bit per state, indexed by StateId::value.
using StateSet = boost::dynamic_bitset<>;

class ModelError : public std::runtime_error {
 public:
  enum class Kind {
    syntax,
    schema,
    dangling_reference,
    empty_states,
    duplicate,
    type_mismatch,
  };
  ModelError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// An atom that is not in P_S (state atoms) or P_A (action atoms).
class UnknownAtomError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Variables and predicates

enum class ValueType { boolean, integer, string };
using Value = std::variant<bool, std::int64_t, std::string>;

inline const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::boolean: return "bool";
    case ValueType::integer: return "int";
    case ValueType::string: return "string";
  }
  return "?";
}

inline ValueType type_of(const Value& v) {
  return static_cast<ValueType>(v.index());
}

inline std::string to_string(const Value& v) {
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<std::string>(v);
}

struct VariableDecl {
  std::string name;
  ValueType type;
  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

/// Boolean predicate over state variables, used to define named atoms.
class Predicate {
 public:
  enum class Kind { constant, var, eq, ne, negation, conjunction, disjunction };

  static Predicate constant(bool b) {
    Predicate p(Kind::constant);
    p.value_ = b;
    return p;
  }
  static Predicate var(std::string name) {
    Predicate p(Kind::var);
    p.variable_ = std::move(name);
    return p;
  }
  static Predicate eq(std::string name, Value v) {
    Predicate p(Kind::eq);
    p.variable_ = std::move(name);
    p.value_ = std::move(v);
    return p;
  }
  static Predicate ne(std::string name, Value v) {
    Predicate p(Kind::ne);
    p.variable_ = std::move(name);
    p.value_ = std::move(v);
    return p;
  }
  static Predicate negation(Predicate inner) {
    Predicate p(Kind::negation);
    p.children_.push_back(std::move(inner));
    return p;
  }
  static Predicate conjunction(std::vector<Predicate> cs) {
    Predicate p(Kind::conjunction);
    p.children_ = std::move(cs);
    return p;
  }
  static Predicate disjunction(std::vector<Predicate> cs) {
    Predicate p(Kind::disjunction);
    p.children_ = std::move(cs);
    return p;
  }

  Kind kind() const { return kind_; }
  const std::string& variable() const { return variable_; }
  const Value& value() const { return value_; }
  const std::vector<Predicate>& children() const { return children_; }

  /// `lookup(name)` returns the variable's value or nullptr if undeclared.
  template <typename Lookup>
  bool evaluate(const Lookup& lookup) const {
    switch (kind_) {
      case Kind::constant:
        return std::get<bool>(value_);
      case Kind::var: {
        const Value* v = lookup(variable_);
        return std::get<bool>(*v);
      }
      case Kind::eq:
        return *lookup(variable_) == value_;
      case Kind::ne:
        return *lookup(variable_) != value_;
      case Kind::negation:
        return !children_.front().evaluate(lookup);
      case Kind::conjunction:
        return std::all_of(children_.begin(), children_.end(),
                           [&](const Predicate& c) { return c.evaluate(lookup); });
      case Kind::disjunction:
        return std::any_of(children_.begin(), children_.end(),
                           [&](const Predicate& c) { return c.evaluate(lookup); });
    }
    return false;
  }

  friend bool operator==(const Predicate&, const Predicate&) = default;

 private:
  explicit Predicate(Kind k) : kind_(k) {}

  Kind kind_;
  std::string variable_;
  Value value_ = false;
  std::vector<Predicate> children_;
};

// ---------------------------------------------------------------------------
// Model document

/// Declaration-ordered contents of a model file.
struct ModelDocument {
  struct State {
    std::string id;
    std::vector<Value> values;  // aligned with state_vars
    friend bool operator==(const State&, const State&) = default;
  };
  struct Action {
    std::string id;
    std::vector<bool> values;  // aligned with action_vars
    friend bool operator==(const Action&, const Action&) = default;
  };
  struct Transition {
    std::string source;
    std::string action;
    std::string target;
    friend bool operator==(const Transition&, const Transition&) = default;
  };

  std::vector<VariableDecl> state_vars;
  std::vector<std::string> action_vars;
  std::vector<State> states;
  std::vector<std::string> initial;
  std::vector<Action> actions;
  std::vector<Transition> transitions;
  std::vector<std::pair<std::string, Predicate>> atoms;

  friend bool operator==(const ModelDocument&, const ModelDocument&) = default;
};

/// (action, state) pair of an adjacency list.
struct Step {
  ActionId action;
  StateId state;
  friend auto operator<=>(const Step&, const Step&) = default;
};

class MixedTransitionSystem {
 public:
  explicit MixedTransitionSystem(ModelDocument doc) : doc_(std::move(doc)) {
    build();
  }

  std::size_t state_count() const { return doc_.states.size(); }
  std::size_t action_count() const { return doc_.actions.size(); }

  const std::string& state_name(StateId s) const {
    return doc_.states.at(s.value).id;
  }
  const std::string& action_name(ActionId a) const {
    return doc_.actions.at(a.value).id;
  }
  std::optional<StateId> find_state(std::string_view id) const {
    auto it = state_index_.find(std::string(id));
    if (it == state_index_.end()) return std::nullopt;
    return StateId{it->second};
  }
  std::optional<ActionId> find_action(std::string_view id) const {
    auto it = action_index_.find(std::string(id));
    if (it == action_index_.end()) return std::nullopt;
    return ActionId{it->second};
  }

  std::vector<StateId> states() const {
    std::vector<StateId> out;
    for (std::uint32_t i = 0; i < state_count(); ++i) out.push_back({i});
    return out;
  }
  const std::vector<StateId>& initial_states() const { return initial_; }
  bool is_initial(StateId s) const { return initial_set_.test(s.value); }
  StateSet initial_set() const { return initial_set_; }
  StateSet empty_set() const { return StateSet(state_count()); }
  StateSet full_set() const { return ~empty_set(); }

  /// Outgoing (action, target) pairs in (action, target) order.
  std::span<const Step> successors(StateId s) const {
    return out_.at(s.value);
  }
  /// Incoming (action, source) pairs in (action, source) order.
  std::span<const Step> predecessors(StateId s) const {
    return in_.at(s.value);
  }
  bool has_transition(StateId s, ActionId a, StateId t) const {
    const auto& v = out_.at(s.value);
    return std::binary_search(v.begin(), v.end(), Step{a, t});
  }
  std::size_t transition_count() const { return transition_count_; }

  /// Names of P_S: boolean state variables then declared atoms.
  const std::vector<std::string>& state_atoms() const { return state_atom_names_; }
  bool has_state_atom(std::string_view name) const {
    return state_atom_index_.count(std::string(name)) != 0;
  }
  const StateSet& atom_states(std::string_view name) const {
    auto it = state_atom_index_.find(std::string(name));
    if (it == state_atom_index_.end())
      throw UnknownAtomError("unknown state atom '" + std::string(name) + "'");
    return state_atom_sets_[it->second];
  }
  /// Atoms of P_S holding in `s`, in declaration order.
  std::vector<std::string> label(StateId s) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < state_atom_names_.size(); ++i)
      if (state_atom_sets_[i].test(s.value)) out.push_back(state_atom_names_[i]);
    return out;
  }

  /// P_A.
  const std::vector<std::string>& action_atoms() const { return doc_.action_vars; }
  bool action_has(ActionId a, std::string_view atom) const {
    auto it = std::find(doc_.action_vars.begin(), doc_.action_vars.end(), atom);
    if (it == doc_.action_vars.end())
      throw UnknownAtomError("unknown action atom '" + std::string(atom) + "'");
    return doc_.actions.at(a.value)
        .values[static_cast<std::size_t>(it - doc_.action_vars.begin())];
  }
  std::vector<std::string> action_label(ActionId a) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < doc_.action_vars.size(); ++i)
      if (doc_.actions.at(a.value).values[i]) out.push_back(doc_.action_vars[i]);
    return out;
  }

  /// Variable assignment of a state, in declaration order.
  std::vector<std::pair<std::string, Value>> variables(StateId s) const {
    std::vector<std::pair<std::string, Value>> out;
    const auto& st = doc_.states.at(s.value);
    for (std::size_t i = 0; i < doc_.state_vars.size(); ++i)
      out.emplace_back(doc_.state_vars[i].name, st.values[i]);
    return out;
  }

  const ModelDocument& document() const { return doc_; }

 private:
  [[noreturn]] static void fail(ModelError::Kind k, const std::string& msg) {
    throw ModelError(k, msg);
  }

  void build() {
    using K = ModelError::Kind;
    if (doc_.states.empty()) fail(K::empty_states, "model declares no states");

    std::unordered_map<std::string, std::size_t> var_index;
    for (std::size_t i = 0; i < doc_.state_vars.size(); ++i)
      if (!var_index.emplace(doc_.state_vars[i].name, i).second)
        fail(K::duplicate, "duplicate state variable '" + doc_.state_vars[i].name + "'");

    for (std::uint32_t i = 0; i < doc_.states.size(); ++i) {
      const auto& st = doc_.states[i];
      if (!state_index_.emplace(st.id, i).second)
        fail(K::duplicate, "duplicate state '" + st.id + "'");
      if (st.values.size() != doc_.state_vars.size())
        fail(K::schema, "state '" + st.id + "' does not assign every variable");
      for (std::size_t v = 0; v < st.values.size(); ++v)
        if (type_of(st.values[v]) != doc_.state_vars[v].type)
          fail(K::type_mismatch, "state '" + st.id + "': variable '" +
                                     doc_.state_vars[v].name + "' expects " +
                                     type_name(doc_.state_vars[v].type));
    }

    for (std::size_t i = 0; i < doc_.action_vars.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (doc_.action_vars[i] == doc_.action_vars[j])
          fail(K::duplicate, "duplicate action variable '" + doc_.action_vars[i] + "'");
    for (std::uint32_t i = 0; i < doc_.actions.size(); ++i) {
      const auto& act = doc_.actions[i];
      if (!action_index_.emplace(act.id, i).second)
        fail(K::duplicate, "duplicate action '" + act.id + "'");
      if (act.values.size() != doc_.action_vars.size())
        fail(K::schema, "action '" + act.id + "' does not assign every variable");
    }

    initial_set_ = empty_set();
    for (const auto& id : doc_.initial) {
      auto s = find_state(id);
      if (!s) fail(K::dangling_reference, "initial state '" + id + "' is not declared");
      initial_set_.set(s->value);
    }
    for (std::uint32_t i = 0; i < state_count(); ++i)
      if (initial_set_.test(i)) initial_.push_back({i});

    out_.assign(state_count(), {});
    in_.assign(state_count(), {});
    for (const auto& t : doc_.transitions) {
      auto s = find_state(t.source);
      auto a = find_action(t.action);
      auto d = find_state(t.target);
      if (!s) fail(K::dangling_reference, "transition source '" + t.source + "' is not declared");
      if (!a) fail(K::dangling_reference, "transition action '" + t.action + "' is not declared");
      if (!d) fail(K::dangling_reference, "transition target '" + t.target + "' is not declared");
      out_[s->value].push_back({*a, *d});
      in_[d->value].push_back({*a, *s});
    }
    transition_count_ = 0;
    for (auto* adj : {&out_, &in_}) {
      for (auto& v : *adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
    }
    for (const auto& v : out_) transition_count_ += v.size();

    // P_S: boolean variables, then named predicates.
    for (std::size_t v = 0; v < doc_.state_vars.size(); ++v) {
      if (doc_.state_vars[v].type != ValueType::boolean) continue;
      StateSet set = empty_set();
      for (std::size_t s = 0; s < state_count(); ++s)
        if (std::get<bool>(doc_.states[s].values[v])) set.set(s);
      add_state_atom(doc_.state_vars[v].name, std::move(set));
    }
    for (const auto& [name, pred] : doc_.atoms) {
      if (var_index.count(name))
        fail(K::duplicate, "atom '" + name + "' shadows a state variable");
      check_predicate(pred, var_index);
      StateSet set = empty_set();
      for (std::size_t s = 0; s < state_count(); ++s) {
        const auto& values = doc_.states[s].values;
        auto lookup = [&](const std::string& var) -> const Value* {
          return &values[var_index.at(var)];
        };
        if (pred.evaluate(lookup)) set.set(s);
      }
      add_state_atom(name, std::move(set));
    }
  }

  void check_predicate(const Predicate& p,
                       const std::unordered_map<std::string, std::size_t>& vars) const {
    using K = ModelError::Kind;
    using PK = Predicate::Kind;
    if (p.kind() == PK::var || p.kind() == PK::eq || p.kind() == PK::ne) {
      auto it = vars.find(p.variable());
      if (it == vars.end())
        fail(K::dangling_reference, "predicate references undeclared variable '" + p.variable() + "'");
      const ValueType declared = doc_.state_vars[it->second].type;
      if (p.kind() == PK::var && declared != ValueType::boolean)
        fail(K::type_mismatch, "variable '" + p.variable() + "' is not boolean");
      if (p.kind() != PK::var && type_of(p.value()) != declared)
        fail(K::type_mismatch, "comparison with '" + p.variable() + "' has the wrong type");
    }
    for (const auto& c : p.children()) check_predicate(c, vars);
  }

  void add_state_atom(const std::string& name, StateSet set) {
    if (!state_atom_index_.emplace(name, state_atom_names_.size()).second)
      throw ModelError(ModelError::Kind::duplicate, "duplicate atom '" + name + "'");
    state_atom_names_.push_back(name);
    state_atom_sets_.push_back(std::move(set));
  }

  ModelDocument doc_;
  std::unordered_map<std::string, std::uint32_t> state_index_;
  std::unordered_map<std::string, std::uint32_t> action_index_;
  std::vector<StateId> initial_;
  StateSet initial_set_;
  std::vector<std::vector<Step>> out_;
  std::vector<std::vector<Step>> in_;
  std::size_t transition_count_ = 0;
  std::vector<std::string> state_atom_names_;
  std::unordered_map<std::string, std::size_t> state_atom_index_;
  std::vector<StateSet> state_atom_sets_;
};

// ---------------------------------------------------------------------------
// Paths

/// Alternating states and actions; `loop`, when set, is the index of an
/// earlier position whose state equals the last one.
struct Path {
  std::vector<StateId> states;
  std::vector<ActionId> actions;
  std::optional<std::size_t> loop;

  std::size_t length() const { return actions.size(); }

  bool is_valid(const MixedTransitionSystem& m) const {
    if (states.empty() || actions.size() + 1 != states.size()) return false;
    for (std::size_t i = 0; i < actions.size(); ++i)
      if (!m.has_transition(states[i], actions[i], states[i + 1])) return false;
    if (loop && (*loop >= states.size() - 1 || states[*loop] != states.back()))
      return false;
    return true;
  }

  friend bool operator==(const Path&, const Path&) = default;
};

// ---------------------------------------------------------------------------
// Evaluation

inline bool eval_action(const MixedTransitionSystem& m, ActionId a,
                        const ActionFormula& alpha) {
  using K = ActionFormula::Kind;
  switch (alpha.kind()) {
    case K::truth: return true;
    case K::falsity: return false;
    case K::atom: return m.action_has(a, alpha.name());
    case K::negation: return !eval_action(m, a, alpha.operand());
    case K::conjunction:
      return eval_action(m, a, alpha.operand(0)) &&
             eval_action(m, a, alpha.operand(1));
    case K::disjunction:
      return eval_action(m, a, alpha.operand(0)) ||
             eval_action(m, a, alpha.operand(1));
  }
  return false;
}

/// One flag per action: does it satisfy alpha.
inline std::vector<bool> action_mask(const MixedTransitionSystem& m,
                                     const ActionFormula& alpha) {
  for (const auto& atom : alpha.atoms()) {
    const auto& known = m.action_atoms();
    if (std::find(known.begin(), known.end(), atom) == known.end())
      throw UnknownAtomError("unknown action atom '" + atom + "'");
  }
  std::vector<bool> mask(m.action_count());
  for (std::uint32_t a = 0; a < m.action_count(); ++a)
    mask[a] = eval_action(m, {a}, alpha);
  return mask;
}

/// `literal` is an atom or a negated atom.
inline bool eval_atom(const MixedTransitionSystem& m, StateId s,
                      const Formula& literal) {
  if (literal.kind() == Formula::Kind::atom)
    return m.atom_states(literal.name()).test(s.value);
  if (literal.kind() == Formula::Kind::negation &&
      literal.lhs().kind() == Formula::Kind::atom)
    return !m.atom_states(literal.lhs().name()).test(s.value);
  if (literal.kind() == Formula::Kind::truth) return true;
  if (literal.kind() == Formula::Kind::falsity) return false;
  throw std::invalid_argument("'" + to_string(literal) + "' is not a literal");
}

inline std::vector<Step> alpha_successors(const MixedTransitionSystem& m,
                                          StateId s,
                                          const ActionFormula& alpha) {
  const auto mask = action_mask(m, alpha);
  std::vector<Step> out;
  for (const Step& st : m.successors(s))
    if (mask[st.action.value]) out.push_back(st);
  return out;
}

inline std::vector<Step> alpha_predecessors(const MixedTransitionSystem& m,
                                            StateId s,
                                            const ActionFormula& alpha) {
  const auto mask = action_mask(m, alpha);
  std::vector<Step> out;
  for (const Step& st : m.predecessors(s))
    if (mask[st.action.value]) out.push_back(st);
  return out;
}

/// States reachable from the initial states over any action.
inline StateSet reachable(const MixedTransitionSystem& m) {
  StateSet seen = m.initial_set();
  std::deque<StateId> todo(m.initial_states().begin(), m.initial_states().end());
  while (!todo.empty()) {
    StateId s = todo.front();
    todo.pop_front();
    for (const Step& st : m.successors(s)) {
      if (!seen.test(st.state.value)) {
        seen.set(st.state.value);
        todo.push_back(st.state);
      }
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------
// JSON model format (format 1)

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where,
                                      const std::string& msg) {
  throw ModelError(ModelError::Kind::schema, where + ": " + msg);
}

inline const Json& require(const Json& obj, const char* key,
                           const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing '") + key + "'");
  return *it;
}

inline std::string require_string(const Json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

inline ValueType parse_type(const Json& j, const std::string& where) {
  const std::string t = require_string(j, where);
  if (t == "bool") return ValueType::boolean;
  if (t == "int") return ValueType::integer;
  if (t == "string") return ValueType::string;
  schema_error(where, "unknown type '" + t + "'");
}

inline Value parse_value(const Json& j, const std::string& where) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  schema_error(where, "expected a bool, integer or string value");
}

inline Json value_json(const Value& v) {
  if (auto b = std::get_if<bool>(&v)) return *b;
  if (auto i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<std::string>(v);
}

inline Predicate parse_predicate(const Json& j, const std::string& where) {
  if (j.is_boolean()) return Predicate::constant(j.get<bool>());
  if (!j.is_object() || j.size() != 1)
    schema_error(where, "a predicate is a boolean or a single-key object");
  const auto& [key, arg] = *j.items().begin();
  const std::string inner = where + "." + key;
  if (key == "var") return Predicate::var(require_string(arg, inner));
  if (key == "eq" || key == "ne") {
    if (!arg.is_array() || arg.size() != 2)
      schema_error(inner, "expected [variable, value]");
    auto var = require_string(arg[0], inner);
    auto val = parse_value(arg[1], inner);
    return key == "eq" ? Predicate::eq(std::move(var), std::move(val))
                       : Predicate::ne(std::move(var), std::move(val));
  }
  if (key == "not") return Predicate::negation(parse_predicate(arg, inner));
  if (key == "and" || key == "or") {
    if (!arg.is_array()) schema_error(inner, "expected an array");
    std::vector<Predicate> cs;
    for (std::size_t i = 0; i < arg.size(); ++i)
      cs.push_back(parse_predicate(arg[i], inner + "[" + std::to_string(i) + "]"));
    return key == "and" ? Predicate::conjunction(std::move(cs))
                        : Predicate::disjunction(std::move(cs));
  }
  schema_error(where, "unknown predicate operator '" + key + "'");
}

inline Json predicate_json(const Predicate& p) {
  using K = Predicate::Kind;
  Json out = Json::object();
  switch (p.kind()) {
    case K::constant:
      return std::get<bool>(p.value());
    case K::var:
      out["var"] = p.variable();
      break;
    case K::eq:
    case K::ne:
      out[p.kind() == K::eq ? "eq" : "ne"] =
          Json::array({p.variable(), value_json(p.value())});
      break;
    case K::negation:
      out["not"] = predicate_json(p.children().front());
      break;
    case K::conjunction:
    case K::disjunction: {
      Json arr = Json::array();
      for (const auto& c : p.children()) arr.push_back(predicate_json(c));
      out[p.kind() == K::conjunction ? "and" : "or"] = std::move(arr);
      break;
    }
  }
  return out;
}

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ModelError(ModelError::Kind::syntax, e.what());
  }
}

inline void check_format(const Json& j) {
  const Json& f = require(j, "format", "document");
  if (!f.is_number_integer() || f.get<int>() != 1)
    schema_error("format", "unsupported format version");
}

/// Sections shared by model and multi-agent documents.
inline void parse_common(const Json& j, ModelDocument& doc) {
  const Json& vars = require(j, "state_vars", "document");
  if (!vars.is_object()) schema_error("state_vars", "expected an object");
  for (const auto& [name, type] : vars.items())
    doc.state_vars.push_back({name, parse_type(type, "state_vars." + name)});

  const Json& states = require(j, "states", "document");
  if (!states.is_object()) schema_error("states", "expected an object");
  for (const auto& [id, assignment] : states.items()) {
    const std::string where = "states." + id;
    if (!assignment.is_object()) schema_error(where, "expected an object");
    ModelDocument::State st{id, {}};
    for (const auto& decl : doc.state_vars) {
      auto it = assignment.find(decl.name);
      if (it == assignment.end())
        schema_error(where, "missing variable '" + decl.name + "'");
      st.values.push_back(parse_value(*it, where + "." + decl.name));
    }
    for (const auto& [name, value] : assignment.items()) {
      (void)value;
      if (!vars.contains(name))
        throw ModelError(ModelError::Kind::dangling_reference,
                         where + ": undeclared variable '" + name + "'");
    }
    doc.states.push_back(std::move(st));
  }

  const Json& initial = require(j, "initial", "document");
  if (!initial.is_array()) schema_error("initial", "expected an array");
  for (const auto& s : initial) doc.initial.push_back(require_string(s, "initial"));

  if (auto it = j.find("atoms"); it != j.end()) {
    if (!it->is_object()) schema_error("atoms", "expected an object");
    for (const auto& [name, pred] : it->items())
      doc.atoms.emplace_back(name, parse_predicate(pred, "atoms." + name));
  }
}

inline void emit_common(const ModelDocument& doc, Json& out) {
  Json vars = Json::object();
  for (const auto& v : doc.state_vars) vars[v.name] = type_name(v.type);
  out["state_vars"] = std::move(vars);
}

inline Json states_json(const ModelDocument& doc) {
  Json states = Json::object();
  for (const auto& st : doc.states) {
    Json assignment = Json::object();
    for (std::size_t i = 0; i < doc.state_vars.size(); ++i)
      assignment[doc.state_vars[i].name] = value_json(st.values[i]);
    states[st.id] = std::move(assignment);
  }
  return states;
}

inline Json atoms_json(const ModelDocument& doc) {
  Json atoms = Json::object();
  for (const auto& [name, pred] : doc.atoms) atoms[name] = predicate_json(pred);
  return atoms;
}

}  // namespace detail

inline ModelDocument parse_model_document(std::string_view text) {
  using namespace detail;
  const Json j = parse_json_text(text);
  check_format(j);
  ModelDocument doc;
  parse_common(j, doc);

  const Json& avars = require(j, "action_vars", "document");
  if (!avars.is_object()) schema_error("action_vars", "expected an object");
  for (const auto& [name, type] : avars.items()) {
    if (parse_type(type, "action_vars." + name) != ValueType::boolean)
      schema_error("action_vars." + name, "action variables must be bool");
    doc.action_vars.push_back(name);
  }

  const Json& actions = require(j, "actions", "document");
  if (!actions.is_object()) schema_error("actions", "expected an object");
  for (const auto& [id, assignment] : actions.items()) {
    const std::string where = "actions." + id;
    if (!assignment.is_object()) schema_error(where, "expected an object");
    ModelDocument::Action act{id, {}};
    for (const auto& name : doc.action_vars) {
      auto it = assignment.find(name);
      if (it == assignment.end() || !it->is_boolean())
        schema_error(where, "missing boolean '" + name + "'");
      act.values.push_back(it->get<bool>());
    }
    for (const auto& [name, value] : assignment.items()) {
      (void)value;
      if (!avars.contains(name))
        throw ModelError(ModelError::Kind::dangling_reference,
                         where + ": undeclared action variable '" + name + "'");
    }
    doc.actions.push_back(std::move(act));
  }

  const Json& ts = require(j, "transitions", "document");
  if (!ts.is_array()) schema_error("transitions", "expected an array");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    if (!ts[i].is_array() || ts[i].size() != 3)
      schema_error(where, "expected [source, action, target]");
    doc.transitions.push_back({require_string(ts[i][0], where),
                               require_string(ts[i][1], where),
                               require_string(ts[i][2], where)});
  }
  return doc;
}

inline MixedTransitionSystem load_model(std::string_view text) {
  return MixedTransitionSystem(parse_model_document(text));
}

/// Canonical text: declaration order, transitions sorted and deduplicated.
inline std::string save_model(const MixedTransitionSystem& m) {
  const ModelDocument& doc = m.document();
  Json out = Json::object();
  out["format"] = 1;
  detail::emit_common(doc, out);
  Json avars = Json::object();
  for (const auto& a : doc.action_vars) avars[a] = "bool";
  out["action_vars"] = std::move(avars);
  out["states"] = detail::states_json(doc);
  Json initial = Json::array();
  for (StateId s : m.initial_states()) initial.push_back(m.state_name(s));
  out["initial"] = std::move(initial);
  Json actions = Json::object();
  for (const auto& act : doc.actions) {
    Json assignment = Json::object();
    for (std::size_t i = 0; i < doc.action_vars.size(); ++i)
      assignment[doc.action_vars[i]] = static_cast<bool>(act.values[i]);
    actions[act.id] = std::move(assignment);
  }
  out["actions"] = std::move(actions);
  Json ts = Json::array();
  for (StateId s : m.states())
    for (const Step& st : m.successors(s))
      ts.push_back(Json::array(
          {m.state_name(s), m.action_name(st.action), m.state_name(st.state)}));
  out["transitions"] = std::move(ts);
  out["atoms"] = detail::atoms_json(doc);
  return out.dump(2) + "\n";
}

}  // namespace arctl
