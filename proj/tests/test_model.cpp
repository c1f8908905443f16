#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "arctl/epistemic.hpp"
#include "arctl/model.hpp"
#include "builder.hpp"
#include "oracle.hpp"

using namespace arctl;
using testing_support::ModelBuilder;
using testing_support::sid;

namespace {

MixedTransitionSystem run_model() {
  return ModelBuilder({"p"}, {"run", "Agt1", "Agt2"})
      .state("s0", {"p"})
      .state("s1")
      .action("r", {"run"})
      .action("k", {"Agt1", "Agt2"})
      .edge("s0", "r", "s1")
      .edge("s0", "k", "s0")
      .initial("s0")
      .build();
}

const char* minimal = R"({"format": 1, "state_vars": {}, "action_vars": {},
  "states": {"only": {}}, "initial": ["only"], "actions": {}, "transitions": []})";

}  // namespace

TEST(EvalAction, Examples) {
  const auto m = run_model();
  const ActionId r = *m.find_action("r"), k = *m.find_action("k");
  EXPECT_TRUE(eval_action(m, r, parse_action_formula("run")));
  EXPECT_FALSE(eval_action(m, r, parse_action_formula("!run")));
  EXPECT_TRUE(eval_action(m, k, parse_action_formula("Agt1 & !run")));
  EXPECT_THROW(eval_action(m, k, parse_action_formula("nope")), UnknownAtomError);
}

TEST(EvalAtom, Examples) {
  const auto m = ModelBuilder().state("s", {"p"}).state("t").initial("s").build();
  EXPECT_TRUE(eval_atom(m, sid(m, "s"), Formula::atom("p")));
  EXPECT_TRUE(eval_atom(m, sid(m, "s"), parse_formula("!q")));
  EXPECT_FALSE(eval_atom(m, sid(m, "t"), Formula::atom("p")));
  EXPECT_THROW(eval_atom(m, sid(m, "t"), Formula::atom("zz")), UnknownAtomError);
}

TEST(AlphaSuccessors, Examples) {
  const auto m = run_model();
  const auto only_run = alpha_successors(m, sid(m, "s0"), parse_action_formula("run"));
  ASSERT_EQ(only_run.size(), 1u);
  EXPECT_EQ(only_run[0].state, sid(m, "s1"));
  EXPECT_EQ(alpha_successors(m, sid(m, "s0"), ActionFormula::truth()).size(), 2u);
  EXPECT_TRUE(alpha_successors(m, sid(m, "s1"), ActionFormula::truth()).empty());
}

TEST(AlphaPredecessors, Examples) {
  const auto m = run_model();
  const auto pre = alpha_predecessors(m, sid(m, "s1"), ActionFormula::truth());
  ASSERT_EQ(pre.size(), 1u);
  EXPECT_EQ(pre[0].state, sid(m, "s0"));
  EXPECT_TRUE(alpha_predecessors(m, sid(m, "s0"), parse_action_formula("run")).empty());
  const auto self = alpha_predecessors(m, sid(m, "s0"), parse_action_formula("Agt1"));
  ASSERT_EQ(self.size(), 1u);
  EXPECT_EQ(self[0].state, sid(m, "s0"));
}

// Successor and predecessor images against the raw transition list.
TEST(AlphaSuccessors, ReconstructTransitions) {
  oracle::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto doc = oracle::random_model(rng);
    const MixedTransitionSystem m(doc);
    std::set<std::tuple<std::string, std::string, std::string>> expected, rebuilt;
    for (const auto& t : doc.transitions) expected.insert({t.source, t.action, t.target});
    const ActionFormula alpha = oracle::random_action(rng);
    for (StateId s : m.states()) {
      for (const Step& st : alpha_successors(m, s, ActionFormula::truth()))
        rebuilt.insert({m.state_name(s), m.action_name(st.action), m.state_name(st.state)});
      for (const Step& st : alpha_successors(m, s, alpha)) {
        EXPECT_TRUE(eval_action(m, st.action, alpha));
        const auto back = alpha_predecessors(m, st.state, alpha);
        EXPECT_NE(std::find(back.begin(), back.end(), Step{st.action, s}), back.end());
      }
    }
    EXPECT_EQ(rebuilt, expected);
  }
}

TEST(Reachable, Examples) {
  auto chain = ModelBuilder().state("s0").state("s1").state("s2").state("s3").action("a");
  chain.edge("s0", "a", "s1").edge("s1", "a", "s2").initial("s0");
  const auto m = chain.build();
  const StateSet r = reachable(m);
  EXPECT_TRUE(r.test(0) && r.test(1) && r.test(2));
  EXPECT_FALSE(r.test(3));
  auto all = ModelBuilder().state("s0").state("s1").action("a").initial("s0").initial("s1").build();
  EXPECT_EQ(reachable(all).count(), 2u);
}

TEST(Reachable, IsAFixpoint) {
  oracle::Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const MixedTransitionSystem m(oracle::random_model(rng));
    const StateSet r = reachable(m);
    for (StateId s : m.states())
      if (r.test(s.value)) {
        for (const Step& st : m.successors(s)) EXPECT_TRUE(r.test(st.state.value));
      }
  }
}

TEST(Load, MinimalModel) {
  const auto m = load_model(minimal);
  EXPECT_EQ(m.state_count(), 1u);
  EXPECT_EQ(m.transition_count(), 0u);
}

TEST(Load, Errors) {
  auto kind_of = [](const std::string& text) {
    try {
      load_model(text);
    } catch (const ModelError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for " << text;
    return ModelError::Kind::syntax;
  };
  using K = ModelError::Kind;
  EXPECT_EQ(kind_of("{"), K::syntax);
  EXPECT_EQ(kind_of(R"({"format": 2})"), K::schema);
  EXPECT_EQ(kind_of(R"({"format": 1, "state_vars": {}, "action_vars": {}, "states": {},
    "initial": [], "actions": {}, "transitions": []})"),
            K::empty_states);
  EXPECT_EQ(kind_of(R"({"format": 1, "state_vars": {}, "action_vars": {}, "states": {"s": {}},
    "initial": ["s"], "actions": {"a": {}}, "transitions": [["s", "a", "ghost"]]})"),
            K::dangling_reference);
  EXPECT_EQ(kind_of(R"({"format": 1, "state_vars": {}, "action_vars": {}, "states": {"s": {}},
    "initial": ["ghost"], "actions": {}, "transitions": []})"),
            K::dangling_reference);
  EXPECT_EQ(kind_of(R"({"format": 1, "state_vars": {"n": "int"}, "action_vars": {},
    "states": {"s": {"n": true}}, "initial": ["s"], "actions": {}, "transitions": []})"),
            K::type_mismatch);
  EXPECT_EQ(kind_of(R"({"format": 1, "state_vars": {"n": "int"}, "action_vars": {},
    "states": {"s": {"n": 1}}, "initial": ["s"], "actions": {}, "transitions": [],
    "atoms": {"n": {"eq": ["n", 1]}}})"),
            K::duplicate);
  EXPECT_EQ(kind_of(R"({"format": 1, "state_vars": {"n": "int"}, "action_vars": {},
    "states": {"s": {}}, "initial": ["s"], "actions": {}, "transitions": []})"),
            K::schema);
}

TEST(Load, PredicateAtoms) {
  const auto m = load_model(R"({"format": 1,
    "state_vars": {"n": "int", "mode": "string", "on": "bool"},
    "action_vars": {"go": "bool"},
    "states": {"a": {"n": 1, "mode": "x", "on": true}, "b": {"n": 2, "mode": "y", "on": false}},
    "initial": ["a"],
    "actions": {"g": {"go": true}},
    "transitions": [["a", "g", "b"]],
    "atoms": {"small": {"eq": ["n", 1]}, "not_x": {"ne": ["mode", "x"]},
              "both": {"and": [{"var": "on"}, {"not": {"eq": ["n", 2]}}]}}})");
  EXPECT_EQ(m.state_atoms(), (std::vector<std::string>{"on", "small", "not_x", "both"}));
  EXPECT_EQ(m.label(sid(m, "a")), (std::vector<std::string>{"on", "small", "both"}));
  EXPECT_EQ(m.label(sid(m, "b")), (std::vector<std::string>{"not_x"}));
}

TEST(Save, RoundTripIsIdentity) {
  oracle::Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    const MixedTransitionSystem m(oracle::random_model(rng));
    const std::string text = save_model(m);
    const auto again = load_model(text);
    EXPECT_EQ(save_model(again), text);
    EXPECT_EQ(again.transition_count(), m.transition_count());
  }
}

TEST(Path, Validity) {
  const auto m = run_model();
  const ActionId r = *m.find_action("r"), k = *m.find_action("k");
  const StateId s0 = sid(m, "s0"), s1 = sid(m, "s1");
  EXPECT_TRUE((Path{{s0, s1}, {r}, std::nullopt}).is_valid(m));
  EXPECT_FALSE((Path{{s1, s0}, {r}, std::nullopt}).is_valid(m));
  EXPECT_TRUE((Path{{s0, s0}, {k}, 0}).is_valid(m));
  EXPECT_FALSE((Path{{s0, s1}, {r}, 0}).is_valid(m));
}

// The protocol unfolded independently of the model builder: phase 0 picks
// one of four payer settings, phase 1 flips three coins, phase 2 claims.
TEST(CryptographersFile, ReachableCountMatchesEnumeration) {
  std::set<std::tuple<int, int, int>> seen;  // (payer, coins, phase)
  std::vector<std::tuple<int, int, int>> frontier;
  for (int payer = 0; payer < 4; ++payer) frontier.emplace_back(payer, 0, 0);
  while (!frontier.empty()) {
    auto [payer, coins, phase] = frontier.back();
    frontier.pop_back();
    if (!seen.insert({payer, coins, phase}).second) continue;
    if (phase == 0)
      for (int c = 0; c < 8; ++c) frontier.emplace_back(payer, c, 1);
    else
      frontier.emplace_back(payer, coins, 2);
  }
  const std::string path = std::string(ARCTL_SOURCE_DIR) + "/models/dining_cryptographers.mas.json";
  std::ifstream in(path);
  ASSERT_TRUE(in) << path;
  std::stringstream text;
  text << in.rdbuf();
  const auto mas = load_mas(text.str());
  const auto reduced = reduce_mas(mas);
  EXPECT_EQ(reachable(reduced.model).count(), seen.size());
  EXPECT_EQ(mas.reachable().count(), seen.size());
}
