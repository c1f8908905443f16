#pragma once

// Builders for the bundled example models under models/.

#include <cstdint>
#include <string>
#include <vector>

#include "arctl/epistemic.hpp"
#include "arctl/model.hpp"

namespace arctl {

/// Alice picks N in [lo, hi]; Bob asks in turn whether N is divisible by
/// 2, 3 and 5, remembering the answers, then stops. Bob observes only his
/// step counter and the answers.
inline MultiAgentSystem build_alice_bob_model(std::int64_t lo = 10, std::int64_t hi = 100) {
  const std::vector<std::int64_t> divisors{2, 3, 5};
  MasDocument doc;
  ModelDocument& m = doc.model;
  m.state_vars = {{"N", ValueType::integer}, {"step", ValueType::integer}};
  for (auto d : divisors) m.state_vars.push_back({"div" + std::to_string(d), ValueType::boolean});

  auto id = [](std::int64_t n, std::size_t step) {
    return "n" + std::to_string(n) + ".s" + std::to_string(step);
  };
  for (std::int64_t n = lo; n <= hi; ++n) {
    for (std::size_t step = 0; step <= divisors.size(); ++step) {
      ModelDocument::State st{id(n, step), {Value{n}, Value{std::int64_t(step)}}};
      for (std::size_t i = 0; i < divisors.size(); ++i)
        st.values.emplace_back(i < step && n % divisors[i] == 0);
      m.states.push_back(std::move(st));
      if (step == 0) m.initial.push_back(id(n, 0));
      if (step > 0) doc.transitions.emplace_back(id(n, step - 1), id(n, step));
    }
    doc.transitions.emplace_back(id(n, divisors.size()), id(n, divisors.size()));
  }

  std::vector<Predicate> primes;
  for (std::int64_t n = lo; n <= hi; ++n) {
    bool prime = n >= 2;
    for (std::int64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) prime = false;
    if (prime) primes.push_back(Predicate::eq("N", Value{n}));
  }
  m.atoms.emplace_back("prime", Predicate::disjunction(std::move(primes)));

  doc.agents.push_back({"Alice", {"N", "step"}});
  Agent bob{"Bob", {"step"}};
  for (auto d : divisors) bob.locals.push_back("div" + std::to_string(d));
  doc.agents.push_back(std::move(bob));
  return MultiAgentSystem(std::move(doc));
}

/// A print queue: the user submits jobs, the printer finishes or jams,
/// maintenance clears a jam.
inline MixedTransitionSystem build_printer_model() {
  ModelDocument m;
  m.state_vars = {{"busy", ValueType::boolean}, {"jammed", ValueType::boolean}};
  m.action_vars = {"user", "maint"};
  auto state = [&](const char* id, bool busy, bool jammed) {
    m.states.push_back({id, {Value{busy}, Value{jammed}}});
  };
  state("idle", false, false);
  state("printing", true, false);
  state("stuck", true, true);
  m.initial = {"idle"};
  m.actions = {{"submit", {true, false}},
               {"finish", {false, false}},
               {"jam", {false, false}},
               {"clear", {false, true}},
               {"cancel", {true, true}}};
  m.transitions = {{"idle", "submit", "printing"},
                   {"printing", "finish", "idle"},
                   {"printing", "jam", "stuck"},
                   {"stuck", "clear", "idle"},
                   {"stuck", "cancel", "idle"},
                   {"printing", "submit", "printing"}};
  m.atoms = {{"ready", Predicate::conjunction({Predicate::negation(Predicate::var("busy")),
                                               Predicate::negation(Predicate::var("jammed"))})}};
  return MixedTransitionSystem(std::move(m));
}

}  // namespace arctl
