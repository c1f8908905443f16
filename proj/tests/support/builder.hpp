#pragma once

// Compact construction of small models in tests.

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "arctl/model.hpp"

namespace testing_support {

class ModelBuilder {
 public:
  explicit ModelBuilder(std::vector<std::string> state_atoms = {"p", "q"},
                        std::vector<std::string> action_atoms = {"a", "b"}) {
    for (auto& s : state_atoms) doc_.state_vars.push_back({s, arctl::ValueType::boolean});
    doc_.action_vars = std::move(action_atoms);
  }

  ModelBuilder& state(const std::string& id, std::set<std::string> on = {}) {
    arctl::ModelDocument::State st{id, {}};
    for (const auto& v : doc_.state_vars) st.values.emplace_back(on.count(v.name) != 0);
    doc_.states.push_back(std::move(st));
    return *this;
  }
  ModelBuilder& action(const std::string& id, std::set<std::string> on = {}) {
    arctl::ModelDocument::Action act{id, {}};
    for (const auto& v : doc_.action_vars) act.values.push_back(on.count(v) != 0);
    doc_.actions.push_back(std::move(act));
    return *this;
  }
  ModelBuilder& edge(const std::string& s, const std::string& a, const std::string& t) {
    doc_.transitions.push_back({s, a, t});
    return *this;
  }
  ModelBuilder& initial(const std::string& s) {
    doc_.initial.push_back(s);
    return *this;
  }

  const arctl::ModelDocument& document() const { return doc_; }
  arctl::MixedTransitionSystem build() const { return arctl::MixedTransitionSystem(doc_); }

 private:
  arctl::ModelDocument doc_;
};

inline arctl::StateId sid(const arctl::MixedTransitionSystem& m, const std::string& id) {
  return *m.find_state(id);
}

}  // namespace testing_support
