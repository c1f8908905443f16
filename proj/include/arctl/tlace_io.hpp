#pragma once

// TLACE documents: XML and a JSON mirror with the same structure, plus an
// indented text rendering. Formulas are stored in concrete syntax; a loop
// marker is an index into its path.
//
//   <tlace version="1" formula="...">
//     <node state="s" truncated="false">
//       <atomics><literal>p</literal></atomics>
//       <universals><formula>A&lt;a&gt;X q</formula></universals>
//       <branch formula="E&lt;a&gt;G p">
//         <path><node .../><action id="a"/><node .../><action id="a"/><loop ref="0"/></path>
//       </branch>
//     </node>
//     <context>...</context>
//   </tlace>

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "arctl/model.hpp"
#include "arctl/tlace.hpp"

namespace arctl {

inline constexpr int tlace_format_version = 1;

/// Malformed document. `path` locates the offending element, e.g.
/// "/tlace/node/branch[0]/path/node[1]".
class TlaceFormatError : public std::runtime_error {
 public:
  TlaceFormatError(const std::string& what, std::string path)
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Variable values and action labels of the model elements a witness
/// mentions, so the document can be read without the model.
struct TlaceContext {
  struct State {
    std::string id;
    std::vector<std::pair<std::string, std::string>> values;
    friend bool operator==(const State&, const State&) = default;
  };
  struct Action {
    std::string id;
    std::vector<std::string> labels;
    friend bool operator==(const Action&, const Action&) = default;
  };
  std::vector<State> states;
  std::vector<Action> actions;
  bool empty() const { return states.empty() && actions.empty(); }
  friend bool operator==(const TlaceContext&, const TlaceContext&) = default;
};

struct TlaceDocument {
  std::optional<Formula> formula;  // the explained formula
  TlaceNode root;
  TlaceContext context;
};

inline bool operator==(const TlaceDocument& a, const TlaceDocument& b) {
  return a.formula == b.formula && a.root == b.root && a.context == b.context;
}

namespace detail {

inline void collect_elements(const TlaceNode& n, std::set<std::string>& states,
                             std::set<std::string>& actions) {
  states.insert(n.state);
  for (const auto& b : n.branches) {
    if (!b.path) continue;
    for (const auto& a : b.path->actions) actions.insert(a);
    for (const auto& child : b.path->nodes) collect_elements(child, states, actions);
  }
}

}  // namespace detail

/// Context for every state and action of `root` that exists in `m`, in
/// model order.
inline TlaceContext make_context(const MixedTransitionSystem& m, const TlaceNode& root) {
  std::set<std::string> states, actions;
  detail::collect_elements(root, states, actions);
  TlaceContext ctx;
  for (StateId s : m.states()) {
    if (!states.count(m.state_name(s))) continue;
    TlaceContext::State st{m.state_name(s), {}};
    for (const auto& [name, value] : m.variables(s)) st.values.emplace_back(name, to_string(value));
    ctx.states.push_back(std::move(st));
  }
  for (std::uint32_t i = 0; i < m.action_count(); ++i) {
    const ActionId a{i};
    if (!actions.count(m.action_name(a))) continue;
    ctx.actions.push_back({m.action_name(a), m.action_label(a)});
  }
  return ctx;
}

// ---------------------------------------------------------------------------
// XML

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline void write_xml_node(const TlaceNode& n, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  os << pad << "<node state=\"" << xml_escape(n.state) << "\" truncated=\""
     << (n.truncated ? "true" : "false") << "\">\n";
  auto formula_list = [&](const char* outer, const char* inner,
                          const std::vector<Formula>& fs) {
    if (fs.empty()) {
      os << pad << "  <" << outer << "/>\n";
      return;
    }
    os << pad << "  <" << outer << ">\n";
    for (const auto& f : fs)
      os << pad << "    <" << inner << ">" << xml_escape(to_string(f)) << "</" << inner << ">\n";
    os << pad << "  </" << outer << ">\n";
  };
  formula_list("atomics", "literal", n.atomics);
  formula_list("universals", "formula", n.universals);
  for (const auto& b : n.branches) {
    const std::string f = xml_escape(to_string(b.formula));
    if (!b.path) {
      os << pad << "  <branch formula=\"" << f << "\"/>\n";
      continue;
    }
    os << pad << "  <branch formula=\"" << f << "\">\n";
    os << pad << "    <path>\n";
    const TlacePath& p = *b.path;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      write_xml_node(p.nodes[i], os, indent + 3);
      if (i < p.actions.size())
        os << pad << "      <action id=\"" << xml_escape(p.actions[i]) << "\"/>\n";
    }
    if (p.loop) os << pad << "      <loop ref=\"" << *p.loop << "\"/>\n";
    os << pad << "    </path>\n";
    os << pad << "  </branch>\n";
  }
  os << pad << "</node>\n";
}

using PTree = boost::property_tree::ptree;

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::optional<std::string> xml_attr(const PTree& t, const char* name) {
  auto attrs = t.get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  auto v = attrs->get_optional<std::string>(name);
  if (!v) return std::nullopt;
  return *v;
}

inline std::string require_attr(const PTree& t, const char* name, const std::string& where) {
  auto v = xml_attr(t, name);
  if (!v) throw TlaceFormatError(std::string("missing attribute '") + name + "'", where);
  return *v;
}

inline Formula parse_document_formula(const std::string& text, const std::string& where) {
  try {
    return parse_formula(text, Dialect::arctl);
  } catch (const std::exception& e) {
    throw TlaceFormatError(std::string("bad formula: ") + e.what(), where);
  }
}

inline std::size_t parse_index(const std::string& text, const std::string& where) {
  std::size_t value = 0;
  if (text.empty() || text.size() > 9) throw TlaceFormatError("bad index '" + text + "'", where);
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw TlaceFormatError("bad index '" + text + "'", where);
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

inline bool parse_flag(const std::string& text, const std::string& where) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw TlaceFormatError("expected true or false, got '" + text + "'", where);
}

inline TlaceNode read_xml_node(const PTree& t, const std::string& where) {
  TlaceNode n;
  n.state = require_attr(t, "state", where);
  n.truncated = parse_flag(require_attr(t, "truncated", where), where);
  bool seen_atomics = false, seen_universals = false;
  std::size_t branch_index = 0;
  for (const auto& [tag, child] : t) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (tag == "atomics" || tag == "universals") {
      const bool atomics = tag == "atomics";
      bool& seen = atomics ? seen_atomics : seen_universals;
      if (seen) throw TlaceFormatError("duplicate <" + tag + ">", where);
      seen = true;
      const char* inner = atomics ? "literal" : "formula";
      std::size_t i = 0;
      for (const auto& [itag, item] : child) {
        if (itag == "<xmlcomment>") continue;
        const std::string at = where + "/" + tag + "/" + inner + "[" + std::to_string(i++) + "]";
        if (itag != inner) throw TlaceFormatError("unexpected <" + itag + ">", at);
        Formula f = parse_document_formula(trim(item.data()), at);
        if (atomics && !f.is_literal()) throw TlaceFormatError("not a literal", at);
        insert_sorted(atomics ? n.atomics : n.universals, f);
      }
      continue;
    }
    if (tag == "branch") {
      const std::string at = where + "/branch[" + std::to_string(branch_index++) + "]";
      TlaceBranch b{parse_document_formula(require_attr(child, "formula", at), at), std::nullopt};
      for (const auto& [ptag, path] : child) {
        if (ptag == "<xmlattr>" || ptag == "<xmlcomment>") continue;
        if (ptag != "path") throw TlaceFormatError("unexpected <" + ptag + ">", at);
        if (b.path) throw TlaceFormatError("duplicate <path>", at);
        TlacePath p;
        bool after_node = false;
        for (const auto& [etag, elem] : path) {
          if (etag == "<xmlcomment>") continue;
          const std::string pat = at + "/path";
          if (p.loop) throw TlaceFormatError("element after <loop>", pat);
          if (etag == "node") {
            if (after_node) throw TlaceFormatError("consecutive <node> elements", pat);
            p.nodes.push_back(read_xml_node(
                elem, pat + "/node[" + std::to_string(p.nodes.size()) + "]"));
            after_node = true;
          } else if (etag == "action") {
            if (!after_node) throw TlaceFormatError("<action> must follow a <node>", pat);
            p.actions.push_back(require_attr(
                elem, "id", pat + "/action[" + std::to_string(p.actions.size()) + "]"));
            after_node = false;
          } else if (etag == "loop") {
            if (after_node || p.nodes.empty())
              throw TlaceFormatError("<loop> must follow an <action>", pat);
            p.loop = parse_index(require_attr(elem, "ref", pat + "/loop"), pat + "/loop");
          } else {
            throw TlaceFormatError("unexpected <" + etag + ">", pat);
          }
        }
        if (p.nodes.empty()) throw TlaceFormatError("empty path", at + "/path");
        if (!after_node && !p.loop)
          throw TlaceFormatError("path ends with an <action>", at + "/path");
        b.path = std::move(p);
      }
      n.branches.push_back(std::move(b));
      continue;
    }
    throw TlaceFormatError("unexpected <" + tag + ">", where);
  }
  if (!seen_atomics) throw TlaceFormatError("missing <atomics>", where);
  if (!seen_universals) throw TlaceFormatError("missing <universals>", where);
  return n;
}

}  // namespace detail

inline std::string to_xml(const TlaceDocument& doc) {
  using detail::xml_escape;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<tlace version=\"" << tlace_format_version << "\"";
  if (doc.formula) os << " formula=\"" << xml_escape(to_string(*doc.formula)) << "\"";
  os << ">\n";
  detail::write_xml_node(doc.root, os, 1);
  if (!doc.context.empty()) {
    os << "  <context>\n";
    for (const auto& st : doc.context.states) {
      os << "    <state id=\"" << xml_escape(st.id) << "\">\n";
      for (const auto& [name, value] : st.values)
        os << "      <var name=\"" << xml_escape(name) << "\" value=\"" << xml_escape(value)
           << "\"/>\n";
      os << "    </state>\n";
    }
    for (const auto& act : doc.context.actions) {
      os << "    <action id=\"" << xml_escape(act.id) << "\">\n";
      for (const auto& l : act.labels) os << "      <label>" << xml_escape(l) << "</label>\n";
      os << "    </action>\n";
    }
    os << "  </context>\n";
  }
  os << "</tlace>\n";
  return os.str();
}

inline std::string to_xml(const TlaceNode& n) { return to_xml(TlaceDocument{std::nullopt, n, {}}); }

inline TlaceDocument tlace_from_xml(std::string_view text) {
  using namespace detail;
  PTree tree;
  try {
    std::istringstream in{std::string(text)};
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw TlaceFormatError(e.message() + " at line " + std::to_string(e.line()), "");
  }
  auto root = tree.get_child_optional("tlace");
  if (!root || tree.size() != 1) throw TlaceFormatError("expected a single <tlace> element", "/");
  const std::string where = "/tlace";
  const std::string version = require_attr(*root, "version", where);
  if (version != std::to_string(tlace_format_version))
    throw TlaceFormatError("unsupported version '" + version + "'", where);
  TlaceDocument doc;
  if (auto f = xml_attr(*root, "formula")) doc.formula = parse_document_formula(*f, where);
  bool seen_node = false, seen_context = false;
  for (const auto& [tag, child] : *root) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (tag == "node") {
      if (seen_node) throw TlaceFormatError("more than one root <node>", where);
      doc.root = read_xml_node(child, where + "/node");
      seen_node = true;
    } else if (tag == "context") {
      if (seen_context) throw TlaceFormatError("duplicate <context>", where);
      seen_context = true;
      for (const auto& [ctag, item] : child) {
        const std::string at = where + "/context/" + ctag;
        if (ctag == "<xmlcomment>") continue;
        if (ctag == "state") {
          TlaceContext::State st{require_attr(item, "id", at), {}};
          for (const auto& [vtag, var] : item) {
            if (vtag == "<xmlattr>" || vtag == "<xmlcomment>") continue;
            if (vtag != "var") throw TlaceFormatError("unexpected <" + vtag + ">", at);
            st.values.emplace_back(require_attr(var, "name", at + "/var"),
                                   require_attr(var, "value", at + "/var"));
          }
          doc.context.states.push_back(std::move(st));
        } else if (ctag == "action") {
          TlaceContext::Action act{require_attr(item, "id", at), {}};
          for (const auto& [ltag, label] : item) {
            if (ltag == "<xmlattr>" || ltag == "<xmlcomment>") continue;
            if (ltag != "label") throw TlaceFormatError("unexpected <" + ltag + ">", at);
            act.labels.push_back(trim(label.data()));
          }
          doc.context.actions.push_back(std::move(act));
        } else {
          throw TlaceFormatError("unexpected <" + ctag + ">", where + "/context");
        }
      }
    } else {
      throw TlaceFormatError("unexpected <" + tag + ">", where);
    }
  }
  if (!seen_node) throw TlaceFormatError("missing root <node>", where);
  return doc;
}

inline TlaceNode from_xml(std::string_view text) { return tlace_from_xml(text).root; }

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline Json node_json(const TlaceNode& n) {
  Json out = Json::object();
  out["state"] = n.state;
  out["truncated"] = n.truncated;
  Json atomics = Json::array(), universals = Json::array(), branches = Json::array();
  for (const auto& f : n.atomics) atomics.push_back(to_string(f));
  for (const auto& f : n.universals) universals.push_back(to_string(f));
  for (const auto& b : n.branches) {
    Json branch = Json::object();
    branch["formula"] = to_string(b.formula);
    if (!b.path) {
      branch["path"] = nullptr;
    } else {
      Json path = Json::array();
      const TlacePath& p = *b.path;
      for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        path.push_back(Json{{"node", node_json(p.nodes[i])}});
        if (i < p.actions.size()) path.push_back(Json{{"action", p.actions[i]}});
      }
      if (p.loop) path.push_back(Json{{"loop", *p.loop}});
      branch["path"] = std::move(path);
    }
    branches.push_back(std::move(branch));
  }
  out["atomics"] = std::move(atomics);
  out["universals"] = std::move(universals);
  out["branches"] = std::move(branches);
  return out;
}

inline const Json& json_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw TlaceFormatError("expected an object", where);
  auto it = j.find(key);
  if (it == j.end()) throw TlaceFormatError(std::string("missing '") + key + "'", where);
  return *it;
}

inline std::string json_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw TlaceFormatError("expected a string", where);
  return j.get<std::string>();
}

inline TlaceNode read_json_node(const Json& j, const std::string& where) {
  TlaceNode n;
  n.state = json_string(json_field(j, "state", where), where + "/state");
  const Json& t = json_field(j, "truncated", where);
  if (!t.is_boolean()) throw TlaceFormatError("expected a boolean", where + "/truncated");
  n.truncated = t.get<bool>();
  for (const char* key : {"atomics", "universals"}) {
    const bool atomics = std::string_view(key) == "atomics";
    const Json& arr = json_field(j, key, where);
    if (!arr.is_array()) throw TlaceFormatError("expected an array", where + "/" + key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string at = where + "/" + key + "[" + std::to_string(i) + "]";
      Formula f = parse_document_formula(json_string(arr[i], at), at);
      if (atomics && !f.is_literal()) throw TlaceFormatError("not a literal", at);
      insert_sorted(atomics ? n.atomics : n.universals, f);
    }
  }
  const Json& branches = json_field(j, "branches", where);
  if (!branches.is_array()) throw TlaceFormatError("expected an array", where + "/branches");
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const std::string at = where + "/branch[" + std::to_string(i) + "]";
    TlaceBranch b{parse_document_formula(
                      json_string(json_field(branches[i], "formula", at), at + "/formula"), at),
                  std::nullopt};
    const Json& path = json_field(branches[i], "path", at);
    if (!path.is_null()) {
      const std::string pat = at + "/path";
      if (!path.is_array()) throw TlaceFormatError("expected an array or null", pat);
      TlacePath p;
      bool after_node = false;
      for (const Json& item : path) {
        if (p.loop) throw TlaceFormatError("element after loop", pat);
        if (!item.is_object() || item.size() != 1)
          throw TlaceFormatError("expected a single-key object", pat);
        if (item.contains("node")) {
          if (after_node) throw TlaceFormatError("consecutive nodes", pat);
          p.nodes.push_back(read_json_node(
              item["node"], pat + "/node[" + std::to_string(p.nodes.size()) + "]"));
          after_node = true;
        } else if (item.contains("action")) {
          if (!after_node) throw TlaceFormatError("action must follow a node", pat);
          p.actions.push_back(json_string(item["action"], pat + "/action"));
          after_node = false;
        } else if (item.contains("loop")) {
          if (after_node || p.nodes.empty())
            throw TlaceFormatError("loop must follow an action", pat);
          if (!item["loop"].is_number_unsigned())
            throw TlaceFormatError("expected an index", pat + "/loop");
          p.loop = item["loop"].get<std::size_t>();
        } else {
          throw TlaceFormatError("unexpected key '" + item.begin().key() + "'", pat);
        }
      }
      if (p.nodes.empty()) throw TlaceFormatError("empty path", pat);
      if (!after_node && !p.loop) throw TlaceFormatError("path ends with an action", pat);
      b.path = std::move(p);
    }
    n.branches.push_back(std::move(b));
  }
  return n;
}

}  // namespace detail

inline std::string to_json(const TlaceDocument& doc) {
  Json out = Json::object();
  out["version"] = tlace_format_version;
  if (doc.formula) out["formula"] = to_string(*doc.formula);
  out["root"] = detail::node_json(doc.root);
  if (!doc.context.empty()) {
    Json states = Json::array(), actions = Json::array();
    for (const auto& st : doc.context.states) {
      Json values = Json::object();
      for (const auto& [name, value] : st.values) values[name] = value;
      states.push_back(Json{{"id", st.id}, {"values", std::move(values)}});
    }
    for (const auto& act : doc.context.actions)
      actions.push_back(Json{{"id", act.id}, {"labels", act.labels}});
    out["context"] = Json{{"states", std::move(states)}, {"actions", std::move(actions)}};
  }
  return out.dump(2) + "\n";
}

inline std::string to_json(const TlaceNode& n) { return to_json(TlaceDocument{std::nullopt, n, {}}); }

inline TlaceDocument tlace_from_json(std::string_view text) {
  using namespace detail;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw TlaceFormatError(e.what(), "");
  }
  const std::string where = "/";
  const Json& version = json_field(j, "version", where);
  if (!version.is_number_integer() || version.get<int>() != tlace_format_version)
    throw TlaceFormatError("unsupported version", "/version");
  TlaceDocument doc;
  if (auto it = j.find("formula"); it != j.end())
    doc.formula = parse_document_formula(json_string(*it, "/formula"), "/formula");
  doc.root = read_json_node(json_field(j, "root", where), "/root");
  if (auto it = j.find("context"); it != j.end()) {
    const Json& states = json_field(*it, "states", "/context");
    const Json& actions = json_field(*it, "actions", "/context");
    if (!states.is_array() || !actions.is_array())
      throw TlaceFormatError("expected arrays", "/context");
    for (const Json& st : states) {
      TlaceContext::State s{json_string(json_field(st, "id", "/context/states"), "/context/states"), {}};
      const Json& values = json_field(st, "values", "/context/states");
      if (!values.is_object()) throw TlaceFormatError("expected an object", "/context/states");
      for (const auto& [name, value] : values.items())
        s.values.emplace_back(name, json_string(value, "/context/states/" + name));
      doc.context.states.push_back(std::move(s));
    }
    for (const Json& act : actions) {
      TlaceContext::Action a{json_string(json_field(act, "id", "/context/actions"), "/context/actions"), {}};
      const Json& labels = json_field(act, "labels", "/context/actions");
      if (!labels.is_array()) throw TlaceFormatError("expected an array", "/context/actions");
      for (const Json& l : labels) a.labels.push_back(json_string(l, "/context/actions"));
      doc.context.actions.push_back(std::move(a));
    }
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "version" && key != "formula" && key != "root" && key != "context")
      throw TlaceFormatError("unexpected key '" + key + "'", "/");
  }
  return doc;
}

inline TlaceNode from_json(std::string_view text) { return tlace_from_json(text).root; }

/// Reads either format, deciding by the first non-blank character.
inline TlaceDocument read_tlace(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '<') return tlace_from_xml(text);
    if (c == '{') return tlace_from_json(text);
    break;
  }
  throw TlaceFormatError("neither an XML nor a JSON document", "");
}

// ---------------------------------------------------------------------------
// Text

namespace detail {

inline void write_text_node(const TlaceNode& n, std::ostream& os, const std::string& pad) {
  os << pad << "state " << n.state << (n.truncated ? "  [truncated]" : "") << "\n";
  auto list = [&](const char* label, const std::vector<Formula>& fs) {
    if (fs.empty()) return;
    os << pad << "  " << label << ":";
    for (std::size_t i = 0; i < fs.size(); ++i) os << (i ? ", " : " ") << to_string(fs[i]);
    os << "\n";
  };
  list("atomics", n.atomics);
  list("universals", n.universals);
  for (const auto& b : n.branches) {
    os << pad << "  branch " << to_string(b.formula);
    if (!b.path) {
      os << "  [not expanded]\n";
      continue;
    }
    os << "\n";
    const TlacePath& p = *b.path;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      os << pad << "    [" << i << "]\n";
      write_text_node(p.nodes[i], os, pad + "      ");
      if (i < p.actions.size()) {
        os << pad << "    --" << p.actions[i] << "-->";
        if (i + 1 == p.nodes.size() && p.loop) os << " loop to [" << *p.loop << "]";
        os << "\n";
      }
    }
  }
}

}  // namespace detail

inline std::string to_text(const TlaceDocument& doc) {
  std::ostringstream os;
  if (doc.formula) os << "witness for " << to_string(*doc.formula) << "\n";
  detail::write_text_node(doc.root, os, "");
  return os.str();
}

inline std::string to_text(const TlaceNode& n) { return to_text(TlaceDocument{std::nullopt, n, {}}); }

}  // namespace arctl
