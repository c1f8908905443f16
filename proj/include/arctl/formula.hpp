#pragma once

// ARCTL / CTLK formula trees, the concrete-syntax parser and printer, and
// reduction to negative normal form.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arctl {

enum class Dialect { arctl, ctlk };

/// Raised by the parser. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at " + std::to_string(line) + ":" +
                           std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// An operator the current context does not accept: a CTLK operator in the
/// ARCTL dialect, or group knowledge anywhere.
class UnsupportedOperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Action formulas

class ActionFormula {
 public:
  enum class Kind { truth, falsity, atom, negation, conjunction, disjunction };

  static ActionFormula truth() { return make(Kind::truth, {}, {}); }
  static ActionFormula falsity() { return make(Kind::falsity, {}, {}); }
  static ActionFormula atom(std::string name) {
    return make(Kind::atom, std::move(name), {});
  }
  static ActionFormula negation(ActionFormula f) {
    return make(Kind::negation, {}, {std::move(f)});
  }
  static ActionFormula conjunction(ActionFormula l, ActionFormula r) {
    return make(Kind::conjunction, {}, {std::move(l), std::move(r)});
  }
  static ActionFormula disjunction(ActionFormula l, ActionFormula r) {
    return make(Kind::disjunction, {}, {std::move(l), std::move(r)});
  }

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const ActionFormula& operand(std::size_t i = 0) const {
    return node_->operands.at(i);
  }
  bool is_binary() const {
    return kind() == Kind::conjunction || kind() == Kind::disjunction;
  }

  /// Identity of the shared node; used as a memoization key.
  const void* id() const { return node_.get(); }

  /// Atoms in first-occurrence order.
  std::vector<std::string> atoms() const {
    std::vector<std::string> out;
    collect_atoms(out);
    return out;
  }

  friend bool operator==(const ActionFormula& a, const ActionFormula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.name() != b.name()) return false;
    return a.node_->operands == b.node_->operands;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<ActionFormula> operands;
  };

  explicit ActionFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static ActionFormula make(Kind k, std::string name,
                            std::vector<ActionFormula> ops) {
    return ActionFormula(std::make_shared<const Node>(
        Node{k, std::move(name), std::move(ops)}));
  }

  void collect_atoms(std::vector<std::string>& out) const {
    if (kind() == Kind::atom) {
      if (std::find(out.begin(), out.end(), name()) == out.end())
        out.push_back(name());
      return;
    }
    for (const auto& op : node_->operands) op.collect_atoms(out);
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// State formulas

/// Path operators carried by the E / A quantifiers.
enum class PathOp { next, globally, finally, until, weak_until };

inline bool is_binary(PathOp op) {
  return op == PathOp::until || op == PathOp::weak_until;
}

class Formula {
 public:
  enum class Kind {
    truth,
    falsity,
    atom,
    negation,
    conjunction,
    disjunction,
    implication,
    equivalence,
    exists,   // E<alpha> pi, or CTLK E pi when the action is implicit
    forall,   // A<alpha> pi, or CTLK A pi when the action is implicit
    knows,    // CTLK K<agent> phi
    group,    // CTLK EK / DK / CK; parsed so that it can be rejected
  };

  static Formula truth() { return make({Kind::truth}); }
  static Formula falsity() { return make({Kind::falsity}); }
  static Formula atom(std::string name) {
    Node n{Kind::atom};
    n.name = std::move(name);
    return make(std::move(n));
  }
  static Formula negation(Formula f) {
    Node n{Kind::negation};
    n.operands = {std::move(f)};
    return make(std::move(n));
  }
  static Formula conjunction(Formula l, Formula r) {
    return binary(Kind::conjunction, std::move(l), std::move(r));
  }
  static Formula disjunction(Formula l, Formula r) {
    return binary(Kind::disjunction, std::move(l), std::move(r));
  }
  static Formula implication(Formula l, Formula r) {
    return binary(Kind::implication, std::move(l), std::move(r));
  }
  static Formula equivalence(Formula l, Formula r) {
    return binary(Kind::equivalence, std::move(l), std::move(r));
  }

  /// Quantified path formula. An empty action means the CTLK implicit
  /// temporal relation. For until / weak_until pass both operands.
  static Formula exists(std::optional<ActionFormula> action, PathOp op,
                        Formula lhs, std::optional<Formula> rhs = {}) {
    return quantified(Kind::exists, std::move(action), op, std::move(lhs),
                      std::move(rhs));
  }
  static Formula forall(std::optional<ActionFormula> action, PathOp op,
                        Formula lhs, std::optional<Formula> rhs = {}) {
    return quantified(Kind::forall, std::move(action), op, std::move(lhs),
                      std::move(rhs));
  }
  static Formula knows(std::string agent, Formula f) {
    Node n{Kind::knows};
    n.name = std::move(agent);
    n.operands = {std::move(f)};
    return make(std::move(n));
  }
  /// `op` is one of "EK", "DK", "CK".
  static Formula group(std::string op, std::vector<std::string> agents,
                       Formula f) {
    Node n{Kind::group};
    n.name = std::move(op);
    n.agents = std::move(agents);
    n.operands = {std::move(f)};
    return make(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  /// Atom name, agent name, or group operator keyword.
  const std::string& name() const { return node_->name; }
  const std::vector<std::string>& agents() const { return node_->agents; }
  const std::optional<ActionFormula>& action() const { return node_->action; }
  PathOp path_op() const { return node_->path; }
  std::size_t arity() const { return node_->operands.size(); }
  const Formula& operand(std::size_t i = 0) const {
    return node_->operands.at(i);
  }
  const Formula& lhs() const { return operand(0); }
  const Formula& rhs() const { return operand(1); }

  bool is_quantifier() const {
    return kind() == Kind::exists || kind() == Kind::forall;
  }
  bool is_binary() const {
    switch (kind()) {
      case Kind::conjunction:
      case Kind::disjunction:
      case Kind::implication:
      case Kind::equivalence:
        return true;
      default:
        return false;
    }
  }
  bool is_literal() const {
    return kind() == Kind::atom ||
           (kind() == Kind::negation && lhs().kind() == Kind::atom);
  }

  /// Identity of the shared node; used as a memoization key.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.name == y.name && x.agents == y.agents &&
           x.path == y.path && x.action == y.action && x.operands == y.operands;
  }

 private:
  struct Node {
    Kind kind;
    std::string name{};
    std::vector<std::string> agents{};
    std::optional<ActionFormula> action{};
    PathOp path = PathOp::next;
    std::vector<Formula> operands{};
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula make(Node n) {
    return Formula(std::make_shared<const Node>(std::move(n)));
  }
  static Formula binary(Kind k, Formula l, Formula r) {
    Node n{k};
    n.operands = {std::move(l), std::move(r)};
    return make(std::move(n));
  }
  static Formula quantified(Kind k, std::optional<ActionFormula> action,
                            PathOp op, Formula lhs, std::optional<Formula> rhs) {
    if (arctl::is_binary(op) != rhs.has_value())
      throw std::invalid_argument("path operator arity mismatch");
    Node n{k};
    n.action = std::move(action);
    n.path = op;
    n.operands.push_back(std::move(lhs));
    if (rhs) n.operands.push_back(std::move(*rhs));
    return make(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

using StateFormula = Formula;

/// Nesting depth of path quantifiers and knowledge operators.
inline std::size_t depth(const Formula& f) {
  std::size_t inner = 0;
  for (std::size_t i = 0; i < f.arity(); ++i)
    inner = std::max(inner, depth(f.operand(i)));
  switch (f.kind()) {
    case Formula::Kind::exists:
    case Formula::Kind::forall:
    case Formula::Kind::knows:
    case Formula::Kind::group:
      return inner + 1;
    default:
      return inner;
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string print_action(const ActionFormula& a);

inline std::string print_action_operand(const ActionFormula& a) {
  return a.is_binary() ? "(" + print_action(a) + ")" : print_action(a);
}

inline std::string print_action(const ActionFormula& a) {
  using K = ActionFormula::Kind;
  switch (a.kind()) {
    case K::truth: return "TRUE";
    case K::falsity: return "FALSE";
    case K::atom: return a.name();
    case K::negation: return "!" + print_action_operand(a.operand());
    case K::conjunction:
      return print_action_operand(a.operand(0)) + " & " +
             print_action_operand(a.operand(1));
    case K::disjunction:
      return print_action_operand(a.operand(0)) + " | " +
             print_action_operand(a.operand(1));
  }
  return {};
}

}  // namespace detail

inline std::string to_string(const ActionFormula& a) {
  return detail::print_action(a);
}

inline std::string to_string(const Formula& f);

namespace detail {

inline std::string print_operand(const Formula& f) {
  return f.is_binary() ? "(" + to_string(f) + ")" : to_string(f);
}

inline const char* path_letter(PathOp op) {
  switch (op) {
    case PathOp::next: return "X";
    case PathOp::globally: return "G";
    case PathOp::finally: return "F";
    case PathOp::until: return "U";
    case PathOp::weak_until: return "W";
  }
  return "?";
}

}  // namespace detail

/// Concrete syntax; re-parses to a structurally equal tree.
inline std::string to_string(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::truth: return "TRUE";
    case K::falsity: return "FALSE";
    case K::atom: return f.name();
    case K::negation: return "!" + detail::print_operand(f.lhs());
    case K::conjunction:
      return detail::print_operand(f.lhs()) + " & " +
             detail::print_operand(f.rhs());
    case K::disjunction:
      return detail::print_operand(f.lhs()) + " | " +
             detail::print_operand(f.rhs());
    case K::implication:
      return detail::print_operand(f.lhs()) + " -> " +
             detail::print_operand(f.rhs());
    case K::equivalence:
      return detail::print_operand(f.lhs()) + " <-> " +
             detail::print_operand(f.rhs());
    case K::exists:
    case K::forall: {
      std::string out = f.kind() == K::exists ? "E" : "A";
      if (f.action()) out += "<" + to_string(*f.action()) + ">";
      if (is_binary(f.path_op())) {
        return out + "[" + to_string(f.lhs()) + " " +
               detail::path_letter(f.path_op()) + " " + to_string(f.rhs()) +
               "]";
      }
      // CTLK spelling EX / AG ... has no space between quantifier and op.
      out += detail::path_letter(f.path_op());
      return out + " " + detail::print_operand(f.lhs());
    }
    case K::knows:
      return "K<" + f.name() + "> " + detail::print_operand(f.lhs());
    case K::group: {
      std::string out = f.name() + "<";
      for (std::size_t i = 0; i < f.agents().size(); ++i)
        out += (i ? "," : "") + f.agents()[i];
      return out + "> " + detail::print_operand(f.lhs());
    }
  }
  return {};
}

inline std::string pretty_print(const Formula& f) { return to_string(f); }

/// Total order on formulas via their printed form.
struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const {
    return to_string(a) < to_string(b);
  }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Token {
  enum class Type {
    ident, lparen, rparen, lbracket, rbracket, langle, rangle, bang, amp,
    bar, arrow, iff, comma, end
  };
  Type type;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '\'';
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      // comment to end of line
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    using T = Token::Type;
    Token tok{T::end, {}, line, col};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      tok.type = T::ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    auto single = [&](T t) {
      tok.type = t;
      tok.text = std::string(1, c);
      advance(1);
      out.push_back(tok);
    };
    switch (c) {
      case '(': single(T::lparen); continue;
      case ')': single(T::rparen); continue;
      case '[': single(T::lbracket); continue;
      case ']': single(T::rbracket); continue;
      case '>': single(T::rangle); continue;
      case '!': single(T::bang); continue;
      case '&': single(T::amp); continue;
      case '|': single(T::bar); continue;
      case ',': single(T::comma); continue;
      default: break;
    }
    if (text.substr(i, 3) == "<->") {
      tok.type = T::iff;
      tok.text = "<->";
      advance(3);
      out.push_back(tok);
      continue;
    }
    if (c == '<') {
      single(T::langle);
      continue;
    }
    if (text.substr(i, 2) == "->") {
      tok.type = T::arrow;
      tok.text = "->";
      advance(2);
      out.push_back(tok);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line,
                     col);
  }
  out.push_back({Token::Type::end, {}, line, col});
  return out;
}

inline bool is_keyword(const std::string& s) {
  static const char* const words[] = {"TRUE", "FALSE", "E",  "A",  "X",  "F",
                                      "G",    "U",     "W",  "K",  "EX", "EF",
                                      "EG",   "AX",    "AF", "AG", "EK", "DK",
                                      "CK"};
  return std::any_of(std::begin(words), std::end(words),
                     [&](const char* w) { return s == w; });
}

class Parser {
 public:
  Parser(std::string_view text, Dialect dialect)
      : tokens_(tokenize(text)), dialect_(dialect) {}

  Formula parse_all() {
    Formula f = parse_formula();
    expect(Token::Type::end, "end of input");
    return f;
  }

  ActionFormula parse_action_all() {
    ActionFormula a = parse_action();
    expect(Token::Type::end, "end of input");
    return a;
  }

 private:
  using T = Token::Type;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool at(T t) const { return peek().type == t; }
  bool at_word(std::string_view w) const {
    return at(T::ident) && peek().text == w;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }
  [[noreturn]] void unsupported(const std::string& op) const {
    throw UnsupportedOperatorError(
        "operator '" + op + "' is not available in the " +
        (dialect_ == Dialect::arctl ? std::string("ARCTL") : "CTLK") +
        " dialect at " + std::to_string(peek().line) + ":" +
        std::to_string(peek().column));
  }

  const Token& expect(T t, const char* what) {
    if (!at(t)) {
      fail(std::string("expected ") + what + ", found " +
           (at(T::end) ? std::string("end of input") : "'" + peek().text + "'"));
    }
    return take();
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("expected '" + std::string(w) + "'");
    take();
  }

  Formula parse_formula() { return parse_iff(); }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (at(T::iff)) {
      take();
      f = Formula::equivalence(std::move(f), parse_implies());
    }
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (at(T::arrow)) {
      take();
      return Formula::implication(std::move(f), parse_implies());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (at(T::bar)) {
      take();
      f = Formula::disjunction(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (at(T::amp)) {
      take();
      f = Formula::conjunction(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (at(T::bang)) {
      take();
      return Formula::negation(parse_unary());
    }
    if (at(T::lparen)) {
      take();
      Formula f = parse_formula();
      expect(T::rparen, "')'");
      return f;
    }
    if (!at(T::ident)) {
      if (at(T::end)) fail("missing operand");
      fail("unexpected '" + peek().text + "'");
    }
    const std::string word = peek().text;
    if (word == "TRUE") {
      take();
      return Formula::truth();
    }
    if (word == "FALSE") {
      take();
      return Formula::falsity();
    }
    if (word == "E" || word == "A") return parse_quantified();
    if (word == "EX" || word == "EF" || word == "EG" || word == "AX" ||
        word == "AF" || word == "AG") {
      if (dialect_ == Dialect::arctl) unsupported(word);
      take();
      const PathOp op = word[1] == 'X'   ? PathOp::next
                        : word[1] == 'F' ? PathOp::finally
                                         : PathOp::globally;
      Formula body = parse_unary();
      return word[0] == 'E' ? Formula::exists(std::nullopt, op, std::move(body))
                            : Formula::forall(std::nullopt, op, std::move(body));
    }
    if (word == "K") {
      if (dialect_ == Dialect::arctl) unsupported(word);
      take();
      expect(T::langle, "'<'");
      std::string agent = expect_name("agent name");
      expect(T::rangle, "'>'");
      return Formula::knows(std::move(agent), parse_unary());
    }
    if (word == "EK" || word == "DK" || word == "CK") {
      if (dialect_ == Dialect::arctl) unsupported(word);
      take();
      expect(T::langle, "'<'");
      std::vector<std::string> agents{expect_name("agent name")};
      while (at(T::comma)) {
        take();
        agents.push_back(expect_name("agent name"));
      }
      expect(T::rangle, "'>'");
      return Formula::group(word, std::move(agents), parse_unary());
    }
    if (is_keyword(word)) fail("unexpected keyword '" + word + "'");
    take();
    return Formula::atom(word);
  }

  std::string expect_name(const char* what) {
    if (!at(T::ident) || is_keyword(peek().text))
      fail(std::string("expected ") + what);
    return take().text;
  }

  Formula parse_quantified() {
    const bool existential = take().text == "E";
    std::optional<ActionFormula> action;
    if (at(T::langle)) {
      take();
      action = parse_action();
      expect(T::rangle, "'>'");
    } else if (dialect_ == Dialect::arctl) {
      unsupported(existential ? "E" : "A");
    }
    PathOp op;
    Formula lhs = Formula::truth();
    std::optional<Formula> rhs;
    if (at(T::lbracket)) {
      take();
      lhs = parse_formula();
      if (at_word("U")) {
        op = PathOp::until;
      } else if (at_word("W")) {
        op = PathOp::weak_until;
      } else {
        fail("expected 'U' or 'W'");
      }
      take();
      rhs = parse_formula();
      expect(T::rbracket, "']'");
    } else {
      if (at_word("X")) {
        op = PathOp::next;
      } else if (at_word("G")) {
        op = PathOp::globally;
      } else if (at_word("F")) {
        op = PathOp::finally;
      } else {
        fail("expected path operator X, F, G or '['");
      }
      take();
      lhs = parse_unary();
    }
    return existential ? Formula::exists(std::move(action), op, std::move(lhs),
                                         std::move(rhs))
                       : Formula::forall(std::move(action), op, std::move(lhs),
                                         std::move(rhs));
  }

  ActionFormula parse_action() {
    ActionFormula a = parse_action_and();
    while (at(T::bar)) {
      take();
      a = ActionFormula::disjunction(std::move(a), parse_action_and());
    }
    return a;
  }

  ActionFormula parse_action_and() {
    ActionFormula a = parse_action_unary();
    while (at(T::amp)) {
      take();
      a = ActionFormula::conjunction(std::move(a), parse_action_unary());
    }
    return a;
  }

  ActionFormula parse_action_unary() {
    if (at(T::bang)) {
      take();
      return ActionFormula::negation(parse_action_unary());
    }
    if (at(T::lparen)) {
      take();
      ActionFormula a = parse_action();
      expect(T::rparen, "')'");
      return a;
    }
    if (at_word("TRUE")) {
      take();
      return ActionFormula::truth();
    }
    if (at_word("FALSE")) {
      take();
      return ActionFormula::falsity();
    }
    return ActionFormula::atom(expect_name("action atom"));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Dialect dialect_;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text,
                             Dialect dialect = Dialect::arctl) {
  return detail::Parser(text, dialect).parse_all();
}

inline ActionFormula parse_action_formula(std::string_view text) {
  return detail::Parser(text, Dialect::arctl).parse_action_all();
}

// ---------------------------------------------------------------------------
// Negative normal form
//
// Negation is pushed onto atoms, -> and <-> are expanded, and existential
// quantifiers are reduced to E<a>X, E<a>G and E<a>[_ U _]. Universal
// quantifiers stay as A<a>pi with normalized operands.

namespace detail {

inline Formula nnf(const Formula& f);
inline Formula nnf_negated(const Formula& f);

[[noreturn]] inline void reject_ctlk(const Formula& f) {
  throw UnsupportedOperatorError("'" + to_string(f) +
                                 "' is not an ARCTL formula");
}

inline Formula nnf(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::truth:
    case K::falsity:
    case K::atom:
      return f;
    case K::negation:
      return nnf_negated(f.lhs());
    case K::conjunction:
      return Formula::conjunction(nnf(f.lhs()), nnf(f.rhs()));
    case K::disjunction:
      return Formula::disjunction(nnf(f.lhs()), nnf(f.rhs()));
    case K::implication:
      return Formula::disjunction(nnf_negated(f.lhs()), nnf(f.rhs()));
    case K::equivalence:
      return Formula::disjunction(
          Formula::conjunction(nnf(f.lhs()), nnf(f.rhs())),
          Formula::conjunction(nnf_negated(f.lhs()), nnf_negated(f.rhs())));
    case K::exists: {
      if (!f.action()) reject_ctlk(f);
      const auto& a = f.action();
      switch (f.path_op()) {
        case PathOp::next:
          return Formula::exists(a, PathOp::next, nnf(f.lhs()));
        case PathOp::globally:
          return Formula::exists(a, PathOp::globally, nnf(f.lhs()));
        case PathOp::finally:
          return Formula::exists(a, PathOp::until, Formula::truth(),
                                 nnf(f.lhs()));
        case PathOp::until:
          return Formula::exists(a, PathOp::until, nnf(f.lhs()), nnf(f.rhs()));
        case PathOp::weak_until: {
          Formula l = nnf(f.lhs());
          return Formula::disjunction(
              Formula::exists(a, PathOp::until, l, nnf(f.rhs())),
              Formula::exists(a, PathOp::globally, l));
        }
      }
      break;
    }
    case K::forall: {
      if (!f.action()) reject_ctlk(f);
      if (is_binary(f.path_op()))
        return Formula::forall(f.action(), f.path_op(), nnf(f.lhs()),
                               nnf(f.rhs()));
      return Formula::forall(f.action(), f.path_op(), nnf(f.lhs()));
    }
    case K::knows:
    case K::group:
      reject_ctlk(f);
  }
  return f;
}

inline Formula nnf_negated(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::truth:
      return Formula::falsity();
    case K::falsity:
      return Formula::truth();
    case K::atom:
      return Formula::negation(f);
    case K::negation:
      return nnf(f.lhs());
    case K::conjunction:
      return Formula::disjunction(nnf_negated(f.lhs()), nnf_negated(f.rhs()));
    case K::disjunction:
      return Formula::conjunction(nnf_negated(f.lhs()), nnf_negated(f.rhs()));
    case K::implication:
      return Formula::conjunction(nnf(f.lhs()), nnf_negated(f.rhs()));
    case K::equivalence:
      return Formula::disjunction(
          Formula::conjunction(nnf(f.lhs()), nnf_negated(f.rhs())),
          Formula::conjunction(nnf_negated(f.lhs()), nnf(f.rhs())));
    case K::exists: {
      if (!f.action()) reject_ctlk(f);
      const auto& a = f.action();
      switch (f.path_op()) {
        case PathOp::next:
          return Formula::forall(a, PathOp::next, nnf_negated(f.lhs()));
        case PathOp::globally:
          return Formula::forall(a, PathOp::finally, nnf_negated(f.lhs()));
        case PathOp::finally:
          return Formula::forall(a, PathOp::globally, nnf_negated(f.lhs()));
        case PathOp::until: {
          // !(l U r) == !r W (!l & !r)
          Formula nr = nnf_negated(f.rhs());
          return Formula::forall(
              a, PathOp::weak_until, nr,
              Formula::conjunction(nnf_negated(f.lhs()), nr));
        }
        case PathOp::weak_until: {
          // !(l W r) == !r U (!l & !r)
          Formula nr = nnf_negated(f.rhs());
          return Formula::forall(
              a, PathOp::until, nr,
              Formula::conjunction(nnf_negated(f.lhs()), nr));
        }
      }
      break;
    }
    case K::forall: {
      if (!f.action()) reject_ctlk(f);
      const auto& a = f.action();
      switch (f.path_op()) {
        case PathOp::next:
          return Formula::exists(a, PathOp::next, nnf_negated(f.lhs()));
        case PathOp::globally:
          return Formula::exists(a, PathOp::until, Formula::truth(),
                                 nnf_negated(f.lhs()));
        case PathOp::finally:
          return Formula::exists(a, PathOp::globally, nnf_negated(f.lhs()));
        case PathOp::until: {
          Formula nr = nnf_negated(f.rhs());
          return Formula::disjunction(
              Formula::exists(a, PathOp::until, nr,
                              Formula::conjunction(nnf_negated(f.lhs()), nr)),
              Formula::exists(a, PathOp::globally, nr));
        }
        case PathOp::weak_until: {
          Formula nr = nnf_negated(f.rhs());
          return Formula::exists(
              a, PathOp::until, nr,
              Formula::conjunction(nnf_negated(f.lhs()), nr));
        }
      }
      break;
    }
    case K::knows:
    case K::group:
      reject_ctlk(f);
  }
  return f;
}

}  // namespace detail

/// Throws UnsupportedOperatorError on CTLK-only constructs; reduce those
/// first.
inline Formula to_nnf(const Formula& f) { return detail::nnf(f); }

/// Equivalent to to_nnf(!f).
inline Formula negate_nnf(const Formula& f) { return detail::nnf_negated(f); }

inline bool is_nnf(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::truth:
    case K::falsity:
    case K::atom:
      return true;
    case K::negation:
      return f.lhs().kind() == K::atom;
    case K::conjunction:
    case K::disjunction:
      return is_nnf(f.lhs()) && is_nnf(f.rhs());
    case K::exists:
      if (!f.action()) return false;
      if (f.path_op() == PathOp::until)
        return is_nnf(f.lhs()) && is_nnf(f.rhs());
      if (f.path_op() == PathOp::next || f.path_op() == PathOp::globally)
        return is_nnf(f.lhs());
      return false;
    case K::forall:
      if (!f.action()) return false;
      for (std::size_t i = 0; i < f.arity(); ++i)
        if (!is_nnf(f.operand(i))) return false;
      return true;
    default:
      return false;
  }
}

}  // namespace arctl
