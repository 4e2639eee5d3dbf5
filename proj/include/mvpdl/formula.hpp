#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mvpdl/error.hpp"
#include "mvpdl/mvpa.hpp"

// Formulas and programs of PDL over k-MVPAs. Kinds are kept minimal: the
// derived connectives (false, implication, plus) are builders that expand
// into the core forms, while conjunction and box are genuine nodes so that
// compiled formulas keep their shape.

namespace mvpdl {

class Formula;
class Program;
class Regex;

namespace ast {

enum class FormulaKind { True, Atom, Not, Or, And, Diamond, Box };
enum class RegexKind { Epsilon, Letter, Test, Concat, Union, Star };
enum class ProgramKind { Regex, Automaton };

struct FormulaNode;
struct RegexNode;
struct ProgramNode;

using FormulaPtr = std::shared_ptr<const FormulaNode>;
using RegexPtr = std::shared_ptr<const RegexNode>;
using ProgramPtr = std::shared_ptr<const ProgramNode>;

struct RegexNode {
  RegexKind kind;
  Letter letter;      // Letter
  FormulaPtr test;    // Test
  RegexPtr lhs, rhs;  // Concat/Union; Star uses lhs
};

struct ProgramNode {
  ProgramKind kind;
  RegexPtr re;                        // Regex
  std::shared_ptr<const Mvpa> machine;  // Automaton
  std::map<Letter, FormulaPtr> tests;   // internal letters bound to tests
  std::string source;                   // name/path tag for serialization
};

struct FormulaNode {
  FormulaKind kind;
  std::string atom;    // Atom
  FormulaPtr lhs, rhs; // Not uses lhs; Or/And both; Diamond/Box body in lhs
  ProgramPtr prog;     // Diamond/Box
};

inline bool equal(const FormulaNode& a, const FormulaNode& b);
inline bool equal(const RegexNode& a, const RegexNode& b);
inline bool equal(const ProgramNode& a, const ProgramNode& b);

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal(*a, *b);
}
inline bool equal(const RegexPtr& a, const RegexPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal(*a, *b);
}
inline bool equal(const ProgramPtr& a, const ProgramPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal(*a, *b);
}

inline bool equal(const RegexNode& a, const RegexNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case RegexKind::Epsilon: return true;
    case RegexKind::Letter: return a.letter == b.letter;
    case RegexKind::Test: return equal(a.test, b.test);
    case RegexKind::Star: return equal(a.lhs, b.lhs);
    case RegexKind::Concat:
    case RegexKind::Union: return equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
  }
  return false;
}

inline bool equal(const ProgramNode& a, const ProgramNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ProgramKind::Regex) return equal(a.re, b.re);
  if (!(*a.machine == *b.machine)) return false;
  if (a.tests.size() != b.tests.size()) return false;
  auto ia = a.tests.begin();
  auto ib = b.tests.begin();
  for (; ia != a.tests.end(); ++ia, ++ib)
    if (ia->first != ib->first || !equal(ia->second, ib->second)) return false;
  return true;
}

inline bool equal(const FormulaNode& a, const FormulaNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FormulaKind::True: return true;
    case FormulaKind::Atom: return a.atom == b.atom;
    case FormulaKind::Not: return equal(a.lhs, b.lhs);
    case FormulaKind::Or:
    case FormulaKind::And: return equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
    case FormulaKind::Diamond:
    case FormulaKind::Box: return equal(a.prog, b.prog) && equal(a.lhs, b.lhs);
  }
  return false;
}

}  // namespace ast

class Regex {
 public:
  using Kind = ast::RegexKind;

  static Regex epsilon() { return make({Kind::Epsilon, {}, nullptr, nullptr, nullptr}); }
  static Regex letter(Letter a) {
    return make({Kind::Letter, std::move(a), nullptr, nullptr, nullptr});
  }
  static Regex test(const Formula& f);
  static Regex concat(Regex a, Regex b) {
    return make({Kind::Concat, {}, nullptr, std::move(a.node_), std::move(b.node_)});
  }
  static Regex alt(Regex a, Regex b) {
    return make({Kind::Union, {}, nullptr, std::move(a.node_), std::move(b.node_)});
  }
  static Regex star(Regex a) {
    return make({Kind::Star, {}, nullptr, std::move(a.node_), nullptr});
  }
  /// a+ expands to a . a*
  static Regex plus(Regex a) { return concat(a, star(a)); }

  static Regex word(const Word& w) {
    if (w.empty()) return epsilon();
    Regex r = letter(w.front());
    for (size_t i = 1; i < w.size(); ++i) r = concat(std::move(r), letter(w[i]));
    return r;
  }

  static Regex repeat(const Regex& r, int n) {
    if (n <= 0) return epsilon();
    Regex out = r;
    for (int i = 1; i < n; ++i) out = concat(std::move(out), r);
    return out;
  }

  /// Union of single letters; the empty set of letters is not representable
  /// and is rejected.
  static Regex any_of(const std::vector<Letter>& letters) {
    if (letters.empty()) throw Error("regex: any_of needs at least one letter");
    Regex r = letter(letters.front());
    for (size_t i = 1; i < letters.size(); ++i) r = alt(std::move(r), letter(letters[i]));
    return r;
  }

  Kind kind() const { return node_->kind; }
  const Letter& letter_value() const { return node_->letter; }
  Formula test_formula() const;
  Regex lhs() const { return Regex(node_->lhs); }
  Regex rhs() const { return Regex(node_->rhs); }

  const ast::RegexPtr& node() const { return node_; }
  bool operator==(const Regex& other) const { return ast::equal(node_, other.node_); }

  explicit Regex(ast::RegexPtr node) : node_(std::move(node)) {}

 private:
  static Regex make(ast::RegexNode n) {
    return Regex(std::make_shared<const ast::RegexNode>(std::move(n)));
  }

  ast::RegexPtr node_;
};

class Program {
 public:
  using Kind = ast::ProgramKind;

  static Program regex(Regex r) {
    ast::ProgramNode n;
    n.kind = Kind::Regex;
    n.re = r.node();
    return Program(std::make_shared<const ast::ProgramNode>(std::move(n)));
  }

  static Program automaton(Mvpa machine, std::map<Letter, Formula> tests = {},
                           std::string source = {});

  Kind kind() const { return node_->kind; }
  Regex re() const { return Regex(node_->re); }
  const Mvpa& machine() const { return *node_->machine; }
  const std::map<Letter, ast::FormulaPtr>& test_bindings() const { return node_->tests; }
  const std::string& source() const { return node_->source; }

  const ast::ProgramPtr& node() const { return node_; }
  bool operator==(const Program& other) const { return ast::equal(node_, other.node_); }

  explicit Program(ast::ProgramPtr node) : node_(std::move(node)) {}

 private:
  ast::ProgramPtr node_;
};

class Formula {
 public:
  using Kind = ast::FormulaKind;

  static Formula truth() { return make({Kind::True, {}, nullptr, nullptr, nullptr}); }
  static Formula atom(std::string name) {
    if (name.empty()) throw Error("formula: empty proposition name");
    return make({Kind::Atom, std::move(name), nullptr, nullptr, nullptr});
  }
  static Formula negation(Formula f) {
    return make({Kind::Not, {}, std::move(f.node_), nullptr, nullptr});
  }
  static Formula disjunction(Formula a, Formula b) {
    return make({Kind::Or, {}, std::move(a.node_), std::move(b.node_), nullptr});
  }
  static Formula conjunction(Formula a, Formula b) {
    return make({Kind::And, {}, std::move(a.node_), std::move(b.node_), nullptr});
  }
  static Formula diamond(Program p, Formula body) {
    return make({Kind::Diamond, {}, std::move(body.node_), nullptr, p.node()});
  }
  static Formula box(Program p, Formula body) {
    return make({Kind::Box, {}, std::move(body.node_), nullptr, p.node()});
  }

  /// false = not true
  static Formula falsity() { return negation(truth()); }
  /// a -> b = (not a) or b
  static Formula implication(Formula a, Formula b) {
    return disjunction(negation(std::move(a)), std::move(b));
  }
  /// Folded disjunction; empty input yields false.
  static Formula disjunction_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return falsity();
    Formula out = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) out = disjunction(std::move(out), fs[i]);
    return out;
  }
  /// Folded conjunction; empty input yields true.
  static Formula conjunction_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return truth();
    Formula out = fs.front();
    for (size_t i = 1; i < fs.size(); ++i) out = conjunction(std::move(out), fs[i]);
    return out;
  }

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->atom; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  /// Operand of Not, or body of Diamond/Box.
  Formula body() const { return Formula(node_->lhs); }
  Program program() const { return Program(node_->prog); }

  /// Stable node identity, used as a memoization key.
  const void* key() const { return node_.get(); }

  const ast::FormulaPtr& node() const { return node_; }
  bool operator==(const Formula& other) const { return ast::equal(node_, other.node_); }

  explicit Formula(ast::FormulaPtr node) : node_(std::move(node)) {}

 private:
  static Formula make(ast::FormulaNode n) {
    return Formula(std::make_shared<const ast::FormulaNode>(std::move(n)));
  }

  ast::FormulaPtr node_;
};

inline Regex Regex::test(const Formula& f) {
  return make({Kind::Test, {}, f.node(), nullptr, nullptr});
}

inline Formula Regex::test_formula() const { return Formula(node_->test); }

inline Program Program::automaton(Mvpa machine, std::map<Letter, Formula> tests,
                                  std::string source) {
  ast::ProgramNode n;
  n.kind = Kind::Automaton;
  for (const auto& [letter, f] : tests) {
    const auto kind = machine.alphabet().try_classify(letter);
    if (!kind || kind->type != LetterType::Internal)
      throw Error("program: test letter '" + letter + "' must be an internal letter");
    n.tests.emplace(letter, f.node());
  }
  n.machine = std::make_shared<const Mvpa>(std::move(machine));
  n.source = std::move(source);
  return Program(std::make_shared<const ast::ProgramNode>(std::move(n)));
}

/// All test formulas occurring in a regex, in syntactic order.
inline void collect_tests(const Regex& r, std::vector<Formula>& out) {
  switch (r.kind()) {
    case Regex::Kind::Epsilon:
    case Regex::Kind::Letter: return;
    case Regex::Kind::Test: out.push_back(r.test_formula()); return;
    case Regex::Kind::Star: collect_tests(r.lhs(), out); return;
    case Regex::Kind::Concat:
    case Regex::Kind::Union:
      collect_tests(r.lhs(), out);
      collect_tests(r.rhs(), out);
      return;
  }
}

}  // namespace mvpdl
