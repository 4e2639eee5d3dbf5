#pragma once

#include <vector>

#include "mvpdl/formula.hpp"

namespace mvpdl {

/// Nondeterministic finite automaton with epsilon moves over letters and
/// test formulas, built inductively from a regex. Single start and accept
/// state.
struct RegexNfa {
  enum class LabelKind { Epsilon, Letter, Test };

  struct Edge {
    int from;
    LabelKind kind;
    int letter = -1;  // index into `letters`
    int test = -1;    // index into `tests`
    int to;
  };

  int start = 0;
  int accept = 0;
  int state_count = 0;
  std::vector<Edge> edges;
  std::vector<Letter> letters;   // distinct letters, in first-occurrence order
  std::vector<Formula> tests;    // test formulas, one per Test node

  std::vector<std::vector<int>> adjacency;  // state -> edge indices

  static RegexNfa build(const Regex& r) {
    RegexNfa nfa;
    auto frag = nfa.emit(r);
    nfa.start = frag.first;
    nfa.accept = frag.second;
    nfa.adjacency.assign(static_cast<size_t>(nfa.state_count), {});
    for (size_t i = 0; i < nfa.edges.size(); ++i)
      nfa.adjacency[static_cast<size_t>(nfa.edges[i].from)].push_back(static_cast<int>(i));
    return nfa;
  }

 private:
  int fresh() { return state_count++; }

  int letter_id(const Letter& a) {
    for (size_t i = 0; i < letters.size(); ++i)
      if (letters[i] == a) return static_cast<int>(i);
    letters.push_back(a);
    return static_cast<int>(letters.size() - 1);
  }

  std::pair<int, int> emit(const Regex& r) {
    switch (r.kind()) {
      case Regex::Kind::Epsilon: {
        const int s = fresh(), t = fresh();
        edges.push_back({s, LabelKind::Epsilon, -1, -1, t});
        return {s, t};
      }
      case Regex::Kind::Letter: {
        const int s = fresh(), t = fresh();
        edges.push_back({s, LabelKind::Letter, letter_id(r.letter_value()), -1, t});
        return {s, t};
      }
      case Regex::Kind::Test: {
        const int s = fresh(), t = fresh();
        tests.push_back(r.test_formula());
        edges.push_back({s, LabelKind::Test, -1, static_cast<int>(tests.size() - 1), t});
        return {s, t};
      }
      case Regex::Kind::Concat: {
        const auto a = emit(r.lhs());
        const auto b = emit(r.rhs());
        edges.push_back({a.second, LabelKind::Epsilon, -1, -1, b.first});
        return {a.first, b.second};
      }
      case Regex::Kind::Union: {
        const auto a = emit(r.lhs());
        const auto b = emit(r.rhs());
        const int s = fresh(), t = fresh();
        edges.push_back({s, LabelKind::Epsilon, -1, -1, a.first});
        edges.push_back({s, LabelKind::Epsilon, -1, -1, b.first});
        edges.push_back({a.second, LabelKind::Epsilon, -1, -1, t});
        edges.push_back({b.second, LabelKind::Epsilon, -1, -1, t});
        return {s, t};
      }
      case Regex::Kind::Star: {
        const auto a = emit(r.lhs());
        const int s = fresh(), t = fresh();
        edges.push_back({s, LabelKind::Epsilon, -1, -1, a.first});
        edges.push_back({s, LabelKind::Epsilon, -1, -1, t});
        edges.push_back({a.second, LabelKind::Epsilon, -1, -1, a.first});
        edges.push_back({a.second, LabelKind::Epsilon, -1, -1, t});
        return {s, t};
      }
    }
    throw Error("regex: unknown node kind");
  }
};

}  // namespace mvpdl
