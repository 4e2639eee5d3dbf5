#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mvpdl/error.hpp"

namespace mvpdl {

using Letter = std::string;
using Word = std::vector<Letter>;

enum class LetterType { Call, Return, Internal };

/// Kind of a letter under a call-return alphabet. `stack` is 1-based and
/// meaningful only for Call/Return; it is 0 for Internal.
struct LetterKind {
  LetterType type;
  int stack;

  bool operator==(const LetterKind&) const = default;
};

/// An n-stack call-return alphabet: per-stack call and return letter sets
/// plus a shared internal set. All 2n+1 component sets must be pairwise
/// disjoint, so every letter has exactly one kind.
class CallReturnAlphabet {
 public:
  CallReturnAlphabet() = default;

  CallReturnAlphabet(std::vector<std::vector<Letter>> calls,
                     std::vector<std::vector<Letter>> returns,
                     std::vector<Letter> internals)
      : calls_(std::move(calls)),
        returns_(std::move(returns)),
        internals_(std::move(internals)) {
    if (calls_.size() != returns_.size())
      throw Error("alphabet: calls and returns must declare the same number of stacks");
    const int n = static_cast<int>(calls_.size());
    for (int i = 0; i < n; ++i) {
      for (const Letter& a : calls_[i]) add(a, {LetterType::Call, i + 1});
      for (const Letter& a : returns_[i]) add(a, {LetterType::Return, i + 1});
    }
    for (const Letter& a : internals_) add(a, {LetterType::Internal, 0});
  }

  int stack_count() const { return static_cast<int>(calls_.size()); }
  int size() const { return static_cast<int>(letters_.size()); }

  /// Letters of stack i (1-based).
  const std::vector<Letter>& calls(int i) const { return calls_.at(i - 1); }
  const std::vector<Letter>& returns(int i) const { return returns_.at(i - 1); }
  const std::vector<Letter>& internals() const { return internals_; }

  /// All of Sigma in declaration order (calls, returns, then internals).
  const std::vector<Letter>& letters() const { return letters_; }

  bool contains(const Letter& a) const { return ids_.count(a) != 0; }

  /// Dense id of a letter, or -1 when the letter is unknown.
  int index_of(const Letter& a) const {
    auto it = ids_.find(a);
    return it == ids_.end() ? -1 : it->second;
  }

  LetterKind kind_of_id(int id) const { return kinds_[static_cast<size_t>(id)]; }

  /// Total kind lookup over Sigma; throws on unknown letters.
  LetterKind classify(const Letter& a) const {
    const int id = index_of(a);
    if (id < 0) throw Error("unknown letter '" + a + "': not in the declared alphabet");
    return kinds_[static_cast<size_t>(id)];
  }

  std::optional<LetterKind> try_classify(const Letter& a) const {
    const int id = index_of(a);
    if (id < 0) return std::nullopt;
    return kinds_[static_cast<size_t>(id)];
  }

  bool operator==(const CallReturnAlphabet& other) const {
    return calls_ == other.calls_ && returns_ == other.returns_ &&
           internals_ == other.internals_;
  }

 private:
  void add(const Letter& a, LetterKind kind) {
    if (a.empty()) throw Error("alphabet: letters must be non-empty");
    if (std::any_of(a.begin(), a.end(), [](unsigned char c) { return std::isspace(c); }))
      throw Error("alphabet: letter '" + a + "' contains whitespace");
    if (!ids_.emplace(a, static_cast<int>(letters_.size())).second)
      throw Error("alphabet: letter '" + a + "' occurs in two component sets");
    letters_.push_back(a);
    kinds_.push_back(kind);
  }

  std::vector<std::vector<Letter>> calls_;
  std::vector<std::vector<Letter>> returns_;
  std::vector<Letter> internals_;
  std::vector<Letter> letters_;
  std::vector<LetterKind> kinds_;
  std::unordered_map<Letter, int> ids_;
};

/// Total kind lookup over the alphabet's Sigma.
inline LetterKind classify_letter(const CallReturnAlphabet& alphabet, const Letter& a) {
  return alphabet.classify(a);
}

/// Splits a whitespace-separated word string into letters.
inline Word split_word(const std::string& text) {
  Word w;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) w.push_back(text.substr(i, j - i));
    i = j;
  }
  return w;
}

inline std::string join_word(const Word& w) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += w[i];
  }
  return out;
}

}  // namespace mvpdl
