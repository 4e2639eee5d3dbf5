#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mvpdl/alphabet.hpp"
#include "mvpdl/error.hpp"

namespace mvpdl {

/// Reserved stack-bottom symbol. It must be a member of every stack
/// alphabet and must not occur in the input alphabet.
inline constexpr const char* kBottom = "_bot";

struct CallRule {
  std::string from;
  Letter letter;
  std::string to;
  std::string push;

  bool operator==(const CallRule&) const = default;
};

struct RetRule {
  std::string from;
  Letter letter;
  std::string pop;
  std::string to;

  bool operator==(const RetRule&) const = default;
};

struct IntRule {
  std::string from;
  Letter letter;
  std::string to;

  bool operator==(const IntRule&) const = default;
};

/// A control state plus one stack word per stack. Stack words are written
/// top-first and end in exactly one bottom symbol.
struct Configuration {
  std::string state;
  std::vector<std::vector<std::string>> stacks;

  auto operator<=>(const Configuration&) const = default;
};

struct Run {
  Word input;
  std::vector<Configuration> configurations;  // length |input|+1
  bool accepted = false;
};

/// Multi-stack visibly pushdown automaton with a phase bound k. Immutable
/// after construction; the constructor validates the invariants and builds
/// dense transition tables used by the run machinery.
class Mvpa {
 public:
  Mvpa(CallReturnAlphabet alphabet,
       std::vector<std::string> states,
       std::vector<std::string> initial,
       std::vector<std::string> stack_alphabet,
       std::vector<CallRule> call_rules,
       std::vector<RetRule> ret_rules,
       std::vector<IntRule> int_rules,
       std::vector<std::string> finals,
       int phase_bound)
      : alphabet_(std::move(alphabet)),
        states_(std::move(states)),
        initial_(std::move(initial)),
        stack_alphabet_(std::move(stack_alphabet)),
        call_rules_(std::move(call_rules)),
        ret_rules_(std::move(ret_rules)),
        int_rules_(std::move(int_rules)),
        finals_(std::move(finals)),
        phase_bound_(phase_bound) {
    validate_and_index();
  }

  const CallReturnAlphabet& alphabet() const { return alphabet_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& initial() const { return initial_; }
  const std::vector<std::string>& stack_alphabet() const { return stack_alphabet_; }
  const std::vector<CallRule>& call_rules() const { return call_rules_; }
  const std::vector<RetRule>& ret_rules() const { return ret_rules_; }
  const std::vector<IntRule>& int_rules() const { return int_rules_; }
  const std::vector<std::string>& finals() const { return finals_; }
  int phase_bound() const { return phase_bound_; }

  bool operator==(const Mvpa& other) const {
    return alphabet_ == other.alphabet_ && states_ == other.states_ &&
           initial_ == other.initial_ && stack_alphabet_ == other.stack_alphabet_ &&
           call_rules_ == other.call_rules_ && ret_rules_ == other.ret_rules_ &&
           int_rules_ == other.int_rules_ && finals_ == other.finals_ &&
           phase_bound_ == other.phase_bound_;
  }

  // Indexed view. States, letters and stack symbols carry dense ids in
  // declaration order; the bottom symbol's id is bottom_id().

  int state_count() const { return static_cast<int>(states_.size()); }
  int state_index(const std::string& q) const {
    auto it = state_ids_.find(q);
    if (it == state_ids_.end()) throw Error("unknown state '" + q + "'");
    return it->second;
  }
  const std::string& state_name(int id) const { return states_[static_cast<size_t>(id)]; }

  int gamma_count() const { return static_cast<int>(stack_alphabet_.size()); }
  int gamma_index(const std::string& g) const {
    auto it = gamma_ids_.find(g);
    if (it == gamma_ids_.end()) throw Error("unknown stack symbol '" + g + "'");
    return it->second;
  }
  const std::string& gamma_name(int id) const { return stack_alphabet_[static_cast<size_t>(id)]; }
  int bottom_id() const { return bottom_id_; }

  const std::vector<int>& initial_ids() const { return initial_ids_; }
  bool is_final_id(int q) const { return final_mask_[static_cast<size_t>(q)]; }

  /// Call successors of (state, letter): pairs (target state, pushed symbol).
  const std::vector<std::pair<int, int>>& call_steps(int q, int a) const {
    return call_tab_[flat(q, a)];
  }
  /// Return successors of (state, letter): pairs (popped symbol, target state).
  const std::vector<std::pair<int, int>>& ret_steps(int q, int a) const {
    return ret_tab_[flat(q, a)];
  }
  /// Internal successors of (state, letter).
  const std::vector<int>& int_steps(int q, int a) const { return int_tab_[flat(q, a)]; }

  bool deterministic() const { return deterministic_; }

 private:
  size_t flat(int q, int a) const {
    return static_cast<size_t>(q) * static_cast<size_t>(alphabet_.size()) +
           static_cast<size_t>(a);
  }

  void validate_and_index() {
    if (phase_bound_ < 1) throw Error("phase bound k must be positive");
    for (size_t i = 0; i < states_.size(); ++i) {
      if (states_[i].empty()) throw Error("states: empty state name");
      if (!state_ids_.emplace(states_[i], static_cast<int>(i)).second)
        throw Error("states: duplicate state '" + states_[i] + "'");
    }
    bottom_id_ = -1;
    for (size_t i = 0; i < stack_alphabet_.size(); ++i) {
      const std::string& g = stack_alphabet_[i];
      if (!gamma_ids_.emplace(g, static_cast<int>(i)).second)
        throw Error("stack_alphabet: duplicate symbol '" + g + "'");
      if (g == kBottom) bottom_id_ = static_cast<int>(i);
    }
    if (bottom_id_ < 0)
      throw Error(std::string("stack_alphabet: must contain the bottom symbol '") + kBottom + "'");
    if (alphabet_.contains(kBottom))
      throw Error("alphabet: bottom symbol must not be an input letter");

    for (const std::string& q : initial_) state_index(q);
    for (const std::string& q : finals_) state_index(q);
    for (const std::string& q : initial_) initial_ids_.push_back(state_index(q));
    final_mask_.assign(states_.size(), false);
    for (const std::string& q : finals_) final_mask_[static_cast<size_t>(state_index(q))] = true;

    const size_t slots = states_.size() * static_cast<size_t>(alphabet_.size());
    call_tab_.assign(slots, {});
    ret_tab_.assign(slots, {});
    int_tab_.assign(slots, {});

    for (const CallRule& r : call_rules_) {
      const LetterKind k = alphabet_.classify(r.letter);
      if (k.type != LetterType::Call)
        throw Error("transitions.call: letter '" + r.letter + "' is not a call letter");
      const int g = gamma_index(r.push);
      if (g == bottom_id_)
        throw Error("transitions.call: pushing the bottom symbol is not allowed");
      call_tab_[flat(state_index(r.from), alphabet_.index_of(r.letter))]
          .emplace_back(state_index(r.to), g);
    }
    for (const RetRule& r : ret_rules_) {
      const LetterKind k = alphabet_.classify(r.letter);
      if (k.type != LetterType::Return)
        throw Error("transitions.ret: letter '" + r.letter + "' is not a return letter");
      ret_tab_[flat(state_index(r.from), alphabet_.index_of(r.letter))]
          .emplace_back(gamma_index(r.pop), state_index(r.to));
    }
    for (const IntRule& r : int_rules_) {
      const LetterKind k = alphabet_.classify(r.letter);
      if (k.type != LetterType::Internal)
        throw Error("transitions.int: letter '" + r.letter + "' is not an internal letter");
      int_tab_[flat(state_index(r.from), alphabet_.index_of(r.letter))]
          .push_back(state_index(r.to));
    }

    deterministic_ = compute_deterministic();
  }

  bool compute_deterministic() const {
    if (initial_.size() != 1) return false;
    for (size_t slot = 0; slot < call_tab_.size(); ++slot) {
      if (call_tab_[slot].size() > 1 || int_tab_[slot].size() > 1) return false;
      // at most one return transition per popped symbol
      std::set<int> pops;
      for (const auto& [pop, to] : ret_tab_[slot])
        if (!pops.insert(pop).second) return false;
    }
    return true;
  }

  CallReturnAlphabet alphabet_;
  std::vector<std::string> states_;
  std::vector<std::string> initial_;
  std::vector<std::string> stack_alphabet_;
  std::vector<CallRule> call_rules_;
  std::vector<RetRule> ret_rules_;
  std::vector<IntRule> int_rules_;
  std::vector<std::string> finals_;
  int phase_bound_ = 1;

  std::unordered_map<std::string, int> state_ids_;
  std::unordered_map<std::string, int> gamma_ids_;
  int bottom_id_ = -1;
  std::vector<int> initial_ids_;
  std::vector<bool> final_mask_;
  std::vector<std::vector<std::pair<int, int>>> call_tab_;
  std::vector<std::vector<std::pair<int, int>>> ret_tab_;
  std::vector<std::vector<int>> int_tab_;
  bool deterministic_ = false;
};

inline bool is_deterministic(const Mvpa& m) { return m.deterministic(); }

namespace detail {

/// Internal configuration over dense ids; stacks keep the top at the back.
struct IConfig {
  int state;
  std::vector<std::vector<int>> stacks;

  auto operator<=>(const IConfig&) const = default;
};

inline IConfig initial_iconfig(const Mvpa& m, int state) {
  IConfig c;
  c.state = state;
  c.stacks.assign(static_cast<size_t>(m.alphabet().stack_count()),
                  std::vector<int>{m.bottom_id()});
  return c;
}

/// One-move successors for an already classified letter id.
template <typename Emit>
inline void istep(const Mvpa& m, const IConfig& c, int letter_id, Emit&& emit) {
  const LetterKind kind = m.alphabet().kind_of_id(letter_id);
  switch (kind.type) {
    case LetterType::Call:
      for (const auto& [to, push] : m.call_steps(c.state, letter_id)) {
        IConfig next = c;
        next.state = to;
        next.stacks[static_cast<size_t>(kind.stack - 1)].push_back(push);
        emit(std::move(next));
      }
      break;
    case LetterType::Return: {
      const auto& st = c.stacks[static_cast<size_t>(kind.stack - 1)];
      const int top = st.back();
      for (const auto& [pop, to] : m.ret_steps(c.state, letter_id)) {
        if (pop != top) continue;
        IConfig next = c;
        next.state = to;
        if (top != m.bottom_id())
          next.stacks[static_cast<size_t>(kind.stack - 1)].pop_back();
        emit(std::move(next));
      }
      break;
    }
    case LetterType::Internal:
      for (int to : m.int_steps(c.state, letter_id)) {
        IConfig next = c;
        next.state = to;
        emit(std::move(next));
      }
      break;
  }
}

inline Configuration to_public(const Mvpa& m, const IConfig& c) {
  Configuration out;
  out.state = m.state_name(c.state);
  out.stacks.reserve(c.stacks.size());
  for (const auto& st : c.stacks) {
    std::vector<std::string> word;
    word.reserve(st.size());
    for (auto it = st.rbegin(); it != st.rend(); ++it) word.push_back(m.gamma_name(*it));
    out.stacks.push_back(std::move(word));
  }
  return out;
}

inline IConfig from_public(const Mvpa& m, const Configuration& c) {
  IConfig out;
  out.state = m.state_index(c.state);
  if (static_cast<int>(c.stacks.size()) != m.alphabet().stack_count())
    throw Error("configuration: wrong number of stacks");
  for (const auto& word : c.stacks) {
    std::vector<int> st;
    st.reserve(word.size());
    for (auto it = word.rbegin(); it != word.rend(); ++it) st.push_back(m.gamma_index(*it));
    if (st.empty() || st.front() != m.bottom_id())
      throw Error("configuration: stack word must end in the bottom symbol");
    for (size_t i = 1; i < st.size(); ++i)
      if (st[i] == m.bottom_id())
        throw Error("configuration: bottom symbol occurs above the bottom");
    out.stacks.push_back(std::move(st));
  }
  return out;
}

inline std::vector<int> intern_word(const CallReturnAlphabet& alphabet, const Word& w) {
  std::vector<int> ids;
  ids.reserve(w.size());
  for (const Letter& a : w) {
    const int id = alphabet.index_of(a);
    if (id < 0) throw Error("word letter '" + a + "' is not in the automaton's alphabet");
    ids.push_back(id);
  }
  return ids;
}

/// Greedy left-to-right phase decomposition over letter ids.
inline int min_phases_ids(const CallReturnAlphabet& alphabet, const std::vector<int>& ids) {
  if (ids.empty()) return 0;
  int phases = 1;
  int committed = 0;  // return stack of the current phase; 0 = none yet
  for (int id : ids) {
    const LetterKind k = alphabet.kind_of_id(id);
    if (k.type != LetterType::Return) continue;
    if (committed == 0) {
      committed = k.stack;
    } else if (committed != k.stack) {
      ++phases;
      committed = k.stack;
    }
  }
  return phases;
}

}  // namespace detail

/// All configurations reachable from `c` in one move on `a`. The empty
/// result signals a stuck configuration.
inline std::vector<Configuration> step(const Mvpa& m, const Configuration& c, const Letter& a) {
  const int id = m.alphabet().index_of(a);
  if (id < 0) throw Error("letter '" + a + "' is not in the automaton's alphabet");
  const detail::IConfig ic = detail::from_public(m, c);
  std::vector<Configuration> out;
  detail::istep(m, ic, id, [&](detail::IConfig next) {
    out.push_back(detail::to_public(m, next));
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Minimum number of phases whose concatenation is w. A phase may contain
/// returns of at most one stack; calls and internals never break a phase.
inline int min_phases(const CallReturnAlphabet& alphabet, const Word& w) {
  return detail::min_phases_ids(alphabet, detail::intern_word(alphabet, w));
}

/// w is in L(M): w is a k-phase and some run from an initial all-bottom
/// configuration reads w completely and ends in a final state.
inline bool membership(const Mvpa& m, const Word& w) {
  const std::vector<int> ids = detail::intern_word(m.alphabet(), w);
  if (detail::min_phases_ids(m.alphabet(), ids) > m.phase_bound()) return false;

  if (m.deterministic()) {
    if (m.initial_ids().empty()) return false;
    detail::IConfig c = detail::initial_iconfig(m, m.initial_ids().front());
    for (int id : ids) {
      std::optional<detail::IConfig> next;
      detail::istep(m, c, id, [&](detail::IConfig n) {
        if (!next) next = std::move(n);
      });
      if (!next) return false;
      c = std::move(*next);
    }
    return m.is_final_id(c.state);
  }

  std::set<detail::IConfig> frontier;
  for (int q : m.initial_ids()) frontier.insert(detail::initial_iconfig(m, q));
  for (int id : ids) {
    std::set<detail::IConfig> next;
    for (const detail::IConfig& c : frontier)
      detail::istep(m, c, id, [&](detail::IConfig n) { next.insert(std::move(n)); });
    frontier = std::move(next);
    if (frontier.empty()) return false;
  }
  for (const detail::IConfig& c : frontier)
    if (m.is_final_id(c.state)) return true;
  return false;
}

/// An accepting run on w, if one exists (phase bound included).
inline std::optional<Run> accepting_run(const Mvpa& m, const Word& w) {
  const std::vector<int> ids = detail::intern_word(m.alphabet(), w);
  if (detail::min_phases_ids(m.alphabet(), ids) > m.phase_bound()) return std::nullopt;

  // breadth-first layers with parent links for run reconstruction
  std::vector<std::vector<detail::IConfig>> layers(1);
  std::vector<std::vector<int>> parents(1);
  for (int q : m.initial_ids()) {
    layers[0].push_back(detail::initial_iconfig(m, q));
    parents[0].push_back(-1);
  }
  std::sort(layers[0].begin(), layers[0].end());
  layers[0].erase(std::unique(layers[0].begin(), layers[0].end()), layers[0].end());
  parents[0].assign(layers[0].size(), -1);

  for (size_t pos = 0; pos < ids.size(); ++pos) {
    std::map<detail::IConfig, int> next;  // config -> parent index in previous layer
    for (size_t pi = 0; pi < layers[pos].size(); ++pi)
      detail::istep(m, layers[pos][pi], ids[pos], [&](detail::IConfig n) {
        next.emplace(std::move(n), static_cast<int>(pi));
      });
    if (next.empty()) return std::nullopt;
    layers.emplace_back();
    parents.emplace_back();
    for (auto& [cfg, parent] : next) {
      layers.back().push_back(cfg);
      parents.back().push_back(parent);
    }
  }

  int pick = -1;
  for (size_t i = 0; i < layers.back().size(); ++i)
    if (m.is_final_id(layers.back()[i].state)) {
      pick = static_cast<int>(i);
      break;
    }
  if (pick < 0) return std::nullopt;

  Run run;
  run.input = w;
  run.accepted = true;
  std::vector<Configuration> rev;
  for (size_t pos = layers.size(); pos-- > 0;) {
    rev.push_back(detail::to_public(m, layers[pos][static_cast<size_t>(pick)]));
    pick = parents[pos][static_cast<size_t>(pick)];
  }
  run.configurations.assign(rev.rbegin(), rev.rend());
  return run;
}

/// Structure-preserving letter substitution. `sigma` must be a bijection on
/// Sigma mapping every letter to one of the same sort (calls may move between
/// stacks); a sort mismatch is an error. Language-level renaming
/// L(rename) = sigma(L) additionally needs sigma to permute stacks
/// consistently, as the reduction's swap does.
inline Mvpa rename_letters(const Mvpa& m, const std::map<Letter, Letter>& sigma) {
  const CallReturnAlphabet& alph = m.alphabet();
  std::set<Letter> targets;
  for (const Letter& a : alph.letters()) {
    auto it = sigma.find(a);
    if (it == sigma.end()) throw Error("rename: substitution undefined on letter '" + a + "'");
    if (!alph.contains(it->second))
      throw Error("rename: target letter '" + it->second + "' is not in the alphabet");
    if (!targets.insert(it->second).second)
      throw Error("rename: substitution is not injective on the alphabet");
    const LetterType from = alph.classify(a).type;
    const LetterType to = alph.classify(it->second).type;
    if (from != to)
      throw Error("rename: letter '" + a + "' changes sort under the substitution");
  }

  std::vector<CallRule> calls = m.call_rules();
  std::vector<RetRule> rets = m.ret_rules();
  std::vector<IntRule> ints = m.int_rules();
  for (auto& r : calls) r.letter = sigma.at(r.letter);
  for (auto& r : rets) r.letter = sigma.at(r.letter);
  for (auto& r : ints) r.letter = sigma.at(r.letter);
  return Mvpa(alph, m.states(), m.initial(), m.stack_alphabet(), std::move(calls),
              std::move(rets), std::move(ints), m.finals(), m.phase_bound());
}

/// Image of a word under a letter substitution.
inline Word apply_substitution(const std::map<Letter, Letter>& sigma, const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const Letter& a : w) {
    auto it = sigma.find(a);
    out.push_back(it == sigma.end() ? a : it->second);
  }
  return out;
}

}  // namespace mvpdl
