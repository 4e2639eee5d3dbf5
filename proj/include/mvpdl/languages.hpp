#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvpdl/mvpa.hpp"

// The six two-stack languages used by the tiling reduction, as explicit
// deterministic 2-MVPAs plus set-builder membership oracles and enumerators.
//
// Over the fixed alphabet (calls {a1},{a2}; returns {b1},{b2}; internals
// {c,d}) with w0 = a1 b2, w1 = a2 b1, e0 = d, e1 = c:
//
//   plain(l):       w_l^i  e_l  w_{1-l}^j  e_{1-l}     for j != i+1
//   horizontal(l):  w_l^i  e_l  w_{1-l}^{i+l+1}
//   vertical(l):    w_l^i  e_l  w_{1-l}^{i-l+2}

namespace mvpdl {

enum class Family { Plain, Horizontal, Vertical };

struct ReductionLanguageId {
  Family family;
  int ell;  // 0 or 1

  bool operator==(const ReductionLanguageId&) const = default;
};

inline const CallReturnAlphabet& reduction_alphabet() {
  static const CallReturnAlphabet alpha({{"a1"}, {"a2"}}, {{"b1"}, {"b2"}}, {"c", "d"});
  return alpha;
}

/// The involutive substitution a1<->a2, b1<->b2, c<->d.
inline const std::map<Letter, Letter>& reduction_swap() {
  static const std::map<Letter, Letter> sigma = {
      {"a1", "a2"}, {"a2", "a1"}, {"b1", "b2"},
      {"b2", "b1"}, {"c", "d"},   {"d", "c"}};
  return sigma;
}

inline std::string language_name(ReductionLanguageId id) {
  std::string name = "L" + std::to_string(id.ell);
  if (id.family == Family::Horizontal) name += "_h";
  if (id.family == Family::Vertical) name += "_v";
  return name;
}

inline std::optional<ReductionLanguageId> parse_language_name(std::string_view name) {
  for (Family f : {Family::Plain, Family::Horizontal, Family::Vertical})
    for (int l : {0, 1})
      if (name == language_name({f, l})) return ReductionLanguageId{f, l};
  return std::nullopt;
}

inline const std::vector<ReductionLanguageId>& all_language_ids() {
  static const std::vector<ReductionLanguageId> ids = {
      {Family::Plain, 0},      {Family::Plain, 1},    {Family::Horizontal, 0},
      {Family::Horizontal, 1}, {Family::Vertical, 0}, {Family::Vertical, 1}};
  return ids;
}

namespace detail {

// The l = 0 machines, transcribed edge for edge from the defining diagrams.
// All push only the symbol x; bends with no drawn transition reject by
// stuckness.

inline Mvpa plain0_machine() {
  return Mvpa(reduction_alphabet(),
              {"q0", "q1", "q2", "q3", "q4", "q5", "q6", "p"}, {"q0"},
              {kBottom, "x"},
              {{"q0", "a1", "q1", "x"},
               {"q2", "a2", "q3", "x"},
               {"q4", "a2", "q6", "x"},
               {"q5", "a2", "q6", "x"}},
              {{"q1", "b2", kBottom, "q0"},
               {"q3", "b1", "x", "q2"},
               {"q3", "b1", kBottom, "q4"},
               {"q6", "b1", kBottom, "q5"}},
              {{"q0", "d", "q2"}, {"q2", "c", "p"}, {"q5", "c", "p"}},
              {"p"}, 2);
}

inline Mvpa horizontal0_machine() {
  return Mvpa(reduction_alphabet(), {"q0", "q1", "q2", "q3", "p"}, {"q0"},
              {kBottom, "x"},
              {{"q0", "a1", "q1", "x"}, {"q2", "a2", "q3", "x"}},
              {{"q1", "b2", kBottom, "q0"},
               {"q3", "b1", "x", "q2"},
               {"q3", "b1", kBottom, "p"}},
              {{"q0", "d", "q2"}}, {"p"}, 2);
}

inline Mvpa vertical0_machine() {
  return Mvpa(reduction_alphabet(), {"q0", "q1", "q2", "q3", "q4", "q5", "p"},
              {"q0"}, {kBottom, "x"},
              {{"q0", "a1", "q1", "x"},
               {"q2", "a2", "q3", "x"},
               {"q4", "a2", "q5", "x"}},
              {{"q1", "b2", kBottom, "q0"},
               {"q3", "b1", "x", "q2"},
               {"q3", "b1", kBottom, "q4"},
               {"q5", "b1", kBottom, "p"}},
              {{"q0", "d", "q2"}}, {"p"}, 2);
}

}  // namespace detail

/// Deterministic 2-MVPA for the given language. The l = 1 machines are the
/// letter swaps of their l = 0 partners; note that the swap exchanges the
/// horizontal and vertical families (sigma of the exponent-(i+1) language is
/// the exponent-(i+1) language with the roles of w0/w1 flipped, which is the
/// l = 1 vertical one, and vice versa).
inline Mvpa build_automaton(ReductionLanguageId id) {
  switch (id.family) {
    case Family::Plain:
      return id.ell == 0 ? detail::plain0_machine()
                         : rename_letters(detail::plain0_machine(), reduction_swap());
    case Family::Horizontal:
      return id.ell == 0 ? detail::horizontal0_machine()
                         : rename_letters(detail::vertical0_machine(), reduction_swap());
    case Family::Vertical:
      return id.ell == 0 ? detail::vertical0_machine()
                         : rename_letters(detail::horizontal0_machine(), reduction_swap());
  }
  throw Error("unknown language id");
}

namespace detail {

struct ShapeParts {
  int i = 0;      // repetitions of w_l before the first marker
  int j = 0;      // repetitions of w_{1-l} after it
  bool trailing_marker = false;
  bool ok = false;
};

/// Parses w_l^i e_l w_{1-l}^j [e_{1-l}] against the end of input; ok only
/// when the whole word matches and, if `expect_trailing`, the final marker
/// is present (and absent otherwise).
inline ShapeParts parse_shape(const Word& w, int ell, bool expect_trailing) {
  const Letter first_pair[2] = {ell == 0 ? "a1" : "a2", ell == 0 ? "b2" : "b1"};
  const Letter second_pair[2] = {ell == 0 ? "a2" : "a1", ell == 0 ? "b1" : "b2"};
  const Letter marker = ell == 0 ? "d" : "c";
  const Letter other_marker = ell == 0 ? "c" : "d";

  ShapeParts parts;
  size_t pos = 0;
  while (pos + 1 < w.size() && w[pos] == first_pair[0] && w[pos + 1] == first_pair[1]) {
    pos += 2;
    ++parts.i;
  }
  if (pos >= w.size() || w[pos] != marker) return parts;
  ++pos;
  while (pos + 1 < w.size() && w[pos] == second_pair[0] && w[pos + 1] == second_pair[1]) {
    pos += 2;
    ++parts.j;
  }
  if (expect_trailing) {
    if (pos >= w.size() || w[pos] != other_marker) return parts;
    ++pos;
    parts.trailing_marker = true;
  }
  parts.ok = pos == w.size();
  return parts;
}

}  // namespace detail

/// Membership decided directly from the set-builder definition; malformed
/// words are simply non-members.
inline bool oracle_member(ReductionLanguageId id, const Word& w) {
  switch (id.family) {
    case Family::Plain: {
      const auto p = detail::parse_shape(w, id.ell, true);
      return p.ok && p.j != p.i + 1;
    }
    case Family::Horizontal: {
      const auto p = detail::parse_shape(w, id.ell, false);
      return p.ok && p.j == p.i + id.ell + 1;
    }
    case Family::Vertical: {
      const auto p = detail::parse_shape(w, id.ell, false);
      return p.ok && p.j == p.i - id.ell + 2;
    }
  }
  return false;
}

namespace detail {

inline void append_pairs(Word& w, int ell, int count) {
  const Letter a = ell == 0 ? "a1" : "a2";
  const Letter b = ell == 0 ? "b2" : "b1";
  for (int t = 0; t < count; ++t) {
    w.push_back(a);
    w.push_back(b);
  }
}

inline Word shape_word(int ell, int i, int j, bool trailing) {
  Word w;
  append_pairs(w, ell, i);
  w.push_back(ell == 0 ? "d" : "c");
  append_pairs(w, 1 - ell, j);
  if (trailing) w.push_back(ell == 0 ? "c" : "d");
  return w;
}

}  // namespace detail

/// All members with exponents <= max_exponent, in lexicographic (i, j) order.
inline std::vector<Word> enumerate_members(ReductionLanguageId id, int max_exponent) {
  if (max_exponent < 0) throw Error("enumerate: max exponent must be non-negative");
  std::vector<Word> out;
  switch (id.family) {
    case Family::Plain:
      for (int i = 0; i <= max_exponent; ++i)
        for (int j = 0; j <= max_exponent; ++j)
          if (j != i + 1) out.push_back(detail::shape_word(id.ell, i, j, true));
      break;
    case Family::Horizontal:
      for (int i = 0; i <= max_exponent; ++i)
        out.push_back(detail::shape_word(id.ell, i, i + id.ell + 1, false));
      break;
    case Family::Vertical:
      for (int i = 0; i <= max_exponent; ++i)
        out.push_back(detail::shape_word(id.ell, i, i - id.ell + 2, false));
      break;
  }
  return out;
}

}  // namespace mvpdl
