#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mvpdl/formula.hpp"
#include "mvpdl/kripke.hpp"
#include "mvpdl/regex_nfa.hpp"

// Formula and program evaluation over finite Kripke structures. Boolean
// connectives and regex programs are evaluated exactly; automaton (MVPA)
// programs are evaluated by bounded witness search, so any result they touch
// is tagged as bounded rather than exact.

namespace mvpdl {

/// Maximal witness word length for automaton programs. Without a bound,
/// evaluating an automaton program is an error.
struct BoundPolicy {
  std::optional<int> bound;

  static BoundPolicy exact_only() { return {}; }
  static BoundPolicy bounded(int b) { return {b}; }
};

enum class Verdict { Holds, Fails, BoundedHolds, BoundedFails };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::BoundedHolds: return "BoundedHolds";
    case Verdict::BoundedFails: return "BoundedFails";
  }
  return "?";
}

struct FormulaEval {
  std::vector<bool> mask;  // one flag per world index
  bool exact = true;

  std::vector<int> worlds() const {
    std::vector<int> out;
    for (size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) out.push_back(static_cast<int>(i));
    return out;
  }
};

struct RelationEval {
  WorldRelation relation;
  bool exact = true;
};

using ProgramToken = std::variant<Letter, Formula>;
using ProgramWord = std::vector<ProgramToken>;

struct Witness {
  ProgramWord word;
  std::vector<std::string> worlds;  // |word|+1 ids, test tokens keep the world
};

class Evaluator {
 public:
  Evaluator(const KripkeStructure& k, BoundPolicy policy) : k_(k), policy_(policy) {}

  const KripkeStructure& structure() const { return k_; }

  FormulaEval formula(const Formula& f) {
    auto it = memo_.find(f.key());
    if (it != memo_.end()) return it->second;
    FormulaEval out = compute(f);
    memo_.emplace(f.key(), out);
    return out;
  }

  RelationEval program(const Program& p) {
    if (p.kind() == Program::Kind::Regex) return regex_relation(p.re());
    return automaton_relation(p);
  }

  RelationEval word(const ProgramWord& w) {
    RelationEval out{WorldRelation::identity(k_.size()), true};
    for (const ProgramToken& tok : w) {
      if (const Letter* a = std::get_if<Letter>(&tok)) {
        out.relation = out.relation.compose(WorldRelation::letter_relation(k_, *a));
      } else {
        const FormulaEval fe = formula(std::get<Formula>(tok));
        out.relation = out.relation.compose(WorldRelation::diagonal(fe.worlds()));
        out.exact = out.exact && fe.exact;
      }
    }
    return out;
  }

  Verdict satisfies(int world, const Formula& f) {
    const FormulaEval fe = formula(f);
    const bool holds = fe.mask[static_cast<size_t>(world)];
    if (fe.exact) return holds ? Verdict::Holds : Verdict::Fails;
    return holds ? Verdict::BoundedHolds : Verdict::BoundedFails;
  }

  /// Shortest witness for <program> body at `from`: a word of L(program)
  /// relating `from` to a world satisfying `body`.
  std::optional<Witness> diamond_witness(int from, const Program& p, const Formula& body) {
    const FormulaEval bodyEval = formula(body);
    if (p.kind() == Program::Kind::Regex)
      return regex_witness(from, p.re(), bodyEval.mask);
    return automaton_witness(from, p, bodyEval.mask);
  }

 private:
  FormulaEval compute(const Formula& f) {
    const size_t n = static_cast<size_t>(k_.size());
    FormulaEval out;
    out.mask.assign(n, false);
    switch (f.kind()) {
      case Formula::Kind::True:
        out.mask.assign(n, true);
        break;
      case Formula::Kind::Atom:
        for (size_t i = 0; i < n; ++i)
          out.mask[i] = k_.has_prop(static_cast<int>(i), f.atom_name());
        break;
      case Formula::Kind::Not: {
        const FormulaEval a = formula(f.body());
        out.exact = a.exact;
        for (size_t i = 0; i < n; ++i) out.mask[i] = !a.mask[i];
        break;
      }
      case Formula::Kind::Or: {
        const FormulaEval a = formula(f.lhs());
        const FormulaEval b = formula(f.rhs());
        out.exact = a.exact && b.exact;
        for (size_t i = 0; i < n; ++i) out.mask[i] = a.mask[i] || b.mask[i];
        break;
      }
      case Formula::Kind::And: {
        const FormulaEval a = formula(f.lhs());
        const FormulaEval b = formula(f.rhs());
        out.exact = a.exact && b.exact;
        for (size_t i = 0; i < n; ++i) out.mask[i] = a.mask[i] && b.mask[i];
        break;
      }
      case Formula::Kind::Diamond: {
        const RelationEval rel = program(f.program());
        const FormulaEval body = formula(f.body());
        out.exact = rel.exact && body.exact;
        for (const auto& [x, y] : rel.relation.pairs())
          if (body.mask[static_cast<size_t>(y)]) out.mask[static_cast<size_t>(x)] = true;
        break;
      }
      case Formula::Kind::Box: {
        // [p]f = not <p> not f
        const RelationEval rel = program(f.program());
        const FormulaEval body = formula(f.body());
        out.exact = rel.exact && body.exact;
        out.mask.assign(n, true);
        for (const auto& [x, y] : rel.relation.pairs())
          if (!body.mask[static_cast<size_t>(y)]) out.mask[static_cast<size_t>(x)] = false;
        break;
      }
    }
    return out;
  }

  // -- regex programs: exact product reachability ---------------------------

  struct NfaContext {
    RegexNfa nfa;
    std::vector<int> k_letters;            // NFA letter id -> K letter id
    std::vector<std::vector<bool>> tests;  // NFA test id -> world mask
    bool exact = true;
  };

  NfaContext nfa_context(const Regex& r) {
    NfaContext ctx;
    ctx.nfa = RegexNfa::build(r);
    ctx.k_letters.reserve(ctx.nfa.letters.size());
    for (const Letter& a : ctx.nfa.letters) {
      const int id = k_.letter_index(a);
      if (id < 0) throw Error("program letter '" + a + "' is not declared in the structure");
      ctx.k_letters.push_back(id);
    }
    for (const Formula& t : ctx.nfa.tests) {
      const FormulaEval fe = formula(t);
      ctx.exact = ctx.exact && fe.exact;
      ctx.tests.push_back(fe.mask);
    }
    return ctx;
  }

  RelationEval regex_relation(const Regex& r) {
    const NfaContext ctx = nfa_context(r);
    const int nWorlds = k_.size();
    const int nStates = ctx.nfa.state_count;
    std::vector<std::pair<int, int>> pairs;
    std::vector<bool> visited;
    std::vector<int> queue;
    for (int x = 0; x < nWorlds; ++x) {
      visited.assign(static_cast<size_t>(nWorlds) * static_cast<size_t>(nStates), false);
      queue.clear();
      auto push = [&](int w, int q) {
        const size_t idx = static_cast<size_t>(w) * static_cast<size_t>(nStates) +
                           static_cast<size_t>(q);
        if (!visited[idx]) {
          visited[idx] = true;
          queue.push_back(static_cast<int>(idx));
        }
      };
      push(x, ctx.nfa.start);
      for (size_t head = 0; head < queue.size(); ++head) {
        const int w = queue[head] / nStates;
        const int q = queue[head] % nStates;
        for (int ei : ctx.nfa.adjacency[static_cast<size_t>(q)]) {
          const RegexNfa::Edge& e = ctx.nfa.edges[static_cast<size_t>(ei)];
          switch (e.kind) {
            case RegexNfa::LabelKind::Epsilon:
              push(w, e.to);
              break;
            case RegexNfa::LabelKind::Letter:
              for (int y : k_.successors(ctx.k_letters[static_cast<size_t>(e.letter)], w))
                push(y, e.to);
              break;
            case RegexNfa::LabelKind::Test:
              if (ctx.tests[static_cast<size_t>(e.test)][static_cast<size_t>(w)])
                push(w, e.to);
              break;
          }
        }
      }
      for (int y = 0; y < nWorlds; ++y)
        if (visited[static_cast<size_t>(y) * static_cast<size_t>(nStates) +
                    static_cast<size_t>(ctx.nfa.accept)])
          pairs.emplace_back(x, y);
    }
    return {WorldRelation::from_pairs(std::move(pairs)), ctx.exact};
  }

  // -- automaton programs: bounded joint search ------------------------------

  struct JointState {
    int world;
    int state;
    std::vector<std::vector<int>> stacks;
    int phase_count;
    int committed;  // return stack of the current phase, 0 = none

    auto operator<=>(const JointState&) const = default;
  };

  struct AutomatonContext {
    const Mvpa* m = nullptr;
    std::vector<int> k_letters;             // machine letter id -> K letter id or -1
    std::vector<int> test_ids;              // machine letter id -> test index or -1
    std::vector<std::vector<bool>> tests;   // test masks
    bool exact = true;
  };

  AutomatonContext automaton_context(const Program& p) {
    AutomatonContext ctx;
    ctx.m = &p.machine();
    const CallReturnAlphabet& alpha = ctx.m->alphabet();
    ctx.k_letters.assign(static_cast<size_t>(alpha.size()), -1);
    ctx.test_ids.assign(static_cast<size_t>(alpha.size()), -1);
    for (int id = 0; id < alpha.size(); ++id) {
      const Letter& a = alpha.letters()[static_cast<size_t>(id)];
      auto bound = p.test_bindings().find(a);
      if (bound != p.test_bindings().end()) {
        const FormulaEval fe = formula(Formula(bound->second));
        ctx.exact = ctx.exact && fe.exact;
        ctx.tests.push_back(fe.mask);
        ctx.test_ids[static_cast<size_t>(id)] = static_cast<int>(ctx.tests.size() - 1);
        continue;
      }
      const int kid = k_.letter_index(a);
      if (kid < 0)
        throw Error("program letter '" + a + "' is not declared in the structure");
      ctx.k_letters[static_cast<size_t>(id)] = kid;
    }
    return ctx;
  }

  int require_bound() const {
    if (!policy_.bound)
      throw Error("automaton program evaluated without a witness length bound");
    return *policy_.bound;
  }

  template <typename OnStep>
  void joint_steps(const AutomatonContext& ctx, const JointState& s, OnStep&& on_step) {
    const Mvpa& m = *ctx.m;
    const CallReturnAlphabet& alpha = m.alphabet();
    for (int a = 0; a < alpha.size(); ++a) {
      const LetterKind kind = alpha.kind_of_id(a);
      // phase bookkeeping mirrors the greedy decomposition
      int count = s.phase_count == 0 ? 1 : s.phase_count;
      int committed = s.committed;
      if (kind.type == LetterType::Return) {
        if (committed == 0) {
          committed = kind.stack;
        } else if (committed != kind.stack) {
          ++count;
          committed = kind.stack;
        }
        if (count > m.phase_bound()) continue;
      }

      const int test = ctx.test_ids[static_cast<size_t>(a)];
      auto emit_machine_moves = [&](int next_world) {
        switch (kind.type) {
          case LetterType::Call:
            for (const auto& [to, push] : m.call_steps(s.state, a)) {
              JointState n = s;
              n.world = next_world;
              n.state = to;
              n.stacks[static_cast<size_t>(kind.stack - 1)].push_back(push);
              n.phase_count = count;
              n.committed = committed;
              on_step(std::move(n), a);
            }
            break;
          case LetterType::Return: {
            const int top = s.stacks[static_cast<size_t>(kind.stack - 1)].back();
            for (const auto& [pop, to] : m.ret_steps(s.state, a)) {
              if (pop != top) continue;
              JointState n = s;
              n.world = next_world;
              n.state = to;
              if (top != m.bottom_id())
                n.stacks[static_cast<size_t>(kind.stack - 1)].pop_back();
              n.phase_count = count;
              n.committed = committed;
              on_step(std::move(n), a);
            }
            break;
          }
          case LetterType::Internal:
            for (int to : m.int_steps(s.state, a)) {
              JointState n = s;
              n.world = next_world;
              n.state = to;
              n.phase_count = count;
              n.committed = committed;
              on_step(std::move(n), a);
            }
            break;
        }
      };

      if (test >= 0) {
        // test letters hold the world in place and require the test
        if (ctx.tests[static_cast<size_t>(test)][static_cast<size_t>(s.world)])
          emit_machine_moves(s.world);
      } else {
        for (int y : k_.successors(ctx.k_letters[static_cast<size_t>(a)], s.world))
          emit_machine_moves(y);
      }
    }
  }

  RelationEval automaton_relation(const Program& p) {
    const int bound = require_bound();
    const AutomatonContext ctx = automaton_context(p);
    const Mvpa& m = *ctx.m;
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < k_.size(); ++x) {
      std::set<JointState> visited;
      std::deque<std::pair<JointState, int>> queue;  // state, consumed length
      for (int q : m.initial_ids()) {
        JointState s{x, q, {}, 0, 0};
        s.stacks.assign(static_cast<size_t>(m.alphabet().stack_count()),
                        std::vector<int>{m.bottom_id()});
        if (visited.insert(s).second) queue.emplace_back(std::move(s), 0);
      }
      std::set<int> reached;
      while (!queue.empty()) {
        auto [s, len] = std::move(queue.front());
        queue.pop_front();
        if (m.is_final_id(s.state)) reached.insert(s.world);
        if (len == bound) continue;
        joint_steps(ctx, s, [&](JointState n, int) {
          if (visited.insert(n).second) queue.emplace_back(std::move(n), len + 1);
        });
      }
      for (int y : reached) pairs.emplace_back(x, y);
    }
    return {WorldRelation::from_pairs(std::move(pairs)), false};
  }

  // -- witness reconstruction -----------------------------------------------

  std::optional<Witness> regex_witness(int from, const Regex& r,
                                       const std::vector<bool>& body_mask) {
    const NfaContext ctx = nfa_context(r);
    const int nStates = ctx.nfa.state_count;
    const size_t total = static_cast<size_t>(k_.size()) * static_cast<size_t>(nStates);
    // 0-1 BFS: epsilon edges are free, letters and tests cost one token
    std::vector<int> dist(total, -1);
    std::vector<std::pair<int, int>> parent(total, {-1, -1});  // prev idx, edge idx
    std::deque<size_t> queue;
    auto idx = [&](int w, int q) {
      return static_cast<size_t>(w) * static_cast<size_t>(nStates) + static_cast<size_t>(q);
    };
    const size_t start = idx(from, ctx.nfa.start);
    dist[start] = 0;
    queue.push_back(start);
    std::optional<size_t> goal;
    while (!queue.empty()) {
      const size_t cur = queue.front();
      queue.pop_front();
      const int w = static_cast<int>(cur) / nStates;
      const int q = static_cast<int>(cur) % nStates;
      if (q == ctx.nfa.accept && body_mask[static_cast<size_t>(w)]) {
        goal = cur;
        break;
      }
      for (int ei : ctx.nfa.adjacency[static_cast<size_t>(q)]) {
        const RegexNfa::Edge& e = ctx.nfa.edges[static_cast<size_t>(ei)];
        auto relax = [&](size_t next, bool costly) {
          const int nd = dist[cur] + (costly ? 1 : 0);
          if (dist[next] >= 0 && dist[next] <= nd) return;
          dist[next] = nd;
          parent[next] = {static_cast<int>(cur), ei};
          if (costly)
            queue.push_back(next);
          else
            queue.push_front(next);
        };
        switch (e.kind) {
          case RegexNfa::LabelKind::Epsilon:
            relax(idx(w, e.to), false);
            break;
          case RegexNfa::LabelKind::Letter:
            for (int y : k_.successors(ctx.k_letters[static_cast<size_t>(e.letter)], w))
              relax(idx(y, e.to), true);
            break;
          case RegexNfa::LabelKind::Test:
            if (ctx.tests[static_cast<size_t>(e.test)][static_cast<size_t>(w)])
              relax(idx(w, e.to), true);
            break;
        }
      }
    }
    if (!goal) return std::nullopt;
    Witness wit;
    std::vector<std::pair<int, int>> chain;  // (idx, incoming edge)
    for (size_t cur = *goal; parent[cur].first >= 0;
         cur = static_cast<size_t>(parent[cur].first))
      chain.emplace_back(static_cast<int>(cur), parent[cur].second);
    wit.worlds.push_back(k_.world_id(from));
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const RegexNfa::Edge& e = ctx.nfa.edges[static_cast<size_t>(it->second)];
      const int w = it->first / nStates;
      if (e.kind == RegexNfa::LabelKind::Letter) {
        wit.word.emplace_back(ctx.nfa.letters[static_cast<size_t>(e.letter)]);
        wit.worlds.push_back(k_.world_id(w));
      } else if (e.kind == RegexNfa::LabelKind::Test) {
        wit.word.emplace_back(ctx.nfa.tests[static_cast<size_t>(e.test)]);
        wit.worlds.push_back(k_.world_id(w));
      }
    }
    return wit;
  }

  std::optional<Witness> automaton_witness(int from, const Program& p,
                                           const std::vector<bool>& body_mask) {
    const int bound = require_bound();
    const AutomatonContext ctx = automaton_context(p);
    const Mvpa& m = *ctx.m;
    std::map<JointState, std::pair<const JointState*, int>> visited;  // parent, letter id
    std::deque<std::pair<const JointState*, int>> queue;
    const JointState* goal = nullptr;
    for (int q : m.initial_ids()) {
      JointState s{from, q, {}, 0, 0};
      s.stacks.assign(static_cast<size_t>(m.alphabet().stack_count()),
                      std::vector<int>{m.bottom_id()});
      auto [it, fresh] = visited.emplace(std::move(s), std::make_pair(nullptr, -1));
      if (fresh) queue.emplace_back(&it->first, 0);
    }
    while (!queue.empty() && !goal) {
      auto [s, len] = queue.front();
      queue.pop_front();
      if (m.is_final_id(s->state) && body_mask[static_cast<size_t>(s->world)]) {
        goal = s;
        break;
      }
      if (len == bound) continue;
      joint_steps(ctx, *s, [&](JointState n, int letter) {
        auto [it, fresh] = visited.emplace(std::move(n), std::make_pair(s, letter));
        if (fresh) queue.emplace_back(&it->first, len + 1);
      });
    }
    if (!goal) return std::nullopt;
    Witness wit;
    std::vector<std::pair<int, int>> rev;  // (letter id, world)
    for (const JointState* cur = goal;;) {
      const auto& [par, letter] = visited.at(*cur);
      if (!par) break;
      rev.emplace_back(letter, cur->world);
      cur = par;
    }
    wit.worlds.push_back(k_.world_id(from));
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
      const Letter& a = m.alphabet().letters()[static_cast<size_t>(it->first)];
      auto bound_test = p.test_bindings().find(a);
      if (bound_test != p.test_bindings().end())
        wit.word.emplace_back(Formula(bound_test->second));
      else
        wit.word.emplace_back(a);
      wit.worlds.push_back(k_.world_id(it->second));
    }
    return wit;
  }

  const KripkeStructure& k_;
  BoundPolicy policy_;
  std::unordered_map<const void*, FormulaEval> memo_;
};

inline FormulaEval eval_formula(const KripkeStructure& k, const Formula& f,
                                BoundPolicy policy = BoundPolicy::exact_only()) {
  return Evaluator(k, policy).formula(f);
}

inline RelationEval eval_program(const KripkeStructure& k, const Program& p,
                                 BoundPolicy policy = BoundPolicy::exact_only()) {
  return Evaluator(k, policy).program(p);
}

inline RelationEval eval_word(const KripkeStructure& k, const ProgramWord& w,
                              BoundPolicy policy = BoundPolicy::exact_only()) {
  return Evaluator(k, policy).word(w);
}

/// Letter-only convenience form; always exact.
inline WorldRelation eval_word(const KripkeStructure& k, const Word& w) {
  ProgramWord pw;
  pw.reserve(w.size());
  for (const Letter& a : w) pw.emplace_back(a);
  return Evaluator(k, BoundPolicy::exact_only()).word(pw).relation;
}

inline Verdict satisfies(const KripkeStructure& k, const std::string& world,
                         const Formula& f, BoundPolicy policy = BoundPolicy::exact_only()) {
  return Evaluator(k, policy).satisfies(k.world_index(world), f);
}

inline std::optional<Witness> find_diamond_witness(const KripkeStructure& k,
                                                   const std::string& world,
                                                   const Program& p, const Formula& body,
                                                   BoundPolicy policy) {
  return Evaluator(k, policy).diamond_witness(k.world_index(world), p, body);
}

}  // namespace mvpdl
