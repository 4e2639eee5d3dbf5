#pragma once

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvpdl/alphabet.hpp"
#include "mvpdl/error.hpp"

namespace mvpdl {

struct World {
  std::string id;
  std::vector<std::string> props;

  bool operator==(const World&) const = default;
};

struct KripkeEdge {
  std::string from;
  Letter letter;
  std::string to;

  bool operator==(const KripkeEdge&) const = default;
};

/// Finite Kripke structure: worlds with a propositional valuation and one
/// edge relation per declared letter. The letter set is declared explicitly,
/// so a declared-but-unused letter denotes the empty relation.
class KripkeStructure {
 public:
  KripkeStructure() = default;

  KripkeStructure(std::vector<World> worlds, std::vector<Letter> letters,
                  std::vector<KripkeEdge> edges)
      : worlds_(std::move(worlds)), letters_(std::move(letters)), edges_(std::move(edges)) {
    for (size_t i = 0; i < worlds_.size(); ++i) {
      if (worlds_[i].id.empty()) throw Error("worlds: empty world id");
      if (!world_ids_.emplace(worlds_[i].id, static_cast<int>(i)).second)
        throw Error("worlds: duplicate world id '" + worlds_[i].id + "'");
    }
    for (size_t i = 0; i < letters_.size(); ++i)
      if (!letter_ids_.emplace(letters_[i], static_cast<int>(i)).second)
        throw Error("letters: duplicate letter '" + letters_[i] + "'");
    out_.assign(letters_.size(), std::vector<std::vector<int>>(worlds_.size()));
    for (const KripkeEdge& e : edges_) {
      const int a = letter_index(e.letter);
      if (a < 0) throw Error("edges: letter '" + e.letter + "' is not declared");
      out_[static_cast<size_t>(a)][static_cast<size_t>(world_index(e.from))]
          .push_back(world_index(e.to));
    }
    for (auto& per_letter : out_)
      for (auto& succ : per_letter) {
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
      }
  }

  int size() const { return static_cast<int>(worlds_.size()); }
  const std::vector<World>& worlds() const { return worlds_; }
  const std::vector<Letter>& letters() const { return letters_; }
  const std::vector<KripkeEdge>& edges() const { return edges_; }

  int world_index(const std::string& id) const {
    auto it = world_ids_.find(id);
    if (it == world_ids_.end()) throw Error("unknown world '" + id + "'");
    return it->second;
  }
  const std::string& world_id(int i) const { return worlds_[static_cast<size_t>(i)].id; }

  bool has_world(const std::string& id) const { return world_ids_.count(id) != 0; }

  int letter_index(const Letter& a) const {
    auto it = letter_ids_.find(a);
    return it == letter_ids_.end() ? -1 : it->second;
  }

  bool has_prop(int world, const std::string& p) const {
    const auto& ps = worlds_[static_cast<size_t>(world)].props;
    return std::find(ps.begin(), ps.end(), p) != ps.end();
  }

  /// Successors of `world` under letter id `a`.
  const std::vector<int>& successors(int a, int world) const {
    return out_[static_cast<size_t>(a)][static_cast<size_t>(world)];
  }

  bool operator==(const KripkeStructure& other) const {
    return worlds_ == other.worlds_ && letters_ == other.letters_ && edges_ == other.edges_;
  }

 private:
  std::vector<World> worlds_;
  std::vector<Letter> letters_;
  std::vector<KripkeEdge> edges_;
  std::unordered_map<std::string, int> world_ids_;
  std::unordered_map<Letter, int> letter_ids_;
  std::vector<std::vector<std::vector<int>>> out_;  // letter -> world -> successors
};

/// A finite set of ordered world pairs, kept sorted and unique.
class WorldRelation {
 public:
  WorldRelation() = default;

  static WorldRelation from_pairs(std::vector<std::pair<int, int>> pairs) {
    WorldRelation r;
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    r.pairs_ = std::move(pairs);
    return r;
  }

  static WorldRelation identity(int n) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pairs.emplace_back(i, i);
    return from_pairs(std::move(pairs));
  }

  static WorldRelation letter_relation(const KripkeStructure& k, const Letter& a) {
    const int id = k.letter_index(a);
    if (id < 0) throw Error("letter '" + a + "' is not declared in the structure");
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < k.size(); ++x)
      for (int y : k.successors(id, x)) pairs.emplace_back(x, y);
    return from_pairs(std::move(pairs));
  }

  /// Identity restricted to the given (sorted or unsorted) world set.
  static WorldRelation diagonal(const std::vector<int>& worlds) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(worlds.size());
    for (int w : worlds) pairs.emplace_back(w, w);
    return from_pairs(std::move(pairs));
  }

  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }
  size_t count() const { return pairs_.size(); }

  bool contains(int x, int y) const {
    return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(x, y));
  }

  /// Left-to-right relational composition.
  WorldRelation compose(const WorldRelation& rhs) const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [x, y] : pairs_) {
      auto lo = std::lower_bound(rhs.pairs_.begin(), rhs.pairs_.end(),
                                 std::make_pair(y, std::numeric_limits<int>::min()));
      for (auto it = lo; it != rhs.pairs_.end() && it->first == y; ++it)
        out.emplace_back(x, it->second);
    }
    return from_pairs(std::move(out));
  }

  WorldRelation unite(const WorldRelation& rhs) const {
    std::vector<std::pair<int, int>> out;
    out.reserve(pairs_.size() + rhs.pairs_.size());
    std::merge(pairs_.begin(), pairs_.end(), rhs.pairs_.begin(), rhs.pairs_.end(),
               std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    WorldRelation r;
    r.pairs_ = std::move(out);
    return r;
  }

  /// Worlds related to at least one element of `targets` (given as a sorted
  /// membership mask over world indices).
  std::vector<int> sources_into(const std::vector<bool>& target_mask) const {
    std::vector<int> out;
    for (const auto& [x, y] : pairs_)
      if (target_mask[static_cast<size_t>(y)]) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<int> targets_of(int x) const {
    std::vector<int> out;
    auto lo = std::lower_bound(pairs_.begin(), pairs_.end(),
                               std::make_pair(x, std::numeric_limits<int>::min()));
    for (auto it = lo; it != pairs_.end() && it->first == x; ++it) out.push_back(it->second);
    return out;
  }

  bool operator==(const WorldRelation&) const = default;

 private:
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace mvpdl
