#pragma once

#include "serrelab/words.hpp"

#include <optional>
#include <string>
#include <vector>

namespace serrelab {

/// Folded Stallings core graph of a finitely generated subgroup of a free
/// group. Deterministic and co-deterministic; vertices are renumbered in BFS
/// order from the base (by letter order), so equal subgroups built from
/// different generator lists compare equal syntactically.
class SubgroupGraph {
 public:
  /// Folds the subgroup generated by the given words. Empty generator words
  /// are skipped; an empty list yields the trivial subgroup.
  static SubgroupGraph fold(const AlphabetRef& alpha, const std::vector<Word>& generators);

  const AlphabetRef& alphabet() const { return alpha_; }
  int base() const { return base_; }
  std::size_t vertex_count() const { return fwd_.size(); }
  std::size_t edge_count() const;

  /// Target of the g-labeled edge out of v, or -1.
  int step(int v, int gen) const { return fwd_[static_cast<std::size_t>(v)][static_cast<std::size_t>(gen)]; }
  int step_back(int v, int gen) const { return bwd_[static_cast<std::size_t>(v)][static_cast<std::size_t>(gen)]; }
  /// Follow a signed letter; -1 if undefined.
  int trace(int v, Letter l) const;

  bool contains(const Word& w) const;

  struct RankIndex {
    int rank = 0;
    std::optional<Int> index;  // nullopt = infinite
  };
  RankIndex rank_and_index() const;

  struct Malnormality {
    bool malnormal = true;
    // When not malnormal: witness in H with conjugator * witness * conjugator^-1
    // also in H and conjugator not in H.
    std::optional<Word> witness;
    std::optional<Word> conjugator;
  };
  Malnormality is_malnormal() const;

  std::string dot() const;  // diagnostics only

  friend bool operator==(const SubgroupGraph& a, const SubgroupGraph& b) {
    return same_alphabet(a.alpha_, b.alpha_) && a.base_ == b.base_ && a.fwd_ == b.fwd_;
  }

 private:
  AlphabetRef alpha_;
  int base_ = 0;
  std::vector<std::vector<int>> fwd_;  // [vertex][gen] -> vertex or -1
  std::vector<std::vector<int>> bwd_;
};

}  // namespace serrelab
