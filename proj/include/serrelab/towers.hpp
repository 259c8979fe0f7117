#pragma once

#include "serrelab/constructions.hpp"
#include "serrelab/gog.hpp"

#include <cstdint>
#include <optional>

namespace serrelab {

/// One extension step of a tower: free abelian flat attached along the
/// centralizer of a word, or a surface attached along boundary words. The
/// trivial abelian attach word marks the singular case (free product).
struct ExtensionLevel {
  enum class Kind { Abelian, Quadratic };
  Kind kind = Kind::Abelian;

  // abelian
  Word attach;
  int a_rank = 1;

  // quadratic
  int genus = 0;
  std::vector<Word> boundary_attach;  // over the base, one per boundary curve
  std::vector<Word> surface_images;   // retraction images per surface generator

  static ExtensionLevel abelian(Word attach_word, int rank);
  static ExtensionLevel quadratic(int g, std::vector<Word> boundary, std::vector<Word> images);

  friend bool operator==(const ExtensionLevel& a, const ExtensionLevel& b);
};

/// Tower over a free base: cumulative graph-of-groups decompositions, one
/// per level (graphs[0] is the bare base). Attach data lives over the base
/// alphabet, so every level's graph is a star around the base vertex.
struct Tower {
  AlphabetRef base;
  std::vector<ExtensionLevel> levels;
  std::vector<GraphOfGroups> graphs;
  std::vector<Presentation> pres;
  bool ice = false;  // all levels abelian

  int height() const { return static_cast<int>(levels.size()); }
  const GraphOfGroups& top() const { return graphs.back(); }
  const Presentation& top_pres() const { return pres.back(); }
  /// Free abelian generators across all levels (the retraction parameters).
  int abelian_param_count() const;
};

Tower build_tower(AlphabetRef base, std::vector<ExtensionLevel> levels);

/// Surface generator names for quadratic level i (1-based): x, y pairs then
/// boundary letters s; boundary words in those generators.
std::vector<Word> quadratic_boundary_words(const AlphabetRef& surface, int genus, int boundary);

/// Retraction from level i onto level i-1: identity on the lower generators,
/// level-i abelian coordinates to attach powers (parameter 1), surface
/// generators to their stored images, stable letters to 1.
FreeHom level_retraction(const Tower& t, int i);

/// Composite retraction of the whole tower onto the base, one exponent per
/// free abelian generator. Verified against all relations of the top graph
/// and checked to restrict to the identity on the base.
GogHom ice_retraction(const Tower& t, const std::vector<Int>& exponents);

/// Diagonal member: every abelian exponent equal to n.
GogHom diagonal_retraction(const Tower& t, const Int& n);

struct SeparationReport {
  int n_scanned = 0;
  std::optional<int> minimal_n;
  // per scanned n, the index pairs whose images were conjugate
  std::vector<std::pair<int, std::vector<std::pair<int, int>>>> collapsed;
  // flagged index -> image stayed indivisible for every scanned n
  std::vector<std::pair<int, bool>> indivisibility;
};

/// Scans the diagonal family n = 1..n_max for a parameter making the images
/// of S pairwise non-conjugate in the base. Inputs must be pairwise
/// non-conjugate in the tower (error otherwise, naming the pair).
SeparationReport separation_experiment(const Tower& t, const std::vector<PathWord>& S, int n_max,
                                       const std::vector<int>& indivisible_flags = {});

struct DiscriminationReport {
  int n_scanned = 0;
  std::optional<int> minimal_n;
  // per scanned n, the indices whose images collapsed to the identity
  std::vector<std::pair<int, std::vector<int>>> killed;
};

/// Minimal diagonal parameter whose retraction kills no element of P.
/// Inputs must be nontrivial in the tower.
DiscriminationReport discrimination_experiment(const Tower& t, const std::vector<PathWord>& P,
                                               int n_max);

struct Prop51Report {
  int pair_count = 0;
  int n_max = 0;
  std::vector<int> separating_n;  // per sampled pair; -1 when exhausted
  bool all_separated = false;
  bool uv_never_separated = false;
};

/// Samples non-conjugate pairs in the magnus group avoiding the classes of
/// u and v (up to inversion), pushes them through the fig 3 retraction
/// family, and records the minimal separating parameter; also replays the
/// pair (u, v), which no member separates.
Prop51Report prop51_sampling(const Fig3Fixture& f, int pair_count, std::uint64_t seed,
                             int n_max = 16);

}  // namespace serrelab
