#pragma once

#include "serrelab/homs.hpp"
#include "serrelab/words.hpp"

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace serrelab {

/// Vertex group of a graph of groups: finitely generated free, or finitely
/// generated free abelian.
struct VertexGroup {
  enum class Kind { Free, Abelian };
  Kind kind = Kind::Free;
  AlphabetRef alpha;  // Free only
  int ab_rank = 0;    // Abelian only

  static VertexGroup free(AlphabetRef a) { return VertexGroup{Kind::Free, std::move(a), 0}; }
  static VertexGroup abelian(int rank) { return VertexGroup{Kind::Abelian, nullptr, rank}; }
};

/// Element of a vertex group. Exactly one member is meaningful, selected by
/// the owning vertex's kind.
struct GElem {
  Word word;             // free vertices
  std::vector<Int> vec;  // abelian vertices

  friend bool operator==(const GElem& a, const GElem& b) {
    return a.word == b.word && a.vec == b.vec;
  }
};

GElem gelem_word(Word w);
GElem gelem_vec(std::vector<Int> v);

inline bool operator==(const VertexGroup& a, const VertexGroup& b) {
  return a.kind == b.kind && a.ab_rank == b.ab_rank && same_alphabet(a.alpha, b.alpha);
}

bool gelem_trivial(const VertexGroup& vg, const GElem& a);
GElem gelem_identity(const VertexGroup& vg);
GElem gelem_mul(const VertexGroup& vg, const GElem& a, const GElem& b);
GElem gelem_inv(const VertexGroup& vg, const GElem& a);
GElem gelem_pow(const VertexGroup& vg, const GElem& a, const Int& k);
/// Solves a == base^k; base may be trivial only when a is (then k = 0).
std::optional<Int> gelem_power_of(const VertexGroup& vg, const GElem& a, const GElem& base);
/// Conjugator c with c * b * c^-1 == a, if the two are conjugate in the
/// vertex group.
std::optional<GElem> gelem_conjugator(const VertexGroup& vg, const GElem& a, const GElem& b);
/// Key identifying the conjugacy class of a within its vertex group.
std::string gelem_conjugacy_key(const VertexGroup& vg, const GElem& a);
std::string gelem_str(const VertexGroup& vg, const GElem& a);

struct GogEdge {
  std::string name;
  std::array<int, 2> ends{};     // vertex indices
  std::array<GElem, 2> att{};    // attaching element at each end
  bool tree = false;
  // Trivial attaching elements are rejected unless this is set; a flagged
  // edge carries the trivial edge group (free-product edge), used by the
  // singular abelian extensions of the tower module.
  bool allow_trivial = false;

  friend bool operator==(const GogEdge& a, const GogEdge& b) {
    return a.name == b.name && a.ends == b.ends && a.att == b.att && a.tree == b.tree &&
           a.allow_trivial == b.allow_trivial;
  }
};

class GraphOfGroups {
 public:
  GraphOfGroups() = default;
  GraphOfGroups(std::vector<std::pair<std::string, VertexGroup>> vertices,
                std::vector<GogEdge> edges, int base);

  const std::vector<std::pair<std::string, VertexGroup>>& vertices() const { return vertices_; }
  const std::vector<GogEdge>& edges() const { return edges_; }
  const VertexGroup& vg(int v) const { return vertices_[static_cast<std::size_t>(v)].second; }
  int base() const { return base_; }
  int vertex_index(const std::string& name) const;  // -1 if absent
  int edge_index(const std::string& name) const;

  /// Empty when all invariants hold; otherwise messages naming the offending
  /// vertex or edge.
  std::vector<std::string> validate() const;
  void require_valid() const;  // throws on first diagnostic

  // Unverified hypotheses carried by fixtures (2-acylindricity, maximality
  // of attaching cyclic subgroups).
  std::vector<std::string> assumptions;

 private:
  std::vector<std::pair<std::string, VertexGroup>> vertices_;
  std::vector<GogEdge> edges_;
  int base_ = 0;
};

inline bool operator==(const GraphOfGroups& a, const GraphOfGroups& b) {
  return a.vertices() == b.vertices() && a.edges() == b.edges() && a.base() == b.base();
}

/// One edge traversal: dir 0 crosses from ends[0] to ends[1], dir 1 the
/// reverse. elem lives in the arrival vertex group.
struct PathStep {
  int edge = 0;
  int dir = 0;
  GElem elem;
};

/// Groupoid path: head element at the start vertex, then edge traversals
/// with trailing vertex elements. Elements of the fundamental group are the
/// loops based at the graph's base vertex; intermediate computations
/// (cyclic reduction, conjugators) use paths with arbitrary endpoints.
struct PathWord {
  int start = 0;
  GElem head;
  std::vector<PathStep> steps;

  friend bool operator==(const PathWord& a, const PathWord& b);
};

int path_end(const GraphOfGroups& g, const PathWord& p);
bool path_valid(const GraphOfGroups& g, const PathWord& p);
PathWord path_identity(const GraphOfGroups& g, int vertex);
PathWord path_elem(const GraphOfGroups& g, int vertex, GElem e);
PathWord path_mul(const GraphOfGroups& g, const PathWord& a, const PathWord& b);
PathWord path_inv(const GraphOfGroups& g, const PathWord& a);
PathWord path_conjugate(const GraphOfGroups& g, const PathWord& c, const PathWord& a);

/// Britton-reduced form: no pinch (crossing, attached power, reverse
/// crossing) remains. Equal to p in the fundamental groupoid.
PathWord normal_form(const GraphOfGroups& g, const PathWord& p);
bool path_trivial(const GraphOfGroups& g, const PathWord& p);
bool path_equal(const GraphOfGroups& g, const PathWord& p, const PathWord& q);
std::string path_str(const GraphOfGroups& g, const PathWord& p);

struct Classification {
  bool elliptic = true;
  // Elliptic: reduced core is the element `elem` of vertex group `vertex`.
  // Hyperbolic: core is the cyclically reduced loop `axis` (nonempty).
  int vertex = 0;
  GElem elem;
  PathWord axis;
  // conjugator * core * conjugator^-1 == p in the groupoid.
  PathWord conjugator;
};

Classification classify(const GraphOfGroups& g, const PathWord& p);

struct GogConjugacyResult {
  bool conjugate = false;
  std::optional<PathWord> conjugator;  // x with x * q * x^-1 == p
  Classification left;
  Classification right;
};

GogConjugacyResult are_conjugate_elements(const GraphOfGroups& g, const PathWord& p,
                                          const PathWord& q);

/// Spanning-tree presentation of the fundamental group: one generator per
/// vertex-group generator plus one stable letter per non-tree edge.
struct Presentation {
  AlphabetRef alpha;
  std::vector<Word> relations;
  std::vector<int> vertex_offset;  // first generator index per vertex
  std::vector<int> stable_letter;  // generator index per edge; -1 on tree edges
};

Presentation pi1_presentation(const GraphOfGroups& g);

/// Collapse a based loop to a word over the presentation generators (tree
/// edges contribute nothing, non-tree edges their stable letter).
Word path_to_word(const GraphOfGroups& g, const Presentation& pres, const PathWord& p);

/// Lift a word over the presentation generators to a based loop; inverse of
/// path_to_word up to equality in the fundamental group. Stable-letter
/// exponents are bounded (paths are stored step by step).
PathWord word_to_path(const GraphOfGroups& g, const Presentation& pres, const Word& w);

/// Homomorphism from the fundamental group to a free group, one image per
/// presentation generator. Relations are verified at construction.
struct GogHom {
  Presentation pres;
  FreeHom hom;  // pres.alpha -> target

  Word apply(const GraphOfGroups& g, const PathWord& p) const;
};

GogHom make_gog_hom(const GraphOfGroups& g, const Presentation& pres, const AlphabetRef& target,
                    std::vector<Word> images);

struct StrictnessReport {
  bool edge_groups_injective = true;
  bool abelian_injective = true;
  bool free_envelopes_injective = true;
  bool qh_nonabelian = true;
  bool verdict = true;
  std::vector<std::string> failures;
};

/// Strictness conditions for a map to a free group: edge-group images
/// nontrivial, abelian vertex groups mapped faithfully, non-QH free vertex
/// groups mapped injectively (rank criterion), QH vertex images non-abelian.
StrictnessReport check_strict(const GraphOfGroups& g, const GogHom& h,
                              const std::set<int>& qh_vertices);

}  // namespace serrelab
