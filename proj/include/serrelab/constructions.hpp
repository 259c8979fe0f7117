#pragma once

#include "serrelab/gog.hpp"

#include <cstdint>
#include <optional>

namespace serrelab {

/// The 4-vertex, 8-edge cyclic splitting carrying the Magnus pair (u, v):
/// two cyclic vertices and two 4-boundary surface vertices, with boundary
/// words a, b, c, abc and p, q, r, pqr glued crosswise.
struct MagnusPairFixture {
  GraphOfGroups graph;
  Presentation pres;
  int vu = 0, vv = 1, su = 2, sv = 3;  // vertex indices
  std::set<int> qh_vertices;           // the two surface vertices
  PathWord u, v;                       // loops at the base
  AlphabetRef f3;                      // target of the strict map
  GogHom rho;                          // frozen strict map
};

MagnusPairFixture magnus_pair_gog();

/// Witness that `target` lies in the normal closure of `source`: the product
/// of the conjugated signed copies equals target.
struct NclWitness {
  PathWord target;
  PathWord source;
  std::vector<std::pair<PathWord, int>> factors;  // conjugator, sign
};

bool verify_ncl(const GraphOfGroups& g, const NclWitness& w);

NclWitness ncl_u_from_v(const MagnusPairFixture& f);
NclWitness ncl_v_from_u(const MagnusPairFixture& f);

struct MagnusReport {
  bool non_conjugate = false;        // u not ~+- v in pi1
  bool ncl_u_from_v = false;         // both normal-closure witnesses verify
  bool ncl_v_from_u = false;
  bool strict = false;               // frozen map passes check_strict
  bool surjective = false;           // frozen map is onto
  bool images_conjugate = false;     // rho(u) ~+- rho(v) in the target
  bool verdict = false;
  std::vector<std::string> failures;
};

MagnusReport verify_magnus_pair(const MagnusPairFixture& f);

/// Bounded randomized search for a strict map to the rank-3 free group;
/// image lengths bounded by max_image_length.
std::optional<GogHom> find_strict_map(const MagnusPairFixture& f, int max_image_length,
                                      std::uint64_t seed);

/// Double of F(x,y) along w: F(x,y) *_{w(x,y)=w(r,s)} F(r,s).
struct CDoubleFixture {
  Word w;                 // over f
  AlphabetRef f;          // x, y
  AlphabetRef mirror;     // r, s
  GraphOfGroups graph;    // two vertices, one tree edge
  Presentation pres;      // generators x, y, r, s
  GogHom retraction;      // standard retraction onto F(x,y)
  bool c_test_assumed = false;
};

CDoubleFixture c_double(const Word& w, bool c_test_assumed = false);

/// Mirror of a word over the first factor: same letter pattern over (r, s).
Word mirror_word(const CDoubleFixture& f, const Word& left);

/// Checks left is not conjugate (up to inversion) to w^n for |n| <= bound.
bool mirror_left_admissible(const CDoubleFixture& f, const Word& left, int bound);

/// Homomorphisms of the double to F(x,y) respecting w(x,y) = w(r,s): standard
/// retraction precomposed with endomorphisms, conjugated closures
/// r -> W^n x W^-n, and abelianized collapses (the latter only when w lies in
/// the commutator subgroup).
std::vector<GogHom> cdouble_hom_family(const CDoubleFixture& f, int count, std::uint64_t seed);

/// HNN extension F(x,y) *_t [t, w] = 1 with the embedding of the double:
/// x -> x, y -> y, r -> t^-1 x t, s -> t^-1 y t.
struct CentralizerEmbedding {
  GraphOfGroups hnn;           // one vertex, one loop edge
  std::vector<PathWord> images;  // per generator of the double's presentation
  const CDoubleFixture* fixture = nullptr;

  PathWord apply(const Word& dword) const;  // word over the double's presentation
};

CentralizerEmbedding centralizer_embedding(const CDoubleFixture& f);

/// Normal-form syllable shape w1 (t^-1 w2 t) w3 ... : edge crossings come in
/// strictly alternating reverse/forward pairs.
bool is_t_syllabic(const GraphOfGroups& hnn, const PathWord& p);

struct CDoubleReport {
  int homs_checked = 0;
  int mirror_pairs_checked = 0;
  bool images_conjugate = false;     // every mirror pair, every family member
  bool embedding_syllabic = false;   // embedding images are t-syllabic
  bool mirror_conjugate_by_t = false;
  bool verdict = false;
  std::vector<std::string> failures;
};

/// Generates hom_count family members and mirror_count mirror pairs (left
/// element in the commutator subgroup, not conjugate up to inversion to a
/// small power of w) and checks the image-conjugacy and embedding
/// invariants on all of them.
CDoubleReport verify_c_double(const CDoubleFixture& f, int hom_count, int mirror_count,
                              std::uint64_t seed);

/// Fig 1 graph extended by the rank-3 free vertex and two edges identifying
/// u with rho(u) (tree) and v with rho(v) (stable letter s).
struct Fig3Fixture {
  MagnusPairFixture magnus;
  GraphOfGroups graph;   // 5 vertices, 10 edges
  Presentation pres;
  int f3_vertex = 4;
  int s_edge = 0;        // index of the non-tree edge carrying s
  PathWord u, v;         // the Magnus pair inside the extended group
  GogHom rho_star;       // retraction onto the rank-3 free group, s -> 1
};

Fig3Fixture fig3_tower();

/// Member N of the retraction family: rho on pi1(U), identity on the free
/// vertex, s -> z^N.
GogHom fig3_retraction(const Fig3Fixture& f, const Int& n);

/// Richer retraction family member: the free parameter words of the strict
/// map shift with N (t_b -> g z^N, s_q -> h z^N, s -> z^N), so the family
/// varies on pi1(U) while every member still fuses u and v onto z.
GogHom fig3_family_member(const Fig3Fixture& f, const Int& n);

}  // namespace serrelab
