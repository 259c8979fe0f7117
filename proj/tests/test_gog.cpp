#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "serrelab/gog.hpp"

#include <map>
#include <random>

using namespace serrelab;

namespace {

Word W(const AlphabetRef& a, std::initializer_list<std::pair<int, int>> syls) {
  std::vector<Syllable> s;
  for (auto [g, e] : syls) s.push_back({g, Int(e)});
  return Word::from_syllables(a, s);
}

// HNN extension F(x,y) *_t with t^-1 [x,y] t = [x,y].
struct Hnn {
  AlphabetRef F = make_alphabet("F", {"x", "y"});
  Word w = commutator(Word::letter(F, 0), Word::letter(F, 1));
  GraphOfGroups g;

  Hnn()
      : g({{"V", VertexGroup::free(F)}},
          {GogEdge{"t", {0, 0}, {gelem_word(w), gelem_word(w)}, false, false}}, 0) {}

  PathWord velem(Word u) const { return path_elem(g, 0, gelem_word(std::move(u))); }
  // t^sign with trailing vertex element
  PathWord stable(int sign, Word trail) const {
    PathWord p = path_identity(g, 0);
    PathStep s;
    s.edge = 0;
    s.dir = sign > 0 ? 0 : 1;
    s.elem = gelem_word(std::move(trail));
    p.steps.push_back(std::move(s));
    return p;
  }
};

// Amalgam F(a,b) *_{a=c} F(c,d).
struct Amalgam {
  AlphabetRef A = make_alphabet("A", {"a", "b"});
  AlphabetRef C = make_alphabet("C", {"c", "d"});
  GraphOfGroups g;

  Amalgam()
      : g({{"V1", VertexGroup::free(A)}, {"V2", VertexGroup::free(C)}},
          {GogEdge{"e", {0, 1}, {gelem_word(Word::letter(A, 0)), gelem_word(Word::letter(C, 0))},
                   true, false}},
          0) {}
};

PathWord random_loop(const GraphOfGroups& g, std::mt19937_64& rng, int max_steps) {
  std::uniform_int_distribution<int> nd(0, max_steps);
  int target = nd(rng);
  PathWord p = path_identity(g, g.base());
  auto rand_elem = [&](int v) {
    const VertexGroup& vg = g.vg(v);
    if (vg.kind == VertexGroup::Kind::Free) {
      std::uniform_int_distribution<int> len(0, 3);
      std::uniform_int_distribution<int> ld(0, 2 * vg.alpha->rank() - 1);
      std::vector<Letter> ls;
      int n = len(rng);
      for (int i = 0; i < n; ++i) ls.push_back(ld(rng));
      return gelem_word(Word::from_letters(vg.alpha, ls));
    }
    std::uniform_int_distribution<int> cd(-2, 2);
    std::vector<Int> vec(static_cast<std::size_t>(vg.ab_rank));
    for (auto& x : vec) x = cd(rng);
    return gelem_vec(std::move(vec));
  };
  p.head = rand_elem(g.base());
  int cur = g.base();
  for (int i = 0; i < target; ++i) {
    std::vector<std::pair<int, int>> options;  // edge, dir
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
      if (g.edges()[ei].ends[0] == cur) options.push_back({static_cast<int>(ei), 0});
      if (g.edges()[ei].ends[1] == cur) options.push_back({static_cast<int>(ei), 1});
    }
    if (options.empty()) break;
    std::uniform_int_distribution<std::size_t> od(0, options.size() - 1);
    auto [edge, dir] = options[od(rng)];
    PathStep s;
    s.edge = edge;
    s.dir = dir;
    cur = g.edges()[static_cast<std::size_t>(edge)].ends[static_cast<std::size_t>(1 - dir)];
    s.elem = rand_elem(cur);
    p.steps.push_back(std::move(s));
  }
  // walk back to base along any route (graphs here are small)
  while (cur != g.base()) {
    bool moved = false;
    for (std::size_t ei = 0; ei < g.edges().size() && !moved; ++ei)
      for (int dir = 0; dir < 2 && !moved; ++dir)
        if (g.edges()[ei].ends[static_cast<std::size_t>(dir)] == cur) {
          int next = g.edges()[ei].ends[static_cast<std::size_t>(1 - dir)];
          PathStep s;
          s.edge = static_cast<int>(ei);
          s.dir = dir;
          s.elem = rand_elem(next);
          p.steps.push_back(std::move(s));
          cur = next;
          moved = true;
        }
    REQUIRE(moved);
  }
  return p;
}

}  // namespace

TEST_CASE("validate accepts the fixtures and rejects trivial attachments") {
  Hnn h;
  CHECK(h.g.validate().empty());
  Amalgam am;
  CHECK(am.g.validate().empty());

  GraphOfGroups bad({{"V", VertexGroup::free(make_alphabet("F", {"x"}))}},
                    {GogEdge{"e", {0, 0}, {gelem_word(Word()), gelem_word(Word())}, false, false}},
                    0);
  CHECK(!bad.validate().empty());
}

TEST_CASE("normal_form Britton pinches in the HNN") {
  Hnn h;
  // t^-1 w^3 t -> w^3
  PathWord p = path_mul(h.g, h.stable(-1, power(h.w, 3)), h.stable(+1, Word(h.F)));
  PathWord nf = normal_form(h.g, p);
  CHECK(nf.steps.empty());
  CHECK(nf.head.word == power(h.w, 3));

  // t^-1 x t stays reduced
  PathWord q = path_mul(h.g, h.stable(-1, Word::letter(h.F, 0)), h.stable(+1, Word(h.F)));
  PathWord nfq = normal_form(h.g, q);
  CHECK(nfq.steps.size() == 2);

  // (t^-1 x t)(t^-1 y t) -> t^-1 x y t
  PathWord r = path_mul(h.g, q,
                        path_mul(h.g, h.stable(-1, Word::letter(h.F, 1)), h.stable(+1, Word(h.F))));
  PathWord nfr = normal_form(h.g, r);
  REQUIRE(nfr.steps.size() == 2);
  CHECK(nfr.steps[0].elem.word == multiply(Word::letter(h.F, 0), Word::letter(h.F, 1)));
}

TEST_CASE("normal_form is idempotent and equality-preserving") {
  Hnn h;
  std::mt19937_64 rng(41);
  for (int i = 0; i < 150; ++i) {
    PathWord p = random_loop(h.g, rng, 4);
    PathWord nf = normal_form(h.g, p);
    CHECK(normal_form(h.g, nf) == nf);
    CHECK(path_equal(h.g, p, nf));
    CHECK(nf.steps.size() <= p.steps.size());
  }
}

TEST_CASE("classify on HNN elements") {
  Hnn h;
  auto cw = classify(h.g, h.velem(h.w));
  CHECK(cw.elliptic);
  CHECK(cw.elem.word == h.w);

  auto ct = classify(h.g, h.stable(+1, Word(h.F)));
  CHECK(!ct.elliptic);

  PathWord pinch = path_mul(h.g, h.stable(-1, h.w), h.stable(+1, Word(h.F)));
  auto cp = classify(h.g, pinch);
  CHECK(cp.elliptic);
  CHECK(cp.elem.word == h.w);

  // conjugator certificate: gamma * core * gamma^-1 == p
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    PathWord p = random_loop(h.g, rng, 4);
    auto c = classify(h.g, p);
    PathWord core = c.elliptic ? path_elem(h.g, c.vertex, c.elem) : c.axis;
    CHECK(path_equal(h.g, path_conjugate(h.g, c.conjugator, core), p));
  }
}

TEST_CASE("mirror conjugacy example in the HNN") {
  Hnn h;
  Word x = Word::letter(h.F, 0);
  PathWord p = path_mul(h.g, h.stable(+1, x), h.stable(-1, Word(h.F)));
  PathWord q = h.velem(conjugate(h.w, x));
  auto res = are_conjugate_elements(h.g, p, q);
  REQUIRE(res.conjugate);
  REQUIRE(res.conjugator);
  CHECK(path_equal(h.g, path_conjugate(h.g, *res.conjugator, q), p));
}

TEST_CASE("conjugacy is reflexive and closed under conjugation") {
  Hnn h;
  std::mt19937_64 rng(43);
  for (int i = 0; i < 60; ++i) {
    PathWord p = random_loop(h.g, rng, 3);
    PathWord x = random_loop(h.g, rng, 2);
    PathWord q = path_conjugate(h.g, x, p);
    auto res = are_conjugate_elements(h.g, p, q);
    REQUIRE(res.conjugate);
    REQUIRE(res.conjugator);
    CHECK(path_equal(h.g, path_conjugate(h.g, *res.conjugator, q), p));
    auto sym = are_conjugate_elements(h.g, q, p);
    CHECK(sym.conjugate);
  }
}

TEST_CASE("elliptic never conjugate to hyperbolic") {
  Hnn h;
  PathWord ell = h.velem(Word::letter(h.F, 0));
  PathWord hyp = h.stable(+1, Word(h.F));
  auto res = are_conjugate_elements(h.g, ell, hyp);
  CHECK(!res.conjugate);
  CHECK(res.left.elliptic);
  CHECK(!res.right.elliptic);
}

TEST_CASE("amalgam conjugacy matches brute-force oracle") {
  Amalgam am;
  // Atom paths: short vertex elements and edge crossings back and forth.
  std::vector<PathWord> sample;
  std::mt19937_64 rng(44);
  for (int i = 0; i < 40; ++i) {
    PathWord p = normal_form(am.g, random_loop(am.g, rng, 4));
    if (p.steps.size() <= 4) sample.push_back(p);
  }
  std::vector<PathWord> conjugators;
  for (int i = 0; i < 60; ++i) {
    PathWord c = normal_form(am.g, random_loop(am.g, rng, 3));
    conjugators.push_back(c);
  }
  int positives = 0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = i; j < sample.size(); ++j) {
      auto res = are_conjugate_elements(am.g, sample[i], sample[j]);
      if (res.conjugate) {
        ++positives;
        REQUIRE(res.conjugator);
        CHECK(path_equal(am.g, path_conjugate(am.g, *res.conjugator, sample[j]), sample[i]));
      } else {
        // no sampled conjugator may link them
        for (const PathWord& c : conjugators)
          CHECK(!path_equal(am.g, path_conjugate(am.g, c, sample[j]), sample[i]));
      }
    }
  CHECK(positives >= static_cast<int>(sample.size()));
}

TEST_CASE("pi1_presentation shapes") {
  Amalgam am;
  auto pres = pi1_presentation(am.g);
  CHECK(pres.alpha->rank() == 4);  // a, b, c, d; tree edge adds no letter
  REQUIRE(pres.relations.size() == 1);
  CHECK(pres.relations[0].str() == "a c^-1");

  Hnn h;
  auto hp = pi1_presentation(h.g);
  CHECK(hp.alpha->rank() == 3);  // x, y, t
  REQUIRE(hp.relations.size() == 1);
  // t^-1 [x,y] t [x,y]^-1
  Word w = commutator(Word::letter(hp.alpha, 0), Word::letter(hp.alpha, 1));
  Word t = Word::letter(hp.alpha, 2);
  CHECK(hp.relations[0] == multiply(multiply(multiply(invert(t), w), t), invert(w)));
}

TEST_CASE("path_to_word collapses loops over the presentation") {
  Hnn h;
  auto pres = pi1_presentation(h.g);
  PathWord p = path_mul(h.g, h.stable(-1, Word::letter(h.F, 0)), h.stable(+1, Word(h.F)));
  Word wp = path_to_word(h.g, pres, p);
  Word t = Word::letter(pres.alpha, 2);
  CHECK(wp == multiply(multiply(invert(t), Word::letter(pres.alpha, 0)), t));
}

TEST_CASE("make_gog_hom verifies relations") {
  Hnn h;
  auto pres = pi1_presentation(h.g);
  auto target = make_alphabet("T", {"z", "g"});
  // x -> z, y -> z, t -> g: [x,y] -> 1, relation holds
  auto gh = make_gog_hom(h.g, pres, target,
                         {Word::letter(target, 0), Word::letter(target, 0), Word::letter(target, 1)});
  CHECK(gh.apply(h.g, h.velem(Word::letter(h.F, 0))) == Word::letter(target, 0));
  // x -> z, y -> g, t -> z: t^-1 [z,g] t != [z,g]
  CHECK_THROWS_AS(make_gog_hom(h.g, pres, target,
                               {Word::letter(target, 0), Word::letter(target, 1),
                                Word::letter(target, 0)}),
                  Error);
}

TEST_CASE("check_strict conditions") {
  Amalgam am;
  auto pres = pi1_presentation(am.g);
  auto target = make_alphabet("T", {"z", "g"});
  Word z = Word::letter(target, 0), gg = Word::letter(target, 1);
  // a -> z, b -> g, c -> z, d -> g: edge (a=c) consistent, both vertices rank 2 image
  auto good = make_gog_hom(am.g, pres, target, {z, gg, z, gg});
  auto rep = check_strict(am.g, good, {});
  CHECK(rep.verdict);

  // a -> z, b -> z, c -> z, d -> g: V1 collapses to rank 1
  auto bad = make_gog_hom(am.g, pres, target, {z, z, z, gg});
  auto rep2 = check_strict(am.g, bad, {});
  CHECK(!rep2.verdict);
  CHECK(!rep2.free_envelopes_injective);
  // as QH vertex, V1 fails the non-abelian condition instead
  auto rep3 = check_strict(am.g, bad, {0});
  CHECK(!rep3.qh_nonabelian);
  // V2 as QH with non-commuting images passes
  auto rep4 = check_strict(am.g, good, {1});
  CHECK(rep4.qh_nonabelian);
}
