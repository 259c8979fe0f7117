#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "serrelab/constructions.hpp"

#include <random>

using namespace serrelab;

namespace {

Word wparse(const AlphabetRef& a, const std::vector<std::pair<int, int>>& syls) {
  std::vector<Syllable> out;
  for (auto [g, e] : syls) out.push_back({g, Int(e)});
  return Word::from_syllables(a, out);
}

}  // namespace

TEST_CASE("magnus fixture is a valid graph of groups") {
  auto f = magnus_pair_gog();
  CHECK(f.graph.validate().empty());
  CHECK(f.graph.vertices().size() == 4);
  CHECK(f.graph.edges().size() == 8);
  int trees = 0;
  for (const auto& e : f.graph.edges()) trees += e.tree ? 1 : 0;
  CHECK(trees == 3);
  CHECK(f.pres.alpha->rank() == 13);
  CHECK(path_valid(f.graph, f.u));
  CHECK(path_valid(f.graph, f.v));
  CHECK(!path_trivial(f.graph, f.u));
  CHECK(!path_trivial(f.graph, f.v));
}

TEST_CASE("u and v are elliptic and distinct") {
  auto f = magnus_pair_gog();
  auto cu = classify(f.graph, f.u);
  auto cv = classify(f.graph, f.v);
  CHECK(cu.elliptic);
  CHECK(cv.elliptic);
  CHECK(!path_equal(f.graph, f.u, f.v));
}

TEST_CASE("u and v are not conjugate up to inversion") {
  auto f = magnus_pair_gog();
  CHECK(!are_conjugate_elements(f.graph, f.u, f.v).conjugate);
  CHECK(!are_conjugate_elements(f.graph, f.u, path_inv(f.graph, f.v)).conjugate);
}

TEST_CASE("normal closure witnesses verify") {
  auto f = magnus_pair_gog();
  auto uw = ncl_u_from_v(f);
  auto vw = ncl_v_from_u(f);
  CHECK(verify_ncl(f.graph, uw));
  CHECK(verify_ncl(f.graph, vw));
  CHECK(uw.factors.size() == 3);
  CHECK(vw.factors.size() == 3);

  // a corrupted witness must fail
  auto bad = uw;
  bad.factors[1].second = +1;
  CHECK(!verify_ncl(f.graph, bad));
}

TEST_CASE("frozen strict map: relations, strictness, surjectivity") {
  auto f = magnus_pair_gog();
  auto rep = check_strict(f.graph, f.rho, f.qh_vertices);
  CHECK(rep.verdict);
  CHECK(rep.failures.empty());
  auto an = analyze(f.rho.hom);
  CHECK(an.surjective);
}

TEST_CASE("frozen map conflates the conjugacy classes of u and v") {
  auto f = magnus_pair_gog();
  Word iu = f.rho.apply(f.graph, f.u);
  Word iv = f.rho.apply(f.graph, f.v);
  CHECK(!iu.trivial());
  CHECK(!iv.trivial());
  CHECK(static_cast<bool>(are_conjugate(iu, iv, true)));
}

TEST_CASE("verify_magnus_pair passes every clause") {
  auto f = magnus_pair_gog();
  auto r = verify_magnus_pair(f);
  CHECK(r.non_conjugate);
  CHECK(r.ncl_u_from_v);
  CHECK(r.ncl_v_from_u);
  CHECK(r.strict);
  CHECK(r.surjective);
  CHECK(r.images_conjugate);
  CHECK(r.verdict);
  CHECK(r.failures.empty());
}

TEST_CASE("find_strict_map recovers a strict surjection") {
  auto f = magnus_pair_gog();
  auto h = find_strict_map(f, 2, 11);
  REQUIRE(h.has_value());
  CHECK(check_strict(f.graph, *h, f.qh_vertices).verdict);
  CHECK(analyze(h->hom).surjective);
  Word iu = h->apply(f.graph, f.u);
  Word iv = h->apply(f.graph, f.v);
  CHECK(static_cast<bool>(are_conjugate(iu, iv, true)));
  CHECK(!find_strict_map(f, 0, 11).has_value());
}

TEST_CASE("c-double construction and retraction") {
  auto a = make_alphabet("F", {"x", "y"});
  Word w = wparse(a, {{0, 1}, {1, 1}, {0, -1}, {1, -1}});  // commutator
  auto f = c_double(w);
  CHECK(f.graph.validate().empty());
  CHECK(f.pres.alpha->rank() == 4);
  CHECK(mirror_word(f, w) == Word::from_syllables(f.mirror, w.syllables()));

  // retraction restricts to the identity on the left factor
  Word xy = wparse(a, {{0, 2}, {1, -3}});
  Word lifted = Word::from_syllables(f.pres.alpha, xy.syllables());
  CHECK(f.retraction.hom.apply(lifted) == xy);

  CHECK_THROWS_AS(c_double(Word::identity(a)), Error);
  CHECK_THROWS_AS(c_double(power(Word::letter(a, 0), 2)), Error);
}

TEST_CASE("mirror admissibility rejects powers of w") {
  auto a = make_alphabet("F", {"x", "y"});
  Word w = wparse(a, {{0, 1}, {1, 1}});
  auto f = c_double(w);
  CHECK(!mirror_left_admissible(f, w, 3));
  CHECK(!mirror_left_admissible(f, invert(power(w, 2)), 3));
  CHECK(!mirror_left_admissible(f, conjugate(Word::letter(a, 1), w), 3));
  CHECK(mirror_left_admissible(f, Word::letter(a, 0), 3));
}

TEST_CASE("c-double hom family respects the amalgamation relation") {
  auto a = make_alphabet("F", {"x", "y"});
  Word w = wparse(a, {{0, 1}, {1, 1}, {0, -1}, {1, -1}});
  auto f = c_double(w);
  auto fam = cdouble_hom_family(f, 9, 5);
  REQUIRE(fam.size() == 9);
  Word wl = Word::from_syllables(f.pres.alpha, w.syllables());
  std::vector<Syllable> ms;
  for (const auto& s : w.syllables()) ms.push_back({s.gen + 2, s.exp});
  Word wr = Word::from_syllables(f.pres.alpha, ms);
  for (const auto& h : fam) CHECK(h.hom.apply(wl) == h.hom.apply(wr));
}

TEST_CASE("c-double family omits abelian collapses outside the commutator subgroup") {
  auto a = make_alphabet("F", {"x", "y"});
  Word w = wparse(a, {{0, 1}, {1, 1}});
  auto f = c_double(w);
  auto fam = cdouble_hom_family(f, 6, 5);
  CHECK(fam.size() == 6);
}

TEST_CASE("centralizer embedding sends generators to t-syllabic forms") {
  auto a = make_alphabet("F", {"x", "y"});
  Word w = wparse(a, {{0, 1}, {1, 1}, {0, -1}, {1, -1}});
  auto f = c_double(w);
  auto emb = centralizer_embedding(f);
  CHECK(emb.hnn.validate().empty());
  for (const auto& img : emb.images) CHECK(is_t_syllabic(emb.hnn, img));

  // w(x,y) and w(r,s) become equal in the HNN extension
  std::vector<Syllable> ms;
  for (const auto& s : w.syllables()) ms.push_back({s.gen + 2, s.exp});
  Word wl = Word::from_syllables(f.pres.alpha, w.syllables());
  Word wr = Word::from_syllables(f.pres.alpha, ms);
  CHECK(path_equal(emb.hnn, emb.apply(wl), emb.apply(wr)));
}

TEST_CASE("centralizer embedding is multiplicative and injective on samples") {
  auto a = make_alphabet("F", {"x", "y"});
  Word w = wparse(a, {{0, 1}, {1, 1}, {0, -1}, {1, -1}});
  auto f = c_double(w);
  auto emb = centralizer_embedding(f);
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> len(0, 5), ld(0, 7);
  std::vector<Word> sample;
  for (int i = 0; i < 12; ++i) {
    std::vector<Letter> ls;
    int n = len(rng);
    for (int j = 0; j < n; ++j) ls.push_back(ld(rng));
    sample.push_back(Word::from_letters(f.pres.alpha, ls));
  }
  for (const auto& p : sample)
    for (const auto& q : sample) {
      CHECK(path_equal(emb.hnn, emb.apply(multiply(p, q)),
                       path_mul(emb.hnn, emb.apply(p), emb.apply(q))));
      if (p != q && !multiply(p, invert(q)).trivial()) {
        bool same = path_equal(emb.hnn, emb.apply(p), emb.apply(q));
        bool kernel = path_trivial(emb.hnn, emb.apply(multiply(p, invert(q))));
        CHECK(same == kernel);
      }
    }
}

TEST_CASE("fig 3 tower extends the magnus fixture") {
  auto f = fig3_tower();
  CHECK(f.graph.validate().empty());
  CHECK(f.graph.vertices().size() == 5);
  CHECK(f.graph.edges().size() == 10);
  CHECK(f.graph.edges()[static_cast<std::size_t>(f.s_edge)].name == "s");
  CHECK(!f.graph.edges()[static_cast<std::size_t>(f.s_edge)].tree);
  CHECK(f.pres.alpha->rank() == 17);
  CHECK(path_valid(f.graph, f.u));
  // the two new edges conjugate both u and v onto z, so the pair fuses in
  // the ambient group even though it stays separated in the magnus subgroup
  auto fused = are_conjugate_elements(f.graph, f.u, f.v);
  CHECK(fused.conjugate);
  REQUIRE(fused.conjugator.has_value());
  CHECK(path_equal(f.graph, path_conjugate(f.graph, *fused.conjugator, f.v), f.u));
}

TEST_CASE("fig 3 retraction family never separates the pair") {
  auto f = fig3_tower();
  for (int n : {-2, 0, 1, 5}) {
    auto r = fig3_retraction(f, n);
    Word iu = r.apply(f.graph, f.u);
    Word iv = r.apply(f.graph, f.v);
    CHECK(iu == iv);
    CHECK(!iu.trivial());
  }
  // yet each member restricts to the identity on the free vertex
  auto r = fig3_retraction(f, 3);
  Word z = Word::letter(f.magnus.f3, 0);
  int off = f.pres.vertex_offset[static_cast<std::size_t>(f.f3_vertex)];
  CHECK(r.hom.apply(Word::letter(f.pres.alpha, off)) == z);
}
