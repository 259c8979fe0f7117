#include "serrelab/constructions.hpp"

#include <random>

namespace serrelab {

namespace {

PathWord make_cross(const GraphOfGroups& g, int edge, int dir) {
  const auto& e = g.edges()[static_cast<std::size_t>(edge)];
  PathWord p = path_identity(g, e.ends[static_cast<std::size_t>(dir)]);
  PathStep s;
  s.edge = edge;
  s.dir = dir;
  s.elem = gelem_identity(g.vg(e.ends[static_cast<std::size_t>(1 - dir)]));
  p.steps.push_back(std::move(s));
  return p;
}

PathWord cross_loop(const GraphOfGroups& g, int edge, GElem through) {
  // edge crossing forward with the given arrival element, then back
  PathWord p = make_cross(g, edge, 0);
  p.steps[0].elem = std::move(through);
  return path_mul(g, p, make_cross(g, edge, 1));
}

Word rand_word(const AlphabetRef& a, std::mt19937_64& rng, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> ld(0, 2 * a->rank() - 1);
  int n = len(rng);
  for (;;) {
    std::vector<Letter> ls;
    for (int i = 0; i < n; ++i) ls.push_back(ld(rng));
    Word w = Word::from_letters(a, ls);
    if (min_len == 0 || !w.trivial()) return w;
  }
}

// Fig 1 generator image list from the free search parameters. Order matches
// the presentation: u v a b c p q r t_b t_c s_q s_r s_w.
std::optional<std::vector<Word>> fig1_images(const Word& A, const Word& Tb, const Word& Sq) {
  Word Tc = multiply(Tb, A);
  Word b = conjugate(Tb, invert(A));
  Word c = conjugate(Tc, A);
  Word u = multiply(multiply(A, b), c);
  Word Sr = multiply(Sq, u);
  Word q = conjugate(Sq, invert(u));
  Word r = conjugate(Sr, u);
  Word pqr = multiply(multiply(u, q), r);
  auto cert = are_conjugate(pqr, A);
  if (!cert) return std::nullopt;
  Word Sw = cert->conjugator;
  return std::vector<Word>{u, A, A, b, c, u, q, r, Tb, Tc, Sq, Sr, Sw};
}

}  // namespace

MagnusPairFixture magnus_pair_gog() {
  auto au = make_alphabet("Zu", {"u"});
  auto av = make_alphabet("Zv", {"v"});
  auto as = make_alphabet("Su", {"a", "b", "c"});
  auto at = make_alphabet("Sv", {"p", "q", "r"});
  Word wu = Word::letter(au, 0), wv = Word::letter(av, 0);
  Word wa = Word::letter(as, 0), wb = Word::letter(as, 1), wc = Word::letter(as, 2);
  Word wp = Word::letter(at, 0), wq = Word::letter(at, 1), wr = Word::letter(at, 2);
  Word wabc = multiply(multiply(wa, wb), wc);
  Word wpqr = multiply(multiply(wp, wq), wr);

  std::vector<GogEdge> edges;
  auto edge = [&](std::string name, int v0, int v1, Word a0, Word a1, bool tree) {
    edges.push_back(GogEdge{std::move(name), {v0, v1},
                            {gelem_word(std::move(a0)), gelem_word(std::move(a1))}, tree, false});
  };
  // boundary a, b, c of the first surface against <v>; abc against <u>
  edge("e_a", 2, 1, wa, wv, true);
  edge("t_b", 2, 1, wb, invert(wv), false);
  edge("t_c", 2, 1, wc, wv, false);
  edge("e_abc", 2, 0, wabc, wu, true);
  // boundary p, q, r of the second surface against <u>; pqr against <v>
  edge("e_p", 3, 0, wp, wu, true);
  edge("s_q", 3, 0, wq, invert(wu), false);
  edge("s_r", 3, 0, wr, wu, false);
  edge("s_w", 3, 1, wpqr, wv, false);

  MagnusPairFixture f;
  f.graph = GraphOfGroups({{"Zu", VertexGroup::free(au)},
                           {"Zv", VertexGroup::free(av)},
                           {"Su", VertexGroup::free(as)},
                           {"Sv", VertexGroup::free(at)}},
                          std::move(edges), 2);
  f.graph.require_valid();
  f.graph.assumptions = {"splitting is 2-acylindrical", "attaching subgroups are maximal cyclic"};
  f.pres = pi1_presentation(f.graph);
  f.qh_vertices = {2, 3};
  f.u = cross_loop(f.graph, 3, gelem_word(wu));
  f.v = cross_loop(f.graph, 0, gelem_word(wv));

  f.f3 = make_alphabet("F3", {"z", "g", "h"});
  Word z = Word::letter(f.f3, 0), g3 = Word::letter(f.f3, 1), h3 = Word::letter(f.f3, 2);
  // Frozen strict map, originally produced by find_strict_map and pinned
  // here as fixture data: A = z, T_b = g, S_q = h.
  auto imgs = fig1_images(z, g3, h3);
  if (!imgs) throw Error("frozen strict map parameters are inconsistent");
  f.rho = make_gog_hom(f.graph, f.pres, f.f3, *imgs);
  return f;
}

bool verify_ncl(const GraphOfGroups& g, const NclWitness& w) {
  PathWord prod = path_identity(g, w.target.start);
  for (const auto& [conj, sign] : w.factors) {
    PathWord piece = sign >= 0 ? w.source : path_inv(g, w.source);
    prod = path_mul(g, prod, path_conjugate(g, conj, piece));
  }
  return path_equal(g, prod, w.target);
}

NclWitness ncl_u_from_v(const MagnusPairFixture& f) {
  const auto& g = f.graph;
  NclWitness w;
  w.target = f.u;
  w.source = f.v;
  PathWord ea_back = make_cross(g, 0, 1);
  w.factors.push_back({path_identity(g, g.base()), +1});
  w.factors.push_back({path_mul(g, make_cross(g, 1, 0), ea_back), -1});
  w.factors.push_back({path_mul(g, make_cross(g, 2, 0), ea_back), +1});
  return w;
}

NclWitness ncl_v_from_u(const MagnusPairFixture& f) {
  const auto& g = f.graph;
  NclWitness w;
  w.target = f.v;
  w.source = f.u;
  // outer route from the base through the pqr edge to the second surface
  PathWord outer = path_mul(g, make_cross(g, 0, 0), make_cross(g, 7, 1));
  PathWord back = make_cross(g, 3, 1);  // from <u> down to the base
  w.factors.push_back({path_mul(g, outer, path_mul(g, make_cross(g, 4, 0), back)), +1});
  w.factors.push_back({path_mul(g, outer, path_mul(g, make_cross(g, 5, 0), back)), -1});
  w.factors.push_back({path_mul(g, outer, path_mul(g, make_cross(g, 6, 0), back)), +1});
  return w;
}

MagnusReport verify_magnus_pair(const MagnusPairFixture& f) {
  MagnusReport r;
  auto fail = [&](const std::string& m) { r.failures.push_back(m); };

  auto direct = are_conjugate_elements(f.graph, f.u, f.v);
  auto inverse = are_conjugate_elements(f.graph, f.u, path_inv(f.graph, f.v));
  r.non_conjugate = !direct.conjugate && !inverse.conjugate;
  if (!r.non_conjugate) fail("u and v are conjugate up to inversion");

  r.ncl_u_from_v = verify_ncl(f.graph, ncl_u_from_v(f));
  if (!r.ncl_u_from_v) fail("normal closure witness for u in <<v>> fails");
  r.ncl_v_from_u = verify_ncl(f.graph, ncl_v_from_u(f));
  if (!r.ncl_v_from_u) fail("normal closure witness for v in <<u>> fails");

  auto strict = check_strict(f.graph, f.rho, f.qh_vertices);
  r.strict = strict.verdict;
  for (const auto& m : strict.failures) fail("strict map: " + m);
  r.surjective = analyze(f.rho.hom).surjective;
  if (!r.surjective) fail("strict map is not onto");

  Word iu = f.rho.apply(f.graph, f.u);
  Word iv = f.rho.apply(f.graph, f.v);
  r.images_conjugate = static_cast<bool>(are_conjugate(iu, iv, true));
  if (!r.images_conjugate) fail("images of u and v are not conjugate in the target");

  r.verdict = r.non_conjugate && r.ncl_u_from_v && r.ncl_v_from_u && r.strict && r.surjective &&
              r.images_conjugate;
  return r;
}

std::optional<GogHom> find_strict_map(const MagnusPairFixture& f, int max_image_length,
                                      std::uint64_t seed) {
  if (max_image_length < 1) return std::nullopt;
  std::mt19937_64 rng(seed);
  for (int tries = 0; tries < 500; ++tries) {
    Word A = rand_word(f.f3, rng, 1, max_image_length);
    Word Tb = rand_word(f.f3, rng, 1, max_image_length);
    Word Sq = rand_word(f.f3, rng, 1, max_image_length);
    auto imgs = fig1_images(A, Tb, Sq);
    if (!imgs) continue;
    try {
      GogHom h = make_gog_hom(f.graph, f.pres, f.f3, *imgs);
      if (check_strict(f.graph, h, f.qh_vertices).verdict && analyze(h.hom).surjective) return h;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

CDoubleFixture c_double(const Word& w, bool c_test_assumed) {
  if (w.trivial()) throw Error("c_double: trivial word");
  if (primitive_root(w).exponent != 1) throw Error("c_double: word is a proper power");
  CDoubleFixture f;
  f.w = w;
  f.f = w.alphabet();
  if (f.f->rank() != 2) throw Error("c_double: word must be over a rank-2 free group");
  f.mirror = make_alphabet("M", {"r", "s"});
  f.c_test_assumed = c_test_assumed;
  Word wm = Word::from_syllables(f.mirror, w.syllables());
  f.graph = GraphOfGroups({{"X", VertexGroup::free(f.f)}, {"R", VertexGroup::free(f.mirror)}},
                          {GogEdge{"e", {0, 1}, {gelem_word(w), gelem_word(wm)}, true, false}}, 0);
  f.graph.require_valid();
  f.pres = pi1_presentation(f.graph);
  Word x = Word::letter(f.f, 0), y = Word::letter(f.f, 1);
  f.retraction = make_gog_hom(f.graph, f.pres, f.f, {x, y, x, y});
  return f;
}

Word mirror_word(const CDoubleFixture& f, const Word& left) {
  if (!same_alphabet(left.alphabet(), f.f)) throw Error("mirror_word: alphabet mismatch");
  return Word::from_syllables(f.mirror, left.syllables());
}

bool mirror_left_admissible(const CDoubleFixture& f, const Word& left, int bound) {
  for (int n = -bound; n <= bound; ++n)
    if (are_conjugate(left, power(f.w, n), true)) return false;
  return true;
}

std::vector<GogHom> cdouble_hom_family(const CDoubleFixture& f, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GogHom> out;
  bool w_in_commutator = in_commutator_subgroup(f.w);
  std::uniform_int_distribution<int> nd(-3, 3);
  std::uniform_int_distribution<int> kd(-2, 2);
  while (static_cast<int>(out.size()) < count) {
    int type = static_cast<int>(out.size()) % 3;
    if (type == 2 && !w_in_commutator) type = 0;
    std::vector<Word> imgs;
    if (type == 2) {
      Word x = Word::letter(f.f, 0);
      for (int i = 0; i < 4; ++i) imgs.push_back(power(x, kd(rng)));
    } else {
      Word e1 = rand_word(f.f, rng, 0, 4);
      Word e2 = rand_word(f.f, rng, 0, 4);
      if (type == 0) {
        imgs = {e1, e2, e1, e2};
      } else {
        Word W = FreeHom(f.f, f.f, {e1, e2}).apply(f.w);
        Word Wn = power(W, nd(rng));
        imgs = {e1, e2, conjugate(Wn, e1), conjugate(Wn, e2)};
      }
    }
    out.push_back(make_gog_hom(f.graph, f.pres, f.f, std::move(imgs)));
  }
  return out;
}

CentralizerEmbedding centralizer_embedding(const CDoubleFixture& f) {
  CentralizerEmbedding emb;
  emb.hnn = GraphOfGroups({{"V", VertexGroup::free(f.f)}},
                          {GogEdge{"t", {0, 0}, {gelem_word(f.w), gelem_word(f.w)}, false, false}},
                          0);
  emb.hnn.require_valid();
  emb.fixture = &f;
  Word x = Word::letter(f.f, 0), y = Word::letter(f.f, 1);
  auto plain = [&](const Word& w) { return path_elem(emb.hnn, 0, gelem_word(w)); };
  auto conjugated = [&](const Word& w) {
    PathWord p = make_cross(emb.hnn, 0, 1);
    p.steps[0].elem = gelem_word(w);
    return path_mul(emb.hnn, p, make_cross(emb.hnn, 0, 0));
  };
  emb.images = {plain(x), plain(y), conjugated(x), conjugated(y)};
  return emb;
}

PathWord CentralizerEmbedding::apply(const Word& dword) const {
  PathWord out = path_identity(hnn, 0);
  for (const auto& s : dword.syllables()) {
    if (s.gen < 0 || s.gen >= static_cast<int>(images.size()))
      throw Error("embedding: generator out of range");
    if (abs(s.exp) > Int(4096)) throw Error("embedding: exponent too large");
    const PathWord& img = images[static_cast<std::size_t>(s.gen)];
    PathWord piece = s.exp > 0 ? img : path_inv(hnn, img);
    long reps = static_cast<long>(abs(s.exp));
    for (long i = 0; i < reps; ++i) out = path_mul(hnn, out, piece);
  }
  return normal_form(hnn, out);
}

bool is_t_syllabic(const GraphOfGroups& hnn, const PathWord& p) {
  PathWord nf = normal_form(hnn, p);
  if (nf.steps.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < nf.steps.size(); ++i)
    if (nf.steps[i].dir != (i % 2 == 0 ? 1 : 0)) return false;
  return true;
}

CDoubleReport verify_c_double(const CDoubleFixture& f, int hom_count, int mirror_count,
                              std::uint64_t seed) {
  CDoubleReport rep;
  auto family = cdouble_hom_family(f, hom_count, seed);
  rep.homs_checked = static_cast<int>(family.size());

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<Word> lefts;
  int attempts = 0;
  while (static_cast<int>(lefts.size()) < mirror_count && attempts < 10000 * mirror_count) {
    ++attempts;
    Word g = Word::identity(f.f);
    int parts = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < parts; ++i)
      g = multiply(g, commutator(rand_word(f.f, rng, 1, 3), rand_word(f.f, rng, 1, 3)));
    if (g.trivial() || !mirror_left_admissible(f, g, 4)) continue;
    lefts.push_back(g);
  }
  rep.mirror_pairs_checked = static_cast<int>(lefts.size());
  if (rep.mirror_pairs_checked < mirror_count)
    rep.failures.push_back("mirror pair sampling exhausted");

  auto lift_left = [&](const Word& g) { return Word::from_syllables(f.pres.alpha, g.syllables()); };
  auto lift_mirror = [&](const Word& g) {
    std::vector<Syllable> syls = mirror_word(f, g).syllables();
    for (auto& s : syls) s.gen += 2;
    return Word::from_syllables(f.pres.alpha, syls);
  };

  rep.images_conjugate = true;
  for (std::size_t i = 0; i < lefts.size(); ++i) {
    Word lw = lift_left(lefts[i]), mw = lift_mirror(lefts[i]);
    for (std::size_t k = 0; k < family.size(); ++k) {
      Word il = family[k].hom.apply(lw), im = family[k].hom.apply(mw);
      if (!are_conjugate(il, im)) {
        rep.images_conjugate = false;
        rep.failures.push_back("pair " + std::to_string(i) + " splits under hom " +
                               std::to_string(k));
      }
    }
  }

  auto emb = centralizer_embedding(f);
  PathWord t = make_cross(emb.hnn, 0, 0);
  PathWord t_inv = path_inv(emb.hnn, t);
  rep.embedding_syllabic = true;
  rep.mirror_conjugate_by_t = true;
  for (std::size_t i = 0; i < lefts.size(); ++i) {
    PathWord pl = emb.apply(lift_left(lefts[i]));
    PathWord pm = emb.apply(lift_mirror(lefts[i]));
    if (!is_t_syllabic(emb.hnn, pl) || !is_t_syllabic(emb.hnn, pm)) {
      rep.embedding_syllabic = false;
      rep.failures.push_back("pair " + std::to_string(i) + " image not t-syllabic");
    }
    if (!path_equal(emb.hnn, pm, path_conjugate(emb.hnn, t_inv, pl))) {
      rep.mirror_conjugate_by_t = false;
      rep.failures.push_back("pair " + std::to_string(i) + " mirror not t-conjugate");
    }
  }
  for (int i = 0; i < mirror_count; ++i) {
    Word mixed = rand_word(f.pres.alpha, rng, 1, 6);
    if (!is_t_syllabic(emb.hnn, emb.apply(mixed))) {
      rep.embedding_syllabic = false;
      rep.failures.push_back("mixed sample " + std::to_string(i) + " not t-syllabic");
    }
  }

  rep.verdict = rep.failures.empty() && rep.images_conjugate && rep.embedding_syllabic &&
                rep.mirror_conjugate_by_t;
  return rep;
}

Fig3Fixture fig3_tower() {
  Fig3Fixture f;
  f.magnus = magnus_pair_gog();
  const auto& m = f.magnus;

  Word wu = Word::letter(m.graph.vg(m.vu).alpha, 0);
  Word wv = Word::letter(m.graph.vg(m.vv).alpha, 0);
  Word rho_u = m.rho.hom.images()[0];
  Word rho_v = m.rho.hom.images()[1];

  auto vertices = m.graph.vertices();
  vertices.push_back({"F3", VertexGroup::free(m.f3)});
  auto edges = m.graph.edges();
  edges.push_back(GogEdge{"e_u", {m.vu, 4}, {gelem_word(wu), gelem_word(rho_u)}, true, false});
  edges.push_back(GogEdge{"s", {m.vv, 4}, {gelem_word(wv), gelem_word(rho_v)}, false, false});
  f.s_edge = static_cast<int>(edges.size()) - 1;
  f.graph = GraphOfGroups(std::move(vertices), std::move(edges), m.graph.base());
  f.graph.require_valid();
  f.graph.assumptions = m.graph.assumptions;
  f.pres = pi1_presentation(f.graph);
  f.f3_vertex = 4;
  f.u = cross_loop(f.graph, 3, gelem_word(wu));
  f.v = cross_loop(f.graph, 0, gelem_word(wv));
  f.rho_star = fig3_retraction(f, 0);
  return f;
}

GogHom fig3_retraction(const Fig3Fixture& f, const Int& n) {
  const auto& m = f.magnus;
  Word z = Word::letter(m.f3, 0);
  const auto& rho = m.rho.hom.images();  // u v a b c p q r t_b t_c s_q s_r s_w
  std::vector<Word> imgs(rho.begin(), rho.begin() + 8);
  imgs.push_back(z);                      // z
  imgs.push_back(Word::letter(m.f3, 1));  // g
  imgs.push_back(Word::letter(m.f3, 2));  // h
  imgs.insert(imgs.end(), rho.begin() + 8, rho.end());
  imgs.push_back(power(z, n));  // stable letter s
  return make_gog_hom(f.graph, f.pres, m.f3, std::move(imgs));
}

GogHom fig3_family_member(const Fig3Fixture& f, const Int& n) {
  const auto& m = f.magnus;
  Word z = Word::letter(m.f3, 0);
  Word zn = power(z, n);
  auto rho = fig1_images(z, multiply(Word::letter(m.f3, 1), zn),
                         multiply(Word::letter(m.f3, 2), zn));
  if (!rho) throw Error("fig3 family parameters are inconsistent");
  std::vector<Word> imgs(rho->begin(), rho->begin() + 8);
  imgs.push_back(z);
  imgs.push_back(Word::letter(m.f3, 1));
  imgs.push_back(Word::letter(m.f3, 2));
  imgs.insert(imgs.end(), rho->begin() + 8, rho->end());
  imgs.push_back(zn);
  return make_gog_hom(f.graph, f.pres, m.f3, std::move(imgs));
}

}  // namespace serrelab
