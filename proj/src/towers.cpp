#include "serrelab/towers.hpp"

#include <random>

namespace serrelab {

namespace {

Word remap(const Word& w, const AlphabetRef& target) {
  std::vector<Syllable> syls;
  for (const auto& s : w.syllables()) {
    int idx = target->index_of(w.alphabet()->generators()[static_cast<std::size_t>(s.gen)]);
    if (idx < 0) throw Error("remap: generator has no image name in target alphabet");
    syls.push_back({idx, s.exp});
  }
  return Word::from_syllables(target, std::move(syls));
}

bool images_nonabelian(const std::vector<Word>& images) {
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (!commutator(images[i], images[j]).trivial()) return true;
  return false;
}

}  // namespace

ExtensionLevel ExtensionLevel::abelian(Word attach_word, int rank) {
  ExtensionLevel l;
  l.kind = Kind::Abelian;
  l.attach = std::move(attach_word);
  l.a_rank = rank;
  return l;
}

ExtensionLevel ExtensionLevel::quadratic(int g, std::vector<Word> boundary,
                                         std::vector<Word> images) {
  ExtensionLevel l;
  l.kind = Kind::Quadratic;
  l.genus = g;
  l.boundary_attach = std::move(boundary);
  l.surface_images = std::move(images);
  return l;
}

bool operator==(const ExtensionLevel& a, const ExtensionLevel& b) {
  return a.kind == b.kind && a.attach == b.attach && a.a_rank == b.a_rank && a.genus == b.genus &&
         a.boundary_attach == b.boundary_attach && a.surface_images == b.surface_images;
}

std::vector<Word> quadratic_boundary_words(const AlphabetRef& surface, int genus, int boundary) {
  std::vector<Word> out;
  Word last = Word::identity(surface);
  for (int k = 0; k < genus; ++k)
    last = multiply(last, commutator(Word::letter(surface, 2 * k), Word::letter(surface, 2 * k + 1)));
  for (int i = 0; i + 1 < boundary; ++i) {
    Word s = Word::letter(surface, 2 * genus + i);
    out.push_back(s);
    last = multiply(last, s);
  }
  out.push_back(last);
  return out;
}

int Tower::abelian_param_count() const {
  int n = 0;
  for (const auto& l : levels)
    if (l.kind == ExtensionLevel::Kind::Abelian) n += l.a_rank;
  return n;
}

Tower build_tower(AlphabetRef base, std::vector<ExtensionLevel> levels) {
  Tower t;
  t.base = std::move(base);
  t.levels = std::move(levels);
  t.ice = true;

  std::vector<std::pair<std::string, VertexGroup>> vertices{
      {t.base->name(), VertexGroup::free(t.base)}};
  std::vector<GogEdge> edges;
  t.graphs.push_back(GraphOfGroups(vertices, edges, 0));
  t.pres.push_back(pi1_presentation(t.graphs.back()));

  for (std::size_t j = 0; j < t.levels.size(); ++j) {
    const ExtensionLevel& l = t.levels[j];
    std::string tag = std::to_string(j + 1);
    int vj = static_cast<int>(j) + 1;
    if (l.kind == ExtensionLevel::Kind::Abelian) {
      if (l.a_rank < 1) throw Error("abelian level " + tag + ": rank must be positive");
      if (!l.attach.trivial() && !same_alphabet(l.attach.alphabet(), t.base))
        throw Error("abelian level " + tag + ": attach word is not over the base");
      if (l.attach.trivial()) {
        vertices.push_back({"A" + tag, VertexGroup::abelian(l.a_rank)});
        GogEdge e{"e" + tag,
                  {0, vj},
                  {gelem_word(Word::identity(t.base)),
                   gelem_vec(std::vector<Int>(static_cast<std::size_t>(l.a_rank), Int(0)))},
                  true,
                  true};
        edges.push_back(std::move(e));
      } else {
        vertices.push_back({"A" + tag, VertexGroup::abelian(l.a_rank + 1)});
        std::vector<Int> e0(static_cast<std::size_t>(l.a_rank + 1), Int(0));
        e0[0] = 1;
        edges.push_back(
            GogEdge{"e" + tag, {0, vj}, {gelem_word(l.attach), gelem_vec(std::move(e0))}, true, false});
      }
    } else {
      int b = static_cast<int>(l.boundary_attach.size());
      int rank = 2 * l.genus + b - 1;
      if (b < 1) throw Error("quadratic level " + tag + ": needs a boundary word");
      if (rank < 1) throw Error("quadratic level " + tag + ": surface group is trivial");
      std::vector<std::string> gens;
      for (int k = 1; k <= l.genus; ++k) {
        gens.push_back("x" + tag + "_" + std::to_string(k));
        gens.push_back("y" + tag + "_" + std::to_string(k));
      }
      for (int k = 1; k < b; ++k) gens.push_back("s" + tag + "_" + std::to_string(k));
      AlphabetRef surface = make_alphabet("S" + tag, gens);
      if (static_cast<int>(l.surface_images.size()) != rank)
        throw Error("quadratic level " + tag + ": expected " + std::to_string(rank) +
                    " retraction images");
      for (const auto& img : l.surface_images)
        if (!same_alphabet(img.alphabet(), t.base))
          throw Error("quadratic level " + tag + ": retraction image is not over the base");
      FreeHom psi(surface, t.base, l.surface_images);
      auto dwords = quadratic_boundary_words(surface, l.genus, b);
      for (int i = 0; i < b; ++i) {
        if (!same_alphabet(l.boundary_attach[static_cast<std::size_t>(i)].alphabet(), t.base))
          throw Error("quadratic level " + tag + ": boundary word is not over the base");
        if (psi.apply(dwords[static_cast<std::size_t>(i)]) !=
            l.boundary_attach[static_cast<std::size_t>(i)])
          throw Error("quadratic level " + tag + ": retraction images miss boundary word " +
                      std::to_string(i + 1));
      }
      if (!images_nonabelian(l.surface_images))
        throw Error("quadratic level " + tag + ": surface image is abelian");
      vertices.push_back({"S" + tag, VertexGroup::free(surface)});
      for (int i = 0; i < b; ++i)
        edges.push_back(GogEdge{"q" + tag + "_" + std::to_string(i + 1),
                                {vj, 0},
                                {gelem_word(dwords[static_cast<std::size_t>(i)]),
                                 gelem_word(l.boundary_attach[static_cast<std::size_t>(i)])},
                                i == 0,
                                false});
      t.ice = false;
    }
    t.graphs.push_back(GraphOfGroups(vertices, edges, 0));
    t.graphs.back().require_valid();
    t.pres.push_back(pi1_presentation(t.graphs.back()));
  }
  return t;
}

FreeHom level_retraction(const Tower& t, int i) {
  if (i < 1 || i > t.height()) throw Error("level_retraction: index out of range");
  const Presentation& dom = t.pres[static_cast<std::size_t>(i)];
  const Presentation& cod = t.pres[static_cast<std::size_t>(i - 1)];
  const ExtensionLevel& l = t.levels[static_cast<std::size_t>(i - 1)];

  int voff = dom.vertex_offset[static_cast<std::size_t>(i)];
  const VertexGroup& vg = t.graphs[static_cast<std::size_t>(i)].vg(i);
  int vcount = vg.kind == VertexGroup::Kind::Free ? vg.alpha->rank() : vg.ab_rank;

  std::vector<Word> images;
  for (int gidx = 0; gidx < dom.alpha->rank(); ++gidx) {
    if (gidx >= voff && gidx < voff + vcount) {
      int local = gidx - voff;
      if (l.kind == ExtensionLevel::Kind::Abelian) {
        images.push_back(l.attach.trivial() ? Word::identity(cod.alpha) : remap(l.attach, cod.alpha));
      } else {
        images.push_back(remap(l.surface_images[static_cast<std::size_t>(local)], cod.alpha));
      }
      continue;
    }
    const std::string& name = dom.alpha->generators()[static_cast<std::size_t>(gidx)];
    int idx = cod.alpha->index_of(name);
    // level-i stable letters are the only other new generators; they retract
    // to the identity since the surface images already hit the boundary words
    images.push_back(idx >= 0 ? Word::letter(cod.alpha, idx) : Word::identity(cod.alpha));
  }
  FreeHom r(dom.alpha, cod.alpha, std::move(images));
  for (int gidx = 0; gidx < cod.alpha->rank(); ++gidx) {
    const std::string& name = cod.alpha->generators()[static_cast<std::size_t>(gidx)];
    int up = dom.alpha->index_of(name);
    if (up < 0 || r.images()[static_cast<std::size_t>(up)] != Word::letter(cod.alpha, gidx))
      throw Error("level_retraction: not the identity on the level below");
  }
  return r;
}

GogHom ice_retraction(const Tower& t, const std::vector<Int>& exponents) {
  if (!t.ice) throw Error("ice_retraction: tower has a quadratic level");
  if (static_cast<int>(exponents.size()) != t.abelian_param_count())
    throw Error("ice_retraction: expected " + std::to_string(t.abelian_param_count()) +
                " exponents");
  std::vector<Word> images;
  for (int i = 0; i < t.base->rank(); ++i) images.push_back(Word::letter(t.base, i));
  std::size_t param = 0;
  for (const auto& l : t.levels) {
    if (l.attach.trivial()) {
      for (int k = 0; k < l.a_rank; ++k, ++param) images.push_back(Word::identity(t.base));
    } else {
      images.push_back(l.attach);  // the attach coordinate
      for (int k = 0; k < l.a_rank; ++k, ++param) images.push_back(power(l.attach, exponents[param]));
    }
  }
  GogHom h = make_gog_hom(t.top(), t.top_pres(), t.base, std::move(images));
  for (int i = 0; i < t.base->rank(); ++i)
    if (h.hom.images()[static_cast<std::size_t>(i)] != Word::letter(t.base, i))
      throw Error("ice_retraction: not the identity on the base");
  return h;
}

GogHom diagonal_retraction(const Tower& t, const Int& n) {
  return ice_retraction(t, std::vector<Int>(static_cast<std::size_t>(t.abelian_param_count()), n));
}

SeparationReport separation_experiment(const Tower& t, const std::vector<PathWord>& S, int n_max,
                                       const std::vector<int>& indivisible_flags) {
  const GraphOfGroups& g = t.top();
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      auto res = are_conjugate_elements(g, S[i], S[j]);
      if (res.conjugate)
        throw Error("separation: elements " + std::to_string(i) + " and " + std::to_string(j) +
                    " are conjugate in the tower; conjugator " + path_str(g, *res.conjugator));
    }

  SeparationReport rep;
  std::vector<bool> indiv(indivisible_flags.size(), true);
  for (int n = 1; n <= n_max; ++n) {
    GogHom r = diagonal_retraction(t, n);
    for (std::size_t k = 0; k < indivisible_flags.size(); ++k) {
      Word img = r.apply(g, S[static_cast<std::size_t>(indivisible_flags[k])]);
      if (primitive_root(img).exponent != 1) indiv[k] = false;
    }
    if (!rep.minimal_n) {
      rep.n_scanned = n;
      std::vector<Word> images;
      for (const auto& s : S) images.push_back(r.apply(g, s));
      std::vector<std::pair<int, int>> collapsed;
      for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = i + 1; j < S.size(); ++j)
          if (are_conjugate(images[i], images[j]))
            collapsed.push_back({static_cast<int>(i), static_cast<int>(j)});
      if (collapsed.empty())
        rep.minimal_n = n;
      else
        rep.collapsed.push_back({n, std::move(collapsed)});
    }
  }
  for (std::size_t k = 0; k < indivisible_flags.size(); ++k)
    rep.indivisibility.push_back({indivisible_flags[k], static_cast<bool>(indiv[k])});
  return rep;
}

DiscriminationReport discrimination_experiment(const Tower& t, const std::vector<PathWord>& P,
                                               int n_max) {
  const GraphOfGroups& g = t.top();
  for (std::size_t i = 0; i < P.size(); ++i)
    if (path_trivial(g, P[i]))
      throw Error("discrimination: element " + std::to_string(i) + " is the identity");

  DiscriminationReport rep;
  for (int n = 1; n <= n_max && !rep.minimal_n; ++n) {
    rep.n_scanned = n;
    GogHom r = diagonal_retraction(t, n);
    std::vector<int> killed;
    for (std::size_t i = 0; i < P.size(); ++i)
      if (r.apply(g, P[i]).trivial()) killed.push_back(static_cast<int>(i));
    if (killed.empty())
      rep.minimal_n = n;
    else
      rep.killed.push_back({n, std::move(killed)});
  }
  return rep;
}

Prop51Report prop51_sampling(const Fig3Fixture& f, int pair_count, std::uint64_t seed, int n_max) {
  const GraphOfGroups& mg = f.magnus.graph;
  const Presentation& mp = f.magnus.pres;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, 4), ld(0, 2 * mp.alpha->rank() - 1);

  auto excluded = [&](const PathWord& p) {
    if (path_trivial(mg, p)) return true;
    for (const PathWord* ref : {&f.magnus.u, &f.magnus.v}) {
      if (are_conjugate_elements(mg, p, *ref).conjugate) return true;
      if (are_conjugate_elements(mg, p, path_inv(mg, *ref)).conjugate) return true;
    }
    return false;
  };
  auto sample = [&]() {
    for (;;) {
      std::vector<Letter> ls;
      int n = len(rng);
      for (int i = 0; i < n; ++i) ls.push_back(ld(rng));
      PathWord p = word_to_path(mg, mp, Word::from_letters(mp.alpha, ls));
      if (!excluded(p)) return p;
    }
  };

  std::vector<GogHom> family;
  for (int n = 1; n <= n_max; ++n) family.push_back(fig3_family_member(f, n));

  Prop51Report rep;
  rep.pair_count = pair_count;
  rep.n_max = n_max;
  rep.all_separated = true;
  for (int k = 0; k < pair_count; ++k) {
    PathWord p = sample(), q = sample();
    while (are_conjugate_elements(mg, p, q).conjugate ||
           are_conjugate_elements(mg, p, path_inv(mg, q)).conjugate)
      q = sample();
    int found = -1;
    for (int n = 1; n <= n_max && found < 0; ++n) {
      Word ip = family[static_cast<std::size_t>(n - 1)].apply(f.graph, p);
      Word iq = family[static_cast<std::size_t>(n - 1)].apply(f.graph, q);
      if (!are_conjugate(ip, iq, true)) found = n;
    }
    rep.separating_n.push_back(found);
    if (found < 0) rep.all_separated = false;
  }

  rep.uv_never_separated = true;
  for (int n = 1; n <= n_max; ++n) {
    Word iu = family[static_cast<std::size_t>(n - 1)].apply(f.graph, f.u);
    Word iv = family[static_cast<std::size_t>(n - 1)].apply(f.graph, f.v);
    if (!are_conjugate(iu, iv, true)) rep.uv_never_separated = false;
  }
  return rep;
}

}  // namespace serrelab
