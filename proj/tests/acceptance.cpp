// Acceptance run: one criterion per section, each printed as a PASS/FAIL
// line. Exit status is the number of failed criteria.

#include "serrelab/cli.hpp"

#include "docgen.h"

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace serrelab;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(SERRELAB_FIXTURES) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Word rand_reduced(const AlphabetRef& a, std::mt19937_64& rng, int min_len, int max_len) {
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<int> ld(0, 2 * a->rank() - 1);
  for (;;) {
    int n = len(rng);
    std::vector<Letter> ls;
    for (int i = 0; i < n; ++i) ls.push_back(ld(rng));
    Word w = Word::from_letters(a, ls);
    if (min_len == 0 || !w.trivial()) return w;
  }
}

/// All freely reduced letter strings of length <= max_len, including the
/// empty one.
std::vector<std::vector<Letter>> reduced_strings(int rank, int max_len) {
  std::vector<std::vector<Letter>> out{{}};
  std::vector<Letter> cur;
  std::function<void()> go = [&] {
    if (static_cast<int>(cur.size()) == max_len) return;
    for (Letter l = 0; l < 2 * rank; ++l) {
      if (!cur.empty() && cur.back() == letter_inv(l)) continue;
      cur.push_back(l);
      out.push_back(cur);
      go();
      cur.pop_back();
    }
  };
  go();
  return out;
}

// ------------------------------------------------------------------
// criterion 2: independent conjugacy oracle for free groups
// ------------------------------------------------------------------

std::vector<Letter> naive_cyclic_reduce(std::vector<Letter> v) {
  while (v.size() >= 2 && v.front() == letter_inv(v.back())) {
    v.erase(v.begin());
    v.pop_back();
  }
  return v;
}

std::vector<Letter> naive_min_rotation(const std::vector<Letter>& v) {
  if (v.empty()) return v;
  std::vector<Letter> best = v;
  std::vector<Letter> cur = v;
  for (std::size_t i = 1; i < v.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

std::vector<Letter> naive_invert(const std::vector<Letter>& v) {
  std::vector<Letter> out;
  for (auto it = v.rbegin(); it != v.rend(); ++it) out.push_back(letter_inv(*it));
  return out;
}

std::string letters_key(const std::vector<Letter>& v) {
  std::string s;
  for (Letter l : v) s.push_back(static_cast<char>('A' + l));
  return s;
}

std::string oracle_conj_key(const std::vector<Letter>& v) {
  return letters_key(naive_min_rotation(naive_cyclic_reduce(v)));
}

bool criterion2(std::string& note) {
  auto F2 = make_alphabet("F", {"x", "y"});
  auto all6 = reduced_strings(2, 6);
  int mismatches = 0;

  // The canonical-key partitions must coincide; two functional maps between
  // key spaces decide agreement on every one of the |all6|^2 pairs.
  std::map<std::string, std::string> e2o, o2e;
  for (const auto& ls : all6) {
    Word w = Word::from_letters(F2, ls);
    std::string ek = letters_key(cyclic_canonical(w).canonical.letters());
    std::string ok = oracle_conj_key(ls);
    auto [ite, ne] = e2o.try_emplace(ek, ok);
    if (!ne && ite->second != ok) ++mismatches;
    auto [ito, no] = o2e.try_emplace(ok, ek);
    if (!no && ito->second != ek) ++mismatches;
  }

  // Literal conjugator enumeration at small scale.
  auto all3 = reduced_strings(2, 3);
  std::vector<Word> short_words, conjugators;
  for (const auto& ls : all3) short_words.push_back(Word::from_letters(F2, ls));
  for (const auto& ls : all6) conjugators.push_back(Word::from_letters(F2, ls));
  int enum_pairs = 0;
  for (std::size_t i = 0; i < short_words.size(); ++i)
    for (std::size_t j = i; j < short_words.size(); ++j) {
      ++enum_pairs;
      bool oracle = false;
      for (const Word& c : conjugators)
        if (conjugate(c, short_words[j]) == short_words[i]) {
          oracle = true;
          break;
        }
      auto cert = are_conjugate(short_words[i], short_words[j]);
      if (cert.has_value() != oracle) ++mismatches;
      if (cert && !verify_certificate(*cert, short_words[i], short_words[j])) ++mismatches;
    }

  // Random longer pairs against the rotation oracle.
  std::mt19937_64 rng(20260826);
  int random_pairs = 1000;
  for (int k = 0; k < random_pairs; ++k) {
    Word a = rand_reduced(F2, rng, 1, 12);
    Word b;
    if (k % 2 == 0) {
      Word c = rand_reduced(F2, rng, 0, 6);
      b = conjugate(c, k % 4 == 0 ? a : invert(a));
    } else {
      b = rand_reduced(F2, rng, 1, 12);
    }
    std::string ka = oracle_conj_key(a.flatten()), kb = oracle_conj_key(b.flatten());
    std::string kbi = oracle_conj_key(naive_invert(b.flatten()));
    auto plain = are_conjugate(a, b);
    auto pm = are_conjugate(a, b, true);
    if (plain.has_value() != (ka == kb)) ++mismatches;
    if (pm.has_value() != (ka == kb || ka == kbi)) ++mismatches;
    if (plain && !verify_certificate(*plain, a, b)) ++mismatches;
    if (pm && !verify_certificate(*pm, a, b)) ++mismatches;
  }

  std::ostringstream os;
  os << all6.size() << " words keyed, " << enum_pairs << " enumerated pairs, " << random_pairs
     << " random pairs, " << mismatches << " mismatches";
  note = os.str();
  return mismatches == 0;
}

// ------------------------------------------------------------------
// criterion 3: stallings membership, Nielsen-Schreier, malnormality
// ------------------------------------------------------------------

/// All subgroup elements reachable through products whose intermediate
/// reduced length never exceeds max_len, closed to a fixpoint. Complete for
/// membership of short words over short generators.
std::set<Word> enumerate_subgroup(const AlphabetRef& alpha, const std::vector<Word>& gens,
                                  int max_len) {
  std::vector<Word> atoms;
  for (const Word& g : gens) {
    atoms.push_back(g);
    atoms.push_back(invert(g));
  }
  std::set<Word> out{Word(alpha)};
  std::vector<Word> frontier{Word(alpha)};
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (const Word& a : atoms) {
        Word p = multiply(w, a);
        if (p.length() > max_len) continue;
        if (out.insert(p).second) next.push_back(p);
      }
    frontier = std::move(next);
  }
  return out;
}

bool criterion3(std::string& note) {
  auto A = make_alphabet("F", {"a", "b"});
  Word a = Word::letter(A, 0), b = Word::letter(A, 1);
  std::mt19937_64 rng(909);
  int mismatches = 0, finite_cases = 0;

  std::vector<Word> universe;
  for (const auto& ls : reduced_strings(2, 3)) universe.push_back(Word::from_letters(A, ls));

  for (int s = 0; s < 100; ++s) {
    int ngens = 1 + static_cast<int>(rng() % 3);
    std::vector<Word> gens;
    for (int i = 0; i < ngens; ++i) gens.push_back(rand_reduced(A, rng, 1, 4));
    auto g = SubgroupGraph::fold(A, gens);
    auto elements = enumerate_subgroup(A, gens, 8);
    for (const Word& w : elements)
      if (!g.contains(w)) ++mismatches;
    for (const Word& w : universe)
      if (g.contains(w) != (elements.count(w) > 0)) ++mismatches;
    auto ri = g.rank_and_index();
    if (ri.index) {
      ++finite_cases;
      if (Int(ri.rank) != *ri.index * (A->rank() - 1) + 1) ++mismatches;
    }
  }

  // Explicit finite-index subgroups.
  struct Fin {
    std::vector<Word> gens;
    int index, rank;
  };
  std::vector<Fin> fins = {
      {{a, b}, 1, 2},
      {{a, conjugate(b, a), power(b, 2)}, 2, 3},
      {{power(a, 3), b, conjugate(a, b), conjugate(power(a, 2), b)}, 3, 4},
  };
  for (const auto& fin : fins) {
    auto g = SubgroupGraph::fold(A, fin.gens);
    auto ri = g.rank_and_index();
    if (!ri.index || *ri.index != fin.index || ri.rank != fin.rank) ++mismatches;
    ++finite_cases;
  }

  // Malnormality fixtures.
  std::vector<Word> h53 = {commutator(a, b),
                           multiply(multiply(power(b, -2), invert(a)), multiply(power(b, 2), a))};
  if (!SubgroupGraph::fold(A, h53).is_malnormal().malnormal) ++mismatches;
  auto sq = SubgroupGraph::fold(A, {power(a, 2)});
  auto mal = sq.is_malnormal();
  if (mal.malnormal || !mal.witness || !mal.conjugator) {
    ++mismatches;
  } else {
    if (!sq.contains(*mal.witness)) ++mismatches;
    if (!sq.contains(conjugate(*mal.conjugator, *mal.witness))) ++mismatches;
    if (sq.contains(*mal.conjugator)) ++mismatches;
  }

  std::ostringstream os;
  os << "100 random subgroups, " << finite_cases << " finite-index cases, " << mismatches
     << " mismatches";
  note = os.str();
  return mismatches == 0;
}

// ------------------------------------------------------------------
// criterion 4: graph-of-groups conjugacy against conjugator enumeration
// ------------------------------------------------------------------

struct GogFixtureAC {
  std::string name;
  GraphOfGroups g;
  Presentation pres;
  std::vector<std::vector<int>> ab;  // abelianized image per presentation generator
  std::vector<std::vector<int>> extra;  // signed letter strings beyond the base pool
};

std::vector<int> ab_of(const GogFixtureAC& f, const Word& w) {
  std::vector<int> v(f.ab[0].size(), 0);
  for (const auto& s : w.syllables()) {
    long e = static_cast<long>(s.exp);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] += static_cast<int>(e) * f.ab[static_cast<std::size_t>(s.gen)][i];
  }
  return v;
}

GogFixtureAC amalgam_fixture() {
  GogFixtureAC f;
  f.name = "amalgam";
  auto F = make_alphabet("Fab", {"a", "b"});
  auto G = make_alphabet("Gcd", {"c", "d"});
  f.g = GraphOfGroups(
      {{"V", VertexGroup::free(F)}, {"W", VertexGroup::free(G)}},
      {GogEdge{"e", {0, 1}, {gelem_word(Word::letter(F, 0)), gelem_word(Word::letter(G, 0))},
               true, false}},
      0);
  f.g.require_valid();
  f.pres = pi1_presentation(f.g);
  f.ab = {{1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}};  // a, b, c(=a), d
  f.extra = {{1, 4, 2}, {2, 1, 4}, {1, -2, 4, 2}, {4, 1, -4, 2}, {2, 3, 4, -2}, {1, 2, 3, 4}};
  return f;
}

GogFixtureAC hnn_fixture() {
  GogFixtureAC f;
  f.name = "hnn";
  auto F = make_alphabet("F", {"x", "y"});
  Word w = commutator(Word::letter(F, 0), Word::letter(F, 1));
  f.g = GraphOfGroups({{"V", VertexGroup::free(F)}},
                      {GogEdge{"t", {0, 0}, {gelem_word(w), gelem_word(w)}, false, false}}, 0);
  f.g.require_valid();
  f.pres = pi1_presentation(f.g);
  f.ab = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};  // x, y, t
  f.extra = {{3, 1, -3, 2}, {-3, 1, 3}, {1, -2, 3, 2}, {3, 3, 1, -2}, {3, 1, 3, -2}, {1, 2, 3, -1}};
  return f;
}

/// Letters encoded as +-(generator index + 1); negative means inverse.
Word signed_word(const AlphabetRef& alpha, const std::vector<int>& signs) {
  Word w = Word::identity(alpha);
  for (int s : signs) w = multiply(w, Word::letter(alpha, std::abs(s) - 1, s < 0 ? -1 : 1));
  return w;
}

bool criterion4_fixture(const GogFixtureAC& f, std::ostringstream& os) {
  int mismatches = 0;

  // Distinct short elements: every lift of a word of letter length <= 2,
  // plus longer handpicked normal forms up to four syllables.
  std::vector<Word> raw;
  for (const auto& ls : reduced_strings(f.pres.alpha->rank(), 2))
    raw.push_back(Word::from_letters(f.pres.alpha, ls));
  for (const auto& ex : f.extra) raw.push_back(signed_word(f.pres.alpha, ex));
  std::vector<PathWord> pool;
  std::vector<Word> pool_words;
  for (const Word& w : raw) {
    PathWord p = normal_form(f.g, word_to_path(f.g, f.pres, w));
    bool seen = false;
    for (const PathWord& q : pool)
      if (path_equal(f.g, p, q)) {
        seen = true;
        break;
      }
    if (!seen) {
      pool.push_back(p);
      pool_words.push_back(w);
    }
  }

  // Conjugator enumeration: every freely reduced conjugator word of length
  // <= 6 over the presentation generators, applied innermost-first.
  std::vector<PathWord> letter_paths;
  for (int gen = 0; gen < f.pres.alpha->rank(); ++gen)
    for (int sgn : {1, -1})
      letter_paths.push_back(word_to_path(f.g, f.pres, Word::letter(f.pres.alpha, gen, sgn)));
  auto letter_inv_idx = [](std::size_t i) { return i ^ 1u; };

  std::vector<std::vector<int>> pool_ab;
  for (const Word& w : pool_words) pool_ab.push_back(ab_of(f, w));

  std::vector<std::set<std::size_t>> reach(pool.size());
  for (std::size_t qi = 0; qi < pool.size(); ++qi) {
    std::vector<std::size_t> candidates;
    for (std::size_t pi = 0; pi < pool.size(); ++pi)
      if (pool_ab[pi] == pool_ab[qi]) candidates.push_back(pi);
    reach[qi].insert(qi);
    std::function<void(const PathWord&, std::size_t, int)> go = [&](const PathWord& cur,
                                                                    std::size_t last, int depth) {
      if (depth == 6) return;
      for (std::size_t li = 0; li < letter_paths.size(); ++li) {
        if (depth > 0 && li == letter_inv_idx(last)) continue;
        PathWord next = normal_form(
            f.g, path_mul(f.g, letter_paths[li],
                          path_mul(f.g, cur, letter_paths[letter_inv_idx(li)])));
        for (std::size_t pi : candidates)
          if (reach[qi].count(pi) == 0 && path_equal(f.g, next, pool[pi])) reach[qi].insert(pi);
        go(next, li, depth + 1);
      }
    };
    go(pool[qi], 0, 0);
  }

  int positives = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i; j < pool.size(); ++j) {
      auto res = are_conjugate_elements(f.g, pool[i], pool[j]);
      bool oracle = reach[j].count(i) > 0 || reach[i].count(j) > 0;
      if (res.conjugate != oracle) ++mismatches;
      if (res.conjugate) {
        ++positives;
        if (!res.conjugator ||
            !path_equal(f.g, path_conjugate(f.g, *res.conjugator, pool[j]), pool[i]))
          ++mismatches;
      }
    }

  os << f.name << ": " << pool.size() << " elements, " << positives << " positive, "
     << mismatches << " mismatches; ";
  return mismatches == 0;
}

bool criterion4(std::string& note) {
  std::ostringstream os;
  bool ok = criterion4_fixture(amalgam_fixture(), os);
  ok = criterion4_fixture(hnn_fixture(), os) && ok;
  note = os.str();
  return ok;
}

// ------------------------------------------------------------------
// criterion 5: Theorem B at desk scale
// ------------------------------------------------------------------

bool criterion5(std::string& note) {
  auto F2 = make_alphabet("F", {"x", "y"});
  Word w = commutator(Word::letter(F2, 0), Word::letter(F2, 1));
  Tower t1 = build_tower(F2, {ExtensionLevel::abelian(w, 1)});
  Tower t2 = build_tower(
      F2, {ExtensionLevel::abelian(w, 1), ExtensionLevel::abelian(Word::letter(F2, 0), 1)});
  std::mt19937_64 rng(424242);
  int failures = 0;
  int worst_n = 0;

  auto run_pairs = [&](const Tower& t, int count) {
    const auto& alpha = t.top_pres().alpha;
    for (int k = 0; k < count; ++k) {
      PathWord p, q;
      for (;;) {
        p = normal_form(t.top(), word_to_path(t.top(), t.top_pres(),
                                              rand_reduced(alpha, rng, 1, 5)));
        q = normal_form(t.top(), word_to_path(t.top(), t.top_pres(),
                                              rand_reduced(alpha, rng, 1, 5)));
        if (path_trivial(t.top(), p) || path_trivial(t.top(), q)) continue;
        if (are_conjugate_elements(t.top(), p, q).conjugate) continue;
        break;
      }
      auto rep = separation_experiment(t, {p, q}, 16);
      if (!rep.minimal_n)
        ++failures;
      else
        worst_n = std::max(worst_n, *rep.minimal_n);
    }
  };
  run_pairs(t1, 50);
  run_pairs(t2, 25);

  // Indivisible elements g1 t g2 t^-1 whose image abelianization is
  // primitive: the gcd certificate makes indivisibility independent of the
  // engine, for every diagonal parameter.
  int indiv_ok = 0;
  const auto& alpha1 = t1.top_pres().alpha;
  int t_gen = alpha1->index_of("A1_1");
  for (int k = 0; k < 25; ++k) {
    Word g1, g2;
    for (;;) {
      g1 = rand_reduced(F2, rng, 1, 3);
      g2 = rand_reduced(F2, rng, 1, 3);
      auto v = exponent_vector(multiply(g1, g2));
      Int g = boost::multiprecision::gcd(abs(v[0]), abs(v[1]));
      if (g == 1) break;
    }
    Word word = Word::identity(alpha1);
    auto remap = [&](const Word& src) { return Word::from_syllables(alpha1, src.syllables()); };
    word = multiply(word, remap(g1));
    word = multiply(word, Word::letter(alpha1, t_gen));
    word = multiply(word, remap(g2));
    word = multiply(word, Word::letter(alpha1, t_gen, -1));
    PathWord gamma = word_to_path(t1.top(), t1.top_pres(), word);
    auto rep = separation_experiment(t1, {gamma}, 16, {0});
    if (rep.indivisibility.size() == 1 && rep.indivisibility[0].second) ++indiv_ok;
  }

  std::ostringstream os;
  os << "75 pairs, worst minimal_n " << worst_n << ", " << failures << " exhausted, " << indiv_ok
     << "/25 indivisible";
  note = os.str();
  return failures == 0 && indiv_ok == 25;
}

// ------------------------------------------------------------------

bool criterion1(std::string& note) {
  auto rep = verify_magnus_pair(magnus_pair_gog());
  std::ostringstream os;
  os << "non_conjugate " << rep.non_conjugate << ", ncl " << rep.ncl_u_from_v << "/"
     << rep.ncl_v_from_u << ", strict " << rep.strict << ", surjective " << rep.surjective
     << ", images_conjugate " << rep.images_conjugate;
  for (const auto& m : rep.failures) os << "; " << m;
  note = os.str();
  return rep.verdict;
}

bool criterion6(std::string& note) {
  auto F2 = make_alphabet("F", {"x", "y"});
  Word w = commutator(Word::letter(F2, 0), Word::letter(F2, 1));
  auto rep = verify_c_double(c_double(w, true), 102, 20, 77);
  std::ostringstream os;
  os << rep.homs_checked << " homs, " << rep.mirror_pairs_checked << " mirror pairs";
  for (const auto& m : rep.failures) os << "; " << m;
  note = os.str();
  return rep.verdict && rep.homs_checked >= 100 && rep.mirror_pairs_checked == 20;
}

bool criterion7(std::string& note) {
  auto rep = prop51_sampling(fig3_tower(), 20, 23, 16);
  std::ostringstream os;
  os << rep.pair_count << " pairs; separating n:";
  for (int n : rep.separating_n) os << " " << n;
  os << "; uv_never_separated " << rep.uv_never_separated;
  note = os.str();
  return rep.pair_count == 20 && rep.all_separated && rep.uv_never_separated;
}

bool criterion8(std::string& note) {
  int failures = 0;
  auto roundtrip = [&](const std::string& text) {
    Document d1 = parse(text);
    std::string r = render(d1);
    Document d2 = parse(r);
    if (!(d1 == d2) || render(d2) != r) ++failures;
  };
  std::vector<std::string> fixtures = {"basic.gg", "sec52.gg", "amalgam.gg", "height2.gg"};
  for (const auto& name : fixtures) roundtrip(slurp(fixture_path(name)));
  Gen gen(515);
  for (int i = 0; i < 200; ++i) roundtrip(gen.document());

  auto run_json = [](const std::vector<std::string>& args) {
    std::ostringstream o, e;
    run_cli(args, o, e);
    return o.str();
  };
  std::vector<std::string> sep = {"--format", "json", "separate", fixture_path("sec52.gg"),
                                  "--task", "separate_C"};
  if (run_json(sep) != run_json(sep)) ++failures;
  std::vector<std::string> cd = {"--format", "json", "--seed", "5", "verify",
                                 "c-double", "--count", "6", "--pairs", "2"};
  if (run_json(cd) != run_json(cd)) ++failures;

  std::ostringstream os;
  os << fixtures.size() << " fixtures + 200 generated round-tripped, reports byte-stable, "
     << failures << " failures";
  note = os.str();
  return failures == 0;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<bool(std::string&)> fn;
  };
  std::vector<Criterion> criteria = {
      {1, "magnus-pair suite", criterion1},
      {2, "free-group conjugacy oracle equivalence", criterion2},
      {3, "stallings membership, index, malnormality", criterion3},
      {4, "graph-of-groups conjugacy oracle equivalence", criterion4},
      {5, "tower separation at desk scale", criterion5},
      {6, "c-double homomorphism family and embedding", criterion6},
      {7, "fig 3 retraction family sampling", criterion7},
      {8, "dsl round-trip and report stability", criterion8},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
      ok = c.fn(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cout << "criterion " << c.id << ": " << (ok ? "PASS" : "FAIL") << "  " << c.title << " ("
              << ms << " ms)\n";
    if (!note.empty()) std::cout << "  " << note << "\n";
    if (!ok) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << "\n";
  return failed;
}
