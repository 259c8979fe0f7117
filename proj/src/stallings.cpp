#include "serrelab/stallings.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace serrelab {

namespace {

// Mutable graph during folding: arcs stored as (from, gen, to) triples with a
// union-find over vertices.
struct Builder {
  std::vector<int> parent;
  std::vector<std::array<int, 2>> arcs_ends;  // from, to
  std::vector<int> arcs_gen;

  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(b)] = a;
  }
  int fresh() {
    int v = static_cast<int>(parent.size());
    parent.push_back(v);
    return v;
  }
  void arc(int from, int gen, int to) {
    arcs_ends.push_back({from, to});
    arcs_gen.push_back(gen);
  }
};

}  // namespace

SubgroupGraph SubgroupGraph::fold(const AlphabetRef& alpha, const std::vector<Word>& generators) {
  if (!alpha || alpha->rank() == 0) throw Error("fold: empty alphabet");
  const int ngen = alpha->rank();

  Builder b;
  int base = b.fresh();
  for (const Word& w : generators) {
    if (!same_alphabet(w.alphabet(), alpha)) throw Error("fold: alphabet mismatch");
    if (w.trivial()) continue;
    std::vector<Letter> letters = w.flatten();
    int cur = base;
    for (std::size_t i = 0; i < letters.size(); ++i) {
      int next = (i + 1 == letters.size()) ? base : b.fresh();
      Letter l = letters[i];
      if (letter_inverse(l))
        b.arc(next, letter_gen(l), cur);
      else
        b.arc(cur, letter_gen(l), next);
      cur = next;
    }
  }

  // Fold: repeatedly identify targets of equal-labeled arcs sharing an
  // endpoint until no conflicts remain.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> out;  // (from, gen) -> to
    std::map<std::pair<int, int>, int> in;   // (to, gen) -> from
    for (std::size_t i = 0; i < b.arcs_gen.size(); ++i) {
      int from = b.find(b.arcs_ends[i][0]);
      int to = b.find(b.arcs_ends[i][1]);
      int gen = b.arcs_gen[i];
      auto [it1, fresh1] = out.try_emplace({from, gen}, to);
      if (!fresh1 && b.find(it1->second) != to) {
        b.unite(it1->second, to);
        changed = true;
        break;
      }
      auto [it2, fresh2] = in.try_emplace({to, gen}, from);
      if (!fresh2 && b.find(it2->second) != from) {
        b.unite(it2->second, from);
        changed = true;
        break;
      }
    }
  }

  // Collect folded vertices and transitions.
  std::map<int, int> id;  // representative -> dense index
  auto dense = [&](int v) {
    auto [it, fresh] = id.try_emplace(b.find(v), static_cast<int>(id.size()));
    (void)fresh;
    return it->second;
  };
  int dbase = dense(base);
  std::set<std::array<int, 3>> arcs;
  for (std::size_t i = 0; i < b.arcs_gen.size(); ++i)
    arcs.insert({dense(b.arcs_ends[i][0]), b.arcs_gen[i], dense(b.arcs_ends[i][1])});

  std::size_t nv = id.size();
  std::vector<std::vector<int>> fwd(nv, std::vector<int>(static_cast<std::size_t>(ngen), -1));
  std::vector<std::vector<int>> bwd(nv, std::vector<int>(static_cast<std::size_t>(ngen), -1));
  for (const auto& a : arcs) {
    fwd[static_cast<std::size_t>(a[0])][static_cast<std::size_t>(a[1])] = a[2];
    bwd[static_cast<std::size_t>(a[2])][static_cast<std::size_t>(a[1])] = a[0];
  }

  // Trim to the core: repeatedly drop non-base vertices of degree <= 1.
  std::vector<bool> alive(nv, true);
  auto degree = [&](int v) {
    int d = 0;
    for (int g = 0; g < ngen; ++g) {
      int t = fwd[static_cast<std::size_t>(v)][static_cast<std::size_t>(g)];
      if (t >= 0 && alive[static_cast<std::size_t>(t)]) ++d;
      int s = bwd[static_cast<std::size_t>(v)][static_cast<std::size_t>(g)];
      if (s >= 0 && alive[static_cast<std::size_t>(s)]) ++d;
    }
    return d;
  };
  bool trimmed = true;
  while (trimmed) {
    trimmed = false;
    for (std::size_t v = 0; v < nv; ++v) {
      if (!alive[v] || static_cast<int>(v) == dbase) continue;
      if (degree(static_cast<int>(v)) <= 1) {
        alive[v] = false;
        trimmed = true;
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (!alive[v])
      for (int g = 0; g < ngen; ++g) {
        int t = fwd[v][static_cast<std::size_t>(g)];
        if (t >= 0) bwd[static_cast<std::size_t>(t)][static_cast<std::size_t>(g)] = -1;
        int s = bwd[v][static_cast<std::size_t>(g)];
        if (s >= 0) fwd[static_cast<std::size_t>(s)][static_cast<std::size_t>(g)] = -1;
        fwd[v][static_cast<std::size_t>(g)] = bwd[v][static_cast<std::size_t>(g)] = -1;
      }

  // Canonical BFS renumbering from the base, exploring letters in the fixed
  // a, a^-1, b, b^-1 ... order.
  std::vector<int> order(nv, -1);
  std::vector<int> bfs;
  order[static_cast<std::size_t>(dbase)] = 0;
  bfs.push_back(dbase);
  for (std::size_t qi = 0; qi < bfs.size(); ++qi) {
    int v = bfs[qi];
    for (int g = 0; g < ngen; ++g)
      for (int dir = 0; dir < 2; ++dir) {
        int t = dir == 0 ? fwd[static_cast<std::size_t>(v)][static_cast<std::size_t>(g)]
                         : bwd[static_cast<std::size_t>(v)][static_cast<std::size_t>(g)];
        if (t >= 0 && order[static_cast<std::size_t>(t)] < 0) {
          order[static_cast<std::size_t>(t)] = static_cast<int>(bfs.size());
          bfs.push_back(t);
        }
      }
  }

  SubgroupGraph g;
  g.alpha_ = alpha;
  g.base_ = 0;
  g.fwd_.assign(bfs.size(), std::vector<int>(static_cast<std::size_t>(ngen), -1));
  g.bwd_.assign(bfs.size(), std::vector<int>(static_cast<std::size_t>(ngen), -1));
  for (std::size_t v = 0; v < nv; ++v) {
    if (order[v] < 0) continue;
    for (int gen = 0; gen < ngen; ++gen) {
      int t = fwd[v][static_cast<std::size_t>(gen)];
      if (t >= 0)
        g.fwd_[static_cast<std::size_t>(order[v])][static_cast<std::size_t>(gen)] =
            order[static_cast<std::size_t>(t)];
      int s = bwd[v][static_cast<std::size_t>(gen)];
      if (s >= 0)
        g.bwd_[static_cast<std::size_t>(order[v])][static_cast<std::size_t>(gen)] =
            order[static_cast<std::size_t>(s)];
    }
  }
  return g;
}

std::size_t SubgroupGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& row : fwd_)
    for (int t : row)
      if (t >= 0) ++e;
  return e;
}

int SubgroupGraph::trace(int v, Letter l) const {
  return letter_inverse(l) ? step_back(v, letter_gen(l)) : step(v, letter_gen(l));
}

bool SubgroupGraph::contains(const Word& w) const {
  if (!same_alphabet(w.alphabet(), alpha_)) throw Error("contains: alphabet mismatch");
  int cur = base_;
  for (Letter l : w.flatten()) {
    cur = trace(cur, l);
    if (cur < 0) return false;
  }
  return cur == base_;
}

SubgroupGraph::RankIndex SubgroupGraph::rank_and_index() const {
  RankIndex r;
  r.rank = static_cast<int>(edge_count()) - static_cast<int>(vertex_count()) + 1;
  bool full = true;
  for (const auto& row : fwd_)
    for (int t : row)
      if (t < 0) full = false;
  if (full) r.index = Int(vertex_count());
  return r;
}

SubgroupGraph::Malnormality SubgroupGraph::is_malnormal() const {
  const int ngen = alpha_->rank();
  const int nv = static_cast<int>(vertex_count());
  auto pid = [&](int p, int q) { return p * nv + q; };

  // Fiber product of the core with itself: vertices are ordered pairs, with a
  // g-edge wherever both coordinates have one. The diagonal component is
  // exactly the diagonal; any other component with a cycle violates
  // malnormality.
  std::vector<int> comp(static_cast<std::size_t>(nv * nv), -1);
  for (int p = 0; p < nv; ++p)
    for (int q = 0; q < nv; ++q) {
      if (comp[static_cast<std::size_t>(pid(p, q))] >= 0) continue;
      int c = pid(p, q);
      std::vector<int> stack{c};
      comp[static_cast<std::size_t>(c)] = c;
      while (!stack.empty()) {
        int cur = stack.back();
        stack.pop_back();
        int cp = cur / nv, cq = cur % nv;
        for (int g = 0; g < ngen; ++g) {
          int tp = step(cp, g), tq = step(cq, g);
          if (tp >= 0 && tq >= 0 && comp[static_cast<std::size_t>(pid(tp, tq))] < 0) {
            comp[static_cast<std::size_t>(pid(tp, tq))] = c;
            stack.push_back(pid(tp, tq));
          }
          int sp = step_back(cp, g), sq = step_back(cq, g);
          if (sp >= 0 && sq >= 0 && comp[static_cast<std::size_t>(pid(sp, sq))] < 0) {
            comp[static_cast<std::size_t>(pid(sp, sq))] = c;
            stack.push_back(pid(sp, sq));
          }
        }
      }
    }

  int diag = comp[static_cast<std::size_t>(pid(base_, base_))];
  // Per-component vertex and edge counts; a component with E >= V has a cycle.
  std::map<int, std::pair<int, int>> sizes;  // comp -> (V, E)
  for (int p = 0; p < nv; ++p)
    for (int q = 0; q < nv; ++q) {
      int c = comp[static_cast<std::size_t>(pid(p, q))];
      auto& s = sizes[c];
      s.first += 1;
      for (int g = 0; g < ngen; ++g)
        if (step(p, g) >= 0 && step(q, g) >= 0) s.second += 1;
    }

  for (const auto& [c, s] : sizes) {
    if (c == diag || s.second < s.first) continue;
    // Found a non-tree off-diagonal component; extract a witness. BFS a
    // spanning tree, then close up the first non-tree edge into a loop word.
    int root = c;
    std::map<int, std::pair<int, Letter>> parent;  // pair vertex -> (parent, letter)
    std::vector<int> bfs{root};
    parent[root] = {root, -1};
    std::optional<std::array<int, 3>> extra;  // from-pair, letter, to-pair
    for (std::size_t qi = 0; qi < bfs.size() && !extra; ++qi) {
      int cur = bfs[qi];
      int cp = cur / nv, cq = cur % nv;
      for (int g = 0; g < ngen && !extra; ++g)
        for (int dir = 0; dir < 2 && !extra; ++dir) {
          Letter l = letter_of(g, dir == 1);
          int tp = trace(cp, l), tq = trace(cq, l);
          if (tp < 0 || tq < 0) continue;
          int t = pid(tp, tq);
          if (!parent.count(t)) {
            parent[t] = {cur, l};
            bfs.push_back(t);
          } else {
            // Genuine non-tree edge only: not the reverse of cur's parent
            // edge and not a re-scan of t's own parent edge.
            auto [pv, pl] = parent[cur];
            auto [tv, tl] = parent[t];
            if (!(pv == t && pl == letter_inv(l)) && !(tv == cur && tl == l))
              extra = std::array<int, 3>{cur, l, t};
          }
        }
    }
    if (!extra) continue;  // parallel arcs folded away; should not happen
    auto path_to = [&](int pair) {
      std::vector<Letter> letters;
      while (parent[pair].first != pair) {
        letters.push_back(parent[pair].second);
        pair = parent[pair].first;
      }
      std::reverse(letters.begin(), letters.end());
      return letters;
    };
    std::vector<Letter> loop = path_to((*extra)[0]);
    loop.push_back((*extra)[1]);
    std::vector<Letter> back = path_to((*extra)[2]);
    for (auto it = back.rbegin(); it != back.rend(); ++it) loop.push_back(letter_inv(*it));
    Word cword = Word::from_letters(alpha_, loop);
    if (cword.trivial()) continue;

    // Loop word c reads at both coordinates of the root pair; conjugating by
    // base->coordinate paths gives two subgroup elements conjugate by a
    // non-member.
    int rp = root / nv, rq = root % nv;
    auto graph_path = [&](int target) {
      // BFS in the core from base to target.
      std::vector<std::pair<int, Letter>> par(static_cast<std::size_t>(nv), {-1, -1});
      std::vector<int> q2{base_};
      par[static_cast<std::size_t>(base_)] = {base_, -1};
      for (std::size_t qi = 0; qi < q2.size(); ++qi) {
        int v = q2[qi];
        for (int g = 0; g < ngen; ++g)
          for (int dir = 0; dir < 2; ++dir) {
            Letter l = letter_of(g, dir == 1);
            int t = trace(v, l);
            if (t >= 0 && par[static_cast<std::size_t>(t)].first < 0) {
              par[static_cast<std::size_t>(t)] = {v, l};
              q2.push_back(t);
            }
          }
      }
      std::vector<Letter> letters;
      int v = target;
      while (par[static_cast<std::size_t>(v)].first != v) {
        letters.push_back(par[static_cast<std::size_t>(v)].second);
        v = par[static_cast<std::size_t>(v)].first;
      }
      std::reverse(letters.begin(), letters.end());
      return Word::from_letters(alpha_, letters);
    };
    Word arp = graph_path(rp);
    Word arq = graph_path(rq);
    Malnormality m;
    m.malnormal = false;
    m.witness = conjugate(arq, cword);           // in H
    m.conjugator = multiply(arp, invert(arq));   // conjugates witness into H, not in H
    return m;
  }
  return Malnormality{};
}

std::string SubgroupGraph::dot() const {
  std::ostringstream os;
  os << "digraph core {\n";
  os << "  base = " << base_ << ";\n";
  for (std::size_t v = 0; v < fwd_.size(); ++v)
    for (int g = 0; g < alpha_->rank(); ++g) {
      int t = fwd_[v][static_cast<std::size_t>(g)];
      if (t >= 0)
        os << "  " << v << " -> " << t << " [label=\"" << alpha_->generators()[static_cast<std::size_t>(g)]
           << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace serrelab
