#include "serrelab/gog.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace serrelab {

GElem gelem_word(Word w) {
  GElem e;
  e.word = std::move(w);
  return e;
}

GElem gelem_vec(std::vector<Int> v) {
  GElem e;
  e.vec = std::move(v);
  return e;
}

bool gelem_trivial(const VertexGroup& vg, const GElem& a) {
  if (vg.kind == VertexGroup::Kind::Free) return a.word.trivial();
  return std::all_of(a.vec.begin(), a.vec.end(), [](const Int& x) { return x == 0; });
}

GElem gelem_identity(const VertexGroup& vg) {
  if (vg.kind == VertexGroup::Kind::Free) return gelem_word(Word(vg.alpha));
  return gelem_vec(std::vector<Int>(static_cast<std::size_t>(vg.ab_rank)));
}

GElem gelem_mul(const VertexGroup& vg, const GElem& a, const GElem& b) {
  if (vg.kind == VertexGroup::Kind::Free) return gelem_word(multiply(a.word, b.word));
  std::vector<Int> v = a.vec;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.vec[i];
  return gelem_vec(std::move(v));
}

GElem gelem_inv(const VertexGroup& vg, const GElem& a) {
  if (vg.kind == VertexGroup::Kind::Free) return gelem_word(invert(a.word));
  std::vector<Int> v = a.vec;
  for (auto& x : v) x = -x;
  return gelem_vec(std::move(v));
}

GElem gelem_pow(const VertexGroup& vg, const GElem& a, const Int& k) {
  if (vg.kind == VertexGroup::Kind::Free) return gelem_word(power(a.word, k));
  std::vector<Int> v = a.vec;
  for (auto& x : v) x *= k;
  return gelem_vec(std::move(v));
}

std::optional<Int> gelem_power_of(const VertexGroup& vg, const GElem& a, const GElem& base) {
  if (gelem_trivial(vg, base)) {
    if (gelem_trivial(vg, a)) return Int(0);
    return std::nullopt;
  }
  if (vg.kind == VertexGroup::Kind::Free) {
    if (a.word.trivial()) return Int(0);
    return power_of(a.word, base.word);
  }
  std::size_t pivot = 0;
  while (base.vec[pivot] == 0) ++pivot;
  if (a.vec[pivot] % base.vec[pivot] != 0) return std::nullopt;
  Int k = a.vec[pivot] / base.vec[pivot];
  for (std::size_t i = 0; i < base.vec.size(); ++i)
    if (a.vec[i] != k * base.vec[i]) return std::nullopt;
  return k;
}

std::optional<GElem> gelem_conjugator(const VertexGroup& vg, const GElem& a, const GElem& b) {
  if (vg.kind == VertexGroup::Kind::Free) {
    if (a.word.trivial() || b.word.trivial()) {
      if (a.word.trivial() && b.word.trivial()) return gelem_identity(vg);
      return std::nullopt;
    }
    auto cert = are_conjugate(a.word, b.word);
    if (!cert) return std::nullopt;
    return gelem_word(cert->conjugator);
  }
  if (a.vec == b.vec) return gelem_identity(vg);
  return std::nullopt;
}

std::string gelem_conjugacy_key(const VertexGroup& vg, const GElem& a) {
  std::ostringstream os;
  if (vg.kind == VertexGroup::Kind::Free) {
    CyclicCanonical cc = cyclic_canonical(a.word);
    for (Letter l : cc.canonical.letters()) os << l << ',';
  } else {
    for (const Int& x : a.vec) os << x << ',';
  }
  return os.str();
}

std::string gelem_str(const VertexGroup& vg, const GElem& a) {
  if (vg.kind == VertexGroup::Kind::Free) return a.word.str();
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.vec.size(); ++i) os << (i ? "," : "") << a.vec[i];
  os << ')';
  return os.str();
}

GraphOfGroups::GraphOfGroups(std::vector<std::pair<std::string, VertexGroup>> vertices,
                             std::vector<GogEdge> edges, int base)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), base_(base) {}

int GraphOfGroups::vertex_index(const std::string& name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].first == name) return static_cast<int>(i);
  return -1;
}

int GraphOfGroups::edge_index(const std::string& name) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> GraphOfGroups::validate() const {
  std::vector<std::string> out;
  const int nv = static_cast<int>(vertices_.size());
  if (nv == 0) {
    out.push_back("graph has no vertices");
    return out;
  }
  if (base_ < 0 || base_ >= nv) out.push_back("base vertex index out of range");
  for (int v = 0; v < nv; ++v) {
    const auto& [name, g] = vertices_[static_cast<std::size_t>(v)];
    if (g.kind == VertexGroup::Kind::Free && (!g.alpha || g.alpha->rank() == 0))
      out.push_back("vertex '" + name + "': free vertex group needs a nonempty alphabet");
    if (g.kind == VertexGroup::Kind::Abelian && g.ab_rank <= 0)
      out.push_back("vertex '" + name + "': abelian rank must be positive");
  }
  for (const auto& e : edges_) {
    for (int side = 0; side < 2; ++side) {
      int v = e.ends[static_cast<std::size_t>(side)];
      if (v < 0 || v >= nv) {
        out.push_back("edge '" + e.name + "': endpoint out of range");
        continue;
      }
      const VertexGroup& g = vg(v);
      const GElem& att = e.att[static_cast<std::size_t>(side)];
      if (g.kind == VertexGroup::Kind::Free) {
        if (!same_alphabet(att.word.alphabet(), g.alpha) && !att.word.trivial())
          out.push_back("edge '" + e.name + "': attaching word over the wrong alphabet");
      } else if (static_cast<int>(att.vec.size()) != g.ab_rank) {
        out.push_back("edge '" + e.name + "': attaching vector has the wrong length");
      }
      if (!e.allow_trivial && gelem_trivial(g, att))
        out.push_back("edge '" + e.name + "': trivial attaching element");
    }
  }
  // Connectivity, and the tree flags forming a spanning tree.
  std::vector<int> comp(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) comp[static_cast<std::size_t>(v)] = v;
  auto find = [&](int v) {
    while (comp[static_cast<std::size_t>(v)] != v) v = comp[static_cast<std::size_t>(v)] = comp[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])];
    return v;
  };
  int tree_count = 0;
  bool tree_cycle = false;
  for (const auto& e : edges_) {
    if (!e.tree) continue;
    ++tree_count;
    int a = find(e.ends[0]), b = find(e.ends[1]);
    if (a == b)
      tree_cycle = true;
    else
      comp[static_cast<std::size_t>(b)] = a;
  }
  bool tree_spans = !tree_cycle && tree_count == nv - 1;
  for (int v = 0; v < nv && tree_spans; ++v)
    if (find(v) != find(0)) tree_spans = false;
  if (!tree_spans) out.push_back("tree-flagged edges do not form a spanning tree");
  for (const auto& e : edges_) {
    int a = find(e.ends[0]), b = find(e.ends[1]);
    if (a != b) comp[static_cast<std::size_t>(b)] = a;
  }
  for (int v = 0; v < nv; ++v)
    if (find(v) != find(0)) {
      out.push_back("underlying graph is disconnected");
      break;
    }
  return out;
}

void GraphOfGroups::require_valid() const {
  auto d = validate();
  if (!d.empty()) throw Error("invalid graph of groups: " + d.front());
}

namespace {

int step_dep(const GogEdge& e, const PathStep& s) { return e.ends[static_cast<std::size_t>(s.dir)]; }
int step_arr(const GogEdge& e, const PathStep& s) { return e.ends[static_cast<std::size_t>(1 - s.dir)]; }
const GElem& att_dep(const GogEdge& e, const PathStep& s) { return e.att[static_cast<std::size_t>(s.dir)]; }
const GElem& att_arr(const GogEdge& e, const PathStep& s) { return e.att[static_cast<std::size_t>(1 - s.dir)]; }

}  // namespace

bool operator==(const PathWord& a, const PathWord& b) {
  if (a.start != b.start || !(a.head == b.head) || a.steps.size() != b.steps.size()) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const auto& x = a.steps[i];
    const auto& y = b.steps[i];
    if (x.edge != y.edge || x.dir != y.dir || !(x.elem == y.elem)) return false;
  }
  return true;
}

int path_end(const GraphOfGroups& g, const PathWord& p) {
  int v = p.start;
  for (const auto& s : p.steps) v = step_arr(g.edges()[static_cast<std::size_t>(s.edge)], s);
  return v;
}

bool path_valid(const GraphOfGroups& g, const PathWord& p) {
  int nv = static_cast<int>(g.vertices().size());
  if (p.start < 0 || p.start >= nv) return false;
  int v = p.start;
  for (const auto& s : p.steps) {
    if (s.edge < 0 || s.edge >= static_cast<int>(g.edges().size())) return false;
    if (s.dir != 0 && s.dir != 1) return false;
    const auto& e = g.edges()[static_cast<std::size_t>(s.edge)];
    if (step_dep(e, s) != v) return false;
    v = step_arr(e, s);
  }
  return true;
}

PathWord path_identity(const GraphOfGroups& g, int vertex) {
  PathWord p;
  p.start = vertex;
  p.head = gelem_identity(g.vg(vertex));
  return p;
}

PathWord path_elem(const GraphOfGroups& g, int vertex, GElem e) {
  PathWord p;
  p.start = vertex;
  (void)g;
  p.head = std::move(e);
  return p;
}

PathWord path_mul(const GraphOfGroups& g, const PathWord& a, const PathWord& b) {
  if (path_end(g, a) != b.start) throw Error("path_mul: endpoint mismatch");
  PathWord out = a;
  if (out.steps.empty())
    out.head = gelem_mul(g.vg(out.start), out.head, b.head);
  else
    out.steps.back().elem =
        gelem_mul(g.vg(b.start), out.steps.back().elem, b.head);
  for (const auto& s : b.steps) out.steps.push_back(s);
  return out;
}

PathWord path_inv(const GraphOfGroups& g, const PathWord& a) {
  PathWord out;
  out.start = path_end(g, a);
  if (a.steps.empty()) {
    out.head = gelem_inv(g.vg(a.start), a.head);
    out.start = a.start;
    return out;
  }
  out.head = gelem_inv(g.vg(out.start), a.steps.back().elem);
  for (std::size_t i = a.steps.size(); i-- > 0;) {
    PathStep s;
    s.edge = a.steps[i].edge;
    s.dir = 1 - a.steps[i].dir;
    const GElem& prev = i == 0 ? a.head : a.steps[i - 1].elem;
    const auto& e = g.edges()[static_cast<std::size_t>(a.steps[i].edge)];
    s.elem = gelem_inv(g.vg(step_dep(e, a.steps[i])), prev);
    out.steps.push_back(std::move(s));
  }
  return out;
}

PathWord path_conjugate(const GraphOfGroups& g, const PathWord& c, const PathWord& a) {
  return path_mul(g, path_mul(g, c, a), path_inv(g, c));
}

PathWord normal_form(const GraphOfGroups& g, const PathWord& p) {
  if (!path_valid(g, p)) throw Error("normal_form: malformed path");
  PathWord out;
  out.start = p.start;
  out.head = p.head;
  for (const auto& s : p.steps) {
    if (!out.steps.empty()) {
      const PathStep& t = out.steps.back();
      if (t.edge == s.edge && t.dir == 1 - s.dir) {
        const auto& e = g.edges()[static_cast<std::size_t>(t.edge)];
        const VertexGroup& varr = g.vg(step_arr(e, t));
        auto k = gelem_power_of(varr, t.elem, att_arr(e, t));
        if (k) {
          const VertexGroup& vdep = g.vg(step_dep(e, t));
          GElem merged = gelem_mul(vdep, gelem_pow(vdep, att_dep(e, t), *k), s.elem);
          out.steps.pop_back();
          if (out.steps.empty())
            out.head = gelem_mul(vdep, out.head, merged);
          else
            out.steps.back().elem = gelem_mul(vdep, out.steps.back().elem, merged);
          continue;
        }
      }
    }
    out.steps.push_back(s);
  }
  return out;
}

bool path_trivial(const GraphOfGroups& g, const PathWord& p) {
  PathWord nf = normal_form(g, p);
  return nf.steps.empty() && gelem_trivial(g.vg(nf.start), nf.head);
}

bool path_equal(const GraphOfGroups& g, const PathWord& p, const PathWord& q) {
  if (p.start != q.start || path_end(g, p) != path_end(g, q)) return false;
  return path_trivial(g, path_mul(g, p, path_inv(g, q)));
}

std::string path_str(const GraphOfGroups& g, const PathWord& p) {
  std::ostringstream os;
  os << '[' << g.vertices()[static_cast<std::size_t>(p.start)].first << "] "
     << gelem_str(g.vg(p.start), p.head);
  int v = p.start;
  for (const auto& s : p.steps) {
    const auto& e = g.edges()[static_cast<std::size_t>(s.edge)];
    os << (s.dir == 0 ? " >" : " <") << e.name << "> ";
    v = step_arr(e, s);
    os << gelem_str(g.vg(v), s.elem);
  }
  return os.str();
}

Classification classify(const GraphOfGroups& g, const PathWord& p) {
  PathWord core = normal_form(g, p);
  PathWord gamma = path_identity(g, core.start);

  auto absorb_head = [&]() {
    if (core.steps.empty() || gelem_trivial(g.vg(core.start), core.head)) return;
    gamma = path_mul(g, gamma, path_elem(g, core.start, core.head));
    core.steps.back().elem = gelem_mul(g.vg(path_end(g, core)), core.steps.back().elem, core.head);
    core.head = gelem_identity(g.vg(core.start));
  };

  absorb_head();
  while (core.steps.size() >= 2) {
    const PathStep& first = core.steps.front();
    const PathStep& last = core.steps.back();
    if (!(first.edge == last.edge && first.dir == 1 - last.dir)) break;
    const auto& e = g.edges()[static_cast<std::size_t>(last.edge)];
    const VertexGroup& varr = g.vg(step_arr(e, last));
    if (!gelem_power_of(varr, last.elem, att_arr(e, last))) break;
    // Seam pinch: rotate the loop past its first step, then re-reduce.
    PathWord rho;
    rho.start = core.start;
    rho.head = core.head;
    rho.steps.push_back(first);
    gamma = path_mul(g, gamma, rho);
    PathWord rotated;
    rotated.start = path_end(g, rho);
    rotated.head = gelem_identity(g.vg(rotated.start));
    for (std::size_t i = 1; i < core.steps.size(); ++i) rotated.steps.push_back(core.steps[i]);
    rotated.steps.push_back(first);
    core = normal_form(g, rotated);
    absorb_head();
  }

  Classification c;
  c.conjugator = gamma;
  if (core.steps.empty()) {
    c.elliptic = true;
    c.vertex = core.start;
    c.elem = core.head;
  } else {
    c.elliptic = false;
    c.vertex = core.start;
    c.axis = core;
  }
  return c;
}

namespace {

constexpr std::size_t kEllipticStateBound = 20000;

// Finds k with `a` conjugate in vg to att^k, together with the conjugator c
// (c * att^k * c^-1 == a). a nontrivial.
struct EdgePower {
  Int k;
  GElem c;
};

std::optional<EdgePower> conjugate_power(const VertexGroup& vg, const GElem& a, const GElem& att) {
  if (vg.kind == VertexGroup::Kind::Abelian) {
    auto k = gelem_power_of(vg, a, att);
    if (!k) return std::nullopt;
    return EdgePower{*k, gelem_identity(vg)};
  }
  if (att.word.trivial()) return std::nullopt;
  Word ra = cyclic_reduce(a.word).reduced;
  Word rt = cyclic_reduce(att.word).reduced;
  Int la = ra.length(), lt = rt.length();
  if (la == 0 || lt == 0 || la % lt != 0) return std::nullopt;
  Int mag = la / lt;
  for (int sign : {1, -1}) {
    Int k = mag * sign;
    GElem target = gelem_pow(vg, att, k);
    auto c = gelem_conjugator(vg, a, target);
    if (c) return EdgePower{k, *c};
  }
  return std::nullopt;
}

GogConjugacyResult conjugacy_failure(Classification l, Classification r) {
  GogConjugacyResult res;
  res.conjugate = false;
  res.left = std::move(l);
  res.right = std::move(r);
  return res;
}

}  // namespace

GogConjugacyResult are_conjugate_elements(const GraphOfGroups& g, const PathWord& p,
                                          const PathWord& q) {
  if (!path_valid(g, p) || !path_valid(g, q)) throw Error("are_conjugate_elements: malformed path");
  Classification cp = classify(g, p);
  Classification cq = classify(g, q);

  if (cp.elliptic != cq.elliptic) return conjugacy_failure(cp, cq);

  if (cp.elliptic) {
    bool pt = gelem_trivial(g.vg(cp.vertex), cp.elem);
    bool qt = gelem_trivial(g.vg(cq.vertex), cq.elem);
    if (pt || qt) {
      if (pt && qt) {
        GogConjugacyResult res;
        res.conjugate = true;
        res.conjugator = path_identity(g, p.start);
        res.left = cp;
        res.right = cq;
        return res;
      }
      return conjugacy_failure(cp, cq);
    }
    // BFS from (cq.vertex, cq.elem) through edge conjugations; each state
    // carries tau with tau * state-elem * tau^-1 == cq.elem at cq.vertex.
    struct State {
      int vertex;
      GElem elem;
      PathWord tau;
    };
    std::vector<State> states;
    std::set<std::pair<int, std::string>> seen;
    states.push_back({cq.vertex, cq.elem, path_identity(g, cq.vertex)});
    seen.insert({cq.vertex, gelem_conjugacy_key(g.vg(cq.vertex), cq.elem)});
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states.size() > kEllipticStateBound)
        throw Error("elliptic conjugacy search exceeded state bound");
      State st = states[i];
      if (st.vertex == cp.vertex) {
        auto h2 = gelem_conjugator(g.vg(cp.vertex), cp.elem, st.elem);
        if (h2) {
          GogConjugacyResult res;
          res.conjugate = true;
          PathWord x = path_mul(g, cp.conjugator, path_elem(g, cp.vertex, *h2));
          x = path_mul(g, x, path_inv(g, st.tau));
          x = path_mul(g, x, path_inv(g, cq.conjugator));
          res.conjugator = normal_form(g, x);
          res.left = cp;
          res.right = cq;
          return res;
        }
      }
      for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
        const auto& e = g.edges()[ei];
        for (int side = 0; side < 2; ++side) {
          if (e.ends[static_cast<std::size_t>(side)] != st.vertex) continue;
          auto ep = conjugate_power(g.vg(st.vertex), st.elem, e.att[static_cast<std::size_t>(side)]);
          if (!ep) continue;
          int other = e.ends[static_cast<std::size_t>(1 - side)];
          GElem nelem = gelem_pow(g.vg(other), e.att[static_cast<std::size_t>(1 - side)], ep->k);
          auto key = std::make_pair(other, gelem_conjugacy_key(g.vg(other), nelem));
          if (!seen.insert(key).second) continue;
          PathStep cross;
          cross.edge = static_cast<int>(ei);
          cross.dir = side == 0 ? 0 : 1;
          cross.elem = gelem_identity(g.vg(other));
          PathWord tau = path_mul(g, st.tau, path_elem(g, st.vertex, ep->c));
          tau.steps.push_back(cross);
          states.push_back({other, std::move(nelem), std::move(tau)});
        }
      }
    }
    return conjugacy_failure(cp, cq);
  }

  // Hyperbolic: rotation matching with edge-power corrections.
  const auto& P = cp.axis.steps;
  const auto& Q = cq.axis.steps;
  const std::size_t n = P.size();
  if (Q.size() != n) return conjugacy_failure(cp, cq);

  const auto& e1 = g.edges()[static_cast<std::size_t>(P[0].edge)];
  int w0 = step_dep(e1, P[0]);
  const GElem& att1 = att_dep(e1, P[0]);
  const VertexGroup& vg0 = g.vg(w0);

  // Bound for the seam exponent from total syllable lengths.
  auto elem_len = [&](const VertexGroup& vg, const GElem& a) {
    Int total = 0;
    if (vg.kind == VertexGroup::Kind::Free)
      total = a.word.length();
    else
      for (const Int& x : a.vec) total += abs(x);
    return total;
  };
  Int total = 0;
  {
    int v = cp.axis.start;
    for (const auto& s : P) {
      v = step_arr(g.edges()[static_cast<std::size_t>(s.edge)], s);
      total += elem_len(g.vg(v), s.elem);
    }
    v = cq.axis.start;
    for (const auto& s : Q) {
      v = step_arr(g.edges()[static_cast<std::size_t>(s.edge)], s);
      total += elem_len(g.vg(v), s.elem);
    }
  }
  Int attlen = elem_len(vg0, att1);
  if (vg0.kind == VertexGroup::Kind::Free) attlen = cyclic_reduce(att1.word).reduced.length();
  Int bound = attlen == 0 ? Int(0) : total / attlen + 2;
  if (bound > 4096) throw Error("hyperbolic conjugacy exponent bound too large");

  for (std::size_t rot = 0; rot < n; ++rot) {
    bool match = true;
    for (std::size_t i = 0; i < n && match; ++i) {
      const auto& qs = Q[(rot + i) % n];
      if (qs.edge != P[i].edge || qs.dir != P[i].dir) match = false;
    }
    if (!match) continue;
    for (Int k1 = -bound; k1 <= bound; ++k1) {
      Int k = k1;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const auto& ps = P[i];
        const auto& qs = Q[(rot + i) % n];
        const auto& e = g.edges()[static_cast<std::size_t>(ps.edge)];
        const VertexGroup& va = g.vg(step_arr(e, ps));
        GElem w = gelem_mul(va, gelem_inv(va, ps.elem),
                            gelem_mul(va, gelem_pow(va, att_arr(e, ps), k), qs.elem));
        const auto& enext = g.edges()[static_cast<std::size_t>(P[(i + 1) % n].edge)];
        auto knext = gelem_power_of(va, w, att_dep(enext, P[(i + 1) % n]));
        if (!knext) {
          ok = false;
          break;
        }
        k = *knext;
      }
      if (!ok || k != k1) continue;
      // Seam correction z = att1^k1 at w0; rotation prefix pi of Q.
      PathWord pi;
      pi.start = cq.axis.start;
      pi.head = cq.axis.head;
      for (std::size_t i = 0; i < rot; ++i) pi.steps.push_back(Q[i]);
      PathWord x = path_mul(g, cp.conjugator, path_elem(g, w0, gelem_pow(vg0, att1, k1)));
      x = path_mul(g, x, path_inv(g, pi));
      x = path_mul(g, x, path_inv(g, cq.conjugator));
      x = normal_form(g, x);
      if (path_equal(g, path_conjugate(g, x, q), p)) {
        GogConjugacyResult res;
        res.conjugate = true;
        res.conjugator = x;
        res.left = cp;
        res.right = cq;
        return res;
      }
    }
  }
  return conjugacy_failure(cp, cq);
}

Presentation pi1_presentation(const GraphOfGroups& g) {
  g.require_valid();
  Presentation pres;
  std::vector<std::string> names;
  std::set<std::string> used;
  auto add_name = [&](std::string base) {
    std::string n = base;
    int suffix = 1;
    while (used.count(n)) n = base + "_" + std::to_string(suffix++);
    used.insert(n);
    names.push_back(n);
  };
  for (const auto& [vname, vgr] : g.vertices()) {
    pres.vertex_offset.push_back(static_cast<int>(names.size()));
    if (vgr.kind == VertexGroup::Kind::Free) {
      for (const auto& gen : vgr.alpha->generators()) add_name(gen);
    } else {
      for (int i = 0; i < vgr.ab_rank; ++i) add_name(vname + "_" + std::to_string(i));
    }
  }
  for (const auto& e : g.edges()) {
    if (e.tree) {
      pres.stable_letter.push_back(-1);
    } else {
      pres.stable_letter.push_back(static_cast<int>(names.size()));
      add_name(e.name);
    }
  }
  pres.alpha = make_alphabet("pi1", names);

  auto embed = [&](int v, const GElem& a) {
    const VertexGroup& vgr = g.vg(v);
    int off = pres.vertex_offset[static_cast<std::size_t>(v)];
    std::vector<Syllable> syls;
    if (vgr.kind == VertexGroup::Kind::Free) {
      for (const auto& s : a.word.syllables()) syls.push_back({off + s.gen, s.exp});
    } else {
      for (int i = 0; i < vgr.ab_rank; ++i)
        if (a.vec[static_cast<std::size_t>(i)] != 0)
          syls.push_back({off + i, a.vec[static_cast<std::size_t>(i)]});
    }
    return Word::from_syllables(pres.alpha, std::move(syls));
  };

  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    const VertexGroup& vgr = g.vg(static_cast<int>(v));
    if (vgr.kind != VertexGroup::Kind::Abelian) continue;
    int off = pres.vertex_offset[v];
    for (int i = 0; i < vgr.ab_rank; ++i)
      for (int j = i + 1; j < vgr.ab_rank; ++j)
        pres.relations.push_back(
            commutator(Word::letter(pres.alpha, off + i), Word::letter(pres.alpha, off + j)));
  }
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const auto& e = g.edges()[ei];
    Word a0 = embed(e.ends[0], e.att[0]);
    Word a1 = embed(e.ends[1], e.att[1]);
    int t = pres.stable_letter[ei];
    if (t < 0) {
      pres.relations.push_back(multiply(a0, invert(a1)));
    } else {
      Word tw = Word::letter(pres.alpha, t);
      pres.relations.push_back(
          multiply(multiply(multiply(invert(tw), a0), tw), invert(a1)));
    }
  }
  return pres;
}

Word path_to_word(const GraphOfGroups& g, const Presentation& pres, const PathWord& p) {
  auto embed = [&](int v, const GElem& a) {
    const VertexGroup& vgr = g.vg(v);
    int off = pres.vertex_offset[static_cast<std::size_t>(v)];
    std::vector<Syllable> syls;
    if (vgr.kind == VertexGroup::Kind::Free) {
      for (const auto& s : a.word.syllables()) syls.push_back({off + s.gen, s.exp});
    } else {
      for (int i = 0; i < vgr.ab_rank; ++i)
        if (a.vec[static_cast<std::size_t>(i)] != 0)
          syls.push_back({off + i, a.vec[static_cast<std::size_t>(i)]});
    }
    return Word::from_syllables(pres.alpha, std::move(syls));
  };
  Word out = embed(p.start, p.head);
  int v = p.start;
  for (const auto& s : p.steps) {
    const auto& e = g.edges()[static_cast<std::size_t>(s.edge)];
    int t = pres.stable_letter[static_cast<std::size_t>(s.edge)];
    if (t >= 0) out = multiply(out, Word::letter(pres.alpha, t, s.dir == 0 ? 1 : -1));
    v = step_arr(e, s);
    out = multiply(out, embed(v, s.elem));
  }
  return out;
}

PathWord word_to_path(const GraphOfGroups& g, const Presentation& pres, const Word& w) {
  if (!same_alphabet(w.alphabet(), pres.alpha))
    throw Error("word_to_path: word is not over the presentation alphabet");
  int nv = static_cast<int>(g.vertices().size());
  // tree paths from the base to every vertex
  std::vector<PathWord> gamma(static_cast<std::size_t>(nv));
  std::vector<bool> seen(static_cast<std::size_t>(nv), false);
  gamma[static_cast<std::size_t>(g.base())] = path_identity(g, g.base());
  seen[static_cast<std::size_t>(g.base())] = true;
  std::vector<int> queue{g.base()};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int v = queue[qi];
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
      const auto& e = g.edges()[ei];
      if (!e.tree) continue;
      for (int dir = 0; dir < 2; ++dir) {
        int from = e.ends[static_cast<std::size_t>(dir)];
        int to = e.ends[static_cast<std::size_t>(1 - dir)];
        if (from != v || seen[static_cast<std::size_t>(to)]) continue;
        PathWord p = gamma[static_cast<std::size_t>(v)];
        p.steps.push_back(PathStep{static_cast<int>(ei), dir, gelem_identity(g.vg(to))});
        gamma[static_cast<std::size_t>(to)] = std::move(p);
        seen[static_cast<std::size_t>(to)] = true;
        queue.push_back(to);
      }
    }
  }

  auto stable_path = [&](int gen) -> std::optional<PathWord> {
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
      if (pres.stable_letter[ei] != gen) continue;
      const auto& e = g.edges()[ei];
      PathWord p = gamma[static_cast<std::size_t>(e.ends[0])];
      p.steps.push_back(PathStep{static_cast<int>(ei), 0, gelem_identity(g.vg(e.ends[1]))});
      return path_mul(g, p, path_inv(g, gamma[static_cast<std::size_t>(e.ends[1])]));
    }
    return std::nullopt;
  };
  auto vertex_path = [&](int gen, const Int& exp) {
    for (int v = nv - 1; v >= 0; --v) {
      int off = pres.vertex_offset[static_cast<std::size_t>(v)];
      if (gen < off) continue;
      const VertexGroup& vgr = g.vg(v);
      GElem a;
      if (vgr.kind == VertexGroup::Kind::Free) {
        a = gelem_word(Word::letter(vgr.alpha, gen - off, exp));
      } else {
        std::vector<Int> vec(static_cast<std::size_t>(vgr.ab_rank), Int(0));
        vec[static_cast<std::size_t>(gen - off)] = exp;
        a = gelem_vec(std::move(vec));
      }
      const PathWord& gv = gamma[static_cast<std::size_t>(v)];
      return path_mul(g, gv, path_mul(g, path_elem(g, v, std::move(a)), path_inv(g, gv)));
    }
    throw Error("word_to_path: unresolved generator");
  };

  PathWord out = path_identity(g, g.base());
  for (const auto& s : w.syllables()) {
    if (auto sp = stable_path(s.gen)) {
      if (abs(s.exp) > Int(4096)) throw Error("word_to_path: stable-letter exponent too large");
      PathWord piece = s.exp > 0 ? *sp : path_inv(g, *sp);
      long reps = static_cast<long>(abs(s.exp));
      for (long i = 0; i < reps; ++i) out = path_mul(g, out, piece);
    } else {
      out = path_mul(g, out, vertex_path(s.gen, s.exp));
    }
    out = normal_form(g, out);
  }
  return out;
}

Word GogHom::apply(const GraphOfGroups& g, const PathWord& p) const {
  return hom.apply(path_to_word(g, pres, p));
}

GogHom make_gog_hom(const GraphOfGroups& g, const Presentation& pres, const AlphabetRef& target,
                    std::vector<Word> images) {
  (void)g;
  FreeHom h(pres.alpha, target, std::move(images));
  for (std::size_t i = 0; i < pres.relations.size(); ++i)
    if (!h.apply(pres.relations[i]).trivial())
      throw Error("images break relation " + std::to_string(i) + " (" + pres.relations[i].str() + ")");
  return GogHom{pres, std::move(h)};
}

StrictnessReport check_strict(const GraphOfGroups& g, const GogHom& h,
                              const std::set<int>& qh_vertices) {
  StrictnessReport r;
  auto fail = [&](bool& flag, const std::string& msg) {
    flag = false;
    r.verdict = false;
    r.failures.push_back(msg);
  };

  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    const auto& e = g.edges()[ei];
    if (e.allow_trivial) continue;
    PathWord a0 = path_elem(g, e.ends[0], e.att[0]);
    if (h.apply(g, a0).trivial())
      fail(r.edge_groups_injective, "edge '" + e.name + "': attaching element maps to identity");
  }

  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    const auto& [name, vgr] = g.vertices()[v];
    int off = h.pres.vertex_offset[v];
    int rank = vgr.kind == VertexGroup::Kind::Free ? vgr.alpha->rank() : vgr.ab_rank;
    std::vector<Word> imgs;
    for (int i = 0; i < rank; ++i)
      imgs.push_back(h.hom.images()[static_cast<std::size_t>(off + i)]);

    if (vgr.kind == VertexGroup::Kind::Abelian) {
      // A faithful image of a free abelian group inside a free group exists
      // only in rank <= 1.
      if (rank > 1) {
        fail(r.abelian_injective, "vertex '" + name + "': free abelian rank > 1 cannot embed");
      } else if (rank == 1 && imgs[0].trivial()) {
        fail(r.abelian_injective, "vertex '" + name + "': abelian generator maps to identity");
      }
      continue;
    }
    if (qh_vertices.count(static_cast<int>(v))) {
      bool nonabelian = false;
      for (std::size_t i = 0; i < imgs.size() && !nonabelian; ++i)
        for (std::size_t j = i + 1; j < imgs.size() && !nonabelian; ++j)
          if (!commutator(imgs[i], imgs[j]).trivial()) nonabelian = true;
      if (!nonabelian)
        fail(r.qh_nonabelian, "vertex '" + name + "': QH image is abelian");
      continue;
    }
    bool all_trivial = std::all_of(imgs.begin(), imgs.end(), [](const Word& w) { return w.trivial(); });
    int img_rank = all_trivial ? 0 : SubgroupGraph::fold(h.hom.codomain(), imgs).rank_and_index().rank;
    if (img_rank != rank)
      fail(r.free_envelopes_injective,
           "vertex '" + name + "': image rank " + std::to_string(img_rank) + " < vertex rank " +
               std::to_string(rank));
  }
  return r;
}

}  // namespace serrelab
