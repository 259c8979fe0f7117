#include "serrelab/dsl.hpp"

#include <map>
#include <set>
#include <sstream>

namespace serrelab {

ParseError::ParseError(int line_, int column_, std::string expected_, std::string found_)
    : Error("line " + std::to_string(line_) + ":" + std::to_string(column_) + ": expected " +
            expected_ + ", found " + found_),
      line(line_),
      column(column_),
      expected(std::move(expected_)),
      found(std::move(found_)) {}

namespace {

struct Token {
  enum class Type { Ident, Int, Sym, End };
  Type type = Type::End;
  std::string text;
  int line = 1;
  int col = 1;

  std::string describe() const {
    switch (type) {
      case Type::Ident: return "identifier '" + text + "'";
      case Type::Int: return "integer '" + text + "'";
      case Type::Sym: return "'" + text + "'";
      default: return "end of input";
    }
  }
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') bump(text[i++]);
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(c);
      ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    auto isid = [](char ch) {
      return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
             ch == '_';
    };
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      t.type = Token::Type::Ident;
      while (i < text.size() && isid(text[i])) {
        t.text += text[i];
        bump(text[i++]);
      }
    } else if (c >= '0' && c <= '9') {
      t.type = Token::Type::Int;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        t.text += text[i];
        bump(text[i++]);
      }
    } else if (c == '-') {
      char n = i + 1 < text.size() ? text[i + 1] : '\0';
      if (n == '-' || n == '>') {
        t.type = Token::Type::Sym;
        t.text = {c, n};
        bump(c), bump(n);
        i += 2;
      } else if (n >= '0' && n <= '9') {
        t.type = Token::Type::Int;
        t.text = "-";
        bump(c), ++i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
          t.text += text[i];
          bump(text[i++]);
        }
      } else {
        throw ParseError(line, col, "a token", "'-'");
      }
    } else if (c == '=' && i + 1 < text.size() && text[i + 1] == '>') {
      t.type = Token::Type::Sym;
      t.text = "=>";
      bump('='), bump('>');
      i += 2;
    } else if (std::string("{}()[],;:=^.").find(c) != std::string::npos) {
      t.type = Token::Type::Sym;
      t.text = std::string(1, c);
      bump(c), ++i;
    } else {
      throw ParseError(line, col, "a token", "'" + std::string(1, c) + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;
  Document doc;
  std::map<std::string, AlphabetRef> alphabets;
  std::map<std::string, std::pair<Word, std::string>> words;  // value, scope
  std::map<std::string, std::pair<GraphOfGroups, Presentation>> graphs;
  std::map<std::string, Tower> towers;
  std::map<std::string, int> task_names;
  std::set<std::string> hom_names;

  const Token& peek() const { return toks[pos]; }
  const Token& next() { return toks[pos++]; }
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(peek().line, peek().col, expected, peek().describe());
  }
  bool at_sym(const std::string& s) const {
    return peek().type == Token::Type::Sym && peek().text == s;
  }
  bool at_kw(const std::string& s) const {
    return peek().type == Token::Type::Ident && peek().text == s;
  }
  void expect_sym(const std::string& s) {
    if (!at_sym(s)) fail("'" + s + "'");
    ++pos;
  }
  void expect_kw(const std::string& s) {
    if (!at_kw(s)) fail("'" + s + "'");
    ++pos;
  }
  std::string expect_ident(const std::string& what) {
    if (peek().type != Token::Type::Ident) fail(what);
    return next().text;
  }
  Int expect_int(const std::string& what) {
    if (peek().type != Token::Type::Int) fail(what);
    return Int(next().text);
  }
  int expect_small_int(const std::string& what) {
    Int v = expect_int(what);
    if (v < -1000000 || v > 1000000) fail(what + " in range");
    return static_cast<int>(v);
  }

  /// Whether the next token can begin a word atom over alpha; unresolvable
  /// identifiers end the expression so surrounding keywords are not eaten.
  bool atom_starts(const AlphabetRef& alpha) const {
    if (at_sym("(") || at_sym("[")) return true;
    if (peek().type == Token::Type::Int) return peek().text == "1";
    if (peek().type == Token::Type::Ident) {
      if (alpha->index_of(peek().text) >= 0) return true;
      auto it = words.find(peek().text);
      return it != words.end() && same_alphabet(it->second.first.alphabet(), alpha);
    }
    return false;
  }

  Word word_atom(const AlphabetRef& alpha, const std::string& scope) {
    if (peek().type == Token::Type::Int) {
      if (peek().text != "1") fail("'1' or a generator");
      ++pos;
      return Word::identity(alpha);
    }
    if (at_sym("(")) {
      ++pos;
      Word w = word_expr(alpha, scope);
      expect_sym(")");
      return w;
    }
    if (at_sym("[")) {
      ++pos;
      Word a = word_expr(alpha, scope);
      expect_sym(",");
      Word b = word_expr(alpha, scope);
      expect_sym("]");
      return commutator(a, b);
    }
    if (peek().type == Token::Type::Ident) {
      int idx = alpha->index_of(peek().text);
      if (idx >= 0) {
        ++pos;
        return Word::letter(alpha, idx);
      }
      auto it = words.find(peek().text);
      if (it != words.end() && same_alphabet(it->second.first.alphabet(), alpha)) {
        ++pos;
        return it->second.first;
      }
      fail("a generator of " + scope + " or a word over it");
    }
    fail("a word expression");
  }

  Word word_factor(const AlphabetRef& alpha, const std::string& scope) {
    Word w = word_atom(alpha, scope);
    if (at_sym("^")) {
      ++pos;
      w = power(w, expect_int("an exponent"));
    }
    return w;
  }

  Word word_expr(const AlphabetRef& alpha, const std::string& scope) {
    Word w = word_factor(alpha, scope);
    while (atom_starts(alpha)) w = multiply(w, word_factor(alpha, scope));
    return w;
  }

  AlphabetRef scope_alphabet(const std::string& scope, const Token& at) {
    if (auto it = alphabets.find(scope); it != alphabets.end()) return it->second;
    if (auto it = graphs.find(scope); it != graphs.end()) return it->second.second.alpha;
    if (auto it = towers.find(scope); it != towers.end()) return it->second.top_pres().alpha;
    throw ParseError(at.line, at.col, "a declared alphabet, graph or tower", at.describe());
  }

  void parse_alphabet() {
    Declaration d;
    d.kind = Declaration::Kind::Alphabet;
    Token nt = peek();
    d.name = expect_ident("an alphabet name");
    if (alphabets.count(d.name)) throw ParseError(nt.line, nt.col, "a fresh name", nt.describe());
    expect_sym("{");
    std::vector<std::string> gens;
    for (;;) {
      Token gt = peek();
      std::string g = expect_ident("a generator name");
      for (const auto& seen : gens)
        if (seen == g) throw ParseError(gt.line, gt.col, "a fresh generator", gt.describe());
      gens.push_back(g);
      if (at_sym(",")) {
        ++pos;
        continue;
      }
      break;
    }
    expect_sym("}");
    d.alphabet = make_alphabet(d.name, gens);
    alphabets[d.name] = d.alphabet;
    doc.decls.push_back(std::move(d));
  }

  void parse_word() {
    Declaration d;
    d.kind = Declaration::Kind::Word;
    Token nt = peek();
    d.name = expect_ident("a word name");
    if (words.count(d.name)) throw ParseError(nt.line, nt.col, "a fresh name", nt.describe());
    expect_kw("in");
    Token st = peek();
    d.scope = expect_ident("a scope name");
    AlphabetRef alpha = scope_alphabet(d.scope, st);
    expect_sym("=");
    d.word = word_expr(alpha, d.scope);
    words[d.name] = {d.word, d.scope};
    doc.decls.push_back(std::move(d));
  }

  void parse_hom() {
    Declaration d;
    d.kind = Declaration::Kind::Hom;
    Token nt = peek();
    d.name = expect_ident("a hom name");
    if (!hom_names.insert(d.name).second)
      throw ParseError(nt.line, nt.col, "a fresh name", nt.describe());
    expect_sym(":");
    Token dt = peek();
    d.hom_domain = expect_ident("a domain alphabet");
    if (!alphabets.count(d.hom_domain))
      throw ParseError(dt.line, dt.col, "a declared alphabet", dt.describe());
    expect_sym("->");
    Token ct = peek();
    d.hom_codomain = expect_ident("a codomain alphabet");
    if (!alphabets.count(d.hom_codomain))
      throw ParseError(ct.line, ct.col, "a declared alphabet", ct.describe());
    AlphabetRef dom = alphabets[d.hom_domain], cod = alphabets[d.hom_codomain];
    expect_sym("{");
    std::vector<std::optional<Word>> images(static_cast<std::size_t>(dom->rank()));
    for (;;) {
      Token gt = peek();
      std::string g = expect_ident("a domain generator");
      int idx = dom->index_of(g);
      if (idx < 0) throw ParseError(gt.line, gt.col, "a generator of " + d.hom_domain, gt.describe());
      if (images[static_cast<std::size_t>(idx)])
        throw ParseError(gt.line, gt.col, "an unmapped generator", gt.describe());
      expect_sym("=>");
      images[static_cast<std::size_t>(idx)] = word_expr(cod, d.hom_codomain);
      if (at_sym(",")) {
        ++pos;
        continue;
      }
      break;
    }
    Token close = peek();
    expect_sym("}");
    std::vector<Word> imgs;
    for (const auto& img : images) {
      if (!img) throw ParseError(close.line, close.col, "a mapping for every generator", close.describe());
      imgs.push_back(*img);
    }
    d.hom = FreeHom(dom, cod, std::move(imgs));
    doc.decls.push_back(std::move(d));
  }

  void parse_graph() {
    Declaration d;
    d.kind = Declaration::Kind::Graph;
    Token nt = peek();
    d.name = expect_ident("a graph name");
    if (graphs.count(d.name)) throw ParseError(nt.line, nt.col, "a fresh name", nt.describe());
    expect_sym("{");
    std::vector<std::pair<std::string, VertexGroup>> vertices;
    std::vector<GogEdge> edges;
    std::optional<int> base;
    auto vertex_index = [&](const std::string& vn) {
      for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].first == vn) return static_cast<int>(i);
      return -1;
    };
    for (;;) {
      if (at_kw("vertex")) {
        ++pos;
        std::string vn = expect_ident("a vertex name");
        expect_sym("=");
        if (at_kw("free")) {
          ++pos;
          Token at = peek();
          std::string an = expect_ident("an alphabet name");
          if (!alphabets.count(an))
            throw ParseError(at.line, at.col, "a declared alphabet", at.describe());
          vertices.push_back({vn, VertexGroup::free(alphabets[an])});
        } else if (at_kw("abelian")) {
          ++pos;
          vertices.push_back({vn, VertexGroup::abelian(expect_small_int("a rank"))});
        } else {
          fail("'free' or 'abelian'");
        }
      } else if (at_kw("edge")) {
        ++pos;
        GogEdge e;
        e.name = expect_ident("an edge name");
        expect_sym(":");
        for (int side = 0; side < 2; ++side) {
          Token vt = peek();
          std::string vn = expect_ident("a vertex name");
          int vi = vertex_index(vn);
          if (vi < 0) throw ParseError(vt.line, vt.col, "a declared vertex", vt.describe());
          e.ends[static_cast<std::size_t>(side)] = vi;
          expect_sym(".");
          expect_sym("(");
          const VertexGroup& vg = vertices[static_cast<std::size_t>(vi)].second;
          if (vg.kind == VertexGroup::Kind::Free) {
            e.att[static_cast<std::size_t>(side)] =
                gelem_word(word_expr(vg.alpha, vertices[static_cast<std::size_t>(vi)].first));
          } else {
            std::vector<Int> vec;
            for (;;) {
              vec.push_back(expect_int("a coordinate"));
              if (at_sym(",")) {
                ++pos;
                continue;
              }
              break;
            }
            Token ct = peek();
            if (static_cast<int>(vec.size()) != vg.ab_rank)
              throw ParseError(ct.line, ct.col, std::to_string(vg.ab_rank) + " coordinates",
                               ct.describe());
            e.att[static_cast<std::size_t>(side)] = gelem_vec(std::move(vec));
          }
          expect_sym(")");
          if (side == 0) expect_sym("--");
        }
        if (at_kw("tree")) {
          ++pos;
          e.tree = true;
        }
        edges.push_back(std::move(e));
      } else if (at_kw("base")) {
        ++pos;
        Token vt = peek();
        std::string vn = expect_ident("a vertex name");
        int vi = vertex_index(vn);
        if (vi < 0) throw ParseError(vt.line, vt.col, "a declared vertex", vt.describe());
        base = vi;
      } else {
        fail("'vertex', 'edge' or 'base'");
      }
      if (at_sym(";")) {
        ++pos;
        if (at_sym("}")) break;
        continue;
      }
      break;
    }
    Token close = peek();
    expect_sym("}");
    if (!base) throw ParseError(close.line, close.col, "a base declaration", close.describe());
    d.graph = GraphOfGroups(std::move(vertices), std::move(edges), *base);
    d.graph->require_valid();
    d.pres = pi1_presentation(*d.graph);
    graphs.emplace(d.name, std::make_pair(*d.graph, *d.pres));
    doc.decls.push_back(std::move(d));
  }

  void parse_tower() {
    Declaration d;
    d.kind = Declaration::Kind::Tower;
    Token nt = peek();
    d.name = expect_ident("a tower name");
    if (towers.count(d.name)) throw ParseError(nt.line, nt.col, "a fresh name", nt.describe());
    expect_sym("{");
    expect_kw("base");
    Token bt = peek();
    d.base_name = expect_ident("an alphabet name");
    if (!alphabets.count(d.base_name))
      throw ParseError(bt.line, bt.col, "a declared alphabet", bt.describe());
    AlphabetRef base = alphabets[d.base_name];
    std::vector<ExtensionLevel> levels;
    while (at_sym(";")) {
      ++pos;
      if (at_sym("}")) break;
      expect_kw("level");
      if (at_kw("abelian")) {
        ++pos;
        expect_kw("attach");
        Word attach = word_expr(base, d.base_name);
        expect_kw("rank");
        levels.push_back(ExtensionLevel::abelian(attach, expect_small_int("a rank")));
      } else if (at_kw("quadratic")) {
        ++pos;
        expect_kw("genus");
        int genus = expect_small_int("a genus");
        expect_kw("boundary");
        std::vector<Word> boundary;
        for (;;) {
          boundary.push_back(word_expr(base, d.base_name));
          if (at_sym(",")) {
            ++pos;
            continue;
          }
          break;
        }
        expect_kw("images");
        expect_sym("(");
        std::vector<Word> images;
        for (;;) {
          images.push_back(word_expr(base, d.base_name));
          if (at_sym(",")) {
            ++pos;
            continue;
          }
          break;
        }
        expect_sym(")");
        levels.push_back(ExtensionLevel::quadratic(genus, std::move(boundary), std::move(images)));
      } else {
        fail("'abelian' or 'quadratic'");
      }
    }
    expect_sym("}");
    d.tower = build_tower(base, std::move(levels));
    towers.emplace(d.name, *d.tower);
    doc.decls.push_back(std::move(d));
  }

  void parse_task() {
    Declaration d;
    d.kind = Declaration::Kind::Task;
    TaskDecl t;
    Token kt = peek();
    t.kind = expect_ident("'separate' or 'discriminate'");
    if (t.kind != "separate" && t.kind != "discriminate")
      throw ParseError(kt.line, kt.col, "'separate' or 'discriminate'", kt.describe());
    Token tt = peek();
    t.tower = expect_ident("a tower name");
    if (!towers.count(t.tower))
      throw ParseError(tt.line, tt.col, "a declared tower", tt.describe());
    expect_kw("set");
    expect_sym("{");
    for (;;) {
      Token wt = peek();
      std::string wn = expect_ident("a word name");
      auto it = words.find(wn);
      if (it == words.end())
        throw ParseError(wt.line, wt.col, "a declared word", wt.describe());
      const std::string& scope = it->second.second;
      if (scope != t.tower && scope != towers.at(t.tower).base->name())
        throw ParseError(wt.line, wt.col, "a word over tower " + t.tower + " or its base",
                         wt.describe());
      t.set.push_back(wn);
      if (at_sym(",")) {
        ++pos;
        continue;
      }
      break;
    }
    expect_sym("}");
    if (at_kw("max")) {
      ++pos;
      t.max = expect_small_int("a bound");
    }
    if (at_kw("seed")) {
      ++pos;
      Token st = peek();
      Int s = expect_int("a seed");
      if (s < 0 || s > Int("18446744073709551615"))
        throw ParseError(st.line, st.col, "a 64-bit seed", st.describe());
      t.seed = static_cast<std::uint64_t>(s);
    }
    std::string stem = t.kind + "_" + t.tower;
    int n = ++task_names[stem];
    t.name = n == 1 ? stem : stem + "_" + std::to_string(n);
    d.name = t.name;
    d.task = std::move(t);
    doc.decls.push_back(std::move(d));
  }

  Document run() {
    while (peek().type != Token::Type::End) {
      if (at_kw("alphabet")) {
        ++pos;
        parse_alphabet();
      } else if (at_kw("word")) {
        ++pos;
        parse_word();
      } else if (at_kw("hom")) {
        ++pos;
        parse_hom();
      } else if (at_kw("graph")) {
        ++pos;
        parse_graph();
      } else if (at_kw("tower")) {
        ++pos;
        parse_tower();
      } else if (at_kw("task")) {
        ++pos;
        parse_task();
      } else {
        fail("a declaration keyword");
      }
    }
    return std::move(doc);
  }
};

std::string render_vec(const std::vector<Int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  return os.str();
}

}  // namespace

bool operator==(const Declaration& a, const Declaration& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  switch (a.kind) {
    case Declaration::Kind::Alphabet:
      return same_alphabet(a.alphabet, b.alphabet);
    case Declaration::Kind::Word:
      return a.scope == b.scope && a.word == b.word;
    case Declaration::Kind::Hom:
      return a.hom_domain == b.hom_domain && a.hom_codomain == b.hom_codomain && *a.hom == *b.hom;
    case Declaration::Kind::Graph:
      return *a.graph == *b.graph;
    case Declaration::Kind::Tower:
      return a.base_name == b.base_name && same_alphabet(a.tower->base, b.tower->base) &&
             a.tower->levels == b.tower->levels;
    case Declaration::Kind::Task:
      return *a.task == *b.task;
  }
  return false;
}

const Declaration* Document::find(Declaration::Kind kind, const std::string& name) const {
  for (const auto& d : decls)
    if (d.kind == kind && d.name == name) return &d;
  return nullptr;
}

Document parse(const std::string& text) {
  Parser p;
  p.toks = lex(text);
  return p.run();
}

std::string render(const Document& doc) {
  std::ostringstream os;
  for (const auto& d : doc.decls) {
    switch (d.kind) {
      case Declaration::Kind::Alphabet: {
        os << "alphabet " << d.name << " { ";
        const auto& gens = d.alphabet->generators();
        for (std::size_t i = 0; i < gens.size(); ++i) {
          if (i) os << ", ";
          os << gens[i];
        }
        os << " }\n";
        break;
      }
      case Declaration::Kind::Word:
        os << "word " << d.name << " in " << d.scope << " = " << d.word.str() << "\n";
        break;
      case Declaration::Kind::Hom: {
        os << "hom " << d.name << " : " << d.hom_domain << " -> " << d.hom_codomain << " { ";
        const auto& gens = d.hom->domain()->generators();
        for (std::size_t i = 0; i < gens.size(); ++i) {
          if (i) os << ", ";
          os << gens[i] << " => " << d.hom->images()[i].str();
        }
        os << " }\n";
        break;
      }
      case Declaration::Kind::Graph: {
        os << "graph " << d.name << " {";
        const auto& g = *d.graph;
        for (const auto& [vn, vg] : g.vertices()) {
          os << " vertex " << vn << " = ";
          if (vg.kind == VertexGroup::Kind::Free)
            os << "free " << vg.alpha->name();
          else
            os << "abelian " << vg.ab_rank;
          os << ";";
        }
        for (const auto& e : g.edges()) {
          os << " edge " << e.name << " : ";
          for (int side = 0; side < 2; ++side) {
            const auto& vg = g.vg(e.ends[static_cast<std::size_t>(side)]);
            os << g.vertices()[static_cast<std::size_t>(e.ends[static_cast<std::size_t>(side)])]
                      .first
               << ".(";
            if (vg.kind == VertexGroup::Kind::Free)
              os << e.att[static_cast<std::size_t>(side)].word.str();
            else
              os << render_vec(e.att[static_cast<std::size_t>(side)].vec);
            os << ")";
            if (side == 0) os << " -- ";
          }
          if (e.tree) os << " tree";
          os << ";";
        }
        os << " base " << g.vertices()[static_cast<std::size_t>(g.base())].first << " }\n";
        break;
      }
      case Declaration::Kind::Tower: {
        os << "tower " << d.name << " { base " << d.base_name << ";";
        for (const auto& l : d.tower->levels) {
          if (l.kind == ExtensionLevel::Kind::Abelian) {
            os << " level abelian attach " << l.attach.str() << " rank " << l.a_rank << ";";
          } else {
            os << " level quadratic genus " << l.genus << " boundary ";
            for (std::size_t i = 0; i < l.boundary_attach.size(); ++i) {
              if (i) os << ", ";
              os << l.boundary_attach[i].str();
            }
            os << " images ( ";
            for (std::size_t i = 0; i < l.surface_images.size(); ++i) {
              if (i) os << ", ";
              os << l.surface_images[i].str();
            }
            os << " );";
          }
        }
        os << " }\n";
        break;
      }
      case Declaration::Kind::Task: {
        const auto& t = *d.task;
        os << "task " << t.kind << " " << t.tower << " set { ";
        for (std::size_t i = 0; i < t.set.size(); ++i) {
          if (i) os << ", ";
          os << t.set[i];
        }
        os << " } max " << t.max << " seed " << t.seed << "\n";
        break;
      }
    }
  }
  return os.str();
}

}  // namespace serrelab
