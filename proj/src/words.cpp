#include "serrelab/words.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace serrelab {

Alphabet::Alphabet(std::string name, std::vector<std::string> generators)
    : name_(std::move(name)), gens_(std::move(generators)) {
  std::set<std::string> seen;
  for (const auto& g : gens_) {
    if (g.empty()) throw Error("alphabet '" + name_ + "': empty generator name");
    if (!seen.insert(g).second)
      throw Error("alphabet '" + name_ + "': duplicate generator '" + g + "'");
  }
}

int Alphabet::index_of(const std::string& gen) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i] == gen) return static_cast<int>(i);
  return -1;
}

AlphabetRef make_alphabet(std::string name, std::vector<std::string> gens) {
  return std::make_shared<const Alphabet>(std::move(name), std::move(gens));
}

bool same_alphabet(const AlphabetRef& a, const AlphabetRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

namespace {

void require_same_alphabet(const Word& a, const Word& b) {
  if (!same_alphabet(a.alphabet(), b.alphabet())) throw Error("alphabet mismatch");
}

// Appends a syllable to a normalized syllable stack, merging and cancelling.
void push_syllable(std::vector<Syllable>& out, int gen, Int exp) {
  if (exp == 0) return;
  if (!out.empty() && out.back().gen == gen) {
    out.back().exp += exp;
    if (out.back().exp == 0) out.pop_back();
    return;
  }
  out.push_back(Syllable{gen, std::move(exp)});
}

}  // namespace

Word Word::from_syllables(AlphabetRef alpha, std::vector<Syllable> syls) {
  Word w(std::move(alpha));
  const int n = w.alpha_ ? w.alpha_->rank() : 0;
  for (auto& s : syls) {
    if (s.gen < 0 || s.gen >= n) throw Error("syllable generator index out of range");
    push_syllable(w.syls_, s.gen, std::move(s.exp));
  }
  return w;
}

Word Word::letter(const AlphabetRef& alpha, int gen, Int exp) {
  return from_syllables(alpha, {Syllable{gen, std::move(exp)}});
}

Word Word::from_letters(const AlphabetRef& alpha, const std::vector<Letter>& letters) {
  std::vector<Syllable> syls;
  syls.reserve(letters.size());
  for (Letter l : letters) syls.push_back(Syllable{letter_gen(l), letter_inverse(l) ? -1 : 1});
  return from_syllables(alpha, std::move(syls));
}

Int Word::length() const {
  Int n = 0;
  for (const auto& s : syls_) n += abs(s.exp);
  return n;
}

std::vector<Letter> Word::flatten() const {
  Int total = length();
  if (total > Int(kMaxFlattenLetters))
    throw Error("word too long to flatten (" + total.str() + " letters)");
  std::vector<Letter> out;
  out.reserve(static_cast<std::size_t>(total));
  for (const auto& s : syls_) {
    const bool inv = s.exp < 0;
    const std::size_t k = static_cast<std::size_t>(abs(s.exp));
    for (std::size_t i = 0; i < k; ++i) out.push_back(letter_of(s.gen, inv));
  }
  return out;
}

std::string Word::str() const {
  if (syls_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& s : syls_) {
    if (!first) os << ' ';
    first = false;
    os << alpha_->generators()[static_cast<std::size_t>(s.gen)];
    if (s.exp != 1) os << '^' << s.exp;
  }
  return os.str();
}

bool Word::operator<(const Word& b) const {
  const auto& x = syls_;
  const auto& y = b.syls_;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i].gen != y[i].gen) return x[i].gen < y[i].gen;
    if (x[i].exp != y[i].exp) return x[i].exp < y[i].exp;
  }
  return x.size() < y.size();
}

Word multiply(const Word& a, const Word& b) {
  require_same_alphabet(a, b);
  std::vector<Syllable> out = a.syllables();
  for (const auto& s : b.syllables()) push_syllable(out, s.gen, s.exp);
  return Word::from_syllables(a.alphabet() ? a.alphabet() : b.alphabet(), std::move(out));
}

Word invert(const Word& a) {
  std::vector<Syllable> out;
  out.reserve(a.syllables().size());
  for (auto it = a.syllables().rbegin(); it != a.syllables().rend(); ++it)
    out.push_back(Syllable{it->gen, -it->exp});
  return Word::from_syllables(a.alphabet(), std::move(out));
}

Word power(const Word& a, const Int& k) {
  if (k == 0) return Word::identity(a.alphabet());
  Word base = k < 0 ? invert(a) : a;
  Int n = abs(k);
  // a^n = gamma * core^n * gamma^-1 over the cyclic reduction; this keeps
  // the work linear in the syllable count instead of n.
  CyclicReduction cr = cyclic_reduce(base);
  std::vector<Syllable> out = cr.conjugator.syllables();
  const auto& core = cr.reduced.syllables();
  if (!core.empty()) {
    // core is cyclically reduced: front/back generators differ unless it is
    // a single syllable, which we fold into one big exponent.
    if (core.size() == 1) {
      push_syllable(out, core[0].gen, core[0].exp * n);
    } else {
      if (n > Int(kMaxFlattenLetters)) throw Error("power: exponent too large to expand");
      const auto reps = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i < reps; ++i)
        for (const auto& s : core) push_syllable(out, s.gen, s.exp);
    }
  }
  Word gi = invert(cr.conjugator);
  for (const auto& s : gi.syllables()) push_syllable(out, s.gen, s.exp);
  return Word::from_syllables(a.alphabet(), std::move(out));
}

Word commutator(const Word& a, const Word& b) {
  return multiply(multiply(a, b), multiply(invert(a), invert(b)));
}

Word conjugate(const Word& c, const Word& a) {
  return multiply(multiply(c, a), invert(c));
}

CyclicReduction cyclic_reduce(const Word& a) {
  Word w = a;
  Word gamma = Word::identity(a.alphabet());
  for (;;) {
    const auto& s = w.syllables();
    if (s.size() < 2) break;
    if (s.front().gen != s.back().gen) break;
    // w = g^e1 . M . g^e2  ~  M . g^(e1+e2), conjugator g^e1.
    Word head = Word::letter(a.alphabet(), s.front().gen, s.front().exp);
    gamma = multiply(gamma, head);
    w = multiply(multiply(invert(head), w), head);
  }
  return CyclicReduction{std::move(w), std::move(gamma)};
}

std::size_t least_rotation_index(const std::vector<Letter>& s) {
  // Booth's least-rotation algorithm.
  const std::size_t n = s.size();
  if (n == 0) return 0;
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Letter sj = s[j % n];
    long i = f[j - k - 1];
    while (i != -1 && sj != s[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < s[(k + static_cast<std::size_t>(i) + 1) % n]) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != s[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < s[(k + static_cast<std::size_t>(i) + 1) % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k;
}

CyclicCanonical cyclic_canonical(const Word& a) {
  CyclicReduction cr = cyclic_reduce(a);
  std::vector<Letter> flat = cr.reduced.flatten();
  std::size_t j = least_rotation_index(flat);
  std::vector<Letter> rotated(flat.begin() + static_cast<long>(j), flat.end());
  rotated.insert(rotated.end(), flat.begin(), flat.begin() + static_cast<long>(j));
  // reduced = prefix . rest, canonical = rest . prefix = prefix^-1 reduced prefix.
  std::vector<Letter> prefix(flat.begin(), flat.begin() + static_cast<long>(j));
  Word conj = multiply(cr.conjugator, Word::from_letters(a.alphabet(), prefix));
  return CyclicCanonical{CyclicWord(a.alphabet(), std::move(rotated)), std::move(conj)};
}

std::string CyclicWord::str() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (Letter l : letters_) {
    if (!first) os << ' ';
    first = false;
    os << alpha_->generators()[static_cast<std::size_t>(letter_gen(l))];
    if (letter_inverse(l)) os << "^-1";
  }
  return os.str();
}

bool verify_certificate(const ConjugacyCertificate& cert, const Word& left, const Word& right) {
  Word r = cert.sign >= 0 ? right : invert(right);
  return conjugate(cert.conjugator, r) == left;
}

std::optional<ConjugacyCertificate> are_conjugate(const Word& a, const Word& b,
                                                  bool allow_inverse) {
  require_same_alphabet(a, b);
  CyclicCanonical ca = cyclic_canonical(a);
  CyclicCanonical cb = cyclic_canonical(b);
  if (ca.canonical == cb.canonical) {
    ConjugacyCertificate cert{multiply(ca.conjugator, invert(cb.conjugator)), +1};
    return cert;
  }
  if (allow_inverse) {
    CyclicCanonical cbi = cyclic_canonical(invert(b));
    if (ca.canonical == cbi.canonical) {
      ConjugacyCertificate cert{multiply(ca.conjugator, invert(cbi.conjugator)), -1};
      return cert;
    }
  }
  return std::nullopt;
}

PrimitiveRoot primitive_root(const Word& a) {
  if (a.trivial()) return PrimitiveRoot{Word::identity(a.alphabet()), 0};
  CyclicReduction cr = cyclic_reduce(a);
  const auto& syls = cr.reduced.syllables();
  const std::size_t m = syls.size();
  if (m == 1) {
    Word root = Word::letter(a.alphabet(), syls[0].gen, syls[0].exp < 0 ? -1 : 1);
    return PrimitiveRoot{conjugate(cr.conjugator, root), abs(syls[0].exp)};
  }
  // After cyclic reduction the front and back syllables involve distinct
  // generators, so the cyclic RLE equals the linear RLE and every period of
  // the cyclic letter string is a whole number of syllables.
  for (std::size_t d = 1; d <= m / 2; ++d) {
    if (m % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < m && periodic; ++i) periodic = syls[i] == syls[i % d];
    if (!periodic) continue;
    std::vector<Syllable> block(syls.begin(), syls.begin() + static_cast<long>(d));
    Word root = conjugate(cr.conjugator, Word::from_syllables(a.alphabet(), std::move(block)));
    return PrimitiveRoot{std::move(root), Int(m / d)};
  }
  return PrimitiveRoot{a, 1};
}

std::optional<Int> power_of(const Word& m, const Word& base) {
  if (base.trivial()) throw Error("power_of: trivial base");
  if (m.trivial()) return Int(0);
  PrimitiveRoot rm = primitive_root(m);
  PrimitiveRoot rb = primitive_root(base);
  if (rm.root == rb.root) {
    if (rm.exponent % rb.exponent != 0) return std::nullopt;
    return rm.exponent / rb.exponent;
  }
  if (rm.root == invert(rb.root)) {
    if (rm.exponent % rb.exponent != 0) return std::nullopt;
    return -rm.exponent / rb.exponent;
  }
  return std::nullopt;
}

std::vector<Int> exponent_vector(const Word& a) {
  std::vector<Int> v(a.alphabet() ? static_cast<std::size_t>(a.alphabet()->rank()) : 0, Int(0));
  for (const auto& s : a.syllables()) v[static_cast<std::size_t>(s.gen)] += s.exp;
  return v;
}

bool in_commutator_subgroup(const Word& a) {
  for (const auto& c : exponent_vector(a))
    if (c != 0) return false;
  return true;
}

bool verify_genus_expression(const Word& h, const std::vector<std::pair<Word, Word>>& pairs) {
  Word prod = Word::identity(h.alphabet());
  for (const auto& [x, y] : pairs) prod = multiply(prod, commutator(x, y));
  return prod == h;
}

}  // namespace serrelab
