#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace serrelab {

using Int = boost::multiprecision::cpp_int;

/// Flattening a run-length-encoded word beyond this many letters throws;
/// canonical-rotation and root computations never need to cross it for the
/// shipped fixtures, and anything larger is a usage error.
inline constexpr std::size_t kMaxFlattenLetters = 1u << 24;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite ordered generating set of a free group. The generator order is
/// fixed at construction; it defines the letter order a < a^-1 < b < b^-1 ...
/// used by canonical cyclic forms.
class Alphabet {
 public:
  Alphabet(std::string name, std::vector<std::string> generators);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& generators() const { return gens_; }
  int rank() const { return static_cast<int>(gens_.size()); }
  int index_of(const std::string& gen) const;  // -1 if absent

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.name_ == b.name_ && a.gens_ == b.gens_;
  }

 private:
  std::string name_;
  std::vector<std::string> gens_;
};

using AlphabetRef = std::shared_ptr<const Alphabet>;

AlphabetRef make_alphabet(std::string name, std::vector<std::string> gens);

bool same_alphabet(const AlphabetRef& a, const AlphabetRef& b);

struct Syllable {
  int gen = 0;
  Int exp;
  friend bool operator==(const Syllable& a, const Syllable& b) {
    return a.gen == b.gen && a.exp == b.exp;
  }
};

/// Signed letter: code 2*gen for a positive occurrence, 2*gen+1 for its
/// inverse. Comparing codes realizes the a < a^-1 < b < b^-1 order.
using Letter = int;
inline Letter letter_of(int gen, bool inverse) { return 2 * gen + (inverse ? 1 : 0); }
inline int letter_gen(Letter l) { return l / 2; }
inline bool letter_inverse(Letter l) { return (l & 1) != 0; }
inline Letter letter_inv(Letter l) { return l ^ 1; }

/// Freely reduced word over an Alphabet, stored run-length encoded.
/// Immutable after construction; the empty word is the identity.
class Word {
 public:
  Word() = default;
  explicit Word(AlphabetRef alpha) : alpha_(std::move(alpha)) {}
  static Word identity(AlphabetRef alpha) { return Word(std::move(alpha)); }
  static Word from_syllables(AlphabetRef alpha, std::vector<Syllable> syls);
  static Word letter(const AlphabetRef& alpha, int gen, Int exp = 1);
  static Word from_letters(const AlphabetRef& alpha, const std::vector<Letter>& letters);

  const AlphabetRef& alphabet() const { return alpha_; }
  const std::vector<Syllable>& syllables() const { return syls_; }
  bool trivial() const { return syls_.empty(); }
  std::size_t syllable_count() const { return syls_.size(); }
  /// Total letter count (sum of |exponents|).
  Int length() const;

  std::vector<Letter> flatten() const;  // throws past kMaxFlattenLetters

  /// DSL word-expression syntax, e.g. "x y^-2 x^3"; "1" for the identity.
  std::string str() const;

  friend bool operator==(const Word& a, const Word& b) {
    return a.syls_ == b.syls_ && same_alphabet(a.alpha_, b.alpha_);
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  bool operator<(const Word& b) const;  // arbitrary total order, for maps

 private:
  AlphabetRef alpha_;
  std::vector<Syllable> syls_;
};

Word multiply(const Word& a, const Word& b);
Word invert(const Word& a);
Word power(const Word& a, const Int& k);
Word commutator(const Word& a, const Word& b);
/// Conjugate c a c^-1.
Word conjugate(const Word& c, const Word& a);

/// Canonical representative of a conjugacy class: the lexicographically least
/// rotation of the cyclically reduced letter string.
class CyclicWord {
 public:
  CyclicWord() = default;
  CyclicWord(AlphabetRef alpha, std::vector<Letter> canonical)
      : alpha_(std::move(alpha)), letters_(std::move(canonical)) {}

  const AlphabetRef& alphabet() const { return alpha_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  std::string str() const;

  friend bool operator==(const CyclicWord& a, const CyclicWord& b) {
    return a.letters_ == b.letters_ && same_alphabet(a.alpha_, b.alpha_);
  }
  friend bool operator!=(const CyclicWord& a, const CyclicWord& b) { return !(a == b); }

 private:
  AlphabetRef alpha_;
  std::vector<Letter> letters_;
};

struct CyclicCanonical {
  CyclicWord canonical;
  Word conjugator;  // conjugator * canonical * conjugator^-1 == input
};

CyclicCanonical cyclic_canonical(const Word& a);

/// Cyclically reduced form kept as a Word (not rotated to the canonical
/// representative). conjugator * reduced * conjugator^-1 == input.
struct CyclicReduction {
  Word reduced;
  Word conjugator;
};
CyclicReduction cyclic_reduce(const Word& a);

struct ConjugacyCertificate {
  Word conjugator;
  int sign = 1;  // +1: conjugator right conjugator^-1 == left; -1: right inverted
};

bool verify_certificate(const ConjugacyCertificate& cert, const Word& left, const Word& right);

std::optional<ConjugacyCertificate> are_conjugate(const Word& a, const Word& b,
                                                  bool allow_inverse = false);

struct PrimitiveRoot {
  Word root;
  Int exponent;  // root^exponent == input; 0 only for the identity
};
PrimitiveRoot primitive_root(const Word& a);

/// Solves m == base^k; nullopt if m is not a power of base.
/// base must be nontrivial.
std::optional<Int> power_of(const Word& m, const Word& base);

std::vector<Int> exponent_vector(const Word& a);
bool in_commutator_subgroup(const Word& a);

bool verify_genus_expression(const Word& h, const std::vector<std::pair<Word, Word>>& pairs);

/// Index of the least rotation of s under letter-code order (Booth).
std::size_t least_rotation_index(const std::vector<Letter>& s);

}  // namespace serrelab
