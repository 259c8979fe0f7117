#pragma once

#include "serrelab/stallings.hpp"
#include "serrelab/words.hpp"

#include <optional>
#include <vector>

namespace serrelab {

/// Homomorphism between finitely generated free groups, given by the images
/// of the domain generators.
class FreeHom {
 public:
  FreeHom() = default;
  FreeHom(AlphabetRef domain, AlphabetRef codomain, std::vector<Word> images);

  const AlphabetRef& domain() const { return domain_; }
  const AlphabetRef& codomain() const { return codomain_; }
  const std::vector<Word>& images() const { return images_; }

  Word apply(const Word& w) const;

  /// Composition (other after this): domain of this, codomain of other.
  FreeHom then(const FreeHom& other) const;

  static FreeHom identity(const AlphabetRef& alpha);

  friend bool operator==(const FreeHom& a, const FreeHom& b) {
    return same_alphabet(a.domain_, b.domain_) && same_alphabet(a.codomain_, b.codomain_) &&
           a.images_ == b.images_;
  }

 private:
  AlphabetRef domain_;
  AlphabetRef codomain_;
  std::vector<Word> images_;
};

/// outer after inner.
FreeHom compose(const FreeHom& outer, const FreeHom& inner);

struct HomAnalysis {
  bool injective = false;
  bool surjective = false;
  int image_rank = 0;
  // When not injective and the domain and codomain coincide as free groups of
  // equal rank, no kernel witness is produced; callers detect injectivity
  // failure through the image rank.
};

/// Injectivity by the image rank criterion (a rank-preserving endomorphism of
/// a free group is injective), surjectivity by generator membership in the
/// image subgroup.
HomAnalysis analyze(const FreeHom& h);

/// Whether h maps the subgroup generated by the given words into itself.
bool preserves_subgroup(const FreeHom& h, const std::vector<Word>& generators);

}  // namespace serrelab
