#include "serrelab/homs.hpp"

namespace serrelab {

FreeHom::FreeHom(AlphabetRef domain, AlphabetRef codomain, std::vector<Word> images)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
  if (!domain_ || !codomain_) throw Error("FreeHom: null alphabet");
  if (static_cast<int>(images_.size()) != domain_->rank())
    throw Error("FreeHom: expected one image per domain generator");
  for (const Word& w : images_)
    if (!same_alphabet(w.alphabet(), codomain_)) throw Error("FreeHom: image in wrong alphabet");
}

Word FreeHom::apply(const Word& w) const {
  if (!same_alphabet(w.alphabet(), domain_)) throw Error("FreeHom::apply: alphabet mismatch");
  Word out(codomain_);
  for (const Syllable& s : w.syllables())
    out = multiply(out, power(images_[static_cast<std::size_t>(s.gen)], s.exp));
  return out;
}

FreeHom FreeHom::then(const FreeHom& other) const {
  if (!same_alphabet(codomain_, other.domain_)) throw Error("FreeHom::then: alphabet mismatch");
  std::vector<Word> imgs;
  imgs.reserve(images_.size());
  for (const Word& w : images_) imgs.push_back(other.apply(w));
  return FreeHom(domain_, other.codomain_, std::move(imgs));
}

FreeHom FreeHom::identity(const AlphabetRef& alpha) {
  std::vector<Word> imgs;
  for (int g = 0; g < alpha->rank(); ++g) imgs.push_back(Word::letter(alpha, g));
  return FreeHom(alpha, alpha, std::move(imgs));
}

FreeHom compose(const FreeHom& outer, const FreeHom& inner) { return inner.then(outer); }

HomAnalysis analyze(const FreeHom& h) {
  HomAnalysis a;
  bool all_trivial = true;
  for (const Word& w : h.images())
    if (!w.trivial()) all_trivial = false;
  if (all_trivial) {
    a.image_rank = 0;
    a.injective = h.domain()->rank() == 0;
    a.surjective = h.codomain()->rank() == 0;
    return a;
  }
  SubgroupGraph img = SubgroupGraph::fold(h.codomain(), h.images());
  auto ri = img.rank_and_index();
  a.image_rank = ri.rank;
  a.injective = ri.rank == h.domain()->rank();
  a.surjective = ri.index && *ri.index == 1;
  return a;
}

bool preserves_subgroup(const FreeHom& h, const std::vector<Word>& generators) {
  SubgroupGraph sub = SubgroupGraph::fold(h.domain(), generators);
  for (const Word& g : generators)
    if (!sub.contains(h.apply(g))) return false;
  return true;
}

}  // namespace serrelab
