#include "treesmith/automorphism.hpp"

#include <stdexcept>

namespace treesmith {

namespace {
Word substitute(const std::vector<Word>& images, const Word& w) {
  std::vector<Lit> raw;
  for (Lit l : w.lits()) {
    const Word& im = images[static_cast<std::size_t>(lit_index(l))];
    if (!lit_is_inverse(l)) {
      raw.insert(raw.end(), im.lits().begin(), im.lits().end());
    } else {
      for (auto it = im.lits().rbegin(); it != im.lits().rend(); ++it)
        raw.push_back(lit_inverse(*it));
    }
  }
  return reduce(raw);
}
}  // namespace

Automorphism::Automorphism(Basis basis, std::vector<Word> images,
                           std::vector<Word> inverse_images, std::string name)
    : basis_(std::move(basis)),
      images_(std::move(images)),
      inverse_images_(std::move(inverse_images)),
      name_(std::move(name)) {
  const auto n = static_cast<std::size_t>(basis_.rank());
  if (images_.size() != n || inverse_images_.size() != n)
    throw std::invalid_argument("automorphism needs one image per basis letter");
  for (int i = 0; i < basis_.rank(); ++i) {
    Word x = Word::from_reduced({make_lit(i, false)});
    if (substitute(images_, substitute(inverse_images_, x)) != x ||
        substitute(inverse_images_, substitute(images_, x)) != x)
      throw std::invalid_argument("claimed inverse fails on letter " +
                                  std::string(1, basis_.letter(i)));
  }
}

Automorphism Automorphism::identity(const Basis& basis) {
  std::vector<Word> im;
  for (int i = 0; i < basis.rank(); ++i)
    im.push_back(Word::from_reduced({make_lit(i, false)}));
  return Automorphism(basis, im, im, "id");
}

Automorphism Automorphism::permutation(const Basis& basis, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != basis.rank())
    throw std::invalid_argument("permutation size mismatch");
  std::vector<Word> im(sigma.size()), inv(sigma.size());
  for (int i = 0; i < basis.rank(); ++i) {
    im[static_cast<std::size_t>(i)] =
        Word::from_reduced({make_lit(sigma[static_cast<std::size_t>(i)], false)});
    inv[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] =
        Word::from_reduced({make_lit(i, false)});
  }
  return Automorphism(basis, im, inv, "perm");
}

Automorphism Automorphism::transposition(const Basis& basis, int i, int j) {
  std::vector<int> sigma;
  for (int k = 0; k < basis.rank(); ++k) sigma.push_back(k);
  std::swap(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
  return permutation(basis, sigma);
}

Automorphism Automorphism::right_multiplier(const Basis& basis, int letter,
                                            const Word& m, const std::string& name) {
  for (Lit l : m.lits())
    if (lit_index(l) == letter)
      throw std::invalid_argument("multiplier must avoid the moved letter");
  std::vector<Word> im, inv;
  for (int i = 0; i < basis.rank(); ++i) {
    Word x = Word::from_reduced({make_lit(i, false)});
    if (i == letter) {
      im.push_back(concat(x, m));
      inv.push_back(concat(x, inverse(m)));
    } else {
      im.push_back(x);
      inv.push_back(x);
    }
  }
  return Automorphism(basis, im, inv, name);
}

Automorphism Automorphism::letter_inversion(const Basis& basis, int letter) {
  std::vector<Word> im;
  for (int i = 0; i < basis.rank(); ++i)
    im.push_back(Word::from_reduced({make_lit(i, i == letter)}));
  return Automorphism(basis, im, im, "inv-letter");
}

Word Automorphism::apply(const Word& w) const { return substitute(images_, w); }
Word Automorphism::apply_inverse(const Word& w) const {
  return substitute(inverse_images_, w);
}

Automorphism compose(const Automorphism& a, const Automorphism& b) {
  if (a.basis() != b.basis()) throw std::invalid_argument("basis mismatch");
  std::vector<Word> im, inv;
  for (int i = 0; i < a.basis().rank(); ++i) {
    im.push_back(a.apply(b.image(i)));
    inv.push_back(b.apply_inverse(a.inverse_image(i)));
  }
  return Automorphism(a.basis(), im, inv, a.name() + "*" + b.name());
}

Automorphism invert(const Automorphism& a) {
  std::vector<Word> im, inv;
  for (int i = 0; i < a.basis().rank(); ++i) {
    im.push_back(a.inverse_image(i));
    inv.push_back(a.image(i));
  }
  return Automorphism(a.basis(), im, inv, a.name() + "^-1");
}

Automorphism auto_power(const Automorphism& a, int n) {
  Automorphism base = n < 0 ? invert(a) : a;
  int k = n < 0 ? -n : n;
  Automorphism acc = Automorphism::identity(a.basis());
  for (int i = 0; i < k; ++i) acc = compose(acc, base);
  return acc;
}

}  // namespace treesmith
