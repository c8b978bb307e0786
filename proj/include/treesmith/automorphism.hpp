#pragma once

#include <string>
#include <vector>

#include "treesmith/words.hpp"

namespace treesmith {

// Automorphism of F_N given by letter images. Every instance carries an
// explicit inverse; the constructor checks that the claimed inverse really
// composes to the identity on the basis (free groups are hopfian, so one
// direction suffices, but both are cheap and both are checked).
class Automorphism {
 public:
  Automorphism() = default;
  Automorphism(Basis basis, std::vector<Word> images,
               std::vector<Word> inverse_images, std::string name);

  static Automorphism identity(const Basis& basis);
  // x_i -> x_{sigma(i)}
  static Automorphism permutation(const Basis& basis, const std::vector<int>& sigma);
  static Automorphism transposition(const Basis& basis, int i, int j);
  // x -> x * m where m is a word not involving the letter of x
  static Automorphism right_multiplier(const Basis& basis, int letter, const Word& m,
                                       const std::string& name);
  static Automorphism letter_inversion(const Basis& basis, int letter);

  const Basis& basis() const { return basis_; }
  const Word& image(int letter) const { return images_[static_cast<std::size_t>(letter)]; }
  const Word& inverse_image(int letter) const {
    return inverse_images_[static_cast<std::size_t>(letter)];
  }
  const std::string& name() const { return name_; }

  Word apply(const Word& w) const;
  Word apply_inverse(const Word& w) const;

 private:
  Basis basis_;
  std::vector<Word> images_;
  std::vector<Word> inverse_images_;
  std::string name_;
};

Automorphism compose(const Automorphism& a, const Automorphism& b);  // a after b
Automorphism invert(const Automorphism& a);
Automorphism auto_power(const Automorphism& a, int n);

}  // namespace treesmith
