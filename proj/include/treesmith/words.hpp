#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace treesmith {

// A letter of F_N and its inverse are packed into one int: generator i maps
// to 2*i, its inverse to 2*i+1, so lit^1 inverts.
using Lit = int;

inline Lit make_lit(int index, bool inverse) { return 2 * index + (inverse ? 1 : 0); }
inline Lit lit_inverse(Lit l) { return l ^ 1; }
inline int lit_index(Lit l) { return l >> 1; }
inline bool lit_is_inverse(Lit l) { return (l & 1) != 0; }

// Ordered basis of a free group. Letters are distinct lowercase ASCII;
// uppercase in word literals denotes the inverse.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::string letters);

  int rank() const { return static_cast<int>(letters_.size()); }
  char letter(int index) const { return letters_[index]; }
  int index_of(char c) const;  // throws on unknown letter
  const std::string& letters() const { return letters_; }

  friend bool operator==(const Basis& a, const Basis& b) {
    return a.letters_ == b.letters_;
  }
  friend bool operator!=(const Basis& a, const Basis& b) { return !(a == b); }

 private:
  std::string letters_;
};

// Freely reduced word. The empty word is the identity.
class Word {
 public:
  Word() = default;

  const std::vector<Lit>& lits() const { return lits_; }
  int length() const { return static_cast<int>(lits_.size()); }
  bool empty() const { return lits_.empty(); }
  Lit at(int i) const { return lits_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const Word& a, const Word& b) { return a.lits_ == b.lits_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
  friend bool operator<(const Word& a, const Word& b) { return a.lits_ < b.lits_; }

  static Word from_reduced(std::vector<Lit> lits);  // trusts reducedness

 private:
  explicit Word(std::vector<Lit> lits) : lits_(std::move(lits)) {}
  std::vector<Lit> lits_;
  friend Word reduce(const std::vector<Lit>&);
};

// Free reduction of a raw syllable sequence.
Word reduce(const std::vector<Lit>& raw);
Word concat(const Word& a, const Word& b);
Word inverse(const Word& w);
Word power(const Word& w, int n);

// Word literal syntax: lowercase = generator, uppercase = inverse, "" = 1.
Word parse_word(const Basis& basis, const std::string& text);
std::string format_word(const Basis& basis, const Word& w);

// w = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicForm {
  Word core;
  Word conjugator;
};
CyclicForm cyclic_reduce(const Word& w);

bool is_cyclically_reduced(const Word& w);

// Conjugacy class keyed by the lexicographically least rotation of a
// cyclically reduced representative. Comparison is oriented: a class and the
// class of its inverse are distinct.
class ConjClass {
 public:
  ConjClass() = default;
  explicit ConjClass(const Word& w);  // any representative

  const Word& rep() const { return rep_; }

  friend bool operator==(const ConjClass& a, const ConjClass& b) {
    return a.rep_ == b.rep_;
  }
  friend bool operator<(const ConjClass& a, const ConjClass& b) {
    return a.rep_ < b.rep_;
  }

 private:
  Word rep_;  // canonical: cyclically reduced, least rotation
};

// Deterministic splittable generator; std engines are avoided in anything
// serialized so reports do not depend on the standard library build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t n);  // n > 0

 private:
  std::uint64_t state_;
};

// Reduced word of exactly `length` letters over the given sub-alphabet
// (indices into the basis). Deterministic in the generator state.
Word random_word(const Basis& basis, const std::vector<int>& alphabet,
                 int length, Rng& rng);

// All reduced words of length <= n (the n-ball), ordered by length then lex.
std::vector<Word> ball(const Basis& basis, int n);

// Distinct conjugacy classes of cyclically reduced words of length in
// [1, max_len], in deterministic order.
std::vector<ConjClass> conjugacy_classes_up_to(const Basis& basis, int max_len);

}  // namespace treesmith
