#include "treesmith/words.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace treesmith {

Basis::Basis(std::string letters) : letters_(std::move(letters)) {
  if (letters_.size() < 2) throw std::invalid_argument("basis needs rank >= 2");
  for (char c : letters_) {
    if (!std::islower(static_cast<unsigned char>(c)))
      throw std::invalid_argument("basis letters must be lowercase ASCII");
  }
  for (std::size_t i = 0; i < letters_.size(); ++i)
    for (std::size_t j = i + 1; j < letters_.size(); ++j)
      if (letters_[i] == letters_[j])
        throw std::invalid_argument("basis letters must be distinct");
}

int Basis::index_of(char c) const {
  auto pos = letters_.find(c);
  if (pos == std::string::npos)
    throw std::invalid_argument(std::string("unknown letter: ") + c);
  return static_cast<int>(pos);
}

Word Word::from_reduced(std::vector<Lit> lits) { return Word(std::move(lits)); }

Word reduce(const std::vector<Lit>& raw) {
  std::vector<Lit> out;
  out.reserve(raw.size());
  for (Lit l : raw) {
    if (!out.empty() && out.back() == lit_inverse(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word(std::move(out));
}

Word concat(const Word& a, const Word& b) {
  std::vector<Lit> raw = a.lits();
  raw.insert(raw.end(), b.lits().begin(), b.lits().end());
  return reduce(raw);
}

Word inverse(const Word& w) {
  std::vector<Lit> out;
  out.reserve(w.lits().size());
  for (auto it = w.lits().rbegin(); it != w.lits().rend(); ++it)
    out.push_back(lit_inverse(*it));
  return Word::from_reduced(std::move(out));
}

Word power(const Word& w, int n) {
  Word base = n < 0 ? inverse(w) : w;
  int k = n < 0 ? -n : n;
  Word acc;
  for (int i = 0; i < k; ++i) acc = concat(acc, base);
  return acc;
}

Word parse_word(const Basis& basis, const std::string& text) {
  std::vector<Lit> raw;
  raw.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    bool inv = std::isupper(static_cast<unsigned char>(c)) != 0;
    char low = inv ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : c;
    raw.push_back(make_lit(basis.index_of(low), inv));
  }
  return reduce(raw);
}

std::string format_word(const Basis& basis, const Word& w) {
  std::string out;
  out.reserve(w.lits().size());
  for (Lit l : w.lits()) {
    char c = basis.letter(lit_index(l));
    out.push_back(lit_is_inverse(l)
                      ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                      : c);
  }
  return out;
}

CyclicForm cyclic_reduce(const Word& w) {
  const auto& l = w.lits();
  std::size_t i = 0, j = l.size();
  while (j > i + 1 && l[i] == lit_inverse(l[j - 1])) {
    ++i;
    --j;
  }
  CyclicForm f;
  f.core = Word::from_reduced(std::vector<Lit>(l.begin() + i, l.begin() + j));
  f.conjugator = Word::from_reduced(std::vector<Lit>(l.begin(), l.begin() + i));
  return f;
}

bool is_cyclically_reduced(const Word& w) {
  if (w.length() < 2) return true;
  return w.lits().front() != lit_inverse(w.lits().back());
}

namespace {
Word least_rotation(const Word& w) {
  if (w.length() <= 1) return w;
  const auto& l = w.lits();
  std::vector<Lit> best = l;
  std::vector<Lit> cur = l;
  for (int r = 1; r < w.length(); ++r) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return Word::from_reduced(std::move(best));
}
}  // namespace

ConjClass::ConjClass(const Word& w) : rep_(least_rotation(cyclic_reduce(w).core)) {}

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) { return next() % n; }

Word random_word(const Basis& basis, const std::vector<int>& alphabet,
                 int length, Rng& rng) {
  if (alphabet.empty()) throw std::invalid_argument("empty alphabet");
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  for (int idx : alphabet)
    if (idx < 0 || idx >= basis.rank())
      throw std::invalid_argument("alphabet index out of range");
  std::vector<Lit> out;
  out.reserve(static_cast<std::size_t>(length));
  while (static_cast<int>(out.size()) < length) {
    Lit l = make_lit(alphabet[rng.below(alphabet.size())], rng.below(2) == 1);
    if (!out.empty() && out.back() == lit_inverse(l)) continue;
    out.push_back(l);
  }
  return Word::from_reduced(std::move(out));
}

std::vector<Word> ball(const Basis& basis, int n) {
  std::vector<Word> out;
  out.push_back(Word());
  std::vector<Word> layer = {Word()};
  for (int len = 1; len <= n; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (int i = 0; i < basis.rank(); ++i) {
        for (int s = 0; s < 2; ++s) {
          Lit l = make_lit(i, s == 1);
          if (!w.empty() && w.lits().back() == lit_inverse(l)) continue;
          std::vector<Lit> lits = w.lits();
          lits.push_back(l);
          next.push_back(Word::from_reduced(std::move(lits)));
        }
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

std::vector<ConjClass> conjugacy_classes_up_to(const Basis& basis, int max_len) {
  std::vector<ConjClass> out;
  std::vector<Word> layer = {Word()};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (int i = 0; i < basis.rank(); ++i) {
        for (int s = 0; s < 2; ++s) {
          Lit l = make_lit(i, s == 1);
          if (!w.empty() && w.lits().back() == lit_inverse(l)) continue;
          std::vector<Lit> lits = w.lits();
          lits.push_back(l);
          next.push_back(Word::from_reduced(std::move(lits)));
        }
      }
    }
    for (const Word& w : next) {
      if (!is_cyclically_reduced(w)) continue;
      ConjClass c(w);
      if (c.rep() == w) out.push_back(c);  // keep only the canonical rotation
    }
    layer = std::move(next);
  }
  return out;
}

}  // namespace treesmith
