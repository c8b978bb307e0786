#include "treesmith/whitehead.hpp"

#include <stdexcept>

namespace treesmith {

namespace {
long long pow4(std::size_t e) {
  long long r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= 4;
  return r;
}
}  // namespace

std::vector<Automorphism> whitehead_automorphisms(const Basis& basis) {
  const int n = basis.rank();
  std::vector<Automorphism> out;
  for (int mi = 0; mi < n; ++mi) {
    for (int ms = 0; ms < 2; ++ms) {
      Lit m = make_lit(mi, ms == 1);
      Word wm = Word::from_reduced({m});
      Word wmi = Word::from_reduced({lit_inverse(m)});
      // One base-4 digit per generator other than the multiplier's.
      std::vector<int> others;
      for (int i = 0; i < n; ++i)
        if (i != mi) others.push_back(i);
      const int k = static_cast<int>(others.size());
      long long total = 1;
      for (int i = 0; i < k; ++i) total *= 4;
      for (long long code = 1; code < total; ++code) {  // code 0 is the identity
        std::vector<Word> im, inv;
        long long c = code;
        std::size_t oi = 0;
        for (int i = 0; i < n; ++i) {
          Word x = Word::from_reduced({make_lit(i, false)});
          if (i == mi) {
            im.push_back(x);
            inv.push_back(x);
            continue;
          }
          int choice = static_cast<int>((c / pow4(oi)) % 4);
          ++oi;
          switch (choice) {
            case 0:
              im.push_back(x);
              inv.push_back(x);
              break;
            case 1:  // y -> y m
              im.push_back(concat(x, wm));
              inv.push_back(concat(x, wmi));
              break;
            case 2:  // y -> m^-1 y
              im.push_back(concat(wmi, x));
              inv.push_back(concat(wm, x));
              break;
            default:  // y -> m^-1 y m
              im.push_back(concat(concat(wmi, x), wm));
              inv.push_back(concat(concat(wm, x), wmi));
              break;
          }
        }
        out.emplace_back(basis, im, inv, "wh");
      }
    }
  }
  return out;
}

int cyclic_length(const Word& w) { return cyclic_reduce(w).core.length(); }

bool is_primitive(const Basis& basis, const Word& w) {
  return is_primitive(basis, ConjClass(w));
}

bool is_primitive(const Basis& basis, const ConjClass& c) {
  if (c.rep().empty())
    throw std::invalid_argument("primitivity is undefined for the identity");
  static thread_local std::vector<Automorphism> cache;
  static thread_local Basis cache_basis;
  if (cache.empty() || cache_basis != basis) {
    cache = whitehead_automorphisms(basis);
    cache_basis = basis;
  }
  Word w = c.rep();
  for (;;) {
    int len = cyclic_length(w);
    if (len == 1) return true;
    bool improved = false;
    for (const Automorphism& a : cache) {
      Word img = cyclic_reduce(a.apply(w)).core;
      if (img.length() < len) {
        w = img;
        improved = true;
        break;
      }
    }
    if (!improved) return false;
  }
}

}  // namespace treesmith
