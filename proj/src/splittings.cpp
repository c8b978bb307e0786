#include "treesmith/splittings.hpp"

#include <algorithm>
#include <stdexcept>

#include "treesmith/whitehead.hpp"

namespace treesmith {

ExtWord ext_reduce(const ExtWord& raw) {
  ExtWord out;
  out.reserve(raw.size());
  for (int l : raw) {
    if (!out.empty() && out.back() == (l ^ 1)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

ExtWord ext_concat(const ExtWord& a, const ExtWord& b) {
  ExtWord raw = a;
  raw.insert(raw.end(), b.begin(), b.end());
  return ext_reduce(raw);
}

ExtWord ext_inverse(const ExtWord& a) {
  ExtWord out;
  out.reserve(a.size());
  for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back(*it ^ 1);
  return out;
}

SplittingPresentation::SplittingPresentation(Basis basis, std::vector<EdgeRule> rules)
    : basis_(std::move(basis)), rules_(std::move(rules)) {
  for (const EdgeRule& r : rules_) {
    if (r.stable_index < 0 || r.stable_index >= basis_.rank())
      throw std::invalid_argument("stable letter out of range");
    if (r.edge_word.empty())
      throw std::invalid_argument("edge word must be nontrivial");
    if (!is_cyclically_reduced(r.edge_word))
      throw std::invalid_argument("edge word must be cyclically reduced");
    for (Lit l : r.edge_word.lits())
      for (const EdgeRule& s : rules_)
        if (lit_index(l) == s.stable_index)
          throw std::invalid_argument("edge word must avoid stable letters");
  }
}

bool SplittingPresentation::is_stable_lit(int lit) const {
  return rule_of_stable(lit) >= 0;
}

int SplittingPresentation::rule_of_stable(int lit) const {
  if (lit >= 2 * basis_.rank()) return -1;
  for (std::size_t i = 0; i < rules_.size(); ++i)
    if (lit_index(lit) == rules_[i].stable_index) return static_cast<int>(i);
  return -1;
}

ExtWord SplittingPresentation::to_ext(const Word& w) const {
  ExtWord e;
  e.reserve(w.lits().size());
  for (Lit l : w.lits()) e.push_back(l);
  return e;
}

Word SplittingPresentation::ext_to_base(const ExtWord& e) const {
  std::vector<Lit> raw;
  for (int l : e) {
    if (!is_formal_lit(l)) {
      raw.push_back(l);
      continue;
    }
    int rule = (l - 2 * basis_.rank()) / 2;
    bool inv = (l & 1) != 0;
    const EdgeRule& r = rules_[static_cast<std::size_t>(rule)];
    Lit s = make_lit(r.stable_index, false);
    // formal letter = s^-1 w s
    Word w = inv ? inverse(r.edge_word) : r.edge_word;
    raw.push_back(lit_inverse(s));
    raw.insert(raw.end(), w.lits().begin(), w.lits().end());
    raw.push_back(s);
  }
  return reduce(raw);
}

namespace {

// u == w^k for the reduced spelling of a cyclically reduced w? Returns
// success and k (0 only for empty u).
bool match_power(const ExtWord& u, const ExtWord& w, int* k_out) {
  if (u.empty()) {
    *k_out = 0;
    return true;
  }
  if (w.empty() || u.size() % w.size() != 0) return false;
  std::size_t k = u.size() / w.size();
  ExtWord wi = ext_inverse(w);
  const ExtWord* pat = nullptr;
  int sign = 0;
  if (std::equal(w.begin(), w.end(), u.begin())) {
    pat = &w;
    sign = 1;
  } else if (std::equal(wi.begin(), wi.end(), u.begin())) {
    pat = &wi;
    sign = -1;
  } else {
    return false;
  }
  for (std::size_t i = 0; i < k; ++i)
    if (!std::equal(pat->begin(), pat->end(), u.begin() + static_cast<long>(i * w.size())))
      return false;
  *k_out = sign * static_cast<int>(k);
  return true;
}

}  // namespace

ExtWord SplittingPresentation::britton_linear(const ExtWord& e) const {
  ExtWord cur = ext_reduce(e);
  bool changed = true;
  while (changed) {
    changed = false;
    // stable-letter positions
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (is_stable_lit(cur[i])) pos.push_back(i);
    for (std::size_t pi = 0; pi + 1 < pos.size() && !changed; ++pi) {
      std::size_t i = pos[pi], j = pos[pi + 1];
      int li = cur[i], lj = cur[j];
      int ri = rule_of_stable(li);
      if (ri != rule_of_stable(lj)) continue;
      const EdgeRule& rule = rules_[static_cast<std::size_t>(ri)];
      ExtWord u(cur.begin() + static_cast<long>(i + 1), cur.begin() + static_cast<long>(j));
      int k = 0;
      ExtWord repl;
      if (lit_is_inverse(li) && !lit_is_inverse(lj)) {
        // s^-1 u s with u = w^k  ->  W^k
        if (!match_power(u, to_ext(rule.edge_word), &k)) continue;
        for (int c = 0; c < (k < 0 ? -k : k); ++c)
          repl.push_back(formal_lit(ri, k < 0));
      } else if (!lit_is_inverse(li) && lit_is_inverse(lj)) {
        // s u s^-1 with u = W^k  ->  w^k
        ExtWord formal = {formal_lit(ri, false)};
        if (!match_power(u, formal, &k)) continue;
        Word wk = power(rule.edge_word, k);
        repl = to_ext(wk);
      } else {
        continue;
      }
      ExtWord next(cur.begin(), cur.begin() + static_cast<long>(i));
      next.insert(next.end(), repl.begin(), repl.end());
      next.insert(next.end(), cur.begin() + static_cast<long>(j + 1), cur.end());
      cur = ext_reduce(next);
      changed = true;
    }
  }
  return cur;
}

std::int64_t SplittingPresentation::stable_count(const ExtWord& e) const {
  std::int64_t c = 0;
  for (int l : e)
    if (is_stable_lit(l)) ++c;
  return c;
}

namespace {
ExtWord cyclic_ext_reduce(const ExtWord& e) {
  ExtWord cur = e;
  while (cur.size() >= 2 && cur.front() == (cur.back() ^ 1)) {
    cur.erase(cur.begin());
    cur.pop_back();
  }
  return cur;
}
}  // namespace

std::int64_t SplittingPresentation::cyclic_reduced_count(const Word& w) const {
  ExtWord cur = britton_linear(w);
  for (;;) {
    cur = cyclic_ext_reduce(ext_reduce(cur));
    std::int64_t count = stable_count(cur);
    if (count == 0) return 0;
    bool improved = false;
    for (std::size_t i = 0; i < cur.size() && !improved; ++i) {
      if (!is_stable_lit(cur[i])) continue;
      // rotate so the word starts right after this stable letter
      ExtWord rot(cur.begin() + static_cast<long>(i + 1), cur.end());
      rot.insert(rot.end(), cur.begin(), cur.begin() + static_cast<long>(i + 1));
      ExtWord red = britton_linear(rot);
      if (stable_count(red) < count) {
        cur = red;
        improved = true;
      }
    }
    if (!improved) return count;
  }
}

bool SplittingPresentation::in_vertex_group(const Word& w) const {
  return stable_count(britton_linear(w)) == 0;
}

namespace {
Basis standard_basis(int rank) {
  if (rank < 4) throw std::invalid_argument("standard pair needs rank >= 4");
  static const std::string pool = "abcdefghijklmnopqrsu";
  if (rank - 3 > static_cast<int>(pool.size()))
    throw std::invalid_argument("rank too large for letter pool");
  std::string letters = pool.substr(0, static_cast<std::size_t>(rank - 3));
  letters += "wtv";
  return Basis(letters);
}
}  // namespace

StandardPair standard_pair(int rank) {
  Basis b = standard_basis(rank);
  return standard_pair(rank, Word::from_reduced({make_lit(0, false)}));
}

StandardPair standard_pair(int rank, const Word& edge_word) {
  Basis b = standard_basis(rank);
  const int iw = b.rank() - 3, it = b.rank() - 2, iv = b.rank() - 1;
  for (Lit l : edge_word.lits())
    if (lit_index(l) >= iw)
      throw std::invalid_argument("edge word must lie in the a-letters");
  if (!is_primitive(b, edge_word))
    throw std::invalid_argument("edge word must be primitive");
  StandardPair sp;
  sp.basis = b;
  Automorphism id = Automorphism::identity(b);
  EdgeRule rt{it, edge_word};
  EdgeRule rv{iv, Word::from_reduced({make_lit(iw, false)})};
  sp.t_curve = Curve{SplittingPresentation(b, {rt}), id};
  sp.t_prime = Curve{SplittingPresentation(b, {rv}), id};
  sp.refinement = TwoEdgeRefinement{SplittingPresentation(b, {rt, rv}), id};
  return sp;
}

std::int64_t translation_length(const Curve& c, const ConjClass& g) {
  return c.pres.cyclic_reduced_count(c.marking.apply(g.rep()));
}

std::int64_t translation_length(const TwoEdgeRefinement& y, const ConjClass& g) {
  return y.pres.cyclic_reduced_count(y.marking.apply(g.rep()));
}

LengthVector length_vector(const Curve& c, const std::vector<ConjClass>& test_set) {
  if (test_set.empty()) throw std::invalid_argument("empty test set");
  LengthVector v;
  v.test_set = test_set;
  v.values.reserve(test_set.size());
  for (const ConjClass& g : test_set) v.values.push_back(translation_length(c, g));
  return v;
}

Curve collapse(const TwoEdgeRefinement& y, int which) {
  if (which != 1 && which != 2) throw std::invalid_argument("collapse index must be 1 or 2");
  EdgeRule rule = y.pres.rules()[static_cast<std::size_t>(which - 1)];
  return Curve{SplittingPresentation(y.pres.basis(), {rule}), y.marking};
}

DisjointnessCertificate disjointness_certificate(const Curve& t, const Curve& tp,
                                                 const TwoEdgeRefinement& y,
                                                 const std::vector<ConjClass>& test) {
  DisjointnessCertificate cert;
  cert.pass = true;
  for (const ConjClass& g : test) {
    std::int64_t r = translation_length(y, g) - translation_length(t, g) -
                     translation_length(tp, g);
    cert.residuals.push_back(r);
    if (r != 0) cert.pass = false;
  }
  return cert;
}

std::int64_t counting_current_intersection(const Curve& c, const ConjClass& g) {
  return translation_length(c, g);
}

Word marked_edge_word(const Curve& c) {
  return c.marking.apply_inverse(c.pres.rules()[0].edge_word);
}

Word marked_stable_conjugate(const Curve& c) {
  const EdgeRule& r = c.pres.rules()[0];
  Lit s = make_lit(r.stable_index, false);
  std::vector<Lit> raw;
  raw.push_back(lit_inverse(s));
  raw.insert(raw.end(), r.edge_word.lits().begin(), r.edge_word.lits().end());
  raw.push_back(s);
  return c.marking.apply_inverse(reduce(raw));
}

}  // namespace treesmith
