#include "treesmith/twistlab.hpp"

#include <algorithm>
#include <stdexcept>

namespace treesmith {

DehnTwist twist_of(const Curve& t) {
  const EdgeRule& rule = t.pres.rules()[0];
  Automorphism base_twist = Automorphism::right_multiplier(
      t.pres.basis(), rule.stable_index, rule.edge_word, "twist");
  Automorphism inv_marking = invert(t.marking);
  DehnTwist tw;
  tw.twistor = marked_edge_word(t);
  tw.automorphism = compose(inv_marking, compose(base_twist, t.marking));
  return tw;
}

Curve act(const Curve& t, const Automorphism& a) {
  if (a.basis() != t.pres.basis()) throw std::invalid_argument("basis mismatch");
  return Curve{t.pres, compose(t.marking, a)};
}

TwoEdgeRefinement act(const TwoEdgeRefinement& y, const Automorphism& a) {
  if (a.basis() != y.pres.basis()) throw std::invalid_argument("basis mismatch");
  return TwoEdgeRefinement{y.pres, compose(y.marking, a)};
}

std::vector<Rational> normalize_vector(const LengthVector& v) {
  std::int64_t mx = 0;
  for (std::int64_t x : v.values) mx = std::max(mx, x);
  if (mx == 0) throw std::domain_error("zero length vector has no projective class");
  std::vector<Rational> out;
  out.reserve(v.values.size());
  for (std::int64_t x : v.values) out.emplace_back(x, mx);
  return out;
}

Rational projective_distance(const LengthVector& u, const LengthVector& v) {
  if (!(u.test_set == v.test_set))
    throw std::invalid_argument("length vectors on different test sets");
  std::vector<Rational> a = normalize_vector(u), b = normalize_vector(v);
  Rational d(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational e = (a[i] - b[i]).abs();
    if (d < e) d = e;
  }
  return d;
}

NeighborhoodSpec neighborhood_of(const Curve& t, const std::vector<ConjClass>& test_set,
                                 const Rational& radius) {
  NeighborhoodSpec u;
  u.test_set = test_set;
  u.center = normalize_vector(length_vector(t, test_set));
  u.radius = radius;
  return u;
}

Rational normalized_distance(const std::vector<Rational>& center, const LengthVector& v) {
  std::vector<Rational> b = normalize_vector(v);
  if (b.size() != center.size()) throw std::invalid_argument("vector size mismatch");
  Rational d(0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    Rational e = (center[i] - b[i]).abs();
    if (d < e) d = e;
  }
  return d;
}

namespace {
bool vector_is_zero(const LengthVector& v) {
  for (std::int64_t x : v.values)
    if (x != 0) return false;
  return true;
}
const Rational kZeroVectorSentinel(2);
}  // namespace

ConvergenceTrace twist_converge(const Curve& s, const DehnTwist& twist,
                                const Curve& target, const std::vector<ConjClass>& test_set,
                                int k_max, const Rational& tol) {
  if (translation_length(s, ConjClass(twist.twistor)) <= 0)
    throw std::invalid_argument("curve does not intersect the twist's curve");
  LengthVector tv = length_vector(target, test_set);
  if (vector_is_zero(tv))
    throw std::invalid_argument("target length vector vanishes on the test set");
  std::vector<Rational> center = normalize_vector(tv);

  ConvergenceTrace trace;
  Curve cur = s;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) cur = act(cur, twist.automorphism);
    LengthVector sv = length_vector(cur, test_set);
    trace.distances.push_back(vector_is_zero(sv) ? kZeroVectorSentinel
                                                 : normalized_distance(center, sv));
  }
  // Least K whose whole tail stays within tolerance.
  int k_found = -1;
  for (int k = k_max; k >= 0; --k) {
    if (trace.distances[static_cast<std::size_t>(k)] <= tol) {
      k_found = k;
    } else {
      break;
    }
  }
  if (k_found >= 0) trace.k_found = k_found;
  return trace;
}

TwistIntoResult twist_into(const Curve& s, const DehnTwist& twist,
                           const NeighborhoodSpec& u, int k_max) {
  if (translation_length(s, ConjClass(twist.twistor)) <= 0)
    throw std::invalid_argument("curve does not intersect the twist's curve");
  TwistIntoResult res{std::nullopt, s, Rational(0)};
  Curve cur = s;
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) cur = act(cur, twist.automorphism);
    LengthVector sv = length_vector(cur, u.test_set);
    Rational d = vector_is_zero(sv) ? kZeroVectorSentinel : normalized_distance(u.center, sv);
    res.final_distance = d;
    if (d <= u.radius) {
      res.power = k;
      res.curve = cur;
      return res;
    }
  }
  return res;
}

std::vector<ConjClass> default_test_classes(const Basis& basis, int max_len, int cap,
                                            std::uint64_t seed) {
  std::vector<ConjClass> all = conjugacy_classes_up_to(basis, max_len);
  if (static_cast<int>(all.size()) <= cap) return all;
  // Keep single letters first so every curve of the standard kind has a
  // positive entry, then a seeded subsample of the rest.
  std::vector<ConjClass> out;
  std::vector<ConjClass> pool;
  for (const ConjClass& c : all) {
    if (c.rep().length() == 1 && !lit_is_inverse(c.rep().at(0))) {
      out.push_back(c);
    } else {
      pool.push_back(c);
    }
  }
  Rng rng(seed);
  while (static_cast<int>(out.size()) < cap && !pool.empty()) {
    std::size_t i = rng.below(pool.size());
    out.push_back(pool[i]);
    pool.erase(pool.begin() + static_cast<long>(i));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ConjClass> convergence_test_classes(const Basis& basis) {
  const int n = basis.rank();
  const int ia = 0, iw = n - 3, it = n - 2, iv = n - 1;
  auto L = [](int idx, bool inv) { return make_lit(idx, inv); };
  auto W = [&](std::vector<Lit> lits) { return ConjClass(reduce(lits)); };
  Lit a = L(ia, false), w = L(iw, false), t = L(it, false), v = L(iv, false);
  std::vector<ConjClass> out;
  out.push_back(W(std::vector<Lit>(24, t)));       // normalization anchor
  out.push_back(W({a, t, t, t, t}));               // keeps the start nonzero
  out.push_back(W({t}));
  out.push_back(W({t, t}));
  out.push_back(W({t, t, t}));
  out.push_back(W({t, t, t, t}));
  out.push_back(W({t, t, t, t, t}));
  out.push_back(W({t, v}));
  out.push_back(W({t, t, v}));
  out.push_back(W({t, v, v}));
  out.push_back(W({t, t, t, v}));
  out.push_back(W({t, w}));
  out.push_back(W({t, t, w}));
  out.push_back(W({t, w, w}));
  out.push_back(W({t, w, t, v}));
  out.push_back(W({t, w, v}));
  out.push_back(W({t, t, w, v}));
  out.push_back(W({w}));
  out.push_back(W({v}));
  out.push_back(W({w, v}));
  return out;
}

}  // namespace treesmith
