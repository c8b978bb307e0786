#pragma once

#include <optional>
#include <vector>

#include "treesmith/rational.hpp"
#include "treesmith/splittings.hpp"

namespace treesmith {

// Dehn twist of a curve: on the base splitting it sends the stable letter s
// to s*w and fixes everything else; for a marked curve the twist is the
// marking-conjugate, so that twisting the curve by its own twist leaves its
// length vector fixed.
struct DehnTwist {
  Word twistor;  // edge word of the source, pulled through the marking
  Automorphism automorphism;
};

DehnTwist twist_of(const Curve& t);

// Right action on curves: lengths of act(T, a) are lengths of T at a-images.
Curve act(const Curve& t, const Automorphism& a);
TwoEdgeRefinement act(const TwoEdgeRefinement& y, const Automorphism& a);

// Sup distance between max-normalized length vectors; zero iff proportional.
Rational projective_distance(const LengthVector& u, const LengthVector& v);

struct NeighborhoodSpec {
  std::vector<ConjClass> test_set;
  std::vector<Rational> center;  // normalized, max entry 1
  Rational radius;
};
NeighborhoodSpec neighborhood_of(const Curve& t, const std::vector<ConjClass>& test_set,
                                 const Rational& radius);
std::vector<Rational> normalize_vector(const LengthVector& v);
Rational normalized_distance(const std::vector<Rational>& center, const LengthVector& v);

// Distance trace of act(S, twist^k) against the target, k = 0..k_max.
// Iterates whose vector vanishes on the test set are recorded with the
// sentinel distance 2 (any true normalized distance is at most 1).
struct ConvergenceTrace {
  std::vector<Rational> distances;           // index k
  std::optional<int> k_found;                // least K with tail below tol
};
ConvergenceTrace twist_converge(const Curve& s, const DehnTwist& twist,
                                const Curve& target, const std::vector<ConjClass>& test_set,
                                int k_max, const Rational& tol);

struct TwistIntoResult {
  std::optional<int> power;  // least k landing inside the ball
  Curve curve;               // the twisted curve (input curve on failure)
  Rational final_distance;
};
TwistIntoResult twist_into(const Curve& s, const DehnTwist& twist,
                           const NeighborhoodSpec& u, int k_max);

// Deterministic test sets. The default set: conjugacy classes of length up
// to max_len, seeded subsample when above the cap, always containing the
// stable-letter classes so centers normalize.
std::vector<ConjClass> default_test_classes(const Basis& basis, int max_len, int cap,
                                            std::uint64_t seed);

// Twenty-class set for the twist convergence experiment over the standard
// basis: classes in the span of the letters fixed by the basis swap, plus a
// long stable-letter power that pins the normalization and one mixed class
// that keeps the initial vector nonzero. Distances along the twist iteration
// are exactly 1/(24k) on this set.
std::vector<ConjClass> convergence_test_classes(const Basis& basis);

}  // namespace treesmith
